"""Group-aware welfare: per-group gains, budget splits, and tie-breaking.

Agents carry group ids; targets are never partitioned. A group's gain under
a revealed set is the welfare gain summed over that group's agents only,
which equals the welfare gain of the subgraph induced by those agents
(targets retained), so per-group runs reuse the reveal algorithms on
induced subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import Optional

from .errors import (
    BudgetBelowGroupCount,
    ExactArithmeticRequired,
    NoGroups,
)
from .graph import BipartiteGraph
from .reveal import (
    BOTH,
    RevealResult,
    bruteforce_reveal,
    candidates_for,
    greedy_reveal,
)
from .welfare import EXACT, PROXY, TRUE, Evaluator, RevealLike, RevealSet, WelfareValue, _order_of

GREEDY = "greedy"
PROXY_GREEDY = "proxy-greedy"


@dataclass(frozen=True)
class GroupOutcome:
    """Per-group result of a split-budget run."""

    group: int
    solution: RevealSet
    gain: WelfareValue
    opt_reference: Optional[WelfareValue] = None


@dataclass(frozen=True)
class GroupReport:
    """Outcomes for every group, ordered by group id."""

    budget_per_group: int
    entries: tuple[GroupOutcome, ...]

    def entry(self, group: int) -> GroupOutcome:
        return self.entries[group]


def _require_groups(graph: BipartiteGraph) -> int:
    if graph.groups is None or graph.num_groups == 0:
        raise NoGroups("graph carries no group assignment")
    return graph.num_groups


def group_gain(
    graph: BipartiteGraph,
    reveal: RevealLike,
    group: int,
    backend: str = EXACT,
) -> WelfareValue:
    """Welfare gain of ``reveal`` summed over the agents of ``group`` only."""
    _require_groups(graph)
    order = _order_of(reveal)
    revealed = Evaluator(graph, TRUE, backend, order)
    baseline = Evaluator(graph, TRUE, backend)
    members = graph.group_members(group)
    total = sum(revealed.mass(x) for x in members)
    base = sum(baseline.mass(x) for x in members)
    return total - base


def per_group_reveal(
    graph: BipartiteGraph,
    budget: int,
    algorithm: str = GREEDY,
    mode: str = BOTH,
    backend: str = EXACT,
    opt_budget: Optional[int] = None,
) -> GroupReport:
    """Run the chosen algorithm per group at budget ``ceil(K / w)``.

    Each group's run sees only that group's agents (all targets stay
    visible). When ``opt_budget`` is given, each entry also carries the
    group's bruteforce optimum at that budget as a reference.
    """
    w = _require_groups(graph)
    if budget < w:
        raise BudgetBelowGroupCount(f"budget {budget} < group count {w}")
    if algorithm not in (GREEDY, PROXY_GREEDY):
        raise ValueError(f"unknown per-group algorithm {algorithm!r}")
    per_budget = ceil(budget / w)
    objective = TRUE if algorithm == GREEDY else PROXY
    entries = []
    for a in range(w):
        sub = graph.induced(graph.group_members(a))
        run = greedy_reveal(sub, mode, per_budget, objective=objective, backend=backend)
        gain = run.welfare - Evaluator(sub, TRUE, backend).value()
        reference = (
            group_opt(graph, a, opt_budget, mode=mode, backend=backend)
            if opt_budget is not None
            else None
        )
        entries.append(GroupOutcome(a, run.solution, gain, reference))
    return GroupReport(per_budget, tuple(entries))


def group_opt(
    graph: BipartiteGraph,
    group: int,
    budget: int,
    mode: str = BOTH,
    backend: str = EXACT,
) -> WelfareValue:
    """Best achievable gain for ``group`` alone with ``budget`` reveals.

    Exhaustive over candidate subsets, with the same desk-scale guard as
    bruteforce search.
    """
    _require_groups(graph)
    sub = graph.induced(graph.group_members(group))
    best = bruteforce_reveal(sub, mode, budget, backend=backend)
    return best.welfare - Evaluator(sub, TRUE, backend).value()


def prioritized_greedy(
    graph: BipartiteGraph,
    budget: int,
    priority_group: int,
    mode: str = BOTH,
    backend: str = EXACT,
) -> RevealResult:
    """Classic greedy whose exact ties favor the prioritized group.

    When several targets share the maximum total marginal gain, the one
    with the largest marginal gain restricted to ``priority_group`` wins;
    remaining ties fall back to the smallest target index. Tie detection
    requires exact arithmetic, so the float backend is refused.
    """
    w = _require_groups(graph)
    if backend != EXACT:
        raise ExactArithmeticRequired("prioritized ties need the exact backend")
    if not 0 <= priority_group < w:
        raise NoGroups(f"group {priority_group} outside [0, {w})")
    if budget < 0:
        raise ValueError(f"budget {budget} < 0")
    mask = [graph.groups[x] == priority_group for x in range(graph.n)]
    ev = Evaluator(graph, TRUE, backend)
    chosen: list[int] = []
    trace = []
    pool = list(candidates_for(graph, mode))
    for _ in range(budget):
        best_t = None
        best_gain = None
        best_priority = None
        for t in pool:
            gain = ev.marginal_raw(t)
            if best_gain is None or gain > best_gain:
                best_t, best_gain = t, gain
                best_priority = ev.marginal_raw(t, agent_mask=mask)
            elif gain == best_gain:
                priority = ev.marginal_raw(t, agent_mask=mask)
                if priority > best_priority:
                    best_t, best_priority = t, priority
        if best_t is None or best_gain <= 0:
            break
        ev.add(best_t)
        chosen.append(best_t)
        pool.remove(best_t)
        trace.append((best_t, ev.to_value(best_gain)))
    return RevealResult(RevealSet(tuple(chosen)), ev.value(), None, tuple(trace))
