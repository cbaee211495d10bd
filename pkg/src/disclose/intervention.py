"""Targeted interventions: directly connect high-risk agents to a positive
target before or after the budgeted greedy reveal.

An intervened agent counts as mass exactly 1 (an implicit edge to a fresh
positive target; the graph itself is not modified). High-risk selection
sorts agents by current mass and takes the lowest; ties break toward the
smaller agent index. Gains are always measured against the plain greedy
run on the full graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetNegative
from .graph import POSITIVE_LABEL, BipartiteGraph
from .reveal import BOTH, greedy_reveal
from .welfare import EXACT, TRUE, Evaluator, RevealSet, WelfareValue


@dataclass(frozen=True)
class InterventionResult:
    revealed: RevealSet
    intervened_agents: tuple[int, ...]
    total_welfare: WelfareValue
    baseline_welfare: WelfareValue
    gain: WelfareValue


def _effective_budget(graph: BipartiteGraph, budget: int, masses) -> int:
    if not any(label == POSITIVE_LABEL for label in graph.labels):
        return 0
    one = 1
    liftable = sum(1 for q in masses if q < one)
    return min(budget, liftable)


def _high_risk(masses, count: int) -> tuple[int, ...]:
    ranked = sorted(range(len(masses)), key=lambda x: (masses[x], x))
    return tuple(sorted(ranked[:count]))


def pre_reveal_intervention(
    graph: BipartiteGraph,
    reveal_budget: int,
    intervene_budget: int,
    backend: str = EXACT,
) -> InterventionResult:
    """Remove the lowest-mass agents first, then run greedy on the rest.

    Total welfare is the greedy welfare on the reduced graph plus one unit
    per intervened agent. The baseline is greedy on the full graph.
    """
    if reveal_budget < 0 or intervene_budget < 0:
        raise BudgetNegative("budgets must be >= 0")
    baseline = greedy_reveal(graph, BOTH, reveal_budget, backend=backend)
    empty = Evaluator(graph, TRUE, backend)
    masses = [empty.mass(x) for x in range(graph.n)]
    lifted = _effective_budget(graph, intervene_budget, masses)
    high_risk = _high_risk(masses, lifted)
    removed = set(high_risk)
    reduced = graph.induced(x for x in range(graph.n) if x not in removed)
    run = greedy_reveal(reduced, BOTH, reveal_budget, backend=backend)
    total = run.welfare + lifted
    return InterventionResult(
        revealed=run.solution,
        intervened_agents=high_risk,
        total_welfare=total,
        baseline_welfare=baseline.welfare,
        gain=total - baseline.welfare,
    )


def post_reveal_intervention(
    graph: BipartiteGraph,
    reveal_budget: int,
    intervene_budget: int,
    backend: str = EXACT,
) -> InterventionResult:
    """Run greedy on the full graph, then lift the lowest-mass agents to 1."""
    if reveal_budget < 0 or intervene_budget < 0:
        raise BudgetNegative("budgets must be >= 0")
    run = greedy_reveal(graph, BOTH, reveal_budget, backend=backend)
    revealed = Evaluator(graph, TRUE, backend, run.solution)
    masses = [revealed.mass(x) for x in range(graph.n)]
    lifted = _effective_budget(graph, intervene_budget, masses)
    high_risk = _high_risk(masses, lifted)
    total = run.welfare + sum(1 - masses[x] for x in high_risk)
    return InterventionResult(
        revealed=run.solution,
        intervened_agents=high_risk,
        total_welfare=total,
        baseline_welfare=run.welfare,
        gain=total - run.welfare,
    )


def intervention_gains(
    graph: BipartiteGraph,
    reveal_budget: int,
    intervene_budget: int,
    backend: str = EXACT,
) -> tuple[WelfareValue, WelfareValue]:
    """(pre-reveal gain, post-reveal gain) against the shared greedy baseline."""
    pre = pre_reveal_intervention(graph, reveal_budget, intervene_budget, backend)
    post = post_reveal_intervention(graph, reveal_budget, intervene_budget, backend)
    return pre.gain, post.gain
