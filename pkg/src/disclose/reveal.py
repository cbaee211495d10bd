"""Budgeted target-reveal algorithms.

All algorithms share the same conventions: candidate targets are restricted
by a mode (positive-only, negative-only, or both), at most ``budget``
targets are added beyond any initial set, ties in marginal gain are broken
toward the smallest target index, and a step with zero best gain stops the
search. Subset enumeration (bruteforce, lookahead) walks subsets in
ascending size then lexicographic order and keeps strict improvements only,
so equal-welfare ties resolve to the smallest, lexicographically first set.

Reported welfare is always the true social welfare of the returned set,
even when the selection objective is the proxy function.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import comb
from typing import Optional

from .errors import BudgetNegative, DepthOutOfRange, SearchSpaceTooLarge
from .graph import POSITIVE_LABEL, BipartiteGraph
from .welfare import (
    EXACT,
    PROXY,
    TRUE,
    Evaluator,
    RevealLike,
    RevealSet,
    WelfareValue,
    _order_of,
)

POSITIVE = "positive"
NEGATIVE = "negative"
BOTH = "both"

GREEDY_INNER = "greedy"
RANDOM_INNER = "random"

SUBSET_GUARD = 10**7


def candidates_for(graph: BipartiteGraph, mode: str) -> tuple[int, ...]:
    """Targets revealable under the given candidate mode, ascending."""
    if mode == POSITIVE:
        return graph.positive_targets
    if mode == NEGATIVE:
        return graph.negative_targets
    if mode == BOTH:
        return tuple(range(graph.m))
    raise ValueError(f"unknown candidate mode {mode!r}")


@dataclass(frozen=True)
class RevealResult:
    """Outcome of one reveal run.

    ``welfare`` is the true social welfare of ``solution``; ``proxy_welfare``
    is populated only when the proxy objective drove the selection. The
    trace lists (target, marginal gain) per addition, in insertion order,
    with gains measured under the objective that made the choice.
    """

    solution: RevealSet
    welfare: WelfareValue
    proxy_welfare: Optional[WelfareValue] = None
    trace: tuple[tuple[int, WelfareValue], ...] = ()


def _guarded_subset_count(pool_size: int, max_size: int) -> int:
    total = sum(comb(pool_size, s) for s in range(min(pool_size, max_size) + 1))
    if total > SUBSET_GUARD:
        raise SearchSpaceTooLarge(
            f"{total} candidate subsets exceed the {SUBSET_GUARD} guard"
        )
    return total


def _best_subset(graph: BipartiteGraph, ev: Evaluator, cands, max_size: int):
    """Max-welfare subset of ``cands`` with at most ``max_size`` members,
    relative to the evaluator's current state (which is restored).

    Enumerates sizes ascending and lexicographically within a size, keeping
    strict improvements only, so ties resolve to the smallest then
    lexicographically first subset. Returns (best raw total, subset).
    """
    rows, pos_rev, neg_rev = ev._rows, ev._pos_rev, ev._neg_rev
    one = ev._one
    positive = [graph.labels[t] == POSITIVE_LABEL for t in range(graph.m)]
    touched = {t: [a for a in graph.reverse[t] if rows[a] is not None] for t in cands}
    best_total = ev.raw_total
    best_sol: tuple[int, ...] = ()
    stack: list[int] = []
    n_c = len(cands)

    def dfs(start: int, remaining: int, total) -> None:
        nonlocal best_total, best_sol
        if remaining == 0:
            if total > best_total:
                best_total = total
                best_sol = tuple(stack)
            return
        for i in range(start, n_c - remaining + 1):
            t = cands[i]
            agents = touched[t]
            delta = total - total  # typed zero (int or float)
            if positive[t]:
                for a in agents:
                    if not pos_rev[a]:
                        delta += one - rows[a][neg_rev[a]]
                    pos_rev[a] += 1
            else:
                for a in agents:
                    if not pos_rev[a]:
                        row = rows[a]
                        j = neg_rev[a]
                        delta += row[j + 1] - row[j]
                    neg_rev[a] += 1
            stack.append(t)
            dfs(i + 1, remaining - 1, total + delta)
            stack.pop()
            if positive[t]:
                for a in agents:
                    pos_rev[a] -= 1
            else:
                for a in agents:
                    neg_rev[a] -= 1

    for size in range(1, min(max_size, n_c) + 1):
        dfs(0, size, ev.raw_total)
    return best_total, best_sol


def _sequential_trace(graph: BipartiteGraph, order, backend: str):
    """Per-target gains of revealing ``order`` left to right (true welfare)."""
    ev = Evaluator(graph, TRUE, backend)
    trace = []
    for t in order:
        gain = ev.marginal_raw(t)
        ev.add(t)
        trace.append((t, ev.to_value(gain)))
    return tuple(trace), ev.value()


def greedy_reveal(
    graph: BipartiteGraph,
    mode: str = BOTH,
    budget: int = 0,
    initial: RevealLike = (),
    objective: str = TRUE,
    backend: str = EXACT,
) -> RevealResult:
    """Iteratively reveal the marginal-gain argmax until the budget or a
    zero-gain step stops the run.

    ``initial`` seeds the revealed set and does not count against the
    budget; it may contain targets outside the candidate mode.
    """
    if budget < 0:
        raise BudgetNegative(f"budget {budget} < 0")
    order = _order_of(initial)
    for t in order:
        graph.check_target(t)
    ev = Evaluator(graph, objective, backend, order)
    chosen = list(order)
    trace: list[tuple[int, WelfareValue]] = []
    pool = [t for t in candidates_for(graph, mode) if t not in set(order)]
    for _ in range(budget):
        best_t = None
        best_gain = None
        for t in pool:
            gain = ev.marginal_raw(t)
            if best_gain is None or gain > best_gain:
                best_t, best_gain = t, gain
        if best_t is None or best_gain <= 0:
            break
        ev.add(best_t)
        chosen.append(best_t)
        pool.remove(best_t)
        trace.append((best_t, ev.to_value(best_gain)))
    solution = RevealSet(tuple(chosen))
    if objective == PROXY:
        true_ev = Evaluator(graph, TRUE, backend, solution)
        return RevealResult(solution, true_ev.value(), ev.value(), tuple(trace))
    return RevealResult(solution, ev.value(), None, tuple(trace))


def bruteforce_reveal(
    graph: BipartiteGraph,
    mode: str = BOTH,
    budget: int = 0,
    backend: str = EXACT,
) -> RevealResult:
    """Optimal true-welfare subset of size <= budget by exhaustive search.

    Guarded to at most ``SUBSET_GUARD`` candidate subsets. Among
    equal-welfare optima, the smallest then lexicographically first subset
    wins.
    """
    if budget < 0:
        raise BudgetNegative(f"budget {budget} < 0")
    cands = candidates_for(graph, mode)
    limit = min(budget, len(cands))
    _guarded_subset_count(len(cands), limit)
    ev = Evaluator(graph, TRUE, backend)
    _, best_sol = _best_subset(graph, ev, cands, limit)
    trace, welfare = _sequential_trace(graph, best_sol, backend)
    return RevealResult(RevealSet(best_sol), welfare, None, trace)


def lookahead_reveal(
    graph: BipartiteGraph,
    mode: str = BOTH,
    budget: int = 0,
    depth: int = 1,
    backend: str = EXACT,
) -> RevealResult:
    """Greedy over subsets: each iteration commits the best subset of at
    most ``min(depth, remaining budget)`` candidates.

    ``depth=1`` reproduces :func:`greedy_reveal`; ``depth=budget``
    reproduces :func:`bruteforce_reveal` (identical tie rules).
    """
    if budget < 0:
        raise BudgetNegative(f"budget {budget} < 0")
    # zero budget still admits depth 1 so uniform grids can sweep K from 0
    if depth < 1 or depth > max(budget, 1):
        raise DepthOutOfRange(f"depth {depth} outside [1, {budget}]")
    ev = Evaluator(graph, TRUE, backend)
    members: set[int] = set()
    chosen: list[int] = []
    trace: list[tuple[int, WelfareValue]] = []
    zero = 0 if backend == EXACT else 0.0
    while len(chosen) < budget:
        width = min(depth, budget - len(chosen))
        pool = [t for t in candidates_for(graph, mode) if t not in members]
        _guarded_subset_count(len(pool), width)
        base_raw = ev.raw_total
        best_total, best_subset = _best_subset(graph, ev, pool, width)
        if not best_subset or best_total - base_raw <= zero:
            break
        for t in best_subset:
            gain = ev.marginal_raw(t)
            ev.add(t)
            members.add(t)
            chosen.append(t)
            trace.append((t, ev.to_value(gain)))
    return RevealResult(RevealSet(tuple(chosen)), ev.value(), None, tuple(trace))


def _mixed_seed(seed: Optional[int], split: int, side: int) -> int:
    base = 0 if seed is None else int(seed)
    return base * 1_000_003 + split * 2 + side


def heuristic_reveal(
    graph: BipartiteGraph,
    budget: int = 0,
    inner: str = GREEDY_INNER,
    rng_seed: Optional[int] = None,
    backend: str = EXACT,
) -> RevealResult:
    """Try every positive/negative budget split and keep the best union.

    For each split k, the inner algorithm runs independently on the
    positive targets with budget k and on the negative targets with budget
    ``budget - k``; ties between splits resolve to the smallest k.
    """
    if budget < 0:
        raise BudgetNegative(f"budget {budget} < 0")
    if inner not in (GREEDY_INNER, RANDOM_INNER):
        raise ValueError(f"unknown inner algorithm {inner!r}")
    best_order: Optional[tuple[int, ...]] = None
    best_welfare = None
    for split in range(budget + 1):
        if inner == GREEDY_INNER:
            pos_run = greedy_reveal(graph, POSITIVE, split, backend=backend)
            neg_run = greedy_reveal(graph, NEGATIVE, budget - split, backend=backend)
        else:
            pos_run = random_reveal(
                graph, POSITIVE, split, _mixed_seed(rng_seed, split, 0), backend
            )
            neg_run = random_reveal(
                graph, NEGATIVE, budget - split, _mixed_seed(rng_seed, split, 1), backend
            )
        order = pos_run.solution.order + neg_run.solution.order
        welfare = Evaluator(graph, TRUE, backend, order).value()
        if best_welfare is None or welfare > best_welfare:
            best_welfare = welfare
            best_order = order
    assert best_order is not None
    trace, welfare = _sequential_trace(graph, best_order, backend)
    return RevealResult(RevealSet(best_order), welfare, None, trace)


def interactive_heuristic_reveal(
    graph: BipartiteGraph,
    budget: int = 0,
    backend: str = EXACT,
) -> RevealResult:
    """Budget-split greedy where the second phase is seeded by the first.

    For each split k and each phase order (positives first or negatives
    first), the first greedy run's set becomes the initial set of the
    second run on the opposite candidates with the remaining budget. The
    best true welfare over all (split, order) wins; on an exact tie the
    negatives-then-positives variant is preferred.
    """
    if budget < 0:
        raise BudgetNegative(f"budget {budget} < 0")
    best_pos_second: Optional[RevealResult] = None
    best_neg_second: Optional[RevealResult] = None
    for split in range(budget + 1):
        first_pos = greedy_reveal(graph, POSITIVE, split, backend=backend)
        first_neg = greedy_reveal(graph, NEGATIVE, split, backend=backend)
        pos_second = greedy_reveal(
            graph, POSITIVE, budget - split, initial=first_neg.solution, backend=backend
        )
        neg_second = greedy_reveal(
            graph, NEGATIVE, budget - split, initial=first_pos.solution, backend=backend
        )
        if best_pos_second is None or pos_second.welfare > best_pos_second.welfare:
            best_pos_second = pos_second
        if best_neg_second is None or neg_second.welfare > best_neg_second.welfare:
            best_neg_second = neg_second
    assert best_pos_second is not None and best_neg_second is not None
    winner = (
        best_neg_second
        if best_neg_second.welfare > best_pos_second.welfare
        else best_pos_second
    )
    trace, welfare = _sequential_trace(graph, winner.solution.order, backend)
    return RevealResult(winner.solution, welfare, None, trace)


def random_reveal(
    graph: BipartiteGraph,
    mode: str = BOTH,
    budget: int = 0,
    rng_seed: Optional[int] = None,
    backend: str = EXACT,
) -> RevealResult:
    """Uniform sample without replacement from the candidate targets."""
    if budget < 0:
        raise BudgetNegative(f"budget {budget} < 0")
    pool = list(candidates_for(graph, mode))
    rng = random.Random(rng_seed)
    order = tuple(rng.sample(pool, min(budget, len(pool))))
    trace, welfare = _sequential_trace(graph, order, backend)
    return RevealResult(RevealSet(order), welfare, None, trace)


def proxy_greedy_reveal(
    graph: BipartiteGraph,
    budget: int = 0,
    mode: str = BOTH,
    backend: str = EXACT,
) -> RevealResult:
    """Classic greedy driven by the proxy objective over both target kinds."""
    return greedy_reveal(graph, mode, budget, objective=PROXY, backend=backend)
