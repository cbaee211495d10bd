"""Train/test harness: split agents, learn a reveal set on the training
side, and score both sides with the Perf metrics.

Perf1 normalizes welfare by the agents with a positive neighbor, Perf2 by
all agents, and Perf3 scores helpable agents only, subtracting the
always-satisfied only-positive agents from the numerator. A metric whose
denominator is empty is degenerate: it raises by default and is reported
as a flagged zero in batch runs.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from .errors import TooFewAgents, ZeroDenominator
from .graph import AgentClass, BipartiteGraph
from .reveal import BOTH, greedy_reveal
from .welfare import EXACT, TRUE, Evaluator, RevealLike, _order_of

import random

PERF_METRICS = (1, 2, 3)


@dataclass(frozen=True)
class SplitGraphs:
    train: BipartiteGraph
    test: BipartiteGraph
    train_agents: tuple[int, ...]
    test_agents: tuple[int, ...]


@dataclass(frozen=True)
class PerfScore:
    metric: int
    value: float
    degenerate: bool = False


@dataclass(frozen=True)
class TrialRow:
    trial: int
    train: tuple[PerfScore, PerfScore, PerfScore]
    test: tuple[PerfScore, PerfScore, PerfScore]


@dataclass(frozen=True)
class LearningTable:
    rows: tuple[TrialRow, ...]
    means: dict
    sds: dict


def split_train_test(
    graph: BipartiteGraph,
    ratio: float = 0.7,
    seed: int = 0,
) -> SplitGraphs:
    """Partition agents by a seeded permutation; targets stay shared."""
    if not 0 < ratio < 1:
        raise ValueError(f"ratio {ratio} outside (0, 1)")
    perm = list(range(graph.n))
    random.Random(seed).shuffle(perm)
    cut = round(graph.n * ratio)
    train_agents = tuple(sorted(perm[:cut]))
    test_agents = tuple(sorted(perm[cut:]))
    if not train_agents or not test_agents:
        raise TooFewAgents(
            f"split {ratio} of {graph.n} agents leaves an empty side"
        )
    return SplitGraphs(
        train=graph.induced(train_agents),
        test=graph.induced(test_agents),
        train_agents=train_agents,
        test_agents=test_agents,
    )


def perf(
    side: BipartiteGraph,
    reveal: RevealLike,
    metric: int,
    backend: str = EXACT,
    allow_degenerate: bool = False,
) -> PerfScore:
    """Percentage score of a revealed set on one side's agents."""
    if metric not in PERF_METRICS:
        raise ValueError(f"metric must be one of {PERF_METRICS}")
    order = _order_of(reveal)
    welfare = Evaluator(side, TRUE, backend, order).value()
    classes = [side.agent_class(x) for x in range(side.n)]
    if metric == 1:
        denom = sum(
            1
            for c in classes
            if c in (AgentClass.ONLY_POSITIVE, AgentClass.HELPABLE)
        )
        numer = welfare
    elif metric == 2:
        denom = side.n
        numer = welfare
    else:
        denom = sum(1 for c in classes if c is AgentClass.HELPABLE)
        numer = welfare - sum(1 for c in classes if c is AgentClass.ONLY_POSITIVE)
    if denom == 0:
        if allow_degenerate:
            return PerfScore(metric, 0.0, degenerate=True)
        raise ZeroDenominator(f"Perf{metric} has no qualifying agents")
    return PerfScore(metric, float(numer) / denom * 100.0)


def _scores(side: BipartiteGraph, reveal, backend: str):
    return tuple(
        perf(side, reveal, metric, backend, allow_degenerate=True)
        for metric in PERF_METRICS
    )


def run_learning_trials(
    graph: BipartiteGraph,
    budget: int,
    n_trials: int = 100,
    base_seed: int = 0,
    ratio: float = 0.7,
    backend: str = EXACT,
) -> LearningTable:
    """Split, learn on the training side, score both sides, repeat.

    Trial ``i`` uses split seed ``base_seed + i``; the summary appends the
    mean and standard deviation of every metric across trials.
    """
    if n_trials < 1:
        raise ValueError(f"n_trials {n_trials} < 1")
    rows = []
    for trial in range(n_trials):
        split = split_train_test(graph, ratio, base_seed + trial)
        learned = greedy_reveal(split.train, BOTH, budget, backend=backend)
        rows.append(
            TrialRow(
                trial=trial,
                train=_scores(split.train, learned.solution, backend),
                test=_scores(split.test, learned.solution, backend),
            )
        )
    means: dict = {}
    sds: dict = {}
    for side in ("train", "test"):
        for metric in PERF_METRICS:
            values = [getattr(row, side)[metric - 1].value for row in rows]
            means[(side, metric)] = statistics.fmean(values)
            sds[(side, metric)] = statistics.pstdev(values)
    return LearningTable(tuple(rows), means, sds)


@dataclass(frozen=True)
class GapResult:
    per_trial: tuple[float, ...]
    mean: float


def generalization_gap(
    graph: BipartiteGraph,
    budget: int,
    n_trials: int = 100,
    base_seed: int = 0,
    ratio: float = 0.7,
    backend: str = EXACT,
) -> GapResult:
    """Per-trial absolute gap between train and test per-agent welfare."""
    if n_trials < 1:
        raise ValueError(f"n_trials {n_trials} < 1")
    gaps = []
    for trial in range(n_trials):
        split = split_train_test(graph, ratio, base_seed + trial)
        learned = greedy_reveal(split.train, BOTH, budget, backend=backend)
        train_avg = learned.welfare / split.train.n
        test_welfare = Evaluator(split.test, TRUE, backend, learned.solution).value()
        test_avg = test_welfare / split.test.n
        gaps.append(abs(float(train_avg) - float(test_avg)))
    return GapResult(tuple(gaps), statistics.fmean(gaps))
