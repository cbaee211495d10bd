"""Acceptance suite: one test per criterion, each printing a pass/fail line
and enforcing its stated tolerance and wall-clock bound.

Exact comparisons use rational arithmetic throughout. Checks against the
irrational greedy constant 1 - 1/e use one-sided rational bounds so that
every comparison stays exact and errs on the strict side.
"""

import itertools
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from math import ceil

import numpy as np

from disclose.coverage import CoverageInstance, greedy_coverage
from disclose.fairness import group_opt, prioritized_greedy
from disclose.graph import BipartiteGraph
from disclose.graphgen import make_fixture
from disclose.intervention import intervention_gains
from disclose.learning import generalization_gap, perf
from disclose.reveal import (
    BOTH,
    NEGATIVE,
    POSITIVE,
    bruteforce_reveal,
    greedy_reveal,
    interactive_heuristic_reveal,
    heuristic_reveal,
    lookahead_reveal,
    proxy_greedy_reveal,
)
from disclose.welfare import (
    PROXY,
    TRUE,
    Evaluator,
    marginal_gain,
    social_welfare,
    welfare_gain,
)

from .conftest import random_graph, random_subset
from .test_intervention import NEGATIVE_PRE_GAIN

# rational bounds on 1 - 1/e = 0.63212055882855767840...
GAIN_CONST_UPPER = Fraction(63212055882855768, 10**17)
GAIN_CONST_LOWER = Fraction(63212055882855767, 10**17)


@contextmanager
def criterion(num: int, label: str, bound_s: float):
    start = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"[FAIL] criterion {num}: {label}")
        raise
    elapsed = time.perf_counter() - start
    if elapsed >= bound_s:
        print(f"[FAIL] criterion {num}: {label} ({elapsed:.1f}s >= {bound_s}s)")
        raise AssertionError(f"criterion {num} exceeded {bound_s}s: {elapsed:.1f}s")
    print(f"[PASS] criterion {num}: {label} ({elapsed:.2f}s < {bound_s:g}s)")


def test_criterion_01_shared_negative_welfare_chain():
    with criterion(1, "two shared negatives welfare chain", 1.0):
        g = make_fixture("FIG2")
        assert social_welfare(g, ()) == Fraction(4, 3)
        assert social_welfare(g, [4]) == 2
        assert social_welfare(g, [4, 5]) == 4
        assert marginal_gain(g, (), 5) == Fraction(2, 3)
        assert marginal_gain(g, [4], 5) == 2


def test_criterion_02_posneg_family_ratio_below_greedy_constant():
    with criterion(2, "positive-chasing greedy vs negative optimum", 10.0):
        for kappa in (3, 4, 5):
            g = make_fixture("FAM-POSNEG", kappa=kappa)
            budget = kappa + 1
            greedy = greedy_reveal(g, BOTH, budget)
            optimum = bruteforce_reveal(g, BOTH, budget)
            assert greedy.welfare == Fraction(2 * kappa**2 + 2 * kappa + 1, kappa + 2)
            assert optimum.welfare == kappa**2
            assert greedy.welfare / optimum.welfare < GAIN_CONST_LOWER


def test_criterion_03_negative_only_family_exact_ratio():
    with criterion(3, "negative-only greedy misled by pair agents", 5.0):
        g = make_fixture("FAM-NEG", kappa=4)
        greedy = greedy_reveal(g, NEGATIVE, 5)
        optimum = bruteforce_reveal(g, NEGATIVE, 5)
        assert greedy.welfare == Fraction(19, 3)
        assert optimum.welfare == Fraction(21, 2)
        assert greedy.welfare / optimum.welfare == Fraction(38, 63)


def test_criterion_04_table_instance_heuristic_ratio():
    with criterion(4, "ten-agent table: greedy/interactive optimal, heuristic 0.96", 1.0):
        g = make_fixture("TAB7")
        optimum = bruteforce_reveal(g, BOTH, 3)
        assert greedy_reveal(g, BOTH, 3).welfare == optimum.welfare
        assert interactive_heuristic_reveal(g, 3).welfare == optimum.welfare
        ratio = heuristic_reveal(g, 3).welfare / optimum.welfare
        assert abs(float(ratio) - 0.96) < 0.005


def _canonical_positive_only_graphs():
    """Every labeled bipartite graph with up to 4 agents and 5 targets, up
    to symmetries that cannot change a positive-only run: agent order
    (welfare is a sum over agents) and the identity/placement of negative
    targets (they are never candidates and only their per-agent counts
    enter the masses). Each agent is a (positive-neighborhood, negative
    degree) state; all multisets of four states are enumerated for every
    positive-target count."""
    for n_pos in range(0, 6):
        max_neg = 5 - n_pos
        states = [
            (mask, dneg)
            for mask in range(2**n_pos)
            for dneg in range(max_neg + 1)
        ]
        for combo in itertools.combinations_with_replacement(states, 4):
            deepest = max(dneg for _, dneg in combo)
            shared_negs = list(range(n_pos, n_pos + deepest))
            adjacency = [
                [j for j in range(n_pos) if mask >> j & 1] + shared_negs[:dneg]
                for mask, dneg in combo
            ]
            labels = [1] * n_pos + [-1] * deepest
            yield BipartiteGraph(
                n=4, m=n_pos + deepest,
                adjacency=tuple(tuple(row) for row in adjacency),
                labels=tuple(labels),
            )


def test_criterion_05_positive_only_greedy_guarantee():
    with criterion(5, "positive-only greedy within 1-1/e of optimum", 60.0):
        violations = 0
        for g in _canonical_positive_only_graphs():
            run = greedy_reveal(g, POSITIVE, 3)
            base = social_welfare(g, ())
            prefix = base
            greedy_at = {0: base}
            for k, (_, gain) in enumerate(run.trace, start=1):
                prefix += gain
                greedy_at[k] = prefix
            for budget in (1, 2, 3):
                best = bruteforce_reveal(g, POSITIVE, budget).welfare
                achieved = greedy_at[min(budget, len(run.trace))]
                if achieved < GAIN_CONST_UPPER * best:
                    violations += 1
        rng = random.Random(5005)
        for _ in range(200):
            g = random_graph(rng, max_n=8, max_m=8)
            for budget in (1, 2, 3):
                achieved = greedy_reveal(g, POSITIVE, budget).welfare
                best = bruteforce_reveal(g, POSITIVE, budget).welfare
                if achieved < GAIN_CONST_UPPER * best:
                    violations += 1
        assert violations == 0


def test_criterion_06_proxy_suite():
    with criterion(6, "proxy sandwich, submodularity, and gain bound", 120.0):
        violations = 0

        # sandwich + constant-factor gain bound on bounded-negatives graphs
        rng = random.Random(6006)
        for _ in range(200):
            c = rng.choice([1, 2, 3])
            g = random_graph(rng, max_n=6, max_m=6, neg_bound=c,
                             require_positive=True)
            assert g.is_c_bounded(c)
            s = random_subset(rng, g)
            f_true = social_welfare(g, s, TRUE)
            f_proxy = social_welfare(g, s, PROXY)
            if not f_proxy <= f_true <= c * f_proxy:
                violations += 1
            g_true = welfare_gain(g, s, TRUE)
            g_proxy = welfare_gain(g, s, PROXY)
            if not g_proxy <= g_true <= c * g_proxy:
                violations += 1
            budget = rng.randint(1, 3)
            proxy_run = proxy_greedy_reveal(g, budget)
            optimum = bruteforce_reveal(g, BOTH, budget)
            gain = proxy_run.welfare - social_welfare(g, ())
            best_gain = optimum.welfare - social_welfare(g, ())
            if c * gain < GAIN_CONST_UPPER * best_gain:
                violations += 1

        # proxy marginals never grow as the revealed set grows; checked
        # exhaustively per agent profile with up to five neighbors, which
        # covers every graph with up to five targets by summation
        def proxy_state_mass(dpos, dneg, pos_rev, neg_rev):
            if pos_rev:
                return Fraction(1)
            if dpos == 0:
                return Fraction(0)
            size = dpos + dneg
            first = 1 if neg_rev >= 1 else 0
            return Fraction(dpos, size - first) * (
                1 + Fraction(max(0, neg_rev - 1), size)
            )

        for dpos in range(0, 6):
            for dneg in range(0, 6 - dpos):
                states = [
                    (p, v) for p in range(dpos + 1) for v in range(dneg + 1)
                ]
                for pa, na in states:
                    for pb, nb in states:
                        if pb < pa or nb < na:
                            continue
                        if pb + 1 <= dpos:
                            small = proxy_state_mass(dpos, dneg, pa + 1, na) \
                                - proxy_state_mass(dpos, dneg, pa, na)
                            large = proxy_state_mass(dpos, dneg, pb + 1, nb) \
                                - proxy_state_mass(dpos, dneg, pb, nb)
                            if small < large:
                                violations += 1
                        if nb + 1 <= dneg:
                            small = proxy_state_mass(dpos, dneg, pa, na + 1) \
                                - proxy_state_mass(dpos, dneg, pa, na)
                            large = proxy_state_mass(dpos, dneg, pb, nb + 1) \
                                - proxy_state_mass(dpos, dneg, pb, nb)
                            if small < large:
                                violations += 1
        assert violations == 0


def test_criterion_07_monotonicity_fuzz():
    with criterion(7, "monotone welfare under any added reveal", 30.0):
        rng = random.Random(7007)
        violations = 0
        for _ in range(10_000):
            g = random_graph(rng, max_n=6, max_m=6)
            s = random_subset(rng, g, max_size=g.m - 1)
            rest = [t for t in range(g.m) if t not in s]
            if not rest:
                continue
            t = rng.choice(rest)
            for kind in (TRUE, PROXY):
                ev = Evaluator(g, kind, initial=s)
                if ev.marginal_raw(t) < 0:
                    violations += 1
        assert violations == 0


def test_criterion_08_intervention_gain_bounds():
    with criterion(8, "intervention gains bounded by budget", 60.0):
        rng = random.Random(8008)
        for _ in range(500):
            g = random_graph(rng, max_n=8, max_m=8)
            for reveal_budget in (0, 1, 5):
                for intervene_budget in (0, 1, 3):
                    pre, post = intervention_gains(
                        g, reveal_budget, intervene_budget
                    )
                    assert 0 <= post <= intervene_budget
                    assert pre <= intervene_budget
                    if intervene_budget == 0:
                        assert pre == 0 and post == 0
        pre, post = intervention_gains(NEGATIVE_PRE_GAIN, 2, 1)
        assert pre == Fraction(-1, 12) < 0
        assert 0 <= post <= 1


def test_criterion_09_coverage_examples_and_properties():
    with criterion(9, "coverage: line examples, monotone budget, feasibility", 30.0):
        line = lambda targets, agents: CoverageInstance(
            np.array([[float(a)] for a in agents]),
            np.array([[float(t)] for t in targets]),
        )
        first = greedy_coverage(line([0], [1, 2, 5]), 3)
        assert first.radii.tolist() == [2.0]
        assert first.covered.tolist() == [True, True, False]
        second = greedy_coverage(line([0], [1, 2]), 0)
        assert second.covered_count == 0
        third = greedy_coverage(line([0, 10], [1, 9]), 2)
        assert third.radii.tolist() == [1.0, 1.0]
        assert third.covered.all()

        rng = random.Random(9009)
        for _ in range(100):
            n = rng.randint(1, 12)
            m = rng.randint(1, 4)
            inst = CoverageInstance(
                np.array([[rng.uniform(-5, 5), rng.uniform(-5, 5)] for _ in range(n)]),
                np.array([[rng.uniform(-5, 5), rng.uniform(-5, 5)] for _ in range(m)]),
            )
            counts = []
            for step in range(10):
                budget = 0.8 * step
                result = greedy_coverage(inst, budget)
                counts.append(result.covered_count)
                assert result.spent <= budget + 1e-9
            assert counts == sorted(counts)


def test_criterion_10_fairness_split_bound_and_priority_ties():
    with criterion(10, "budget-split optimum bound and prioritized ties", 60.0):
        rng = random.Random(1010)
        for _ in range(60):
            n = rng.randint(1, 5)
            m = rng.randint(1, 6)
            adjacency = [
                sorted(rng.sample(range(m), rng.randint(0, m))) for _ in range(n)
            ]
            g = BipartiteGraph.build(adjacency, [1] * m).with_groups([0] * n)
            for w in (2, 3):
                for budget in range(w, 5):
                    split_opt = group_opt(g, 0, ceil(budget / w))
                    full_opt = group_opt(g, 0, budget)
                    assert w * split_opt >= full_opt

        # three equal-total-gain targets whose group splits differ
        adjacency, groups = [], []
        next_negative = 3
        for target, (g0, g1) in enumerate([(2, 2), (1, 3), (0, 4)]):
            for group, count in ((0, g0), (1, g1)):
                for _ in range(count):
                    adjacency.append([target, next_negative])
                    groups.append(group)
                    next_negative += 1
        labels = [1, 1, 1] + [-1] * (next_negative - 3)
        tie_graph = BipartiteGraph.build(adjacency, labels).with_groups(groups)
        assert prioritized_greedy(tie_graph, 1, 0).solution.order == (0,)
        assert prioritized_greedy(tie_graph, 1, 1).solution.order == (2,)


def _synthetic_500_agent_graph():
    rng = random.Random(424242)
    n, m = 500, 40
    labels = [1 if rng.random() < 0.45 else -1 for _ in range(m)]
    adjacency = [
        sorted(rng.sample(range(m), rng.randint(2, 6))) for _ in range(n)
    ]
    return BipartiteGraph.build(adjacency, labels)


def test_criterion_11_learning_suite(tmp_path):
    with criterion(11, "perf formulas, trial determinism, shrinking gap", 120.0):
        side = BipartiteGraph.build([[0, 1], [0], [1], []], [1, -1])
        assert perf(side, [0], 1).value == 100.0
        assert perf(side, [0], 2).value == 50.0
        assert perf(side, [0], 3).value == 100.0
        assert perf(side, (), 2).value == 37.5

        from disclose.cli import main

        args = ["learn", "--fixture", "FIG2", "--K", "2", "--trials", "100",
                "--ratio", "0.5", "--seed", "11"]
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(first)]) == 0
        assert main(args + ["--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

        g = _synthetic_500_agent_graph()
        means = []
        for ratio in (0.3, 0.5, 0.7):
            result = generalization_gap(g, 2, n_trials=30, base_seed=2026,
                                        ratio=ratio)
            means.append(result.mean)
        assert means[1] <= 1.5 * means[0]
        assert means[2] <= 1.5 * means[1]


def test_criterion_12_algorithm_dominance():
    with criterion(12, "lookahead/interactive dominance and exact reductions", 60.0):
        rng = random.Random(1212)
        for _ in range(200):
            g = random_graph(rng, max_n=6, max_m=6)
            budget = rng.randint(1, 3)
            shallow = lookahead_reveal(g, BOTH, budget, 1)
            deep = lookahead_reveal(g, BOTH, budget, budget)
            assert deep.welfare >= shallow.welfare
            plain = greedy_reveal(g, BOTH, budget)
            assert shallow.solution.order == plain.solution.order
            best = bruteforce_reveal(g, BOTH, budget)
            assert deep.solution.order == best.solution.order
            inter = interactive_heuristic_reveal(g, budget)
            for mode in (POSITIVE, NEGATIVE):
                assert inter.welfare >= greedy_reveal(g, mode, budget).welfare
