"""Budgeted label disclosure on bipartite agent/target graphs."""

from .graph import AgentClass, AgentDegrees, BipartiteGraph, classify
from .welfare import (
    EXACT,
    FLOAT,
    PROXY,
    TRUE,
    Evaluator,
    RevealSet,
    agent_mass,
    marginal_gain,
    social_welfare,
    welfare_gain,
)
from .reveal import (
    BOTH,
    NEGATIVE,
    POSITIVE,
    RevealResult,
    bruteforce_reveal,
    candidates_for,
    greedy_reveal,
    heuristic_reveal,
    interactive_heuristic_reveal,
    lookahead_reveal,
    proxy_greedy_reveal,
    random_reveal,
)
from .fairness import (
    GroupOutcome,
    GroupReport,
    group_gain,
    group_opt,
    per_group_reveal,
    prioritized_greedy,
)
from .intervention import (
    InterventionResult,
    intervention_gains,
    post_reveal_intervention,
    pre_reveal_intervention,
)
from .coverage import CoverageInstance, CoverageResult, greedy_coverage
from .graphgen import (
    FeatureTable,
    FixtureSpec,
    build_graph,
    graph_stats,
    make_fixture,
    prepare_dataset,
)
from .learning import (
    GapResult,
    LearningTable,
    PerfScore,
    SplitGraphs,
    generalization_gap,
    perf,
    run_learning_trials,
    split_train_test,
)

__version__ = "0.1.0"
