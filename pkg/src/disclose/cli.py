"""Command-line entry point: experiment orchestration over graphs,
algorithms, and budget grids with deterministic seeding and CSV output.

Configuration comes from an optional JSON file (``--config``) merged with
command-line flags; flags win and unknown config keys are rejected. Result
rows share one flat schema; reruns with identical config and seeds yield
identical CSV bodies except for the wall-clock ``runtime_ms`` column.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 tripped
search-space guard.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Optional

from . import coverage as coverage_mod
from . import fairness as fairness_mod
from . import graphgen, intervention, learning
from .errors import ConfigError, DataError, DiscloseError, SearchSpaceTooLarge
from .graph import BipartiteGraph
from .reveal import (
    BOTH,
    GREEDY_INNER,
    NEGATIVE,
    POSITIVE,
    RANDOM_INNER,
    bruteforce_reveal,
    candidates_for,
    greedy_reveal,
    heuristic_reveal,
    interactive_heuristic_reveal,
    lookahead_reveal,
    random_reveal,
)
from .welfare import EXACT, PROXY, Evaluator, TRUE

RESULT_COLUMNS = (
    "run_id", "graph", "algorithm", "mode", "K", "B", "R", "d", "seed",
    "welfare", "gain", "proxy_welfare", "opt_welfare", "ratio", "runtime_ms",
)
LEARN_COLUMNS = ("dataset", "method", "param", "K", "trial", "split", "metric", "value")
STATS_COLUMNS = (
    "param", "value", "m_neg", "m_pos", "avg_lhs",
    "only_pos_ns", "only_neg_ns", "empty_ns", "uni_pos",
)

REVEAL_ALGOS = (
    "greedy", "proxy-greedy", "bruteforce", "lookahead",
    "heuristic", "heuristic-random", "interactive", "random",
)
MODES = {"both": BOTH, "positive": POSITIVE, "negative": NEGATIVE}

# bruteforce reference is computed automatically below this subset count
OPT_AUTO_GUARD = 10**5


def _fmt(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, Fraction):
        return repr(float(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, columns, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row.get(c, "")) for c in columns])


def _write_summary(csv_path: Path, command: str, config: dict, n_rows: int) -> None:
    summary = {
        "command": command,
        "config": {k: config[k] for k in sorted(config)},
        "rows": n_rows,
        "csv": csv_path.name,
    }
    csv_path.with_suffix(".json").write_text(
        json.dumps(summary, indent=2, sort_keys=True, default=str) + "\n",
        encoding="utf-8",
    )


def _threads() -> int:
    raw = os.environ.get("DISCLOSE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ConfigError(f"DISCLOSE_THREADS={raw!r} is not an integer") from exc


def _int_list(text, flag: str) -> list[int]:
    if isinstance(text, list):
        return [int(v) for v in text]
    try:
        return [int(part) for part in str(text).split(",") if part != ""]
    except ValueError as exc:
        raise ConfigError(f"--{flag} expects comma-separated integers") from exc


def _float_list(text, flag: str) -> list[float]:
    if isinstance(text, list):
        return [float(v) for v in text]
    try:
        return [float(part) for part in str(text).split(",") if part != ""]
    except ValueError as exc:
        raise ConfigError(f"--{flag} expects comma-separated numbers") from exc


def _load_graph(args) -> tuple[BipartiteGraph, str]:
    if getattr(args, "fixture", None):
        spec = graphgen.parse_fixture_name(args.fixture)
        return spec.build(), args.fixture
    if getattr(args, "graph", None):
        path = Path(args.graph)
        try:
            graph = BipartiteGraph.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise DataError(f"cannot read {path}: {exc}") from exc
        except (KeyError, ValueError, json.JSONDecodeError) as exc:
            raise DataError(f"{path}: malformed graph JSON: {exc}") from exc
        return graph, path.stem
    raise ConfigError("one of --graph or --fixture is required")


def _merge_config(args: argparse.Namespace, parser_defaults: dict) -> dict:
    """Layer defaults, config file, then explicit flags."""
    merged = dict(parser_defaults)
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            loaded = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise DataError(f"cannot read {config_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{config_path}: invalid JSON: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"{config_path}: config must be a JSON object")
        for key, value in loaded.items():
            if key not in parser_defaults:
                raise ConfigError(f"{config_path}: unknown config key {key!r}")
            merged[key] = value
    for key in parser_defaults:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value
    return merged


# -- reveal / fixture -----------------------------------------------------------


def _run_algorithm(graph, algo, mode, budget, depth, seed, backend):
    if algo == "greedy":
        return greedy_reveal(graph, mode, budget, backend=backend)
    if algo == "proxy-greedy":
        return greedy_reveal(graph, mode, budget, objective=PROXY, backend=backend)
    if algo == "bruteforce":
        return bruteforce_reveal(graph, mode, budget, backend=backend)
    if algo == "lookahead":
        return lookahead_reveal(graph, mode, budget, depth, backend=backend)
    if algo == "heuristic":
        return heuristic_reveal(graph, budget, GREEDY_INNER, seed, backend=backend)
    if algo == "heuristic-random":
        return heuristic_reveal(graph, budget, RANDOM_INNER, seed, backend=backend)
    if algo == "interactive":
        return interactive_heuristic_reveal(graph, budget, backend=backend)
    if algo == "random":
        return random_reveal(graph, mode, budget, seed, backend=backend)
    raise ConfigError(f"unknown algorithm {algo!r}")


def _cmd_reveal(args, command: str) -> int:
    cfg = _merge_config(args, {
        "graph": None, "fixture": None, "algos": "greedy", "mode": "both",
        "K": "1", "d": 1, "seed": 0, "backend": EXACT, "with_opt": False,
        "out": "results.csv",
    })
    graph, graph_id = _load_graph(argparse.Namespace(**cfg))
    algos = [a.strip() for a in str(cfg["algos"]).split(",") if a.strip()]
    for algo in algos:
        if algo not in REVEAL_ALGOS:
            raise ConfigError(f"unknown algorithm {algo!r}; pick from {REVEAL_ALGOS}")
    if cfg["mode"] not in MODES:
        raise ConfigError(f"unknown mode {cfg['mode']!r}")
    mode = MODES[cfg["mode"]]
    budgets = _int_list(cfg["K"], "K")
    depth = int(cfg["d"])
    seed = int(cfg["seed"])
    backend = cfg["backend"]
    empty_welfare = Evaluator(graph, TRUE, backend).value()
    full = Evaluator(graph, TRUE, backend, range(graph.m)).value()

    explicit_opt = "bruteforce" in algos or cfg["with_opt"]
    pool_size = len(candidates_for(graph, mode))
    opt_for: dict[int, Optional[Fraction]] = {}
    for budget in budgets:
        subsets = sum(comb(pool_size, s) for s in range(min(budget, pool_size) + 1))
        if explicit_opt or subsets <= OPT_AUTO_GUARD:
            opt_for[budget] = bruteforce_reveal(graph, mode, budget, backend).welfare
        else:
            opt_for[budget] = None

    grid = [(budget, algo) for budget in budgets for algo in algos]

    def run_one(point):
        budget, algo = point
        start = time.perf_counter()
        result = _run_algorithm(graph, algo, mode, budget, depth, seed, backend)
        elapsed = (time.perf_counter() - start) * 1000.0
        opt = opt_for.get(budget)
        row = {
            "graph": graph_id, "algorithm": algo, "mode": cfg["mode"],
            "K": budget, "seed": seed,
            "welfare": result.welfare,
            "gain": result.welfare - empty_welfare,
            "proxy_welfare": result.proxy_welfare,
            "opt_welfare": opt,
            "ratio": (result.welfare / opt) if opt else None,
            "runtime_ms": round(elapsed, 3),
        }
        if algo == "lookahead":
            row["d"] = depth
        return row

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(run_one, grid))
    rows.append({
        "graph": graph_id, "algorithm": "full", "mode": cfg["mode"],
        "welfare": full, "gain": full - empty_welfare,
    })
    rows.append({
        "graph": graph_id, "algorithm": "empty", "mode": cfg["mode"],
        "welfare": empty_welfare, "gain": 0,
    })
    for i, row in enumerate(rows):
        row["run_id"] = i
    out = Path(cfg["out"])
    _write_csv(out, RESULT_COLUMNS, rows)
    _write_summary(out, command, cfg, len(rows))
    return 0


def _cmd_fixture(args, command: str) -> int:
    if getattr(args, "family", None):
        args.fixture = args.family
    if getattr(args, "graph_out", None):
        spec = graphgen.parse_fixture_name(args.fixture)
        graph = spec.build()
        Path(args.graph_out).write_text(graph.dumps() + "\n", encoding="utf-8")
    return _cmd_reveal(args, command)


# -- other subcommands ----------------------------------------------------------


def _cmd_gen(args, command: str) -> int:
    cfg = _merge_config(args, {
        "input": None, "label_column": "target", "method": "knn",
        "param": 1.0, "seed": 0, "out": "graph.json", "max_rows": 500,
    })
    if not cfg["input"]:
        raise ConfigError("--input CSV is required")
    table = graphgen.read_feature_csv(cfg["input"], cfg["label_column"])
    prepared = graphgen.prepare_dataset(table, seed=int(cfg["seed"]),
                                        max_rows=int(cfg["max_rows"]))
    method = cfg["method"]
    if method not in (graphgen.KNN, graphgen.THRESHOLD):
        raise ConfigError(f"unknown method {method!r}")
    graph = graphgen.build_graph(
        prepared.x_lhs, prepared.x_rhs, prepared.y_rhs, method, float(cfg["param"])
    )
    out = Path(cfg["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(graph.dumps() + "\n", encoding="utf-8")
    stats = graphgen.graph_stats(
        graph,
        param="k_max" if method == graphgen.KNN else "threshold",
        value=cfg["param"],
    )
    stats_path = out.with_suffix(".stats.csv")
    _write_csv(stats_path, STATS_COLUMNS, [stats])
    _write_summary(stats_path, command, cfg, 1)
    print(f"wrote {out} ({graph.n} agents, {graph.m} targets)")
    return 0


def _cmd_intervene(args, command: str) -> int:
    cfg = _merge_config(args, {
        "graph": None, "fixture": None, "K": "1", "B": "1",
        "backend": EXACT, "out": "intervene.csv",
    })
    graph, graph_id = _load_graph(argparse.Namespace(**cfg))
    backend = cfg["backend"]
    grid = [(k, b) for k in _int_list(cfg["K"], "K") for b in _int_list(cfg["B"], "B")]

    def run_one(point):
        k, b = point
        start = time.perf_counter()
        pre = intervention.pre_reveal_intervention(graph, k, b, backend)
        post = intervention.post_reveal_intervention(graph, k, b, backend)
        elapsed = (time.perf_counter() - start) * 1000.0
        shared = {"graph": graph_id, "K": k, "B": b,
                  "runtime_ms": round(elapsed, 3)}
        return [
            dict(shared, algorithm="pre-intervention",
                 welfare=pre.total_welfare, gain=pre.gain),
            dict(shared, algorithm="post-intervention",
                 welfare=post.total_welfare, gain=post.gain),
        ]

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        nested = list(pool.map(run_one, grid))
    rows = [row for pair in nested for row in pair]
    for i, row in enumerate(rows):
        row["run_id"] = i
    out = Path(cfg["out"])
    _write_csv(out, RESULT_COLUMNS, rows)
    _write_summary(out, command, cfg, len(rows))
    return 0


def _cmd_fairness(args, command: str) -> int:
    cfg = _merge_config(args, {
        "graph": None, "fixture": None, "K": 2, "algorithm": "greedy",
        "mode": "both", "backend": EXACT, "with_opt": False, "out": "fairness.csv",
    })
    graph, graph_id = _load_graph(argparse.Namespace(**cfg))
    if cfg["mode"] not in MODES:
        raise ConfigError(f"unknown mode {cfg['mode']!r}")
    budget = int(cfg["K"])
    report = fairness_mod.per_group_reveal(
        graph, budget, cfg["algorithm"], MODES[cfg["mode"]], cfg["backend"],
        opt_budget=budget if cfg["with_opt"] else None,
    )
    rows = []
    for entry in report.entries:
        ratio = None
        if entry.opt_reference:
            ratio = entry.gain / entry.opt_reference
        rows.append({
            "run_id": entry.group,
            "graph": f"{graph_id}#group{entry.group}",
            "algorithm": f"per-group-{cfg['algorithm']}",
            "mode": cfg["mode"],
            "K": report.budget_per_group,
            "welfare": entry.gain,
            "gain": entry.gain,
            "opt_welfare": entry.opt_reference,
            "ratio": ratio,
        })
    out = Path(cfg["out"])
    _write_csv(out, RESULT_COLUMNS, rows)
    _write_summary(out, command, cfg, len(rows))
    return 0


def _cmd_coverage(args, command: str) -> int:
    cfg = _merge_config(args, {
        "points": None, "R": "1.0", "out": "coverage.csv",
    })
    if not cfg["points"]:
        raise ConfigError("--points CSV is required")
    instance = coverage_mod.read_points_csv(cfg["points"])
    budgets = _float_list(cfg["R"], "R")
    rows = []
    for i, budget in enumerate(budgets):
        start = time.perf_counter()
        result = coverage_mod.greedy_coverage(instance, budget)
        elapsed = (time.perf_counter() - start) * 1000.0
        rows.append({
            "run_id": i,
            "graph": Path(cfg["points"]).stem,
            "algorithm": "coverage",
            "R": budget,
            "welfare": result.covered_count,
            "gain": result.spent,
            "runtime_ms": round(elapsed, 3),
        })
    out = Path(cfg["out"])
    _write_csv(out, RESULT_COLUMNS, rows)
    _write_summary(out, command, cfg, len(rows))
    return 0


def _cmd_learn(args, command: str) -> int:
    cfg = _merge_config(args, {
        "graph": None, "fixture": None, "K": 1, "trials": 100,
        "ratio": 0.7, "seed": 0, "backend": EXACT, "out": "learn.csv",
    })
    graph, graph_id = _load_graph(argparse.Namespace(**cfg))
    table = learning.run_learning_trials(
        graph, int(cfg["K"]), int(cfg["trials"]),
        base_seed=int(cfg["seed"]), ratio=float(cfg["ratio"]),
        backend=cfg["backend"],
    )
    method = "fixture" if cfg["fixture"] else "file"
    rows = []
    for row in table.rows:
        for split_name in ("train", "test"):
            for metric in learning.PERF_METRICS:
                score = getattr(row, split_name)[metric - 1]
                rows.append({
                    "dataset": graph_id, "method": method, "param": "",
                    "K": cfg["K"], "trial": row.trial, "split": split_name,
                    "metric": f"perf{metric}", "value": score.value,
                })
    for stat_name, table_values in (("mean", table.means), ("sd", table.sds)):
        for (split_name, metric), value in sorted(table_values.items()):
            rows.append({
                "dataset": graph_id, "method": method, "param": "",
                "K": cfg["K"], "trial": stat_name, "split": split_name,
                "metric": f"perf{metric}", "value": value,
            })
    out = Path(cfg["out"])
    _write_csv(out, LEARN_COLUMNS, rows)
    _write_summary(out, command, cfg, len(rows))
    return 0


# -- parser ----------------------------------------------------------------------


def _add_common(sub):
    sub.add_argument("--config", help="JSON config file; flags override it")
    sub.add_argument("--out", help="output CSV path")


def _add_graph_source(sub):
    sub.add_argument("--graph", help="graph JSON file")
    sub.add_argument("--fixture", help="fixture family, e.g. FAM-POSNEG:3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disclose",
        description="Budgeted label-disclosure experiments on bipartite graphs",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("reveal", help="run reveal algorithms on a graph")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--algos")
    p.add_argument("--mode", choices=sorted(MODES))
    p.add_argument("--K")
    p.add_argument("--d", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--backend", choices=(EXACT, "float"))
    p.add_argument("--with-opt", dest="with_opt", action="store_const", const=True)

    p = subs.add_parser("fixture", help="generate a fixture graph and run algorithms")
    _add_common(p)
    p.add_argument("family", help="fixture family, e.g. TAB7 or FAM-POSNEG:3")
    p.add_argument("--graph-out", dest="graph_out", help="also write the graph JSON")
    p.add_argument("--algos")
    p.add_argument("--mode", choices=sorted(MODES))
    p.add_argument("--K")
    p.add_argument("--d", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--backend", choices=(EXACT, "float"))
    p.add_argument("--with-opt", dest="with_opt", action="store_const", const=True)

    p = subs.add_parser("gen", help="build a geometric graph from a feature CSV")
    _add_common(p)
    p.add_argument("--input")
    p.add_argument("--label-column", dest="label_column")
    p.add_argument("--method", choices=(graphgen.KNN, graphgen.THRESHOLD))
    p.add_argument("--param", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-rows", dest="max_rows", type=int)

    p = subs.add_parser("intervene", help="pre/post-reveal intervention gains")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--K")
    p.add_argument("--B")
    p.add_argument("--backend", choices=(EXACT, "float"))

    p = subs.add_parser("fairness", help="per-group budget-split runs")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--K", type=int)
    p.add_argument("--algorithm", choices=("greedy", "proxy-greedy"))
    p.add_argument("--mode", choices=sorted(MODES))
    p.add_argument("--backend", choices=(EXACT, "float"))
    p.add_argument("--with-opt", dest="with_opt", action="store_const", const=True)

    p = subs.add_parser("coverage", help="greedy coverage-radius expansion")
    _add_common(p)
    p.add_argument("--points", help="CSV of kind,coords rows")
    p.add_argument("--R")

    p = subs.add_parser("learn", help="train/test splits and Perf metrics")
    _add_common(p)
    _add_graph_source(p)
    p.add_argument("--K", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--ratio", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--backend", choices=(EXACT, "float"))

    return parser


_HANDLERS = {
    "reveal": _cmd_reveal,
    "fixture": _cmd_fixture,
    "gen": _cmd_gen,
    "intervene": _cmd_intervene,
    "fairness": _cmd_fairness,
    "coverage": _cmd_coverage,
    "learn": _cmd_learn,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except SearchSpaceTooLarge as exc:
        print(f"guard tripped: {exc}", file=sys.stderr)
        return 4
    except DiscloseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
