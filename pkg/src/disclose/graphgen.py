"""Graph construction: dataset ingestion, geometric bipartite builders
(kNN and distance threshold), and deterministic fixture families.

Fixture families index positive targets before negative ones so that
index-order tie-breaking reproduces the documented worst cases.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from .errors import BadParams, DataError, DimensionMismatch, EmptyAfterFiltering
from .graph import AgentClass, BipartiteGraph

KNN = "knn"
THRESHOLD = "threshold"

FIXTURE_FAMILIES = (
    "FIG1",
    "FIG2",
    "FAM-NEG",
    "FAM-POSNEG",
    "FAM-TIE",
    "FAM-EXP",
    "TAB7",
    "MAXCOVER-GADGET",
)


# -- dataset ingestion and preparation -----------------------------------------


@dataclass(frozen=True)
class FeatureTable:
    """Raw tabular features plus a binary label per row.

    Cells may still be strings; categorical columns are label-encoded
    during preparation.
    """

    columns: tuple[str, ...]
    rows: tuple[tuple[Any, ...], ...]
    labels: tuple[int, ...]


@dataclass(frozen=True)
class PreparedData:
    """Standardized feature split ready for graph generation."""

    x_lhs: np.ndarray
    x_rhs: np.ndarray
    y_rhs: np.ndarray


def read_feature_csv(path, label_column: str) -> FeatureTable:
    """Read a UTF-8 CSV with header; the label column must hold 0/1."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise DataError(f"{path}: empty file")
            if label_column not in header:
                raise DataError(f"{path}: no column named {label_column!r}")
            label_idx = header.index(label_column)
            rows = []
            labels = []
            for line_no, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(header):
                    raise DataError(f"{path}:{line_no}: ragged row")
                try:
                    labels.append(int(float(row[label_idx])))
                except ValueError as exc:
                    raise DataError(f"{path}:{line_no}: non-numeric label") from exc
                if labels[-1] not in (0, 1):
                    raise DataError(f"{path}:{line_no}: label must be 0 or 1")
                rows.append(tuple(v for i, v in enumerate(row) if i != label_idx))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    columns = tuple(c for i, c in enumerate(header) if i != label_idx)
    return FeatureTable(columns, tuple(rows), tuple(labels))


def _encode_columns(table: FeatureTable) -> np.ndarray:
    """Numeric matrix with categorical columns label-encoded."""
    n = len(table.rows)
    width = len(table.columns)
    out = np.empty((n, width))
    for j in range(width):
        raw = [row[j] for row in table.rows]
        try:
            out[:, j] = [float(v) for v in raw]
        except (TypeError, ValueError):
            codes = {v: i for i, v in enumerate(sorted({str(v) for v in raw}))}
            out[:, j] = [codes[str(v)] for v in raw]
    return out


def prepare_dataset(
    table: FeatureTable,
    seed: int = 0,
    max_rows: int = 500,
) -> PreparedData:
    """Encode, dedupe, subsample, standardize, and split a feature table.

    Rows are deduplicated (features plus label, first occurrence kept),
    subsampled to at most ``max_rows`` uniformly at random, z-scored per
    column (population sd; constant columns map to 0), and split 90/10 into
    agent-side and target-side rows by a seeded permutation. Agent-side
    rows with a positive label are dropped and their labels discarded.
    """
    if not table.rows:
        raise EmptyAfterFiltering("feature table has no rows")
    matrix = _encode_columns(table)
    labels = np.array(table.labels)

    seen: set[tuple] = set()
    keep = []
    for i in range(matrix.shape[0]):
        key = (tuple(matrix[i]), int(labels[i]))
        if key not in seen:
            seen.add(key)
            keep.append(i)
    matrix, labels = matrix[keep], labels[keep]

    rng = random.Random(seed)
    if matrix.shape[0] > max_rows:
        picked = sorted(rng.sample(range(matrix.shape[0]), max_rows))
        matrix, labels = matrix[picked], labels[picked]

    mean = matrix.mean(axis=0)
    sd = matrix.std(axis=0)
    sd[sd == 0] = 1.0
    matrix = (matrix - mean) / sd

    perm = list(range(matrix.shape[0]))
    rng.shuffle(perm)
    cut = int(len(perm) * 0.9)
    lhs_idx = perm[:cut]
    rhs_idx = perm[cut:]
    lhs_idx = [i for i in lhs_idx if labels[i] != 1]
    if not lhs_idx or not rhs_idx:
        raise EmptyAfterFiltering(
            f"split left {len(lhs_idx)} agent rows and {len(rhs_idx)} target rows"
        )
    return PreparedData(
        x_lhs=matrix[lhs_idx],
        x_rhs=matrix[rhs_idx],
        y_rhs=labels[rhs_idx],
    )


# -- geometric graph construction ----------------------------------------------


def build_graph(
    x_lhs: np.ndarray,
    x_rhs: np.ndarray,
    y_rhs: Sequence[int],
    method: str = KNN,
    param: float = 1,
) -> BipartiteGraph:
    """Bipartite graph from agent/target feature rows.

    ``method="knn"`` links each agent to its ``param`` nearest target rows
    (distance ties break toward the smaller row index); ``"threshold"``
    links every pair at Euclidean distance at most ``param``. Target rows
    that gained no edge are dropped and indices compacted; labels map 1 to
    +1 and 0 to -1.
    """
    x_lhs = np.asarray(x_lhs, dtype=float)
    x_rhs = np.asarray(x_rhs, dtype=float)
    y_rhs = np.asarray(y_rhs, dtype=int)
    if x_lhs.ndim != 2 or x_rhs.ndim != 2:
        raise DimensionMismatch("feature matrices must be 2-d")
    if x_lhs.shape[1] != x_rhs.shape[1]:
        raise DimensionMismatch(
            f"agents have {x_lhs.shape[1]} features, targets {x_rhs.shape[1]}"
        )
    if y_rhs.shape[0] != x_rhs.shape[0]:
        raise DimensionMismatch("one label per target row required")
    dist = np.linalg.norm(x_lhs[:, None, :] - x_rhs[None, :, :], axis=2)
    neighborhoods: list[list[int]] = []
    if method == KNN:
        k = int(param)
        if k < 1:
            raise BadParams(f"k_max {k} < 1")
        for i in range(dist.shape[0]):
            ranked = np.argsort(dist[i], kind="stable")
            neighborhoods.append(sorted(int(j) for j in ranked[:k]))
    elif method == THRESHOLD:
        if param < 0:
            raise BadParams(f"threshold {param} < 0")
        for i in range(dist.shape[0]):
            neighborhoods.append([int(j) for j in np.nonzero(dist[i] <= param)[0]])
    else:
        raise BadParams(f"unknown method {method!r}")

    used = sorted({j for nb in neighborhoods for j in nb})
    compact = {j: idx for idx, j in enumerate(used)}
    adjacency = [[compact[j] for j in nb] for nb in neighborhoods]
    labels = [1 if y_rhs[j] == 1 else -1 for j in used]
    return BipartiteGraph.build(adjacency, labels)


def graph_stats(graph: BipartiteGraph, param: str = "", value="") -> dict:
    """Summary row matching the generated-graph statistics columns."""
    classes = [graph.agent_class(x) for x in range(graph.n)]
    helpable = {x for x in range(graph.n) if classes[x] is AgentClass.HELPABLE}
    uni_pos = sum(
        1
        for t in graph.positive_targets
        if helpable and helpable <= set(graph.reverse[t])
    )
    degree_total = sum(len(row) for row in graph.adjacency)
    return {
        "param": param,
        "value": value,
        "m_neg": len(graph.negative_targets),
        "m_pos": len(graph.positive_targets),
        "avg_lhs": degree_total / graph.n if graph.n else 0.0,
        "only_pos_ns": sum(1 for c in classes if c is AgentClass.ONLY_POSITIVE),
        "only_neg_ns": sum(1 for c in classes if c is AgentClass.ONLY_NEGATIVE),
        "empty_ns": sum(1 for c in classes if c is AgentClass.EMPTY),
        "uni_pos": uni_pos,
    }


# -- deterministic fixture families ---------------------------------------------


@dataclass(frozen=True)
class FixtureSpec:
    family: str
    params: dict

    def build(self) -> BipartiteGraph:
        return make_fixture(self.family, **self.params)


def parse_fixture_name(text: str) -> FixtureSpec:
    """Parse "FAMILY" or "FAMILY:kappa" into a spec."""
    name, _, arg = text.partition(":")
    name = name.strip().upper()
    params: dict = {}
    if arg:
        try:
            params["kappa"] = int(arg)
        except ValueError as exc:
            raise BadParams(f"bad fixture parameter {arg!r}") from exc
    return FixtureSpec(name, params)


def _unique_pos_shared_neg(n_agents: int, n_negatives: int) -> BipartiteGraph:
    """Each agent: one private positive target plus every shared negative."""
    negatives = list(range(n_agents, n_agents + n_negatives))
    adjacency = [[i] + negatives for i in range(n_agents)]
    labels = [1] * n_agents + [-1] * n_negatives
    return BipartiteGraph.build(adjacency, labels)


def make_fixture(
    family: str,
    kappa: Optional[int] = None,
    universe: Optional[int] = None,
    sets: Optional[Sequence[Sequence[int]]] = None,
) -> BipartiteGraph:
    """Deterministic generator for the documented example families."""
    family = family.upper()
    if family not in FIXTURE_FAMILIES:
        raise BadParams(f"unknown fixture family {family!r}")

    if family == "FIG1":
        # Two agents sharing one negative target, one private positive each.
        return BipartiteGraph.build([[0, 2], [1, 2]], [1, 1, -1])

    if family == "FIG2":
        # Four agents, one private positive each, two shared negatives.
        return _unique_pos_shared_neg(4, 2)

    if family == "TAB7":
        # Ten agents over five positive and four negative targets.
        adjacency = [
            [7, 8],
            [3, 5, 8],
            [0, 5, 6, 7, 8],
            [4, 8],
            [6],
            [5, 6, 8],
            [8],
            [1, 2, 5, 6],
            [6, 7],
            [1, 8],
        ]
        labels = [1] * 5 + [-1] * 4
        return BipartiteGraph.build(adjacency, labels)

    if family == "FAM-POSNEG":
        if kappa is None or kappa < 3:
            raise BadParams("FAM-POSNEG needs kappa >= 3")
        return _unique_pos_shared_neg(kappa * kappa, kappa + 1)

    if family == "FAM-TIE":
        if kappa is None or kappa < 3:
            raise BadParams("FAM-TIE needs kappa >= 3")
        return _unique_pos_shared_neg(kappa * kappa, kappa)

    if family == "FAM-EXP":
        if kappa is None or kappa < 7:
            raise BadParams("FAM-EXP needs kappa >= 7")
        n_agents = kappa * kappa // (kappa - 2) + kappa
        return _unique_pos_shared_neg(n_agents, kappa + 1)

    if family == "FAM-NEG":
        if kappa is None or kappa < 4:
            raise BadParams("FAM-NEG needs kappa >= 4")
        crowd = kappa * kappa // 2
        pairs = kappa + 1
        n = crowd + pairs
        # positives: one per agent, crowd agents first; negatives: the
        # crowd's shared block first, then one private per pair agent.
        shared = list(range(n, n + pairs))
        adjacency = [[i] + shared for i in range(crowd)]
        for j in range(pairs):
            adjacency.append([crowd + j, n + pairs + j])
        labels = [1] * n + [-1] * (2 * pairs)
        return BipartiteGraph.build(adjacency, labels)

    if family == "MAXCOVER-GADGET":
        if universe is None or sets is None:
            raise BadParams("MAXCOVER-GADGET needs universe size and sets")
        if universe < 1 or any(
            e < 0 or e >= universe for group in sets for e in group
        ):
            raise BadParams("set elements must lie inside the universe")
        pos_of = {j: j for j in range(len(sets))}
        pos_neighbors: list[list[int]] = [[] for _ in range(universe)]
        for j, group in enumerate(sets):
            for e in sorted(set(group)):
                pos_neighbors[e].append(pos_of[j])
        # one private negative per positive edge keeps F(empty) = n/2
        next_neg = len(sets)
        adjacency = []
        neg_count = 0
        for e in range(universe):
            privates = list(range(next_neg, next_neg + len(pos_neighbors[e])))
            next_neg += len(privates)
            neg_count += len(privates)
            adjacency.append(sorted(pos_neighbors[e]) + privates)
        labels = [1] * len(sets) + [-1] * neg_count
        return BipartiteGraph.build(adjacency, labels)

    raise BadParams(f"unhandled fixture family {family!r}")
