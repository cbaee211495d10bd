"""Coverage-radius expansion on geometric point sets.

Positive targets start with radius zero and a shared budget. Repeatedly,
the target whose nearest uncovered agent is cheapest to reach (distance
minus current radius) expands by exactly that cost; an agent within or at a
target's radius counts as covered. The loop stops when the cheapest
expansion exceeds the remaining budget or everyone is covered.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DimensionMismatch

COST_TOL = 1e-12


@dataclass(frozen=True)
class CoverageInstance:
    """Agents and positive targets as points in R^d."""

    agents: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        agents = np.asarray(self.agents, dtype=float)
        targets = np.asarray(self.targets, dtype=float)
        if agents.ndim != 2 or targets.ndim != 2:
            raise DimensionMismatch("point arrays must be 2-d (points x coords)")
        if agents.shape[1] != targets.shape[1]:
            raise DimensionMismatch(
                f"agents have {agents.shape[1]} coords, targets {targets.shape[1]}"
            )
        if not (np.isfinite(agents).all() and np.isfinite(targets).all()):
            raise DataError("coverage points must be finite")
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "targets", targets)

    @property
    def n(self) -> int:
        return self.agents.shape[0]

    @property
    def m(self) -> int:
        return self.targets.shape[0]


@dataclass(frozen=True)
class CoverageResult:
    radii: np.ndarray
    covered: np.ndarray
    steps: tuple[tuple[int, float], ...] = field(default=())

    @property
    def covered_count(self) -> int:
        return int(self.covered.sum())

    @property
    def spent(self) -> float:
        return float(self.radii.sum())


def greedy_coverage(instance: CoverageInstance, budget: float) -> CoverageResult:
    """Expand target radii greedily under a total budget.

    Per iteration the minimum-cost target (ties to the smaller index) grows
    to its nearest uncovered agent, covering every agent inside the new
    radius. Returned radii always sum to at most ``budget``.
    """
    if budget < 0:
        raise ValueError(f"radius budget {budget} < 0")
    n, m = instance.n, instance.m
    radii = np.zeros(m)
    if n == 0 or m == 0:
        return CoverageResult(radii, np.zeros(n, dtype=bool))
    dist = np.linalg.norm(
        instance.targets[:, None, :] - instance.agents[None, :, :], axis=2
    )
    order = np.argsort(dist, axis=1, kind="stable")
    covered = (dist <= radii[:, None] + COST_TOL).any(axis=0)
    pointers = np.zeros(m, dtype=int)
    remaining = float(budget)
    steps: list[tuple[int, float]] = []
    while remaining > 0 and not covered.all():
        costs = np.full(m, np.inf)
        for i in range(m):
            while pointers[i] < n and covered[order[i, pointers[i]]]:
                pointers[i] += 1
            if pointers[i] < n:
                costs[i] = dist[i, order[i, pointers[i]]] - radii[i]
        winner = int(np.argmin(costs))
        cost = float(costs[winner])
        if not np.isfinite(cost) or cost > remaining + COST_TOL:
            break
        cost = max(cost, 0.0)
        radii[winner] += cost
        remaining -= cost
        covered |= dist[winner] <= radii[winner] + COST_TOL
        pointers[winner] += 1
        steps.append((winner, cost))
    return CoverageResult(radii, covered, tuple(steps))


def read_points_csv(path) -> CoverageInstance:
    """Load an instance from rows of (kind, coord...), kind in {agent, target}."""
    agents: list[list[float]] = []
    targets: list[list[float]] = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            for line_no, row in enumerate(reader, start=1):
                if not row or row[0].strip().lower() == "kind":
                    continue
                kind = row[0].strip().lower()
                try:
                    coords = [float(v) for v in row[1:]]
                except ValueError as exc:
                    raise DataError(f"{path}:{line_no}: bad coordinate") from exc
                if kind == "agent":
                    agents.append(coords)
                elif kind == "target":
                    targets.append(coords)
                else:
                    raise DataError(f"{path}:{line_no}: unknown kind {kind!r}")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not agents or not targets:
        raise DataError(f"{path}: need at least one agent and one target row")
    widths = {len(r) for r in agents} | {len(r) for r in targets}
    if len(widths) != 1:
        raise DimensionMismatch(f"{path}: rows disagree on dimension: {sorted(widths)}")
    return CoverageInstance(np.array(agents), np.array(targets))
