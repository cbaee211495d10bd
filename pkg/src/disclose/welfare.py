"""Exact and proxy social-welfare evaluation.

An agent's probability mass on positive neighbors is a function of its
degree profile and of how many of its neighbors are revealed:

* true mass: 1 once any positive neighbor is revealed; otherwise the
  positive fraction among neighbors not yet revealed negative; 0 for agents
  without positive neighbors.
* proxy mass: identical in the saturated and degenerate cases, but every
  revealed negative neighbor beyond the first contributes only the
  first-negative increment, which keeps the welfare sum submodular.

Two arithmetic backends are supported. The exact backend represents each
agent's possible masses as integers scaled by a per-graph common
denominator, so welfare totals, ties, and zero-gain stops are exact; values
surface as :class:`fractions.Fraction`. The float backend trades exactness
for speed on large instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Optional, Sequence, Union

from .errors import AlreadyRevealed, IndexOutOfRange
from .graph import POSITIVE_LABEL, BipartiteGraph

TRUE = "true"
PROXY = "proxy"
EXACT = "exact"
FLOAT = "float"

WelfareValue = Union[Fraction, float]

# Absolute tolerance when float-backend results are compared to exact ones.
FLOAT_ABS_TOL = 1e-12


@dataclass(frozen=True)
class RevealSet:
    """Ordered set of revealed target indices (no duplicates)."""

    order: tuple[int, ...] = ()

    @classmethod
    def of(cls, targets: Iterable[int]) -> "RevealSet":
        order = tuple(int(t) for t in targets)
        if len(set(order)) != len(order):
            raise AlreadyRevealed(f"duplicate targets in {order}")
        return cls(order)

    @property
    def members(self) -> frozenset[int]:
        return frozenset(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __contains__(self, target: int) -> bool:
        return target in self.order


RevealLike = Union[RevealSet, Iterable[int]]


def _order_of(reveal: RevealLike) -> tuple[int, ...]:
    if isinstance(reveal, RevealSet):
        return reveal.order
    return RevealSet.of(reveal).order


def _check_targets(graph: BipartiteGraph, order: Sequence[int]) -> None:
    for t in order:
        graph.check_target(t)


# -- per-agent mass tables ----------------------------------------------------
#
# rows[x] is None when the agent has no positive neighbor (mass identically 0);
# otherwise rows[x][j] is the agent's scaled mass with j revealed negative
# neighbors and no revealed positive one.


@lru_cache(maxsize=512)
def _exact_tables(graph: BipartiteGraph, kind: str):
    denominators: list[int] = []
    profiles: list[tuple[int, int]] = []
    for x in range(graph.n):
        deg = graph.degrees(x)
        profiles.append(deg)
        if deg.pos == 0:
            continue
        size = deg.pos + deg.neg
        if kind == TRUE:
            denominators.extend(range(deg.pos, size + 1))
        else:
            denominators.append(size)
            if deg.neg >= 1:
                denominators.append(size * (size - 1))
    den = lcm(*denominators) if denominators else 1
    rows: list[Optional[tuple[int, ...]]] = []
    for dpos, dneg in profiles:
        if dpos == 0:
            rows.append(None)
            continue
        size = dpos + dneg
        if kind == TRUE:
            rows.append(tuple(den * dpos // (size - j) for j in range(dneg + 1)))
        else:
            row = [den * dpos // size]
            for j in range(1, dneg + 1):
                row.append(den * dpos * (size + j - 1) // ((size - 1) * size))
            rows.append(tuple(row))
    return den, tuple(rows)


@lru_cache(maxsize=512)
def _float_tables(graph: BipartiteGraph, kind: str):
    rows: list[Optional[tuple[float, ...]]] = []
    for x in range(graph.n):
        dpos, dneg = graph.degrees(x)
        if dpos == 0:
            rows.append(None)
            continue
        size = dpos + dneg
        if kind == TRUE:
            rows.append(tuple(dpos / (size - j) for j in range(dneg + 1)))
        else:
            row = [dpos / size]
            for j in range(1, dneg + 1):
                row.append(dpos / (size - 1) * (1.0 + (j - 1) / size))
            rows.append(tuple(row))
    return tuple(rows)


class Evaluator:
    """Incremental welfare evaluator for one (graph, kind, backend) triple.

    Tracks per-agent revealed-neighbor counters so that adding or removing a
    target, or probing its marginal gain, costs O(deg(target)). Instances
    are per-search state and must not be shared across threads.
    """

    __slots__ = ("graph", "kind", "backend", "_rows", "_one", "_den",
                 "_pos_rev", "_neg_rev", "_total")

    def __init__(
        self,
        graph: BipartiteGraph,
        kind: str = TRUE,
        backend: str = EXACT,
        initial: RevealLike = (),
    ):
        if kind not in (TRUE, PROXY):
            raise ValueError(f"unknown welfare kind {kind!r}")
        if backend not in (EXACT, FLOAT):
            raise ValueError(f"unknown backend {backend!r}")
        self.graph = graph
        self.kind = kind
        self.backend = backend
        if backend == EXACT:
            self._den, self._rows = _exact_tables(graph, kind)
            self._one = self._den
            self._total = 0
        else:
            self._rows = _float_tables(graph, kind)
            self._den = None
            self._one = 1.0
            self._total = 0.0
        self._pos_rev = [0] * graph.n
        self._neg_rev = [0] * graph.n
        for row in self._rows:
            if row is not None:
                self._total += row[0]
        for t in _order_of(initial):
            graph.check_target(t)
            self.add(t)

    # -- state updates ---------------------------------------------------

    def add(self, target: int) -> None:
        positive = self.graph.labels[target] == POSITIVE_LABEL
        rows, pos_rev, neg_rev = self._rows, self._pos_rev, self._neg_rev
        one = self._one
        delta = 0 if self._den is not None else 0.0
        for a in self.graph.reverse[target]:
            row = rows[a]
            if row is None:
                # mass pinned at 0; counters still tracked for remove()
                if positive:
                    pos_rev[a] += 1
                else:
                    neg_rev[a] += 1
                continue
            old = one if pos_rev[a] else row[neg_rev[a]]
            if positive:
                pos_rev[a] += 1
            else:
                neg_rev[a] += 1
            new = one if pos_rev[a] else row[neg_rev[a]]
            delta += new - old
        self._total += delta

    def remove(self, target: int) -> None:
        positive = self.graph.labels[target] == POSITIVE_LABEL
        rows, pos_rev, neg_rev = self._rows, self._pos_rev, self._neg_rev
        one = self._one
        delta = 0 if self._den is not None else 0.0
        for a in self.graph.reverse[target]:
            row = rows[a]
            if row is None:
                if positive:
                    pos_rev[a] -= 1
                else:
                    neg_rev[a] -= 1
                continue
            old = one if pos_rev[a] else row[neg_rev[a]]
            if positive:
                pos_rev[a] -= 1
            else:
                neg_rev[a] -= 1
            new = one if pos_rev[a] else row[neg_rev[a]]
            delta += new - old
        self._total += delta

    def marginal_raw(self, target: int, agent_mask: Optional[Sequence[bool]] = None):
        """Gain in raw (scaled/float) units from adding ``target``; no commit."""
        positive = self.graph.labels[target] == POSITIVE_LABEL
        rows, pos_rev, neg_rev = self._rows, self._pos_rev, self._neg_rev
        one = self._one
        gain = 0 if self._den is not None else 0.0
        for a in self.graph.reverse[target]:
            if agent_mask is not None and not agent_mask[a]:
                continue
            row = rows[a]
            if row is None or pos_rev[a]:
                continue
            old = row[neg_rev[a]]
            gain += (one if positive else row[neg_rev[a] + 1]) - old
        return gain

    # -- readouts ----------------------------------------------------------

    @property
    def raw_total(self):
        return self._total

    def to_value(self, raw) -> WelfareValue:
        if self._den is not None:
            return Fraction(raw, self._den)
        return raw

    def value(self) -> WelfareValue:
        return self.to_value(self._total)

    def mass(self, agent: int) -> WelfareValue:
        row = self._rows[agent]
        if row is None:
            raw = 0 if self._den is not None else 0.0
        elif self._pos_rev[agent]:
            raw = self._one
        else:
            raw = row[self._neg_rev[agent]]
        return self.to_value(raw)


# -- public operations ---------------------------------------------------------


def agent_mass(
    graph: BipartiteGraph,
    reveal: RevealLike,
    agent: int,
    kind: str = TRUE,
    backend: str = EXACT,
) -> WelfareValue:
    """Probability mass ``agent`` puts on positive neighbors given ``reveal``."""
    if not 0 <= agent < graph.n:
        raise IndexOutOfRange(f"agent index {agent} outside [0, {graph.n})")
    order = _order_of(reveal)
    _check_targets(graph, order)
    members = set(order)
    dpos, dneg = graph.degrees(agent)
    pos_rev = 0
    neg_rev = 0
    for t in graph.neighbors(agent):
        if t in members:
            if graph.labels[t] == POSITIVE_LABEL:
                pos_rev += 1
            else:
                neg_rev += 1
    if pos_rev > 0:
        return Fraction(1) if backend == EXACT else 1.0
    if dpos == 0:
        return Fraction(0) if backend == EXACT else 0.0
    size = dpos + dneg
    if kind == TRUE:
        if backend == EXACT:
            return Fraction(dpos, size - neg_rev)
        return dpos / (size - neg_rev)
    if backend == EXACT:
        scale = Fraction(dpos, size - (1 if neg_rev >= 1 else 0))
        return scale * (1 + Fraction(max(0, neg_rev - 1), size))
    return dpos / (size - (1 if neg_rev >= 1 else 0)) * (1.0 + max(0, neg_rev - 1) / size)


def social_welfare(
    graph: BipartiteGraph,
    reveal: RevealLike = (),
    kind: str = TRUE,
    backend: str = EXACT,
) -> WelfareValue:
    """Sum of agent masses over all agents."""
    order = _order_of(reveal)
    _check_targets(graph, order)
    return Evaluator(graph, kind, backend, order).value()


def welfare_gain(
    graph: BipartiteGraph,
    reveal: RevealLike,
    kind: str = TRUE,
    backend: str = EXACT,
) -> WelfareValue:
    """Welfare under ``reveal`` minus the true welfare of the empty set.

    The empty-set reference is the true welfare for both kinds; the proxy
    gain is defined against the same baseline (true and proxy masses agree
    on the empty set anyway).
    """
    return social_welfare(graph, reveal, kind, backend) - social_welfare(
        graph, (), TRUE, backend
    )


def marginal_gain(
    graph: BipartiteGraph,
    reveal: RevealLike,
    target: int,
    kind: str = TRUE,
    backend: str = EXACT,
) -> WelfareValue:
    """Welfare delta from adding ``target`` to ``reveal``.

    Only agents adjacent to ``target`` are re-evaluated.
    """
    graph.check_target(target)
    order = _order_of(reveal)
    _check_targets(graph, order)
    if target in order:
        raise AlreadyRevealed(f"target {target} already revealed")
    ev = Evaluator(graph, kind, backend, order)
    return ev.to_value(ev.marginal_raw(target))
