"""Immutable bipartite agent/target graph with labels, degrees, and groups.

Agents occupy the dense index range [0, n) and targets [0, m). Each target
carries a label in {+1, -1}; agents optionally carry a group id in [0, w).
Adjacency is stored agent -> targets only; the target -> agents index is
built lazily on first reverse query.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import BadGroupId, IndexOutOfRange, InvalidAdjacency, MissingLabel

POSITIVE_LABEL = 1
NEGATIVE_LABEL = -1


class AgentDegrees(NamedTuple):
    """Counts of positive and negative target neighbors of one agent."""

    pos: int
    neg: int


class AgentClass(enum.Enum):
    """Structural classification of an agent by its neighborhood labels."""

    EMPTY = "empty"
    ONLY_POSITIVE = "only_positive"
    ONLY_NEGATIVE = "only_negative"
    HELPABLE = "helpable"


def classify(degrees: AgentDegrees) -> AgentClass:
    """Total classification of (pos, neg) degree pairs into the four classes."""
    if degrees.pos == 0 and degrees.neg == 0:
        return AgentClass.EMPTY
    if degrees.neg == 0:
        return AgentClass.ONLY_POSITIVE
    if degrees.pos == 0:
        return AgentClass.ONLY_NEGATIVE
    return AgentClass.HELPABLE


@dataclass(frozen=True)
class BipartiteGraph:
    """Unweighted bipartite graph of ``n`` agents and ``m`` labeled targets.

    Instances are immutable after :meth:`validate` and safe to share across
    threads for read-only queries.
    """

    n: int
    m: int
    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[int, ...]
    groups: Optional[tuple[int, ...]] = None

    @classmethod
    def build(
        cls,
        adjacency: Sequence[Iterable[int]],
        labels: Sequence[int],
        groups: Optional[Sequence[int]] = None,
    ) -> "BipartiteGraph":
        """Construct and validate a graph from python sequences."""
        graph = cls(
            n=len(adjacency),
            m=len(labels),
            adjacency=tuple(tuple(row) for row in adjacency),
            labels=tuple(int(v) for v in labels),
            groups=None if groups is None else tuple(int(g) for g in groups),
        )
        graph.validate()
        return graph

    def validate(self) -> None:
        """Raise unless all structural invariants hold."""
        if len(self.adjacency) != self.n:
            raise InvalidAdjacency(
                f"expected {self.n} adjacency rows, got {len(self.adjacency)}"
            )
        for agent, row in enumerate(self.adjacency):
            prev = -1
            for t in row:
                if not isinstance(t, int) or t < 0 or t >= self.m:
                    raise InvalidAdjacency(
                        f"agent {agent}: target index {t!r} outside [0, {self.m})"
                    )
                if t <= prev:
                    raise InvalidAdjacency(
                        f"agent {agent}: adjacency not strictly increasing at {t}"
                    )
                prev = t
        if len(self.labels) != self.m:
            raise MissingLabel(
                f"expected {self.m} labels, got {len(self.labels)}"
            )
        for t, label in enumerate(self.labels):
            if label not in (POSITIVE_LABEL, NEGATIVE_LABEL):
                raise MissingLabel(f"target {t}: label {label!r} not in {{+1, -1}}")
        if self.groups is not None:
            if len(self.groups) != self.n:
                raise BadGroupId(
                    f"expected {self.n} group ids, got {len(self.groups)}"
                )
            for agent, g in enumerate(self.groups):
                if not isinstance(g, int) or g < 0:
                    raise BadGroupId(f"agent {agent}: bad group id {g!r}")

    # -- neighborhood queries -------------------------------------------------

    def neighbors(self, agent: int) -> tuple[int, ...]:
        self._check_agent(agent)
        return self.adjacency[agent]

    def degrees(self, agent: int) -> AgentDegrees:
        """Counts of +1/-1 labeled neighbors of ``agent``."""
        self._check_agent(agent)
        pos = sum(1 for t in self.adjacency[agent] if self.labels[t] == POSITIVE_LABEL)
        return AgentDegrees(pos=pos, neg=len(self.adjacency[agent]) - pos)

    def agent_class(self, agent: int) -> AgentClass:
        return classify(self.degrees(agent))

    def is_c_bounded(self, c: int) -> bool:
        """True iff every agent has at most ``c`` negative neighbors."""
        if c < 1:
            raise ValueError("c must be >= 1")
        return all(self.degrees(x).neg <= c for x in range(self.n))

    @cached_property
    def positive_targets(self) -> tuple[int, ...]:
        return tuple(t for t in range(self.m) if self.labels[t] == POSITIVE_LABEL)

    @cached_property
    def negative_targets(self) -> tuple[int, ...]:
        return tuple(t for t in range(self.m) if self.labels[t] == NEGATIVE_LABEL)

    @cached_property
    def reverse(self) -> tuple[tuple[int, ...], ...]:
        """Target -> adjacent agents index, built on first use."""
        rev: list[list[int]] = [[] for _ in range(self.m)]
        for agent, row in enumerate(self.adjacency):
            for t in row:
                rev[t].append(agent)
        return tuple(tuple(r) for r in rev)

    # -- groups ---------------------------------------------------------------

    @property
    def num_groups(self) -> int:
        if self.groups is None:
            return 0
        return max(self.groups) + 1 if self.groups else 0

    def group_members(self, group: int) -> tuple[int, ...]:
        if self.groups is None:
            return ()
        return tuple(x for x in range(self.n) if self.groups[x] == group)

    def with_groups(self, groups: Sequence[int]) -> "BipartiteGraph":
        out = replace(self, groups=tuple(int(g) for g in groups))
        out.validate()
        return out

    # -- derived graphs -------------------------------------------------------

    def induced(self, agents: Iterable[int]) -> "BipartiteGraph":
        """Subgraph over the given agents; the target index space is kept."""
        keep = sorted(set(agents))
        for x in keep:
            self._check_agent(x)
        return BipartiteGraph(
            n=len(keep),
            m=self.m,
            adjacency=tuple(self.adjacency[x] for x in keep),
            labels=self.labels,
            groups=None if self.groups is None else tuple(self.groups[x] for x in keep),
        )

    # -- serialization --------------------------------------------------------

    def to_json_dict(self) -> dict:
        out: dict = {
            "n": self.n,
            "m": self.m,
            "labels": list(self.labels),
            "adjacency": [list(row) for row in self.adjacency],
        }
        if self.groups is not None:
            out["groups"] = list(self.groups)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, data: dict) -> "BipartiteGraph":
        graph = cls(
            n=int(data["n"]),
            m=int(data["m"]),
            adjacency=tuple(tuple(int(t) for t in row) for row in data["adjacency"]),
            labels=tuple(int(v) for v in data["labels"]),
            groups=tuple(int(g) for g in data["groups"]) if "groups" in data else None,
        )
        graph.validate()
        return graph

    @classmethod
    def loads(cls, text: str) -> "BipartiteGraph":
        return cls.from_json_dict(json.loads(text))

    def _check_agent(self, agent: int) -> None:
        if not 0 <= agent < self.n:
            raise IndexOutOfRange(f"agent index {agent} outside [0, {self.n})")

    def check_target(self, target: int) -> None:
        if not 0 <= target < self.m:
            raise IndexOutOfRange(f"target index {target} outside [0, {self.m})")
