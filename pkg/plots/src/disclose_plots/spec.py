"""Figure specifications: what to read, how to group it, where to draw it."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


class SchemaMismatch(Exception):
    """Input CSV is empty or lacks the columns the figure kind needs."""


FIGURE_KINDS = (
    "welfare_compare",
    "intervention_gains",
    "learning_perf",
    "coverage_curve",
)

# columns each kind requires in the input CSV
REQUIRED_COLUMNS = {
    "welfare_compare": ("algorithm", "K", "welfare"),
    "intervention_gains": ("algorithm", "K", "B", "gain"),
    "learning_perf": ("K", "trial", "split", "metric", "value"),
    "coverage_curve": ("graph", "R", "welfare"),
}

DEFAULT_GROUP_BY = {
    "welfare_compare": ("algorithm",),
    "intervention_gains": ("algorithm", "B"),
    "learning_perf": ("split", "metric"),
    "coverage_curve": ("graph",),
}


@dataclass(frozen=True)
class FigureSpec:
    input: Path
    kind: str
    output: Path
    group_by: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaMismatch(
                f"unknown figure kind {self.kind!r}; pick from {FIGURE_KINDS}"
            )
        object.__setattr__(self, "input", Path(self.input))
        object.__setattr__(self, "output", Path(self.output))
        object.__setattr__(self, "group_by", tuple(self.group_by))

    @property
    def effective_group_by(self) -> tuple[str, ...]:
        return self.group_by or DEFAULT_GROUP_BY[self.kind]


def load_spec(path) -> FigureSpec:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    unknown = set(data) - {"input", "kind", "output", "group_by"}
    if unknown:
        raise SchemaMismatch(f"unknown spec keys: {sorted(unknown)}")
    try:
        return FigureSpec(
            input=data["input"],
            kind=data["kind"],
            output=data["output"],
            group_by=tuple(data.get("group_by", ())),
        )
    except KeyError as exc:
        raise SchemaMismatch(f"spec missing required key {exc}") from exc
