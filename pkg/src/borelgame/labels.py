"""Vertex labellings shared by the solver modules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .game import Player, format_rational


@dataclass(frozen=True)
class ValueLabels:
    """Zero-sum value of ``for_player`` from every vertex (terminals included)."""

    for_player: Player
    value: Mapping[str, Fraction]
    rounds: int = 0

    def __getitem__(self, v: str) -> Fraction:
        return self.value[v]


@dataclass(frozen=True)
class AlphaLabels:
    """One snapshot of the lower-bound labels on decision vertices.

    ``index`` counts iterations starting at 1 for the zero-sum values.
    """

    index: int
    label: Mapping[str, Fraction]

    def __getitem__(self, v: str) -> Fraction:
        return self.label[v]

    def same_labels(self, other: "AlphaLabels") -> bool:
        return dict(self.label) == dict(other.label)

    def dominates(self, other: "AlphaLabels") -> bool:
        return all(self.label[v] >= other.label[v] for v in other.label)

    def as_strings(self) -> dict:
        return {v: format_rational(q) for v, q in self.label.items()}

    @classmethod
    def constant(cls, vertices, value, index: int = 0) -> "AlphaLabels":
        return cls(index, {v: Fraction(value) for v in vertices})
