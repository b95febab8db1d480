from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .algebra import FiniteAlgebra


@dataclass(frozen=True)
class Matrix:
    """An algebra with a designated subset (its truth set)."""

    algebra: FiniteAlgebra
    designated: frozenset[int]

    def __post_init__(self):
        d = frozenset(int(a) for a in self.designated)
        if any(not 0 <= a < self.algebra.size for a in d):
            raise ValueError("designated set not inside the universe")
        object.__setattr__(self, "designated", d)

    @classmethod
    def of(cls, algebra: FiniteAlgebra, designated: Iterable[int]) -> "Matrix":
        return cls(algebra, frozenset(designated))

    @property
    def almost_trivial(self) -> bool:
        return not self.designated

    @property
    def signature(self):
        return self.algebra.signature

    def render(self) -> str:
        A = self.algebra
        d = ",".join(A.name(a) for a in sorted(self.designated))
        return f"<{A.size}-element algebra, {{{d}}}>"
