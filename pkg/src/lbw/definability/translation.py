"""Parametrized equational translations and the sets they define."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from ..congruence import leibniz
from ..errors import EmptySolutionSet
from ..kernel.algebra import FiniteAlgebra, term_table
from ..kernel.constructions import expand_constant
from ..kernel.matrix import Matrix
from ..kernel.terms import Term, Var, render_term, variables

Equation = tuple[Term, Term]


def param_names(m: int) -> dict[int, str]:
    names = {0: "x"}
    names.update({i: f"y{i}" for i in range(1, m + 1)})
    return names


@dataclass(frozen=True)
class Translation:
    """Equations in x (variable 0) and parameters y1..ym (variables 1..m)."""

    m: int
    equations: tuple[Equation, ...]

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("parameter count must be nonnegative")
        eqs = tuple((l, r) for l, r in self.equations)
        for l, r in eqs:
            extra = (variables(l) | variables(r)) - set(range(self.m + 1))
            if extra:
                raise ValueError(f"variables {sorted(extra)} outside x, y1..y{self.m}")
        object.__setattr__(self, "equations", eqs)

    @classmethod
    def of(cls, m: int, equations: Iterable[Equation]) -> "Translation":
        return cls(m, tuple(equations))

    @classmethod
    def trivial(cls) -> "Translation":
        return cls(0, ((Var(0), Var(0)),))

    @property
    def equational(self) -> bool:
        return self.m == 0

    def render(self) -> str:
        names = param_names(self.m)
        body = ", ".join(f"{render_term(l, names)} ~ {render_term(r, names)}" for l, r in self.equations)
        return "{" + body + "}"

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class Check:
    """Outcome of a property check; falsy when the property fails."""

    holds: bool
    witness: Any = None

    def __bool__(self):
        return self.holds


def _eq_tables(tau: Translation, A: FiniteAlgebra) -> list[tuple[np.ndarray, np.ndarray]]:
    k = tau.m + 1
    n = A.size
    out = []
    for l, r in tau.equations:
        out.append((term_table(l, A, k).reshape(n, -1), term_table(r, A, k).reshape(n, -1)))
    return out


def solutions(tau: Translation, A: FiniteAlgebra) -> frozenset[int]:
    """Elements a with lhs = rhs at (a, c) for every parameter tuple c."""
    ok = np.ones(A.size, dtype=bool)
    for l, r in _eq_tables(tau, A):
        ok &= (l == r).all(axis=1)
    return frozenset(int(a) for a in np.flatnonzero(ok))


def defines_truth(tau: Translation, family: Sequence[Matrix], almost: bool = False) -> Check:
    """solutions(tau, A) = F for every member; witness = (matrix, element)."""
    for M in family:
        if almost and M.almost_trivial:
            continue
        diff = solutions(tau, M.algebra) ^ M.designated
        if diff:
            return Check(False, (M, min(diff)))
    return Check(True)


def check_in_reduction(tau: Translation, M: Matrix) -> bool:
    """a in F iff every equation's value pair at (a, c) lies in Omega F, for all c."""
    if M.almost_trivial:
        raise ValueError("the criterion needs a nonempty truth set")
    theta = np.asarray(leibniz(M.algebra, M.designated).ids)
    ok = np.ones(M.algebra.size, dtype=bool)
    for l, r in _eq_tables(tau, M.algebra):
        ok &= (theta[l] == theta[r]).all(axis=1)
    return frozenset(int(a) for a in np.flatnonzero(ok)) == M.designated


def expand_with_constant(family: Sequence[Matrix], tau: Translation, name: str = "c") -> list[Matrix]:
    """Expansions by a fresh constant interpreted anywhere in the solution set.

    The designated set of each expansion is the solution set itself.
    """
    out = []
    for M in family:
        sol = solutions(tau, M.algebra)
        if not sol:
            raise EmptySolutionSet(f"no solutions of {tau} in a family member")
        for a in sorted(sol):
            out.append(Matrix(expand_constant(M.algebra, name, a), sol))
    return out
