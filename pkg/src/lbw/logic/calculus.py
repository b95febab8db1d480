"""Rules, Hilbert calculi, logic presentations and matrix validity."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import PresentationError, SignatureError
from ..kernel.algebra import term_table
from ..kernel.matrix import Matrix
from ..kernel.terms import Signature, Term, Var, check_term, render_term, substitute, variables


@dataclass(frozen=True)
class Rule:
    """premises |- conclusion; an axiom has no premises."""

    premises: tuple[Term, ...]
    conclusion: Term

    @classmethod
    def of(cls, premises: Iterable[Term], conclusion: Term) -> "Rule":
        return cls(tuple(premises), conclusion)

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    def variables(self) -> frozenset[int]:
        out = variables(self.conclusion)
        for p in self.premises:
            out |= variables(p)
        return out

    def canonical(self) -> "Rule":
        """Variables renamed 0, 1, ... by first occurrence, premises first."""
        order: dict[int, int] = {}

        def visit(t):
            if isinstance(t, Var):
                order.setdefault(t.index, len(order))
            else:
                for a in t.args:
                    visit(a)

        for t in self.premises + (self.conclusion,):
            visit(t)
        sigma = {v: Var(i) for v, i in order.items()}
        return Rule(tuple(substitute(p, sigma) for p in self.premises), substitute(self.conclusion, sigma))

    def render(self) -> str:
        prem = ", ".join(render_term(p) for p in self.premises)
        return f"{prem} |- {render_term(self.conclusion)}" if prem else f"|- {render_term(self.conclusion)}"

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class HilbertCalculus:
    signature: Signature
    rules: tuple[Rule, ...]

    def __post_init__(self):
        seen, rules = set(), []
        for r in self.rules:
            for t in r.premises + (r.conclusion,):
                check_term(t, self.signature)
            c = r.canonical()
            if c not in seen:
                seen.add(c)
                rules.append(c)
        object.__setattr__(self, "rules", tuple(rules))

    @classmethod
    def of(cls, signature: Signature, rules: Iterable[Rule]) -> "HilbertCalculus":
        return cls(signature, tuple(rules))

    @property
    def axioms(self) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.is_axiom)


def _compact(terms: Sequence[Term]) -> tuple[list[Term], int]:
    """Rename the variables of ``terms`` to 0..k-1 (sorted order)."""
    vs = sorted(set().union(*(variables(t) for t in terms))) if terms else []
    sigma = {v: Var(i) for i, v in enumerate(vs)}
    return [substitute(t, sigma) for t in terms], len(vs)


def counterexample(matrix: Matrix, premises: Sequence[Term], conclusion: Term) -> dict[int, int] | None:
    """An assignment sending every premise into F and the conclusion outside, if any."""
    A = matrix.algebra
    terms = list(premises) + [conclusion]
    vs = sorted(set().union(*(variables(t) for t in terms)))
    compact, k = _compact(terms)
    n = A.size
    inF = np.zeros(n, dtype=bool)
    inF[list(matrix.designated)] = True
    ok = np.ones(n**k, dtype=bool)
    for t in compact[:-1]:
        ok &= inF[term_table(t, A, k)]
    bad = ok & ~inF[term_table(compact[-1], A, k)]
    hits = np.flatnonzero(bad)
    if not len(hits):
        return None
    idx = int(hits[0])
    digits = []
    for _ in range(k):
        digits.append(idx % n)
        idx //= n
    digits.reverse()
    return {v: d for v, d in zip(vs, digits)}


def rule_valid(rule: Rule, matrix: Matrix) -> bool:
    return counterexample(matrix, rule.premises, rule.conclusion) is None


def matrix_consequence(matrices: Sequence[Matrix], gamma: Iterable[Term], phi: Term) -> bool:
    gamma = list(gamma)
    return all(counterexample(M, gamma, phi) is None for M in matrices)


@dataclass(frozen=True)
class LogicPresentation:
    """A logic given by a calculus, a finite family of finite matrices, or both."""

    signature: Signature
    calculus: HilbertCalculus | None = None
    matrices: tuple[Matrix, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))
        if self.calculus is None and not self.matrices:
            raise PresentationError("a presentation needs a calculus or at least one matrix")
        if self.calculus is not None and self.calculus.signature != self.signature:
            raise SignatureError("calculus signature differs from the presentation's")
        for M in self.matrices:
            if M.signature != self.signature:
                raise SignatureError("matrix signature differs from the presentation's")
        if self.calculus is not None:
            for M in self.matrices:
                for r in self.calculus.rules:
                    if not rule_valid(r, M):
                        raise PresentationError(f"rule {r} fails in a presenting matrix")

    @classmethod
    def from_calculus(cls, calc: HilbertCalculus) -> "LogicPresentation":
        return cls(calc.signature, calc)

    @classmethod
    def from_matrices(cls, matrices: Iterable[Matrix]) -> "LogicPresentation":
        matrices = tuple(matrices)
        if not matrices:
            raise PresentationError("empty matrix family")
        return cls(matrices[0].signature, None, matrices)

    def consequence(self, gamma: Iterable[Term], phi: Term) -> bool | None:
        """Matrix consequence when matrices are present, else None."""
        if not self.matrices:
            return None
        return matrix_consequence(self.matrices, gamma, phi)
