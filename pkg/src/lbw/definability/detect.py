"""Searches for protodisjunctions, protoconjunctions and protoalgebraicity witnesses."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..kernel.algebra import FiniteAlgebra, term_table
from ..kernel.terms import App, Signature, Term, Var, substitute
from ..kernel.matrix import Matrix
from ..logic.calculus import HilbertCalculus, LogicPresentation, matrix_consequence
from ..logic.proof import derivable
from ..logic.verdict import DERIVED, REFUTED, UNKNOWN, TriStateVerdict
from .operators import operator_profile

DEFAULT_DETECT_DEPTH = 2
DEFAULT_MAX_TERMS = 2_000
DEFAULT_PROOF_BUDGET = 5_000

x, y = Var(0), Var(1)


@dataclass(frozen=True)
class Detection:
    term: Term | None
    checked: int
    bounds: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.term is not None


def _as_presentation(pres) -> LogicPresentation:
    return LogicPresentation.from_calculus(pres) if isinstance(pres, HilbertCalculus) else pres


def binary_terms(sig: Signature, depth: int, algebras: Sequence[FiniteAlgebra] = (), limit: int = DEFAULT_MAX_TERMS) -> list[Term]:
    """Terms in x, y up to the given depth: variables, then constants, then by depth.

    When algebras are given, terms inducing an already seen function on all
    of them are skipped.
    """
    seen = set()

    def key(t):
        if not algebras:
            return t
        return tuple(tuple(term_table(t, A, 2).tolist()) for A in algebras)

    out: list[Term] = []

    def offer(t) -> bool:
        k = key(t)
        if k in seen:
            return False
        seen.add(k)
        out.append(t)
        return len(out) >= limit

    for t in [x, y] + [App(c, ()) for c in sig.constants()]:
        if offer(t):
            return out
    level = list(out)
    for _ in range(depth):
        new = []
        for name, k in sig.symbols:
            if k == 0:
                continue
            for args in itertools.product(out, repeat=k):
                if not any(a in level for a in args):
                    continue
                t = App(name, args)
                before = len(out)
                full = offer(t)
                if len(out) > before:
                    new.append(t)
                if full:
                    return out
        level = new
        if not new:
            break
    return out


class _Oracle:
    """Decides single consequences: matrix validity when matrices present, else bounded proof.

    ``models`` are known models of the logic; a consequence failing in one of
    them is not derivable, which spares the proof search.
    """

    def __init__(self, pres: LogicPresentation, budget: int, models: Sequence[Matrix] = ()):
        self.pres = pres
        self.budget = budget
        self.models = list(models)
        self.route = "matrix-validity" if pres.matrices else "derivation"

    def holds(self, gamma: Iterable[Term], phi: Term) -> bool:
        gamma = list(gamma)
        if self.pres.matrices:
            return matrix_consequence(self.pres.matrices, gamma, phi)
        if self.models and not matrix_consequence(self.models, gamma, phi):
            return False
        return derivable(self.pres.calculus, gamma, phi, budget=self.budget, prove_only=True).derived


def _detect(pres, rules, depth, budget, limit, models=()) -> Detection:
    pres = _as_presentation(pres)
    oracle = _Oracle(pres, budget, models)
    algebras = [M.algebra for M in pres.matrices]
    cands = binary_terms(pres.signature, depth, algebras, limit)
    bounds = {"depth": depth, "route": oracle.route, "candidates": len(cands)}
    for i, t in enumerate(cands):
        if all(oracle.holds([substitute(g, {2: t}) for g in gamma], substitute(phi, {2: t})) for gamma, phi in rules):
            return Detection(t, i + 1, bounds)
    return Detection(None, len(cands), bounds)


_T = Var(2)  # placeholder for the candidate term

PROTODISJUNCTION_RULES = (([x], _T), ([y], _T))
PROTOCONJUNCTION_RULES = (([x, y], _T), ([x, _T], y), ([y, _T], x))


def detect_protodisjunction(
    pres,
    depth: int = DEFAULT_DETECT_DEPTH,
    budget: int = DEFAULT_PROOF_BUDGET,
    limit: int = DEFAULT_MAX_TERMS,
    models: Sequence[Matrix] = (),
) -> Detection:
    """First binary t with x |- t and y |- t."""
    return _detect(pres, PROTODISJUNCTION_RULES, depth, budget, limit, models)


def detect_protoconjunction(
    pres,
    depth: int = DEFAULT_DETECT_DEPTH,
    budget: int = DEFAULT_PROOF_BUDGET,
    limit: int = DEFAULT_MAX_TERMS,
    models: Sequence[Matrix] = (),
) -> Detection:
    """First binary t with x, y |- t; x, t |- y; y, t |- x."""
    return _detect(pres, PROTOCONJUNCTION_RULES, depth, budget, limit, models)


def detect_protoalgebraic(
    pres,
    family: Sequence[FiniteAlgebra] = (),
    depth: int = DEFAULT_DETECT_DEPTH,
    budget: int = DEFAULT_PROOF_BUDGET,
    max_delta: int = 2,
    limit: int = 200,
    models: Sequence[Matrix] = (),
) -> TriStateVerdict:
    """Refuted when some filter has Omega different from its Suszko congruence;
    derived when a set Delta(x, y) with |- Delta(x, x) and x, Delta(x, y) |- y is found."""
    pres = _as_presentation(pres)
    bounds = {"depth": depth, "max_delta": max_delta, "algebras": len(family)}
    if pres.calculus is not None:
        algebras = list(family) + [M.algebra for M in pres.matrices if M.algebra not in family]
        for A in algebras:
            for r in operator_profile(pres.calculus, A).rows:
                if r.leibniz != r.suszko:
                    return TriStateVerdict(REFUTED, "profile-row", countermodel=(A, r), bounds=bounds)
    oracle = _Oracle(pres, budget, models)
    cands = binary_terms(pres.signature, depth, [M.algebra for M in pres.matrices], limit)
    refl = [t for t in cands if oracle.holds([], substitute(t, {1: x}))]
    for size in range(1, max_delta + 1):
        for delta in itertools.combinations(refl, size):
            if oracle.holds([x, *delta], y):
                return TriStateVerdict(DERIVED, oracle.route, trace=delta, bounds=bounds)
    return TriStateVerdict(UNKNOWN, "bounds", bounds=bounds)
