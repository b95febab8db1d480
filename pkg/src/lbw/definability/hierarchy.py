"""Classification of a logic in the extended Leibniz hierarchy.

A failed operator property on any algebra refutes the matching level for
good, since the characterizations quantify over every algebra. Successes
on finitely many algebras never certify a level; they are reported as
holding on the tested family.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from ..congruence import reduce_matrix
from ..kernel.algebra import FiniteAlgebra
from ..kernel.matrix import Matrix
from ..kernel.polynomials import DEFAULT_FREE_BUDGET
from ..kernel.terms import Var
from ..logic.calculus import HilbertCalculus, LogicPresentation
from ..logic.filters import filter_lattice
from ..logic.models import modstar
from ..logic.proof import has_theorems
from ..logic.verdict import TriStateVerdict
from .detect import detect_protoalgebraic, detect_protoconjunction, detect_protodisjunction
from .operators import (
    check_completely_order_reflecting,
    check_injective,
    check_order_reflecting,
    check_truth_implicit,
    check_truth_small,
    operator_profile,
)
from .synthesis import EXACT, SynthesisResult, synthesize_translation
from .translation import Translation, defines_truth

EQUATIONAL = "equational"
PARAMETRIZED = "parametrized"
ALMOST_PARAMETRIZED = "almost-parametrized"
SMALL = "small"
ALMOST_SMALL = "almost-small"
IMPLICIT = "implicit"
ALMOST_IMPLICIT = "almost-implicit"
PROTOALGEBRAIC = "protoalgebraic"

LEVELS = (EQUATIONAL, PARAMETRIZED, ALMOST_PARAMETRIZED, SMALL, ALMOST_SMALL, IMPLICIT, ALMOST_IMPLICIT, PROTOALGEBRAIC)

# stronger -> weaker
ARROWS = (
    (EQUATIONAL, PARAMETRIZED),
    (PARAMETRIZED, EQUATIONAL),
    (EQUATIONAL, ALMOST_PARAMETRIZED),
    (EQUATIONAL, SMALL),
    (ALMOST_PARAMETRIZED, ALMOST_SMALL),
    (SMALL, ALMOST_SMALL),
    (SMALL, IMPLICIT),
    (ALMOST_SMALL, ALMOST_IMPLICIT),
    (IMPLICIT, ALMOST_IMPLICIT),
)
# with theorems, almost parametrized definability collapses to equational
THEOREM_ARROWS = ((ALMOST_PARAMETRIZED, EQUATIONAL),)

HOLDS = "holds-definitive"
REFUTED = "refuted-definitive"
TESTED = "holds-on-tested-family"
UNKNOWN = "unknown-at-bounds"

# which operator property characterizes which level: (checker, almost)
OPERATOR_LEVELS = (
    (EQUATIONAL, "completely-order-reflecting", check_completely_order_reflecting, False),
    (ALMOST_PARAMETRIZED, "completely-order-reflecting", check_completely_order_reflecting, True),
    (SMALL, "order-reflecting", check_order_reflecting, False),
    (ALMOST_SMALL, "order-reflecting", check_order_reflecting, True),
    (IMPLICIT, "injective", check_injective, False),
    (ALMOST_IMPLICIT, "injective", check_injective, True),
)


@dataclass(frozen=True)
class Bounds:
    params: int = 1
    depth: int = 2
    free_budget: int = DEFAULT_FREE_BUDGET
    proof_budget: int = 5_000
    max_delta: int = 2

    def as_dict(self) -> dict:
        return {
            "params": self.params,
            "depth": self.depth,
            "free_budget": self.free_budget,
            "proof_budget": self.proof_budget,
            "max_delta": self.max_delta,
        }


@dataclass(frozen=True)
class LevelStatus:
    status: str
    route: str = ""
    witness: Any = None


@dataclass
class HierarchyReport:
    levels: dict[str, LevelStatus]
    theorems: TriStateVerdict
    modstar: list[Matrix]
    synthesis: list[SynthesisResult]
    operator_failures: list[tuple[str, bool, FiniteAlgebra, Any]]
    bounds: Bounds
    algebras: int
    hints: list[tuple[str, Any, bool]] = field(default_factory=list)

    def status(self, level: str) -> str:
        return self.levels[level].status


def _closure(start: str, edges) -> set[str]:
    out, stack = {start}, [start]
    while stack:
        a = stack.pop()
        for s, t in edges:
            if s == a and t not in out:
                out.add(t)
                stack.append(t)
    return out


def propagate(direct_holds: dict, direct_refuted: dict, with_theorems: bool) -> dict[str, LevelStatus]:
    """Combine direct evidence along the arrows; refutations win."""
    edges = ARROWS + (THEOREM_ARROWS if with_theorems else ())
    reverse = tuple((t, s) for s, t in edges)
    refuted: dict[str, LevelStatus] = {}
    for lvl in LEVELS:
        if lvl in direct_refuted:
            refuted[lvl] = direct_refuted[lvl]
    for lvl, st in list(direct_refuted.items()):
        for stronger in _closure(lvl, reverse):
            refuted.setdefault(stronger, LevelStatus(REFUTED, f"implies {lvl}", st.witness))
    out = {}
    for lvl in LEVELS:
        if lvl in refuted:
            if direct_holds.get(lvl, LevelStatus(UNKNOWN)).status == HOLDS:
                raise AssertionError(f"{lvl} both certified and refuted")
            out[lvl] = refuted[lvl]
            continue
        if lvl in direct_holds:
            out[lvl] = direct_holds[lvl]
            continue
        out[lvl] = LevelStatus(UNKNOWN)
    for lvl in LEVELS:
        st = out[lvl]
        if st.status not in (HOLDS, TESTED) or st.route.startswith("implied by"):
            continue
        for weaker in _closure(lvl, edges):
            if out[weaker].status == UNKNOWN:
                out[weaker] = LevelStatus(TESTED, f"implied by {lvl}", st.witness)
    return out


def _as_presentation(pres) -> LogicPresentation:
    return LogicPresentation.from_calculus(pres) if isinstance(pres, HilbertCalculus) else pres


def classify(
    pres: LogicPresentation | HilbertCalculus,
    family: Sequence[FiniteAlgebra] = (),
    bounds: Bounds = Bounds(),
    fregean: bool = False,
) -> HierarchyReport:
    pres = _as_presentation(pres)
    calc = pres.calculus
    algebras = list(dict.fromkeys(list(family) + [M.algebra for M in pres.matrices]))
    holds: dict[str, LevelStatus] = {}
    refuted: dict[str, LevelStatus] = {}

    def refute(level, route, witness):
        refuted.setdefault(level, LevelStatus(REFUTED, route, witness))

    theorems = has_theorems(pres, budget=bounds.free_budget)
    if theorems.refuted:
        refute(EQUATIONAL, "no-theorems", theorems.route)

    # operator properties, algebra by algebra
    failures = []
    if calc is not None:
        for A in algebras:
            prof = operator_profile(calc, A)
            for level, prop, checker, almost in OPERATOR_LEVELS:
                res = checker(prof, almost)
                if not res:
                    failures.append((prop, almost, A, res.witness))
                    refute(level, f"{'almost ' if almost else ''}{prop} fails", (A, res.witness))

    # reduced models of the tested family
    if calc is not None:
        ms = modstar(calc, algebras)
    else:
        ms = list(dict.fromkeys(reduce_matrix(M)[0] for M in pres.matrices))

    synth: list[SynthesisResult] = []
    if ms:
        r0 = synthesize_translation(ms, 0, EXACT, bounds.depth, almost=False, calculus=calc, budget=bounds.free_budget)
        synth.append(r0)
        if r0.found:
            holds[EQUATIONAL] = LevelStatus(TESTED, "synthesis", r0.translation)
        elif r0.definitive_none:
            refute(EQUATIONAL, "exact synthesis", ("free-algebra size", r0.free_size))
        nontrivial = [M for M in ms if M.designated]
        if nontrivial:
            for m in range(0, bounds.params + 1):
                r = synthesize_translation(nontrivial, m, EXACT, bounds.depth, almost=True, calculus=calc, budget=bounds.free_budget)
                synth.append(r)
                if r.found:
                    holds[ALMOST_PARAMETRIZED] = LevelStatus(TESTED, "synthesis", r.translation)
                    break

        for level, almost in ((IMPLICIT, False), (ALMOST_IMPLICIT, True)):
            res = check_truth_implicit(ms, almost)
            if res:
                holds.setdefault(level, LevelStatus(TESTED, "reduced models"))
            else:
                refute(level, "reduced models share an algebra", res.witness)
        if calc is not None:
            lattices = lambda A: filter_lattice(calc, A)  # noqa: E731
            for level, almost in ((SMALL, False), (ALMOST_SMALL, True)):
                res = check_truth_small(ms, lattices, almost)
                if res:
                    holds.setdefault(level, LevelStatus(TESTED, "reduced models"))
                else:
                    refute(level, "truth set not least nonempty filter", res.witness)

    proto = detect_protoalgebraic(pres, algebras if calc is not None else (), bounds.depth, bounds.proof_budget, bounds.max_delta,
                                 models=ms if calc is not None else ())
    if proto.derived:
        holds[PROTOALGEBRAIC] = LevelStatus(HOLDS, proto.route, proto.trace)
    elif proto.refuted:
        refute(PROTOALGEBRAIC, proto.route, proto.countermodel)

    hints = []
    if fregean and ms:
        d = detect_protodisjunction(pres, bounds.depth, bounds.proof_budget, models=ms)
        if d.found:
            tau = Translation(1, ((d.term, Var(0)),))
            hints.append(("protodisjunction", tau, bool(defines_truth(tau, ms, almost=True))))
        c = detect_protoconjunction(pres, bounds.depth, bounds.proof_budget, models=ms)
        if c.found:
            tau = Translation(1, ((c.term, Var(1)),))
            hints.append(("protoconjunction", tau, bool(defines_truth(tau, ms, almost=True))))

    levels = propagate(holds, refuted, theorems.derived)
    return HierarchyReport(levels, theorems, ms, synth, failures, bounds, len(algebras), hints)

