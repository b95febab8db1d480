"""Reduced and Suszko-reduced models over finite algebra families."""
from __future__ import annotations

from typing import Iterable

from ..congruence import is_reduced, suszko
from ..errors import PresentationError
from ..kernel.algebra import FiniteAlgebra
from ..kernel.matrix import Matrix
from .calculus import HilbertCalculus, LogicPresentation
from .filters import filter_lattice


def _calculus(pres) -> HilbertCalculus:
    if isinstance(pres, HilbertCalculus):
        return pres
    if pres.calculus is None:
        raise PresentationError("filters need a Hilbert calculus")
    return pres.calculus


def modstar(pres: LogicPresentation | HilbertCalculus, family: Iterable[FiniteAlgebra]) -> list[Matrix]:
    """Every <A, F> with A in the family, F a filter and Omega F the identity."""
    calc = _calculus(pres)
    out = []
    for A in family:
        for F in filter_lattice(calc, A).filters:
            M = Matrix(A, F)
            if is_reduced(M):
                out.append(M)
    return out


def modsuszko(pres: LogicPresentation | HilbertCalculus, family: Iterable[FiniteAlgebra]) -> list[Matrix]:
    """Every <A, F> with A in the family, F a filter and the Suszko congruence of F trivial."""
    calc = _calculus(pres)
    out = []
    for A in family:
        lat = filter_lattice(calc, A)
        for F in lat.filters:
            if suszko(calc, A, F, lattice=lat).is_identity():
                out.append(Matrix(A, F))
    return out
