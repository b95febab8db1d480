"""Behaviour of the Leibniz operator on the filter lattice of one algebra."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from ..congruence import leibniz
from ..kernel.algebra import FiniteAlgebra
from ..kernel.matrix import Matrix
from ..kernel.partition import Partition, meet_all
from ..logic.calculus import HilbertCalculus
from ..logic.filters import FilterLattice, filter_generate, filter_lattice
from .translation import Check

NAIVE_LIMIT = 12


@dataclass(frozen=True)
class ProfileRow:
    filter: frozenset
    leibniz: Partition
    suszko: Partition


@dataclass(frozen=True)
class OperatorProfile:
    """Omega and the Suszko congruence of every filter, plus Fg({a}) per element."""

    algebra: FiniteAlgebra
    lattice: FilterLattice
    rows: tuple[ProfileRow, ...]
    generated: tuple[int, ...]   # index of Fg({a}) among the rows

    def row(self, F) -> ProfileRow:
        return self.rows[self.lattice.index(F)]

    def render(self) -> list[tuple[str, str, str]]:
        names = [self.algebra.name(a) for a in self.algebra.universe]
        return [
            ("{" + ",".join(names[a] for a in sorted(r.filter)) + "}", r.leibniz.render(names), r.suszko.render(names))
            for r in self.rows
        ]


def operator_profile(calc: HilbertCalculus, A: FiniteAlgebra, lattice: FilterLattice | None = None) -> OperatorProfile:
    lat = lattice if lattice is not None else filter_lattice(calc, A)
    omegas = [leibniz(A, F) for F in lat.filters]
    rows = []
    for F in lat.filters:
        sus = meet_all((om for G, om in zip(lat.filters, omegas) if F <= G), A.size)
        rows.append(ProfileRow(F, omegas[lat.index(F)], sus))
    gen = tuple(lat.index(filter_generate(calc, A, {a})) for a in A.universe)
    return OperatorProfile(A, lat, tuple(rows), gen)


def _rows(profile: OperatorProfile, almost: bool) -> list[ProfileRow]:
    return [r for r in profile.rows if r.filter or not almost]


def check_injective(profile: OperatorProfile, almost: bool = False) -> Check:
    rows = _rows(profile, almost)
    seen: dict[Partition, frozenset] = {}
    for r in rows:
        if r.leibniz in seen:
            return Check(False, (seen[r.leibniz], r.filter))
        seen[r.leibniz] = r.filter
    return Check(True)


def check_order_reflecting(profile: OperatorProfile, almost: bool = False) -> Check:
    """Omega F <= Omega G implies F <= G; witness (F, G) with larger F tried first."""
    rows = _rows(profile, almost)
    for r in reversed(rows):
        for s in rows:
            if r.leibniz.refines(s.leibniz) and not r.filter <= s.filter:
                return Check(False, (r.filter, s.filter))
    return Check(True)


def check_completely_order_reflecting(profile: OperatorProfile, almost: bool = False) -> Check:
    """Meets of Omega images reflect to intersections, empty subfamily included.

    Fails iff some filter G and a outside G have Suszko(Fg{a}) <= Omega G, or
    some G other than the whole universe has Omega G total. Witnesses are
    ("element", a, G) or ("empty", G).
    """
    rows = _rows(profile, almost)
    n = profile.algebra.size
    top = frozenset(range(n))
    for g in rows:
        if g.leibniz.is_total() and g.filter != top:
            return Check(False, ("empty", g.filter))
    for g in rows:
        for a in range(n):
            if a in g.filter:
                continue
            sus = profile.rows[profile.generated[a]].suszko
            if sus.refines(g.leibniz):
                return Check(False, ("element", a, g.filter))
    return Check(True)


def naive_completely_order_reflecting(profile: OperatorProfile, almost: bool = False, limit: int = NAIVE_LIMIT) -> Check:
    """Oracle: every subfamily X and filter G, with the empty X meaning (total, universe)."""
    rows = _rows(profile, almost)
    if len(rows) > limit:
        raise ValueError(f"naive check limited to {limit} filters")
    n = profile.algebra.size
    for size in range(len(rows) + 1):
        for X in itertools.combinations(rows, size):
            meet = meet_all((r.leibniz for r in X), n)
            inter = frozenset(range(n))
            for r in X:
                inter &= r.filter
            for g in rows:
                if meet.refines(g.leibniz) and not inter <= g.filter:
                    return Check(False, (tuple(r.filter for r in X), g.filter))
    return Check(True)


def check_truth_implicit(family: Sequence[Matrix], almost: bool = False) -> Check:
    """No two members share an algebra while differing in truth set."""
    seen: dict = {}
    for M in family:
        if almost and M.almost_trivial:
            continue
        prev = seen.setdefault(M.algebra, M)
        if prev.designated != M.designated:
            return Check(False, (prev, M))
    return Check(True)


def check_truth_small(
    family: Sequence[Matrix],
    lattices: Mapping[FiniteAlgebra, FilterLattice] | Callable[[FiniteAlgebra], FilterLattice],
    almost: bool = False,
) -> Check:
    """Each truth set is the least nonempty filter of its algebra.

    Outside the almost variant an empty truth set fails outright.
    """
    get = lattices if callable(lattices) else lattices.__getitem__
    for M in family:
        if not M.designated:
            if almost:
                continue
            return Check(False, (M, None))
        for G in get(M.algebra).nonempty:
            if not M.designated <= G:
                return Check(False, (M, G))
    return Check(True)
