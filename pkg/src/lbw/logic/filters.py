"""Deductive filters: generation, membership and lattice enumeration."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable

import numpy as np

from .. import kernels
from ..errors import BudgetExceeded, SignatureError
from ..kernel.algebra import FiniteAlgebra, term_table
from .calculus import HilbertCalculus, _compact

DEFAULT_FILTER_BUDGET = 100_000
MAX_INSTANCE_ENTRIES = 20_000_000


@lru_cache(maxsize=8192)
def compile_instances(calc: HilbertCalculus, A: FiniteAlgebra) -> tuple[np.ndarray, np.ndarray]:
    """Every rule instance over A as (premises padded with -1, conclusion).

    Assignments range over each rule's own variables. Instances whose
    conclusion is among their premises are dropped, the rest deduplicated.
    """
    if calc.signature != A.signature:
        raise SignatureError("calculus and algebra have different signatures")
    n = A.size
    width = max([len(r.premises) for r in calc.rules] + [1])
    prems, concls = [], []
    for r in calc.rules:
        terms, k = _compact(list(r.premises) + [r.conclusion])
        if n**k * (width + 1) > MAX_INSTANCE_ENTRIES:
            raise BudgetExceeded("rule instances", MAX_INSTANCE_ENTRIES, partial=n**k)
        P = np.full((n**k, width), -1, dtype=np.int32)
        for j, t in enumerate(terms[:-1]):
            P[:, j] = term_table(t, A, k)
        c = term_table(terms[-1], A, k).astype(np.int32)
        P.sort(axis=1)
        # move padding to the end, then drop instances whose conclusion is a premise
        P = np.where(P < 0, np.iinfo(np.int32).max, P)
        P.sort(axis=1)
        P = np.where(P == np.iinfo(np.int32).max, -1, P)
        keep = ~(P == c[:, None]).any(axis=1)
        prems.append(P[keep])
        concls.append(c[keep])
    if not prems:
        return np.zeros((0, width), dtype=np.int32), np.zeros(0, dtype=np.int32)
    rows = np.hstack([np.vstack(prems), np.concatenate(concls)[:, None]])
    rows = np.unique(rows, axis=0)
    return np.ascontiguousarray(rows[:, :-1]), np.ascontiguousarray(rows[:, -1])


def _mask(n: int, X: Iterable[int]) -> np.ndarray:
    m = np.zeros(n, dtype=np.uint8)
    for a in X:
        if not 0 <= a < n:
            raise ValueError(f"element {a} out of range")
        m[a] = 1
    return m


def filter_generate(calc: HilbertCalculus, A: FiniteAlgebra, X: Iterable[int]) -> frozenset[int]:
    """Least filter of the calculus over A containing X."""
    prem, concl = compile_instances(calc, A)
    out = kernels.closure(A.size, prem, concl, _mask(A.size, X))
    return frozenset(int(a) for a in np.flatnonzero(out))


def is_filter(calc: HilbertCalculus, A: FiniteAlgebra, F: Iterable[int]) -> bool:
    F = frozenset(F)
    return filter_generate(calc, A, F) == F


def _sort_key(F: frozenset) -> tuple:
    return (len(F), tuple(sorted(F)))


@dataclass(frozen=True)
class FilterLattice:
    """All filters of a calculus over one algebra, ordered by (size, elements)."""

    calculus: HilbertCalculus
    algebra: FiniteAlgebra
    filters: tuple[frozenset, ...]

    def __len__(self):
        return len(self.filters)

    def index(self, F: Iterable[int]) -> int:
        return self.filters.index(frozenset(F))

    @cached_property
    def order(self) -> np.ndarray:
        """order[i, j] is True iff filters[i] is contained in filters[j]."""
        m = len(self.filters)
        out = np.zeros((m, m), dtype=bool)
        for i, F in enumerate(self.filters):
            for j, G in enumerate(self.filters):
                out[i, j] = F <= G
        return out

    @cached_property
    def meet(self) -> np.ndarray:
        m = len(self.filters)
        pos = {F: i for i, F in enumerate(self.filters)}
        out = np.zeros((m, m), dtype=np.int32)
        for i, F in enumerate(self.filters):
            for j, G in enumerate(self.filters):
                out[i, j] = pos[F & G]
        return out

    @cached_property
    def join(self) -> np.ndarray:
        m = len(self.filters)
        pos = {F: i for i, F in enumerate(self.filters)}
        out = np.zeros((m, m), dtype=np.int32)
        for i, F in enumerate(self.filters):
            for j in range(i, m):
                out[i, j] = out[j, i] = pos[filter_generate(self.calculus, self.algebra, F | self.filters[j])]
        return out

    @property
    def bottom(self) -> frozenset:
        return self.filters[0]

    @property
    def nonempty(self) -> tuple[frozenset, ...]:
        return tuple(F for F in self.filters if F)


def filter_lattice(calc: HilbertCalculus, A: FiniteAlgebra, budget: int = DEFAULT_FILTER_BUDGET) -> FilterLattice:
    """Closed sets of filter generation, found by NextClosure in lectic order."""
    return _filter_lattice(calc, A, budget)


@lru_cache(maxsize=8192)
def _filter_lattice(calc: HilbertCalculus, A: FiniteAlgebra, budget: int) -> FilterLattice:
    n = A.size
    prem, concl = compile_instances(calc, A)

    def close(mask):
        return kernels.closure(n, prem, concl, mask)

    current = close(np.zeros(n, dtype=np.uint8))
    found = [current]
    while not current.all():
        for i in range(n - 1, -1, -1):
            if current[i]:
                continue
            seed = current.copy()
            seed[i + 1:] = 0
            seed[i] = 1
            nxt = close(seed)
            if np.array_equal(nxt[:i], current[:i]):
                current = nxt
                break
        found.append(current)
        if len(found) > budget:
            raise BudgetExceeded("filter lattice", budget, partial=len(found))
    filters = sorted((frozenset(int(a) for a in np.flatnonzero(f)) for f in found), key=_sort_key)
    return FilterLattice(calc, A, tuple(filters))
