"""Congruences, the Leibniz and Suszko operators, and matrix reduction."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .errors import BudgetExceeded
from .kernel.algebra import FiniteAlgebra
from .kernel.constructions import is_congruence, quotient
from .kernel.matrix import Matrix
from .kernel.partition import Partition, all_partitions, meet_all, partition_from_columns
from .kernel.polynomials import DEFAULT_POLY_BUDGET, unary_polynomials

__all__ = [
    "CongruencePair",
    "is_congruence",
    "all_congruences",
    "principal_congruence",
    "largest_congruence_below",
    "leibniz",
    "leibniz_via_polynomials",
    "suszko",
    "reduce_matrix",
    "is_reduced",
]

ALL_CONGRUENCES_CAP = 5


@dataclass(frozen=True)
class CongruencePair:
    filter: frozenset
    leibniz: Partition
    suszko: Optional[Partition] = None

    def __post_init__(self):
        if self.suszko is not None and not self.suszko.refines(self.leibniz):
            raise ValueError("Suszko congruence must be contained in the Leibniz congruence")


def all_congruences(A: FiniteAlgebra, cap: int = ALL_CONGRUENCES_CAP) -> list[Partition]:
    """Every congruence of A, by brute force over all partitions."""
    if A.size > cap:
        raise BudgetExceeded("all_congruences", cap, partial=A.size)
    return [p for p in all_partitions(A.size) if is_congruence(A, p)]


def _translation_views(A: FiniteAlgebra) -> list[np.ndarray]:
    """For each operation and argument position, an (params, n) array of values."""
    n = A.size
    views = []
    for name, k in A.signature.symbols:
        if k == 0:
            continue
        arr = A.arrays[name]
        for pos in range(k):
            views.append(np.moveaxis(arr, pos, -1).reshape(-1, n))
    return views


def principal_congruence(A: FiniteAlgebra, a: int, b: int) -> Partition:
    """Least congruence relating a and b."""
    n = A.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y) -> bool:
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        parent[max(rx, ry)] = min(rx, ry)
        return True

    union(a, b)
    views = _translation_views(A)
    changed = True
    while changed:
        changed = False
        roots = [find(x) for x in range(n)]
        for v in views:
            for x in range(n):
                r = roots[x]
                if r == x:
                    continue
                for u, w in zip(v[:, x].tolist(), v[:, r].tolist()):
                    if union(u, w):
                        changed = True
    return Partition(tuple(find(x) for x in range(n)))


def largest_congruence_below(A: FiniteAlgebra, E: Partition) -> Partition:
    """The largest congruence of A contained in the equivalence E."""
    if E.n != A.size:
        raise ValueError("partition size does not match the algebra")
    ar, off, data = kernels.pack_ops(
        [k for _, k in A.signature.symbols], A.tables
    )
    ids = kernels.refine(A.size, ar, off, data, np.asarray(E.ids, dtype=np.int32))
    return Partition(tuple(int(v) for v in ids))


def leibniz(A: FiniteAlgebra, F: Iterable[int]) -> Partition:
    """Omega^A(F): the largest congruence of A compatible with F."""
    return largest_congruence_below(A, Partition.from_subset(A.size, F))


def leibniz_via_polynomials(A: FiniteAlgebra, F: Iterable[int], budget: int = DEFAULT_POLY_BUDGET) -> Partition:
    """a ~ b iff p(a) in F <=> p(b) in F for every unary polynomial p."""
    inF = np.zeros(A.size, dtype=np.int8)
    inF[list(F)] = 1
    polys = unary_polynomials(A, budget=budget)
    return partition_from_columns(inF[polys])


def suszko(calc, A: FiniteAlgebra, F: Iterable[int], method: str = "definition", lattice=None) -> Partition:
    """Suszko congruence of F relative to the logic of a Hilbert calculus.

    ``method`` is "definition" (meet of Omega G over filters G containing F),
    "polynomial" (p-translates generate the same filter over F) or "both",
    which computes the two and insists they agree.
    """
    from .logic.filters import filter_generate, filter_lattice

    F = frozenset(F)
    n = A.size
    if method == "both":
        d = suszko(calc, A, F, "definition", lattice)
        p = suszko(calc, A, F, "polynomial", lattice)
        if d != p:
            raise AssertionError(f"Suszko methods disagree: {d} vs {p}")
        return d
    if method == "definition":
        lat = lattice if lattice is not None else filter_lattice(calc, A)
        return meet_all((leibniz(A, G) for G in lat.filters if F <= G), n)
    if method == "polynomial":
        polys = unary_polynomials(A)
        gen: dict[int, int] = {}
        labels: dict[frozenset, int] = {}

        def label(c: int) -> int:
            if c not in gen:
                G = filter_generate(calc, A, F | {c})
                gen[c] = labels.setdefault(G, len(labels))
            return gen[c]

        keys = np.array([[label(int(c)) for c in row] for row in polys], dtype=np.int64)
        return partition_from_columns(keys)
    raise ValueError(f"unknown method {method!r}")


def reduce_matrix(M: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """The reduction <A/Omega F, F/Omega F> with the block map."""
    theta = leibniz(M.algebra, M.designated)
    B, h = quotient(M.algebra, theta)
    return Matrix(B, frozenset(h[a] for a in M.designated)), h


def is_reduced(M: Matrix) -> bool:
    return leibniz(M.algebra, M.designated).is_identity()
