"""Unary polynomial functions and free term-function algebras."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import BudgetExceeded, SignatureError
from .algebra import FiniteAlgebra
from .terms import App, Signature, Term, Var

DEFAULT_POLY_BUDGET = 200_000
DEFAULT_FREE_BUDGET = 1_000_000
DEFAULT_WORK_BUDGET = 20_000_000


def _close(
    ops: list[tuple[str, int, list[np.ndarray], list[tuple[int, int]]]],
    seeds: np.ndarray,
    budget: int,
    what: str,
    entries_per_element: int,
    on_new=None,
    max_rounds: int | None = None,
    work_budget: int | None = None,
):
    """Semi-naive closure of a set of value vectors under pointwise operations.

    ``ops`` lists (symbol, arity, per-segment tables, segment bounds): an
    element is a vector cut into segments and segment i is evaluated with
    table i. New elements are discovered round by round, operations in
    signature order, argument tuples in lexicographic order; ``on_new`` sees
    (symbol, argument indices) for each one, which fixes witness terms.
    Returns (elements, saturated); with ``max_rounds`` the closure may stop
    early, and every element found after r rounds has a depth-r witness.
    ``work_budget`` caps the number of argument tuples evaluated in total.
    """
    index: dict[bytes, int] = {}
    elems: list[np.ndarray] = []

    def add(vec, info):
        key = vec.tobytes()
        if key in index:
            return
        if (len(elems) + 1) * entries_per_element > budget:
            raise BudgetExceeded(what, budget, partial=len(elems))
        index[key] = len(elems)
        elems.append(vec)
        if on_new is not None:
            on_new(info)

    for i, v in enumerate(seeds):
        add(np.ascontiguousarray(v, dtype=np.int64), ("seed", i))
    frontier, rounds, work = 0, 0, 0
    while True:
        old_count = len(elems)
        if max_rounds is not None and rounds >= max_rounds:
            return np.array(elems, dtype=np.int64).reshape(old_count, -1), False
        stack = np.array(elems, dtype=np.int64).reshape(old_count, -1)
        work += sum(old_count**k - frontier**k for _, k, _, _ in ops)
        if work_budget is not None and work > work_budget:
            raise BudgetExceeded(what + " (argument tuples)", work_budget, partial=len(elems))
        for name, k, tabs, bounds in ops:
            for combos, vecs in _apply(stack, k, tabs, bounds, frontier):
                for c, v in zip(combos, vecs):
                    add(v, (name, tuple(int(i) for i in c)))
        rounds += 1
        frontier = old_count
        if len(elems) == old_count:
            return np.array(elems, dtype=np.int64).reshape(len(elems), -1), True


def _apply(stack, k, tabs, bounds, frontier, chunk_entries=2_000_000):
    """Yield (combos, result rows) for argument tuples touching the frontier.

    Results are deduplicated within each chunk, keeping first occurrences in
    lexicographic combo order.
    """
    S, L = stack.shape
    if S == 0:
        return
    rest = S ** (k - 1)
    per_first = max(1, chunk_entries // max(1, rest * max(L, 1)))
    for f0 in range(0, S, per_first):
        f1 = min(S, f0 + per_first)
        combos = np.indices((f1 - f0,) + (S,) * (k - 1)).reshape(k, -1).T
        combos[:, 0] += f0
        keep = combos.max(axis=1) >= frontier
        combos = combos[keep]
        if not len(combos):
            continue
        out = np.empty((len(combos), L), dtype=np.int64)
        for t, (lo, hi) in zip(tabs, bounds):
            out[:, lo:hi] = t[tuple(stack[combos[:, j], lo:hi] for j in range(k))]
        _, first = np.unique(out, axis=0, return_index=True)
        first.sort()
        yield combos[first], out[first]


def unary_polynomials(A: FiniteAlgebra, budget: int = DEFAULT_POLY_BUDGET) -> np.ndarray:
    """All unary polynomial functions of A as rows of an (S, n) array.

    Closure of the identity and all constant maps under the basic operations
    applied pointwise; rows are sorted lexicographically.
    """
    n = A.size
    seeds = np.vstack([np.arange(n)[None, :], np.repeat(np.arange(n)[:, None], n, axis=1)])
    ops = [(name, k, [A.arrays[name]], [(0, n)]) for name, k in A.signature.symbols if k > 0]
    polys, _ = _close(ops, seeds.astype(np.int64), budget * n, "unary polynomials", n)
    order = np.lexsort(polys.T[::-1])
    return polys[order]


@dataclass
class FreeAlgebra:
    """k-generated free algebra of V(family), realized by term functions.

    ``elements[i]`` concatenates the function tables of term i over each
    family member (member j contributes ``size_j**k`` entries, generators
    ordered with variable 0 most significant). ``terms[i]`` is the first
    witnessing term found in breadth-first generation order. When a depth
    bound stopped generation early, ``saturated`` is False and the elements
    are only the term functions of bounded depth.
    """

    family: tuple[FiniteAlgebra, ...]
    k: int
    elements: np.ndarray
    terms: list[Term]
    segments: list[tuple[int, int]] = field(default_factory=list)
    saturated: bool = True

    @property
    def size(self) -> int:
        return len(self.elements)

    def index_of(self, values: np.ndarray) -> int | None:
        hits = np.flatnonzero((self.elements == np.asarray(values)).all(axis=1))
        return int(hits[0]) if len(hits) else None

    def segment(self, i: int, j: int) -> np.ndarray:
        """Function table of element i over family member j."""
        lo, hi = self.segments[j]
        return self.elements[i, lo:hi]


def free_term_functions(
    family: Sequence[FiniteAlgebra],
    k: int,
    budget: int = DEFAULT_FREE_BUDGET,
    signature: Signature | None = None,
    max_depth: int | None = None,
    work_budget: int | None = DEFAULT_WORK_BUDGET,
) -> FreeAlgebra:
    """Term functions in variables 0..k-1 over the family, one per equivalence class.

    ``budget`` bounds the total number of stored table entries and
    ``work_budget`` the number of argument tuples evaluated.
    """
    family = tuple(family)
    if k < 1:
        raise ValueError("k must be at least 1")
    if not family and signature is None:
        raise SignatureError("empty family needs a signature")
    sig = signature or family[0].signature
    for A in family:
        if A.signature != sig:
            raise SignatureError("family members must share one signature")
    bounds, lo = [], 0
    for A in family:
        bounds.append((lo, lo + A.size**k))
        lo += A.size**k
    L = lo
    if L == 0:
        # the empty family generates the trivial variety: a single term function
        return FreeAlgebra(family, k, np.zeros((1, 0), dtype=np.int64), [Var(0)], [])
    seed_terms: list[Term] = [Var(v) for v in range(k)]
    seeds = [np.concatenate([np.indices((A.size,) * k).reshape(k, -1)[v] for A in family]) for v in range(k)]
    for name in sig.constants():
        seed_terms.append(App(name, ()))
        seeds.append(np.concatenate([np.full(A.size**k, int(A.arrays[name])) for A in family]))
    ops = [(name, ar, [A.arrays[name] for A in family], bounds) for name, ar in sig.symbols if ar > 0]
    terms: list[Term] = []

    def on_new(info):
        tag, payload = info
        if tag == "seed":
            terms.append(seed_terms[payload])
        else:
            terms.append(App(tag, tuple(terms[i] for i in payload)))

    elems, saturated = _close(
        ops, np.array(seeds, dtype=np.int64).reshape(len(seeds), L), budget, "free algebra", L, on_new, max_depth, work_budget
    )
    return FreeAlgebra(family, k, elems, terms, bounds, saturated)
