"""Exhaustive enumeration of finite algebras and isomorphism tests."""
from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .. import kernels
from ..errors import BudgetExceeded, SignatureError
from .algebra import FiniteAlgebra
from .matrix import Matrix
from .terms import Signature

MAX_ISO_SIZE = 7
DEFAULT_ENUM_CAP = 10_000_000
_CHUNK = 1 << 15


def raw_count(sig: Signature, n: int) -> int:
    total = 1
    for _, k in sig.symbols:
        total *= n ** (n**k)
    return total


def _serials(sig: Signature, n: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the lexicographic list of all table serializations."""
    L = sum(n**k for _, k in sig.symbols)
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), L), dtype=np.int32)
    for j in range(L - 1, -1, -1):
        out[:, j] = idx % n
        idx //= n
    return out


def _from_serial(sig: Signature, n: int, serial: Sequence[int]) -> FiniteAlgebra:
    tables, pos = [], 0
    for _, k in sig.symbols:
        tables.append(tuple(int(v) for v in serial[pos:pos + n**k]))
        pos += n**k
    return FiniteAlgebra(sig, n, tuple(tables))


def enumerate_algebras(
    sig: Signature,
    n: int,
    prune_iso: bool = False,
    cap: int = DEFAULT_ENUM_CAP,
) -> Iterator[FiniteAlgebra]:
    """Every algebra of the signature on {0..n-1}, in lexicographic table order.

    With ``prune_iso`` only the lexicographically least serialization of each
    isomorphism class is emitted.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    total = raw_count(sig, n)
    if total > cap:
        raise BudgetExceeded("algebra enumeration", cap, partial=total)
    if prune_iso and n > MAX_ISO_SIZE:
        raise BudgetExceeded("isomorphism pruning", MAX_ISO_SIZE, partial=n)
    arities = tuple(k for _, k in sig.symbols)
    if prune_iso:
        perms = kernels.permutations(n)
        gather = kernels.gather_indices(n, arities)
    for start in range(0, total, _CHUNK):
        rows = _serials(sig, n, start, min(total, start + _CHUNK))
        if prune_iso:
            rows = rows[kernels.canonical_mask(rows, perms, gather).astype(bool)]
        for row in rows:
            yield _from_serial(sig, n, row)


def enumerate_up_to(sig: Signature, max_size: int, prune_iso: bool = True, cap: int = DEFAULT_ENUM_CAP) -> list[FiniteAlgebra]:
    out = []
    for n in range(1, max_size + 1):
        out.extend(enumerate_algebras(sig, n, prune_iso, cap))
    return out


def canonical_serialization(A: FiniteAlgebra) -> tuple[int, ...]:
    """Lexicographically least serialization over all relabelings of A."""
    n = A.size
    if n > MAX_ISO_SIZE:
        raise BudgetExceeded("isomorphism canonical form", MAX_ISO_SIZE, partial=n)
    perms = kernels.permutations(n)
    gather = kernels.gather_indices(n, tuple(k for _, k in A.signature.symbols))
    s = np.asarray(A.serialization(), dtype=np.int64)
    images = perms[np.arange(len(perms))[:, None], s[gather]]
    best = min(map(tuple, images.tolist()))
    return tuple(best)


def find_matrix_isomorphism(M1: Matrix, M2: Matrix) -> tuple[int, ...] | None:
    """A bijection h with h(M1) = M2 (operations and designated set), or None."""
    A, B = M1.algebra, M2.algebra
    if A.signature != B.signature:
        raise SignatureError("matrices over different signatures")
    if A.size != B.size or len(M1.designated) != len(M2.designated):
        return None
    n = A.size
    sig = A.signature
    # constants pin their images
    h = [-1] * n
    used = [False] * n
    for name in sig.constants():
        a, b = A.table(name)[0], B.table(name)[0]
        if h[a] == -1 and not used[b]:
            h[a], used[b] = b, True
        elif h[a] != b:
            return None

    def consistent(h) -> bool:
        for a in range(n):
            if h[a] != -1 and ((a in M1.designated) != (h[a] in M2.designated)):
                return False
        for name, k in sig.symbols:
            if k == 0:
                continue
            arr_a, arr_b = A.arrays[name], B.arrays[name]
            for args in np.ndindex(*(n,) * k):
                if all(h[x] != -1 for x in args):
                    v = int(arr_a[args])
                    w = int(arr_b[tuple(h[x] for x in args)])
                    if h[v] != -1 and h[v] != w:
                        return False
        return True

    if not consistent(h):
        return None
    order = [a for a in range(n) if h[a] == -1]

    def search(i) -> bool:
        if i == len(order):
            return True
        a = order[i]
        for b in range(n):
            if used[b] or ((a in M1.designated) != (b in M2.designated)):
                continue
            h[a], used[b] = b, True
            if consistent(h) and search(i + 1):
                return True
            h[a], used[b] = -1, False
        return False

    if not search(0):
        return None
    result = tuple(h)
    if not (A.is_homomorphism(B, result) and {result[a] for a in M1.designated} == set(M2.designated)):
        return None
    return result


def isomorphic(M1: Matrix, M2: Matrix) -> bool:
    return find_matrix_isomorphism(M1, M2) is not None


def iso_classes(matrices: Sequence[Matrix]) -> list[Matrix]:
    """One representative per isomorphism class, first occurrence kept."""
    reps: list[Matrix] = []
    for M in matrices:
        if not any(M.signature == R.signature and isomorphic(M, R) for R in reps):
            reps.append(M)
    return reps
