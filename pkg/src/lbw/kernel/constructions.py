"""Products, quotients, subalgebras, constant expansions and twist structures."""
from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from ..errors import NotACongruence, NotALattice, SignatureError
from .algebra import FiniteAlgebra, subalgebra_generate
from .partition import Partition
from .terms import Signature

BILATTICE_SIGNATURE = Signature.of(("and", 2), ("or", 2), ("otimes", 2), ("oplus", 2), ("neg", 1))


def product(algebras: Sequence[FiniteAlgebra], signature: Signature | None = None) -> FiniteAlgebra:
    """Direct product; elements are indexed in mixed radix, first factor most significant.

    The empty product is the one-element algebra and needs ``signature``.
    """
    algebras = list(algebras)
    if not algebras:
        if signature is None:
            raise SignatureError("empty product needs an explicit signature")
        return FiniteAlgebra(signature, 1, tuple((0,) for _ in signature.symbols))
    sig = algebras[0].signature
    if signature is not None and signature != sig:
        raise SignatureError("signature mismatch")
    for A in algebras[1:]:
        if A.signature != sig:
            raise SignatureError("all factors must share one signature")
    sizes = [A.size for A in algebras]
    n = int(np.prod(sizes))
    coords = np.indices(sizes).reshape(len(sizes), -1)  # coords[i][e] = i-th component of e
    tables = []
    for name, k in sig.symbols:
        if k == 0:
            comps = [int(A.arrays[name]) for A in algebras]
            tables.append((int(np.ravel_multi_index(comps, sizes)),))
            continue
        args = np.indices((n,) * k).reshape(k, -1)
        comp_vals = []
        for i, A in enumerate(algebras):
            comp_vals.append(A.arrays[name][tuple(coords[i][args[j]] for j in range(k))])
        tables.append(tuple(int(v) for v in np.ravel_multi_index(comp_vals, sizes)))
    names = None
    if any(A.names for A in algebras):
        names = tuple(
            "(" + ",".join(algebras[i].name(int(coords[i][e])) for i in range(len(sizes))) + ")"
            for e in range(n)
        )
    return FiniteAlgebra(sig, n, tuple(tables), names)


def power(A: FiniteAlgebra, k: int) -> FiniteAlgebra:
    return product([A] * k, signature=A.signature)


def is_congruence(A: FiniteAlgebra, theta: Partition) -> bool:
    if theta.n != A.size:
        raise ValueError("partition size does not match the algebra")
    ids = np.asarray(theta.ids)
    n = A.size
    for name, k in A.signature.symbols:
        if k == 0:
            continue
        arr = A.arrays[name]
        # compare f(.., a, ..) with f(.., rep(a), ..) position by position
        reps = np.array([theta.ids.index(theta.ids[a]) for a in range(n)])
        for pos in range(k):
            moved = np.moveaxis(arr, pos, -1).reshape(-1, n)
            if not np.array_equal(ids[moved], ids[moved[:, reps]]):
                return False
    return True


def quotient(A: FiniteAlgebra, theta: Partition) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    """A/theta together with the block map a -> block id."""
    if not is_congruence(A, theta):
        raise NotACongruence(f"{theta} is not a congruence")
    m = theta.num_blocks
    reps = [b[0] for b in theta.blocks()]
    tables = []
    for name, k in A.signature.symbols:
        arr = A.arrays[name]
        if k == 0:
            tables.append((theta.ids[int(arr)],))
            continue
        out = []
        for args in itertools.product(range(m), repeat=k):
            out.append(theta.ids[int(arr[tuple(reps[b] for b in args)])])
        tables.append(tuple(out))
    names = None
    if A.names is not None:
        names = tuple(
            A.name(b[0]) if len(b) == 1 else "[" + ",".join(A.name(a) for a in b) + "]"
            for b in theta.blocks()
        )
    return FiniteAlgebra(A.signature, m, tuple(tables), names), theta.ids


def subalgebra(A: FiniteAlgebra, X: Iterable[int]) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    """Subalgebra generated by X, with the inclusion map (new index -> old)."""
    elems = sorted(subalgebra_generate(A, X))
    if not elems:
        raise ValueError("empty subuniverse: the algebra has no constants and X is empty")
    pos = {a: i for i, a in enumerate(elems)}
    tables = []
    for name, k in A.signature.symbols:
        arr = A.arrays[name]
        if k == 0:
            tables.append((pos[int(arr)],))
            continue
        tables.append(
            tuple(pos[int(arr[args])] for args in itertools.product(elems, repeat=k))
        )
    names = tuple(A.name(a) for a in elems) if A.names is not None else None
    return FiniteAlgebra(A.signature, len(elems), tuple(tables), names), tuple(elems)


def expand_constant(A: FiniteAlgebra, name: str, value: int) -> FiniteAlgebra:
    """Expansion of A by a fresh constant interpreted as ``value``."""
    if name in A.signature:
        raise SignatureError(f"symbol {name!r} already present")
    return FiniteAlgebra(A.signature.expand(name, 0), A.size, A.tables + ((value,),), A.names)


def reduct(A: FiniteAlgebra, signature: Signature) -> FiniteAlgebra:
    tables = tuple(A.table(s) for s in signature.names)
    for s, k in signature.symbols:
        if A.signature.arity(s) != k:
            raise SignatureError(f"arity mismatch for {s}")
    return FiniteAlgebra(signature, A.size, tables, A.names)


def lattice_order(L: FiniteAlgebra, meet: str = "meet", join: str = "join") -> np.ndarray:
    """Check the lattice laws and return the order matrix le[a, b]."""
    for s in (meet, join):
        if s not in L.signature or L.signature.arity(s) != 2:
            raise NotALattice(f"lattice needs a binary symbol {s!r}")
    m, j = L.arrays[meet], L.arrays[join]
    n = L.size
    a, b, c = np.indices((n, n, n))
    for t in (m, j):
        if not np.array_equal(t, t.T):
            raise NotALattice("operation not commutative")
        if not np.array_equal(t[np.arange(n), np.arange(n)], np.arange(n)):
            raise NotALattice("operation not idempotent")
        if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
            raise NotALattice("operation not associative")
    x, y = np.indices((n, n))
    if not np.array_equal(m[x, j[x, y]], x) or not np.array_equal(j[x, m[x, y]], x):
        raise NotALattice("absorption fails")
    return m == x


def twist_structure(
    L: FiniteAlgebra,
    meet: str = "meet",
    join: str = "join",
    signature: Signature | None = None,
) -> FiniteAlgebra:
    """The bilattice L (.) L on L x L.

    Element (a1, a2) has index a1*|L| + a2. ``signature`` may reorder the
    five bilattice symbols but must contain exactly them.
    """
    lattice_order(L, meet, join)
    sig = signature or BILATTICE_SIGNATURE
    if sorted(sig.symbols) != sorted(BILATTICE_SIGNATURE.symbols):
        raise SignatureError(f"twist structure signature must be {BILATTICE_SIGNATURE}")
    n = L.size
    mt, jn = L.arrays[meet], L.arrays[join]
    pairs = [(a1, a2) for a1 in range(n) for a2 in range(n)]

    def idx(p):
        return p[0] * n + p[1]

    ops = {
        "and": lambda p, q: (mt[p[0], q[0]], jn[p[1], q[1]]),
        "or": lambda p, q: (jn[p[0], q[0]], mt[p[1], q[1]]),
        "otimes": lambda p, q: (mt[p[0], q[0]], mt[p[1], q[1]]),
        "oplus": lambda p, q: (jn[p[0], q[0]], jn[p[1], q[1]]),
    }
    tables = []
    for name, k in sig.symbols:
        if name == "neg":
            tables.append(tuple(idx((p[1], p[0])) for p in pairs))
        else:
            f = ops[name]
            tables.append(tuple(idx(f(p, q)) for p in pairs for q in pairs))
    names = tuple(f"({L.name(p[0])},{L.name(p[1])})" for p in pairs)
    return FiniteAlgebra(sig, n * n, tuple(tables), names)
