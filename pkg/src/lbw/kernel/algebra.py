"""Finite algebras given by total operation tables."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import SignatureError, UnboundVariable
from .terms import Signature, Term, Var


@dataclass(frozen=True)
class FiniteAlgebra:
    """Algebra over universe {0, ..., size-1}.

    ``tables`` holds one flat row-major table per symbol in signature order;
    a k-ary table has ``size**k`` entries and the entry for (a1, ..., ak) sits
    at index a1*size**(k-1) + ... + ak. Element names only affect rendering.
    """

    signature: Signature
    size: int
    tables: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("universe must be nonempty")
        if len(self.tables) != len(self.signature.symbols):
            raise SignatureError("one table per symbol required")
        for (name, k), t in zip(self.signature.symbols, self.tables):
            if len(t) != self.size**k:
                raise ValueError(f"table {name} has {len(t)} entries, expected {self.size ** k}")
            for v in t:
                if not 0 <= v < self.size:
                    raise ValueError(f"table {name} entry {v} out of range")
        if self.names is not None and len(self.names) != self.size:
            raise ValueError("names must match universe size")

    @classmethod
    def from_tables(
        cls,
        signature: Signature,
        size: int,
        tables: Mapping[str, object],
        names: Sequence[str] | None = None,
    ) -> "FiniteAlgebra":
        """Build from nested lists / flat sequences / ints (constants)."""
        flat = []
        for name, k in signature.symbols:
            if name not in tables:
                raise SignatureError(f"missing table for {name}")
            arr = np.asarray(tables[name], dtype=np.int64).reshape(-1)
            flat.append(tuple(int(v) for v in arr))
        return cls(signature, size, tuple(flat), tuple(names) if names is not None else None)

    # -- access -------------------------------------------------------------

    def table(self, name: str) -> tuple[int, ...]:
        return self.tables[self.signature.names.index(name)]

    @cached_property
    def arrays(self) -> dict[str, np.ndarray]:
        """Tables as numpy arrays of shape (size,)*arity."""
        out = {}
        for (name, k), t in zip(self.signature.symbols, self.tables):
            out[name] = np.asarray(t, dtype=np.int64).reshape((self.size,) * k)
        return out

    @cached_property
    def flat_ops(self) -> list[tuple[int, np.ndarray]]:
        """(arity, int32 flat table) per symbol, for the compiled kernels."""
        return [(k, np.asarray(t, dtype=np.int32)) for (_, k), t in zip(self.signature.symbols, self.tables)]

    def op(self, name: str, *args: int) -> int:
        k = self.signature.arity(name)
        if len(args) != k:
            raise SignatureError(f"{name} expects {k} arguments")
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return self.table(name)[idx]

    @property
    def universe(self) -> range:
        return range(self.size)

    def name(self, a: int) -> str:
        return self.names[a] if self.names is not None else str(a)

    def element(self, name: str) -> int:
        if self.names is not None and name in self.names:
            return self.names.index(name)
        try:
            a = int(name)
        except (TypeError, ValueError):
            raise KeyError(name) from None
        if not 0 <= a < self.size:
            raise KeyError(name)
        return a

    def with_names(self, names: Sequence[str] | None) -> "FiniteAlgebra":
        return FiniteAlgebra(self.signature, self.size, self.tables, tuple(names) if names else None)

    def serialization(self) -> tuple[int, ...]:
        return tuple(v for t in self.tables for v in t)

    def __repr__(self):
        return f"FiniteAlgebra(size={self.size}, signature={self.signature})"

    # -- homomorphism checks --------------------------------------------------

    def is_homomorphism(self, other: "FiniteAlgebra", h: Sequence[int]) -> bool:
        if self.signature != other.signature:
            return False
        for (name, k) in self.signature.symbols:
            for args in itertools.product(range(self.size), repeat=k):
                if h[self.op(name, *args)] != other.op(name, *(h[a] for a in args)):
                    return False
        return True


def eval_term(t: Term, A: FiniteAlgebra, env: Mapping[int, int]) -> int:
    """Value of ``t`` under the homomorphic extension of ``env``."""
    if isinstance(t, Var):
        try:
            return env[t.index]
        except (KeyError, IndexError):
            raise UnboundVariable(f"variable {t} is unbound") from None
    if t.symbol not in A.signature:
        raise SignatureError(f"symbol {t.symbol!r} not in signature")
    return A.op(t.symbol, *(eval_term(a, A, env) for a in t.args))


def term_table(t: Term, A: FiniteAlgebra, k: int) -> np.ndarray:
    """Values of ``t`` at every assignment of variables 0..k-1.

    Returns a flat array of length ``size**k``; variable 0 is the most
    significant coordinate.
    """
    n = A.size
    grid = np.indices((n,) * k).reshape(k, -1) if k else np.zeros((0, 1), dtype=np.int64)
    cache: dict[Term, np.ndarray] = {}

    def ev(s: Term) -> np.ndarray:
        if s in cache:
            return cache[s]
        if isinstance(s, Var):
            if s.index >= k:
                raise UnboundVariable(f"variable {s} outside 0..{k - 1}")
            out = grid[s.index]
        else:
            if s.symbol not in A.signature:
                raise SignatureError(f"symbol {s.symbol!r} not in signature")
            arr = A.arrays[s.symbol]
            if not s.args:
                out = np.full(n**k, int(arr), dtype=np.int64)
            else:
                out = arr[tuple(ev(a) for a in s.args)]
        cache[s] = out
        return out

    return np.asarray(ev(t), dtype=np.int64)


def subalgebra_generate(A: FiniteAlgebra, X: Iterable[int]) -> frozenset[int]:
    """Least subuniverse containing ``X`` (and every constant)."""
    current = set(X)
    for a in current:
        if not 0 <= a < A.size:
            raise ValueError(f"element {a} out of range")
    while True:
        new = set()
        elems = sorted(current)
        for name, k in A.signature.symbols:
            arr = A.arrays[name]
            if k == 0:
                new.add(int(arr))
                continue
            if not elems:
                continue
            idx = np.ix_(*([elems] * k))
            new.update(int(v) for v in np.unique(arr[idx]))
        if new <= current:
            return frozenset(current)
        current |= new
