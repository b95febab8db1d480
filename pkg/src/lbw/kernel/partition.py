"""Equivalence relations on {0, ..., n-1} in canonical block-id form."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np


def normalize(ids: Sequence[int]) -> tuple[int, ...]:
    """Relabel block ids so they appear in first-occurrence order."""
    seen: dict[int, int] = {}
    out = []
    for b in ids:
        if b not in seen:
            seen[b] = len(seen)
        out.append(seen[b])
    return tuple(out)


@dataclass(frozen=True)
class Partition:
    """A partition of an n-element universe.

    ``ids[a]`` is the block of element ``a``; ids are normalized so that the
    representation is unique, hence ``==`` is equality of relations.
    """

    ids: tuple[int, ...]

    def __post_init__(self):
        if normalize(self.ids) != self.ids:
            object.__setattr__(self, "ids", normalize(self.ids))

    @classmethod
    def identity(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def total(cls, n: int) -> "Partition":
        return cls((0,) * n)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        ids = list(range(n))
        nxt = n
        covered = set()
        for block in blocks:
            block = list(block)
            for a in block:
                if a in covered:
                    raise ValueError(f"element {a} in two blocks")
                covered.add(a)
                ids[a] = nxt
            nxt += 1
        return cls(tuple(ids))

    @classmethod
    def from_subset(cls, n: int, subset: Iterable[int]) -> "Partition":
        """The (at most) two-block partition {F, complement}."""
        s = set(subset)
        return cls(tuple(0 if a in s else 1 for a in range(n)))

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def num_blocks(self) -> int:
        return max(self.ids) + 1 if self.ids else 0

    def blocks(self) -> list[tuple[int, ...]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for a, b in enumerate(self.ids):
            out[b].append(a)
        return [tuple(b) for b in out]

    def related(self, a: int, b: int) -> bool:
        return self.ids[a] == self.ids[b]

    def pairs(self) -> Iterator[tuple[int, int]]:
        for a in range(self.n):
            for b in range(self.n):
                if self.ids[a] == self.ids[b]:
                    yield a, b

    def is_identity(self) -> bool:
        return self.num_blocks == self.n

    def is_total(self) -> bool:
        return self.num_blocks <= 1

    def refines(self, other: "Partition") -> bool:
        """``self`` is contained in ``other`` as a relation."""
        if self.n != other.n:
            raise ValueError("partitions over different universes")
        image: dict[int, int] = {}
        for a, b in enumerate(self.ids):
            if image.setdefault(b, other.ids[a]) != other.ids[a]:
                return False
        return True

    __le__ = refines

    def meet(self, other: "Partition") -> "Partition":
        if self.n != other.n:
            raise ValueError("partitions over different universes")
        return Partition(tuple(zip(self.ids, other.ids)))  # normalized in post_init

    def join(self, other: "Partition") -> "Partition":
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for p in (self, other):
            first: dict[int, int] = {}
            for a, b in enumerate(p.ids):
                if b in first:
                    ra, rb = find(a), find(first[b])
                    if ra != rb:
                        parent[ra] = rb
                else:
                    first[b] = a
        return Partition(tuple(find(a) for a in range(self.n)))

    def is_compatible_with(self, subset: Iterable[int]) -> bool:
        """Every block is inside or outside ``subset``."""
        s = set(subset)
        state: dict[int, bool] = {}
        for a, b in enumerate(self.ids):
            if state.setdefault(b, a in s) != (a in s):
                return False
        return True

    def preimage(self, h: Sequence[int]) -> "Partition":
        """Kernel-style pullback {(a, b) : (h(a), h(b)) in self}."""
        return Partition(tuple(self.ids[h[a]] for a in range(len(h))))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.ids, dtype=np.int32)

    def render(self, names: Sequence[str] | None = None) -> str:
        def nm(a):
            return names[a] if names is not None else str(a)

        return "{" + ", ".join("{" + ",".join(nm(a) for a in b) + "}" for b in self.blocks()) + "}"

    def __str__(self):
        return self.render()


def meet_all(parts: Iterable[Partition], n: int) -> Partition:
    out = Partition.total(n)
    for p in parts:
        out = out.meet(p)
    return out


def all_partitions(n: int) -> Iterator[Partition]:
    """Every partition of an n-set via restricted growth strings."""
    if n == 0:
        yield Partition(())
        return
    ids = [0] * n

    def rec(i, mx):
        if i == n:
            yield Partition(tuple(ids))
            return
        for b in range(mx + 2):
            ids[i] = b
            yield from rec(i + 1, max(mx, b))

    ids[0] = 0
    yield from rec(1, 0)


def partition_from_columns(keys: np.ndarray) -> Partition:
    """Group columns of a 2-D key matrix: a ~ b iff keys[:, a] == keys[:, b]."""
    keys = np.asarray(keys)
    if keys.ndim == 1:
        keys = keys[None, :]
    n = keys.shape[1]
    if n == 0:
        return Partition(())
    _, inverse = np.unique(keys.T, axis=0, return_inverse=True)
    return Partition(tuple(int(v) for v in np.ravel(inverse)))
