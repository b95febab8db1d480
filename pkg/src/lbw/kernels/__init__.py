"""Hot kernels: compiled extension when available, numpy fallback otherwise.

Set ``LBW_PURE=1`` to force the fallback. ``BACKEND`` names the active one.
"""
from __future__ import annotations

import itertools
import os
from functools import lru_cache

import numpy as np

from . import _pure

pure = _pure
fast = None
if not os.environ.get("LBW_PURE"):
    try:
        from . import _fast as fast  # type: ignore[no-redef]
    except ImportError:
        fast = None

active = fast if fast is not None else _pure
BACKEND = active.NAME

refine = active.refine
closure = active.closure
canonical_mask = active.canonical_mask


def pack_ops(arities, tables):
    """Concatenate flat tables into (arities, offsets, data) int32 arrays."""
    ar = np.asarray(arities, dtype=np.int32)
    lengths = [len(t) for t in tables]
    off = np.zeros(len(lengths), dtype=np.int32)
    if lengths:
        off[1:] = np.cumsum(lengths)[:-1]
    data = np.concatenate([np.asarray(t, dtype=np.int32) for t in tables]) if tables else np.zeros(0, np.int32)
    return ar, off, data


@lru_cache(maxsize=64)
def permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int32).reshape(-1, n)


@lru_cache(maxsize=256)
def gather_indices(n: int, arities: tuple[int, ...]) -> np.ndarray:
    """Source positions for permuted serializations, one row per permutation.

    Under p, the image table at (j1..jk) reads the original entry at
    (p^-1(j1), .., p^-1(jk)) and maps it through p.
    """
    perms = permutations(n)
    inv = np.argsort(perms, axis=1).astype(np.int64)
    rows = []
    offset = 0
    for k in arities:
        if k == 0:
            rows.append(np.full((len(perms), 1), offset, dtype=np.int64))
            offset += 1
            continue
        grid = np.indices((n,) * k).reshape(k, -1)           # multi-indices in row-major order
        src = np.zeros((len(perms), n**k), dtype=np.int64)
        for i in range(k):
            src = src * n + inv[:, grid[i]]
        rows.append(src + offset)
        offset += n**k
    if not rows:
        return np.zeros((len(perms), 0), dtype=np.int32)
    return np.concatenate(rows, axis=1).astype(np.int32)
