"""Numpy implementations of the hot kernels (used when the extension is absent)."""
from __future__ import annotations

import numpy as np

NAME = "pure"


def normalize_ids(ids: np.ndarray) -> np.ndarray:
    ids = np.asarray(ids)
    if ids.size == 0:
        return ids.astype(np.int32)
    _, first, inv = np.unique(ids, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int32)
    rank[np.argsort(first)] = np.arange(len(first), dtype=np.int32)
    return rank[np.ravel(inv)]


def refine(n, arities, offsets, tables, init):
    """Largest congruence contained in the equivalence ``init`` (block ids)."""
    blocks = normalize_ids(init)
    views = []
    for k, o in zip(arities, offsets):
        k = int(k)
        if k == 0:
            continue
        arr = np.asarray(tables[o:o + n**k]).reshape((n,) * k)
        for pos in range(k):
            views.append(np.moveaxis(arr, pos, -1).reshape(-1, n))
    while True:
        keys = np.vstack([blocks[None, :]] + [blocks[v] for v in views])
        _, inv = np.unique(keys.T, axis=0, return_inverse=True)
        new = normalize_ids(np.ravel(inv))
        if new.max(initial=-1) == blocks.max(initial=-1):
            return new
        blocks = new


def closure(n, prem, concl, start):
    """Least superset of ``start`` closed under the instances prem[i] -> concl[i].

    ``prem`` is an (N, P) int array padded with -1.
    """
    mask = np.zeros(n + 1, dtype=bool)
    mask[:n] = np.asarray(start, dtype=bool)
    mask[n] = True
    if len(concl) == 0:
        return mask[:n].astype(np.uint8)
    pidx = np.where(prem < 0, n, prem)
    while True:
        fire = mask[pidx].all(axis=1)
        tgt = concl[fire]
        if mask[tgt].all():
            return mask[:n].astype(np.uint8)
        mask[tgt] = True


def canonical_mask(serials, perms, gather):
    """1 for rows that are lexicographically minimal among their permuted images.

    The image of row s under permutation p has entry ``perms[p][s[gather[p, j]]]``
    at position j.
    """
    serials = np.asarray(serials)
    N, L = serials.shape
    P = len(perms)
    out = np.ones(N, dtype=np.uint8)
    if N == 0 or L == 0:
        return out
    chunk = max(1, 4_000_000 // max(1, P * L))
    pidx = np.arange(P)[None, :, None]
    for s in range(0, N, chunk):
        block = serials[s:s + chunk]
        images = perms[pidx, block[:, gather]]            # (b, P, L)
        diff = images != block[:, None, :]
        first = diff.argmax(axis=2)
        has = diff.any(axis=2)
        b_idx = np.arange(len(block))[:, None]
        img_first = np.take_along_axis(images, first[:, :, None], axis=2)[:, :, 0]
        orig_first = block[b_idx, first]
        smaller = has & (img_first < orig_first)
        out[s:s + chunk] = ~smaller.any(axis=1)
    return out
