# cython: language_level=3
"""Compiled versions of the hot kernels; same contracts as ``_pure``."""
import numpy as np

NAME = "cython"


cdef void _normalize(int[::1] ids, int n, int[::1] scratch) noexcept:
    cdef int a, b, nxt = 0
    for a in range(n):
        scratch[a] = -1
    for a in range(n):
        b = ids[a]
        if scratch[b] == -1:
            scratch[b] = nxt
            nxt += 1
        ids[a] = scratch[b]


def normalize_ids(init):
    from ._pure import normalize_ids as _n
    return _n(init)


def refine(int n, arities, offsets, tables, init):
    cdef int[::1] ar = np.ascontiguousarray(arities, dtype=np.int32)
    cdef int[::1] off = np.ascontiguousarray(offsets, dtype=np.int32)
    cdef int[::1] tab = np.ascontiguousarray(tables, dtype=np.int32)
    cdef int[::1] blocks = np.ascontiguousarray(normalize_ids(init), dtype=np.int32)
    cdef int[::1] rep = np.empty(max(n, 1), dtype=np.int32)
    cdef int[::1] newid = np.empty(max(n, 1), dtype=np.int32)
    cdef int[::1] moved = np.empty(max(n, 1), dtype=np.int32)
    cdef int[::1] scratch = np.empty(max(n, 1), dtype=np.int32)
    cdef int nops = ar.shape[0]
    cdef int a, r, b, o, k, pos, nb, opi
    cdef long q, nparams, lowsize, hi, lo, ia, ir, p
    cdef bint split, agree
    while True:
        for b in range(n):
            rep[b] = -1
            newid[b] = -1
        for a in range(n):
            if rep[blocks[a]] == -1:
                rep[blocks[a]] = a
        nb = 0
        for a in range(n):
            if blocks[a] + 1 > nb:
                nb = blocks[a] + 1
        split = False
        for a in range(n):
            moved[a] = 0
            r = rep[blocks[a]]
            if r == a:
                continue
            agree = True
            for opi in range(nops):
                k = ar[opi]
                if k == 0:
                    continue
                o = off[opi]
                nparams = 1
                for p in range(k - 1):
                    nparams *= n
                for pos in range(k):
                    lowsize = 1
                    for p in range(k - 1 - pos):
                        lowsize *= n
                    for q in range(nparams):
                        hi = q // lowsize
                        lo = q % lowsize
                        ia = (hi * n + a) * lowsize + lo
                        ir = (hi * n + r) * lowsize + lo
                        if blocks[tab[o + ia]] != blocks[tab[o + ir]]:
                            agree = False
                            break
                    if not agree:
                        break
                if not agree:
                    break
            if not agree:
                moved[a] = 1
                split = True
        if not split:
            break
        for a in range(n):
            if moved[a]:
                b = blocks[a]
                if newid[b] == -1:
                    newid[b] = nb
                    nb += 1
        for a in range(n):
            if moved[a]:
                blocks[a] = newid[blocks[a]]
        # ids may exceed n - 1 transiently; renormalize before next pass
        if nb > n:
            tmp = np.asarray(blocks).copy()
            blocks = np.ascontiguousarray(normalize_ids(tmp), dtype=np.int32)
    _normalize(blocks, n, scratch)
    return np.asarray(blocks).copy()


def closure(int n, prem, concl, start):
    cdef int[:, ::1] pm = np.ascontiguousarray(prem, dtype=np.int32).reshape(len(concl), -1) if len(concl) else np.zeros((0, 0), dtype=np.int32)
    cdef int[::1] cc = np.ascontiguousarray(concl, dtype=np.int32)
    cdef unsigned char[::1] mask = np.ascontiguousarray(start, dtype=np.uint8).copy()
    cdef int N = cc.shape[0]
    cdef int P = pm.shape[1] if N else 0
    cdef int i, j, v
    cdef bint changed = True, ok
    while changed:
        changed = False
        for i in range(N):
            if mask[cc[i]]:
                continue
            ok = True
            for j in range(P):
                v = pm[i, j]
                if v < 0:
                    break
                if not mask[v]:
                    ok = False
                    break
            if ok:
                mask[cc[i]] = 1
                changed = True
    return np.asarray(mask).copy()


def canonical_mask(serials, perms, gather):
    cdef int[:, ::1] S = np.ascontiguousarray(serials, dtype=np.int32)
    cdef int[:, ::1] PM = np.ascontiguousarray(perms, dtype=np.int32)
    cdef int[:, ::1] G = np.ascontiguousarray(gather, dtype=np.int32)
    cdef int N = S.shape[0]
    cdef int L = S.shape[1]
    cdef int P = PM.shape[0]
    out = np.ones(N, dtype=np.uint8)
    cdef unsigned char[::1] o = out
    cdef int row, p, j, img, orig
    for row in range(N):
        for p in range(P):
            for j in range(L):
                img = PM[p, S[row, G[p, j]]]
                orig = S[row, j]
                if img < orig:
                    o[row] = 0
                    break
                if img > orig:
                    break
            if o[row] == 0:
                break
    return out
