"""Compare the compiled kernels with the numpy fallback.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``. Each row times
one kernel on the same inputs under both backends and checks the outputs agree.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from lbw import kernels
from lbw.interface import load_corpus
from lbw.kernel.algebra import FiniteAlgebra
from lbw.kernel.enumeration import _serials
from lbw.kernel.terms import Signature
from lbw.logic.filters import compile_instances


def refine_case(rng, n=60):
    sig = Signature.of(("g", 2), ("f", 1))
    # a chain-like algebra keeps many classes alive for several rounds
    g = np.minimum.outer(np.arange(n), np.arange(n))
    f = np.roll(np.arange(n), 1)
    A = FiniteAlgebra(sig, n, (tuple(g.ravel().tolist()), tuple(f.tolist())))
    ar, off, tabs = kernels.pack_ops([k for _, k in sig.symbols], A.tables)
    init = rng.integers(0, 2, n).astype(np.int32)
    return "refine (n=60)", lambda mod: mod.refine(n, ar, off, tabs, init.copy())


def closure_case(rng):
    calc = load_corpus("lattices").calculi["CPCandor"]
    n = 24
    meet = np.minimum.outer(np.arange(n), np.arange(n))
    join = np.maximum.outer(np.arange(n), np.arange(n))
    A = FiniteAlgebra(calc.signature, n, (tuple(meet.ravel().tolist()), tuple(join.ravel().tolist())))
    prem, concl = compile_instances(calc, A)
    start = np.zeros(n, dtype=np.uint8)
    start[n // 2] = 1
    return "closure (24-chain lattice)", lambda mod: mod.closure(n, prem, concl, start.copy())


def canonical_case(rng):
    sig = Signature.of(("meet", 2))
    n = 3
    rows = _serials(sig, n, 0, 19683)
    perms = kernels.permutations(n)
    gather = kernels.gather_indices(n, (2,))
    return "canonical_mask (all 3-element groupoids)", lambda mod: mod.canonical_mask(rows, perms, gather)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if kernels.fast is None:
        print("compiled extension not available; only the fallback can be timed")
    rng = np.random.default_rng(0)
    cases = [refine_case(rng), closure_case(rng), canonical_case(rng)]
    print(f"{'kernel':<42} {'pure (ms)':>10} {'cython (ms)':>12} {'speedup':>8}")
    for name, run in cases:
        t_pure = min(timeit.repeat(lambda: run(kernels.pure), number=1, repeat=args.repeat)) * 1e3
        if kernels.fast is None:
            print(f"{name:<42} {t_pure:>10.2f} {'-':>12} {'-':>8}")
            continue
        a, b = np.asarray(run(kernels.pure)), np.asarray(run(kernels.fast))
        if not np.array_equal(a.astype(np.int64), b.astype(np.int64)):
            raise SystemExit(f"{name}: backends disagree")
        t_fast = min(timeit.repeat(lambda: run(kernels.fast), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<42} {t_pure:>10.2f} {t_fast:>12.2f} {t_pure / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
