"""Synthesis of translations defining truth on a finite matrix family.

The exact mode sieves all pairs of elements of the (m+1)-generated free
algebra of the family: the pairs holding at every designated element form
the largest candidate translation, and if even that one fails to define
truth then no translation with m parameters does on this family.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import BudgetExceeded, SignatureError
from ..kernel.matrix import Matrix
from ..kernel.polynomials import DEFAULT_FREE_BUDGET, FreeAlgebra, free_term_functions
from ..kernel.terms import Term, Var, render_term, size, substitute, variables
from .translation import Translation, defines_truth

EXACT = "exact"
BOUNDED = "bounded"


@dataclass(frozen=True)
class SynthesisResult:
    translation: Translation | None
    m: int
    mode: str
    exact: bool
    free_size: int
    candidate_pairs: int = 0
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def found(self) -> bool:
        return self.translation is not None

    @property
    def definitive_none(self) -> bool:
        """None is certified for this family and parameter count."""
        return self.translation is None and self.exact


def _rhs_key(t: Term):
    # preferred right-hand sides: small, and free of the distinguished variable
    return (size(t), 0 in variables(t), render_term(t))


def _sieve(free: FreeAlgebra, family: Sequence[Matrix], m: int) -> list[tuple[int, int]]:
    """Pairs (e, r) of free elements agreeing at every designated x, all parameters.

    Elements are grouped by their values there; each group contributes the
    equations e ~ r for its preferred representative r.
    """
    cols = []
    for j, M in enumerate(family):
        n = M.algebra.size
        lo, hi = free.segments[j]
        seg = free.elements[:, lo:hi].reshape(free.size, n, n**m)
        for a in sorted(M.designated):
            cols.append(seg[:, a, :])
    if not cols:
        keys = np.zeros((free.size, 1), dtype=np.int64)
    else:
        keys = np.hstack(cols)
    _, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = np.ravel(inv)
    groups: dict[int, list[int]] = {}
    for e, g in enumerate(inv.tolist()):
        groups.setdefault(g, []).append(e)
    pairs = []
    for members in groups.values():
        if len(members) < 2:
            continue
        rep = min(members, key=lambda e: _rhs_key(free.terms[e]))
        pairs.extend((e, rep) for e in members if e != rep)
    pairs.sort(key=lambda p: (_rhs_key(free.terms[p[0]]), _rhs_key(free.terms[p[1]])))
    return pairs


def _orient(l: Term, r: Term) -> tuple[Term, Term]:
    return (l, r) if _rhs_key(l) >= _rhs_key(r) else (r, l)


def _suszko_priority(eqs, family, calculus, m) -> list[int]:
    """0 for equations whose value pairs stay inside the Suszko congruence of
    Fg({a}) for every designated a (the finite trace of the canonical
    translation), 1 otherwise."""
    from ..congruence import suszko
    from ..kernel.algebra import term_table
    from ..logic.filters import filter_generate, filter_lattice

    prio = [0] * len(eqs)
    for M in family:
        A = M.algebra
        if not M.designated:
            continue
        lat = filter_lattice(calculus, A)
        thetas = {}
        for a in M.designated:
            G = filter_generate(calculus, A, {a})
            if G not in thetas:
                thetas[G] = np.asarray(suszko(calculus, A, G, lattice=lat).ids)
            theta = thetas[G]
            for i, (l, r) in enumerate(eqs):
                lv = term_table(l, A, m + 1).reshape(A.size, -1)[a]
                rv = term_table(r, A, m + 1).reshape(A.size, -1)[a]
                if not (theta[lv] == theta[rv]).all():
                    prio[i] = 1
    return prio


def _minimize(eqs: list, family, m, almost, order) -> list:
    """Drop equations one at a time while truth stays defined."""
    keep = list(eqs)
    for i in order:
        e = eqs[i]
        trial = [q for q in keep if q != e]
        if not trial:
            continue
        if defines_truth(Translation(m, tuple(trial)), family, almost):
            keep = trial
    return keep


def _collapse(tau: Translation, family, almost) -> Translation:
    """Try identifying every parameter with x, then renumber unused parameters."""
    if tau.m == 0:
        return tau
    sigma = {i: Var(0) for i in range(1, tau.m + 1)}
    flat = Translation(0, tuple(_orient(substitute(l, sigma), substitute(r, sigma)) for l, r in tau.equations))
    flat = Translation(0, tuple((l, r) for l, r in flat.equations if l != r) or Translation.trivial().equations)
    if defines_truth(flat, family, almost):
        return flat
    used = sorted(set().union(*(variables(l) | variables(r) for l, r in tau.equations)) - {0})
    ren = {v: Var(i + 1) for i, v in enumerate(used)}
    return Translation(len(used), tuple((substitute(l, ren), substitute(r, ren)) for l, r in tau.equations))


def synthesize_translation(
    family: Sequence[Matrix],
    m: int,
    mode: str = EXACT,
    depth: int = 2,
    almost: bool = False,
    calculus=None,
    budget: int = DEFAULT_FREE_BUDGET,
) -> SynthesisResult:
    """Find a translation with m parameters defining truth on the family.

    In exact mode None is definitive for this family and m. When the free
    algebra exceeds the budget, exact mode falls back to bounded mode and
    says so in ``notes``.
    """
    family = list(family)
    if not family:
        raise ValueError("empty family")
    sig = family[0].signature
    if any(M.signature != sig for M in family):
        raise SignatureError("family members must share one signature")
    if mode not in (EXACT, BOUNDED):
        raise ValueError(f"unknown mode {mode!r}")
    notes = []
    algebras = [M.algebra for M in family]
    free = None
    if mode == EXACT:
        try:
            free = free_term_functions(algebras, m + 1, budget=budget)
        except BudgetExceeded as e:
            notes.append(f"free algebra over budget ({e.partial} elements); bounded depth {depth}")
            mode = BOUNDED
    if free is None:
        free = free_term_functions(algebras, m + 1, budget=budget, max_depth=depth)
    exact = mode == EXACT and free.saturated
    pairs = _sieve(free, family, m)
    eqs = [_orient(free.terms[e], free.terms[r]) for e, r in pairs]
    if not eqs:
        eqs = [(Var(0), Var(0))]
        notes.append("no nontrivial pair survives the sieve")
    full = Translation(m, tuple(eqs))
    if not defines_truth(full, family, almost):
        return SynthesisResult(None, m, mode, exact, free.size, len(pairs), tuple(notes))
    if calculus is not None and eqs[0] != (Var(0), Var(0)):
        prio = _suszko_priority(eqs, family, calculus, m)
        order = sorted(range(len(eqs)), key=lambda i: (-prio[i], -i))
    else:
        order = list(range(len(eqs) - 1, -1, -1))
    kept = _minimize(eqs, family, m, almost, order)
    tau = _collapse(Translation(m, tuple(kept)), family, almost)
    assert defines_truth(tau, family, almost)
    return SynthesisResult(tau, m, mode, exact, free.size, len(pairs), tuple(notes))
