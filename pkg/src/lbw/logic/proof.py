"""Theorem existence and bounded derivability with countermodel search."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import BudgetExceeded
from ..kernel.algebra import subalgebra_generate
from ..kernel.enumeration import enumerate_algebras, raw_count
from ..kernel.matrix import Matrix
from ..kernel.polynomials import DEFAULT_FREE_BUDGET, free_term_functions
from ..kernel.terms import App, Term, Var, depth, render_term, substitute, subterms
from .calculus import HilbertCalculus, LogicPresentation, Rule, counterexample
from .filters import filter_lattice, is_filter
from .verdict import DERIVED, REFUTED, UNKNOWN, TriStateVerdict

DEFAULT_DEPTH = 3
DEFAULT_BUDGET = 100_000
DEFAULT_MODEL_SIZE = 4
ENUM_CAP = 2_000_000


@dataclass(frozen=True)
class ProofStep:
    rule: int
    substitution: tuple[tuple[int, Term], ...]
    premises: tuple[Term, ...]
    conclusion: Term

    def render(self) -> str:
        sub = ", ".join(f"{render_term(Var(v))}:={render_term(t)}" for v, t in self.substitution)
        return f"{render_term(self.conclusion)}  [rule {self.rule}; {sub}]"


def has_theorems(pres: LogicPresentation | HilbertCalculus, budget: int = DEFAULT_FREE_BUDGET) -> TriStateVerdict:
    if isinstance(pres, HilbertCalculus):
        pres = LogicPresentation.from_calculus(pres)
    if pres.calculus is not None:
        axioms = pres.calculus.axioms
        if axioms:
            return TriStateVerdict(DERIVED, "axiom", trace=(axioms[0],))
        return TriStateVerdict(REFUTED, "no-axioms", countermodel=frozenset())
    # a nonempty subuniverse missing the truth set leaves every formula undesignated somewhere
    for M in pres.matrices:
        A = M.algebra
        for a in A.universe:
            S = subalgebra_generate(A, {a})
            if not S & M.designated:
                return TriStateVerdict(REFUTED, "subuniverse", countermodel=(M, S))
    # theorems are closed under substitution, so one in x exists iff one exists at all
    try:
        free = free_term_functions([M.algebra for M in pres.matrices], 1, budget=budget)
    except BudgetExceeded as e:
        return TriStateVerdict(UNKNOWN, "free-algebra", bounds={"free_budget": budget, "reached": e.partial})
    good = np.ones(free.size, dtype=bool)
    for j, M in enumerate(pres.matrices):
        inF = np.zeros(M.algebra.size, dtype=bool)
        inF[list(M.designated)] = True
        lo, hi = free.segments[j]
        good &= inF[free.elements[:, lo:hi]].all(axis=1)
    hits = np.flatnonzero(good)
    if len(hits):
        return TriStateVerdict(DERIVED, "free-algebra", trace=(free.terms[int(hits[0])],))
    return TriStateVerdict(REFUTED, "free-algebra", countermodel=free.size)


def _match(pattern: Term, t: Term, sigma: dict) -> dict | None:
    if isinstance(pattern, Var):
        bound = sigma.get(pattern.index)
        if bound is None:
            out = dict(sigma)
            out[pattern.index] = t
            return out
        return sigma if bound == t else None
    if not isinstance(t, App) or t.symbol != pattern.symbol:
        return None
    for p, s in zip(pattern.args, t.args):
        sigma = _match(p, s, sigma)
        if sigma is None:
            return None
    return sigma


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded("derivability", self.limit, partial=self.used)


def _forward_chain(calc, gamma, phi, depth_extra, budget):
    facts: dict[Term, int | None] = {g: None for g in gamma}
    steps: list[ProofStep] = []
    pool: list[Term] = []
    for t in list(gamma) + [phi]:
        for s in subterms(t):
            if s not in pool:
                pool.append(s)
    if not pool:
        pool.append(Var(0))
    bound = max(depth(t) for t in list(gamma) + [phi]) + depth_extra

    def instances(rule: Rule):
        def rec(i, sigma):
            if i == len(rule.premises):
                yield sigma
                return
            for f in list(facts):
                s = _match(rule.premises[i], f, sigma)
                if s is not None:
                    yield from rec(i + 1, s)

        for sigma in rec(0, {}):
            free = sorted(rule.variables() - set(sigma))
            for choice in itertools.product(pool, repeat=len(free)):
                full = dict(sigma)
                full.update(zip(free, choice))
                yield full

    changed = True
    while changed:
        changed = False
        for ri, rule in enumerate(calc.rules):
            for sigma in instances(rule):
                budget.spend()
                c = substitute(rule.conclusion, sigma)
                if c in facts or depth(c) > bound:
                    continue
                prem = tuple(substitute(p, sigma) for p in rule.premises)
                steps.append(ProofStep(ri, tuple(sorted(sigma.items())), prem, c))
                facts[c] = len(steps) - 1
                changed = True
                if c == phi:
                    return _extract(steps, facts, phi)
    return None


def _extract(steps, facts, goal) -> tuple[ProofStep, ...]:
    """The steps the goal depends on, in derivation order."""
    needed, stack = set(), [goal]
    while stack:
        t = stack.pop()
        i = facts.get(t)
        if i is None or i in needed:
            continue
        needed.add(i)
        stack.extend(steps[i].premises)
    return tuple(steps[i] for i in sorted(needed))


def replay(calc: HilbertCalculus, gamma: Iterable[Term], phi: Term, trace: Sequence[ProofStep]) -> bool:
    """Check that a trace is a derivation of phi from gamma."""
    known = set(gamma)
    for st in trace:
        rule = calc.rules[st.rule]
        sigma = dict(st.substitution)
        if tuple(substitute(p, sigma) for p in rule.premises) != st.premises:
            return False
        if substitute(rule.conclusion, sigma) != st.conclusion:
            return False
        if not set(st.premises) <= known:
            return False
        known.add(st.conclusion)
    return phi in known


def _candidate_algebras(sig, max_size, notes):
    for n in range(1, max_size + 1):
        if raw_count(sig, n) > ENUM_CAP:
            notes.append(n)
            return
        yield from enumerate_algebras(sig, n, prune_iso=n <= 7, cap=ENUM_CAP)


def find_countermodel(
    calc: HilbertCalculus,
    gamma: Sequence[Term],
    phi: Term,
    max_size: int = DEFAULT_MODEL_SIZE,
    budget: int = DEFAULT_BUDGET,
    models: Sequence[Matrix] = (),
):
    """A filter matrix of the calculus where gamma holds and phi fails.

    Returns ((matrix, assignment) or None, checks used, truncated sizes).
    Matrices with a nonempty truth set are preferred.
    """
    counter = _Budget(budget)
    fallback = None
    notes: list[int] = []

    def attempt(M):
        nonlocal fallback
        counter.spend()
        env = counterexample(M, gamma, phi)
        if env is None:
            return None
        if M.designated:
            return (M, env)
        if fallback is None:
            fallback = (M, env)
        return None

    try:
        for M in models:
            if is_filter(calc, M.algebra, M.designated):
                hit = attempt(M)
                if hit:
                    return hit, counter.used, notes
        for A in _candidate_algebras(calc.signature, max_size, notes):
            for F in filter_lattice(calc, A).filters:
                hit = attempt(Matrix(A, F))
                if hit:
                    return hit, counter.used, notes
    except BudgetExceeded:
        notes.append(-1)
    return fallback, counter.used, notes


def derivable(
    calc: HilbertCalculus,
    gamma: Iterable[Term],
    phi: Term,
    budget: int = DEFAULT_BUDGET,
    depth: int = DEFAULT_DEPTH,
    max_size: int = DEFAULT_MODEL_SIZE,
    prove_only: bool = False,
    models: Sequence[Matrix] = (),
) -> TriStateVerdict:
    gamma = tuple(gamma)
    bounds = {"budget": budget, "depth": depth, "max_size": 0 if prove_only else max_size}
    if phi in gamma:
        return TriStateVerdict(DERIVED, "hypothesis", trace=(), bounds=bounds)
    counter = _Budget(budget)
    try:
        trace = _forward_chain(calc, gamma, phi, depth, counter)
    except BudgetExceeded:
        trace = None
    if trace is not None:
        assert replay(calc, gamma, phi, trace)
        return TriStateVerdict(DERIVED, "forward-chaining", trace=trace, bounds=bounds)
    if not prove_only and budget > 0:
        hit, _, notes = find_countermodel(calc, gamma, phi, max_size, budget, models)
        if hit is not None:
            M, env = hit
            assert is_filter(calc, M.algebra, M.designated)
            assert counterexample(M, gamma, phi) is not None
            return TriStateVerdict(REFUTED, "countermodel", countermodel=hit, bounds=bounds)
        if notes:
            bounds = dict(bounds, truncated=tuple(notes))
    return TriStateVerdict(UNKNOWN, "bounds", bounds=bounds)

