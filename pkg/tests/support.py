"""Shared builders and brute-force oracles for the test suite."""
import itertools

from hypothesis import strategies as st

from lbw.kernel.algebra import FiniteAlgebra, eval_term
from lbw.kernel.matrix import Matrix
from lbw.kernel.terms import Signature, Var, app

x, y, z = Var(0), Var(1), Var(2)

SL = Signature.of(("meet", 2))
UNARY_CONST = Signature.of(("f", 1), ("c", 0))
MIXED = Signature.of(("g", 2), ("f", 1))


def two() -> FiniteAlgebra:
    return FiniteAlgebra.from_tables(SL, 2, {"meet": [[0, 0], [0, 1]]})


def chain(n: int) -> FiniteAlgebra:
    return FiniteAlgebra.from_tables(SL, n, {"meet": [[min(a, b) for b in range(n)] for a in range(n)]})


@st.composite
def algebras(draw, sig=MIXED, max_size=4):
    n = draw(st.integers(1, max_size))
    tables = tuple(
        tuple(draw(st.lists(st.integers(0, n - 1), min_size=n**k, max_size=n**k)))
        for _, k in sig.symbols
    )
    return FiniteAlgebra(sig, n, tables)


@st.composite
def matrices(draw, sig=MIXED, max_size=4):
    A = draw(algebras(sig, max_size))
    F = draw(st.frozensets(st.integers(0, A.size - 1)))
    return Matrix(A, F)


def brute_filters(calc, A):
    """Every subset closed under every rule instance, by direct evaluation."""
    instances = []
    for r in calc.rules:
        vs = sorted(r.variables())
        for vals in itertools.product(A.universe, repeat=len(vs)):
            env = dict(zip(vs, vals))
            prem = {eval_term(p, A, env) for p in r.premises}
            instances.append((prem, eval_term(r.conclusion, A, env)))
    out = []
    for bits in itertools.product((0, 1), repeat=A.size):
        F = frozenset(a for a in A.universe if bits[a])
        if all(c in F for prem, c in instances if prem <= F):
            out.append(F)
    return out


def brute_term_functions(family, k, max_depth=6):
    """Term functions of depth <= max_depth by naive generation (oracle)."""
    sig = family[0].signature
    points = [list(itertools.product(A.universe, repeat=k)) for A in family]

    def table(t):
        return tuple(
            eval_term(t, A, dict(enumerate(p))) for A, pts in zip(family, points) for p in pts
        )

    seen = {}
    layer = [Var(i) for i in range(k)] + [app(c) for c in sig.constants()]
    for _ in range(max_depth + 1):
        fresh = []
        for t in layer:
            key = table(t)
            if key not in seen:
                seen[key] = t
                fresh.append(t)
        if not fresh:
            break
        known = list(seen.values())
        layer = []
        for s, ar in sig.symbols:
            if ar == 0:
                continue
            for args in itertools.product(known, repeat=ar):
                if any(a in fresh for a in args):
                    layer.append(app(s, *args))
    return seen

