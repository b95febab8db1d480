import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lbw.errors import BudgetExceeded, NotACongruence, NotALattice, SignatureError
from lbw.kernel.algebra import FiniteAlgebra, eval_term, subalgebra_generate, term_table
from lbw.kernel.constructions import (
    expand_constant,
    is_congruence,
    lattice_order,
    power,
    product,
    quotient,
    reduct,
    subalgebra,
    twist_structure,
)
from lbw.kernel.enumeration import (
    canonical_serialization,
    enumerate_algebras,
    enumerate_up_to,
    find_matrix_isomorphism,
    isomorphic,
    iso_classes,
    raw_count,
)
from lbw.kernel.matrix import Matrix
from lbw.kernel.partition import Partition, all_partitions, meet_all, partition_from_columns
from lbw.kernel.polynomials import free_term_functions, unary_polynomials
from lbw.kernel.terms import Signature, app, check_term, depth, render_term, size, substitute, variables
from support import MIXED, SL, UNARY_CONST, algebras, brute_term_functions, chain, two, x, y

LAT = Signature.of(("meet", 2), ("join", 2))


def lattice_chain(n):
    return FiniteAlgebra.from_tables(LAT, n, {
        "meet": [[min(a, b) for b in range(n)] for a in range(n)],
        "join": [[max(a, b) for b in range(n)] for a in range(n)],
    })


def permuted(A: FiniteAlgebra, p) -> FiniteAlgebra:
    """The isomorphic copy of A along the bijection p."""
    inv = np.argsort(p)
    tables = []
    for name, k in A.signature.symbols:
        tables.append(tuple(
            int(p[A.op(name, *(int(inv[b]) for b in args))])
            for args in itertools.product(range(A.size), repeat=k)
        ))
    return FiniteAlgebra(A.signature, A.size, tuple(tables))


# -- terms ---------------------------------------------------------------------


def test_term_helpers():
    t = app("g", app("f", x), y)
    assert render_term(t) == "g(f(x), y)"
    assert depth(t) == 2 and size(t) == 4
    assert variables(t) == {0, 1}
    assert substitute(t, {1: x}) == app("g", app("f", x), x)


def test_check_term_rejects_bad_arity():
    with pytest.raises(SignatureError):
        check_term(app("f", x, y), MIXED)
    with pytest.raises(SignatureError):
        check_term(app("h", x), MIXED)


def test_signature_rejects_duplicates():
    with pytest.raises(SignatureError):
        Signature.of(("f", 1), ("f", 2))


# -- algebras ------------------------------------------------------------------


def test_algebra_validation():
    with pytest.raises(ValueError):
        FiniteAlgebra(SL, 2, ((0, 1, 2, 0),))
    with pytest.raises(ValueError):
        FiniteAlgebra(SL, 2, ((0, 1, 1),))
    with pytest.raises(SignatureError):
        FiniteAlgebra.from_tables(SL, 2, {})


def test_op_is_row_major():
    A = FiniteAlgebra.from_tables(SL, 3, {"meet": [[0, 1, 2], [0, 0, 0], [1, 1, 1]]})
    assert A.op("meet", 0, 2) == 2
    assert A.op("meet", 2, 0) == 1


@given(algebras())
def test_term_table_matches_eval(A):
    t = app("g", app("f", y), x)
    tab = term_table(t, A, 2)
    for i, (a, b) in enumerate(itertools.product(A.universe, repeat=2)):
        assert tab[i] == eval_term(t, A, {0: a, 1: b})


def test_subalgebra_generated():
    A = chain(4)
    assert subalgebra_generate(A, {1, 3}) == {1, 3}
    S, incl = subalgebra(A, {2})
    assert S.size == 1 and incl == (2,)


# -- partitions ----------------------------------------------------------------


def test_partition_counts_are_bell_numbers():
    assert [sum(1 for _ in all_partitions(n)) for n in range(6)] == [1, 1, 2, 5, 15, 52]


partitions4 = st.lists(st.integers(0, 3), min_size=4, max_size=4).map(lambda ids: Partition(tuple(ids)))


@given(partitions4, partitions4)
def test_meet_and_join_bounds(p, q):
    m, j = p.meet(q), p.join(q)
    assert m.refines(p) and m.refines(q)
    assert p.refines(j) and q.refines(j)
    # meet is the largest common refinement
    for r in all_partitions(4):
        if r.refines(p) and r.refines(q):
            assert r.refines(m)
        if p.refines(r) and q.refines(r):
            assert j.refines(r)


def test_partition_normalizes():
    assert Partition((5, 5, 2)) == Partition((0, 0, 1))
    assert Partition.from_blocks(4, [(0, 2)]).blocks() == [(0, 2), (1,), (3,)]
    assert partition_from_columns(np.array([[1, 2, 1]])) == Partition((0, 1, 0))
    assert meet_all([], 3).is_total()


# -- constructions -------------------------------------------------------------


def test_quotient_map_is_homomorphism():
    A = chain(4)
    theta = Partition.from_blocks(4, [(0, 1), (2, 3)])
    B, h = quotient(A, theta)
    assert B.size == 2
    assert A.is_homomorphism(B, h)
    with pytest.raises(NotACongruence):
        quotient(A, Partition.from_blocks(4, [(0, 2)]))


def test_product_projections():
    A, B = chain(2), chain(3)
    P = product([A, B])
    assert P.size == 6
    assert P.is_homomorphism(A, [i // 3 for i in range(6)])
    assert P.is_homomorphism(B, [i % 3 for i in range(6)])
    assert power(A, 2).size == 4


def test_expand_and_reduct():
    A = expand_constant(two(), "one", 1)
    assert A.signature.names == ("meet", "one")
    assert reduct(A, SL) == two()
    with pytest.raises(SignatureError):
        expand_constant(A, "one", 0)


def test_lattice_order_rejects_non_lattice():
    bad = FiniteAlgebra.from_tables(LAT, 2, {"meet": [[0, 1], [1, 0]], "join": [[0, 1], [1, 0]]})
    with pytest.raises(NotALattice):
        lattice_order(bad)


def test_twist_structure_laws():
    L = lattice_chain(3)
    T = twist_structure(L)
    n = L.size
    pairs = [(a1, a2) for a1 in range(n) for a2 in range(n)]
    idx = {p: i for i, p in enumerate(pairs)}
    for p in pairs:
        assert T.op("neg", idx[p]) == idx[(p[1], p[0])]
        for q in pairs:
            assert T.op("and", idx[p], idx[q]) == idx[(min(p[0], q[0]), max(p[1], q[1]))]
            assert T.op("or", idx[p], idx[q]) == idx[(max(p[0], q[0]), min(p[1], q[1]))]
            assert T.op("otimes", idx[p], idx[q]) == idx[(min(p[0], q[0]), min(p[1], q[1]))]
            assert T.op("oplus", idx[p], idx[q]) == idx[(max(p[0], q[0]), max(p[1], q[1]))]


# -- enumeration ---------------------------------------------------------------


def test_raw_count():
    assert raw_count(SL, 3) == 3**9
    assert raw_count(UNARY_CONST, 2) == 2**2 * 2


def test_groupoid_counts_up_to_isomorphism():
    # number of binary operations up to isomorphism: 1, 10, 3330
    assert [sum(1 for _ in enumerate_algebras(SL, n, prune_iso=True)) for n in (1, 2, 3)] == [1, 10, 3330]


def brute_iso_count(sig, n):
    seen = set()
    for A in enumerate_algebras(sig, n):
        seen.add(min(permuted(A, p).serialization() for p in itertools.permutations(range(n))))
    return len(seen)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_iso_pruning_matches_brute_force(n):
    assert sum(1 for _ in enumerate_algebras(UNARY_CONST, n, prune_iso=True)) == brute_iso_count(UNARY_CONST, n)


def test_enumeration_cap():
    with pytest.raises(BudgetExceeded):
        list(enumerate_algebras(SL, 4, cap=1000))


@given(algebras(max_size=4), st.randoms(use_true_random=False))
def test_relabeling_preserves_iso_type(A, rnd):
    p = list(range(A.size))
    rnd.shuffle(p)
    B = permuted(A, p)
    assert canonical_serialization(A) == canonical_serialization(B)
    F = frozenset(range(A.size // 2))
    h = find_matrix_isomorphism(Matrix(A, F), Matrix(B, {p[a] for a in F}))
    assert h is not None
    assert A.is_homomorphism(B, h)


def test_iso_classes_dedupes():
    A = two()
    B = permuted(A, [1, 0])
    ms = [Matrix(A, {1}), Matrix(B, {0}), Matrix(A, {0})]
    assert isomorphic(ms[0], ms[1])
    assert len(iso_classes(ms)) == 2


def test_enumerate_up_to_sizes():
    algs = enumerate_up_to(UNARY_CONST, 3)
    assert {A.size for A in algs} == {1, 2, 3}


# -- free algebras and polynomials ------------------------------------------------


def test_free_algebra_of_a4_has_five_unary_terms(corpus):
    A4 = corpus["a4"].algebras["A4"]
    free = free_term_functions([A4], 1)
    assert free.size == 5 and free.saturated
    assert sorted(render_term(t) for t in free.terms) == sorted(
        ["x", "one", "box(x)", "box(one)", "box(box(x))"]
    )


def test_free_semilattice_on_two_generators():
    assert free_term_functions([two()], 2).size == 3


@given(algebras(sig=MIXED, max_size=3))
def test_free_algebra_matches_naive_generation(A):
    free = free_term_functions([A], 1)
    brute = brute_term_functions([A], 1, max_depth=12)
    assert free.size == len(brute)
    assert {tuple(row) for row in free.elements.tolist()} == set(brute)
    for t, row in zip(free.terms, free.elements.tolist()):
        assert tuple(eval_term(t, A, {0: a}) for a in A.universe) == tuple(row)


def test_free_algebra_budgets():
    A = lattice_chain(3)
    with pytest.raises(BudgetExceeded):
        free_term_functions([A], 3, budget=10)
    with pytest.raises(BudgetExceeded):
        free_term_functions([A], 3, work_budget=50)
    bounded = free_term_functions([A], 2, max_depth=0)
    assert not bounded.saturated and bounded.size == 2


def test_free_algebra_rejects_mixed_signatures():
    with pytest.raises(SignatureError):
        free_term_functions([two(), lattice_chain(2)], 1)


@given(algebras(sig=MIXED, max_size=3))
def test_unary_polynomials_closed_and_complete(A):
    polys = {tuple(r) for r in unary_polynomials(A).tolist()}
    n = A.size
    assert tuple(range(n)) in polys
    assert all(tuple([c] * n) in polys for c in range(n))
    # closure under every basic operation with constants in the other slots
    for p in list(polys):
        for a in range(n):
            assert tuple(A.op("f", v) for v in p) in polys
            assert tuple(A.op("g", v, a) for v in p) in polys
            assert tuple(A.op("g", a, v) for v in p) in polys


def test_is_congruence_on_chain():
    # congruences of an n-chain meet-semilattice: partitions into intervals
    A = chain(4)
    found = [p for p in all_partitions(4) if is_congruence(A, p)]
    assert len(found) == 2**3
