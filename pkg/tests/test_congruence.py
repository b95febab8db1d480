import pytest
from hypothesis import given
from hypothesis import strategies as st

from lbw.congruence import (
    all_congruences,
    is_reduced,
    largest_congruence_below,
    leibniz,
    leibniz_via_polynomials,
    principal_congruence,
    reduce_matrix,
    suszko,
)
from lbw.errors import BudgetExceeded
from lbw.kernel.constructions import is_congruence, quotient
from lbw.kernel.matrix import Matrix
from lbw.kernel.partition import Partition, all_partitions
from lbw.logic.filters import filter_lattice
from support import algebras, chain, matrices, two


def oracle_leibniz(A, F):
    """Coarsest congruence that saturates F, by scanning every partition."""
    best = None
    for p in all_partitions(A.size):
        if is_congruence(A, p) and p.is_compatible_with(F):
            if best is None or p.num_blocks < best.num_blocks:
                best = p
    return best


@given(matrices(max_size=4))
def test_leibniz_three_ways(M):
    A, F = M.algebra, M.designated
    om = leibniz(A, F)
    assert om == leibniz_via_polynomials(A, F)
    assert om == oracle_leibniz(A, F)


@given(matrices(max_size=4))
def test_leibniz_is_largest_compatible(M):
    om = leibniz(M.algebra, M.designated)
    assert is_congruence(M.algebra, om)
    assert om.is_compatible_with(M.designated)
    for theta in all_congruences(M.algebra):
        if theta.is_compatible_with(M.designated):
            assert theta.refines(om)


def test_leibniz_of_two_element_semilattice():
    assert leibniz(two(), {1}).is_identity()
    assert leibniz(two(), set()).is_total()
    assert leibniz(two(), {0, 1}).is_total()


def test_largest_congruence_below_on_chain():
    A = chain(4)
    # {0,2} is not an interval, so only the identity survives inside it
    E = Partition.from_blocks(4, [(0, 2), (1, 3)])
    assert largest_congruence_below(A, E).is_identity()


@given(algebras(max_size=4), st.data())
def test_principal_congruence_is_least(A, data):
    a = data.draw(st.integers(0, A.size - 1))
    b = data.draw(st.integers(0, A.size - 1))
    cg = principal_congruence(A, a, b)
    assert is_congruence(A, cg) and cg.related(a, b)
    for theta in all_congruences(A):
        if theta.related(a, b):
            assert cg.refines(theta)


def test_all_congruences_cap():
    with pytest.raises(BudgetExceeded):
        all_congruences(chain(6))


@given(matrices(max_size=4))
def test_reduction_is_reduced(M):
    R, h = reduce_matrix(M)
    assert is_reduced(R)
    assert M.algebra.is_homomorphism(R.algebra, h)
    # the designated set is a union of blocks, so it is the full preimage
    assert {a for a in M.algebra.universe if h[a] in R.designated} == M.designated


@given(matrices(max_size=4), st.data())
def test_surjective_preimage_law(M, data):
    """Omega of a preimage under a surjection is the preimage of Omega."""
    A = M.algebra
    theta = data.draw(st.sampled_from(all_congruences(A)))
    B, h = quotient(A, theta)
    G = frozenset(data.draw(st.frozensets(st.integers(0, B.size - 1))))
    pre = frozenset(a for a in A.universe if h[a] in G)
    assert leibniz(A, pre) == leibniz(B, G).preimage(h)


def test_suszko_methods_agree_on_corpus(corpus):
    for doc in corpus.values():
        for calc in doc.calculi.values():
            for A in doc.algebras.values():
                if A.signature != calc.signature:
                    continue
                lat = filter_lattice(calc, A)
                for F in lat.filters:
                    d = suszko(calc, A, F, "definition", lat)
                    assert d == suszko(calc, A, F, "polynomial", lat)
                    assert d.refines(leibniz(A, F))


def test_suszko_of_empty_filter_on_two(corpus):
    calc = corpus["semilattices"].calculi["CPCand"]
    assert suszko(calc, two(), set()).is_identity()
    assert leibniz(two(), set()).is_total()


def test_suszko_rejects_unknown_method(corpus):
    calc = corpus["semilattices"].calculi["CPCand"]
    with pytest.raises(ValueError):
        suszko(calc, two(), {1}, method="magic")


def test_matrix_rejects_out_of_range():
    with pytest.raises(ValueError):
        Matrix(two(), {2})
