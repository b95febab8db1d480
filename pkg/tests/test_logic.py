import itertools

import pytest
from hypothesis import given

from lbw.congruence import is_reduced, suszko
from lbw.errors import BudgetExceeded, PresentationError, SignatureError
from lbw.kernel.algebra import FiniteAlgebra
from lbw.kernel.enumeration import enumerate_up_to
from lbw.kernel.matrix import Matrix
from lbw.kernel.terms import Signature, app
from lbw.logic.calculus import HilbertCalculus, LogicPresentation, Rule, counterexample, matrix_consequence, rule_valid
from lbw.logic.filters import filter_generate, filter_lattice, is_filter
from lbw.logic.models import modstar, modsuszko
from lbw.logic.proof import derivable, find_countermodel, has_theorems, replay
from support import SL, algebras, brute_filters, two, x, y

BOX = Signature.of(("box", 1), ("one", 0))


@pytest.fixture(scope="module")
def cpc_and(corpus):
    return corpus["semilattices"].calculi["CPCand"]


@pytest.fixture(scope="module")
def box_logic(corpus):
    return corpus["a4"].calculi["L"]


def meet(a, b):
    return app("meet", a, b)


# -- calculi ---------------------------------------------------------------------


def test_rules_are_canonical_and_deduplicated():
    r1 = Rule.of([app("meet", y, x)], y)
    r2 = Rule.of([app("meet", x, y)], x)
    calc = HilbertCalculus.of(SL, [r1, r2])
    assert len(calc.rules) == 1
    assert calc.rules[0].render() == "meet(x, y) |- x"


def test_calculus_checks_terms():
    with pytest.raises(SignatureError):
        HilbertCalculus.of(SL, [Rule.of([], app("join", x, y))])


def test_counterexample_and_consequence():
    M = Matrix(two(), {1})
    assert counterexample(M, [x], meet(x, y)) == {0: 1, 1: 0}
    assert counterexample(M, [x, y], meet(x, y)) is None
    assert matrix_consequence([M], [meet(x, y)], y)
    assert rule_valid(Rule.of([meet(x, y)], x), M)


def test_presentation_validation():
    with pytest.raises(PresentationError):
        LogicPresentation(SL)
    with pytest.raises(PresentationError):
        LogicPresentation.from_matrices([])
    bad = HilbertCalculus.of(SL, [Rule.of([x], y)])
    with pytest.raises(PresentationError):
        LogicPresentation(SL, bad, (Matrix(two(), {1}),))


# -- filters ---------------------------------------------------------------------


@given(algebras(sig=SL, max_size=3))
def test_filter_lattice_matches_brute_force_cpc_and(A):
    calc = HilbertCalculus.of(SL, [
        Rule.of([x, y], meet(x, y)), Rule.of([meet(x, y)], x), Rule.of([meet(x, y)], y),
    ])
    assert set(filter_lattice(calc, A).filters) == set(brute_filters(calc, A))


@given(algebras(sig=BOX, max_size=4))
def test_filter_lattice_matches_brute_force_box(A):
    calc = HilbertCalculus.of(BOX, [
        Rule.of([], app("one")), Rule.of([], app("box", app("one"))),
        Rule.of([app("box", app("box", x))], y),
    ])
    lat = filter_lattice(calc, A)
    assert set(lat.filters) == set(brute_filters(calc, A))
    assert list(lat.filters) == sorted(lat.filters, key=lambda F: (len(F), sorted(F)))


def test_filter_generate_is_least(box_logic, corpus):
    A4 = corpus["a4"].algebras["A4"]
    lat = filter_lattice(box_logic, A4)
    for a in A4.universe:
        G = filter_generate(box_logic, A4, {a})
        assert is_filter(box_logic, A4, G)
        assert G == min((F for F in lat.filters if a in F), key=len)
        assert all(G <= F for F in lat.filters if a in F)


def test_lattice_operations(cpc_and, corpus):
    A = corpus["semilattices"].algebras["Vee"]
    lat = filter_lattice(cpc_and, A)
    for i, j in itertools.product(range(len(lat)), repeat=2):
        F, G = lat.filters[i], lat.filters[j]
        assert lat.filters[lat.meet[i, j]] == F & G
        assert lat.filters[lat.join[i, j]] == filter_generate(cpc_and, A, F | G)
        assert lat.order[i, j] == (F <= G)
    assert lat.bottom == frozenset()


def test_filter_lattice_budget(cpc_and, corpus):
    with pytest.raises(BudgetExceeded):
        filter_lattice(cpc_and, corpus["semilattices"].algebras["Chain3"], budget=1)


# -- theorems and derivability ---------------------------------------------------


def test_has_theorems_routes(cpc_and, box_logic, corpus):
    assert has_theorems(box_logic).derived
    v = has_theorems(cpc_and)
    assert v.refuted and v.route == "no-axioms"
    lb = LogicPresentation.from_matrices([corpus["bilattices"].matrices["LB"]])
    v = has_theorems(lb)
    assert v.refuted and v.route == "subuniverse"
    M, S = v.countermodel
    assert [M.algebra.name(a) for a in S] == ["0"]
    v = has_theorems(LogicPresentation.from_matrices([corpus["implication"].matrices["I2"]]))
    assert v.derived and v.route == "free-algebra"


def test_has_theorems_free_algebra_refutation():
    sig = Signature.of(("f", 1))
    swap = FiniteAlgebra.from_tables(sig, 2, {"f": [1, 0]})
    v = has_theorems(LogicPresentation.from_matrices([Matrix(swap, {1})]))
    assert v.refuted and v.route == "free-algebra"


def test_derivation_replays(cpc_and):
    v = derivable(cpc_and, [meet(x, y)], meet(y, x))
    assert v.derived
    assert replay(cpc_and, [meet(x, y)], meet(y, x), v.trace)
    assert not replay(cpc_and, [x], meet(y, x), v.trace)


def test_refutation_is_a_filter_countermodel(cpc_and):
    v = derivable(cpc_and, [], x)
    assert v.refuted
    M, env = v.countermodel
    assert is_filter(cpc_and, M.algebra, M.designated)
    assert counterexample(M, [], x) is not None


def test_countermodel_prefers_nonempty_truth_sets(cpc_and):
    hit, _, _ = find_countermodel(cpc_and, [x], y)
    assert hit is not None and hit[0].designated


def test_zero_budget_is_unknown(cpc_and):
    v = derivable(cpc_and, [x], y, budget=0)
    assert v.unknown


# -- models ----------------------------------------------------------------------


def test_modstar_members_are_reduced_filters(cpc_and):
    family = enumerate_up_to(SL, 3)
    ms = modstar(cpc_and, family)
    assert ms
    for M in ms:
        assert is_reduced(M) and is_filter(cpc_and, M.algebra, M.designated)


def test_reduced_models_are_suszko_reduced(box_logic):
    family = enumerate_up_to(BOX, 3)
    star = set(modstar(box_logic, family))
    suz = set(modsuszko(box_logic, family))
    assert star <= suz
    for M in suz:
        assert suszko(box_logic, M.algebra, M.designated).is_identity()


def test_modstar_needs_calculus(corpus):
    pres = LogicPresentation.from_matrices([corpus["implication"].matrices["I2"]])
    with pytest.raises(PresentationError):
        modstar(pres, [two()])
