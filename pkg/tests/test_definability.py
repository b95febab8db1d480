import pytest
from hypothesis import given
from hypothesis import strategies as st

from lbw.congruence import is_reduced
from lbw.definability.detect import (
    binary_terms,
    detect_protoalgebraic,
    detect_protoconjunction,
    detect_protodisjunction,
)
from lbw.definability.hierarchy import (
    ARROWS,
    HOLDS,
    LEVELS,
    REFUTED,
    TESTED,
    UNKNOWN,
    Bounds,
    LevelStatus,
    classify,
    propagate,
)
from lbw.definability.operators import (
    check_completely_order_reflecting,
    check_injective,
    check_order_reflecting,
    check_truth_implicit,
    check_truth_small,
    naive_completely_order_reflecting,
    operator_profile,
)
from lbw.definability.synthesis import BOUNDED, EXACT, synthesize_translation
from lbw.definability.translation import (
    Translation,
    check_in_reduction,
    defines_truth,
    expand_with_constant,
    solutions,
)
from lbw.errors import EmptySolutionSet, SignatureError
from lbw.kernel.matrix import Matrix
from lbw.kernel.terms import Signature, Var, app, render_term
from lbw.logic.calculus import HilbertCalculus, LogicPresentation, Rule
from lbw.logic.filters import filter_lattice
from lbw.logic.models import modstar
from support import SL, algebras, two, x

y1 = Var(1)
TOP = Translation(1, ((app("meet", x, y1), y1),))
BOX = Signature.of(("box", 1), ("one", 0))


@pytest.fixture(scope="module")
def cpc_and(corpus):
    return corpus["semilattices"].calculi["CPCand"]


@pytest.fixture(scope="module")
def box_logic(corpus):
    return corpus["a4"].calculi["L"]


def reduced_corpus_matrices(corpus):
    for doc in corpus.values():
        for M in doc.matrices.values():
            if M.designated and is_reduced(M):
                yield M


# -- translations ----------------------------------------------------------------


def test_solutions_of_top_translation():
    assert solutions(TOP, two()) == {1}
    assert defines_truth(TOP, [Matrix(two(), {1})])
    res = defines_truth(TOP, [Matrix(two(), {0, 1})])
    assert not res and res.witness[1] == 0


def test_translation_rejects_stray_variables():
    with pytest.raises(ValueError):
        Translation(0, ((x, Var(1)),))


def test_almost_skips_trivial_matrices():
    fam = [Matrix(two(), {1}), Matrix(two(), set())]
    assert not defines_truth(TOP, fam)
    assert defines_truth(TOP, fam, almost=True)


def test_in_reduction_agrees_with_defines_truth(corpus):
    """On reduced models Omega F is the identity, so both criteria coincide."""
    checked = 0
    for M in reduced_corpus_matrices(corpus):
        for doc in corpus.values():
            for tau in doc.translations.values():
                if not _fits(tau, M):
                    continue
                assert check_in_reduction(tau, M) == bool(defines_truth(tau, [M]))
                checked += 1
    assert checked >= 5


def _fits(tau, M):
    names = set(M.signature.names)

    def symbols(t):
        return set() if isinstance(t, Var) else {t.symbol}.union(*[symbols(a) for a in t.args])
    used = set().union(*[symbols(l) | symbols(r) for l, r in tau.equations])
    return used <= names


def test_expand_with_constant():
    out = expand_with_constant([Matrix(two(), {1})], TOP, "one")
    assert len(out) == 1
    M = out[0]
    assert M.algebra.table("one") == (1,) and M.designated == {1}
    both = Translation.trivial()
    assert len(expand_with_constant([Matrix(two(), {1})], both)) == 2
    impossible = Translation(1, ((x, y1),))
    with pytest.raises(EmptySolutionSet):
        expand_with_constant([Matrix(two(), {1})], impossible)


# -- operator profiles -----------------------------------------------------------


def test_cpc_and_profile_on_two(cpc_and):
    prof = operator_profile(cpc_and, two())
    assert [sorted(r.filter) for r in prof.rows] == [[], [1], [0, 1]]
    empty = prof.row(set())
    assert empty.leibniz.is_total() and empty.suszko.is_identity()
    assert len(prof.render()) == 3


def test_a4_profile_is_completely_order_reflecting(box_logic, corpus):
    A4 = corpus["a4"].algebras["A4"]
    prof = operator_profile(box_logic, A4)
    assert check_completely_order_reflecting(prof)
    assert check_order_reflecting(prof) and check_injective(prof)
    c = A4.element("c")
    sus = prof.rows[prof.generated[c]].suszko
    assert sorted(sorted(A4.name(a) for a in b) for b in sus.blocks()) == [["1", "c"], ["a"], ["b"]]


@given(algebras(sig=SL, max_size=3), st.booleans())
def test_fast_cor_matches_naive_cpc_and(A, almost):
    calc = HilbertCalculus.of(SL, [
        Rule.of([x, Var(1)], app("meet", x, Var(1))),
        Rule.of([app("meet", x, Var(1))], x),
        Rule.of([app("meet", x, Var(1))], Var(1)),
    ])
    prof = operator_profile(calc, A)
    if len(prof.rows) <= 12:
        assert bool(check_completely_order_reflecting(prof, almost)) == bool(
            naive_completely_order_reflecting(prof, almost))


@given(algebras(sig=BOX, max_size=4), st.booleans())
def test_fast_cor_matches_naive_box(box_logic, A, almost):
    prof = operator_profile(box_logic, A)
    if len(prof.rows) <= 12:
        assert bool(check_completely_order_reflecting(prof, almost)) == bool(
            naive_completely_order_reflecting(prof, almost))


@given(algebras(sig=SL, max_size=3))
def test_theorem_direction_per_algebra(cpc_and, A):
    """If tau works in the reduction of every nonempty filter, Omega is almost c.o.r."""
    lat = filter_lattice(cpc_and, A)
    if all(check_in_reduction(TOP, Matrix(A, F)) for F in lat.nonempty):
        assert check_completely_order_reflecting(operator_profile(cpc_and, A, lat), almost=True)


@given(st.lists(algebras(sig=BOX, max_size=3), min_size=1, max_size=3))
def test_small_implies_implicit(box_logic, algs):
    family = modstar(box_logic, algs)
    if check_truth_small(family, lambda A: filter_lattice(box_logic, A)):
        assert check_truth_implicit(family)


def test_implicit_detects_shared_algebra():
    fam = [Matrix(two(), {1}), Matrix(two(), {0, 1})]
    assert not check_truth_implicit(fam)
    assert check_truth_implicit(fam[:1])


# -- synthesis -------------------------------------------------------------------


def test_a4_has_no_equational_translation(corpus):
    M4 = corpus["a4"].matrices["M4"]
    res = synthesize_translation([M4], 0, EXACT)
    assert res.definitive_none
    assert res.free_size == 5


def test_semilattice_needs_a_parameter():
    fam = [Matrix(two(), {1})]
    assert synthesize_translation(fam, 0).definitive_none
    res = synthesize_translation(fam, 1)
    assert res.found and defines_truth(res.translation, fam)


@given(st.lists(algebras(sig=BOX, max_size=3), min_size=1, max_size=4))
def test_synthesized_translations_define_truth(box_logic, algs):
    fam = [M for M in modstar(box_logic, algs) if M.designated]
    if not fam:
        return
    res = synthesize_translation(fam, 0)
    if res.found:
        assert defines_truth(res.translation, fam)
    else:
        assert res.exact


def test_bounded_mode_is_not_definitive():
    res = synthesize_translation([Matrix(two(), {1})], 0, BOUNDED, depth=1)
    assert not res.exact


def test_over_budget_falls_back_to_bounded(corpus):
    LB = corpus["bilattices"].matrices["LB"]
    res = synthesize_translation([LB], 1, EXACT, depth=1, budget=2000)
    assert res.mode == BOUNDED and not res.exact
    assert any("budget" in n for n in res.notes)


def test_synthesis_rejects_mixed_family(corpus):
    with pytest.raises(SignatureError):
        synthesize_translation([Matrix(two(), {1}), corpus["a4"].matrices["M4"]], 0)


# -- detection -------------------------------------------------------------------


def test_binary_terms_start_with_variables():
    terms = binary_terms(SL, 1)
    assert [render_term(t) for t in terms[:2]] == ["x", "y"]


def test_protoconjunction_of_cpc_and(cpc_and):
    d = detect_protoconjunction(cpc_and, models=[Matrix(two(), {1})])
    assert d.found and render_term(d.term) in ("meet(x, y)", "meet(y, x)")


def test_protodisjunction_of_cpc_or(corpus):
    calc = corpus["joins"].calculi["CPCor"]
    d = detect_protodisjunction(calc)
    assert d.found and render_term(d.term) == "join(x, y)"


def test_cpc_and_is_not_protoalgebraic(cpc_and):
    v = detect_protoalgebraic(cpc_and, [two()])
    assert v.refuted and v.route == "profile-row"
    A, row = v.countermodel
    assert row.leibniz != row.suszko


def test_implication_is_protoalgebraic(corpus):
    pres = LogicPresentation.from_matrices([corpus["implication"].matrices["I2"]])
    v = detect_protoalgebraic(pres)
    assert v.derived
    assert [render_term(t) for t in v.trace] == ["imp(x, y)"]


def test_a4_alone_leaves_protoalgebraicity_open(box_logic, corpus):
    v = detect_protoalgebraic(box_logic, [corpus["a4"].algebras["A4"]], depth=1)
    assert v.unknown


# -- hierarchy -------------------------------------------------------------------

@given(st.dictionaries(st.sampled_from(LEVELS), st.just(TESTED)), st.sets(st.sampled_from(LEVELS)), st.booleans())
def test_propagation_respects_arrows(holds, refuted, theorems):
    direct_holds = {k: LevelStatus(v, "test") for k, v in holds.items() if k not in refuted}
    direct_ref = {k: LevelStatus(REFUTED, "test") for k in refuted}
    out = propagate(direct_holds, direct_ref, theorems)
    assert set(out) == set(LEVELS)
    for s, t in ARROWS:
        if out[t].status == REFUTED:
            assert out[s].status == REFUTED
        if out[s].status in (HOLDS, TESTED):
            assert out[t].status != UNKNOWN


def test_propagation_rejects_contradictions():
    with pytest.raises(AssertionError):
        propagate({"small": LevelStatus(HOLDS)}, {"implicit": LevelStatus(REFUTED)}, False)


def test_classify_a4(box_logic, corpus):
    doc = corpus["a4"]
    rep = classify(box_logic, [doc.algebras["A4"], doc.algebras["A3"]], Bounds(params=0))
    assert rep.status("equational") == REFUTED
    assert rep.levels["equational"].route == "exact synthesis"
    assert rep.status("small") == TESTED
    assert len(rep.modstar) == 2


def test_classify_cpc_and(cpc_and):
    rep = classify(cpc_and, [two()], Bounds(params=1))
    assert rep.status("protoalgebraic") == REFUTED
    assert rep.status("equational") == REFUTED
    st_ = rep.levels["almost-parametrized"]
    assert st_.status == TESTED
    assert defines_truth(st_.witness, [M for M in rep.modstar if M.designated])
