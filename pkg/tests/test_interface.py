import json
import logging

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lbw.interface import (
    Cache,
    SpecError,
    cache_key,
    cached_filter_lattice,
    parse_spec,
    render_report,
    render_spec,
    run_task,
)
from lbw.interface.cli import EXIT_BUDGET, EXIT_OK, EXIT_SPEC, main
from lbw.interface.corpus import corpus_files
from lbw.interface.report import Report, render_json
from lbw.interface.tasks import effective_bounds, run_tasks
from lbw.logic.filters import filter_lattice

PROFILE_DOC = """\
signature SL { meet/2 }
algebra Two over SL { universe = {0, 1}; meet = table [[0, 0], [0, 1]] }
calculus C over SL {
  rule x, y |- meet(x, y)
  rule meet(x, y) |- x
  rule meet(x, y) |- y
}
task profile C on {Two}
task classify C over {Two} bounds { budget=0 }
"""


def diagnostic(text):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    return info.value


# -- parsing -------------------------------------------------------------------


def test_a4_document_evaluates_box(corpus):
    A4 = corpus["a4"].algebras["A4"]
    assert A4.name(A4.op("box", A4.element("c"))) == "a"
    assert A4.name(A4.op("one")) == "1"
    assert len(corpus["a4"].calculi["L"].rules) == 3


def test_ragged_table():
    e = diagnostic("signature S { meet/2 }\nalgebra A over S { universe = {0,1}; meet = table [[0,0],[0]] }\n")
    assert "ragged table" in e.message
    assert e.span.line == 2


def test_unknown_element_has_span():
    text = "signature S { meet/2 }\nalgebra A over S {\n  universe = {0,1}\n  meet = table [[0,0],[0,q]]\n}\n"
    e = diagnostic(text)
    assert "unknown element 'q'" in e.message
    assert (e.span.line, e.span.column) == (4, 26)
    rendered = e.render(text, "doc.lbw")
    assert rendered.startswith("doc.lbw:4:26: error:")
    assert rendered.splitlines()[-1].strip() == "^"


@pytest.mark.parametrize("text, fragment", [
    ("signature S { meet/2 }\nmatrix M = (A, {1})\n", "unknown algebra"),
    ("signature S { meet/2 }\nsignature S { meet/2 }\n", "duplicate name"),
    ("signature S { meet/2 }\ncalculus C over S { rule meet(x) |- x }\n", "expects 2 arguments"),
    ("signature S { x/0 }\n", "reserved"),
    ("signature S { meet/2 } $\n", "unexpected character"),
])
def test_diagnostics(text, fragment):
    assert fragment in diagnostic(text).message


def test_corpus_round_trips(corpus):
    for doc in corpus.values():
        text = render_spec(doc)
        again = parse_spec(text)
        assert again == doc
        assert render_spec(again) == text


names = st.sampled_from(["0", "1", "a", "b", "top", "(1,0)"])


@st.composite
def documents(draw):
    elements = draw(st.lists(names, min_size=1, max_size=3, unique=True))
    n = len(elements)
    quoted = [json.dumps(e) if not e.isalnum() else e for e in elements]
    table = [[draw(st.sampled_from(quoted)) for _ in range(n)] for _ in range(n)]
    unary = [draw(st.sampled_from(quoted)) for _ in range(n)]
    const = draw(st.sampled_from(quoted))
    designated = draw(st.lists(st.sampled_from(quoted), unique=True))
    rows = ", ".join("[" + ", ".join(r) + "]" for r in table)
    lines = [
        "signature S { op/2, f/1, k/0 }",
        f"algebra A over S {{ universe = {{{', '.join(quoted)}}}; op = table [{rows}]; "
        f"f = table [{', '.join(unary)}]; k = {const} }}",
        f"matrix M = (A, {{{', '.join(designated)}}})",
        "calculus C over S { rule x, op(x, y) |- f(y); rule |- k }",
        "translation T over S params 1 { op(x, y1) ~ f(x) }",
    ]
    if draw(st.booleans()):
        lines.append("task classify C over algebras(S, maxsize=2) + {A} bounds { depth=1, params=0 }")
    return "\n".join(lines) + "\n"


@given(documents())
def test_render_parse_round_trip(text):
    doc = parse_spec(text)
    canon = render_spec(doc)
    assert parse_spec(canon) == doc
    assert render_spec(parse_spec(canon)) == canon


# -- cache -----------------------------------------------------------------------


def test_cache_key_is_canonical():
    assert cache_key("op", {"b": 1, "a": [1, 2]}) == cache_key("op", {"a": [1, 2], "b": 1})
    assert cache_key("op", 1) != cache_key("op", 1, version="2")


def test_cache_hit_and_version_bump(tmp_path, corpus):
    doc = corpus["semilattices"]
    calc, A = doc.calculi["CPCand"], doc.algebras["Chain3"]
    cache = Cache(tmp_path)
    first = cached_filter_lattice(cache, calc, A)
    second = cached_filter_lattice(cache, calc, A)
    assert cache.hits == 1
    assert first.filters == second.filters == filter_lattice(calc, A).filters
    bumped = Cache(tmp_path, version="999")
    cached_filter_lattice(bumped, calc, A)
    assert bumped.hits == 0 and bumped.misses == 1


def test_truncated_entry_is_recomputed(tmp_path, caplog):
    cache = Cache(tmp_path)
    assert cache.memo("sq", 7, lambda: 49) == 49
    (entry,) = [p for p in tmp_path.rglob("*.json")]
    entry.write_text(entry.read_text()[:10])
    with caplog.at_level(logging.WARNING, logger="lbw.cache"):
        assert cache.memo("sq", 7, lambda: 49) == 49
    assert "corrupted" in caplog.text
    assert cache.hits == 0


def test_unusable_directory_disables_cache(tmp_path, caplog):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with caplog.at_level(logging.WARNING, logger="lbw.cache"):
        cache = Cache(blocker / "sub")
    assert not cache.enabled
    assert cache.memo("x", 1, lambda: 2) == 2


def test_cache_resolution(monkeypatch, tmp_path):
    monkeypatch.delenv("LBW_CACHE", raising=False)
    assert not Cache.resolve().enabled
    monkeypatch.setenv("LBW_CACHE", str(tmp_path / "env"))
    assert Cache.resolve().directory == tmp_path / "env"
    assert Cache.resolve(tmp_path / "flag").directory == tmp_path / "flag"


# -- tasks and reports -------------------------------------------------------------


def test_profile_report_lists_three_rows():
    doc = parse_spec(PROFILE_DOC)
    rep = run_task(doc, 0)
    rows = rep.result["profiles"][0]["rows"]
    assert len(rows) == 3
    assert rows[0] == {"filter": [], "leibniz": [["0", "1"]], "suszko": [["0"], ["1"]]}
    text = render_report(rep, "text").decode()
    assert text.count("leibniz:") == 3


def test_refuted_property_has_witness():
    rep = run_task(parse_spec(PROFILE_DOC), 0)
    props = rep.result["profiles"][0]["properties"]
    assert props["completely-order-reflecting"]["status"] == "refuted"
    assert "witness" in props["completely-order-reflecting"]


def test_zero_budget_is_unknown_at_bounds():
    rep = run_task(parse_spec(PROFILE_DOC), 1)
    assert rep.status == "unknown-at-bounds"
    assert rep.budget_exceeded
    assert rep.bounds["free_budget"] == 0
    assert "bounds" in json.loads(render_json(rep))


def test_effective_bounds_override():
    doc = parse_spec(PROFILE_DOC)
    b = effective_bounds(doc.tasks[1], {"depth": 3, "params": None})
    assert b["depth"] == 3 and b["free_budget"] == 0 and b["params"] == 1


def test_reports_are_deterministic(tmp_path, corpus):
    doc = corpus["a4"]
    plain = [render_json(run_task(doc, i), timings=False) for i in range(len(doc.tasks))]
    again = [render_json(run_task(doc, i), timings=False) for i in range(len(doc.tasks))]
    assert plain == again
    cache = Cache(tmp_path)
    cold = [render_json(run_task(doc, i, cache=cache), timings=False) for i in range(len(doc.tasks))]
    warm = [render_json(run_task(doc, i, cache=cache), timings=False) for i in range(len(doc.tasks))]
    assert cold == warm == plain
    assert cache.hits >= len(doc.tasks)


def test_parallel_matches_serial(corpus):
    doc = corpus["constant"]
    idx = list(range(len(doc.tasks)))
    serial = [r.body() for r in run_tasks(doc, idx, None, Cache(None), 1)]
    parallel = [r.body() for r in run_tasks(doc, idx, None, Cache(None), 2)]
    assert serial == parallel


def test_text_and_json_agree():
    rep = run_task(parse_spec(PROFILE_DOC), 0)
    body = json.loads(render_json(rep, timings=False))
    assert Report.from_body(body).body() == rep.body()
    text = render_report(rep, "text").decode()
    assert "status: ok" in text
    with pytest.raises(ValueError):
        render_report(rep, "xml")


# -- command line ----------------------------------------------------------------


def test_cli_exit_codes(tmp_path, capsysbinary):
    good = tmp_path / "good.lbw"
    good.write_text(PROFILE_DOC.replace("task classify C over {Two} bounds { budget=0 }\n", ""))
    assert main(["check", str(good), "--no-timings"]) == EXIT_OK
    budget = tmp_path / "budget.lbw"
    budget.write_text(PROFILE_DOC)
    assert main(["check", str(budget), "--json"]) == EXIT_BUDGET
    bad = tmp_path / "bad.lbw"
    bad.write_text("signature S { meet/2 }\nmatrix M = (A, {1})\n")
    assert main(["check", str(bad)]) == EXIT_SPEC
    err = capsysbinary.readouterr().err.decode()
    assert "bad.lbw:2:13: error: unknown algebra 'A'" in err
    assert main(["check", str(tmp_path / "missing.lbw")]) == EXIT_SPEC


def test_cli_classify_synthesizes_tasks(tmp_path, capsysbinary):
    path = tmp_path / "c.lbw"
    path.write_text(PROFILE_DOC.replace("task classify C over {Two} bounds { budget=0 }\n", ""))
    assert main(["classify", str(path), "--max-size", "2", "--no-timings"]) == EXIT_OK
    out = capsysbinary.readouterr().out.decode()
    assert "task classify C" in out and "protoalgebraic: refuted-definitive" in out


def test_cli_corpus(capsysbinary):
    assert main(["corpus", "list"]) == EXIT_OK
    listed = capsysbinary.readouterr().out.decode().split()
    assert listed == [p.stem for p in corpus_files()]
    assert main(["corpus", "run", "constant", "--json", "--no-timings"]) == EXIT_OK
    assert main(["corpus", "run", "nope"]) == EXIT_SPEC
