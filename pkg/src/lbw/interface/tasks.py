"""Running document tasks and assembling their reports.

Each task kind dispatches to the owning module, encodes verdicts and
witnesses with element names, and re-verifies every witness before it is
emitted. Exceeded budgets turn into unknown-at-bounds reports.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from ..congruence import all_congruences, is_reduced, leibniz, reduce_matrix, suszko
from ..definability import hierarchy as H
from ..definability.detect import detect_protoalgebraic, detect_protoconjunction, detect_protodisjunction
from ..definability.operators import (
    check_completely_order_reflecting,
    check_injective,
    check_order_reflecting,
    operator_profile,
)
from ..definability.synthesis import EXACT, synthesize_translation
from ..definability.translation import defines_truth, solutions
from ..errors import BudgetExceeded
from ..kernel.algebra import FiniteAlgebra, subalgebra_generate
from ..kernel.constructions import is_congruence
from ..kernel.enumeration import enumerate_up_to, iso_classes
from ..kernel.matrix import Matrix
from ..kernel.polynomials import DEFAULT_FREE_BUDGET, free_term_functions
from ..kernel.terms import Var, render_term, substitute
from ..logic.calculus import LogicPresentation, Rule, counterexample, matrix_consequence
from ..logic.filters import is_filter
from ..logic.proof import derivable, has_theorems, replay
from .cache import Cache, cached_filter_lattice
from .dsl import SpecDocument, TaskDecl, parse_spec, render_decl, render_spec
from .report import (
    OK,
    UNKNOWN_AT_BOUNDS,
    Report,
    enc_algebra,
    enc_matrix,
    enc_partition,
    enc_set,
)

DEFAULTS = {
    "depth": 2,
    "params": 1,
    "free_budget": DEFAULT_FREE_BUDGET,
    "proof_budget": 5_000,
    "max_delta": 2,
    "fregean": False,
}


class WitnessError(AssertionError):
    """A witness failed its independent re-check; this is a bug, never a verdict."""


def _verify(cond: bool, what: str):
    if not cond:
        raise WitnessError(f"witness failed re-verification: {what}")


# -- bounds and inputs --------------------------------------------------------------


def effective_bounds(task: TaskDecl, overrides: dict | None = None) -> dict:
    """Defaults, then the task's own bounds, then overrides (CLI flags)."""
    b = dict(DEFAULTS)
    given = dict(task.bounds)
    given.update({k: v for k, v in (overrides or {}).items() if v is not None})
    given.pop("jobs", None)
    if "budget" in given:
        budget = given.pop("budget")
        b["free_budget"] = b["proof_budget"] = budget
    for k, v in given.items():
        b[k] = v == "true" if k == "fregean" and isinstance(v, str) else v
    return b


def presentation(doc: SpecDocument, subject: tuple[str, ...]) -> LogicPresentation:
    if subject[0] == "matrices":
        return LogicPresentation.from_matrices([doc.matrices[m] for m in subject[1:]])
    return LogicPresentation.from_calculus(doc.calculi[subject[0]])


def family(doc: SpecDocument, task: TaskDecl, b: dict, signature) -> list[FiniteAlgebra]:
    """The task's algebras; without an 'over' clause, the document's algebras
    over the signature (plus enumeration when a maxsize is given)."""
    items = task.family
    out: list[FiniteAlgebra] = []
    maxsize = b.get("maxsize")
    if not items:
        if maxsize:
            out += enumerate_up_to(signature, maxsize)
        out += [A for A in doc.algebras.values() if A.signature == signature]
    for f in items:
        if f.signature:
            n = maxsize if maxsize else f.maxsize
            b.setdefault("maxsize", n)
            out += enumerate_up_to(doc.signatures[f.signature], n)
        else:
            out += [doc.algebras[a] for a in f.names]
    seen, uniq = set(), []
    for A in out:
        if A not in seen:
            seen.add(A)
            uniq.append(A)
    return uniq


# -- per-kind runners -----------------------------------------------------------------


def _theorems_verdict(v, pres) -> dict:
    out: dict[str, Any] = {"status": v.status, "route": v.route}
    if v.derived:
        t = v.trace[0]
        out["witness"] = {"theorem": render_term(t.conclusion if isinstance(t, Rule) else t)}
        if pres.matrices and not isinstance(t, Rule):
            _verify(matrix_consequence(pres.matrices, [], t), "theorem valid in every matrix")
    elif v.refuted:
        w = v.countermodel
        if v.route == "subuniverse":
            M, S = w
            _verify(subalgebra_generate(M.algebra, S) == S and not S & M.designated, "subuniverse misses the truth set")
            out["witness"] = {"matrix": enc_matrix(M), "subuniverse": enc_set(M.algebra, S)}
        elif v.route == "free-algebra":
            out["witness"] = {"free_algebra_size": w}
        else:
            out["witness"] = {"empty_set_is_filter": True}
    else:
        out["bounds"] = dict(v.bounds)
    return out


def run_theorems(doc, task, b, cache) -> dict:
    pres = presentation(doc, task.subject)
    return {"theorems": _theorems_verdict(has_theorems(pres, budget=b["free_budget"]), pres)}


def _encode_level_witness(level: str, st, levels, rep, calc) -> Any:
    route, w = st.route, st.witness
    if route.startswith("implies ") or route.startswith("implied by "):
        origin = route.split(" ", 1)[1].removeprefix("by ")
        return {"via": origin}
    if level == H.PROTOALGEBRAIC and st.status == H.HOLDS:
        return {"delta": [render_term(t) for t in w]}
    if route == "no-theorems":
        return {"theorems": rep.theorems.route}
    if route == "exact synthesis":
        algebras = [M.algebra for M in rep.modstar]
        free = free_term_functions(algebras, 1, budget=rep.bounds.free_budget)
        _verify(free.size == w[1], "free algebra size")
        return {"free_algebra_size": free.size, "terms": [render_term(t) for t in free.terms]}
    if route == "synthesis":
        return {"translation": w.render()}
    if route.endswith(" fails"):
        A, ww = w
        prop = route.removeprefix("almost ").removesuffix(" fails")
        almost = route.startswith("almost ")
        checker = {"injective": check_injective, "order-reflecting": check_order_reflecting,
                   "completely-order-reflecting": check_completely_order_reflecting}[prop]
        again = checker(operator_profile(calc, A), almost)
        _verify(not again and again.witness == ww, f"{route} on the witness algebra")
        out = {"algebra": enc_algebra(A)}
        if ww[0] == "empty":
            out.update(subfamily="empty", filter=enc_set(A, ww[1]))
        elif ww[0] == "element":
            out.update(element=A.name(ww[1]), filter=enc_set(A, ww[2]))
        else:
            out["filters"] = [enc_set(A, ww[0]), enc_set(A, ww[1])]
        return out
    if route == "reduced models share an algebra":
        M1, M2 = w
        _verify(M1.algebra == M2.algebra and M1.designated != M2.designated, "two truth sets on one algebra")
        return {"matrices": [enc_matrix(M1), enc_matrix(M2)]}
    if route == "truth set not least nonempty filter":
        M, G = w
        if G is None:
            _verify(not M.designated, "empty truth set")
            return {"matrix": enc_matrix(M)}
        _verify(G and is_filter(calc, M.algebra, G) and not M.designated <= G, "smaller nonempty filter")
        return {"matrix": enc_matrix(M), "filter": enc_set(M.algebra, G)}
    if route == "profile-row":
        A, row = w
        _verify(suszko(calc, A, row.filter, method="polynomial") != leibniz(A, row.filter), "Omega differs from Suszko")
        return {"algebra": enc_algebra(A), "filter": enc_set(A, row.filter),
                "leibniz": enc_partition(A, row.leibniz), "suszko": enc_partition(A, row.suszko)}
    return None if w is None else str(w)


def run_classify(doc, task, b, cache) -> dict:
    pres = presentation(doc, task.subject)
    algebras = family(doc, task, b, pres.signature) if pres.calculus is not None else []
    bounds = H.Bounds(b["params"], b["depth"], b["free_budget"], b["proof_budget"], b["max_delta"])
    rep = H.classify(pres, algebras, bounds, fregean=bool(b["fregean"]))
    calc = pres.calculus
    nontrivial = [M for M in rep.modstar if M.designated]
    levels = {}
    for lvl in H.LEVELS:
        st = rep.levels[lvl]
        entry: dict[str, Any] = {"status": st.status, "route": st.route}
        w = _encode_level_witness(lvl, st, rep.levels, rep, calc)
        if w is not None:
            entry["witness"] = w
        if st.status == H.UNKNOWN:
            entry["bounds"] = bounds.as_dict()
        levels[lvl] = entry
    synth = []
    for r in rep.synthesis:
        s = {"params": r.m, "mode": r.mode, "exact": r.exact, "free_size": r.free_size,
             "translation": r.translation.render() if r.found else None}
        if r.found:
            _verify(bool(defines_truth(r.translation, nontrivial, almost=True)), "synthesized translation")
        if r.notes:
            s["notes"] = list(r.notes)
        synth.append(s)
    out = {
        "logic": task.label.split(" ", 1)[1],
        "algebras": rep.algebras,
        "theorems": _theorems_verdict(rep.theorems, pres),
        "levels": levels,
        "reduced_models": [enc_matrix(M) for M in iso_classes(rep.modstar)],
        "synthesis": synth,
    }
    if rep.hints:
        out["hints"] = [{"from": k, "translation": t.render(), "defines_truth": ok} for k, t, ok in rep.hints]
    return out


def run_modstar(doc, task, b, cache) -> dict:
    from ..logic.models import modstar

    calc = doc.calculi[task.subject[0]]
    algebras = family(doc, task, b, calc.signature)
    ms = modstar(calc, algebras)
    reps = iso_classes(ms)
    for M in reps:
        _verify(is_reduced(M) and is_filter(calc, M.algebra, M.designated), "reduced model")
    return {"algebras": len(algebras), "reduced_models": len(ms), "iso_classes": [enc_matrix(M) for M in reps]}


def _property(check) -> dict:
    return {"status": "holds" if check else "refuted"}


def run_profile(doc, task, b, cache) -> dict:
    calc = doc.calculi[task.subject[0]]
    profiles = []
    for name in task.targets:
        A = doc.algebras[name]
        lat = cached_filter_lattice(cache, calc, A)
        prof = operator_profile(calc, A, lat)
        rows = []
        for r in prof.rows:
            _verify(r.suszko.refines(r.leibniz), "Suszko inside Omega")
            rows.append({"filter": enc_set(A, r.filter), "leibniz": enc_partition(A, r.leibniz),
                         "suszko": enc_partition(A, r.suszko)})
        props = {}
        for label, checker in (("injective", check_injective), ("order-reflecting", check_order_reflecting),
                               ("completely-order-reflecting", check_completely_order_reflecting)):
            for almost in (False, True):
                c = checker(prof, almost)
                entry = _property(c)
                if not c:
                    w = c.witness
                    if w[0] == "empty":
                        entry["witness"] = {"subfamily": "empty", "filter": enc_set(A, w[1])}
                    elif w[0] == "element":
                        entry["witness"] = {"element": A.name(w[1]), "filter": enc_set(A, w[2])}
                    else:
                        entry["witness"] = {"filters": [enc_set(A, w[0]), enc_set(A, w[1])]}
                props[("almost " if almost else "") + label] = entry
        profiles.append({"algebra": name, "filters": len(rows), "rows": rows, "properties": props})
    return {"profiles": profiles}


def _detection(d, rules, oracle_check) -> dict:
    if d.found:
        for gamma, phi in rules:
            _verify(oracle_check([substitute(g, {2: d.term}) for g in gamma], substitute(phi, {2: d.term})),
                    "detected term satisfies its rules")
        return {"status": "found", "term": render_term(d.term), "checked": d.checked}
    return {"status": "unknown", "checked": d.checked, "bounds": dict(d.bounds)}


def run_detect(doc, task, b, cache) -> dict:
    from ..definability.detect import PROTOCONJUNCTION_RULES, PROTODISJUNCTION_RULES

    pres = presentation(doc, task.subject)

    def check(gamma, phi):
        if pres.matrices:
            return matrix_consequence(pres.matrices, gamma, phi)
        return derivable(pres.calculus, gamma, phi, budget=b["proof_budget"], prove_only=True).derived

    algebras = family(doc, task, b, pres.signature) if pres.calculus is not None else []
    # filter matrices are models of the calculus and prune hopeless candidates
    models = [Matrix(A, F) for A in algebras for F in cached_filter_lattice(cache, pres.calculus, A).filters] \
        if pres.calculus is not None else []
    d = detect_protodisjunction(pres, b["depth"], b["proof_budget"], models=models)
    c = detect_protoconjunction(pres, b["depth"], b["proof_budget"], models=models)
    p = detect_protoalgebraic(pres, algebras, b["depth"], b["proof_budget"], b["max_delta"], models=models)
    proto: dict[str, Any] = {"status": p.status, "route": p.route}
    if p.derived:
        x, y = Var(0), Var(1)
        for t in p.trace:
            _verify(check([], substitute(t, {1: x})), "Delta(x, x) is a theorem")
        _verify(check([x, *p.trace], y), "x, Delta(x, y) |- y")
        proto["witness"] = {"delta": [render_term(t) for t in p.trace]}
    elif p.refuted:
        A, row = p.countermodel
        calc = pres.calculus
        _verify(suszko(calc, A, row.filter, method="polynomial") != leibniz(A, row.filter), "Omega differs from Suszko")
        proto["witness"] = {"algebra": enc_algebra(A), "filter": enc_set(A, row.filter),
                            "leibniz": enc_partition(A, row.leibniz), "suszko": enc_partition(A, row.suszko)}
    else:
        proto["bounds"] = dict(p.bounds)
    return {
        "protodisjunction": _detection(d, PROTODISJUNCTION_RULES, check),
        "protoconjunction": _detection(c, PROTOCONJUNCTION_RULES, check),
        "protoalgebraic": proto,
    }


def run_defines(doc, task, b, cache) -> dict:
    tau = doc.translations[task.subject[0]]
    family_ = [doc.matrices[m] for m in task.targets]
    chk = defines_truth(tau, family_, task.almost)
    sols = {}
    for name, M in zip(task.targets, family_):
        sols[name] = {"solutions": enc_set(M.algebra, solutions(tau, M.algebra)),
                      "truth_set": enc_set(M.algebra, M.designated)}
    verdict: dict[str, Any] = {"status": "holds" if chk else "refuted"}
    if not chk:
        M, a = chk.witness
        name = task.targets[family_.index(M)]
        _verify((a in solutions(tau, M.algebra)) != (a in M.designated), "element separates solutions and truth")
        verdict["witness"] = {"matrix": name, "element": M.algebra.name(a),
                              "in_truth_set": a in M.designated, "solves": a in solutions(tau, M.algebra)}
    else:
        for M in family_:
            if not (task.almost and M.almost_trivial):
                _verify(solutions(tau, M.algebra) == M.designated, "solutions equal truth set")
    return {"translation": tau.render(), "almost": task.almost, "defines_truth": verdict, "matrices": sols}


def run_synthesize(doc, task, b, cache) -> dict:
    family_ = [doc.matrices[m] for m in task.targets]
    attempts = []
    found = None
    for m in range(b["params"] + 1):
        r = synthesize_translation(family_, m, EXACT, b["depth"], task.almost, budget=b["free_budget"])
        a = {"params": m, "mode": r.mode, "exact": r.exact, "free_size": r.free_size,
             "translation": r.translation.render() if r.found else None}
        if r.notes:
            a["notes"] = list(r.notes)
        attempts.append(a)
        if r.found:
            _verify(bool(defines_truth(r.translation, family_, task.almost)), "synthesized translation")
            found = r
            break
    if found:
        verdict = {"status": "found", "translation": found.translation.render()}
    elif attempts and all(a["exact"] for a in attempts):
        verdict = {"status": "none", "route": "exact synthesis"}
    else:
        verdict = {"status": "unknown", "bounds": {"params": b["params"], "depth": b["depth"]}}
    return {"synthesis": verdict, "attempts": attempts}


def run_reduced(doc, task, b, cache) -> dict:
    M = doc.matrices[task.subject[0]]
    theta = leibniz(M.algebra, M.designated)
    R, h = reduce_matrix(M)
    _verify(is_reduced(R), "reduction is reduced")
    _verify(is_congruence(M.algebra, theta) and theta.is_compatible_with(M.designated), "Omega compatible congruence")
    return {"reduced": theta.is_identity(), "leibniz": enc_partition(M.algebra, theta), "reduction": enc_matrix(R),
            "map": {M.algebra.name(a): R.algebra.name(h[a]) for a in M.algebra.universe}}


def run_derive(doc, task, b, cache) -> dict:
    calc = doc.calculi[task.subject[0]]
    q = task.query
    v = derivable(calc, q.premises, q.conclusion, budget=b["proof_budget"], depth=b["depth"] + 1)
    out: dict[str, Any] = {"status": v.status, "route": v.route}
    if v.derived:
        _verify(replay(calc, q.premises, q.conclusion, v.trace), "proof replays")
        out["witness"] = {"proof": [s.render() for s in v.trace]}
    elif v.refuted:
        M, env = v.countermodel
        _verify(is_filter(calc, M.algebra, M.designated) and counterexample(M, q.premises, q.conclusion) is not None,
                "countermodel is a filter matrix refuting the rule")
        out["witness"] = {"matrix": enc_matrix(M),
                          "assignment": {render_term(Var(k)): M.algebra.name(a) for k, a in sorted(env.items())}}
    else:
        out["bounds"] = dict(v.bounds)
    return {"rule": q.render(), "derivable": out}


def run_congruences(doc, task, b, cache) -> dict:
    A = doc.algebras[task.subject[0]]
    cons = all_congruences(A)
    for c in cons:
        _verify(is_congruence(A, c), "congruence")
    return {"count": len(cons), "congruences": [enc_partition(A, c) for c in cons]}


RUNNERS = {
    "classify": run_classify,
    "modstar": run_modstar,
    "profile": run_profile,
    "theorems": run_theorems,
    "detect": run_detect,
    "defines": run_defines,
    "synthesize": run_synthesize,
    "reduced": run_reduced,
    "derive": run_derive,
    "congruences": run_congruences,
}


# -- entry points -------------------------------------------------------------------


def _task_index(doc: SpecDocument, task: TaskDecl | int) -> int:
    if isinstance(task, int):
        return task
    for i, t in enumerate(doc.tasks):
        if t is task:
            return i
    return doc.tasks.index(task)


def run_task(
    doc: SpecDocument,
    task: TaskDecl | int,
    bounds: dict | None = None,
    cache: Cache | None = None,
    source: str | None = None,
) -> Report:
    """Run one task. ``bounds`` overrides the task's own bounds."""
    cache = cache or Cache(None)
    index = _task_index(doc, task)
    task = doc.tasks[index]
    b = effective_bounds(task, bounds)
    meta = {"id": f"t{index + 1}", "kind": task.kind, "text": render_decl(task)}
    if source:
        meta["document"] = source
    key = cache.key("task", {"document": render_spec(doc), "index": index, "bounds": b, "source": source})
    start = time.perf_counter()
    hit = cache.get(key)
    if hit is not None:
        return Report.from_body(hit, {"total": time.perf_counter() - start})
    try:
        result = RUNNERS[task.kind](doc, task, b, cache)
        status = OK
    except BudgetExceeded as e:
        result = {"budget": {"what": e.what, "limit": e.limit, "reached": e.partial}}
        status = UNKNOWN_AT_BOUNDS
    rep = Report(meta, status, result, {k: b[k] for k in sorted(b)})
    rep.timings = {"total": time.perf_counter() - start}
    cache.put(key, rep.body())
    return rep


def _worker(args) -> dict:
    text, index, bounds, cache_dir, source = args
    rep = run_task(parse_spec(text), index, bounds, Cache(cache_dir), source)
    return rep.as_dict()


def resolve_jobs(jobs: int | str | None) -> int:
    if jobs in (None, "auto"):
        return os.cpu_count() or 1
    return max(1, int(jobs))


def run_tasks(
    doc: SpecDocument,
    indices: Sequence[int] | None = None,
    bounds: dict | None = None,
    cache: Cache | None = None,
    jobs: int | str | None = 1,
    source: str | None = None,
) -> list[Report]:
    """Run several tasks, in a process pool when jobs > 1; results keep task order."""
    cache = cache or Cache(None)
    indices = list(range(len(doc.tasks))) if indices is None else list(indices)
    n = min(resolve_jobs(jobs), len(indices))
    if n <= 1:
        return [run_task(doc, i, bounds, cache, source) for i in indices]
    text = render_spec(doc)
    d = str(cache.directory) if cache.enabled else None
    with ProcessPoolExecutor(max_workers=n) as pool:
        dicts = list(pool.map(_worker, [(text, i, bounds, d, source) for i in indices]))
    return [Report.from_body(x, x.get("timings")) for x in dicts]
