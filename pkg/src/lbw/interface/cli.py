"""Command line: ``lbw check``, ``lbw classify`` and ``lbw corpus run``.

Exit codes: 0 when every task ran (whatever the verdicts), 2 for document
errors, 3 when some task hit a budget with no fallback.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..errors import LbwError
from .cache import Cache
from .corpus import corpus_files
from .dsl import FamilyItem, SpecDocument, SpecError, TaskDecl, parse_spec
from .report import render_report
from .tasks import run_tasks

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_BUDGET = 3


def _common(p: argparse.ArgumentParser):
    p.add_argument("--json", action="store_true", help="emit JSON reports")
    p.add_argument("--jobs", default="1", help="worker processes, or 'auto'")
    p.add_argument("--cache-dir", default=None, help="result cache directory (default: $LBW_CACHE, else off)")
    p.add_argument("--max-size", type=int, default=None, help="largest enumerated algebra")
    p.add_argument("--depth", type=int, default=None, help="term depth for searches")
    p.add_argument("--params", type=int, default=None, help="largest parameter count for synthesis")
    p.add_argument("--no-timings", action="store_true", help="omit timings from the output")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lbw", description="Leibniz hierarchy workbench for finite matrices.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", help="parse a document and run all its tasks")
    c.add_argument("file")
    _common(c)
    k = sub.add_parser("classify", help="run the classify tasks of a document (or classify each calculus)")
    k.add_argument("file")
    _common(k)
    cp = sub.add_parser("corpus", help="the shipped example corpus")
    csub = cp.add_subparsers(dest="action", required=True)
    r = csub.add_parser("run", help="run every task of every corpus file")
    r.add_argument("names", nargs="*", help="corpus file stems to run (default: all)")
    _common(r)
    csub.add_parser("list", help="list corpus files")
    return p


def _overrides(args) -> dict:
    return {"maxsize": args.max_size, "depth": args.depth, "params": args.params}


def _load(path: str) -> tuple[str, SpecDocument]:
    text = Path(path).read_text(encoding="utf-8")
    return text, parse_spec(text)


def classify_tasks(doc: SpecDocument, maxsize: int | None) -> SpecDocument:
    """The document's classify tasks, or one per calculus when it has none."""
    if any(t.kind == "classify" for t in doc.tasks):
        return doc
    extra = []
    sig_names = {sig: name for name, sig in doc.signatures.items()}
    for name, calc in doc.calculi.items():
        family = [FamilyItem(sig_names[calc.signature], maxsize or 3)]
        own = tuple(a for a, A in doc.algebras.items() if A.signature == calc.signature)
        if own:
            family.append(FamilyItem(names=own))
        extra.append(TaskDecl("classify", (name,), tuple(family)))
    if not extra:
        by_sig: dict = {}
        for name, M in doc.matrices.items():
            by_sig.setdefault(M.signature, []).append(name)
        extra = [TaskDecl("classify", ("matrices", *names)) for names in by_sig.values()]
    decls = tuple(d for d in doc.declarations if not isinstance(d, TaskDecl)) + tuple(extra)
    return SpecDocument(decls, doc.signatures, doc.algebras, doc.matrices, doc.calculi, doc.translations)


def _emit(reports, args, out) -> int:
    fmt = "json" if args.json else "text"
    code = EXIT_OK
    for rep in reports:
        out.write(render_report(rep, fmt, timings=not args.no_timings))
        if rep.budget_exceeded:
            code = EXIT_BUDGET
    out.flush()
    return code


def _run(doc, args, out, source=None, only=None) -> int:
    cache = Cache.resolve(args.cache_dir)
    indices = [i for i, t in enumerate(doc.tasks) if only is None or t.kind == only]
    reports = run_tasks(doc, indices, _overrides(args), cache, args.jobs, source)
    return _emit(reports, args, out)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="lbw: %(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    out = sys.stdout.buffer
    if args.command == "corpus" and args.action == "list":
        for path in corpus_files():
            print(path.stem)
        return EXIT_OK
    if args.command == "corpus":
        files = corpus_files()
        if args.names:
            missing = set(args.names) - {p.stem for p in files}
            if missing:
                print(f"lbw: unknown corpus file(s): {', '.join(sorted(missing))}", file=sys.stderr)
                return EXIT_SPEC
            files = [p for p in files if p.stem in args.names]
        code = EXIT_OK
        for path in files:
            _, doc = _load(str(path))
            code = max(code, _run(doc, args, out, source=path.name))
        return code
    try:
        text, doc = _load(args.file)
    except OSError as e:
        print(f"lbw: cannot read {args.file}: {e.strerror}", file=sys.stderr)
        return EXIT_SPEC
    except SpecError as e:
        print(e.render(Path(args.file).read_text(encoding="utf-8"), args.file), file=sys.stderr)
        return EXIT_SPEC
    except LbwError as e:
        print(f"{args.file}: error: {e}", file=sys.stderr)
        return EXIT_SPEC
    if args.command == "classify":
        doc = classify_tasks(doc, args.max_size)
        return _run(doc, args, out, only="classify")
    return _run(doc, args, out)


if __name__ == "__main__":
    sys.exit(main())
