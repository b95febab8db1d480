"""Reports: JSON-ready bodies with named elements, and their text/JSON renderings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .. import __version__
from ..kernel.algebra import FiniteAlgebra
from ..kernel.matrix import Matrix
from ..kernel.partition import Partition
from ..kernel.terms import Term, render_term
from .cache import ALGORITHM_VERSION

SCHEMA = 1
OK = "ok"
UNKNOWN_AT_BOUNDS = "unknown-at-bounds"


@dataclass
class Report:
    task: dict
    status: str
    result: dict
    bounds: dict
    timings: dict = field(default_factory=dict)

    def body(self) -> dict:
        """Everything except timings; a pure function of the inputs."""
        return {
            "schema": SCHEMA,
            "tool": {"name": "lbw", "version": __version__, "algorithm": ALGORITHM_VERSION},
            "task": self.task,
            "status": self.status,
            "result": self.result,
            "bounds": self.bounds,
        }

    def as_dict(self) -> dict:
        return {**self.body(), "timings": self.timings}

    @classmethod
    def from_body(cls, body: dict, timings: dict | None = None) -> "Report":
        return cls(body["task"], body["status"], body["result"], body["bounds"], timings or {})

    @property
    def budget_exceeded(self) -> bool:
        return self.status == UNKNOWN_AT_BOUNDS and "budget" in self.result


# -- encoders -----------------------------------------------------------------------


def element_names(A: FiniteAlgebra) -> list[str]:
    return [A.name(a) for a in A.universe]


def enc_set(A: FiniteAlgebra, S: Iterable[int]) -> list[str]:
    return [A.name(a) for a in sorted(S)]


def enc_partition(A: FiniteAlgebra, P: Partition) -> list[list[str]]:
    return [[A.name(a) for a in b] for b in P.blocks()]


def _nest(flat, k, n):
    if k == 1:
        return list(flat)
    step = n ** (k - 1)
    return [_nest(flat[i * step:(i + 1) * step], k - 1, n) for i in range(n)]


def enc_algebra(A: FiniteAlgebra) -> dict:
    names = element_names(A)
    ops = {}
    for (s, k), t in zip(A.signature.symbols, A.tables):
        ops[s] = names[t[0]] if k == 0 else _nest([names[v] for v in t], k, A.size)
    return {"size": A.size, "elements": names, "operations": ops}


def enc_matrix(M: Matrix) -> dict:
    return {"algebra": enc_algebra(M.algebra), "designated": enc_set(M.algebra, M.designated)}


def enc_term(t: Term, names=None) -> str:
    return render_term(t, names)


def matrix_label(M: Matrix) -> str:
    return f"<{M.algebra.size}, {{{', '.join(enc_set(M.algebra, M.designated))}}}>"


# -- rendering ----------------------------------------------------------------------


def render_json(report: Report, timings: bool = True) -> bytes:
    obj = report.as_dict() if timings else report.body()
    return (json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "{" + ", ".join(_inline(x) for x in v) + "}"
    if isinstance(v, dict):
        return "(" + ", ".join(f"{k}={_inline(x)}" for k, x in v.items()) + ")"
    return _scalar(v)


def _is_flat(v) -> bool:
    if isinstance(v, list):
        return all(_is_flat(x) and not isinstance(x, dict) for x in v)
    return not isinstance(v, dict)


def _table(op: str, t, names: list[str]) -> list[str]:
    if not isinstance(t, list):
        return [f"{op} = {t}"]
    if not isinstance(t[0], list):
        return [f"{op}: " + "  ".join(f"{a}->{v}" for a, v in zip(names, t))]
    if isinstance(t[0][0], list):
        return [f"{op} = {_inline(t)}"]
    w = max(len(s) for s in names)
    h = max(w, len(op))
    lines = [f"{op:>{h}} | " + " ".join(f"{s:>{w}}" for s in names)]
    lines.append("-" * (h + 1) + "+" + "-" * ((w + 1) * len(names)))
    for a, row in zip(names, t):
        lines.append(f"{a:>{h}} | " + " ".join(f"{s:>{w}}" for s in row))
    return lines


def _lines(key: str, v, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(v, dict) and set(v) == {"size", "elements", "operations"}:
        out = [f"{pad}{key}: algebra on {{{', '.join(v['elements'])}}}"]
        for op, t in v["operations"].items():
            out += [pad + "  " + s for s in _table(op, t, v["elements"])]
        return out
    if isinstance(v, dict) and "status" in v:
        head = f"{pad}{key}: {v['status']}"
        if v.get("route"):
            head += f" [{v['route']}]"
        rest = {k: x for k, x in v.items() if k not in ("status", "route")}
        out = [head]
        for k, x in rest.items():
            out += _lines(k, x, indent + 1)
        return out
    if isinstance(v, dict):
        out = [f"{pad}{key}:"]
        for k, x in v.items():
            out += _lines(k, x, indent + 1)
        return out
    if isinstance(v, list) and not _is_flat(v):
        out = [f"{pad}{key}:"]
        for i, x in enumerate(v):
            out += _lines(f"[{i}]", x, indent + 1)
        return out
    return [f"{pad}{key}: {_inline(v)}"]


def render_text(report: Report, timings: bool = True) -> bytes:
    t = report.task
    out = [f"== {t['id']}: {t['text']}", f"status: {report.status}"]
    for k, v in report.result.items():
        out += _lines(k, v, 0)
    out.append("bounds: " + _inline(report.bounds))
    if timings and report.timings:
        out.append("time: " + ", ".join(f"{k}={v:.3f}s" for k, v in report.timings.items()))
    return ("\n".join(out) + "\n").encode("utf-8")


def render_report(report: Report, format: str = "text", timings: bool = True) -> bytes:
    if format == "json":
        return render_json(report, timings)
    if format == "text":
        return render_text(report, timings)
    raise ValueError(f"unknown format {format!r}")
