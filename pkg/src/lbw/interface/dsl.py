"""Text format for signatures, algebras, matrices, calculi, translations and tasks.

Declarations are line oriented, ``#`` starts a comment, and newlines inside
parentheses or brackets are ignored. A small example::

    signature S { meet/2, top/0 }
    algebra A over S { universe = {0, 1}; meet = table [[0, 0], [0, 1]]; top = 1 }
    matrix M = (A, {1})
    calculus C over S { rule x, y |- meet(x, y); rule |- top }
    translation T over S params 1 { meet(x, y1) ~ y1 }
    task classify C over algebras(S, maxsize=3) bounds { depth=2 }
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Union

from ..errors import LbwError, NotALattice, SignatureError
from ..kernel.algebra import FiniteAlgebra
from ..kernel.constructions import BILATTICE_SIGNATURE, expand_constant, twist_structure
from ..kernel.matrix import Matrix
from ..kernel.terms import App, Signature, Term, Var, render_term
from ..logic.calculus import HilbertCalculus, Rule
from ..definability.translation import Translation, param_names

TASK_KINDS = (
    "classify", "modstar", "profile", "theorems", "detect", "defines",
    "synthesize", "reduced", "derive", "congruences",
)
BOUND_KEYS = ("depth", "params", "maxsize", "jobs", "budget", "free_budget", "proof_budget", "max_delta", "fregean")
CONSTRUCTIONS = ("twist", "expand")

_VAR_NAME = re.compile(r"[xyzw]|[xy][0-9]+")
_BARE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*|[0-9]+")


@dataclass(frozen=True)
class Span:
    line: int
    column: int
    end_column: int


class SpecError(LbwError):
    """A diagnostic with its source position (1-based line and column)."""

    def __init__(self, message: str, span: Span | None):
        self.message = message
        self.span = span
        where = f"{span.line}:{span.column}: " if span else ""
        super().__init__(where + message)

    def render(self, text: str, filename: str = "<input>") -> str:
        if self.span is None:
            return f"{filename}: error: {self.message}"
        lines = text.splitlines()
        src = lines[self.span.line - 1] if self.span.line - 1 < len(lines) else ""
        width = max(1, self.span.end_column - self.span.column)
        caret = " " * (self.span.column - 1) + "^" * width
        return f"{filename}:{self.span.line}:{self.span.column}: error: {self.message}\n  {src}\n  {caret}"


# -- tokens ---------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<space>[ \t\r]+)
  | (?P<string>"[^"\n]*")
  | (?P<turnstile>\|-|⊢)
  | (?P<approx>~|≈)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[{}()\[\],;=/+])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str   # ident, int, string, punct, turnstile, approx, newline, eof
    text: str
    span: Span

    @property
    def value(self) -> str:
        return self.text[1:-1] if self.kind == "string" else self.text


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    line, line_start, pos, depth = 1, 0, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            if text[pos] == '"':
                raise SpecError("unterminated string", Span(line, col, col + 1))
            raise SpecError(f"unexpected character {text[pos]!r}", Span(line, col, col + 1))
        kind = m.lastgroup
        s = m.group()
        span = Span(line, col, col + len(s))
        if kind == "newline":
            if depth == 0:
                out.append(Token("newline", s, span))
            line += 1
            line_start = m.end()
        elif kind in ("comment", "space"):
            pass
        else:
            if kind == "punct":
                if s in "([":
                    depth += 1
                elif s in ")]":
                    depth = max(0, depth - 1)
            out.append(Token(kind, s, span))
        pos = m.end()
    col = pos - line_start + 1
    out.append(Token("eof", "", Span(line, col, col + 1)))
    return out


# -- declarations -----------------------------------------------------------------


@dataclass(frozen=True)
class SignatureDecl:
    name: str
    symbols: tuple[tuple[str, int], ...]
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class AlgebraDecl:
    """Either explicit tables or a construction applied to earlier algebras.

    ``tables`` maps each symbol (in signature order) to nested lists of
    element names, or to a single element name for constants.
    """

    name: str
    signature: str
    elements: tuple[str, ...] = ()
    tables: tuple[tuple[str, Any], ...] = ()
    construction: str | None = None
    arguments: tuple[Any, ...] = ()
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class MatrixDecl:
    name: str
    algebra: str
    designated: tuple[str, ...]
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class CalculusDecl:
    name: str
    signature: str
    rules: tuple[Rule, ...]
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class TranslationDecl:
    name: str
    signature: str
    params: int
    equations: tuple[tuple[Term, Term], ...]
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class FamilyItem:
    """``algebras(S, maxsize=n)`` when ``signature`` is set, else explicit names."""

    signature: str | None = None
    maxsize: int = 0
    names: tuple[str, ...] = ()


@dataclass(frozen=True)
class TaskDecl:
    kind: str
    subject: tuple[str, ...] = ()     # a name, or ("matrices", M1, M2, ...)
    family: tuple[FamilyItem, ...] = ()
    targets: tuple[str, ...] = ()
    almost: bool = False
    query: Rule | None = None
    bounds: tuple[tuple[str, Union[int, str]], ...] = ()
    span: Span | None = field(default=None, compare=False)

    @property
    def label(self) -> str:
        if not self.subject:
            return self.kind
        if self.subject[0] == "matrices":
            return f"{self.kind} matrices({', '.join(self.subject[1:])})"
        return f"{self.kind} {self.subject[0]}"

    def bound(self, key: str, default=None):
        return dict(self.bounds).get(key, default)


Decl = Union[SignatureDecl, AlgebraDecl, MatrixDecl, CalculusDecl, TranslationDecl, TaskDecl]


@dataclass(frozen=True)
class SpecDocument:
    """Parsed declarations plus the objects they denote.

    Two documents are equal when their declarations are; spans and the
    resolved objects do not take part in comparisons.
    """

    declarations: tuple[Decl, ...]
    signatures: dict = field(default_factory=dict, compare=False)
    algebras: dict = field(default_factory=dict, compare=False)
    matrices: dict = field(default_factory=dict, compare=False)
    calculi: dict = field(default_factory=dict, compare=False)
    translations: dict = field(default_factory=dict, compare=False)

    @property
    def tasks(self) -> tuple[TaskDecl, ...]:
        return tuple(d for d in self.declarations if isinstance(d, TaskDecl))

    def kind_of(self, name: str) -> str | None:
        for kind in ("signatures", "algebras", "matrices", "calculi", "translations"):
            if name in getattr(self, kind):
                return kind
        return None


# -- parser -------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.doc = SpecDocument(())
        self.decls: list[Decl] = []
        self.translation_sigs: dict[str, Signature] = {}

    # token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None) -> SpecError:
        return SpecError(msg, (tok or self.tok).span)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "ident", "turnstile", "approx") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise self.error(f"expected {text!r}, found {found}")
        return self.advance()

    def expect_kind(self, kind: str) -> Token:
        if self.tok.kind != kind:
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise self.error(f"expected {kind}, found {found}")
        return self.advance()

    def skip_newlines(self):
        while self.tok.kind == "newline":
            self.advance()

    def separators(self) -> bool:
        seen = False
        while self.tok.kind == "newline" or self.at(";"):
            self.advance()
            seen = True
        return seen

    def name(self) -> Token:
        return self.expect_kind("ident")

    def integer(self) -> int:
        return int(self.expect_kind("int").text)

    def element(self) -> Token:
        if self.tok.kind in ("ident", "int", "string"):
            return self.advance()
        raise self.error("expected an element name")

    def lookup(self, kind: str, tok: Token):
        table = getattr(self.doc, kind)
        if tok.text not in table:
            what = {"signatures": "signature", "algebras": "algebra", "matrices": "matrix",
                    "calculi": "calculus", "translations": "translation"}[kind]
            raise self.error(f"unknown {what} {tok.text!r}", tok)
        return table[tok.text]

    def declare(self, kind: str, tok: Token, obj):
        table = getattr(self.doc, kind)
        if tok.text in table:
            raise self.error(f"duplicate name {tok.text!r}", tok)
        table[tok.text] = obj

    # document

    def parse(self) -> SpecDocument:
        self.skip_newlines()
        while self.tok.kind != "eof":
            kw = self.tok
            if kw.kind != "ident" or kw.text not in ("signature", "algebra", "matrix", "calculus", "translation", "task"):
                raise self.error(f"expected a declaration, found {kw.text!r}")
            self.advance()
            decl = getattr(self, "p_" + kw.text)(kw)
            self.decls.append(decl)
            if self.tok.kind not in ("newline", "eof") and not self.at(";"):
                raise self.error("expected end of line after declaration")
            self.separators()
        return SpecDocument(tuple(self.decls), self.doc.signatures, self.doc.algebras, self.doc.matrices,
                            self.doc.calculi, self.doc.translations)

    def p_signature(self, kw: Token) -> SignatureDecl:
        n = self.name()
        self.expect("{")
        self.skip_newlines()
        symbols = []
        while not self.at("}"):
            s = self.name()
            if _VAR_NAME.fullmatch(s.text):
                raise self.error(f"symbol name {s.text!r} is reserved for variables", s)
            self.expect("/")
            k = self.integer()
            if any(s.text == t for t, _ in symbols):
                raise self.error(f"duplicate symbol {s.text!r}", s)
            symbols.append((s.text, k))
            self.skip_newlines()
            if not self.at("}"):
                self.expect(",")
                self.skip_newlines()
        self.expect("}")
        sig = Signature(tuple(symbols))
        self.declare("signatures", n, sig)
        return SignatureDecl(n.text, tuple(symbols), kw.span)

    def p_algebra(self, kw: Token) -> AlgebraDecl:
        n = self.name()
        self.expect("over")
        stok = self.name()
        sig = self.lookup("signatures", stok)
        if self.at("="):
            self.advance()
            decl, A = self.p_construction(n, stok.text, sig, kw)
        else:
            decl, A = self.p_tables(n, stok.text, sig, kw)
        self.declare("algebras", n, A)
        return decl

    def p_construction(self, n, sname, sig, kw):
        ctok = self.name()
        if ctok.text not in CONSTRUCTIONS:
            raise self.error(f"unknown construction {ctok.text!r}; expected one of {', '.join(CONSTRUCTIONS)}", ctok)
        self.expect("(")
        atok = self.name()
        base = self.lookup("algebras", atok)
        if ctok.text == "twist":
            self.expect(")")
            if sorted(sig.symbols) != sorted(BILATTICE_SIGNATURE.symbols):
                raise self.error(f"twist structures live over {BILATTICE_SIGNATURE}", ctok)
            try:
                A = twist_structure(base, signature=sig)
            except (NotALattice, SignatureError) as e:
                raise self.error(f"twist needs a lattice with meet/join: {e}", atok) from None
            return AlgebraDecl(n.text, sname, construction="twist", arguments=(atok.text,), span=kw.span), A
        self.expect(",")
        c = self.name()
        self.expect("=")
        etok = self.element()
        self.expect(")")
        if base.signature.expand(c.text, 0) != sig:
            raise self.error(f"signature must extend that of {atok.text} by {c.text}/0", c)
        a = self._element_index(base, etok)
        A = expand_constant(base, c.text, a)
        return AlgebraDecl(n.text, sname, construction="expand", arguments=(atok.text, c.text, etok.value), span=kw.span), A

    def _element_index(self, A: FiniteAlgebra, etok: Token) -> int:
        names = [A.name(a) for a in A.universe]
        if etok.value not in names:
            raise self.error(f"unknown element {etok.value!r} (universe is {{{', '.join(names)}}})", etok)
        return names.index(etok.value)

    def p_tables(self, n, sname, sig, kw):
        self.expect("{")
        self.separators()
        elements: list[str] | None = None
        defs: dict[str, tuple[Token, Any]] = {}
        while not self.at("}"):
            key = self.name()
            self.expect("=")
            if key.text == "universe":
                if elements is not None:
                    raise self.error("universe given twice", key)
                elements = self.p_element_set(key)
                if not elements:
                    raise self.error("universe must be nonempty", key)
            else:
                if key.text not in sig:
                    raise self.error(f"symbol {key.text!r} not in signature {sname}", key)
                if key.text in defs:
                    raise self.error(f"table for {key.text!r} given twice", key)
                if self.at("table"):
                    self.advance()
                    defs[key.text] = (key, self.p_nested())
                else:
                    defs[key.text] = (key, self.element())
            if not self.separators() and not self.at("}"):
                raise self.error("expected ';' or newline")
        close = self.expect("}")
        if elements is None:
            raise self.error("algebra needs a universe", close)
        index = {e: i for i, e in enumerate(elements)}
        size = len(elements)
        tables, rendered = {}, []
        for s, k in sig.symbols:
            if s not in defs:
                raise self.error(f"missing table for {s}/{k}", close)
            key, raw = defs[s]
            if k == 0:
                if not isinstance(raw, Token):
                    raise self.error(f"constant {s} takes a single element, not a table", key)
                tables[s] = self._index(raw, index, elements)
                rendered.append((s, raw.value))
            else:
                if isinstance(raw, Token):
                    raise self.error(f"{s}/{k} needs a table", key)
                flat = self._flatten(raw, k, size, key)
                tables[s] = [self._index(t, index, elements) for t in flat]
                rendered.append((s, _nest([t.value for t in flat], k, size)))
        A = FiniteAlgebra.from_tables(sig, size, tables, elements)
        return AlgebraDecl(n.text, sname, tuple(elements), tuple(rendered), span=kw.span), A

    def p_element_set(self, at: Token) -> list[str]:
        self.expect("{")
        self.skip_newlines()
        out: list[str] = []
        while not self.at("}"):
            e = self.element()
            if e.value in out:
                raise self.error(f"duplicate element {e.value!r}", e)
            out.append(e.value)
            self.skip_newlines()
            if not self.at("}"):
                self.expect(",")
                self.skip_newlines()
        self.expect("}")
        return out

    def p_nested(self):
        """Nested bracketed lists of element tokens; returns (open token, items)."""
        if self.at("["):
            open_ = self.advance()
            items = []
            while not self.at("]"):
                items.append(self.p_nested())
                if not self.at("]"):
                    self.expect(",")
            self.expect("]")
            return (open_, items)
        return self.element()

    def _flatten(self, raw, k: int, n: int, key: Token) -> list[Token]:
        out: list[Token] = []

        def walk(node, level):
            if isinstance(node, Token):
                raise self.error(f"table for {key.text} needs {k} levels of brackets", node)
            open_, items = node
            if len(items) != n:
                raise self.error(f"ragged table: expected {n} entries, found {len(items)}", open_)
            for it in items:
                if level == k:
                    if not isinstance(it, Token):
                        raise self.error(f"table for {key.text} nested too deeply", it[0])
                    out.append(it)
                else:
                    walk(it, level + 1)

        walk(raw, 1)
        return out

    def _index(self, tok: Token, index: dict, elements) -> int:
        if tok.value not in index:
            raise self.error(f"unknown element {tok.value!r} (universe is {{{', '.join(elements)}}})", tok)
        return index[tok.value]

    def p_matrix(self, kw: Token) -> MatrixDecl:
        n = self.name()
        self.expect("=")
        self.expect("(")
        atok = self.name()
        A = self.lookup("algebras", atok)
        self.expect(",")
        names = self.p_element_set(atok)
        self.expect(")")
        universe = [A.name(a) for a in A.universe]
        D = []
        for e in names:
            if e not in universe:
                raise self.error(f"unknown element {e!r} of {atok.text}", atok)
            D.append(universe.index(e))
        self.declare("matrices", n, Matrix.of(A, D))
        canon = tuple(universe[a] for a in sorted(D))
        return MatrixDecl(n.text, atok.text, canon, kw.span)

    # terms

    def p_term(self, sig: Signature, var) -> Term:
        t = self.name()
        if t.text in sig:
            k = sig.arity(t.text)
            args: list[Term] = []
            if self.at("("):
                self.advance()
                while not self.at(")"):
                    args.append(self.p_term(sig, var))
                    if not self.at(")"):
                        self.expect(",")
                self.expect(")")
            if len(args) != k:
                raise self.error(f"{t.text} expects {k} argument{'s' if k != 1 else ''}, got {len(args)}", t)
            return App(t.text, tuple(args))
        if self.at("("):
            raise self.error(f"unknown operation symbol {t.text!r}", t)
        return var(t)

    def p_calculus(self, kw: Token) -> CalculusDecl:
        n = self.name()
        self.expect("over")
        stok = self.name()
        sig = self.lookup("signatures", stok)
        self.expect("{")
        self.separators()
        rules = []
        while not self.at("}"):
            self.expect("rule")
            rules.append(self.p_rule(sig))
            if not self.separators() and not self.at("}"):
                raise self.error("expected ';' or newline")
        self.expect("}")
        calc = HilbertCalculus(sig, tuple(rules))
        self.declare("calculi", n, calc)
        return CalculusDecl(n.text, stok.text, calc.rules, kw.span)

    def p_rule(self, sig: Signature) -> Rule:
        names: dict[str, int] = {}

        def var(tok):
            return Var(names.setdefault(tok.text, len(names)))

        prem = []
        if not self.at("|-") and not self.at("⊢"):
            prem.append(self.p_term(sig, var))
            while self.at(","):
                self.advance()
                prem.append(self.p_term(sig, var))
        if self.tok.kind != "turnstile":
            raise self.error("expected '|-'")
        self.advance()
        return Rule(tuple(prem), self.p_term(sig, var)).canonical()

    def p_translation(self, kw: Token) -> TranslationDecl:
        n = self.name()
        self.expect("over")
        stok = self.name()
        sig = self.lookup("signatures", stok)
        self.expect("params")
        m = self.integer()
        allowed = {v: k for k, v in param_names(m).items()}

        def var(tok):
            if tok.text not in allowed:
                raise self.error(f"unknown variable {tok.text!r}; use x, y1..y{m}" if m else
                                 f"unknown variable {tok.text!r}; only x is allowed with params 0", tok)
            return Var(allowed[tok.text])

        self.expect("{")
        self.separators()
        eqs = []
        while not self.at("}"):
            l = self.p_term(sig, var)
            if self.tok.kind != "approx":
                raise self.error("expected '~'")
            self.advance()
            eqs.append((l, self.p_term(sig, var)))
            if not self.separators() and not self.at("}"):
                raise self.error("expected ';' or newline")
        close = self.expect("}")
        if not eqs:
            raise self.error("translation needs at least one equation", close)
        self.declare("translations", n, Translation(m, tuple(eqs)))
        self.translation_sigs[n.text] = sig
        return TranslationDecl(n.text, stok.text, m, tuple(eqs), kw.span)

    # tasks

    def p_task(self, kw: Token) -> TaskDecl:
        ktok = self.name()
        kind = ktok.text
        if kind not in TASK_KINDS:
            raise self.error(f"unknown task kind {kind!r}; expected one of {', '.join(TASK_KINDS)}", ktok)
        subject: tuple[str, ...] = ()
        query = None
        if kind in ("classify", "theorems", "detect"):
            subject = self.p_logic()
        elif kind in ("modstar", "profile", "derive"):
            subject = (self.p_ref("calculi").text,)
        elif kind == "defines":
            subject = (self.p_ref("translations").text,)
        elif kind == "reduced":
            subject = (self.p_ref("matrices").text,)
        elif kind == "congruences":
            subject = (self.p_ref("algebras").text,)
        if kind == "derive":
            calc = self.doc.calculi[subject[0]]
            self.expect("{")
            query = self.p_rule(calc.signature)
            self.expect("}")
        family: tuple[FamilyItem, ...] = ()
        targets: tuple[str, ...] = ()
        almost = False
        bounds: list[tuple[str, Any]] = []
        while self.tok.kind == "ident":
            word = self.tok
            if word.text == "over":
                self.advance()
                family = self.p_family()
            elif word.text == "on":
                self.advance()
                targets = self.p_targets(kind)
            elif word.text == "almost":
                self.advance()
                almost = True
            elif word.text == "bounds":
                self.advance()
                bounds = self.p_bounds()
            else:
                raise self.error(f"unexpected {word.text!r} in task", word)
        task = TaskDecl(kind, subject, family, targets, almost, query, tuple(bounds), kw.span)
        self._check_task(task, ktok)
        return task

    def p_ref(self, kind: str) -> Token:
        tok = self.name()
        self.lookup(kind, tok)
        return tok

    def p_logic(self) -> tuple[str, ...]:
        tok = self.name()
        if tok.text == "matrices" and self.at("("):
            self.advance()
            names = [self.p_ref("matrices").text]
            while self.at(","):
                self.advance()
                names.append(self.p_ref("matrices").text)
            self.expect(")")
            return ("matrices", *names)
        if tok.text in self.doc.calculi:
            return (tok.text,)
        if tok.text in self.doc.matrices:
            return ("matrices", tok.text)
        raise self.error(f"unknown logic {tok.text!r}; name a calculus, a matrix or matrices(...)", tok)

    def p_family(self) -> tuple[FamilyItem, ...]:
        items = [self.p_family_item()]
        while self.at("+"):
            self.advance()
            items.append(self.p_family_item())
        return tuple(items)

    def p_family_item(self) -> FamilyItem:
        if self.at("algebras"):
            self.advance()
            self.expect("(")
            stok = self.name()
            self.lookup("signatures", stok)
            self.expect(",")
            self.expect("maxsize")
            self.expect("=")
            k = self.integer()
            self.expect(")")
            return FamilyItem(stok.text, k)
        return FamilyItem(names=self.p_name_set("algebras"))

    def p_name_set(self, kind: str) -> tuple[str, ...]:
        if not self.at("{"):
            return (self.p_ref(kind).text,)
        self.advance()
        names = [self.p_ref(kind).text]
        while self.at(","):
            self.advance()
            names.append(self.p_ref(kind).text)
        self.expect("}")
        return tuple(names)

    def p_targets(self, kind: str) -> tuple[str, ...]:
        return self.p_name_set("algebras" if kind == "profile" else "matrices")

    def p_bounds(self) -> list[tuple[str, Any]]:
        self.expect("{")
        out: dict[str, Any] = {}
        while not self.at("}"):
            k = self.name()
            if k.text not in BOUND_KEYS:
                raise self.error(f"unknown bound {k.text!r}; expected one of {', '.join(BOUND_KEYS)}", k)
            if k.text in out:
                raise self.error(f"bound {k.text!r} given twice", k)
            self.expect("=")
            v = self.advance()
            if v.kind == "int":
                out[k.text] = int(v.text)
            elif v.kind == "ident" and v.text in ("auto", "true", "false"):
                out[k.text] = v.text
            else:
                raise self.error("bound values are integers, auto, true or false", v)
            if not self.at("}"):
                self.expect(",")
        self.expect("}")
        return sorted(out.items())

    def _check_task(self, task: TaskDecl, at: Token):
        k = task.kind
        if k == "profile" and not task.targets:
            raise self.error("profile needs 'on' followed by algebras", at)
        if k in ("defines", "synthesize") and not task.targets:
            raise self.error(f"{k} needs 'on' followed by matrices", at)
        if k == "modstar" and not task.family:
            raise self.error("modstar needs 'over' followed by a family of algebras", at)
        if task.targets and k not in ("profile", "defines", "synthesize"):
            raise self.error(f"{k} takes no 'on' clause", at)
        sigs = self._task_signatures(task)
        if len(set(sigs)) > 1:
            raise self.error("task mixes objects over different signatures", at)

    def _task_signatures(self, task: TaskDecl) -> list[Signature]:
        d = self.doc
        out = []
        if task.subject:
            if task.subject[0] == "matrices":
                out += [d.matrices[m].signature for m in task.subject[1:]]
            elif task.subject[0] in self.translation_sigs:
                out.append(self.translation_sigs[task.subject[0]])
            else:
                obj = next(getattr(d, kind)[task.subject[0]] for kind in ("calculi", "matrices", "algebras")
                           if task.subject[0] in getattr(d, kind))
                out.append(obj.signature)
        for f in task.family:
            out += [d.signatures[f.signature]] if f.signature else [d.algebras[a].signature for a in f.names]
        for t in task.targets:
            obj = d.algebras.get(t) if task.kind == "profile" else d.matrices.get(t)
            out.append(obj.signature)
        return out


def _nest(flat: list, k: int, n: int):
    if k == 1:
        return list(flat)
    step = n ** (k - 1)
    return [_nest(flat[i * step:(i + 1) * step], k - 1, n) for i in range(n)]


def parse_spec(text: str) -> SpecDocument:
    """Parse and resolve a document; raises SpecError at the first problem."""
    return _Parser(text).parse()


# -- canonical rendering ------------------------------------------------------------


def quote(name: str) -> str:
    if _BARE.fullmatch(name) and name not in ("table", "universe", "rule", "over", "on", "almost", "bounds"):
        return name
    return f'"{name}"'


def _render_nested(t) -> str:
    if isinstance(t, list):
        return "[" + ", ".join(_render_nested(x) for x in t) + "]"
    return quote(t)


def _render_family(items) -> str:
    parts = []
    for f in items:
        if f.signature:
            parts.append(f"algebras({f.signature}, maxsize={f.maxsize})")
        else:
            parts.append("{" + ", ".join(f.names) + "}")
    return " + ".join(parts)


def render_decl(d: Decl) -> str:
    if isinstance(d, SignatureDecl):
        return f"signature {d.name} {{ " + ", ".join(f"{s}/{k}" for s, k in d.symbols) + " }"
    if isinstance(d, AlgebraDecl):
        if d.construction == "twist":
            return f"algebra {d.name} over {d.signature} = twist({d.arguments[0]})"
        if d.construction == "expand":
            base, c, e = d.arguments
            return f"algebra {d.name} over {d.signature} = expand({base}, {c} = {quote(e)})"
        lines = [f"algebra {d.name} over {d.signature} {{", "  universe = {" + ", ".join(quote(e) for e in d.elements) + "}"]
        for s, t in d.tables:
            lines.append(f"  {s} = table {_render_nested(t)}" if isinstance(t, list) else f"  {s} = {quote(t)}")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(d, MatrixDecl):
        return f"matrix {d.name} = ({d.algebra}, {{" + ", ".join(quote(e) for e in d.designated) + "})"
    if isinstance(d, CalculusDecl):
        return "\n".join([f"calculus {d.name} over {d.signature} {{"] + [f"  rule {r.render()}" for r in d.rules] + ["}"])
    if isinstance(d, TranslationDecl):
        names = param_names(d.params)
        eqs = [f"  {render_term(l, names)} ~ {render_term(r, names)}" for l, r in d.equations]
        return "\n".join([f"translation {d.name} over {d.signature} params {d.params} {{"] + eqs + ["}"])
    if isinstance(d, TaskDecl):
        out = f"task {d.kind}"
        if d.subject:
            if d.subject[0] == "matrices":
                out += f" matrices({', '.join(d.subject[1:])})"
            else:
                out += f" {d.subject[0]}"
        if d.query is not None:
            out += f" {{ {d.query.render()} }}"
        if d.family:
            out += " over " + _render_family(d.family)
        if d.targets:
            out += " on {" + ", ".join(d.targets) + "}"
        if d.almost:
            out += " almost"
        if d.bounds:
            out += " bounds { " + ", ".join(f"{k}={v}" for k, v in d.bounds) + " }"
        return out
    raise TypeError(f"not a declaration: {d!r}")


def render_spec(doc: SpecDocument) -> str:
    """Canonical text; parsing it gives back an equal document."""
    return "\n".join(render_decl(d) for d in doc.declarations) + "\n"
