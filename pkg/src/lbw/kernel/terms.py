"""Signatures and terms of the absolutely free algebra."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

from ..errors import SignatureError

_DEFAULT_VAR_NAMES = ("x", "y", "z", "w")


@dataclass(frozen=True)
class Signature:
    """Finite list of operation symbols with their arities.

    The declaration order is the canonical symbol order used for table
    serialization and term generation.
    """

    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate symbol in signature: {names}")
        for name, arity in self.symbols:
            if arity < 0:
                raise SignatureError(f"negative arity for {name}")

    @classmethod
    def of(cls, *symbols: tuple[str, int]) -> "Signature":
        return cls(tuple((str(s), int(k)) for s, k in symbols))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.symbols)

    def arity(self, name: str) -> int:
        for s, k in self.symbols:
            if s == name:
                return k
        raise SignatureError(f"symbol {name!r} not in signature")

    def __contains__(self, name) -> bool:
        return any(s == name for s, _ in self.symbols)

    @property
    def max_arity(self) -> int:
        return max((k for _, k in self.symbols), default=0)

    def constants(self) -> tuple[str, ...]:
        return tuple(s for s, k in self.symbols if k == 0)

    def expand(self, name: str, arity: int) -> "Signature":
        return Signature(self.symbols + ((name, arity),))

    def __str__(self):
        return "{" + ", ".join(f"{s}/{k}" for s, k in self.symbols) + "}"


@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return var_name(self.index)


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple["Term", ...] = ()

    def __str__(self):
        return render_term(self)


Term = Union[Var, App]


def var_name(i: int) -> str:
    if i < len(_DEFAULT_VAR_NAMES):
        return _DEFAULT_VAR_NAMES[i]
    return f"x{i}"


def app(symbol: str, *args: Term) -> App:
    return App(symbol, tuple(args))


def variables(t: Term) -> frozenset[int]:
    if isinstance(t, Var):
        return frozenset((t.index,))
    out: set[int] = set()
    for a in t.args:
        out |= variables(a)
    return frozenset(out)


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(a) for a in t.args)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from subterms(a)


def substitute(t: Term, sigma: Mapping[int, Term]) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.index, t)
    return App(t.symbol, tuple(substitute(a, sigma) for a in t.args))


def check_term(t: Term, sig: Signature) -> None:
    if isinstance(t, Var):
        return
    if t.symbol not in sig:
        raise SignatureError(f"symbol {t.symbol!r} not in signature {sig}")
    if sig.arity(t.symbol) != len(t.args):
        raise SignatureError(
            f"{t.symbol} expects {sig.arity(t.symbol)} arguments, got {len(t.args)}"
        )
    for a in t.args:
        check_term(a, sig)


def render_term(t: Term, names: Sequence[str] | Mapping[int, str] | None = None) -> str:
    if isinstance(t, Var):
        if names is not None:
            try:
                return names[t.index]
            except (IndexError, KeyError):
                pass
        return var_name(t.index)
    if not t.args:
        return t.symbol
    return f"{t.symbol}(" + ", ".join(render_term(a, names) for a in t.args) + ")"


def canonical_renaming(terms: Sequence[Term]) -> dict[int, int]:
    """Map variables to 0, 1, ... in order of first occurrence (left to right)."""
    order: dict[int, int] = {}
    for t in terms:
        for s in subterms(t):
            if isinstance(s, Var) and s.index not in order:
                order[s.index] = len(order)
    return order
