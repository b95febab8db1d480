"""Access to the shipped example documents."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

from .dsl import SpecDocument, parse_spec


def corpus_dir() -> Path:
    return Path(str(resources.files("lbw") / "corpus"))


def corpus_files() -> list[Path]:
    return sorted(corpus_dir().glob("*.lbw"))


def load_corpus(name: str) -> SpecDocument:
    """Parse a corpus document by file stem, e.g. ``load_corpus("a4")``."""
    path = corpus_dir() / f"{name}.lbw"
    return parse_spec(path.read_text(encoding="utf-8"))


def corpus_documents() -> dict[str, SpecDocument]:
    return {p.stem: parse_spec(p.read_text(encoding="utf-8")) for p in corpus_files()}
