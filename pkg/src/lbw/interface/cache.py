"""Content-addressed result cache on disk.

Entries are JSON files named by the SHA-256 of a canonical serialization of
(algorithm version, operation, inputs). Every entry carries a digest of its
payload; unreadable or mismatching entries are discarded with a warning and
the caller recomputes. Any I/O failure switches the cache off for the rest
of the run instead of failing the computation.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Callable

from filelock import FileLock, Timeout

ALGORITHM_VERSION = "1"
ENV_VAR = "LBW_CACHE"

log = logging.getLogger("lbw.cache")


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def cache_key(op: str, inputs: Any, version: str = ALGORITHM_VERSION) -> str:
    return hashlib.sha256(canonical_json([version, op, inputs]).encode()).hexdigest()


class Cache:
    """A cache directory; ``Cache(None)`` is a disabled cache that never hits."""

    def __init__(self, directory: str | os.PathLike | None, version: str = ALGORITHM_VERSION):
        self.directory = Path(directory) if directory is not None else None
        self.version = version
        self.hits = 0
        self.misses = 0
        if self.directory is not None:
            try:
                self.directory.mkdir(parents=True, exist_ok=True)
            except OSError as e:
                self._disable(e)

    @classmethod
    def resolve(cls, directory: str | os.PathLike | None = None) -> "Cache":
        """--cache-dir when given, else $LBW_CACHE, else disabled."""
        return cls(directory if directory is not None else os.environ.get(ENV_VAR) or None)

    @property
    def enabled(self) -> bool:
        return self.directory is not None

    def _disable(self, err: Exception):
        log.warning("cache disabled: %s", err)
        self.directory = None

    def key(self, op: str, inputs: Any) -> str:
        return cache_key(op, inputs, self.version)

    def _path(self, key: str) -> Path:
        assert self.directory is not None
        return self.directory / key[:2] / f"{key}.json"

    def get(self, key: str) -> Any | None:
        if not self.enabled:
            return None
        path = self._path(key)
        try:
            raw = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            self.misses += 1
            return None
        except OSError as e:
            self._disable(e)
            return None
        try:
            entry = json.loads(raw)
            payload = entry["payload"]
            ok = entry["key"] == key and entry["digest"] == hashlib.sha256(canonical_json(payload).encode()).hexdigest()
        except (ValueError, KeyError, TypeError):
            ok = False
        if not ok:
            log.warning("discarding corrupted cache entry %s", path.name)
            try:
                path.unlink()
            except OSError:
                pass
            self.misses += 1
            return None
        self.hits += 1
        return payload

    def put(self, key: str, value: Any) -> None:
        if not self.enabled:
            return
        path = self._path(key)
        entry = {"key": key, "digest": hashlib.sha256(canonical_json(value).encode()).hexdigest(), "payload": value}
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            # one writer at a time; readers only ever see complete files
            with FileLock(str(self.directory / ".lock"), timeout=60):
                fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
                with os.fdopen(fd, "w", encoding="utf-8") as f:
                    # keep insertion order so hits render exactly like fresh results
                    json.dump(entry, f, separators=(",", ":"), ensure_ascii=False)
                os.replace(tmp, path)
        except (OSError, Timeout) as e:
            self._disable(e)

    def memo(self, op: str, inputs: Any, compute: Callable[[], Any]) -> Any:
        """Cached value of compute(); values must be JSON-serializable."""
        key = self.key(op, inputs)
        hit = self.get(key)
        if hit is not None:
            return hit
        value = compute()
        self.put(key, value)
        return value


def cached_filter_lattice(cache: Cache, calc, A, budget: int | None = None):
    """filter_lattice through the cache, keyed by the rules and the tables."""
    from ..logic.filters import DEFAULT_FILTER_BUDGET, FilterLattice, filter_lattice

    budget = DEFAULT_FILTER_BUDGET if budget is None else budget
    inputs = {
        "signature": [list(s) for s in calc.signature.symbols],
        "rules": [r.render() for r in calc.rules],
        "size": A.size,
        "tables": [list(t) for t in A.tables],
        "budget": budget,
    }
    filters = cache.memo("filter_lattice", inputs,
                         lambda: [sorted(F) for F in filter_lattice(calc, A, budget).filters])
    return FilterLattice(calc, A, tuple(frozenset(F) for F in filters))
