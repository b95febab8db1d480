from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

DERIVED = "derived"
REFUTED = "refuted"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class TriStateVerdict:
    """derived (with a trace), refuted (with a countermodel) or unknown (with bounds)."""

    status: str
    route: str = ""
    trace: tuple = ()
    countermodel: Any = None
    bounds: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (DERIVED, REFUTED, UNKNOWN):
            raise ValueError(f"bad status {self.status!r}")

    @property
    def derived(self) -> bool:
        return self.status == DERIVED

    @property
    def refuted(self) -> bool:
        return self.status == REFUTED

    @property
    def unknown(self) -> bool:
        return self.status == UNKNOWN
