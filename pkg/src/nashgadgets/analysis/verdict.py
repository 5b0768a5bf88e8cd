"""Result type shared by the verification queries."""

from __future__ import annotations

from dataclasses import dataclass, field

YES = "YES"
NO = "NO"
UNKNOWN = "UNKNOWN"


@dataclass
class Verdict:
    """``status`` is YES, NO or UNKNOWN.

    ``witness`` depends on the query: a deviating player with action and
    exact gain for NE checks, an improving profile with per-member gains for
    coalition checks, or ``{"delta": ...}`` for an undecided search.
    """

    status: str
    witness: dict | None = None
    detail: str = ""
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        raise TypeError("use .status; a Verdict has three outcomes")

    @property
    def yes(self) -> bool:
        return self.status == YES

    @property
    def no(self) -> bool:
        return self.status == NO
