"""Structured outcomes for every check in the library."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

VERIFIED = "verified"
REFUTED = "refuted"
UNDECIDED = "undecided"


@dataclass
class Verdict:
    """Outcome of a check.

    ``checks`` maps condition names to booleans (or ``None`` when undecided),
    ``witnesses`` holds coordinate vectors/matrices supporting the outcome and
    ``ledger`` records which hypotheses were decided, assumed or automatic.
    """

    outcome: str
    checks: dict[str, Any] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)
    ledger: dict[str, str] = field(default_factory=dict)
    reason: str = ""

    def __bool__(self) -> bool:
        return self.outcome == VERIFIED

    @property
    def verified(self) -> bool:
        return self.outcome == VERIFIED

    @classmethod
    def from_checks(cls, checks: dict[str, Any], **kw) -> "Verdict":
        """Verified if every check is True, undecided if any is None, else refuted."""
        if any(v is False for v in checks.values()):
            outcome = REFUTED
            first = next(k for k, v in checks.items() if v is False)
            kw.setdefault("reason", f"{first} fails")
        elif any(v is None for v in checks.values()):
            outcome = UNDECIDED
            first = next(k for k, v in checks.items() if v is None)
            kw.setdefault("reason", f"{first} undecided")
        else:
            outcome = VERIFIED
        return cls(outcome, dict(checks), **kw)

    @classmethod
    def ok(cls, **kw) -> "Verdict":
        return cls(VERIFIED, **kw)

    @classmethod
    def fail(cls, reason: str, **kw) -> "Verdict":
        return cls(REFUTED, reason=reason, **kw)

    def merge(self, prefix: str, other: "Verdict") -> None:
        """Fold ``other`` into this verdict's records under ``prefix``."""
        self.checks[prefix] = other.outcome == VERIFIED if other.outcome != UNDECIDED else None
        for k, v in other.checks.items():
            self.checks.setdefault(f"{prefix}.{k}", v)
        for k, v in other.witnesses.items():
            self.witnesses.setdefault(f"{prefix}.{k}", v)
        for k, v in other.ledger.items():
            self.ledger.setdefault(f"{prefix}.{k}", v)

    def __repr__(self):
        extra = f", reason={self.reason!r}" if self.reason else ""
        return f"Verdict({self.outcome}{extra})"


class StructureError(ValueError):
    """Input data violates an axiom; carries the failing verdict."""

    def __init__(self, message: str, verdict: Verdict | None = None):
        super().__init__(message)
        self.verdict = verdict
