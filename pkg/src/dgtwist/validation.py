"""Validation reports: every axiom checker returns one of these."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Violation:
    kind: str          # e.g. "associativity", "leibniz", "maurer-cartan"
    subject: tuple     # the offending word/pair/triple
    detail: str = ""

    def __str__(self):
        where = ", ".join(map(str, self.subject))
        msg = f"{self.kind} violated at ({where})"
        return f"{msg}: {self.detail}" if self.detail else msg


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def add(self, kind, subject, detail=""):
        self.violations.append(Violation(kind, tuple(subject), detail))

    def extend(self, other):
        self.violations.extend(other.violations)

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)
