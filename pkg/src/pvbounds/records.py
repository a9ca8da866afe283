"""Verification records shared by every checker."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
MARGINAL = "marginal"
UNMET = "hypotheses-unmet"
SINGULAR = "singular"
INDETERMINATE = "indeterminate"

STATUSES = (PASS, FAIL, MARGINAL, UNMET, SINGULAR, INDETERMINATE)

# Absolute tolerance (scaled by max(1, |rhs|)) inside which a comparison is
# reported as marginal instead of pass/fail.
MARGINAL_TOL = 1e-9


@dataclass
class VerificationRecord:
    """One checked instance of a bound: lhs <= rhs."""

    statement: str
    params: dict[str, Any]
    lhs: float | None
    rhs: float | None
    margin: float | None
    status: str
    runtime_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status != FAIL


def classify(lhs: float, rhs: float) -> tuple[float, str]:
    """Return (margin, status) for the claim lhs <= rhs."""
    margin = rhs - lhs
    if math.isnan(margin):
        return margin, INDETERMINATE
    tol = MARGINAL_TOL * max(1.0, abs(rhs))
    if margin > tol:
        return margin, PASS
    if margin < -tol:
        return margin, FAIL
    return margin, MARGINAL


def check(statement: str, params: dict[str, Any], lhs: float, rhs: float) -> VerificationRecord:
    margin, status = classify(float(lhs), float(rhs))
    return VerificationRecord(statement, dict(params), float(lhs), float(rhs), margin, status)


def unmet(statement: str, params: dict[str, Any], hypothesis: str,
          lhs: float | None = None, rhs: float | None = None) -> VerificationRecord:
    """Record for an instance outside the statement's hypotheses."""
    p = dict(params)
    p["hypothesis"] = hypothesis
    return VerificationRecord(statement, p, lhs, rhs, None, UNMET)


@dataclass
class Summary:
    counts: dict[str, int] = field(default_factory=lambda: {s: 0 for s in STATUSES})

    @classmethod
    def of(cls, records) -> "Summary":
        s = cls()
        for rec in records:
            s.counts[rec.status] += 1
        return s

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def failed(self) -> int:
        return self.counts[FAIL]
