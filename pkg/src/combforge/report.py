"""Verification reports: named checks with values, bounds and pass flags."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

SIG_DIGITS = 12


def clean(value: Any) -> Any:
    """JSON-safe copy with floats rounded to ``SIG_DIGITS`` significant digits."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return float(f"{value:.{SIG_DIGITS}g}")
    if isinstance(value, complex):
        return [clean(value.real), clean(value.imag)]
    if isinstance(value, dict):
        return {str(k): clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean(v) for v in value]
    if hasattr(value, "item"):
        return clean(value.item())
    return str(value)


@dataclass
class Check:
    """One numeric assertion ``value <op> bound``."""

    name: str
    value: Any
    bound: Any
    op: str = "<="
    params: dict = field(default_factory=dict)
    note: str = ""

    @property
    def passed(self) -> bool:
        v, b = self.value, self.bound
        if self.op == "<=":
            return v <= b
        if self.op == ">=":
            return v >= b
        if self.op == "==":
            return v == b
        raise ValueError(f"unknown comparison {self.op!r}")

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "passed": bool(self.passed),
            "value": clean(self.value),
            "op": self.op,
            "bound": clean(self.bound),
            "params": clean(self.params),
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    suite: str
    params: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    runtime_ms: float = 0.0

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def n_failed(self) -> int:
        return sum(not c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": clean(self.params),
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": self.n_failed,
            "checks": [c.to_dict() for c in self.checks],
            "runtime_ms": round(self.runtime_ms, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["suite", "name", "passed", "value", "op", "bound", "params"])
        for c in self.checks:
            d = c.to_dict()
            writer.writerow([self.suite, d["name"], d["passed"], d["value"], d["op"], d["bound"], json.dumps(d["params"], sort_keys=True)])
        return buf.getvalue()
