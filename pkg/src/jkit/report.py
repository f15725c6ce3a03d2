"""Verification reports: named symbolic residuals plus a pass flag."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any

from .coeff import ExpCoeff, Polynomial


def _degree(value: Any) -> int:
    if isinstance(value, (Polynomial, ExpCoeff, int)):
        return 0
    deg = getattr(value, "degree", None)
    if deg is not None:
        return int(deg)
    if hasattr(value, "vec"):
        return 1
    return 0


def _is_zero(value: Any) -> bool:
    if isinstance(value, (list, tuple)):
        return all(_is_zero(v) for v in value)
    return not value


@dataclass
class Residual:
    label: str
    value: Any
    degree: int = 0

    @property
    def zero(self) -> bool:
        return _is_zero(self.value)

    @property
    def expr(self) -> str:
        if isinstance(self.value, (list, tuple)):
            return "[" + ", ".join(str(v) for v in self.value) + "]"
        return str(self.value) if self.value else "0"

    def to_dict(self) -> dict:
        return {"label": self.label, "degree": self.degree, "expr": self.expr, "zero": self.zero}


@dataclass
class VerificationReport:
    name: str
    residuals: list[Residual] = field(default_factory=list)
    ms: float = 0.0
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(r.zero for r in self.residuals)

    def residual(self, label: str) -> Residual:
        for r in self.residuals:
            if r.label == label or r.label.split(" [", 1)[0] == label:
                return r
        raise KeyError(label)

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "residuals": [r.to_dict() for r in self.residuals],
            "ms": round(self.ms, 3) if timing else 0,
        }

    def summary(self) -> str:
        lines = [f"{'PASS' if self.passed else 'FAIL'} {self.name}"]
        for r in self.residuals:
            mark = "ok " if r.zero else "NZ "
            lines.append(f"  {mark}{r.label} (deg {r.degree}): {r.expr}")
        return "\n".join(lines)


class Collector:
    """Accumulates residuals by category, keeping the first nonzero witness of each."""

    def __init__(self, name: str, note: str = "") -> None:
        self.name = name
        self.note = note
        self._order: list[str] = []
        self._first: dict[str, tuple[str, Any]] = {}
        self._count: dict[str, int] = {}
        self._t0 = time.perf_counter()

    def add(self, category: str, value: Any, detail: str = "") -> bool:
        if category not in self._first:
            self._order.append(category)
            ok = _is_zero(value)
            self._first[category] = ("" if ok else detail, value)
            self._count[category] = 0 if ok else 1
            return ok
        if not _is_zero(value):
            if self._count[category] == 0:
                self._first[category] = (detail, value)
            self._count[category] += 1
            return False
        return True

    def report(self) -> VerificationReport:
        out = []
        for cat in self._order:
            detail, value = self._first[cat]
            label = cat
            if self._count[cat]:
                label = f"{cat} [{detail}; {self._count[cat]} failing]" if detail else f"{cat} [{self._count[cat]} failing]"
            out.append(Residual(label, value, _degree(value)))
        ms = (time.perf_counter() - self._t0) * 1000.0
        return VerificationReport(self.name, out, ms, self.note)
