"""Records and run reports shared by the checks and the command line."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__


def jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if hasattr(x, "item") and callable(x.item):
        return x.item()
    return x


@dataclass
class CheckRecord:
    """Outcome of one identity or property check."""

    check: str
    passed: bool
    value: Any = None
    expected: Any = None
    anchor: str = ""
    family: str | None = None
    n: int | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "verdict": "pass" if self.passed else "fail",
            "value": jsonable(self.value),
            "expected": jsonable(self.expected),
            "anchor": self.anchor,
            "family": self.family,
            "n": self.n,
            "detail": self.detail,
        }


@dataclass
class RunReport:
    mode: str
    records: list = field(default_factory=list)
    version: str = __version__

    def extend(self, records) -> None:
        self.records.extend(records)

    @property
    def passed(self) -> int:
        return sum(1 for r in self.records if _passed(r))

    @property
    def failed(self) -> int:
        return len(self.records) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "mode": self.mode,
            "records": [r.to_dict() for r in self.records],
            "summary": {"total": len(self.records), "passed": self.passed, "failed": self.failed},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_table(self) -> str:
        rows = [r.to_dict() for r in self.records]
        lines = []
        for r in rows:
            where = r.get("family") or ""
            if r.get("n") is not None:
                where += f" n={r['n']}"
            if r.get("t") is not None:
                where += f" t={r['t']}"
            if r.get("s") is not None:
                where += f" s={r['s']}"
            value = r.get("value", r.get("lhs"))
            other = r.get("expected", r.get("rhs"))
            lines.append(f"{r['verdict'].upper():4}  {r['check']:<44} {where:<22} {value!s:>14} | {other!s:<14} {r.get('anchor', '')}"
                         + (f"  [{r['detail']}]" if r.get("detail") else ""))
        lines.append(f"summary: {self.passed}/{len(rows)} passed, {self.failed} failed (mode={self.mode}, version={self.version})")
        return "\n".join(lines)


def _passed(r) -> bool:
    if hasattr(r, "passed"):
        return bool(r.passed)
    return bool(r.holds)
