"""Machine-readable check reports shared by the verification entry points."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator

PASS = "pass"
FAIL = "fail"
WARNING = "warning"


def _plain(x: Any) -> Any:
    """Convert matrices, groups and tuples into JSON-friendly values."""
    if hasattr(x, "to_json"):
        return x.to_json()
    if hasattr(x, "to_rows"):
        return x.to_rows()
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


@dataclass
class Report:
    check: str
    params: dict = field(default_factory=dict)
    status: str = PASS
    witnesses: dict = field(default_factory=dict)
    wall_time: float = 0.0
    children: list["Report"] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def fail(self, key: str, value: Any) -> None:
        self.status = FAIL
        self.witnesses.setdefault("failures", []).append({key: _plain(value)})

    def expect(self, cond: bool, key: str, value: Any = None) -> bool:
        if not cond:
            self.fail(key, value)
        return cond

    def add(self, child: "Report") -> "Report":
        self.children.append(child)
        if child.status == FAIL:
            self.status = FAIL
        elif child.status == WARNING and self.status == PASS:
            self.status = WARNING
        return child

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "params": _plain(self.params),
            "status": self.status,
            "witnesses": _plain(self.witnesses),
            "wall_time": round(self.wall_time, 6),
        }
        if self.children:
            out["children"] = [c.to_json() for c in self.children]
        return out

    def dumps(self, timing: bool = True) -> str:
        data = self.to_json()
        if not timing:
            _strip_time(data)
        return json.dumps(data, sort_keys=True, indent=2)

    def line(self) -> str:
        return f"{self.status.upper():7s} {self.check} {json.dumps(_plain(self.params), sort_keys=True)}"


def _strip_time(d: dict) -> None:
    d.pop("wall_time", None)
    for c in d.get("children", []):
        _strip_time(c)


@contextmanager
def timed(report: Report) -> Iterator[Report]:
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.wall_time = time.perf_counter() - t0
