"""Shared check-report type, canonical serialization, and worker bookkeeping."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckReport:
    """Outcome of a single named check.

    ``passed`` is always ``worst_violation <= tolerance``; it is recomputed
    at construction so the two fields cannot drift apart.
    """

    name: str
    worst_violation: float
    tolerance: float
    details: list[dict[str, Any]] = field(default_factory=list)
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        self.passed = bool(self.worst_violation <= self.tolerance)

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "pass": self.passed,
            "worst_violation": float(self.worst_violation),
            "tolerance": float(self.tolerance),
            "details": self.details,
        }


def merge_reports(name: str, reports: list[CheckReport], tolerance: float) -> CheckReport:
    """Combine per-sample reports into one, keeping the worst violation."""
    worst = max((r.worst_violation for r in reports), default=0.0)
    details = [{"check": r.name, "worst_violation": r.worst_violation, "pass": r.passed}
               for r in reports]
    return CheckReport(name=name, worst_violation=worst, tolerance=tolerance, details=details)


def format_float(x: float) -> str:
    """Fixed 17-significant-digit scientific form, reproducible across runs."""
    return format(float(x), ".16e")


def canonical_json(obj: Any) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    return _render(obj)


def _render(obj: Any, indent: int = 0) -> str:
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, complex):
        return _render([obj.real, obj.imag])
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(inner + _render(v, indent + 2) for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            inner + json.dumps(str(k)) + ": " + _render(obj[k], indent + 2)
            for k in sorted(obj, key=str)
        )
        return "{\n" + items + "\n" + pad + "}"
    if hasattr(obj, "to_json"):
        return _render(obj.to_json(), indent)
    if hasattr(obj, "item"):  # numpy scalar
        return _render(obj.item(), indent)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def worker_count() -> int:
    """Worker bound taken from LPLAB_THREADS, defaulting to the host CPU count."""
    raw = os.environ.get("LPLAB_THREADS", "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError:
            n = 1
        return max(1, n)
    return max(1, os.cpu_count() or 1)
