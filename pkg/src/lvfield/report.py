"""Check results and suite reports (JSON, schema-versioned, deterministic)."""

from __future__ import annotations

import json
import platform
from dataclasses import asdict, dataclass, field
from typing import Optional

SCHEMA_VERSION = 1

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckResult:
    name: str
    status: str
    window: Optional[str] = None
    safe_window: Optional[str] = None
    max_abs_error: Optional[float] = None
    witness: Optional[str] = None
    detail: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def check(name: str, passed: bool, **kw) -> CheckResult:
    return CheckResult(name, PASS if passed else FAIL, **kw)


def skipped(name: str, reason: str, **kw) -> CheckResult:
    return CheckResult(name, SKIPPED, detail=reason, **kw)


def environment_fingerprint() -> dict:
    from . import __version__

    return {
        "python": platform.python_version(),
        "implementation": platform.python_implementation(),
        "lvfield": __version__,
    }


@dataclass
class Report:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    timestamp: Optional[str] = None

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "timestamp": self.timestamp,
            "environment": environment_fingerprint(),
            "config": self.config,
            "summary": {**self.counts(), "passed": self.passed},
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
