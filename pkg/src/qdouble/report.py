"""Pass/fail reports shared by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Check:
    id: str
    max_deviation: float
    passed: bool

    def to_dict(self) -> dict:
        return {"id": self.id, "maxDeviation": float(self.max_deviation), "pass": bool(self.passed)}


@dataclass
class Report:
    suite: str
    group: str
    mode: str
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, check_id: str) -> Check:
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "group": self.group, "mode": self.mode,
                "pass": self.passed, "checks": [c.to_dict() for c in self.checks]}
