"""Uniform pass/fail reporting for identity checks.

Checks never raise on a mathematical failure; they return a result carrying
the first counterexample so detector-style tests can assert on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

__all__ = ["CheckResult"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    details: str = ""
    counterexample: Any = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @staticmethod
    def ok(name: str, details: str = "") -> "CheckResult":
        return CheckResult(name, "pass", details)

    @staticmethod
    def fail(name: str, details: str, counterexample: Any = None) -> "CheckResult":
        return CheckResult(name, "fail", details, counterexample)

    @staticmethod
    def skipped(name: str, details: str) -> "CheckResult":
        return CheckResult(name, "skipped", details)
