"""Check Verdicts, Report Lines and Exit Codes"""

from dataclasses import dataclass
from typing import Iterable

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_FAULT = 2
EXIT_USAGE = 64


@dataclass
class CheckResult:
    """Outcome of one property check on one program."""

    name: str
    verdict: str
    detail: str = ""

    @property
    def passed(self):
        return self.verdict != FAIL

    def line(self):
        """`CHECK <name> PASS|FAIL|SKIP <detail>`"""
        return f"CHECK {self.name} {self.verdict} {self.detail}".rstrip()

    def __bool__(self):
        return self.passed


def verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def exit_code(results: Iterable[CheckResult]) -> int:
    """0 when nothing failed, 1 otherwise; SKIP counts as not failed."""
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY
