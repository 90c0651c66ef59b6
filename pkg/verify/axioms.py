"""Protocol Axioms: Exhaustive Small-Field Checks of the Protocol Suite"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import List

from config.field_config import config as field_config
from mpc.field import FieldParams
from mpc.protocols import ProtocolSuite
from mpc.rng import ProtocolRng
from verify.report import FAIL, PASS, CheckResult

logger = logging.getLogger(__name__)

OPS = {
    "+": lambda a, b, p: (a + b) % p,
    "-": lambda a, b, p: (a - b) % p,
    "*": lambda a, b, p: (a * b) % p,
}


@dataclass
class AxiomReport:
    """Cases run and failures found, per axiom."""

    cases: dict = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def count(self, axiom, n=1):
        self.cases[axiom] = self.cases.get(axiom, 0) + n

    def fail(self, message):
        if len(self.failures) < 20:
            self.failures.append(message)

    def to_check(self, name="axioms"):
        if self.failures:
            return CheckResult(name, FAIL, "; ".join(self.failures[:3]))
        summary = ", ".join(f"{k}={v}" for k, v in self.cases.items())
        return CheckResult(name, PASS, summary)


def _suite(params, seed, backend):
    return ProtocolSuite(params, ProtocolRng(seed), backend)


def check_binary_ops(suite, report):
    """Every (a, b) of the field through + - *."""
    p = suite.params.prime
    for op, plain in OPS.items():
        for a, b in itertools.product(range(p), repeat=2):
            out = suite.mpc_b(op, suite.fresh(a), suite.fresh(b))
            report.count(f"mpc_b{op}")
            if suite.open(out) != plain(a, b, p):
                report.fail(f"{a} {op} {b} reconstructs to {suite.open(out)}")


def check_determinism(params, seed, backend, report):
    """Two suites with the same seed produce the same shares."""
    runs = []
    for _ in range(2):
        suite = _suite(params, seed, backend)
        a, b = suite.fresh(3), suite.fresh(4)
        runs.append((a, b, suite.mpc_mult(a, b), suite.mpc_cmp("<", a, b),
                     suite.mpc_ar(suite.fresh(1), [suite.fresh(v) for v in (5, 6, 7)])))
    report.count("determinism")
    if runs[0] != runs[1]:
        report.fail("seeded replay produced different shares")


def check_mux(suite, values, max_length, report):
    """mpc_ar, mpc_aw and mpc_dv against their plaintext selection oracles."""
    marker = max(values)
    for n in range(1, max_length + 1):
        for plain in itertools.product(values, repeat=n):
            elements = [suite.fresh(v) for v in plain]
            # one index past the end: reads give 0, writes change nothing
            for i in range(n + 1):
                index = suite.fresh(i)
                expected = plain[i] if i < n else 0
                got = suite.open(suite.mpc_ar(index, elements))
                report.count("mpc_ar")
                if got != expected:
                    report.fail(f"mpc_ar {list(plain)}[{i}] = {got}")
                written = [suite.open(x) for x in suite.mpc_aw(index, elements, suite.fresh(marker))]
                oracle = [marker if m == i else v for m, v in enumerate(plain)]
                report.count("mpc_aw")
                if written != oracle:
                    report.fail(f"mpc_aw {list(plain)}[{i}] = {written}")
            for k in range(n):
                tags = [suite.fresh(1 if m == k else 0) for m in range(n)]
                got = suite.open(suite.mpc_dv(elements, tags))
                report.count("mpc_dv")
                if got != plain[k]:
                    report.fail(f"mpc_dv {list(plain)} slot {k} = {got}")


def check_protocol_axioms(params=None, seed=None, backend="shamir", max_length=4, values=None) -> AxiomReport:
    """
    Exhaust the protocol axioms over a small field

    Args:
        params: FieldParams, defaults to p=11 with the configured q and t
        seed: randomness seed
        backend: "shamir" or "dealer"
        max_length: longest array / pointer checked by the mux oracles
        values: element values for the mux oracles, defaults to the whole field

    Returns:
        AxiomReport
    """
    if params is None:
        q = field_config.parties
        params = FieldParams(field_config.axiom_prime, q, min(field_config.threshold, (q - 1) // 2))
    seed = field_config.seed if seed is None else seed
    values = list(range(params.prime)) if values is None else list(values)
    report = AxiomReport()
    suite = _suite(params, seed, backend)
    check_binary_ops(suite, report)
    check_determinism(params, seed, backend, report)
    check_mux(suite, values, max_length, report)
    logger.info("protocol axioms: %s, %d failures", report.cases, len(report.failures))
    return report
