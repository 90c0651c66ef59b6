"""Noninterference: Two Runs Differing Only in Private Inputs"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

from interp.smc2 import smc2_eval
from lang.errors import ShapeMismatch
from lang.types import ConstArrPtr, Fun, PrivacyLabel, Ptr
from memory.values import Location, is_temp
from verify.report import FAIL, PASS, CheckResult

logger = logging.getLogger(__name__)


@dataclass
class NIReport:
    """
    Low-equivalence verdict

    `divergences` names, per party, the first index where D, L or the acc
    history differ; `public_diff` the first block whose public projection differs.
    """

    verdict: str
    divergences: List[str] = field(default_factory=list)
    public_diff: Optional[str] = None

    @property
    def passed(self):
        return self.verdict == PASS

    def to_check(self, name="ni"):
        detail = "; ".join(self.divergences + ([self.public_diff] if self.public_diff else []))
        return CheckResult(name, self.verdict, detail or "D, L and public memory equal")


def first_divergence(a, b) -> Optional[int]:
    for k, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return k
    return None if len(a) == len(b) else min(len(a), len(b))


def public_projection(memory):
    """
    What an observer sees of one party's memory

    Public blocks contribute their bytes, private ones only their type, size
    and permissions. Pointer blocks contribute their location lists; private
    tags are left out.
    """
    projection = []
    for block_id in sorted(memory.blocks):
        if is_temp(block_id):
            continue
        blk = memory.blocks[block_id]
        perms = tuple(p for _, p in blk.perms)
        entry = (block_id, blk.ty, blk.count, perms)
        if isinstance(blk.ty, (Ptr, ConstArrPtr)) and not blk.freed:
            pd = memory.read_ptr(Location(block_id, 0))
            entry += (pd.alpha, pd.locs, pd.indirection)
            if not blk.ty.is_private:
                entry += (pd.tags,)
        elif isinstance(blk.ty, Fun):
            entry += (blk.payload.fundef if blk.payload is not None else None,)
        elif all(label == PrivacyLabel.PUBLIC for label, _ in blk.perms) and not blk.ty.is_private:
            entry += (bytes(blk.data),)
        projection.append(entry)
    return projection


def compare_runs(a, b) -> NIReport:
    """Low-equivalence of two RunResults."""
    divergences = []
    for p in range(a.parties):
        for what, xs, ys in (("D", a.trace.codes[p], b.trace.codes[p]),
                             ("L", a.trace.locs[p], b.trace.locs[p]),
                             ("acc", a.trace.accs[p], b.trace.accs[p])):
            k = first_divergence(xs, ys)
            if k is not None:
                left = xs[k] if k < len(xs) else "<end>"
                right = ys[k] if k < len(ys) else "<end>"
                divergences.append(f"party {p + 1} {what}[{k}]: {left} vs {right}")
    public_diff = None
    for p, (ma, mb) in enumerate(zip(a.memories, b.memories)):
        pa, pb = public_projection(ma), public_projection(mb)
        if pa != pb:
            k = first_divergence(pa, pb)
            public_diff = f"party {p + 1} public memory differs at block entry {k}"
            break
    # Swap targets are the simulator's reconstruction; only the freed blocks are observable
    freed_a, freed_b = [s[0] for s in a.psi], [s[0] for s in b.psi]
    if freed_a != freed_b:
        divergences.append(f"freed blocks differ: {freed_a} vs {freed_b}")
    ok = not divergences and public_diff is None
    return NIReport(PASS if ok else FAIL, divergences, public_diff)


def check_noninterference(program, inputs_a, inputs_b, seed=None, **options) -> NIReport:
    """
    Run a program on two private-input sets with the same seed

    Args:
        program: labelled Program AST
        inputs_a, inputs_b: InputSets of the same shape (same public values)
        seed: protocol randomness seed used by both runs
        options: further Smc2Interpreter arguments

    Returns:
        NIReport
    """
    if inputs_a.shape() != inputs_b.shape():
        raise ShapeMismatch("input sets differ in shape")
    run_a = smc2_eval(program, inputs_a, seed, **options)
    run_b = smc2_eval(program, inputs_b, seed, **options)
    report = compare_runs(run_a, run_b)
    if not report.passed:
        logger.warning("noninterference violated: %s", report.divergences or report.public_diff)
    return report


def check_seed_independence(program, inputs, seeds, **options) -> NIReport:
    """
    Run one input set under every seed and compare each run with the first

    Args:
        program: labelled Program AST
        inputs: InputSet
        seeds: protocol randomness seeds; fewer than two pass trivially
        options: further Smc2Interpreter arguments

    Returns:
        NIReport of the first seed whose run differs, else PASS
    """
    seeds = list(seeds)
    if len(seeds) < 2:
        return NIReport(PASS)
    first = smc2_eval(program, inputs, seeds[0], **options)
    for seed in seeds[1:]:
        report = compare_runs(first, smc2_eval(program, inputs, seed, **options))
        if not report.passed:
            report.divergences.insert(0, f"seed {seeds[0]} vs {seed}")
            logger.warning("run depends on seed %d: %s", seed, report.divergences)
            return report
    return NIReport(PASS)
