"""Code Congruence and ψ-Congruence Between SMC² and Vanilla C Runs"""

import logging
from dataclasses import dataclass
from typing import Optional

from erasure.memory import erase_memory

logger = logging.getLogger(__name__)

# SMC² code -> Vanilla codes it is congruent to (besides itself)
CONGRUENT = {
    "d1": {"d"}, "dp1": {"dp"}, "da1": {"da"}, "wea1": {"wea"}, "wea2": {"wea"},
    "fc1": {"fc"}, "r1": {"r"}, "w1": {"w"}, "w2": {"w"}, "rp1": {"rp"},
    "wp1": {"wp"}, "wp2": {"wp"}, "rdp2": {"rdp"}, "mprdp": {"rdp"}, "mprdp1": {"rdp1"},
    "wdp2": {"wdp1"}, "wdp3": {"wdp"}, "wdp4": {"wdp"}, "mpwdp": {"wdp"}, "mpwdp1": {"wdp1"},
    "ra1": {"ra"}, "rao1": {"rao"}, "wa1": {"wa"}, "wa2": {"wa"}, "wao1": {"wao"},
    "wao2": {"wao"}, "mpwa": {"wa"}, "pfre": {"fre"}, "mpfre": {"fre"}, "cv1": {"cv"},
    "inp2": {"inp"}, "inp3": {"inp1"}, "out2": {"out"}, "out3": {"out1"},
    "pin3": {"pin"}, "pin4": {"pin1"}, "mppin": {"pin1"},
    "mpcmp": {"mpcmpt", "mpcmpf"},
    "iep": {"mpiet", "mpief"}, "iepd": {"mpiet", "mpief"},
}

# malp ≅ [ty, bm, mal]; the ty comes first because the count expression sits between
MALP_TAIL = ["bm", "mal"]


def codes_match(smc_code, van_code) -> bool:
    return smc_code == van_code or van_code in CONGRUENT.get(smc_code, ())


def code_divergence(smc_codes, van_codes) -> Optional[str]:
    """
    Greedy left-to-right match of an SMC² code list against a Vanilla one

    Args:
        smc_codes: codes D of one party
        van_codes: codes D̂ of the same party

    Returns:
        None when congruent, else a description of the first mismatch
    """
    j = 0
    pending_ty = 0
    for i, code in enumerate(smc_codes):
        if code != "ty":
            while j < len(van_codes) and van_codes[j] == "ty":
                pending_ty += 1
                j += 1
        if code == "malp":
            if pending_ty == 0 or van_codes[j:j + 2] != MALP_TAIL:
                return f"malp at {i} has no [ty, bm, mal] at {j}"
            pending_ty -= 1
            j += 2
            continue
        if j >= len(van_codes):
            return f"{code} at {i} has no counterpart; Vanilla codes exhausted"
        if not codes_match(code, van_codes[j]):
            return f"{code} at {i} vs {van_codes[j]} at {j}"
        j += 1
    if pending_ty:
        return f"{pending_ty} unmatched ty code(s)"
    if j < len(van_codes):
        return f"extra Vanilla codes from {j}: {van_codes[j:j + 5]}"
    return None


def code_congruent(smc_codes, van_codes) -> bool:
    """D ≅ D̂ under the congruence table."""
    return code_divergence(smc_codes, van_codes) is None


@dataclass
class CongruenceReport:
    """Verdict plus where the two states first differ."""

    ok: bool
    detail: str = ""
    block: Optional[int] = None
    offset: Optional[int] = None

    def __bool__(self):
        return self.ok


def _first_difference(a, b):
    for k, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return k
    return min(len(a), len(b))


def compare_erased(smc, van) -> CongruenceReport:
    """Compare two ErasureReports block by block, then the environments."""
    if set(smc.blocks) != set(van.blocks):
        missing = sorted(set(van.blocks) - set(smc.blocks))
        extra = sorted(set(smc.blocks) - set(van.blocks))
        return CongruenceReport(False, f"block sets differ: missing {missing}, extra {extra}")
    for block_id in sorted(van.blocks):
        s, v = smc.blocks[block_id], van.blocks[block_id]
        if (s.ty, s.count, s.perm) != (v.ty, v.count, v.perm):
            return CongruenceReport(
                False, f"block {block_id}: {s.ty} x{s.count} {s.perm} vs {v.ty} x{v.count} {v.perm}", block_id)
        if v.freed:
            continue
        if s.fundef != v.fundef:
            return CongruenceReport(False, f"block {block_id}: function bodies differ", block_id)
        if v.target is not None:
            pointee = van.blocks.get(v.target.block)
            dangling = pointee is not None and pointee.freed
            if not dangling and (s.target, s.indirection) != (v.target, v.indirection):
                return CongruenceReport(False, f"block {block_id}: points to {s.target} vs {v.target}", block_id)
        if s.data != v.data:
            offset = _first_difference(s.data or b"", v.data or b"")
            return CongruenceReport(False, f"block {block_id} differs at byte {offset}", block_id, offset)
    if smc.env != van.env:
        names = sorted(set(smc.env) ^ set(van.env)) or \
            sorted(n for n in smc.env if smc.env[n] != van.env[n])
        return CongruenceReport(False, f"environments differ at {names}")
    return CongruenceReport(True, f"{len(van.blocks)} blocks congruent")


def psi_congruent(smc_result, van_result) -> CongruenceReport:
    """
    ψ-congruence of final states

    Args:
        smc_result: RunResult of the SMC² run (its ψ log is applied)
        van_result: RunResult of the erased program's Vanilla run

    Returns:
        CongruenceReport, truthy when congruent
    """
    report = compare_erased(erase_memory(smc_result), erase_memory(van_result))
    if not report:
        logger.info("ψ-congruence failed: %s", report.detail)
    return report
