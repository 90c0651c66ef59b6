"""Confluence: Every Party Reaches a Corresponding Final Configuration"""

import logging

from lang.types import Base, BaseType
from memory.codec import decode_all
from memory.values import is_temp
from mpc.field import consistent
from verify.noninterference import first_divergence, public_projection
from verify.report import FAIL, PASS, CheckResult

logger = logging.getLogger(__name__)


def inconsistent_blocks(result):
    """Private value blocks whose share vectors do not lie on one degree-t polynomial."""
    layout = result.memories[0]
    params = result.suite.params
    bad = []
    for block_id in sorted(layout.blocks):
        blk = layout.blocks[block_id]
        if is_temp(block_id) or blk.freed or not isinstance(blk.ty, Base):
            continue
        if not blk.ty.is_private or blk.ty.bty == BaseType.VOID:
            continue
        per_party = [decode_all(blk.ty, bytes(m.blocks[block_id].data), m.sizes) for m in result.memories]
        if not all(consistent(values, params) for values in zip(*per_party)):
            bad.append(block_id)
    return bad


def check_confluence(result, name="confluence") -> CheckResult:
    """
    Compare the q parties of one SMC² run

    Args:
        result: RunResult of an SMC² run

    Returns:
        PASS iff every party has the same D, L and acc history, the same public
        memory, and every private value is a consistent sharing
    """
    q = result.parties
    if q <= 1:
        return CheckResult(name, PASS, "single party")
    for p in range(1, q):
        for what, xs, ys in (("D", result.trace.codes[0], result.trace.codes[p]),
                             ("L", result.trace.locs[0], result.trace.locs[p]),
                             ("acc", result.trace.accs[0], result.trace.accs[p])):
            k = first_divergence(xs, ys)
            if k is not None:
                return CheckResult(name, FAIL, f"party {p + 1} {what} differs from party 1 at {k}")
        if public_projection(result.memories[0]) != public_projection(result.memories[p]):
            return CheckResult(name, FAIL, f"party {p + 1} public memory differs from party 1")
    if result.suite is not None:
        bad = inconsistent_blocks(result)
        if bad:
            logger.warning("inconsistent sharings in blocks %s", bad)
            return CheckResult(name, FAIL, f"inconsistent sharings in blocks {bad}")
    return CheckResult(name, PASS, f"{q} parties agree")
