"""Differential Correctness: SMC² Run vs the Erased Program's Vanilla C Run"""

import logging

from erasure.congruence import code_divergence, psi_congruent
from erasure.erase import erase_program
from interp.smc2 import smc2_eval
from interp.vanilla import van_eval
from verify.report import FAIL, PASS, SKIP, CheckResult

logger = logging.getLogger(__name__)


def check_correctness(program, inputs=None, seed=None, name="correct", **options) -> CheckResult:
    """
    Run both sides and compare them

    The SMC² trace must be code-congruent to the Vanilla one for every party,
    the final states ψ-congruent and the outputs identical. Runs with a
    non-well-aligned access are reported as SKIP.

    Args:
        program: labelled Program AST
        inputs: InputSet shared by both runs
        seed: protocol randomness seed
        options: further Smc2Interpreter arguments

    Returns:
        CheckResult
    """
    smc = smc2_eval(program, inputs, seed, **options)
    if not smc.aligned:
        return CheckResult(name, SKIP, f"not well-aligned: {smc.flags[0]}")
    van = van_eval(erase_program(program), inputs, parties=smc.parties, sizes=smc.sizes)
    if not van.aligned:
        return CheckResult(name, SKIP, f"erased run not well-aligned: {van.flags[0]}")

    for p in range(smc.parties):
        divergence = code_divergence(smc.trace.spine[p], van.trace.spine[p])
        if divergence is not None:
            return CheckResult(name, FAIL, f"party {p + 1} codes: {divergence}")

    state = psi_congruent(smc, van)
    if not state:
        return CheckResult(name, FAIL, f"state: {state.detail}")

    if smc.outputs != van.outputs:
        for p, (a, b) in enumerate(zip(smc.outputs, van.outputs)):
            if a != b:
                return CheckResult(name, FAIL, f"party {p + 1} outputs {a} vs {b}")

    logger.info("correctness: %d codes, %s", len(smc.trace.spine[0]), state.detail)
    return CheckResult(name, PASS, f"{len(smc.trace.spine[0])} codes, {len(smc.psi)} ψ swaps")
