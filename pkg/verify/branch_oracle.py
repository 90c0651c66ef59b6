"""Branch Oracle: Resolved Private Branches vs Running Only the Selected Branch"""

import logging

from erasure.memory import erase_memory
from interp.callbacks import EvaluationCallback
from interp.smc2 import smc2_eval
from memory.values import is_temp
from verify.report import FAIL, PASS, CheckResult

logger = logging.getLogger(__name__)


class BranchOracleCallback(EvaluationCallback):
    """
    Forks the run at every outermost private-conditioned if

    The fork executes only the branch the reconstructed guard selects, at
    acc 0; when the real run has resolved both branches the two erased
    memories must agree on every block that existed before the if.
    """

    def __init__(self):
        self.pending = []
        self.checked = 0
        self.mismatches = []

    def on_private_branch(self, interp, stmt, cond):
        if interp.acc > 0:
            self.pending.append(None)
            return
        existing = {b for b in interp.layout.blocks if not is_temp(b)}
        oracle = interp.fork()
        taken = interp.suite.open(cond) == 1
        branch = stmt.then if taken else stmt.orelse
        if branch is not None:
            oracle.eval_scoped(branch)
        self.pending.append((existing, oracle, taken))

    def on_private_branch_end(self, interp, stmt):
        entry = self.pending.pop()
        if entry is None:
            return
        existing, oracle, taken = entry
        self.checked += 1
        resolved = erase_memory(interp.result()).blocks
        expected = erase_memory(oracle.result()).blocks
        for block_id in sorted(existing):
            if resolved.get(block_id) != expected.get(block_id):
                where = getattr(stmt, "pos", None)
                self.mismatches.append(f"if at {where} ({'then' if taken else 'else'}): block {block_id}")
                logger.warning("branch oracle mismatch at block %d", block_id)
                return


def check_branch_oracle(program, inputs=None, seed=None, name="branch-oracle", **options) -> CheckResult:
    """
    Run a program with the branch oracle attached

    Args:
        program: labelled Program AST
        inputs: InputSet
        seed: protocol randomness seed
        options: further Smc2Interpreter arguments (e.g. tracking)

    Returns:
        CheckResult
    """
    oracle = BranchOracleCallback()
    callbacks = list(options.pop("callbacks", None) or []) + [oracle]
    smc2_eval(program, inputs, seed, callbacks=callbacks, **options)
    if oracle.mismatches:
        return CheckResult(name, FAIL, "; ".join(oracle.mismatches))
    return CheckResult(name, PASS, f"{oracle.checked} private branch(es) agree")
