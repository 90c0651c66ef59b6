"""Vanilla C Evaluator for Erased Programs"""

import logging

from config.field_config import config as field_config
from interp.evaluator import Evaluator

logger = logging.getLogger(__name__)


class VanillaInterpreter(Evaluator):
    """
    Unlabeled C over q non-interacting parties

    Every party holds plaintext. Nodes that erasure marked as coming from
    private computation emit the multiparty codes (mpb, mpcmpt/mpcmpf, mpra,
    mpiet/mpief) so the trace lines up with the SMC² one.
    """

    vanilla = True

    def assert_acc_zero(self, what):
        """Erased programs carry no labels; nothing is restricted."""

    def index_code(self, e, code):
        return "mpra" if e.multiparty else code

    def arith_code(self, e):
        return "mpb" if e.multiparty else super().arith_code(e)

    def compare_code(self, e, holds):
        if e.multiparty:
            return "mpcmpt" if holds else "mpcmpf"
        return super().compare_code(e, holds)

    def eval_if(self, s):
        if not s.multiparty:
            super().eval_if(s)
            return
        taken = self.truth(self.eval_expr(s.cond))
        branch = s.then if taken else s.orelse
        # Locals of the branch land in temporary blocks, as on the SMC² side
        self.acc += 1
        self.trace.record_acc(self.acc)
        try:
            with self.trace.hidden_region():
                if branch is not None:
                    self.eval_scoped(branch)
        finally:
            self.acc -= 1
            self.trace.record_acc(self.acc)
        self.emit("mpiet" if taken else "mpief")


def van_eval(program, inputs=None, parties=None, **options):
    """
    Run an erased program

    Args:
        program: unlabeled Program AST (erasure markers honoured)
        inputs: InputSet for mcinput
        parties: q, defaults to the input set's or the field configuration's

    Returns:
        RunResult
    """
    if parties is None:
        parties = inputs.parties if inputs is not None else field_config.parties
    return VanillaInterpreter(parties=parties, inputs=inputs, **options).run(program)


def van_eval_expr(interp, e):
    """One expression against an existing configuration: (interp, value)."""
    return interp, interp.eval_expr(e)
