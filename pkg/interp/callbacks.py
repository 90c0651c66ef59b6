"""Evaluation Callbacks for Structured Run Logs"""

import json
import os
from collections import Counter
from datetime import datetime


class EvaluationCallback:
    """Hooks called by the interpreters; every hook is optional"""

    def on_rule(self, code, acc):
        pass

    def on_protocol(self, kind, info):
        pass

    def on_private_branch(self, interp, stmt, cond):
        """Guard evaluated, before either branch runs; cond is the 0/1 share tuple."""

    def on_private_branch_end(self, interp, stmt):
        pass

    def on_run_end(self, result):
        pass


class JsonlTraceCallback(EvaluationCallback):
    """Protocol invocations and run summaries as JSON lines"""

    def __init__(self, log_dir="./logs", log_rules=False):
        self.log_dir = log_dir
        self.log_rules = log_rules
        os.makedirs(log_dir, exist_ok=True)

        # Log file
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        self.log_file = os.path.join(log_dir, f"run_log_{timestamp}.jsonl")

        self.step = 0
        self.protocols = []

    def _write(self, entry):
        entry["step"] = self.step
        entry["timestamp"] = datetime.now().isoformat()
        with open(self.log_file, "a") as f:
            f.write(json.dumps(entry) + "\n")

    def on_rule(self, code, acc):
        self.step += 1
        if self.log_rules:
            self._write({"event": "rule", "code": code, "acc": acc})

    def on_protocol(self, kind, info):
        self.protocols.append(kind)
        self._write({"event": "protocol", "kind": kind, **info})

    def on_run_end(self, result):
        """Summary next to the JSONL log"""
        summary = {
            "rules": self.step,
            "protocols": dict(Counter(self.protocols)),
            "rounds": result.rounds["rounds"],
            "outputs": {f"party{k + 1}": [f"{n} = {v}" for n, v in out] for k, out in enumerate(result.outputs)},
            "aligned": result.aligned,
        }
        self._write({"event": "run_end", **summary})

        summary_file = os.path.join(self.log_dir, "run_summary.json")
        with open(summary_file, "w") as f:
            json.dump(summary, f, indent=2)
