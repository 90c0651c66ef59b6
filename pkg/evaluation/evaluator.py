"""Corpus Evaluation: Every Property Check over Every Shipped Program"""

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List

from tqdm import tqdm

from config.interpreter_config import config as interpreter_config
from data.input_loader import alternate_variants, list_corpus, load_program_inputs
from interp.smc2 import smc2_eval
from lang.errors import Smc2Error
from lang.parser import parse_file
from verify.axioms import check_protocol_axioms
from verify.branch_oracle import check_branch_oracle
from verify.confluence import check_confluence
from verify.correctness import check_correctness
from verify.noninterference import check_noninterference, check_seed_independence
from verify.report import EXIT_FAULT, FAIL, PASS, CheckResult, exit_code

logger = logging.getLogger(__name__)


@dataclass
class SuiteResult:
    results: List[CheckResult] = field(default_factory=list)
    faults: List[str] = field(default_factory=list)

    @property
    def exit_code(self):
        return EXIT_FAULT if self.faults else exit_code(self.results)

    def counts(self) -> Dict[str, int]:
        counts = {"PASS": 0, "FAIL": 0, "SKIP": 0}
        for r in self.results:
            counts[r.verdict] += 1
        return counts


class CorpusEvaluator:
    """
    Runs correctness, noninterference, confluence and the branch oracle on
    every corpus program, plus the protocol axioms once

    Args:
        corpus_dir: directory of .sc programs
        input_dir: directory of party input files
        parties: q
        seed: seed of the correctness, confluence and oracle runs
        seeds: seeds of the noninterference reruns
        axiom_length: longest array checked by the mux axioms (0 skips them)
    """

    def __init__(self, corpus_dir=None, input_dir=None, parties=3, seed=None, seeds=None,
                 axiom_length=None, options=None):
        self.corpus_dir = corpus_dir or interpreter_config.corpus_dir
        self.input_dir = input_dir or interpreter_config.input_dir
        self.parties = parties
        self.seed = seed
        self.seeds = tuple(seeds or interpreter_config.seeds)
        self.axiom_length = interpreter_config.axiom_max_length if axiom_length is None else axiom_length
        self.options = dict(options or {})

    def evaluate_program(self, path) -> List[CheckResult]:
        """All checks on one program; runtime faults propagate."""
        stem = os.path.splitext(os.path.basename(path))[0]
        program = parse_file(path)
        inputs = load_program_inputs(path, self.parties, self.input_dir)
        results = [check_correctness(program, inputs, self.seed, name=f"{stem}:correct", **self.options)]

        others = [load_program_inputs(path, self.parties, self.input_dir, variant)
                  for variant in alternate_variants(path, self.input_dir)]
        ni_ok, runs, detail = True, 0, ""
        for other in others or [inputs]:
            for seed in self.seeds:
                report = check_noninterference(program, inputs, other, seed, **self.options)
                runs += 1
                if not report.passed:
                    ni_ok = False
                    detail = report.to_check().detail
                    break
        # D and L must not move with the protocol randomness either
        sets = [inputs, *others] if ni_ok else []
        for other in sets:
            report = check_seed_independence(program, other, self.seeds, **self.options)
            runs += max(len(self.seeds) - 1, 0)
            if not report.passed:
                ni_ok = False
                detail = report.to_check().detail
                break
        results.append(CheckResult(f"{stem}:ni", PASS if ni_ok else FAIL,
                                   detail or f"{runs} run pairs low-equivalent"))

        run = smc2_eval(program, inputs, self.seed, **self.options)
        results.append(check_confluence(run, name=f"{stem}:confluence"))
        for tracking in ("variable", "location"):
            options = dict(self.options, tracking=tracking)
            results.append(check_branch_oracle(program, inputs, self.seed, name=f"{stem}:oracle-{tracking}",
                                               **options))
        return results

    def evaluate_corpus(self) -> SuiteResult:
        suite = SuiteResult()
        programs = list_corpus(self.corpus_dir)
        print(f"Evaluating {len(programs)} corpus programs...")
        for path in tqdm(programs):
            try:
                suite.results.extend(self.evaluate_program(path))
            except Smc2Error as e:
                logger.error("%s: %s", path, e)
                suite.faults.append(f"{os.path.basename(path)}: {e}")
        if self.axiom_length > 0:
            report = check_protocol_axioms(seed=self.seed, max_length=self.axiom_length)
            suite.results.append(report.to_check())
        return suite
