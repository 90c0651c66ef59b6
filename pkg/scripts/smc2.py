"""SMC² Interpreter Command Line"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import argparse
import logging
from dataclasses import dataclass, field
from typing import List, Optional

from config.field_config import FieldConfig
from config.interpreter_config import config as interpreter_config
from data.input_loader import InputSet, load_program_inputs, output_lines, write_outputs
from erasure.erase import erase_program
from evaluation.evaluator import CorpusEvaluator
from evaluation.metrics import format_table, round_report
from interp.callbacks import JsonlTraceCallback
from interp.smc2 import smc2_eval
from interp.vanilla import van_eval
from lang.errors import ConfigError, Smc2Error
from lang.parser import parse_file
from lang.printer import pretty
from mpc.field import FieldParams
from verify.correctness import check_correctness
from verify.noninterference import check_noninterference
from verify.report import EXIT_FAULT, EXIT_OK, EXIT_PROPERTY, EXIT_USAGE


@dataclass
class RunSpec:
    """Everything one invocation needs, validated"""

    subcommand: str
    program: Optional[str] = None
    parties: int = FieldConfig.parties
    threshold: int = FieldConfig.threshold
    prime: int = FieldConfig.prime
    seed: int = FieldConfig.seed
    inputs: List[str] = field(default_factory=list)
    alt_inputs: List[str] = field(default_factory=list)
    tracking: str = interpreter_config.tracking
    backend: str = interpreter_config.backend
    legacy_per_statement: bool = False
    count_rounds: bool = False
    trace_dir: Optional[str] = None
    output_dir: Optional[str] = None
    log_dir: Optional[str] = None
    corpus_dir: Optional[str] = None
    input_dir: Optional[str] = None
    axiom_length: Optional[int] = None

    @classmethod
    def from_args(cls, args):
        field_config = FieldConfig.from_env()
        env_seed = os.environ.get(FieldConfig.seed_env_var, "").strip()
        seed = field_config.seed if env_seed or args.seed is None else args.seed
        parties = args.parties or field_config.parties
        threshold = args.threshold if args.threshold is not None else min(field_config.threshold, (parties - 1) // 2)
        spec = cls(
            subcommand=args.command,
            program=getattr(args, "program", None),
            parties=parties,
            threshold=threshold,
            prime=args.prime or field_config.prime,
            seed=seed,
            inputs=list(args.inputs or []),
            alt_inputs=list(getattr(args, "alt_inputs", None) or []),
            tracking=args.tracking,
            backend=args.backend,
            legacy_per_statement=args.legacy_per_statement,
            count_rounds=args.count_rounds,
            trace_dir=args.trace_dir,
            output_dir=args.output_dir,
            log_dir=args.log_dir,
            corpus_dir=getattr(args, "corpus_dir", None),
            input_dir=args.input_dir or interpreter_config.input_dir,
            axiom_length=getattr(args, "axiom_length", None),
        )
        spec.validate()
        return spec

    def validate(self):
        if self.subcommand != "check-all" and not self.program:
            raise ConfigError(f"{self.subcommand} needs a program")
        if self.tracking not in interpreter_config.tracking_choices:
            raise ConfigError(f"unknown tracking scheme {self.tracking!r}")
        if self.inputs and len(self.inputs) != self.parties:
            raise ConfigError(f"{len(self.inputs)} input files for {self.parties} parties")
        if self.alt_inputs and len(self.alt_inputs) != self.parties:
            raise ConfigError(f"{len(self.alt_inputs)} alternate input files for {self.parties} parties")
        if self.subcommand == "check-ni" and not self.alt_inputs:
            raise ConfigError("check-ni needs --alt-inputs")
        FieldParams(self.prime, self.parties, self.threshold)  # t < q/2, q >= 1, p >= 3

    @property
    def params(self):
        return FieldParams(self.prime, self.parties, self.threshold)

    def input_set(self):
        if self.inputs:
            return InputSet.from_files(self.inputs)
        return load_program_inputs(self.program, self.parties, self.input_dir)

    def options(self):
        """Smc2Interpreter keyword arguments."""
        return {"params": self.params, "tracking": self.tracking, "backend": self.backend,
                "legacy_per_statement": self.legacy_per_statement}


class UsageParser(argparse.ArgumentParser):
    """Usage errors exit with 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = UsageParser(prog="smc2", description="SMC² reference interpreter")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=UsageParser)

    common = UsageParser(add_help=False)
    common.add_argument("--parties", type=int, default=None, help="number of parties q")
    common.add_argument("--threshold", type=int, default=None, help="collusion threshold t < q/2")
    common.add_argument("--prime", type=int, default=None, help="field prime p")
    common.add_argument("--seed", type=int, default=None, help=f"randomness seed ({FieldConfig.seed_env_var} overrides)")
    common.add_argument("--inputs", nargs="+", default=None, help="one input file per party")
    common.add_argument("--input-dir", default=None, help="where <stem>.party<k>.txt files are looked up")
    common.add_argument("--tracking", default=interpreter_config.tracking,
                        choices=interpreter_config.tracking_choices)
    common.add_argument("--backend", default=interpreter_config.backend, choices=interpreter_config.backend_choices)
    common.add_argument("--legacy-per-statement", action="store_true",
                        help="resolve every assignment of a private branch on the spot")
    common.add_argument("--count-rounds", action="store_true", help="print the round report")
    common.add_argument("--trace-dir", default=None, help="write trace.d, trace.l and psi.json here")
    common.add_argument("--output-dir", default=None, help="write out.party<k>.txt here")
    common.add_argument("--log-dir", default=None, help="write a JSONL run log here")

    for name in ("run", "run-vanilla", "erase", "check-correct"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("program")
    p = sub.add_parser("check-ni", parents=[common])
    p.add_argument("program")
    p.add_argument("--alt-inputs", nargs="+", required=True, help="second input set, one file per party")
    p = sub.add_parser("check-all", parents=[common])
    p.add_argument("--corpus-dir", default=interpreter_config.corpus_dir)
    p.add_argument("--axiom-length", type=int, default=None, help="mux axioms up to this length (0 skips)")
    return parser


def print_outputs(outputs):
    for k, records in enumerate(outputs, 1):
        for line in output_lines(records):
            print(f"  party {k}: {line}")


def command_run(spec):
    print("=" * 60)
    print(f"SMC² run: {spec.program}")
    print("=" * 60)
    program = parse_file(spec.program)
    callbacks = [JsonlTraceCallback(spec.log_dir)] if spec.log_dir else []
    result = smc2_eval(program, spec.input_set(), spec.seed, callbacks=callbacks, **spec.options())
    print(f"✓ {len(result.trace)} rules, {len(result.psi)} ψ swaps")
    print_outputs(result.outputs)
    finish_run(spec, result)
    if spec.count_rounds:
        print("\nRound report")
        for line in format_table({"count": round_report(result)}):
            print(f"  {line}")
    return EXIT_OK


def command_run_vanilla(spec):
    print("=" * 60)
    print(f"Vanilla C run: {spec.program}")
    print("=" * 60)
    erased = erase_program(parse_file(spec.program))
    result = van_eval(erased, spec.input_set(), parties=spec.parties)
    print(f"✓ {len(result.trace)} rules")
    print_outputs(result.outputs)
    finish_run(spec, result)
    return EXIT_OK


def finish_run(spec, result):
    if spec.trace_dir:
        result.trace.write(spec.trace_dir)
        result.psi.write(spec.trace_dir)
        for k, memory in enumerate(result.memories, 1):
            with open(os.path.join(spec.trace_dir, f"memory.party{k}.txt"), "w", encoding="utf-8") as f:
                f.write("\n".join(memory.dump()) + "\n")
        print(f"✓ Traces written: {spec.trace_dir}")
    output_dir = spec.output_dir or interpreter_config.output_dir
    paths = write_outputs(result.outputs, output_dir, interpreter_config.output_pattern)
    print(f"✓ Outputs written: {', '.join(paths)}")


def command_erase(spec):
    print(pretty(erase_program(parse_file(spec.program))))
    return EXIT_OK


def command_check_correct(spec):
    result = check_correctness(parse_file(spec.program), spec.input_set(), spec.seed, **spec.options())
    print(result.line())
    return EXIT_OK if result.passed else EXIT_PROPERTY


def command_check_ni(spec):
    program = parse_file(spec.program)
    report = check_noninterference(program, spec.input_set(), InputSet.from_files(spec.alt_inputs),
                                   spec.seed, **spec.options())
    print(report.to_check().line())
    return EXIT_OK if report.passed else EXIT_PROPERTY


def command_check_all(spec):
    print("=" * 60)
    print(f"Corpus checks: {spec.corpus_dir}")
    print("=" * 60)
    options = {"params": spec.params, "tracking": spec.tracking, "backend": spec.backend}
    evaluator = CorpusEvaluator(spec.corpus_dir, spec.input_dir, spec.parties, spec.seed,
                                axiom_length=spec.axiom_length, options=options)
    suite = evaluator.evaluate_corpus()
    for result in suite.results:
        print(result.line())
    for fault in suite.faults:
        print(f"✗ {fault}")
    counts = suite.counts()
    print("\n" + "=" * 60)
    print(f"PASS {counts['PASS']}  FAIL {counts['FAIL']}  SKIP {counts['SKIP']}  FAULT {len(suite.faults)}")
    print("=" * 60)
    return suite.exit_code


HANDLERS = {
    "run": command_run,
    "run-vanilla": command_run_vanilla,
    "erase": command_erase,
    "check-correct": command_check_correct,
    "check-ni": command_check_ni,
    "check-all": command_check_all,
}


def main(argv=None) -> int:
    """
    Parse arguments and dispatch

    Returns:
        0 pass, 1 property failure, 2 runtime fault, 64 usage error
    """
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        spec = RunSpec.from_args(args)
    except ConfigError as e:
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return HANDLERS[spec.subcommand](spec)
    except ConfigError as e:
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_USAGE
    except Smc2Error as e:
        print(f"✗ {e}")
        return EXIT_FAULT
    except OSError as e:
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
