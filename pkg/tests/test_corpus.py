"""End-to-end checks over the shipped corpus"""

import os

import pytest

from data.input_loader import list_corpus, load_program_inputs
from evaluation.evaluator import CorpusEvaluator
from interp.smc2 import smc2_eval
from lang.parser import parse_file

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CORPUS = os.path.join(ROOT, "corpus")
INPUTS = os.path.join(CORPUS, "inputs")


@pytest.fixture(scope="module")
def suite_result():
    return CorpusEvaluator(CORPUS, INPUTS, axiom_length=0).evaluate_corpus()


def test_corpus_runs_without_faults(suite_result):
    assert suite_result.faults == []
    assert len(suite_result.results) == 5 * len(list_corpus(CORPUS))


def test_every_corpus_check_holds(suite_result):
    failed = [r.line() for r in suite_result.results if not r.passed]
    assert failed == []
    assert suite_result.exit_code == 0


def test_only_the_misaligned_program_is_skipped(suite_result):
    skipped = [r.name for r in suite_result.results if r.verdict == "SKIP"]
    assert skipped == ["oob_misaligned:correct"]
    assert suite_result.counts()["SKIP"] == 1


def test_paygap_outputs():
    """Test: averages of the historic and chunked salaries go to party 1."""
    path = os.path.join(CORPUS, "paygap.sc")
    result = smc2_eval(parse_file(path), load_program_inputs(path, 3, INPUTS), 7)
    assert result.outputs[0] == [("avgFemaleSalary", 60166), ("avgMaleSalary", 65666)]


@pytest.mark.parametrize("path", list_corpus(CORPUS), ids=os.path.basename)
def test_each_program_has_readable_inputs(path):
    inputs = load_program_inputs(path, 3, INPUTS)
    assert inputs.parties == 3
