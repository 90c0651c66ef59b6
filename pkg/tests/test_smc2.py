"""Tests for the SMC² evaluator"""

import logging
import os

import pytest

from data.input_loader import load_program_inputs
from lang.errors import (
    DoubleFree, IndexOutOfParties, LabelFault, MissingInput, NotFreeable, ObliviousFault,
    PrivateLoopGuard, UnsupportedConstruct,
)
from lang.parser import parse, parse_file
from lang.types import PRIVATE_INT
from memory.values import Location, is_temp
from interp.smc2 import smc2_eval
from verify.branch_oracle import check_branch_oracle
from tests.helpers import party_inputs, pointer_tags, run_smc2, value_at, value_of


def test_private_arithmetic():
    result = run_smc2("private int a = 6, b = -4; private int c; c = a * b + a / b;")
    assert value_of(result, "c") == -25
    assert result.rounds["kinds"]["mult"] == 1
    assert result.rounds["kinds"]["div"] == 1
    assert "mpb" in result.trace.codes[0]


def test_parenthesized_expression_starting_with_a_literal():
    result = run_smc2("private int a = 1, c; c = (2 - a) * 3;")
    assert value_of(result, "c") == 3


def test_public_computation_spends_no_rounds():
    result = run_smc2("public int a = 2; a = a * 3;")
    assert value_of(result, "a") == 6
    assert result.rounds["rounds"] == 0


def test_one_multiplication_one_round():
    result = run_smc2("private int a = 2, b = 3, c; c = a * b;")
    assert result.rounds["rounds"] == 1


def test_private_floats():
    result = run_smc2("private float f = 1.5; private float g; g = f * 2;")
    assert value_of(result, "g") == 3.0


def test_declaration_codes():
    """Test: private scalars with public initializers emit d1 then w2."""
    result = run_smc2("private int a = 1; public int n = 2; private int b = a;")
    assert result.trace.codes[0] == ["d1", "w2", "d", "w", "ss", "d1", "r1", "w1", "ss"]


def test_inputs_and_outputs():
    source = ("private int x; private int v[3];"
              "smcinput(x, 1); smcinput(v, 3, 2);"
              "x = x + v[1];"
              "smcoutput(x, 1); smcoutput(v, 3, 3);")
    result = run_smc2(source, party_inputs({1: {"x": 5}, 2: {"v": [1, 2, 3]}}))
    assert result.outputs[0] == [("x", 7)]
    assert result.outputs[2] == [("v", [1, 2, 3])]
    assert result.rounds["kinds"]["open"] == 4
    codes = result.trace.codes[0]
    assert {"inp2", "inp3", "out2", "out3"} <= set(codes)


def test_input_errors():
    with pytest.raises(MissingInput):
        run_smc2("private int x; smcinput(x, 1);")
    with pytest.raises(IndexOutOfParties):
        run_smc2("private int x; smcinput(x, 5);", party_inputs({1: {"x": 1}}))


@pytest.mark.parametrize("source", [
    "private int s = 1; public int n; n = s;",
    "private int s = 1; public int n; n = (public int) s;",
    "private int s = 0; public int a[2]; a[s] = 1;",
    "private int *p; p = malloc(4);",
    "public int x; private int *p = &x;",
    "private int *p = pmalloc(1, private int); free(p);",
    "public int *q; pfree(q);",
])
def test_label_faults(source):
    """Test: private data never flows into public storage."""
    with pytest.raises(LabelFault):
        run_smc2(source)


def test_pfree_errors():
    with pytest.raises(DoubleFree):
        run_smc2("private int *p = pmalloc(1, private int); pfree(p); pfree(p);")
    with pytest.raises(NotFreeable):
        run_smc2("private int x; private int *p = &x; pfree(p);")


def test_private_loop_guard():
    with pytest.raises(PrivateLoopGuard):
        run_smc2("private int s = 1; while (s < 3) { s = s + 1; }")


def test_private_index_read_and_write():
    result = run_smc2("private int a[3] = {10, 20, 30}; private int i = 2; private int x;"
                      "x = a[i]; a[i] = 7;")
    assert value_of(result, "x") == 30
    assert value_of(result, "a") == [10, 20, 7]
    assert "mpra" in result.trace.codes[0] and "mpwa" in result.trace.codes[0]
    assert result.aligned


def test_private_index_into_public_array():
    result = run_smc2("public int b[2] = {4, 5}; private int i = 1; private int x; x = b[i];")
    assert value_of(result, "x") == 5


def test_private_index_out_of_range(caplog):
    """Test: the read yields 0, warns and marks the run as not aligned."""
    with caplog.at_level(logging.WARNING):
        result = run_smc2("private int a[2] = {1, 2}; private int i = 5; private int x; x = a[i];")
    assert value_of(result, "x") == 0
    assert not result.aligned
    assert "private read index out of range" in caplog.text


def test_pointer_gains_a_location_in_a_private_branch():
    """Test: reads and writes through a two-location pointer hit only the true location."""
    source = ("private int a = 1, b = 2, c = 5;"
              "private int *p = &a;"
              "if (c < 3) { p = &b; }"
              "private int x; x = *p; *p = 9;")
    result = run_smc2(source)
    p = value_of(result, "p")
    assert p.alpha == 2
    assert p.locs == (Location(2, 0), Location(1, 0))
    assert pointer_tags(result, "p") == [0, 1]
    assert value_of(result, "x") == 1
    assert value_of(result, "a") == 9
    assert value_of(result, "b") == 2
    assert "mprdp" in result.trace.codes[0] and "mpwdp" in result.trace.codes[0]


def test_single_location_private_pointer():
    result = run_smc2("private int a = 3; private int *p = &a; private int x; x = *p;")
    assert value_of(result, "x") == 3
    assert "rdp2" in result.trace.codes[0]


def test_pmalloc_and_pfree():
    result = run_smc2("private int *p = pmalloc(2, private int); *p = 4; pfree(p);")
    codes = result.trace.codes[0]
    assert "malp" in codes and "pfre" in codes
    block = value_of(result, "p").location.block
    assert result.memories[0].block(block).freed
    assert len(result.psi) == 0


def pfree_relocate(corpus_dir, input_dir, variant=None):
    path = os.path.join(corpus_dir, "pfree_relocate.sc")
    inputs = load_program_inputs(path, 3, input_dir, variant)
    return smc2_eval(parse_file(path), inputs, 7)


def test_pfree_relocate_when_location_zero_is_true(corpus_dir, input_dir):
    """Test: x < y, p == q; the freed block is the true one and ψ swaps nothing."""
    result = pfree_relocate(corpus_dir, input_dir)
    assert result.psi.swaps == [[6, 6]]
    assert value_of(result, "p").locs == (Location(5, 0),)
    assert value_of(result, "q").locs == (Location(5, 0),)
    assert result.memories[0].block(6).freed
    assert result.outputs[0] == [("x", 4), ("y", 9)]


def test_pfree_relocate_moves_data(corpus_dir, input_dir):
    """Test: p keeps block 5; the surviving data of block 6 moves into it."""
    result = pfree_relocate(corpus_dir, input_dir, "alt1")
    assert result.psi.swaps == [[6, 5]]
    assert result.psi.logical(5) == 6
    assert value_at(result, Location(5, 0), PRIVATE_INT) == 4
    assert result.memories[0].block(6).freed
    assert result.rounds["kinds"]["free"] == 1


def test_preincrement():
    result = run_smc2("private int s = 4; ++s; public int n = 1; ++n;")
    assert value_of(result, "s") == 5
    assert value_of(result, "n") == 2
    assert "pin3" in result.trace.codes[0] and "pin" in result.trace.codes[0]


def test_function_calls():
    result = run_smc2("private int total = 0; void add(private int v) { total = total + v; } add(3); add(4);")
    assert value_of(result, "total") == 7
    assert result.trace.codes[0].count("fc") == 2
    assert "fd" in result.trace.codes[0]


def test_function_called_in_a_private_branch():
    source = ("private int s = 1; private int total = 0;"
              "void add(private int v) { total = total + v; }"
              "if (s == 1) { add(5); } else { add(7); }")
    result = run_smc2(source)
    assert value_of(result, "total") == 5
    assert "fc1" in result.trace.codes[0]


ARRAY_CALL = ("private int v[2] = {{1, 2}}; private int c = {c}, d = {d}, k = 0;"
              "void put(private int i) {{ v[i] = 9; }}"
              "if (c < d) {{ put(k); }}")

SHADOW_CALL = ("private int g = 1, c = {c}, d = {d};"
               "void f() {{ g = 7; {{ private int g; g = 2; }} }}"
               "if (c < d) {{ f(); }}")


@pytest.mark.parametrize("tracking", ["auto", "variable", "location"])
@pytest.mark.parametrize("c,d,expected", [(5, 1, [1, 2]), (1, 5, [9, 2])])
def test_called_function_writing_at_a_private_index(tracking, c, d, expected):
    """Test: the array write of the branch not taken is undone."""
    result = run_smc2(ARRAY_CALL.format(c=c, d=d), tracking=tracking)
    assert value_of(result, "v") == expected


@pytest.mark.parametrize("tracking", ["auto", "variable", "location"])
@pytest.mark.parametrize("c,d,expected", [(5, 1, 1), (1, 5, 7)])
def test_called_function_writing_a_shadowed_global(tracking, c, d, expected):
    result = run_smc2(SHADOW_CALL.format(c=c, d=d), tracking=tracking)
    assert value_of(result, "g") == expected


@pytest.mark.parametrize("source", [ARRAY_CALL, SHADOW_CALL])
def test_called_functions_agree_with_the_branch_oracle(source):
    result = check_branch_oracle(parse(source.format(c=5, d=1)), None, 7)
    assert result.verdict == "PASS"


def test_nested_private_branches_record_acc():
    result = run_smc2("private int a = 1, b = 2, c; if (a < b) { if (b < a) { c = 1; } else { c = 2; } }")
    assert value_of(result, "c") == 2
    assert result.trace.accs[0] == [1, 2, 1, 0]


def test_private_if_spine():
    """Test: the branch bodies are hidden from the spine."""
    result = run_smc2("private int a = 3, b = 7, c = 0; if (a < b) { c = a; } else { c = b; }")
    assert result.trace.spine[0][-5:] == ["r1", "r1", "mpcmp", "iep", "ss"]
    assert value_of(result, "c") == 3


PRIVATE_LOOP = ("public int i = 0, n = {n}; private int a = 1, b = 9, c = 0;"
                "while (i < n) {{ if (a < b) {{ c = c + a; a = a + 2; }} else {{ c = c + b; }} ++i; }}")


def test_tracking_scaffolding_is_released():
    """Test: repeated private branches leave no temporary blocks behind."""
    once, six = (run_smc2(PRIVATE_LOOP.format(n=n)) for n in (1, 6))
    assert sorted(once.memories[0].blocks) == sorted(six.memories[0].blocks)
    assert not any(is_temp(b) for b in six.memories[0].blocks)
    assert value_of(six, "c") == 34
    assert value_of(six, "a") == 9


BRANCH_SOURCE = ("private int a = 5, c = 0;"
                 "if (a < 3) { c = 1; } else { c = 2; }")


def test_per_statement_resolution_matches():
    """Test: legacy mode gives the same result at a higher resolution cost."""
    batched = run_smc2(BRANCH_SOURCE)
    legacy = run_smc2(BRANCH_SOURCE, legacy_per_statement=True)
    assert value_of(batched, "c") == value_of(legacy, "c") == 2
    assert batched.rounds["kinds"]["resolve"] == 1
    assert legacy.rounds["kinds"]["resolve"] == 2
    assert legacy.trace.codes[0][-2:] == ["iep", "ss"]


def test_per_statement_resolution_of_nested_branches():
    source = "private int a = 1, b = 2, c = 0; if (a < b) { if (b < a) { c = 1; } else { c = 2; } }"
    assert value_of(run_smc2(source, legacy_per_statement=True), "c") == 2


@pytest.mark.parametrize("source", [
    "private int a = 1; private int b[2]; if (a < 2) { b[0] = 1; }",
    "private int a = 1, c; public int n = 1; if (a < 2) { if (n == 1) { c = 1; } }",
])
def test_per_statement_resolution_rejects(source):
    with pytest.raises(UnsupportedConstruct):
        run_smc2(source, legacy_per_statement=True)


POINTER_BRANCH = ("private int a = 1, b = 2;"
                  "private int *p = &a;"
                  "if (a < b) { *p = 5; } else { b = 7; }")


@pytest.mark.parametrize("tracking", ["auto", "location"])
def test_tracking_schemes_agree(tracking):
    result = run_smc2(POINTER_BRANCH, tracking=tracking)
    assert value_of(result, "a") == 5
    assert value_of(result, "b") == 2
    assert "iepd" in result.trace.codes[0]


def test_location_tracking_for_plain_variables():
    result = run_smc2(BRANCH_SOURCE, tracking="location")
    assert value_of(result, "c") == 2
    assert "iepd" in result.trace.codes[0]


def test_variable_tracking_falls_back(caplog):
    with caplog.at_level(logging.WARNING):
        result = run_smc2(POINTER_BRANCH, tracking="variable")
    assert "using location tracking" in caplog.text
    assert value_of(result, "a") == 5


PRELUDE = ("public int x = 0, pa[2] = {0, 0};"
           "public int *pp = &x;"
           "public void *q = malloc(4);"
           "private int s = 1, t = 2;"
           "private int *r = pmalloc(1, private int);"
           "void bump() { x = x + 1; }")

PUBLIC_EFFECTS = [
    "x = 1;",
    "pa[0] = 1;",
    "malloc(4);",
    "free(q);",
    "smcoutput(s, 1);",
    "smcinput(s, 1);",
    "++x;",
    "*pp = 3;",
    "pmalloc(1, private int);",
    "pfree(r);",
    "bump();",
    "public int z = 1;",
]


@pytest.mark.parametrize("stmt", PUBLIC_EFFECTS)
def test_public_side_effect_in_private_branch(stmt):
    """Test: every public side effect faults under a private condition."""
    with pytest.raises(ObliviousFault):
        run_smc2(PRELUDE + "if (s < t) {" + stmt + "}", party_inputs({1: {"s": 5}}))


@pytest.mark.parametrize("stmt", PUBLIC_EFFECTS)
def test_public_side_effect_outside_branch(stmt):
    run_smc2(PRELUDE + "{" + stmt + "}", party_inputs({1: {"s": 5}}))


def test_seed_fixes_the_shares():
    program = parse("private int a = 2, b = 3, c; c = a * b;")
    first = smc2_eval(program, None, 5)
    second = smc2_eval(program, None, 5)
    assert [bytes(m.block(3).data) for m in first.memories] == [bytes(m.block(3).data) for m in second.memories]
