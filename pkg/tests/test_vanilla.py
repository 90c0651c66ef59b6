"""Tests for the Vanilla C evaluator"""

import pytest

from lang.errors import DivisionByZero, DoubleFree, IndexOutOfParties, LoopBudgetExceeded, NotFreeable
from tests.helpers import party_inputs, run_erased, run_vanilla, value_of


def test_arithmetic_wraps_to_32_bits():
    result = run_vanilla("int x = 2147483647; x = x + 1; mcoutput(x, 1);")
    assert result.outputs[0] == [("x", -2147483648)]
    assert result.outputs[1] == []


def test_integer_division_truncates():
    result = run_vanilla("int a = -7; int b = 2; int c; c = a / b;")
    assert value_of(result, "c") == -3
    with pytest.raises(DivisionByZero):
        run_vanilla("int a = 1; int b = 0; a = a / b;")


def test_float_values():
    result = run_vanilla("float f = 1.5; f = f * 2;")
    assert value_of(result, "f") == 3.0


def test_input_and_output():
    """Test: mcinput reads the named record of the given party."""
    result = run_vanilla("int x; mcinput(x, 2); x = x * 2; mcoutput(x, 3);",
                         party_inputs({2: {"x": 21}}))
    assert result.outputs[2] == [("x", 42)]
    with pytest.raises(IndexOutOfParties):
        run_vanilla("int x = 1; mcoutput(x, 4);")


def test_pointer_write_codes():
    """Test: exact code sequence of a declaration, an address-of and a write through a pointer."""
    result = run_vanilla("int x = 4; int *p = &x; *p = 7;")
    assert result.trace.codes[0] == ["d", "w", "dp", "loc", "wp", "ss", "rp", "wdp", "ss"]
    assert value_of(result, "x") == 7
    assert result.trace.codes[0] == result.trace.codes[2]


def test_pointer_arithmetic_over_an_array():
    result = run_vanilla("int a[3] = {1, 2, 3}; int *p = a; int x; p = p + 2; x = *p;")
    assert value_of(result, "x") == 3
    assert value_of(result, "a") == [1, 2, 3]


def test_malloc_free_and_double_free():
    result = run_vanilla("int *p; int x; p = malloc(sizeof(int)); *p = 3; x = *p; free(p);")
    assert value_of(result, "x") == 3
    assert "mal" in result.trace.codes[0] and "fre" in result.trace.codes[0]
    with pytest.raises(DoubleFree):
        run_vanilla("int *p; p = malloc(4); free(p); free(p);")
    with pytest.raises(NotFreeable):
        run_vanilla("int x; int *p = &x; free(p);")


def test_while_codes():
    result = run_vanilla("int i = 0; while (i < 2) { i = i + 1; }")
    body = ["r", "ltt", "r", "bp", "w", "sb", "wlc"]
    assert result.trace.codes[0] == ["d", "w"] + body + body + ["r", "ltf", "wle", "ss"]
    assert value_of(result, "i") == 2


def test_loop_budget():
    with pytest.raises(LoopBudgetExceeded):
        run_vanilla("int i = 0; while (i < 100) { ++i; }", loop_budget=10)


def test_out_of_bounds_read_into_a_matching_block():
    """Test: a[2] lands on the next int block and stays well aligned."""
    result = run_vanilla("int a[2] = {1, 2}; int b = 9; int x; x = a[2];")
    assert value_of(result, "x") == 9
    assert "rao" in result.trace.codes[0]
    assert result.aligned


def test_out_of_bounds_read_into_a_pointer_block_is_flagged():
    result = run_vanilla("int a[2] = {1, 2}; int *p; int x; x = a[2];")
    assert not result.aligned
    assert result.flags == ["read a[2]"]


def test_erased_private_computation_emits_multiparty_codes():
    """Test: erasure markers turn into mpcmpt/mpiet/mpb codes."""
    source = ("private int a = 3; private int b = 5; private int c;"
              "if (a < b) { c = 1; } else { c = 2; }"
              "c = c + a * b;")
    result = run_erased(source)
    codes = result.trace.codes[0]
    assert "mpcmpt" in codes and "mpiet" in codes and "mpb" in codes
    assert "iet" not in codes
    assert value_of(result, "c") == 16
    # The branch body is hidden from the spine
    spine = result.trace.spine[0]
    assert spine.index("mpiet") == spine.index("mpcmpt") + 1


def test_erased_branch_records_acc():
    result = run_erased("private int a = 3; private int c; if (a == 3) { c = 1; }")
    assert result.trace.accs[0] == [1, 0]
    assert "mpief" not in result.trace.codes[0]
