"""Tests for program and memory erasure"""

import glob
import os

from data.input_loader import load_program_inputs
from erasure.erase import erase_program
from erasure.memory import erase_memory
from interp.smc2 import smc2_eval
from lang import ast
from lang.parser import parse, parse_file
from lang.printer import pretty
from lang.types import Base, BaseType, Ptr
from memory.values import Location

INT = Base(None, BaseType.INT)


def test_erased_text():
    """Test: labels vanish, everything else prints unchanged."""
    program = parse("private int a = 1; public int b; b = 2; private int c; c = a * 2; if (a < c) c = 1;")
    assert pretty(erase_program(program)) == (
        "int a = 1;\n"
        "int b;\n"
        "b = 2;\n"
        "int c;\n"
        "c = a * 2;\n"
        "if (a < c)\n"
        "    c = 1;\n"
    )


def test_multiparty_markers():
    erased = erase_program(parse("private int a = 1, c; public int n = 1;"
                                 "c = a * 2; n = n + 1;"
                                 "if (a < c) { c = 1; }"
                                 "if (n < 2) { n = 3; }"))
    stmts = erased.stmts
    assert stmts[3].value.multiparty
    assert not stmts[4].value.multiparty
    assert stmts[5].multiparty and stmts[5].cond.multiparty
    assert not stmts[6].multiparty


def test_private_index_and_pointer_arithmetic_markers():
    erased = erase_program(parse("private int arr[2]; private int i; private int *p = arr;"
                                 "arr[i] = 1; p = p + 1;"))
    assert erased.stmts[3].target.multiparty
    assert not erased.stmts[4].value.multiparty


def test_private_allocation_erases_to_malloc():
    erased = erase_program(parse("private int *p = pmalloc(3, private int); pfree(p); smcinput(p, 1);"))
    assert erased.stmts[0].ty == Ptr(None, BaseType.INT, 1)
    assert erased.stmts[0].init == ast.Malloc(ast.BinOp("*", ast.Sizeof(INT), ast.Num(3)))
    assert erased.stmts[1].expr == ast.Free(ast.Var("p"))
    assert erased.stmts[2].expr == ast.McInput(ast.Var("p"), ast.Num(1))


def test_erased_corpus_is_vanilla_c(corpus_dir):
    """Test: no SMC² keyword survives and the text parses as Vanilla C."""
    for path in sorted(glob.glob(os.path.join(corpus_dir, "*.sc"))):
        text = pretty(erase_program(parse_file(path)))
        for word in ("private", "public", "pmalloc", "pfree", "smcinput", "smcoutput"):
            assert word not in text, (path, word)
        assert pretty(parse(text, vanilla=True)) == text


def test_erase_memory_follows_the_true_location(corpus_dir, input_dir):
    """Test: p ends with two locations; the erased block points to a."""
    path = os.path.join(corpus_dir, "simple_pointer.sc")
    result = smc2_eval(parse_file(path), load_program_inputs(path, 3, input_dir), 7)
    report = erase_memory(result)
    assert report.blocks[5].target == Location(1, 0)
    assert report.blocks[5].indirection == 1
    assert report.blocks[1].ty == INT
    assert report.blocks[1].data == (5).to_bytes(4, "little", signed=True)
    assert report.env["p"] == (Location(5, 0), Ptr(None, BaseType.INT, 1))
    assert 0 in report.blocks


def test_erase_memory_of_freed_private_block():
    result = smc2_eval(parse("private int *p = pmalloc(2, private int); pfree(p);"), None, 7)
    report = erase_memory(result)
    block = report.blocks[2]
    assert block.freed
    assert block.ty == Base(None, BaseType.VOID)
    assert block.count == 8
    assert block.data is None


def test_pointer_offsets_rescale_to_public_sizes():
    """Test: two private ints in (offset 32) erase to two public ints in (offset 8)."""
    result = smc2_eval(parse("private int arr[3]; private int *p = arr; p = p + 2;"), None, 7)
    assert result.memories[0].read_ptr(Location(3, 0)).locs == (Location(2, 32),)
    assert erase_memory(result).blocks[3].target == Location(2, 8)
