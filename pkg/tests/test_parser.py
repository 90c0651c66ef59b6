"""Tests for the lexer, parser and pretty-printer"""

import glob
import os

import pytest

from lang import ast
from lang.errors import SmcSyntaxError, UnsupportedConstruct
from lang.lexer import tokenize
from lang.parser import parse, parse_file
from lang.printer import pretty
from lang.types import Base, BaseType, PrivacyLabel, Ptr

PRIVATE_INT = Base(PrivacyLabel.PRIVATE, BaseType.INT)
PUBLIC_INT = Base(PrivacyLabel.PUBLIC, BaseType.INT)


def value_of_assign(text):
    return parse(f"x = {text};").stmts[0].value


def test_tokens():
    """Test: names, operators and float literals."""
    assert [t.typ for t in tokenize("x = 1.5;")] == ["name", "=", "fnum", ";", "eof"]
    assert [t.typ for t in tokenize("++i; a == b")] == ["++", "name", ";", "name", "==", "name", "eof"]


def test_comments_are_skipped_and_lines_tracked():
    """Test: line and block comments vanish; positions follow the newlines inside them."""
    program = parse("// header\n/* two\nlines */ private int x;")
    assert program.stmts == [ast.Decl(PRIVATE_INT, "x")]
    assert program.stmts[0].pos[0] == 3


def test_declaration_list_splits():
    """Test: one Decl per declarator, sharing the label and base type."""
    program = parse("private int a = 1, b, c[2] = {3, 4};")
    assert program.stmts == [
        ast.Decl(PRIVATE_INT, "a", None, ast.Num(1)),
        ast.Decl(PRIVATE_INT, "b"),
        ast.Decl(PRIVATE_INT, "c", ast.Num(2), [ast.Num(3), ast.Num(4)]),
    ]


def test_unlabeled_types_default():
    """Test: unlabeled int/float are private, void is public."""
    program = parse("int x; float *p; void f();")
    assert program.stmts[0].ty == PRIVATE_INT
    assert program.stmts[1].ty == Ptr(PrivacyLabel.PRIVATE, BaseType.FLOAT, 1)
    assert program.stmts[2].ret == Base(PrivacyLabel.PUBLIC, BaseType.VOID)


def test_vanilla_types_stay_unlabeled():
    """Test: vanilla=True keeps labels None."""
    program = parse("int x; int **p;", vanilla=True)
    assert program.stmts[0].ty == Base(None, BaseType.INT)
    assert program.stmts[1].ty == Ptr(None, BaseType.INT, 2)


def test_precedence():
    """Test: == below < below + - below * /."""
    e = value_of_assign("a + b * c == d")
    assert e == ast.BinOp("==", ast.BinOp("+", ast.Var("a"), ast.BinOp("*", ast.Var("b"), ast.Var("c"))),
                          ast.Var("d"))
    e = value_of_assign("a - b - c")
    assert e == ast.BinOp("-", ast.BinOp("-", ast.Var("a"), ast.Var("b")), ast.Var("c"))


def test_negative_literal():
    assert value_of_assign("-5") == ast.Num(-5)
    assert value_of_assign("a - 5") == ast.BinOp("-", ast.Var("a"), ast.Num(5))


@pytest.mark.parametrize("text,expected", [
    ("(2 - a) * 3", ast.BinOp("*", ast.BinOp("-", ast.Num(2), ast.Var("a")), ast.Num(3))),
    ("(1 + 2) * 3", ast.BinOp("*", ast.BinOp("+", ast.Num(1), ast.Num(2)), ast.Num(3))),
    ("(1.5)", ast.Num(1.5)),
])
def test_parenthesized_literal_is_not_a_cast(text, expected):
    assert value_of_assign(text) == expected


def test_parenthesized_literal_round_trip():
    program = parse("public int x; x = (1 + 2) * 3; x = 4 - (2 - x);")
    text = pretty(program)
    assert "x = (1 + 2) * 3;" in text
    assert parse(text) == program


def test_unary_forms():
    """Test: dereference, address-of, pre-increment and cast."""
    assert value_of_assign("**p") == ast.Deref(ast.Deref(ast.Var("p")))
    assert value_of_assign("&a") == ast.AddrOf("a")
    assert parse("++i;").stmts[0] == ast.ExprStmt(ast.PreInc("i"))
    assert value_of_assign("(public float) n") == ast.Cast(Base(PrivacyLabel.PUBLIC, BaseType.FLOAT), ast.Var("n"))


def test_io_arity():
    """Test: (var, party) for scalars, (var, length, party) for arrays."""
    scalar = parse("smcinput(a, 1);").stmts[0].expr
    assert scalar == ast.SmcInput(ast.Var("a"), ast.Num(1))
    array = parse("smcoutput(v, 3, 2);").stmts[0].expr
    assert array == ast.SmcOutput(ast.Var("v"), ast.Num(2), ast.Num(3))
    with pytest.raises(SmcSyntaxError):
        parse("smcinput(a);")


def test_pmalloc_and_pfree():
    stmt = parse("p = pmalloc(n, private int);").stmts[0]
    assert stmt.value == ast.PMalloc(ast.Var("n"), PRIVATE_INT)
    assert parse("pfree(p);").stmts[0].expr == ast.PFree(ast.Var("p"))


def test_function_definition():
    fundef = parse("void f(private int v, public int *q) { v = 1; }").stmts[0]
    assert fundef.name == "f"
    assert [p.ty for p in fundef.params] == [PRIVATE_INT, Ptr(PrivacyLabel.PUBLIC, BaseType.INT, 1)]
    assert isinstance(fundef.body, ast.Block)
    prototype = parse("void g(void);").stmts[0]
    assert prototype.params == [] and prototype.body is None


@pytest.mark.parametrize("source", [
    "for (;;) {}",
    "return 1;",
    "private int a[2][3];",
    "const int x;",
    "x += 1;",
    "#include <stdio.h>",
    "if (a > b) x = 1;",
    "if (a) private int y = 1;",
    "struct s;",
])
def test_rejected_constructs(source):
    """Test: constructs outside the grammar raise UnsupportedConstruct."""
    with pytest.raises(UnsupportedConstruct):
        parse(source)


def test_syntax_error_has_position():
    with pytest.raises(SmcSyntaxError) as info:
        parse("public int x\nx = 1;")
    assert info.value.line == 2


def test_private_void_rejected():
    with pytest.raises(SmcSyntaxError):
        parse("private void x;")


@pytest.mark.parametrize("source", [
    "private int x;",
    "int *p = pmalloc(1, int);",
    "smcinput(x, 1);",
])
def test_vanilla_rejects_smc_constructs(source):
    with pytest.raises(UnsupportedConstruct):
        parse(source, vanilla=True)


def test_pretty_declarations_and_branches():
    program = parse("private int *p; public int a[2] = {1, -2}; if (a[0] < 1) { ++x; } else y = (x - 1) - (x - 2);")
    assert pretty(program) == (
        "private int* p;\n"
        "public int a[2] = {1, -2};\n"
        "if (a[0] < 1)\n"
        "{\n"
        "    ++x;\n"
        "}\n"
        "else\n"
        "    y = x - 1 - (x - 2);\n"
    )


def test_pretty_reparses_every_corpus_program(corpus_dir):
    """Test: parse(pretty(p)) == p over the shipped corpus."""
    paths = sorted(glob.glob(os.path.join(corpus_dir, "*.sc")))
    assert paths
    for path in paths:
        program = parse_file(path)
        assert parse(pretty(program)) == program, path
