"""Tests for label inference, side-effect analysis and function summaries"""

import pytest

from lang.errors import UnboundVariable
from lang.labels import TypeEnv, has_public_side_effects, label_of, summarize_function
from lang.parser import parse
from lang.types import Base, BaseType, ConstArrPtr, PrivacyLabel, Ptr

PRIVATE = PrivacyLabel.PRIVATE
PUBLIC = PrivacyLabel.PUBLIC


@pytest.fixture
def env():
    types = TypeEnv()
    types.declare("s", Base(PRIVATE, BaseType.INT))
    types.declare("t", Base(PRIVATE, BaseType.INT))
    types.declare("n", Base(PUBLIC, BaseType.INT))
    types.declare("sp", Ptr(PRIVATE, BaseType.INT, 1))
    types.declare("np", Ptr(PUBLIC, BaseType.INT, 1))
    types.declare("parr", ConstArrPtr(PRIVATE, BaseType.INT))
    types.declare("narr", ConstArrPtr(PUBLIC, BaseType.INT))
    return types


def expr(text):
    return parse(f"x = {text};").stmts[0].value


def stmt(text):
    return parse(text).stmts[0]


@pytest.mark.parametrize("text,label", [
    ("1", PUBLIC),
    ("n + 1", PUBLIC),
    ("s + 1", PRIVATE),
    ("n < s", PRIVATE),
    ("narr[n]", PUBLIC),
    ("narr[s]", PRIVATE),
    ("parr[n]", PRIVATE),
    ("*sp", PRIVATE),
    ("*np", PUBLIC),
    ("&s", PUBLIC),
    ("(public float) n", PUBLIC),
    ("sizeof(private int)", PUBLIC),
])
def test_label_of(env, text, label):
    assert label_of(expr(text), env) == label


def test_label_of_unbound_name(env):
    with pytest.raises(UnboundVariable):
        label_of(expr("missing + 1"), env)


@pytest.mark.parametrize("text,effect", [
    ("n = 1;", True),
    ("s = n;", False),
    ("narr[0] = 1;", True),
    ("parr[s] = 1;", False),
    ("*np = 1;", True),
    ("*sp = 1;", False),
    ("++n;", True),
    ("++s;", False),
    ("smcoutput(s, 1);", True),
    ("pfree(sp);", True),
    ("{ private int z; z = s; }", False),
    ("{ public int z = 1; }", True),
    ("if (s < t) { s = 1; } else { n = 2; }", True),
])
def test_has_public_side_effects(env, text, effect):
    assert has_public_side_effects(stmt(text), env) is effect


def test_side_effect_analysis_does_not_leak_locals(env):
    has_public_side_effects(stmt("{ public int z = 1; }"), env)
    assert not env.has("z")


def test_summary_of_private_accumulator(env):
    fundef = stmt("void f(private int v) { private int local; local = v; s = s + v; }")
    summary = summarize_function(fundef, env)
    assert summary.globals_written == ["s"]
    assert not summary.public_side_effects
    assert not summary.location_writes


def test_summary_flags_public_writes_and_location_writes(env):
    summary = summarize_function(stmt("void g() { n = 1; }"), env)
    assert summary.public_side_effects
    assert summary.globals_written == ["n"]
    summary = summarize_function(stmt("void h(private int v) { *sp = v; }"), env)
    assert summary.location_writes
    assert not summary.public_side_effects


def test_summary_includes_callees(env):
    inner = stmt("void inner() { t = 1; *sp = 2; }")
    env.declare("inner", None, summarize_function(inner, env))
    outer = summarize_function(stmt("void outer() { inner(); }"), env)
    assert outer.globals_written == ["t"]
    assert outer.location_writes


def test_summary_lists_arrays_written_at_a_private_index(env):
    summary = summarize_function(stmt("void put(private int i) { parr[i] = 9; }"), env)
    assert summary.globals_written == ["parr"]
    assert not summary.location_writes
    summary = summarize_function(stmt("void put(public int i) { parr[i] = 9; }"), env)
    assert summary.globals_written == []
    assert summary.location_writes


def test_summary_respects_block_scopes(env):
    """Test: a shadowing declaration hides the global only inside its own block."""
    summary = summarize_function(stmt("void f() { s = 7; { private int s; s = 2; } }"), env)
    assert summary.globals_written == ["s"]
    summary = summarize_function(stmt("void f() { { private int s; s = 2; } t = s; }"), env)
    assert summary.globals_written == ["t"]


def test_type_env_scopes():
    types = TypeEnv()
    types.declare("x", Base(PUBLIC, BaseType.INT))
    types.push()
    types.declare("x", Base(PRIVATE, BaseType.INT))
    assert types.type_of("x").is_private
    types.pop()
    assert not types.type_of("x").is_private
    child = TypeEnv(parent=types)
    assert child.has("x") and not child.has("y")
    with pytest.raises(UnboundVariable):
        child.type_of("y")
