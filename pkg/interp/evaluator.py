"""Shared Big-Step Evaluator Core for the Lockstep Party Simulation"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from config.interpreter_config import config as interpreter_config
from data.input_loader import InputSet
from interp.trace import PsiMap, Trace
from lang import ast
from lang.errors import (
    AddressBeyondMemory, DivisionByZero, IndexOutOfParties, LabelFault, LoopBudgetExceeded,
    MissingInput, NotFreeable, ObliviousFault, PrivateLoopGuard, ShapeMismatch, TypeFault,
    UnboundVariable, UnsupportedConstruct,
)
from lang.labels import summarize_function
from lang.parser import function_type
from lang.types import (
    Base, BaseType, ConstArrPtr, Fun, PrivacyLabel, Ptr, element_type, pointer_to,
)
from memory.codec import c_div, encode_ptr, to_float32, to_int32
from memory.env import Env
from memory.sizes import SizeModel
from memory.store import Memory
from memory.values import L_DEFAULT, FunctionPayload, Location, PointerData

logger = logging.getLogger(__name__)

ARITHMETIC = ("+", "-", "*", "/")
COMPARISONS = ("<", "==", "!=")
ARITH_CODES = {"+": "bp", "-": "bs", "*": "bm", "/": "bd"}
CMP_CODES = {"<": ("ltt", "ltf"), "==": ("eqt", "eqf"), "!=": ("net", "nef")}


@dataclass(frozen=True)
class Value:
    """
    Result of evaluating an expression in all parties at once

    `parts[k]` is party k+1's view: the plaintext for public values, its
    share for private scalars, its PointerData for pointers. `ty` is None for
    skip (the value of a procedure call).
    """

    ty: Any
    parts: tuple

    @property
    def is_skip(self):
        return self.ty is None

    @property
    def is_private(self):
        return self.ty is not None and self.ty.is_private

    @property
    def is_pointer(self):
        return isinstance(self.ty, Ptr)


@dataclass
class RunResult:
    """Final state of a run over all parties."""

    memories: List[Memory]
    env: Env
    trace: Trace
    psi: PsiMap
    outputs: List[list]
    rounds: Dict[str, Any]
    flags: List[str] = field(default_factory=list)
    suite: Any = None
    parties: int = 3
    sizes: Optional[SizeModel] = None

    @property
    def aligned(self):
        """No non-well-aligned access happened."""
        return not self.flags


class Evaluator:
    """
    Public rules shared by the Vanilla C and SMC² interpreters

    The q parties run in lockstep: every rule is applied once and its effect
    is carried into each party's memory; codes and accessed locations are
    appended to every party's trace.

    Args:
        parties: number of simulated parties q
        sizes: SizeModel
        inputs: InputSet
        loop_budget: while-loop iteration bound per run
        callbacks: EvaluationCallback objects
    """

    vanilla = False

    def __init__(self, parties=3, sizes=None, inputs=None, loop_budget=None, callbacks=None):
        self.q = parties
        self.sizes = sizes or SizeModel.from_config(interpreter_config)
        self.memories = [Memory(self.sizes) for _ in range(parties)]
        self.env = Env()
        self.trace = Trace(parties)
        self.psi = PsiMap()
        self.inputs = inputs if inputs is not None else InputSet.empty(parties)
        self.outputs = [[] for _ in range(parties)]
        self.loop_budget = loop_budget or interpreter_config.loop_budget
        self.callbacks = list(callbacks or [])
        self.builtins = {}
        self.acc = 0
        self.flags: List[str] = []
        self.iterations = 0

    # Labels and values

    @property
    def public(self):
        return None if self.vanilla else PrivacyLabel.PUBLIC

    @property
    def int_ty(self):
        return Base(self.public, BaseType.INT)

    def const(self, ty, v):
        return Value(ty, (v,) * self.q)

    def skip(self):
        return Value(None, (None,) * self.q)

    def public_int(self, value, what):
        """Plain int of a public integer value."""
        if value.is_skip:
            raise UnsupportedConstruct(f"procedure call used as {what}")
        if value.is_private:
            raise LabelFault(f"{what} must be public")
        if not isinstance(value.ty, Base) or value.ty.bty != BaseType.INT:
            raise TypeFault(f"{what} must be an int, got {value.ty}")
        return value.parts[0]

    def truth(self, value):
        if value.is_skip:
            raise UnsupportedConstruct("procedure call used as a condition")
        if value.is_pointer:
            return value.parts[0].location != L_DEFAULT
        return value.parts[0] != 0

    # Trace

    def emit(self, code):
        self.trace.emit(code)
        for cb in self.callbacks:
            cb.on_rule(code, self.acc)

    def touch(self, block, offset):
        self.trace.touch(block, offset)

    def flag_misaligned(self, where):
        self.flags.append(where)
        logger.warning("access is not well aligned: %s", where)

    def assert_acc_zero(self, what):
        """Public side effects are only allowed outside private-conditioned branches."""
        if self.acc > 0:
            raise ObliviousFault(f"{what} inside a private-conditioned branch (acc={self.acc})")

    # Memory helpers

    @property
    def layout(self) -> Memory:
        """Party 1's memory; block structure is identical in every party."""
        return self.memories[0]

    def allocate(self, ty, count, data=None, label=None, heap=False, payload=None):
        """Same block in every party; temporaries while inside a private-conditioned branch."""
        temp = self.acc > 0
        locs = {m.allocate(ty, count, data, label=label, heap=heap, temp=temp, payload=payload)
                for m in self.memories}
        assert len(locs) == 1
        return locs.pop()

    def release(self, blocks):
        for m in self.memories:
            for block_id in blocks:
                m.release(block_id)

    def write_each(self, fn, parts):
        for memory, part in zip(self.memories, parts):
            fn(memory, part)

    def array_info(self, name):
        """(data block, element count, element type) of an array variable."""
        loc, ty = self.env.lookup(name)
        if not isinstance(ty, ConstArrPtr):
            raise TypeFault(f"'{name}' is not an array")
        data = self.layout.read_ptr(loc).location.block
        return data, self.layout.block(data).count, element_type(ty)

    # Conversions

    def coerce(self, value, target, what="assignment"):
        """Value converted to the type of the location it is stored in."""
        if value.is_skip:
            raise UnsupportedConstruct(f"procedure call used as a value in {what}")
        if isinstance(target, Base):
            if not isinstance(value.ty, Base):
                raise TypeFault(f"cannot store {value.ty} into {target}")
            if value.is_private and not target.is_private:
                raise LabelFault(f"private value flows into public {what}")
            value = self.convert_bty(value, target.bty)
            if target.is_private and not value.is_private:
                value = self.to_private(value)
            return Value(target, value.parts)
        if isinstance(target, Ptr):
            if not isinstance(value.ty, Ptr):
                raise TypeFault(f"cannot store {value.ty} into pointer {target}")
            if value.ty.bty != BaseType.VOID and value.ty.effective_label != target.effective_label:
                raise LabelFault(f"pointer to {value.ty.effective_label} data stored into {target}")
            if value.ty.bty == BaseType.VOID and target.is_private and not self._is_null(value):
                raise LabelFault("public allocation stored into a private pointer; use pmalloc")
            parts = tuple(PointerData(pd.alpha, pd.locs, pd.tags, target.indirection) for pd in value.parts)
            return Value(target, parts)
        raise TypeFault(f"cannot store into {target}")

    @staticmethod
    def _is_null(value):
        return all(pd.locs == (L_DEFAULT,) for pd in value.parts)

    def convert_bty(self, value, bty):
        if value.ty.bty == bty or bty == BaseType.VOID:
            return value
        ty = Base(value.ty.label, bty)
        if value.is_private:
            return Value(ty, self.private_cast(value.parts, value.ty.bty, bty))
        if bty == BaseType.FLOAT:
            return Value(ty, tuple(to_float32(v) for v in value.parts))
        return Value(ty, tuple(to_int32(int(v)) for v in value.parts))

    # Hooks implemented by the SMC² interpreter

    def to_private(self, value):
        raise LabelFault("private values need the SMC² interpreter")

    def private_cast(self, parts, from_bty, to_bty):
        raise LabelFault("private values need the SMC² interpreter")

    def private_binop(self, op, left, right, bty):
        raise LabelFault("private values need the SMC² interpreter")

    def read_private_index(self, e, index):
        raise LabelFault("private index needs the SMC² interpreter")

    def write_private_index(self, target, index, value):
        raise LabelFault("private index needs the SMC² interpreter")

    def eval_private_if(self, s, cond):
        raise LabelFault("private condition needs the SMC² interpreter")

    def before_location_write(self, loc, ty):
        """Called before deref writes and public-index array writes."""

    # Program

    def run(self, program: ast.Program) -> RunResult:
        """
        Evaluate a whole program

        Args:
            program: Program AST

        Returns:
            RunResult with every party's final state
        """
        logger.info("run start: %d parties, %d top-level statements", self.q, len(program.stmts))
        self.run_stmts(program.stmts)
        result = self.result()
        logger.info("run end: %d codes, %d flags", len(self.trace), len(self.flags))
        for cb in self.callbacks:
            cb.on_run_end(result)
        return result

    def result(self):
        return RunResult(self.memories, self.env, self.trace, self.psi, self.outputs,
                         self.rounds(), list(self.flags), None, self.q, self.sizes)

    def rounds(self):
        return {"kinds": {}, "rounds": 0}

    # Statements

    def run_stmts(self, stmts):
        for i, s in enumerate(stmts):
            self.eval_stmt(s)
            if i > 0:
                self.emit("ss")

    def eval_stmt(self, s):
        if isinstance(s, ast.Skip):
            return
        if isinstance(s, ast.ExprStmt):
            self.eval_expr(s.expr)
        elif isinstance(s, ast.Decl):
            self.eval_decl(s)
        elif isinstance(s, ast.Assign):
            self.eval_assign(s)
        elif isinstance(s, ast.Block):
            saved = self.env
            self.env = saved.child()
            try:
                self.run_stmts(s.stmts)
            finally:
                self.env = saved
            self.emit("sb")
        elif isinstance(s, ast.If):
            self.eval_if(s)
        elif isinstance(s, ast.While):
            self.eval_while(s)
        elif isinstance(s, ast.FunDef):
            self.eval_fundef(s)
        else:
            raise UnsupportedConstruct(f"statement {type(s).__name__}")

    def eval_scoped(self, s):
        saved = self.env
        self.env = saved.child()
        try:
            self.eval_stmt(s)
        finally:
            self.env = saved

    # Declarations

    def eval_decl(self, d):
        ty = d.ty
        if d.is_array:
            self.declare_array(d)
            return
        if isinstance(ty, Ptr):
            pd = PointerData.single(L_DEFAULT, indirection=ty.indirection)
            loc = self.allocate(ty, 1, encode_ptr(ty, pd, self.sizes))
            self.env.declare(d.name, loc, ty)
            self.emit("dp1" if ty.is_private else "dp")
        else:
            loc = self.allocate(ty, 1)
            self.env.declare(d.name, loc, ty)
            self.emit("d1" if ty.is_private else "d")
        if d.init is not None:
            if not ty.is_private:
                self.assert_acc_zero(f"initialization of public '{d.name}'")
            self.write_var(d.name, self.eval_expr(d.init))

    def declare_array(self, d):
        n = self.public_int(self.eval_expr(d.size), f"length of '{d.name}'")
        if n < 1:
            raise ShapeMismatch(f"array '{d.name}' declared with length {n}")
        arr_ty = ConstArrPtr(d.ty.label, d.ty.bty)
        ptr_loc = self.allocate(arr_ty, 1, encode_ptr(arr_ty, PointerData.single(L_DEFAULT), self.sizes))
        data = self.allocate(d.ty, n)
        self.write_each(lambda m, _: m.update_ptr(ptr_loc, PointerData.single(data), arr_ty), (None,) * self.q)
        self.env.declare(d.name, ptr_loc, arr_ty)
        self.emit("da1" if d.ty.is_private else "da")
        if d.init is None:
            return
        if not d.ty.is_private:
            self.assert_acc_zero(f"initialization of public array '{d.name}'")
        if len(d.init) > n:
            raise ShapeMismatch(f"{len(d.init)} initializers for '{d.name}[{n}]'")
        any_private = False
        size = self.sizes.tau(d.ty)
        for i, e in enumerate(d.init):
            value = self.eval_expr(e)
            any_private |= value.is_private
            value = self.coerce(value, d.ty, "array initializer")
            self.write_each(lambda m, v: m.update_val(Location(data.block, i * size), v, d.ty), value.parts)
            self.touch(data.block, i)
        if d.ty.is_private:
            self.emit("wea2" if any_private else "wea1")
        else:
            self.emit("wea")

    def eval_fundef(self, s):
        fty = function_type(s)
        existing = self.env.vars.get(s.name)
        if existing is not None and isinstance(existing[1], Fun):
            loc = existing[0]
        else:
            loc = self.allocate(fty, 1, b"", label=self.public or PrivacyLabel.PUBLIC,
                                payload=FunctionPayload(None, None, self.env))
            self.env.declare(s.name, loc, fty)
        if s.body is None:
            self.emit("fpd")
            return
        summary = summarize_function(s, self.env)
        for m in self.memories:
            m.block(loc.block).payload = FunctionPayload(s, summary, self.env)
        self.env.declare(s.name, loc, fty, summary)
        self.emit("fd")

    # Variables

    def read_var(self, name):
        loc, ty = self.env.lookup(name)
        if isinstance(ty, Base):
            parts = tuple(m.read_val(loc, ty) for m in self.memories)
            self.touch(loc.block, 0)
            self.emit("r1" if ty.is_private else "r")
            return Value(ty, parts)
        if isinstance(ty, Ptr):
            parts = tuple(m.read_ptr(loc) for m in self.memories)
            self.touch(loc.block, 0)
            self.emit("rp1" if ty.is_private else "rp")
            return Value(ty, parts)
        if isinstance(ty, ConstArrPtr):
            # The array decays to a pointer to its data
            parts = tuple(m.read_ptr(loc) for m in self.memories)
            self.touch(loc.block, 0)
            self.emit("rea")
            return Value(Ptr(ty.label, ty.bty, 1), parts)
        raise TypeFault(f"'{name}' of type {ty} is not a value")

    def write_var(self, name, value, code=True):
        loc, ty = self.env.lookup(name)
        if isinstance(ty, Base):
            if not ty.is_private:
                self.assert_acc_zero(f"write to public '{name}'")
            stored = self.coerce(value, ty)
            self.write_each(lambda m, v: m.update_val(loc, v, ty), stored.parts)
            self.touch(loc.block, 0)
            if code:
                self.emit(("w1" if value.is_private else "w2") if ty.is_private else "w")
            return
        if isinstance(ty, Ptr):
            if not ty.is_private:
                self.assert_acc_zero(f"write to public pointer '{name}'")
            stored = self.coerce(value, ty)
            self.write_each(lambda m, pd: m.update_ptr(loc, pd, ty), stored.parts)
            self.touch(loc.block, 0)
            if code:
                self.emit(("wp2" if stored.parts[0].alpha > 1 else "wp1") if ty.is_private else "wp")
            return
        raise TypeFault(f"cannot assign to '{name}' of type {ty}")

    def eval_assign(self, s):
        target = s.target
        if isinstance(target, ast.Var):
            self.write_var(target.name, self.eval_expr(s.value))
        elif isinstance(target, ast.Index):
            index = self.eval_expr(target.index)
            value = self.eval_expr(s.value)
            if index.is_private:
                self.write_private_index(target, index, value)
            else:
                self.write_index(target.name, self.public_int(index, "array index"), value)
        elif isinstance(target, ast.Deref):
            pointer = self.eval_expr(target.target)
            value = self.eval_expr(s.value)
            self.write_deref(pointer, value)
        else:
            raise UnsupportedConstruct(f"assignment to {type(target).__name__}")

    # Arrays

    def element_location(self, data, i, elem):
        """(location, in bounds) of element i of a data block."""
        size = self.sizes.tau(elem)
        if i < 0:
            raise AddressBeyondMemory(f"negative index {i}")
        loc = Location(data, i * size)
        if i < self.layout.block(data).count:
            return loc, True
        return loc, False

    def eval_index(self, e):
        index = self.eval_expr(e.index)
        if index.is_private:
            return self.read_private_index(e, index)
        i = self.public_int(index, "array index")
        data, _, elem = self.array_info(e.name)
        loc, inside = self.element_location(data, i, elem)
        if inside:
            parts = tuple(m.read_val(loc, elem) for m in self.memories)
            self.touch(data, i)
            self.emit(self.index_code(e, "ra1" if elem.is_private else "ra"))
            return Value(elem, parts)
        if not self.layout.well_aligned(loc, elem):
            self.flag_misaligned(f"read {e.name}[{i}]")
        target = self.layout.normalize(loc)
        parts = tuple(m.read_oob(loc, elem) for m in self.memories)
        self.touch(target.block, target.offset)
        self.emit(self.index_code(e, "rao1" if elem.is_private else "rao"))
        return Value(elem, parts)

    def index_code(self, e, code):
        return code

    def write_index(self, name, i, value):
        data, _, elem = self.array_info(name)
        if not elem.is_private:
            self.assert_acc_zero(f"write to public array '{name}'")
        stored = self.coerce(value, elem, "array write")
        loc, inside = self.element_location(data, i, elem)
        if inside:
            self.before_location_write(loc, elem)
            self.write_each(lambda m, v: m.update_val(loc, v, elem), stored.parts)
            self.touch(data, i)
            code = ("wa1" if value.is_private else "wa2") if elem.is_private else "wa"
        else:
            if not self.layout.well_aligned(loc, elem):
                self.flag_misaligned(f"write {name}[{i}]")
            target = self.layout.normalize(loc)
            self.before_location_write(target, elem)
            self.write_each(lambda m, v: m.write_oob(loc, v, elem), stored.parts)
            self.touch(target.block, target.offset)
            code = ("wao1" if value.is_private else "wao2") if elem.is_private else "wao"
        self.emit(code)

    # Pointers

    def pointee(self, pointer, what):
        if pointer.is_skip or not pointer.is_pointer:
            raise TypeFault(f"{what} of a non-pointer")
        if pointer.ty.bty == BaseType.VOID and pointer.ty.indirection == 1:
            raise TypeFault(f"{what} of a void pointer")
        return element_type(pointer.ty)

    def eval_deref(self, e):
        pointer = self.eval_expr(e.target)
        elem = self.pointee(pointer, "dereference")
        if pointer.parts[0].alpha > 1:
            return self.deref_multi(pointer, elem)
        loc = pointer.parts[0].location
        if not self.layout.well_aligned(loc, elem):
            self.flag_misaligned(f"dereference at {loc}")
        parts = tuple(m.deref_ptr(elem, loc)[0] for m in self.memories)
        self.touch(loc.block, loc.offset)
        if isinstance(elem, Ptr):
            self.emit("rdp1")
        else:
            self.emit("rdp2" if pointer.is_private else "rdp")
        return Value(elem, parts)

    def deref_multi(self, pointer, elem):
        raise LabelFault("multi-location pointers need the SMC² interpreter")

    def write_deref(self, pointer, value):
        elem = self.pointee(pointer, "dereference write")
        if not pointer.is_private:
            self.assert_acc_zero("write through a public pointer")
        if pointer.parts[0].alpha > 1:
            self.write_deref_multi(pointer, value, elem)
            return
        loc = pointer.parts[0].location
        stored = self.coerce(value, elem, "dereference write")
        aligned = self.layout.well_aligned(loc, elem)
        if not aligned:
            self.flag_misaligned(f"dereference write at {loc}")
        target = self.layout.normalize(loc)
        self.before_location_write(target, elem)
        if isinstance(elem, Ptr):
            self.write_each(lambda m, pd: m.update_ptr(target, pd, elem), stored.parts)
        elif aligned:
            self.write_each(lambda m, v: m.update_val(target, v, elem), stored.parts)
        else:
            self.write_each(lambda m, v: m.write_oob(loc, v, elem), stored.parts)
        self.touch(target.block, target.offset)
        if isinstance(elem, Ptr):
            self.emit("wdp2" if pointer.is_private else "wdp1")
        elif pointer.is_private:
            self.emit("wdp3" if value.is_private else "wdp4")
        else:
            self.emit("wdp")

    def write_deref_multi(self, pointer, value, elem):
        raise LabelFault("multi-location pointers need the SMC² interpreter")

    def shift_pointer(self, pointer, steps):
        """Pointer moved by steps elements; offsets roll into the following blocks."""
        stride = self.sizes.tau(element_type(pointer.ty)) * steps
        shifted = []
        for pd in pointer.parts:
            locs = []
            for loc in pd.locs:
                if loc.offset + stride < 0:
                    raise AddressBeyondMemory(f"pointer moved before the start of block {loc.block}")
                locs.append(self.layout.get_location(loc, stride)[0])
            shifted.append(PointerData(pd.alpha, tuple(locs), pd.tags, pd.indirection))
        return Value(pointer.ty, tuple(shifted))

    def eval_addr(self, e):
        loc, ty = self.env.lookup(e.name)
        if isinstance(ty, ConstArrPtr):
            data = self.layout.read_ptr(loc).location
            pd = PointerData.single(data, 1)
            self.emit("loc")
            return self.const(Ptr(ty.label, ty.bty, 1), pd)
        if isinstance(ty, Fun):
            raise UnsupportedConstruct("function pointers")
        pty = pointer_to(ty)
        self.emit("loc")
        return self.const(pty, PointerData.single(loc, pty.indirection))

    def eval_preinc(self, e):
        loc, ty = self.env.lookup(e.name)
        if isinstance(ty, Base):
            current = self.read_var_silent(loc, ty)
            if ty.is_private:
                one = self.to_private(self.convert_bty(self.const(self.int_ty, 1), ty.bty))
                new = Value(ty, self.private_binop("+", current, one, ty.bty))
                code = "pin3"
            else:
                self.assert_acc_zero(f"increment of public '{e.name}'")
                one = 1.0 if ty.bty == BaseType.FLOAT else 1
                new = Value(ty, tuple(self.public_arith("+", v, one, ty.bty) for v in current.parts))
                code = "pin"
            self.write_each(lambda m, v: m.update_val(loc, v, ty), new.parts)
        elif isinstance(ty, Ptr):
            if not ty.is_private:
                self.assert_acc_zero(f"increment of public pointer '{e.name}'")
            current = Value(ty, tuple(m.read_ptr(loc) for m in self.memories))
            new = self.shift_pointer(current, 1)
            self.write_each(lambda m, pd: m.update_ptr(loc, pd, ty), new.parts)
            if not ty.is_private:
                code = "pin1"
            else:
                code = "mppin" if current.parts[0].alpha > 1 else "pin4"
        else:
            raise TypeFault(f"cannot increment '{e.name}' of type {ty}")
        self.touch(loc.block, 0)
        self.emit(code)
        return new

    def read_var_silent(self, loc, ty):
        return Value(ty, tuple(m.read_val(loc, ty) for m in self.memories))

    # Expressions

    def eval_expr(self, e) -> Value:
        if isinstance(e, ast.Num):
            if isinstance(e.value, float):
                return self.const(Base(self.public, BaseType.FLOAT), to_float32(e.value))
            return self.const(self.int_ty, to_int32(e.value))
        if isinstance(e, ast.Null):
            return self.const(Ptr(self.public, BaseType.VOID, 1), PointerData.single(L_DEFAULT))
        if isinstance(e, ast.Var):
            return self.read_var(e.name)
        if isinstance(e, ast.Index):
            return self.eval_index(e)
        if isinstance(e, ast.Deref):
            return self.eval_deref(e)
        if isinstance(e, ast.AddrOf):
            return self.eval_addr(e)
        if isinstance(e, ast.PreInc):
            return self.eval_preinc(e)
        if isinstance(e, ast.BinOp):
            return self.eval_binop(e)
        if isinstance(e, ast.Call):
            return self.eval_call(e)
        if isinstance(e, ast.Cast):
            return self.eval_cast(e)
        if isinstance(e, ast.Sizeof):
            self.emit("ty")
            return self.const(self.int_ty, self.sizes.tau(e.ty))
        if isinstance(e, ast.Malloc):
            return self.eval_malloc(e)
        if isinstance(e, ast.Free):
            return self.eval_free(e)
        if isinstance(e, ast.PMalloc):
            return self.eval_pmalloc(e)
        if isinstance(e, ast.PFree):
            return self.eval_pfree(e)
        if isinstance(e, ast.INPUT_PRIMS):
            return self.eval_input(e)
        if isinstance(e, ast.OUTPUT_PRIMS):
            return self.eval_output(e)
        raise UnsupportedConstruct(f"expression {type(e).__name__}")

    def eval_pmalloc(self, e):
        raise UnsupportedConstruct("pmalloc outside SMC²")

    def eval_pfree(self, e):
        raise UnsupportedConstruct("pfree outside SMC²")

    # Operators

    def public_arith(self, op, a, b, bty):
        if bty == BaseType.FLOAT:
            if op == "/" and b == 0:
                raise DivisionByZero("division by zero")
            a, b = to_float32(a), to_float32(b)
            return to_float32({"+": a + b, "-": a - b, "*": a * b, "/": a / b if b else 0.0}[op])
        if op == "/":
            if b == 0:
                raise DivisionByZero("division by zero")
            return to_int32(c_div(a, b))
        return to_int32({"+": a + b, "-": a - b, "*": a * b}[op])

    @staticmethod
    def public_compare(op, a, b):
        return {"<": a < b, "==": a == b, "!=": a != b}[op]

    def eval_binop(self, e):
        left = self.eval_expr(e.left)
        right = self.eval_expr(e.right)
        if left.is_skip or right.is_skip:
            raise UnsupportedConstruct("procedure call used as an operand")
        if left.is_pointer or right.is_pointer:
            return self.pointer_binop(e, left, right)
        bty = BaseType.FLOAT if BaseType.FLOAT in (left.ty.bty, right.ty.bty) else BaseType.INT
        left, right = self.convert_bty(left, bty), self.convert_bty(right, bty)
        if left.is_private or right.is_private:
            return self.private_operator(e, left, right, bty)
        if e.op in ARITHMETIC:
            parts = tuple(self.public_arith(e.op, a, b, bty) for a, b in zip(left.parts, right.parts))
            self.emit(self.arith_code(e))
            return Value(Base(self.public, bty), parts)
        holds = [self.public_compare(e.op, a, b) for a, b in zip(left.parts, right.parts)]
        self.emit(self.compare_code(e, holds[0]))
        return Value(self.int_ty, tuple(int(h) for h in holds))

    def arith_code(self, e):
        return ARITH_CODES[e.op]

    def compare_code(self, e, holds):
        t, f = CMP_CODES[e.op]
        return t if holds else f

    def private_operator(self, e, left, right, bty):
        raise LabelFault("private operands need the SMC² interpreter")

    def pointer_binop(self, e, left, right):
        if e.op in ("+", "-") and left.is_pointer and not right.is_pointer:
            steps = self.public_int(right, "pointer offset")
            result = self.shift_pointer(left, steps if e.op == "+" else -steps)
            self.emit(ARITH_CODES[e.op])
            return result
        if e.op == "+" and right.is_pointer and not left.is_pointer:
            result = self.shift_pointer(right, self.public_int(left, "pointer offset"))
            self.emit("bp")
            return result
        if e.op in ("==", "!=") and left.is_pointer and right.is_pointer:
            if left.is_private or right.is_private:
                raise LabelFault("comparison of private pointers")
            same = left.parts[0].locs == right.parts[0].locs
            holds = same if e.op == "==" else not same
            self.emit(self.compare_code(e, holds))
            return self.const(self.int_ty, int(holds))
        raise TypeFault(f"operator {e.op} on {left.ty} and {right.ty}")

    def eval_cast(self, e):
        value = self.eval_expr(e.expr)
        if value.is_skip:
            raise UnsupportedConstruct("cast of a procedure call")
        target = e.ty
        if value.is_private and target.effective_label == PrivacyLabel.PUBLIC and target.label is not None:
            raise LabelFault("cast of a private value to a public type")
        label = value.ty.label
        if isinstance(target, Base) and isinstance(value.ty, Base):
            if target.bty == BaseType.VOID:
                raise TypeFault("cast to void")
            converted = self.convert_bty(value, target.bty)
            self.emit("cv1" if value.is_private else "cv")
            return Value(Base(label, target.bty), converted.parts)
        if isinstance(target, Ptr) and isinstance(value.ty, Ptr):
            parts = tuple(PointerData(pd.alpha, pd.locs, pd.tags, target.indirection) for pd in value.parts)
            self.emit("cv1" if value.is_private else "cv")
            return Value(Ptr(label, target.bty, target.indirection), parts)
        raise TypeFault(f"cannot cast {value.ty} to {target}")

    # Control flow

    def eval_if(self, s):
        cond = self.eval_expr(s.cond)
        if cond.is_private:
            self.eval_private_if(s, cond)
            return
        taken = self.truth(cond)
        branch = s.then if taken else s.orelse
        if branch is not None:
            self.eval_scoped(branch)
        self.emit("iet" if taken else "ief")

    def eval_while(self, s):
        while True:
            cond = self.eval_expr(s.cond)
            if cond.is_private:
                raise PrivateLoopGuard("while loop guarded by a private condition")
            if not self.truth(cond):
                self.emit("wle")
                return
            self.eval_scoped(s.body)
            self.emit("wlc")
            self.iterations += 1
            if self.iterations > self.loop_budget:
                raise LoopBudgetExceeded(f"more than {self.loop_budget} loop iterations")

    # Functions

    def eval_call(self, e):
        if e.name in self.builtins:
            return self.builtins[e.name](self, e)
        loc, fty = self.env.lookup(e.name)
        if not isinstance(fty, Fun):
            raise TypeFault(f"'{e.name}' is not a function")
        payload = self.layout.block(loc.block).payload
        if payload is None or payload.fundef is None:
            raise UnboundVariable(f"function '{e.name}' is declared but never defined")
        fundef = payload.fundef
        if payload.summary.public_side_effects:
            self.assert_acc_zero(f"call of '{e.name}', which has public side effects,")
        if len(e.args) != len(fundef.params):
            raise ShapeMismatch(f"'{e.name}' takes {len(fundef.params)} arguments, got {len(e.args)}")
        args = [self.eval_expr(a) for a in e.args]
        saved = self.env
        self.env = payload.closure.child()
        try:
            for param, arg in zip(fundef.params, args):
                self.bind_param(param, arg)
            self.eval_stmt(fundef.body)
        finally:
            self.env = saved
        self.emit("fc1" if self.acc > 0 and not self.vanilla else "fc")
        return self.skip()

    def bind_param(self, param, arg):
        """Pass by value; no code and no public-write check."""
        ty = param.ty
        stored = self.coerce(arg, ty, f"argument '{param.name}'")
        if isinstance(ty, Ptr):
            loc = self.allocate(ty, 1, encode_ptr(ty, PointerData.single(L_DEFAULT, indirection=ty.indirection),
                                                  self.sizes))
            self.write_each(lambda m, pd: m.update_ptr(loc, pd, ty), stored.parts)
        else:
            loc = self.allocate(ty, 1)
            self.write_each(lambda m, v: m.update_val(loc, v, ty), stored.parts)
        self.env.declare(param.name, loc, ty)

    # Allocation

    def eval_malloc(self, e):
        self.assert_acc_zero("malloc")
        n = self.public_int(self.eval_expr(e.size), "malloc size")
        if n < 0:
            raise ShapeMismatch(f"malloc of {n} bytes")
        loc = self.allocate(Base(self.public, BaseType.VOID), n, heap=True)
        self.emit("mal")
        return self.const(Ptr(self.public, BaseType.VOID, 1), PointerData.single(loc))

    def eval_free(self, e):
        self.assert_acc_zero("free")
        pointer = self.eval_expr(e.target)
        if not pointer.is_pointer:
            raise TypeFault("free of a non-pointer")
        if pointer.is_private:
            raise LabelFault("free of a private pointer; use pfree")
        loc = pointer.parts[0].location
        if not self.layout.check_freeable([loc]):
            raise NotFreeable(f"location {loc} was not allocated by malloc")
        for m in self.memories:
            m.free_block(loc.block)
        self.touch(loc.block, 0)
        self.emit("fre")
        return self.skip()

    # Input and output

    def party_index(self, e):
        k = self.public_int(self.eval_expr(e.party), "party index")
        if not 1 <= k <= self.q:
            raise IndexOutOfParties(f"party {k} outside 1..{self.q}")
        return k

    def input_value(self, value, ty):
        """Input datum as per-party parts of type ty."""
        v = to_float32(value) if ty.bty == BaseType.FLOAT else to_int32(int(value))
        return Value(Base(self.public, ty.bty), (v,) * self.q)

    def eval_input(self, e):
        self.assert_acc_zero("input")
        target = e.target
        length = None
        if e.length is not None:
            length = self.public_int(self.eval_expr(e.length), "input length")
        party = self.party_index(e)
        private = False
        if length is not None:
            name = target.name if isinstance(target, ast.Var) else None
            if name is None:
                raise TypeFault("array input expects an array name")
            data, n, elem = self.array_info(name)
            values = self.inputs.lookup(party, name)
            if not isinstance(values, list) or len(values) < length:
                raise MissingInput(f"party {party} provides fewer than {length} values for '{name}'")
            if length > n:
                raise ShapeMismatch(f"{length} inputs for '{name}[{n}]'")
            size = self.sizes.tau(elem)
            for i in range(length):
                stored = self.input_value(values[i], elem)
                if elem.is_private:
                    stored = Value(elem, self.share_input(values[i], elem))
                self.write_each(lambda m, v: m.update_val(Location(data, i * size), v, elem), stored.parts)
                self.touch(data, i)
            private = elem.is_private
            self.emit("inp3" if private else "inp1")
            return self.skip()
        if isinstance(target, ast.Var):
            loc, ty = self.env.lookup(target.name)
            if not isinstance(ty, Base):
                raise TypeFault(f"input into '{target.name}' of type {ty}")
            raw = self.inputs.lookup(party, target.name)
            if isinstance(raw, list):
                raise MissingInput(f"party {party} provides a list for scalar '{target.name}'")
            stored = Value(ty, self.share_input(raw, ty)) if ty.is_private else self.input_value(raw, ty)
            self.write_each(lambda m, v: m.update_val(loc, v, ty), stored.parts)
            self.touch(loc.block, 0)
            private = ty.is_private
        else:
            i = self.public_int(self.eval_expr(target.index), "array index")
            data, n, elem = self.array_info(target.name)
            values = self.inputs.lookup(party, target.name)
            if not isinstance(values, list) or i >= len(values) or i < 0:
                raise MissingInput(f"party {party} has no element {i} of '{target.name}'")
            loc, inside = self.element_location(data, i, elem)
            if not inside:
                raise ShapeMismatch(f"input into {target.name}[{i}] beyond {n} elements")
            stored = Value(elem, self.share_input(values[i], elem)) if elem.is_private \
                else self.input_value(values[i], elem)
            self.write_each(lambda m, v: m.update_val(loc, v, elem), stored.parts)
            self.touch(data, i)
            private = elem.is_private
        self.emit("inp2" if private else "inp")
        return self.skip()

    def share_input(self, raw, ty):
        raise LabelFault("private inputs need the SMC² interpreter")

    def open_value(self, value):
        """Plaintext of a value for an output record."""
        if value.is_private:
            return self.reveal(value)
        return value.parts[0]

    def reveal(self, value):
        raise LabelFault("private outputs need the SMC² interpreter")

    def eval_output(self, e):
        self.assert_acc_zero("output")
        target = e.target
        length = None
        if e.length is not None:
            length = self.public_int(self.eval_expr(e.length), "output length")
        party = self.party_index(e)
        if length is not None:
            if not isinstance(target, ast.Var):
                raise TypeFault("array output expects an array name")
            data, n, elem = self.array_info(target.name)
            if length > n:
                raise ShapeMismatch(f"{length} outputs from '{target.name}[{n}]'")
            size = self.sizes.tau(elem)
            values = []
            for i in range(length):
                element = Value(elem, tuple(m.read_val(Location(data, i * size), elem) for m in self.memories))
                self.touch(data, i)
                values.append(self.open_value(element))
            self.outputs[party - 1].append((target.name, values))
            self.emit("out3" if elem.is_private else "out1")
            return self.skip()
        if isinstance(target, ast.Var):
            loc, ty = self.env.lookup(target.name)
            if not isinstance(ty, Base):
                raise TypeFault(f"output of '{target.name}' of type {ty}")
            value = self.read_var_silent(loc, ty)
            self.touch(loc.block, 0)
            name = target.name
        else:
            i = self.public_int(self.eval_expr(target.index), "array index")
            data, n, elem = self.array_info(target.name)
            loc, inside = self.element_location(data, i, elem)
            if not inside:
                raise ShapeMismatch(f"output of {target.name}[{i}] beyond {n} elements")
            value = Value(elem, tuple(m.read_val(loc, elem) for m in self.memories))
            self.touch(data, i)
            name = f"{target.name}[{i}]"
        self.outputs[party - 1].append((name, self.open_value(value)))
        self.emit("out2" if value.is_private else "out")
        return self.skip()
