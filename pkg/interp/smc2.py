"""SMC² Evaluator: Private Rules over Shamir Shares"""

import copy
import logging

from config.field_config import config as field_config
from config.interpreter_config import config as interpreter_config
from interp.evaluator import COMPARISONS, Evaluator, RunResult, Value
from interp.tracking import (
    DeltaEntry, DeltaStack, copy_block, dyn_extract, dyn_resolve, dyn_restore, encode_shared,
    location_kind, restore, shared_value, slot_of, snapshot,
)
from lang import ast
from lang.errors import (
    ConfigError, DoubleFree, LabelFault, NotFreeable, ShapeMismatch, TypeFault, UnsupportedConstruct,
)
from lang.types import PRIVATE_INT, Base, BaseType, PrivacyLabel, Ptr, element_type
from memory.codec import to_float32, to_int32
from memory.values import Location, PointerData
from mpc.field import FieldParams
from mpc.protocols import ProtocolSuite, SharedPointer
from mpc.rng import ProtocolRng

logger = logging.getLogger(__name__)


def shared_pointer(parts) -> SharedPointer:
    """Per-party PointerData of a private pointer as one SharedPointer."""
    first = parts[0]
    tags = [tuple(pd.tags[k] for pd in parts) for k in range(first.alpha)]
    return SharedPointer(first.locs, tags, first.indirection)


def pointer_parts(sp: SharedPointer, parties):
    return tuple(PointerData(len(sp.locs), tuple(sp.locs), tuple(tag[k] for tag in sp.tags), sp.indirection)
                 for k in range(parties))


class Smc2Interpreter(Evaluator):
    """
    SMC² evaluator over q simulated parties

    Private values are Shamir shares held one per party; every operation on
    them goes through the ProtocolSuite. Private-conditioned branches run both
    sides and resolve the modified state obliviously.

    Args:
        parties: q, defaults to the field configuration
        inputs: InputSet
        seed: protocol randomness seed
        params: FieldParams, overrides parties
        rng: randomness source, overrides seed
        backend: "shamir" or "dealer"
        tracking: "auto", "variable" or "location"
        legacy_per_statement: resolve every assignment in a private branch on the spot
        builtins: extra {name: fn(interp, call) -> Value}
    """

    def __init__(self, parties=None, sizes=None, inputs=None, seed=None, params=None, rng=None,
                 backend=None, tracking=None, legacy_per_statement=None, loop_budget=None,
                 callbacks=None, builtins=None):
        if params is None:
            q = parties or field_config.parties
            params = FieldParams(field_config.prime, q, min(field_config.threshold, (q - 1) // 2))
        super().__init__(params.parties, sizes, inputs, loop_budget, callbacks)
        self.params = params
        self.seed = field_config.seed if seed is None else seed
        self.suite = ProtocolSuite(params, rng or ProtocolRng(self.seed),
                                   backend or interpreter_config.backend, listeners=[self._notify])
        self.tracking = tracking or interpreter_config.tracking
        if self.tracking not in interpreter_config.tracking_choices:
            raise ConfigError(f"unknown tracking scheme {self.tracking!r}")
        self.legacy = interpreter_config.legacy_per_statement if legacy_per_statement is None \
            else legacy_per_statement
        self.delta = DeltaStack()
        self.builtins.update(builtins or {})

    def _notify(self, kind, info):
        for cb in self.callbacks:
            cb.on_protocol(kind, info)

    def rounds(self):
        return self.suite.counter.snapshot()

    def result(self) -> RunResult:
        result = super().result()
        result.suite = self.suite
        return result

    def fork(self):
        """Independent copy of the whole run state, without callbacks."""
        callbacks, self.callbacks = self.callbacks, []
        try:
            clone = copy.deepcopy(self)
        finally:
            self.callbacks = callbacks
        return clone

    # Private values

    def to_private(self, value):
        return Value(Base(PrivacyLabel.PRIVATE, value.ty.bty), self.suite.encrypt(value.parts[0], value.ty.bty))

    def private_cast(self, parts, from_bty, to_bty):
        return self.suite.mpc_cast(parts, from_bty, to_bty)

    def private_binop(self, op, left, right, bty):
        return self.suite.mpc_b(op, left.parts, right.parts, bty)

    def private_operator(self, e, left, right, bty):
        left = left if left.is_private else self.to_private(left)
        right = right if right.is_private else self.to_private(right)
        if e.op in COMPARISONS:
            parts = self.suite.mpc_cmp(e.op, left.parts, right.parts, bty)
            self.emit("mpcmp")
            return Value(PRIVATE_INT, parts)
        parts = self.suite.mpc_b(e.op, left.parts, right.parts, bty)
        self.emit("mpb")
        return Value(Base(PrivacyLabel.PRIVATE, bty), parts)

    def share_input(self, raw, ty):
        v = to_float32(raw) if ty.bty == BaseType.FLOAT else to_int32(int(raw))
        return self.suite.input_share(v, ty.bty)

    def reveal(self, value):
        return self.suite.reveal(value.parts, value.ty.bty)

    # Private index

    def _elements(self, data, n, elem):
        size = self.sizes.tau(elem)
        elements = [tuple(m.read_val(Location(data, i * size), elem) for m in self.memories) for i in range(n)]
        if not elem.is_private:
            elements = [self.suite.encrypt(el[0], elem.bty) for el in elements]
        return elements

    def _check_private_index(self, index, n, what):
        if index.ty.bty != BaseType.INT:
            raise TypeFault("array index must be an int")
        if not 0 <= self.suite.peek(index.parts) < n:
            self.flag_misaligned(f"private index {what} outside {n} elements")

    def read_private_index(self, e, index):
        data, n, elem = self.array_info(e.name)
        self._check_private_index(index, n, f"read of '{e.name}'")
        elements = self._elements(data, n, elem)
        for i in range(n):
            self.touch(data, i)
        parts = self.suite.mpc_ar(index.parts, elements)
        self.emit("mpra")
        return Value(Base(PrivacyLabel.PRIVATE, elem.bty), parts)

    def write_private_index(self, target, index, value):
        data, n, elem = self.array_info(target.name)
        if not elem.is_private:
            raise LabelFault(f"write at a private index into public array '{target.name}'")
        stored = self.coerce(value, elem, "array write")
        self._check_private_index(index, n, f"write of '{target.name}'")
        elements = self._elements(data, n, elem)
        updated = self.suite.mpc_aw(index.parts, elements, stored.parts)
        size = self.sizes.tau(elem)
        for i, element in enumerate(updated):
            loc = Location(data, i * size)
            self.write_each(lambda m, v: m.update_val(loc, v, elem), element)
            self.touch(data, i)
        self.emit("mpwa")

    # Multi-location pointers

    def _tags(self, pointer):
        return shared_pointer(pointer.parts).tags

    def deref_multi(self, pointer, elem):
        locs = pointer.parts[0].locs
        tags = self._tags(pointer)
        for loc in locs:
            if not self.layout.well_aligned(loc, elem):
                self.flag_misaligned(f"dereference at {loc}")
        reads = [tuple(m.deref_ptr(elem, loc)[0] for m in self.memories) for loc in locs]
        for loc in locs:
            self.touch(loc.block, loc.offset)
        if isinstance(elem, Ptr):
            combined = self.suite.mpc_dv_pointer([shared_pointer(r) for r in reads], tags)
            self.emit("mprdp1")
            return Value(elem, pointer_parts(combined, self.q))
        parts = self.suite.mpc_dv(reads, tags)
        self.emit("mprdp")
        return Value(elem, parts)

    def write_deref_multi(self, pointer, value, elem):
        locs = pointer.parts[0].locs
        tags = self._tags(pointer)
        stored = self.coerce(value, elem, "dereference write")
        targets = []
        for loc in locs:
            aligned = self.layout.well_aligned(loc, elem)
            if not aligned:
                self.flag_misaligned(f"dereference write at {loc}")
            target = self.layout.normalize(loc)
            self.before_location_write(target, elem)
            targets.append((loc, target, aligned))
        reads = [tuple(m.deref_ptr(elem, loc)[0] for m in self.memories) for loc in locs]
        if isinstance(elem, Ptr):
            olds = [shared_pointer(r) for r in reads]
            updated = self.suite.mpc_wdp(olds, tags, shared_pointer(stored.parts))
            for (_, target, _), sp in zip(targets, updated):
                self.write_each(lambda m, pd: m.update_ptr(target, pd, elem), pointer_parts(sp, self.q))
            code = "mpwdp1"
        else:
            updated = self.suite.mpc_wdp(reads, tags, stored.parts)
            for (loc, target, aligned), parts in zip(targets, updated):
                if aligned:
                    self.write_each(lambda m, v: m.update_val(target, v, elem), parts)
                else:
                    self.write_each(lambda m, v: m.write_oob(loc, v, elem), parts)
            code = "mpwdp"
        for _, target, _ in targets:
            self.touch(target.block, target.offset)
        self.emit(code)

    def before_location_write(self, loc, ty):
        if self.acc > 0 and len(self.delta):
            self.delta.track(self.memories, loc, location_kind(self.layout, loc, ty), ty)

    # Private allocation

    def eval_pmalloc(self, e):
        self.assert_acc_zero("pmalloc")
        n = self.public_int(self.eval_expr(e.count), "pmalloc count")
        if not isinstance(e.ty, Base) or e.ty.bty == BaseType.VOID:
            raise TypeFault(f"pmalloc of {e.ty}")
        if n < 0:
            raise ShapeMismatch(f"pmalloc of {n} elements")
        elem = Base(PrivacyLabel.PRIVATE, e.ty.bty)
        loc = self.allocate(elem, n, heap=True)
        self.emit("malp")
        return self.const(Ptr(PrivacyLabel.PRIVATE, elem.bty, 1), PointerData.single(loc))

    def eval_pfree(self, e):
        self.assert_acc_zero("pfree")
        if not isinstance(e.target, ast.Var):
            raise UnsupportedConstruct("pfree expects a pointer variable")
        var_loc, ty = self.env.lookup(e.target.name)
        if not isinstance(ty, Ptr):
            raise TypeFault(f"pfree of non-pointer '{e.target.name}'")
        if not ty.is_private:
            raise LabelFault(f"pfree of public pointer '{e.target.name}'; use free")
        parts = self.read_var(e.target.name).parts
        locs = parts[0].locs
        for loc in locs:
            if loc.block in self.layout and self.layout.block(loc.block).freed:
                raise DoubleFree(f"block {loc.block} is already freed")
        if not self.layout.check_freeable(locs):
            raise NotFreeable(f"'{e.target.name}' does not point to pmalloc'd blocks")
        if len(locs) == 1:
            for m in self.memories:
                m.free_block(locs[0].block)
            self.touch(locs[0].block, 0)
            self.emit("pfre")
            return self.skip()
        self.free_multi(var_loc, ty, parts)
        self.emit("mpfre")
        return self.skip()

    def free_multi(self, var_loc, ty, parts):
        """Relocate the true data out of location 0, free it, and shrink every pointer listing it."""
        sp = shared_pointer(parts)
        locs = list(sp.locs)
        if isinstance(element_type(ty), Ptr):
            raise UnsupportedConstruct("pfree of a multi-location pointer to pointers")
        contents = []
        for loc in locs:
            blk_ty = self.layout.block(loc.block).ty
            per_party = [m.read_arr(loc.block, blk_ty) for m in self.memories]
            contents.append([tuple(element) for element in zip(*per_party)])
        true_index = next(k for k, tag in enumerate(sp.tags) if self.suite.open(tag) == 1)
        updated, new_tags = self.suite.mpc_free(contents, sp.tags)

        # UpdateBytesFree
        for loc, elements in zip(locs[1:], updated[1:]):
            blk_ty = self.layout.block(loc.block).ty
            size = self.sizes.tau(blk_ty)
            for i, element in enumerate(elements):
                self.write_each(lambda m, v: m.update_val(Location(loc.block, i * size), v, blk_ty), element)
        for m in self.memories:
            m.free_block(locs[0].block)
        for loc in locs:
            self.touch(loc.block, 0)

        shrunk = SharedPointer(tuple(locs[1:]), list(new_tags), sp.indirection)
        self.write_each(lambda m, pd: m.update_ptr(var_loc, pd, ty), pointer_parts(shrunk, self.q))
        self.update_pointer_locations(locs[0], locs[1:], new_tags, var_loc.block)
        self.psi.record(locs[0].block, locs[true_index].block)
        logger.info("pfree relocated block %d over %d locations", locs[0].block, len(locs))

    def update_pointer_locations(self, freed, survivors, new_tags, skip_block):
        for block_id in sorted(self.layout.blocks):
            blk = self.layout.block(block_id)
            if block_id == skip_block or blk.freed or not isinstance(blk.ty, Ptr) or not blk.ty.is_private:
                continue
            parts = tuple(m.read_ptr(Location(block_id, 0)) for m in self.memories)
            if all(loc.block != freed.block for loc in parts[0].locs):
                continue
            sp = shared_pointer(parts)
            locs, tags = [], []
            moved = []
            for loc, tag in zip(sp.locs, sp.tags):
                if loc.block == freed.block:
                    moved.append((loc.offset, tag))
                else:
                    locs.append(loc)
                    tags.append(tag)
            for offset, tag in moved:
                for survivor, new_tag in zip(survivors, new_tags):
                    target = Location(survivor.block, offset)
                    scaled = self.suite.mul_tags(tag, new_tag)
                    if target in locs:
                        i = locs.index(target)
                        tags[i] = self.suite.backend.add(tags[i], scaled)
                    else:
                        locs.append(target)
                        tags.append(scaled)
            updated = SharedPointer(tuple(locs), tags, sp.indirection)
            self.write_each(lambda m, pd: m.update_ptr(Location(block_id, 0), pd, blk.ty),
                            pointer_parts(updated, self.q))

    # Private if

    def condition_bit(self, expr, cond):
        """0/1 sharing of the guard."""
        if cond.is_pointer:
            raise LabelFault("private pointer used as a condition")
        if isinstance(expr, ast.BinOp) and expr.op in COMPARISONS:
            return cond.parts
        zero = self.suite.encrypt(0, cond.ty.bty)
        return self.suite.mpc_cmp("!=", cond.parts, zero, cond.ty.bty)

    def choose_scheme(self, j):
        if self.tracking == "variable" and j:
            logger.warning("variable tracking cannot follow pointer or public-index writes; using location tracking")
            return "location"
        if self.tracking == "location":
            return "location"
        return "location" if j else "variable"

    def eval_private_if(self, s, cond):
        res = self.condition_bit(s.cond, cond)
        for cb in self.callbacks:
            cb.on_private_branch(self, s, res)
        if self.legacy:
            self.legacy_if(s, res)
        else:
            x_mod, j = dyn_extract(s.then, s.orelse, self.env)
            x_mod = [x for x in x_mod if self.env.has(x) and self.env.type_of(x).is_private]
            scheme = self.choose_scheme(j)
            logger.debug("private if: x_mod=%s j=%d scheme=%s", x_mod, j, scheme)
            self.enter_branch()
            try:
                with self.trace.hidden_region():
                    if scheme == "variable":
                        self.variable_tracking(s, res, x_mod)
                    else:
                        self.location_tracking(s, res, x_mod)
            finally:
                self.leave_branch()
            self.emit("iep" if scheme == "variable" else "iepd")
        for cb in self.callbacks:
            cb.on_private_branch_end(self, s)

    def enter_branch(self):
        self.acc += 1
        self.trace.record_acc(self.acc)

    def leave_branch(self):
        self.acc -= 1
        self.trace.record_acc(self.acc)

    def variable_tracking(self, s, res, x_mod):
        level = self.acc
        saved = self.env
        self.env = saved.child()
        scaffolding = []
        try:
            # InitializeVariables
            res_loc = self.allocate(PRIVATE_INT, 1)
            scaffolding.append(res_loc.block)
            self.write_each(lambda m, v: m.update_val(res_loc, v, PRIVATE_INT), res)
            self.env.declare_temp(f"res_{level}", res_loc, PRIVATE_INT)
            slots = []
            for x in x_mod:
                slot = slot_of(saved, self.layout, x)
                count = self.layout.block(slot.block).count
                then_loc = self.allocate(slot.ty, count if slot.kind == "arr" else 1)
                else_loc = self.allocate(slot.ty, count if slot.kind == "arr" else 1)
                scaffolding += [then_loc.block, else_loc.block]
                copy_block(self.memories, slot.block, then_loc.block)
                copy_block(self.memories, slot.block, else_loc.block)
                self.env.declare_temp(f"{x}_then_{level}", then_loc, slot.ty)
                self.env.declare_temp(f"{x}_else_{level}", else_loc, slot.ty)
                slots.append((slot, then_loc.block, else_loc.block))

            self.eval_scoped(s.then)

            # RestoreVariables
            for slot, then_block, else_block in slots:
                copy_block(self.memories, slot.block, then_block)
                copy_block(self.memories, else_block, slot.block)

            if s.orelse is not None:
                self.eval_scoped(s.orelse)

            # ResolveVariables_Retrieve, then ResolveVariables_Store
            pairs = []
            for slot, then_block, _ in slots:
                then = snapshot(self.memories, Location(then_block, 0), slot.kind, slot.ty)
                orelse = snapshot(self.memories, Location(slot.block, 0), slot.kind, slot.ty)
                pairs.append((shared_value(then, slot.kind, slot.ty, self.sizes),
                              shared_value(orelse, slot.kind, slot.ty, self.sizes)))
            for (slot, _, _), (then, orelse) in zip(slots, pairs):
                resolved = self.suite.mpc_resolve(res, then, orelse)
                restore(self.memories, Location(slot.block, 0), slot.kind,
                        encode_shared(resolved, slot.kind, slot.ty, self.sizes, self.q))
        finally:
            self.env = saved
            self.release(scaffolding)

    def location_tracking(self, s, res, x_mod):
        level = self.delta.push()
        try:
            # DynInitialize
            for x in x_mod:
                slot = slot_of(self.env, self.layout, x)
                loc = Location(slot.block, 0)
                level[(loc, slot.kind)] = DeltaEntry(loc, slot.kind, slot.ty,
                                                     snapshot(self.memories, loc, slot.kind, slot.ty))
            self.eval_scoped(s.then)
            dyn_restore(level, self.memories)
            if s.orelse is not None:
                self.eval_scoped(s.orelse)
            dyn_resolve(level, self.memories, self.suite, res)
        finally:
            self.delta.pop()

    # Per-statement resolution

    def legacy_if(self, s, res):
        self.enter_branch()
        try:
            with self.trace.hidden_region():
                self.legacy_branch(s.then, res)
                if s.orelse is not None:
                    self.legacy_branch(s.orelse, self.suite.complement(res))
        finally:
            self.leave_branch()
        self.emit("iep")

    def legacy_branch(self, s, cond):
        """Statements of a branch, each assignment resolved under cond right away."""
        if s is None or isinstance(s, ast.Skip):
            return
        if isinstance(s, ast.Block):
            saved = self.env
            self.env = saved.child()
            try:
                for inner in s.stmts:
                    self.legacy_branch(inner, cond)
            finally:
                self.env = saved
        elif isinstance(s, ast.Decl):
            self.eval_decl(s)
        elif isinstance(s, ast.Assign) and isinstance(s.target, ast.Var):
            value = self.eval_expr(s.value)
            self._legacy_commit(s.target.name, value, cond)
        elif isinstance(s, ast.ExprStmt) and isinstance(s.expr, ast.PreInc):
            loc, ty = self.env.lookup(s.expr.name)
            old = self._read_slot(loc, ty)
            new = self.eval_preinc(s.expr)
            self._legacy_commit(s.expr.name, new, cond, old)
        elif isinstance(s, ast.If):
            guard = self.eval_expr(s.cond)
            if not guard.is_private:
                raise UnsupportedConstruct("public if inside a per-statement resolved branch")
            inner = self.condition_bit(s.cond, guard)
            self.legacy_branch(s.then, self.suite.mpc_mult(cond, inner))
            if s.orelse is not None:
                self.legacy_branch(s.orelse, self.suite.mpc_mult(cond, self.suite.complement(inner)))
        else:
            raise UnsupportedConstruct(f"{type(s).__name__} under per-statement resolution")

    def _read_slot(self, loc, ty):
        if isinstance(ty, Ptr):
            return Value(ty, tuple(m.read_ptr(loc) for m in self.memories))
        return self.read_var_silent(loc, ty)

    def _legacy_commit(self, name, value, cond, old=None):
        loc, ty = self.env.lookup(name)
        if not ty.is_private:
            self.assert_acc_zero(f"write to public '{name}'")
        stored = self.coerce(value, ty)
        current = old if old is not None else self._read_slot(loc, ty)
        if isinstance(ty, Ptr):
            resolved = self.suite.mpc_resolve(cond, shared_pointer(stored.parts), shared_pointer(current.parts))
            self.write_each(lambda m, pd: m.update_ptr(loc, pd, ty), pointer_parts(resolved, self.q))
        else:
            resolved = self.suite.mpc_resolve(cond, stored.parts, current.parts)
            self.write_each(lambda m, v: m.update_val(loc, v, ty), resolved)
        self.touch(loc.block, 0)
        self.emit("w1")


def smc2_eval(program, inputs=None, seed=None, **options):
    """
    Run an SMC² program

    Args:
        program: Program AST with labels
        inputs: InputSet
        seed: protocol randomness seed
        options: further Smc2Interpreter arguments

    Returns:
        RunResult (memories, trace, ψ, outputs, rounds)
    """
    if inputs is not None and "params" not in options:
        options.setdefault("parties", inputs.parties)
    return Smc2Interpreter(inputs=inputs, seed=seed, **options).run(program)
