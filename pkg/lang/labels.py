"""Privacy-Label Inference and Side-Effect Analysis"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from lang import ast
from lang.errors import UnboundVariable
from lang.types import ConstArrPtr, Fun, PrivacyLabel, join


@dataclass
class FunctionSummary:
    """Facts about a function body, computed once at declaration time."""

    public_side_effects: bool = False
    globals_written: List[str] = field(default_factory=list)
    location_writes: bool = False  # deref writes or public-index array writes


class TypeEnv:
    """
    Static scoped mapping of names to types and function summaries

    The runtime environment (memory.env.Env) offers the same `type_of` /
    `summary_of` interface, so both can be passed wherever a TypeEnv is expected.
    """

    def __init__(self, parent=None):
        self.scopes: List[Dict[str, object]] = [{}]
        self.summaries: Dict[str, FunctionSummary] = {}
        self.parent = parent

    def declare(self, name, ty, summary: Optional[FunctionSummary] = None):
        self.scopes[-1][name] = ty
        if summary is not None:
            self.summaries[name] = summary

    def push(self):
        self.scopes.append({})

    def pop(self):
        self.scopes.pop()

    def has(self, name):
        try:
            self.type_of(name)
            return True
        except UnboundVariable:
            return False

    def type_of(self, name):
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        if self.parent is not None:
            return self.parent.type_of(name)
        raise UnboundVariable(f"'{name}' is not declared")

    def summary_of(self, name):
        if name in self.summaries:
            return self.summaries[name]
        if self.parent is not None:
            return self.parent.summary_of(name)
        return None


def label_of(e: ast.Expr, env) -> PrivacyLabel:
    """
    Privacy label of an expression

    Args:
        e: expression
        env: TypeEnv-like object (type_of(name))

    Returns:
        PRIVATE iff e reads a private variable or dereferences a private pointer
    """
    if isinstance(e, (ast.Num, ast.Null, ast.Sizeof, ast.AddrOf, ast.Malloc, ast.PMalloc,
                      ast.Free, ast.PFree)):
        return PrivacyLabel.PUBLIC
    if isinstance(e, ast.INPUT_PRIMS + ast.OUTPUT_PRIMS):
        return PrivacyLabel.PUBLIC
    if isinstance(e, (ast.Var, ast.PreInc)):
        return env.type_of(e.name).effective_label
    if isinstance(e, ast.Index):
        return join(env.type_of(e.name).effective_label, label_of(e.index, env))
    if isinstance(e, ast.Deref):
        return label_of(e.target, env)
    if isinstance(e, ast.BinOp):
        return join(label_of(e.left, env), label_of(e.right, env))
    if isinstance(e, ast.Cast):
        return label_of(e.expr, env)
    if isinstance(e, ast.Call):
        # Procedure calls evaluate to skip
        env.type_of(e.name)
        return PrivacyLabel.PUBLIC
    raise TypeError(f"unknown expression {e!r}")


def _is_public_target(target, env):
    if isinstance(target, ast.Var):
        return not env.type_of(target.name).is_private
    if isinstance(target, ast.Index):
        return not env.type_of(target.name).is_private
    if isinstance(target, ast.Deref):
        # *p writes data of p's label
        return label_of(target.target, env) == PrivacyLabel.PUBLIC
    return False


def _expr_side_effects(e, env):
    for node in ast.walk(e):
        if isinstance(node, (ast.Malloc, ast.PMalloc, ast.Free, ast.PFree)):
            return True
        if isinstance(node, ast.INPUT_PRIMS + ast.OUTPUT_PRIMS):
            return True
        if isinstance(node, ast.PreInc) and not env.type_of(node.name).is_private:
            return True
        if isinstance(node, ast.Call):
            summary = env.summary_of(node.name)
            if summary is not None and summary.public_side_effects:
                return True
    return False


def has_public_side_effects(s: ast.Stmt, env) -> bool:
    """
    Whether a statement has public side effects

    Args:
        s: statement
        env: TypeEnv-like object; local declarations inside s are scoped here

    Returns:
        True iff s (through called functions too) writes a public variable,
        allocates, frees, or performs smcinput/smcoutput
    """
    scoped = TypeEnv(parent=env)
    return _stmt_side_effects(s, scoped)


def _stmt_side_effects(s, env):
    if isinstance(s, ast.Block):
        env.push()
        try:
            return any(_stmt_side_effects(inner, env) for inner in s.stmts)
        finally:
            env.pop()
    if isinstance(s, ast.Decl):
        found = any(_expr_side_effects(c, env) for c in ast.children(s))
        if s.is_array:
            env.declare(s.name, ConstArrPtr(s.ty.label, s.ty.bty))
        else:
            env.declare(s.name, s.ty)
        return found or (s.init is not None and not s.ty.is_private)
    if isinstance(s, ast.Assign):
        return (_is_public_target(s.target, env)
                or _expr_side_effects(s.target, env)
                or _expr_side_effects(s.value, env))
    if isinstance(s, ast.ExprStmt):
        return _expr_side_effects(s.expr, env)
    if isinstance(s, ast.If):
        if _expr_side_effects(s.cond, env):
            return True
        branches = [s.then] + ([s.orelse] if s.orelse is not None else [])
        return any(_scoped(b, env) for b in branches)
    if isinstance(s, ast.While):
        return _expr_side_effects(s.cond, env) or _scoped(s.body, env)
    if isinstance(s, ast.FunDef):
        return False
    return False


def _scoped(s, env):
    env.push()
    try:
        return _stmt_side_effects(s, env)
    finally:
        env.pop()


class ModifiedNames:
    """
    Scoped walk collecting the outer names a statement modifies

    Names declared inside the walked code shadow outer ones only within their
    own block. `j` is set when a write goes through a pointer or a public array
    index, or when a called function does so.
    """

    def __init__(self, env, local_names=()):
        self.types = TypeEnv(parent=env)
        self.locals = [set(local_names)]
        self.x_mod: List[str] = []
        self.j = 0

    def is_local(self, name):
        return any(name in scope for scope in self.locals)

    def add(self, name):
        if not self.is_local(name) and name not in self.x_mod:
            self.x_mod.append(name)

    def scoped(self, s):
        self.locals.append(set())
        self.types.push()
        try:
            self.stmt(s)
        finally:
            self.types.pop()
            self.locals.pop()

    def stmt(self, s):
        if s is None or isinstance(s, ast.Skip):
            return
        if isinstance(s, ast.Decl):
            for e in ast.children(s):
                self.expr(e)
            self.locals[-1].add(s.name)
            self.types.declare(s.name, ConstArrPtr(s.ty.label, s.ty.bty) if s.is_array else s.ty)
        elif isinstance(s, ast.Assign):
            target = s.target
            if isinstance(target, ast.Var):
                self.add(target.name)
            elif isinstance(target, ast.Index):
                self.expr(target.index)
                if label_of(target.index, self.types) == PrivacyLabel.PRIVATE:
                    self.add(target.name)
                else:
                    self.j = 1
            elif isinstance(target, ast.Deref):
                self.expr(target.target)
                self.j = 1
            self.expr(s.value)
        elif isinstance(s, ast.ExprStmt):
            self.expr(s.expr)
        elif isinstance(s, ast.If):
            self.expr(s.cond)
            self.scoped(s.then)
            if s.orelse is not None:
                self.scoped(s.orelse)
        elif isinstance(s, ast.While):
            self.expr(s.cond)
            self.scoped(s.body)
        elif isinstance(s, ast.Block):
            self.locals.append(set())
            self.types.push()
            try:
                for inner in s.stmts:
                    self.stmt(inner)
            finally:
                self.types.pop()
                self.locals.pop()
        elif isinstance(s, ast.FunDef):
            self.locals[-1].add(s.name)

    def expr(self, e):
        for node in ast.walk(e):
            if isinstance(node, ast.PreInc):
                self.add(node.name)
            elif isinstance(node, ast.Call):
                summary = self.types.summary_of(node.name)
                if summary is None:
                    continue
                for name in summary.globals_written:
                    self.add(name)
                if summary.location_writes:
                    self.j = 1


def summarize_function(fundef: ast.FunDef, env) -> FunctionSummary:
    """
    Side-effect summary of a function definition

    Args:
        fundef: definition (body not None)
        env: TypeEnv-like object at the definition point

    Returns:
        FunctionSummary
    """
    scoped = TypeEnv(parent=env)
    # The function's own name is visible in its body; recursion adds nothing new
    scoped.declare(fundef.name, Fun(tuple(p.ty for p in fundef.params), fundef.ret), FunctionSummary())
    for p in fundef.params:
        scoped.declare(p.name, p.ty)
    summary = FunctionSummary()
    if fundef.body is None:
        return summary
    summary.public_side_effects = _stmt_side_effects(fundef.body, scoped)
    writes = ModifiedNames(scoped, local_names=[p.name for p in fundef.params])
    writes.stmt(fundef.body)
    summary.globals_written = writes.x_mod
    summary.location_writes = bool(writes.j)
    return summary
