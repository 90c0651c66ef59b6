"""Program Erasure: SMC² Source to Vanilla C Source"""

from dataclasses import replace

from lang import ast
from lang.labels import TypeEnv, label_of
from lang.types import ConstArrPtr, Fun, PrivacyLabel, Ptr, with_label


def erase_type(ty):
    """Same shape, no label."""
    return with_label(ty, None)


def is_pointer_expr(e, env) -> bool:
    """Whether e evaluates to a pointer (arrays decay)."""
    if isinstance(e, (ast.AddrOf, ast.Null, ast.Malloc, ast.PMalloc)):
        return True
    if isinstance(e, (ast.Var, ast.PreInc)):
        return isinstance(env.type_of(e.name), (Ptr, ConstArrPtr))
    if isinstance(e, ast.Deref):
        target = _pointer_type(e.target, env)
        return isinstance(target, Ptr) and target.indirection > 1
    if isinstance(e, ast.BinOp) and e.op in ("+", "-"):
        return is_pointer_expr(e.left, env) or is_pointer_expr(e.right, env)
    if isinstance(e, ast.Cast):
        return isinstance(e.ty, Ptr)
    return False


def _pointer_type(e, env):
    if isinstance(e, (ast.Var, ast.PreInc)):
        ty = env.type_of(e.name)
        return Ptr(ty.label, ty.bty, 1) if isinstance(ty, ConstArrPtr) else ty
    if isinstance(e, ast.Deref):
        inner = _pointer_type(e.target, env)
        if isinstance(inner, Ptr) and inner.indirection > 1:
            return Ptr(inner.label, inner.bty, inner.indirection - 1)
        return None
    if isinstance(e, ast.BinOp):
        return _pointer_type(e.left, env) or _pointer_type(e.right, env)
    if isinstance(e, ast.Cast):
        return e.ty if isinstance(e.ty, Ptr) else None
    return None


def _private(e, env):
    return label_of(e, env) == PrivacyLabel.PRIVATE


def erase_expr(e, env):
    """
    Erase one expression

    Args:
        e: SMC² expression
        env: TypeEnv-like object giving the labelled types in scope

    Returns:
        unlabeled expression; nodes computed on private data carry `multiparty`
    """
    if isinstance(e, (ast.Num, ast.Null, ast.Var, ast.AddrOf, ast.PreInc)):
        return replace(e)
    if isinstance(e, ast.Index):
        return ast.Index(e.name, erase_expr(e.index, env), multiparty=_private(e.index, env))
    if isinstance(e, ast.Deref):
        return ast.Deref(erase_expr(e.target, env))
    if isinstance(e, ast.BinOp):
        pointer = is_pointer_expr(e.left, env) or is_pointer_expr(e.right, env)
        return ast.BinOp(e.op, erase_expr(e.left, env), erase_expr(e.right, env),
                         multiparty=not pointer and _private(e, env))
    if isinstance(e, ast.Call):
        return ast.Call(e.name, erase_lists(e.args, env))
    if isinstance(e, ast.Cast):
        return ast.Cast(erase_type(e.ty), erase_expr(e.expr, env))
    if isinstance(e, ast.Sizeof):
        return ast.Sizeof(erase_type(e.ty))
    if isinstance(e, ast.Malloc):
        return ast.Malloc(erase_expr(e.size, env))
    if isinstance(e, ast.PMalloc):
        return ast.Malloc(ast.BinOp("*", ast.Sizeof(erase_type(e.ty)), erase_expr(e.count, env)))
    if isinstance(e, (ast.Free, ast.PFree)):
        return ast.Free(erase_expr(e.target, env))
    if isinstance(e, ast.INPUT_PRIMS):
        return ast.McInput(erase_expr(e.target, env), erase_expr(e.party, env),
                           None if e.length is None else erase_expr(e.length, env))
    if isinstance(e, ast.OUTPUT_PRIMS):
        return ast.McOutput(erase_expr(e.target, env), erase_expr(e.party, env),
                            None if e.length is None else erase_expr(e.length, env))
    raise TypeError(f"unknown expression {e!r}")


def erase_lists(items, env):
    """Erase a list of expressions, parameters or types."""
    erased = []
    for item in items:
        if isinstance(item, ast.Param):
            erased.append(ast.Param(erase_type(item.ty), item.name))
        elif isinstance(item, ast.Expr):
            erased.append(erase_expr(item, env))
        else:
            erased.append(erase_type(item))
    return erased


def erase_stmt(s, env):
    """
    Erase one statement

    Args:
        s: SMC² statement
        env: TypeEnv; declarations made by s are added to it

    Returns:
        unlabeled statement
    """
    if isinstance(s, ast.Skip):
        return ast.Skip()
    if isinstance(s, ast.ExprStmt):
        return ast.ExprStmt(erase_expr(s.expr, env))
    if isinstance(s, ast.Decl):
        size = None if s.size is None else erase_expr(s.size, env)
        if isinstance(s.init, list):
            init = erase_lists(s.init, env)
        else:
            init = None if s.init is None else erase_expr(s.init, env)
        env.declare(s.name, ConstArrPtr(s.ty.label, s.ty.bty) if s.is_array else s.ty)
        return ast.Decl(erase_type(s.ty), s.name, size, init)
    if isinstance(s, ast.Assign):
        return ast.Assign(erase_expr(s.target, env), erase_expr(s.value, env))
    if isinstance(s, ast.If):
        cond = erase_expr(s.cond, env)
        then = _scoped(s.then, env)
        orelse = None if s.orelse is None else _scoped(s.orelse, env)
        return ast.If(cond, then, orelse, multiparty=_private(s.cond, env))
    if isinstance(s, ast.While):
        return ast.While(erase_expr(s.cond, env), _scoped(s.body, env))
    if isinstance(s, ast.Block):
        env.push()
        try:
            return ast.Block([erase_stmt(inner, env) for inner in s.stmts])
        finally:
            env.pop()
    if isinstance(s, ast.FunDef):
        fty = Fun(tuple(p.ty for p in s.params), s.ret)
        env.declare(s.name, fty)
        body = None
        if s.body is not None:
            env.push()
            try:
                for p in s.params:
                    env.declare(p.name, p.ty)
                body = erase_stmt(s.body, env)
            finally:
                env.pop()
        return ast.FunDef(erase_type(s.ret), s.name, erase_lists(s.params, env), body)
    raise TypeError(f"unknown statement {s!r}")


def _scoped(s, env):
    env.push()
    try:
        return erase_stmt(s, env)
    finally:
        env.pop()


def erase_program(program: ast.Program, env=None) -> ast.Program:
    """Erased program; `env` is an outer TypeEnv-like scope (for function bodies)."""
    types = TypeEnv(parent=env)
    return ast.Program([erase_stmt(s, types) for s in program.stmts])


def erase_fundef(fundef, closure):
    """Erased function definition as stored in a function block."""
    types = TypeEnv(parent=closure)
    return erase_stmt(fundef, types)
