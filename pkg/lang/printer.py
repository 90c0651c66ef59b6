"""Pretty-Printer emitting the .sc Dialect"""

from lang import ast
from lang.types import Base, BaseType, Ptr

INDENT = "    "

PRECEDENCE = {"==": 1, "!=": 1, "<": 2, "+": 3, "-": 3, "*": 4, "/": 4}


def type_text(ty):
    """Declaration-position rendering of a type, e.g. `private int*`."""
    label = getattr(ty, "label", None)
    prefix = f"{label} " if label is not None and not (isinstance(ty, Base) and ty.bty == BaseType.VOID) else ""
    stars = "*" * ty.indirection if isinstance(ty, Ptr) else ""
    return f"{prefix}{ty.bty}{stars}"


def expr_text(e, parent_prec=0, right=False):
    if isinstance(e, ast.Num):
        if isinstance(e.value, float):
            return repr(e.value)
        return str(e.value)
    if isinstance(e, ast.Null):
        return "NULL"
    if isinstance(e, ast.Var):
        return e.name
    if isinstance(e, ast.Index):
        return f"{e.name}[{expr_text(e.index)}]"
    if isinstance(e, ast.Deref):
        return f"*{expr_text(e.target, 5)}"
    if isinstance(e, ast.AddrOf):
        return f"&{e.name}"
    if isinstance(e, ast.PreInc):
        return f"++{e.name}"
    if isinstance(e, ast.BinOp):
        prec = PRECEDENCE[e.op]
        text = f"{expr_text(e.left, prec)} {e.op} {expr_text(e.right, prec, right=True)}"
        # Left-associative: an equal-precedence right operand needs parentheses
        if prec < parent_prec or (right and prec == parent_prec):
            return f"({text})"
        return text
    if isinstance(e, ast.Call):
        return f"{e.name}({', '.join(expr_text(a) for a in e.args)})"
    if isinstance(e, ast.Cast):
        return f"({type_text(e.ty)}) {expr_text(e.expr, 5)}"
    if isinstance(e, ast.Sizeof):
        return f"sizeof({type_text(e.ty)})"
    if isinstance(e, ast.Malloc):
        return f"malloc({expr_text(e.size)})"
    if isinstance(e, ast.PMalloc):
        return f"pmalloc({expr_text(e.count)}, {type_text(e.ty)})"
    if isinstance(e, ast.Free):
        return f"free({expr_text(e.target)})"
    if isinstance(e, ast.PFree):
        return f"pfree({expr_text(e.target)})"
    if isinstance(e, ast.INPUT_PRIMS + ast.OUTPUT_PRIMS):
        name = {
            ast.SmcInput: "smcinput", ast.SmcOutput: "smcoutput",
            ast.McInput: "mcinput", ast.McOutput: "mcoutput",
        }[type(e)]
        args = [expr_text(e.target)]
        if e.length is not None:
            args.append(expr_text(e.length))
        args.append(expr_text(e.party))
        return f"{name}({', '.join(args)})"
    raise TypeError(f"cannot print expression {e!r}")


def decl_text(d):
    if d.is_array:
        text = f"{type_text(d.ty)} {d.name}[{expr_text(d.size)}]"
        if d.init is not None:
            text += " = {" + ", ".join(expr_text(v) for v in d.init) + "}"
        return text + ";"
    text = f"{type_text(d.ty)} {d.name}"
    if d.init is not None:
        text += f" = {expr_text(d.init)}"
    return text + ";"


def stmt_lines(s, depth):
    pad = INDENT * depth
    if isinstance(s, ast.Skip):
        return [pad + ";"]
    if isinstance(s, ast.ExprStmt):
        return [pad + expr_text(s.expr) + ";"]
    if isinstance(s, ast.Decl):
        return [pad + decl_text(s)]
    if isinstance(s, ast.Assign):
        return [pad + f"{expr_text(s.target)} = {expr_text(s.value)};"]
    if isinstance(s, ast.Block):
        lines = [pad + "{"]
        for inner in s.stmts:
            lines.extend(stmt_lines(inner, depth + 1))
        return lines + [pad + "}"]
    if isinstance(s, ast.If):
        lines = [pad + f"if ({expr_text(s.cond)})"] + _body(s.then, depth)
        if s.orelse is not None:
            lines += [pad + "else"] + _body(s.orelse, depth)
        return lines
    if isinstance(s, ast.While):
        return [pad + f"while ({expr_text(s.cond)})"] + _body(s.body, depth)
    if isinstance(s, ast.FunDef):
        params = ", ".join(f"{type_text(p.ty)} {p.name}" for p in s.params)
        head = pad + f"{type_text(s.ret)} {s.name}({params})"
        if s.body is None:
            return [head + ";"]
        return [head] + stmt_lines(s.body, depth)
    raise TypeError(f"cannot print statement {s!r}")


def _body(s, depth):
    if isinstance(s, ast.Block):
        return stmt_lines(s, depth)
    return stmt_lines(s, depth + 1)


def pretty(node) -> str:
    """
    Render a Program, statement or expression as source text

    Args:
        node: AST node

    Returns:
        Source text in the same dialect the parser reads
    """
    if isinstance(node, ast.Program):
        lines = []
        for s in node.stmts:
            lines.extend(stmt_lines(s, 0))
        return "\n".join(lines) + ("\n" if lines else "")
    if isinstance(node, ast.Stmt):
        return "\n".join(stmt_lines(node, 0))
    return expr_text(node)
