"""AST of the Combined Vanilla C / SMC² Grammar"""

from dataclasses import dataclass, field
from typing import List, Optional, Union

from lang.types import Ty


def _pos():
    # (line, col) of the first token; ignored by equality
    return field(default=None, compare=False, repr=False)


def _marker():
    # set by erasure on nodes that came from private computation
    return field(default=False, compare=False, repr=False)


class Node:
    pass


class Expr(Node):
    pass


class Stmt(Node):
    pass


# Expressions

@dataclass(eq=True)
class Num(Expr):
    value: Union[int, float]
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class Null(Expr):
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class Var(Expr):
    name: str
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class Index(Expr):
    name: str
    index: Expr
    pos: Optional[tuple] = _pos()
    multiparty: bool = _marker()


@dataclass(eq=True)
class Deref(Expr):
    target: Expr
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class AddrOf(Expr):
    name: str
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class PreInc(Expr):
    name: str
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr
    pos: Optional[tuple] = _pos()
    multiparty: bool = _marker()


@dataclass(eq=True)
class Call(Expr):
    name: str
    args: List[Expr]
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class Cast(Expr):
    ty: Ty
    expr: Expr
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class Sizeof(Expr):
    ty: Ty
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class Malloc(Expr):
    size: Expr
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class PMalloc(Expr):
    count: Expr
    ty: Ty
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class Free(Expr):
    target: Expr
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class PFree(Expr):
    target: Expr
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class SmcInput(Expr):
    target: Expr
    party: Expr
    length: Optional[Expr] = None
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class SmcOutput(Expr):
    target: Expr
    party: Expr
    length: Optional[Expr] = None
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class McInput(Expr):
    target: Expr
    party: Expr
    length: Optional[Expr] = None
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class McOutput(Expr):
    target: Expr
    party: Expr
    length: Optional[Expr] = None
    pos: Optional[tuple] = _pos()


INPUT_PRIMS = (SmcInput, McInput)
OUTPUT_PRIMS = (SmcOutput, McOutput)


# Statements

@dataclass(eq=True)
class Skip(Stmt):
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class ExprStmt(Stmt):
    expr: Expr
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class Decl(Stmt):
    """`ty name`, `ty name = init`, `ty name[size]` or `ty name[size] = {..}`.

    For arrays `ty` is the element type and `size` is set; `init` is then a
    list of expressions.
    """

    ty: Ty
    name: str
    size: Optional[Expr] = None
    init: Optional[Union[Expr, List[Expr]]] = None
    pos: Optional[tuple] = _pos()

    @property
    def is_array(self):
        return self.size is not None


@dataclass(eq=True)
class Assign(Stmt):
    target: Expr
    value: Expr
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class If(Stmt):
    cond: Expr
    then: Stmt
    orelse: Optional[Stmt] = None
    pos: Optional[tuple] = _pos()
    multiparty: bool = _marker()


@dataclass(eq=True)
class While(Stmt):
    cond: Expr
    body: Stmt
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class Block(Stmt):
    stmts: List[Stmt]
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class Param:
    ty: Ty
    name: str


@dataclass(eq=True)
class FunDef(Stmt):
    """Definition when `body` is a Block, prototype when it is None."""

    ret: Ty
    name: str
    params: List[Param]
    body: Optional[Block] = None
    pos: Optional[tuple] = _pos()


@dataclass(eq=True)
class Program(Node):
    stmts: List[Stmt]


def children(node):
    """Direct sub-nodes in evaluation order."""
    if isinstance(node, (Program, Block)):
        return list(node.stmts)
    if isinstance(node, (Index,)):
        return [node.index]
    if isinstance(node, (Deref, Free, PFree)):
        return [node.target]
    if isinstance(node, BinOp):
        return [node.left, node.right]
    if isinstance(node, Call):
        return list(node.args)
    if isinstance(node, Cast):
        return [node.expr]
    if isinstance(node, Malloc):
        return [node.size]
    if isinstance(node, PMalloc):
        return [node.count]
    if isinstance(node, INPUT_PRIMS + OUTPUT_PRIMS):
        parts = [node.target, node.party]
        if node.length is not None:
            parts.insert(1, node.length)
        return parts
    if isinstance(node, ExprStmt):
        return [node.expr]
    if isinstance(node, Decl):
        parts = []
        if node.size is not None:
            parts.append(node.size)
        if isinstance(node.init, list):
            parts.extend(node.init)
        elif node.init is not None:
            parts.append(node.init)
        return parts
    if isinstance(node, Assign):
        return [node.target, node.value]
    if isinstance(node, If):
        return [node.cond, node.then] + ([node.orelse] if node.orelse is not None else [])
    if isinstance(node, While):
        return [node.cond, node.body]
    if isinstance(node, FunDef):
        return [node.body] if node.body is not None else []
    return []


def walk(node):
    """Pre-order traversal."""
    yield node
    for child in children(node):
        yield from walk(child)
