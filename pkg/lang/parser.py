"""Recursive-Descent Parser for the Combined Vanilla C / SMC² Grammar"""

from lang import ast
from lang.errors import SmcSyntaxError, UnsupportedConstruct
from lang.lexer import tokenize
from lang.types import Base, BaseType, Fun, PrivacyLabel, Ptr

LABELS = {"private": PrivacyLabel.PRIVATE, "public": PrivacyLabel.PUBLIC}
BASE_TYPES = {"int": BaseType.INT, "float": BaseType.FLOAT, "void": BaseType.VOID}

# C precedence, loosest first
BINARY_LEVELS = [("==", "!="), ("<",), ("+", "-"), ("*", "/")]


class Parser:
    """
    Parser over a token list

    Args:
        source: program text
        vanilla: parse the unlabeled Vanilla C view (labels rejected, kept None)
    """

    def __init__(self, source, vanilla=False):
        self.tokens = tokenize(source)
        self.pos = 0
        self.vanilla = vanilla

    # Token helpers

    @property
    def tok(self):
        return self.tokens[self.pos]

    def peek(self, offset=1):
        index = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def at(self, *types):
        return self.tok.typ in types

    def advance(self):
        tok = self.tok
        if tok.typ != "eof":
            self.pos += 1
        return tok

    def expect(self, typ, what=None):
        if self.tok.typ != typ:
            self.error(f"expected {what or repr(typ)}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def error(self, message, tok=None):
        tok = tok or self.tok
        raise SmcSyntaxError(message, tok.line, tok.col)

    def where(self, tok=None):
        tok = tok or self.tok
        return (tok.line, tok.col)

    # Types

    def starts_type(self):
        return self.at(*LABELS, *BASE_TYPES, "const")

    def parse_label(self):
        if self.at(*LABELS):
            tok = self.advance()
            if self.vanilla:
                raise UnsupportedConstruct("privacy labels in a Vanilla C source", tok.line, tok.col)
            return LABELS[tok.typ], True
        return None, False

    def default_label(self, label, explicit, bty):
        if self.vanilla:
            return None
        if explicit:
            return label
        # Unlabeled int/float (and pointers to them) default to private
        return PrivacyLabel.PUBLIC if bty == BaseType.VOID else PrivacyLabel.PRIVATE

    def parse_base(self):
        """label? const? bty -> (label, explicit, bty)"""
        label, explicit = self.parse_label()
        if self.at("const"):
            tok = self.advance()
            raise UnsupportedConstruct("const declarations", tok.line, tok.col)
        if not self.at(*BASE_TYPES):
            self.error("expected a type")
        bty = BASE_TYPES[self.advance().typ]
        if bty == BaseType.VOID and label == PrivacyLabel.PRIVATE:
            self.error("void cannot be private")
        return label, explicit, bty

    def build_type(self, label, explicit, bty, stars):
        label = self.default_label(label, explicit, bty)
        if stars:
            return Ptr(label, bty, stars)
        if bty == BaseType.VOID:
            return Base(None if self.vanilla else PrivacyLabel.PUBLIC, bty)
        return Base(label, bty)

    def parse_type(self):
        """Type expression used by casts, sizeof and pmalloc."""
        label, explicit, bty = self.parse_base()
        stars = 0
        while self.at("*"):
            self.advance()
            stars += 1
        return self.build_type(label, explicit, bty, stars)

    # Program and statements

    def parse_program(self):
        stmts = []
        while not self.at("eof"):
            stmts.extend(self.parse_statement_list_item())
        return ast.Program(stmts)

    def parse_statement_list_item(self):
        """One statement, or several when a declaration lists multiple names."""
        if self.starts_type():
            return self.parse_declaration()
        return [self.parse_statement()]

    def parse_statement(self):
        start = self.tok
        if self.at("{"):
            return self.parse_block()
        if self.at(";"):
            self.advance()
            return ast.Skip(pos=self.where(start))
        if self.at("if"):
            self.advance()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            then = self.parse_statement()
            orelse = None
            if self.at("else"):
                self.advance()
                orelse = self.parse_statement()
            return ast.If(cond, then, orelse, pos=self.where(start))
        if self.at("while"):
            self.advance()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            body = self.parse_statement()
            return ast.While(cond, body, pos=self.where(start))
        if self.starts_type():
            raise UnsupportedConstruct("declaration as an unbraced statement body", start.line, start.col)
        target = self.parse_expr()
        if self.at("="):
            self.advance()
            if not isinstance(target, (ast.Var, ast.Index, ast.Deref)):
                self.error("left side of assignment is not assignable", start)
            value = self.parse_expr()
            self.expect(";")
            return ast.Assign(target, value, pos=self.where(start))
        self.expect(";")
        return ast.ExprStmt(target, pos=self.where(start))

    def parse_block(self):
        start = self.expect("{")
        stmts = []
        while not self.at("}"):
            if self.at("eof"):
                self.error("unterminated block", start)
            stmts.extend(self.parse_statement_list_item())
        self.advance()
        return ast.Block(stmts, pos=self.where(start))

    def parse_declaration(self):
        label, explicit, bty = self.parse_base()
        decls = []
        while True:
            stars = 0
            while self.at("*"):
                self.advance()
                stars += 1
            name_tok = self.expect("name", "a declarator name")
            ty = self.build_type(label, explicit, bty, stars)
            if self.at("("):
                if decls:
                    self.error("function definition inside a declaration list", name_tok)
                return [self.parse_function(ty, name_tok)]
            if self.at("["):
                self.advance()
                size = self.parse_expr()
                self.expect("]")
                if self.at("["):
                    raise UnsupportedConstruct("multi-dimensional arrays", self.tok.line, self.tok.col)
                if stars:
                    raise UnsupportedConstruct("arrays of pointers", name_tok.line, name_tok.col)
                init = None
                if self.at("="):
                    self.advance()
                    self.expect("{")
                    init = []
                    if not self.at("}"):
                        init.append(self.parse_expr())
                        while self.at(","):
                            self.advance()
                            init.append(self.parse_expr())
                    self.expect("}")
                decls.append(ast.Decl(ty, name_tok.text, size, init, pos=self.where(name_tok)))
            else:
                if bty == BaseType.VOID and not stars:
                    self.error("variable of type void", name_tok)
                init = None
                if self.at("="):
                    self.advance()
                    init = self.parse_expr()
                decls.append(ast.Decl(ty, name_tok.text, None, init, pos=self.where(name_tok)))
            if self.at(","):
                self.advance()
                continue
            self.expect(";")
            return decls

    def parse_function(self, ret, name_tok):
        self.expect("(")
        params = []
        if self.at("void") and self.peek().typ == ")":
            self.advance()
        elif not self.at(")"):
            params.append(self.parse_param())
            while self.at(","):
                self.advance()
                params.append(self.parse_param())
        self.expect(")")
        body = None
        if self.at("{"):
            body = self.parse_block()
        else:
            self.expect(";", "';' or a function body")
        return ast.FunDef(ret, name_tok.text, params, body, pos=self.where(name_tok))

    def parse_param(self):
        label, explicit, bty = self.parse_base()
        stars = 0
        while self.at("*"):
            self.advance()
            stars += 1
        name_tok = self.expect("name", "a parameter name")
        if self.at("["):
            raise UnsupportedConstruct("array parameters", self.tok.line, self.tok.col)
        return ast.Param(self.build_type(label, explicit, bty, stars), name_tok.text)

    # Expressions

    def parse_expr(self, level=0):
        if level == len(BINARY_LEVELS):
            return self.parse_unary()
        left = self.parse_expr(level + 1)
        while self.at(*BINARY_LEVELS[level]):
            op_tok = self.advance()
            right = self.parse_expr(level + 1)
            left = ast.BinOp(op_tok.typ, left, right, pos=self.where(op_tok))
        return left

    def parse_unary(self):
        start = self.tok
        if self.at("&"):
            self.advance()
            name = self.expect("name", "a variable after '&'")
            return ast.AddrOf(name.text, pos=self.where(start))
        if self.at("*"):
            self.advance()
            return ast.Deref(self.parse_unary(), pos=self.where(start))
        if self.at("++"):
            self.advance()
            name = self.expect("name", "a variable after '++'")
            return ast.PreInc(name.text, pos=self.where(start))
        if self.at("-") and self.peek().typ in ("num", "fnum"):
            self.advance()
            return self.parse_number(self.advance(), negate=True)
        if self.at("(") and self.peek().typ in (*LABELS, *BASE_TYPES):
            self.advance()
            ty = self.parse_type()
            self.expect(")")
            return ast.Cast(ty, self.parse_unary(), pos=self.where(start))
        return self.parse_primary()

    def parse_number(self, tok, negate=False):
        value = float(tok.text) if tok.typ == "fnum" else int(tok.text)
        return ast.Num(-value if negate else value, pos=self.where(tok))

    def parse_primary(self):
        start = self.tok
        where = self.where(start)
        if self.at("num", "fnum"):
            return self.parse_number(self.advance())
        if self.at("NULL"):
            self.advance()
            return ast.Null(pos=where)
        if self.at("("):
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if self.at("sizeof"):
            self.advance()
            self.expect("(")
            ty = self.parse_type()
            self.expect(")")
            return ast.Sizeof(ty, pos=where)
        if self.at("malloc", "free", "pfree"):
            kind = self.advance().typ
            self.expect("(")
            arg = self.parse_expr()
            self.expect(")")
            if kind == "malloc":
                return ast.Malloc(arg, pos=where)
            if kind == "free":
                return ast.Free(arg, pos=where)
            self.reject_in_vanilla(start)
            return ast.PFree(arg, pos=where)
        if self.at("pmalloc"):
            self.reject_in_vanilla(start)
            self.advance()
            self.expect("(")
            count = self.parse_expr()
            self.expect(",")
            ty = self.parse_type()
            self.expect(")")
            return ast.PMalloc(count, ty, pos=where)
        if self.at("smcinput", "smcoutput", "mcinput", "mcoutput"):
            return self.parse_io()
        if self.at("name"):
            name = self.advance()
            if self.at("["):
                self.advance()
                index = self.parse_expr()
                self.expect("]")
                if self.at("["):
                    raise UnsupportedConstruct("multi-dimensional arrays", self.tok.line, self.tok.col)
                return ast.Index(name.text, index, pos=where)
            if self.at("("):
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self.parse_expr())
                    while self.at(","):
                        self.advance()
                        args.append(self.parse_expr())
                self.expect(")")
                return ast.Call(name.text, args, pos=where)
            return ast.Var(name.text, pos=where)
        self.error(f"unexpected {start.text or 'end of input'!r}")

    def reject_in_vanilla(self, tok):
        if self.vanilla:
            raise UnsupportedConstruct(f"{tok.text} in a Vanilla C source", tok.line, tok.col)

    def parse_io(self):
        start = self.tok
        kind = self.advance().typ
        if kind.startswith("smc"):
            self.reject_in_vanilla(start)
        self.expect("(")
        target = self.parse_primary()
        if not isinstance(target, (ast.Var, ast.Index)):
            self.error(f"{kind} expects a variable", start)
        args = []
        while self.at(","):
            self.advance()
            args.append(self.parse_expr())
        self.expect(")")
        if len(args) == 1:
            party, length = args[0], None
        elif len(args) == 2:
            # (var, length, party) for whole arrays
            length, party = args
        else:
            self.error(f"{kind} takes 2 or 3 arguments", start)
        node = {
            "smcinput": ast.SmcInput, "smcoutput": ast.SmcOutput,
            "mcinput": ast.McInput, "mcoutput": ast.McOutput,
        }[kind]
        return node(target, party, length, pos=self.where(start))


def parse(source: str, vanilla: bool = False) -> ast.Program:
    """
    Parse an SMC² (or, with vanilla=True, an unlabeled Vanilla C) source

    Args:
        source: program text
        vanilla: reject labels and SMC primitives, keep types unlabeled

    Returns:
        Program AST
    """
    return Parser(source, vanilla=vanilla).parse_program()


def parse_file(path, vanilla=False):
    with open(path, "r", encoding="utf-8") as f:
        return parse(f.read(), vanilla=vanilla)


def function_type(fundef: ast.FunDef) -> Fun:
    return Fun(tuple(p.ty for p in fundef.params), fundef.ret)
