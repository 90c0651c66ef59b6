"""Tokenizer for .sc Sources"""

import re
from dataclasses import dataclass
from typing import List

from lang.errors import SmcSyntaxError, UnsupportedConstruct

KEYWORDS = {
    "private", "public", "int", "float", "void", "const", "if", "else", "while",
    "malloc", "pmalloc", "free", "pfree", "sizeof", "smcinput", "smcoutput",
    "mcinput", "mcoutput", "NULL",
}

# Constructs outside the grammar get a precise error instead of a parse failure
REJECTED = {
    "struct": "structs", "union": "unions", "for": "for loops",
    "do": "do-while loops", "switch": "switch statements", "return": "return statements",
    "goto": "goto", "typedef": "typedef", "char": "char type", "double": "double type",
    "long": "long type", "short": "short type", "unsigned": "unsigned types",
}

TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<fnum>[0-9]+\.[0-9]*|\.[0-9]+)
  | (?P<num>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op2>\+\+|==|!=)
  | (?P<rejected_op2>\+=|-=|\*=|/=|--|<=|>=|&&|\|\||->)
  | (?P<op>[-+*/<=&;,(){}\[\]])
  | (?P<preproc>\#)
  | (?P<rejected_op>[>!%.?:|^~])
""", re.VERBOSE | re.DOTALL)


@dataclass
class Token:
    typ: str  # keyword text, operator text, "name", "num", "fnum" or "eof"
    text: str
    line: int
    col: int

    def __str__(self):
        return f"{self.typ}({self.text}):{self.line}:{self.col}"


def tokenize(source: str) -> List[Token]:
    """
    Split source text into tokens

    Args:
        source: program text

    Returns:
        Token list ending with an "eof" token
    """
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if not m:
            raise SmcSyntaxError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind == "block_comment":
            # Track line numbers through multi-line comments
            newlines = text.count("\n")
            if newlines:
                line += newlines
                line_start = pos + text.rfind("\n") + 1
        elif kind in ("ws", "line_comment"):
            pass
        elif kind == "preproc":
            raise UnsupportedConstruct("preprocessor directives", line, col)
        elif kind in ("rejected_op", "rejected_op2"):
            raise UnsupportedConstruct(f"operator {text!r}", line, col)
        elif kind == "name":
            if text in REJECTED:
                raise UnsupportedConstruct(REJECTED[text], line, col)
            tokens.append(Token(text if text in KEYWORDS else "name", text, line, col))
        elif kind in ("op", "op2"):
            tokens.append(Token(text, text, line, col))
        else:
            tokens.append(Token(kind, text, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens
