"""Expression language for functions on [0, 1].

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := ("-")? power
    power  := atom ("^" factor)?
    atom   := number | "x" | "pi" | "e" | func "(" expr ")" | "(" expr ")"
    func   := exp | log | sin | cos | tan | atan | sqrt

``pi`` and ``e`` are folded into constants at parse time.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

__all__ = [
    "ExprNode",
    "ParseError",
    "UnknownIdentifierError",
    "ArityError",
    "FUNCTIONS",
    "BINARY_OPS",
    "parse",
    "render",
    "const",
    "var",
]

FUNCTIONS = ("exp", "log", "sin", "cos", "tan", "atan", "sqrt")
BINARY_OPS = ("add", "sub", "mul", "div", "pow")
NAMED_CONSTANTS = {"pi": math.pi, "e": math.e}

_SYMBOL_OF = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}
_OP_OF = {v: k for k, v in _SYMBOL_OF.items()}


class ParseError(ValueError):
    """Syntax error; ``offset`` is the byte offset into the source."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ParseError):
    pass


class ArityError(ParseError):
    pass


@dataclass(frozen=True)
class ExprNode:
    """Immutable expression tree node.

    kind is one of ``const``, ``var``, ``unary``, ``binary``. For ``const`` the
    payload is the float value, for ``unary``/``binary`` it is the operator tag
    (``neg`` or a function name, or one of :data:`BINARY_OPS`).
    """

    kind: str
    payload: float | str | None = None
    children: tuple[ExprNode, ...] = ()

    def __post_init__(self):
        arity = {"const": 0, "var": 0, "unary": 1, "binary": 2}.get(self.kind)
        if arity is None:
            raise ValueError(f"unknown node kind {self.kind!r}")
        if len(self.children) != arity:
            raise ValueError(f"{self.kind} node needs {arity} children, got {len(self.children)}")
        if self.kind == "const" and not math.isfinite(self.payload):
            raise ValueError("constants must be finite")
        if self.kind == "unary" and self.payload not in FUNCTIONS + ("neg",):
            raise ValueError(f"unknown unary operator {self.payload!r}")
        if self.kind == "binary" and self.payload not in BINARY_OPS:
            raise ValueError(f"unknown binary operator {self.payload!r}")

    def depends_on_x(self) -> bool:
        if self.kind == "var":
            return True
        return any(c.depends_on_x() for c in self.children)

    def __str__(self):
        return render(self)


def const(value: float) -> ExprNode:
    return ExprNode("const", float(value))


def var() -> ExprNode:
    return ExprNode("var", "x")


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", _byte_offset(src, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), _byte_offset(src, pos)))
        pos = m.end()
    tokens.append(("end", "", _byte_offset(src, len(src))))
    return tokens


def _byte_offset(src: str, char_pos: int) -> int:
    return len(src[:char_pos].encode("utf-8"))


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def _advance(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def _expect(self, text: str):
        kind, value, offset = self.tok
        if value != text or kind != "op":
            what = "end of input" if kind == "end" else repr(value)
            raise ParseError(f"expected {text!r}, found {what}", offset)
        self._advance()

    def parse(self) -> ExprNode:
        node = self.expr()
        kind, value, offset = self.tok
        if kind != "end":
            if value == ",":
                raise ArityError("unexpected ',' (functions take one argument)", offset)
            raise ParseError(f"unexpected token {value!r}", offset)
        return node

    def expr(self) -> ExprNode:
        node = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = _OP_OF[self._advance()[1]]
            node = ExprNode("binary", op, (node, self.term()))
        return node

    def term(self) -> ExprNode:
        node = self.factor()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op = _OP_OF[self._advance()[1]]
            node = ExprNode("binary", op, (node, self.factor()))
        return node

    def factor(self) -> ExprNode:
        if self.tok == ("op", "-", self.tok[2]):
            self._advance()
            return ExprNode("unary", "neg", (self.power(),))
        return self.power()

    def power(self) -> ExprNode:
        base = self.atom()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self._advance()
            return ExprNode("binary", "pow", (base, self.factor()))
        return base

    def atom(self) -> ExprNode:
        kind, value, offset = self.tok
        if kind == "number":
            self._advance()
            return const(float(value))
        if kind == "ident":
            self._advance()
            if value == "x":
                return var()
            if value in NAMED_CONSTANTS:
                return const(NAMED_CONSTANTS[value])
            if value in FUNCTIONS:
                self._expect("(")
                if self.tok[0] == "op" and self.tok[1] == ")":
                    raise ArityError(f"{value}() takes exactly one argument", self.tok[2])
                arg = self.expr()
                if self.tok[0] == "op" and self.tok[1] == ",":
                    raise ArityError(f"{value}() takes exactly one argument", self.tok[2])
                self._expect(")")
                return ExprNode("unary", value, (arg,))
            raise UnknownIdentifierError(f"unknown identifier {value!r}", offset)
        if kind == "op" and value == "(":
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        what = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"expected an expression, found {what}", offset)


def parse(src: str) -> ExprNode:
    """Parse ``src`` into an expression tree.

    >>> render(parse("-x^2 + 2*x"))
    '-x^2 + 2.0*x'
    """
    if not src or not src.strip():
        raise ParseError("empty expression", 0)
    return _Parser(src).parse()


# binding strength used by render; atoms bind tightest
_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}
_ATOM = 5


def _prec(node: ExprNode) -> int:
    if node.kind == "binary":
        return _PREC[node.payload]
    if node.kind == "unary" and node.payload == "neg":
        return _PREC["neg"]
    return _ATOM


def _wrap(node: ExprNode, needs_parens: bool) -> str:
    s = render(node)
    return f"({s})" if needs_parens else s


def render(node: ExprNode) -> str:
    """Canonical printer; ``parse(render(t)) == t`` for every tree ``parse`` can return."""
    if node.kind == "const":
        v = node.payload
        return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)
    if node.kind == "var":
        return "x"
    if node.kind == "unary":
        (child,) = node.children
        if node.payload == "neg":
            return "-" + _wrap(child, _prec(child) < _PREC["pow"])
        return f"{node.payload}({render(child)})"
    left, right = node.children
    op = node.payload
    if op == "pow":
        # base is an atom; exponent is a factor (may start with unary minus)
        return f"{_wrap(left, _prec(left) < _ATOM)}^{_wrap(right, _prec(right) < _PREC['neg'])}"
    p = _PREC[op]
    sep = f" {_SYMBOL_OF[op]} " if p == 1 else _SYMBOL_OF[op]
    return _wrap(left, _prec(left) < p) + sep + _wrap(right, _prec(right) <= p)
