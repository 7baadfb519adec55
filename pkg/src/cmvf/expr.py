"""Parser and evaluator for vector-field right-hand sides.

Grammar, loosest binding first::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" unary)?          # exponent must be an integer constant
    atom   := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"

Variables are ``x1 .. xn``; ``pi`` and caller-supplied named constants are
also accepted.  Functions: ``sin``, ``cos``, ``exp``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import ArityMismatch, EvalDomain, UnknownVariable, VFSyntaxError

FUNCTIONS = ("sin", "cos", "exp")
BUILTIN_CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Num:
    value: Union[int, float]


@dataclass(frozen=True)
class Var:
    index: int  # zero-based


@dataclass(frozen=True)
class Const:
    name: str
    value: float


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Const, Neg, BinOp, Pow, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise VFSyntaxError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, n: int, constants: Mapping[str, float]):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0
        self.n = n
        self.constants = constants

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.take()
        if text != value or kind != "op":
            where = "end of input" if kind == "end" else repr(text)
            raise VFSyntaxError(f"expected {value!r}, found {where}", pos)

    def parse(self) -> Node:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise VFSyntaxError(f"unexpected {text!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, text, pos = self.peek()
        if kind == "op" and text == "^":
            self.take()
            exp_pos = self.peek()[2]
            exponent = self.unary()
            value = _constant_value(exponent)
            if value is None or value != int(value):
                raise VFSyntaxError("exponent must be an integer constant", exp_pos)
            return Pow(base, int(value))
        return base

    def atom(self) -> Node:
        kind, text, pos = self.take()
        if kind == "num":
            if re.fullmatch(r"\d+", text):
                return Num(int(text))
            return Num(float(text))
        if kind == "name":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                if text not in FUNCTIONS:
                    raise UnknownVariable(f"unknown function {text!r} at position {pos}")
                self.take()
                arg = self.expr()
                if self.peek()[1] == ",":
                    raise ArityMismatch(f"{text} takes exactly one argument")
                self.expect(")")
                return Call(text, arg)
            m = re.fullmatch(r"x(\d+)", text)
            if m:
                k = int(m.group(1))
                if not 1 <= k <= self.n:
                    raise UnknownVariable(f"variable {text!r} is outside x1..x{self.n}")
                return Var(k - 1)
            if text in self.constants:
                return Const(text, float(self.constants[text]))
            if text in FUNCTIONS:
                raise VFSyntaxError(f"function {text!r} needs an argument", pos)
            raise UnknownVariable(f"unknown identifier {text!r} at position {pos}")
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        where = "end of input" if kind == "end" else repr(text)
        raise VFSyntaxError(f"unexpected {where}", pos)


def _constant_value(node: Node):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Neg):
        v = _constant_value(node.operand)
        return None if v is None else -v
    return None


def parse_expr(source: str, n: int, constants: Mapping[str, float] | None = None) -> Node:
    consts = dict(BUILTIN_CONSTANTS)
    if constants:
        consts.update(constants)
    return _Parser(source, n, consts).parse()


# -- printing -------------------------------------------------------------------
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def to_source(node: Node) -> str:
    """Render with the minimal parentheses that reparse to the same tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return f"x{node.index + 1}"
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        return f"-({inner})" if _prec(node.operand) < 3 else f"-{inner}"
    if isinstance(node, Pow):
        base = to_source(node.base)
        if _prec(node.base) <= 4:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    p = _PREC[node.op]
    left = to_source(node.left)
    if _prec(node.left) < p:
        left = f"({left})"
    right = to_source(node.right)
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left} {node.op} {right}"


# -- evaluation -----------------------------------------------------------------
def eval_node(node: Node, point: Sequence[float]) -> float:
    if isinstance(node, Num):
        return float(node.value)
    if isinstance(node, Var):
        return float(point[node.index])
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Neg):
        return -eval_node(node.operand, point)
    if isinstance(node, Call):
        arg = eval_node(node.arg, point)
        try:
            return getattr(math, node.func)(arg)
        except OverflowError as exc:
            raise EvalDomain(f"{node.func}({arg}) overflows") from exc
    if isinstance(node, Pow):
        base = eval_node(node.base, point)
        if base == 0 and node.exponent < 0:
            raise EvalDomain("zero raised to a negative power")
        return base ** node.exponent
    a = eval_node(node.left, point)
    b = eval_node(node.right, point)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if b == 0:
        raise EvalDomain("division by zero")
    return a / b


def _py(node: Node) -> str:
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return f"v[{node.index}]"
    if isinstance(node, Const):
        return repr(node.value)
    if isinstance(node, Neg):
        return f"(-{_py(node.operand)})"
    if isinstance(node, Call):
        return f"_np.{node.func}({_py(node.arg)})"
    if isinstance(node, Pow):
        if node.exponent < 0:
            return f"(1.0 / ({_py(node.base)}) ** {-node.exponent})"
        return f"(({_py(node.base)}) ** {node.exponent})"
    return f"({_py(node.left)} {node.op} {_py(node.right)})"


@dataclass(frozen=True)
class VectorFieldExpr:
    """Right-hand side ``x' = f(x)`` with one expression tree per component."""

    components: tuple
    n: int

    def __post_init__(self):
        if len(self.components) != self.n:
            raise ArityMismatch(f"{len(self.components)} components for a {self.n}-dimensional system")

    def __call__(self, point: Sequence[float]) -> tuple[float, ...]:
        return eval_vf(self, point)

    def to_source(self) -> list[str]:
        return [to_source(c) for c in self.components]

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorised evaluation at the rows of ``points`` (shape ``(m, n)``)."""
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.n:
            raise ArityMismatch(f"points must have shape (m, {self.n})")
        v = points.T
        out = np.empty_like(points)
        with np.errstate(divide="raise", invalid="raise", over="raise"):
            for k, comp in enumerate(self.components):
                code = compile(_py(comp), "<vector field>", "eval")
                try:
                    out[:, k] = eval(code, {"_np": np, "v": v, "__builtins__": {}})
                except FloatingPointError as exc:
                    raise EvalDomain(str(exc)) from exc
        return out


def parse_vf(source, n: int, constants: Mapping[str, float] | None = None) -> VectorFieldExpr:
    """Parse ``n`` component expressions (a sequence, or one string with ``;`` separators)."""
    if isinstance(source, str):
        parts = [s for s in source.split(";") if s.strip()]
    else:
        parts = list(source)
    if len(parts) != n:
        raise ArityMismatch(f"expected {n} components, got {len(parts)}")
    return VectorFieldExpr(tuple(parse_expr(p, n, constants) for p in parts), n)


def eval_vf(f: VectorFieldExpr, point: Sequence[float]) -> tuple[float, ...]:
    if len(point) != f.n:
        raise ArityMismatch(f"point has {len(point)} coordinates, field has {f.n}")
    return tuple(eval_node(c, point) for c in f.components)
