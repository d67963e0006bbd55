"""Symbolic scalar expressions over named real variables.

The expression language is deliberately small: constants, variables, the
binary operators ``+ - * / ^`` (exponents must be constant), unary negation
and the functions ``sin cos exp ln sqrt``.  Hamiltonians, constraints and
momentum functions downstream are all stored as these trees, so the module
favours predictable structure over algebraic power: no factoring, no trig
identities, and a fixed simplification set documented on :func:`simplify`.

Grammar (EBNF)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | power
    power  := atom ('^' exponent)?     # exponent must fold to a constant
    atom   := number | ident | ident '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus and is right-associative; ``* /`` and
``+ -`` are left-associative.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

__all__ = [
    "Expr",
    "Constant",
    "Variable",
    "Unary",
    "Binary",
    "VariableTable",
    "ExprError",
    "ParseError",
    "EvalError",
    "parse",
    "evaluate",
    "eval_with_scale",
    "diff",
    "simplify",
    "substitute",
    "numerically_zero",
    "format_expr",
    "free_variables",
    "compile_expr",
    "ZERO",
    "ONE",
]

UNARY_FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt")
BINARY_OPS = ("+", "-", "*", "/", "^")


class ExprError(Exception):
    """Base class for expression-layer failures."""


class ParseError(ExprError):
    """Syntax or grammar violation, with a 1-based character offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at character {offset})")
        self.offset = offset


class EvalError(ExprError):
    """Unbound variable or numeric domain failure during evaluation."""

    def __init__(self, message: str, subexpr: "Expr | None" = None):
        if subexpr is not None:
            message = f"{message} in subexpression '{format_expr(subexpr)}'"
        super().__init__(message)
        self.subexpr = subexpr


class ExprBase:
    """Shared behaviour for all node types (operator sugar, queries)."""

    __slots__ = ()

    def __add__(self, other):
        return Binary("+", self, _coerce(other))

    def __radd__(self, other):
        return Binary("+", _coerce(other), self)

    def __sub__(self, other):
        return Binary("-", self, _coerce(other))

    def __rsub__(self, other):
        return Binary("-", _coerce(other), self)

    def __mul__(self, other):
        return Binary("*", self, _coerce(other))

    def __rmul__(self, other):
        return Binary("*", _coerce(other), self)

    def __truediv__(self, other):
        return Binary("/", self, _coerce(other))

    def __rtruediv__(self, other):
        return Binary("/", _coerce(other), self)

    def __pow__(self, other):
        return Binary("^", self, _coerce(other))

    def __neg__(self):
        return Unary("neg", self)

    def __str__(self) -> str:
        return format_expr(self)


@dataclass(frozen=True, repr=False)
class Constant(ExprBase):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))

    def __repr__(self):
        return f"Constant({self.value!r})"


@dataclass(frozen=True, repr=False)
class Variable(ExprBase):
    name: str

    def __repr__(self):
        return f"Variable({self.name!r})"


@dataclass(frozen=True, repr=False)
class Unary(ExprBase):
    op: str
    child: "Expr"

    def __post_init__(self):
        if self.op != "neg" and self.op not in UNARY_FUNCTIONS:
            raise ExprError(f"unknown unary operator '{self.op}'")

    def __repr__(self):
        return f"Unary({self.op!r}, {self.child!r})"


@dataclass(frozen=True, repr=False)
class Binary(ExprBase):
    op: str
    left: "Expr"
    right: "Expr"

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ExprError(f"unknown binary operator '{self.op}'")
        if self.op == "^" and not isinstance(self.right, Constant):
            raise ExprError("exponent must be a constant")

    def __repr__(self):
        return f"Binary({self.op!r}, {self.left!r}, {self.right!r})"


Expr = Union[Constant, Variable, Unary, Binary]

ZERO = Constant(0.0)
ONE = Constant(1.0)


def _coerce(value) -> Expr:
    if isinstance(value, ExprBase):
        return value
    if isinstance(value, (int, float)):
        return Constant(float(value))
    raise TypeError(f"cannot use {type(value).__name__} as an expression")


class VariableTable:
    """Ordered, unique (name, value) bindings.

    The binding order is significant: it is the canonical coordinate
    ordering used for Jacobians and phase-space layouts, so it must stay
    stable across calls within one analysis.
    """

    __slots__ = ("_names", "_values", "_index")

    def __init__(self, bindings: "Mapping[str, float] | Iterable[tuple[str, float]]"):
        if isinstance(bindings, Mapping):
            items = list(bindings.items())
        else:
            items = list(bindings)
        names = tuple(name for name, _ in items)
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ExprError(f"duplicate variable bindings: {', '.join(dupes)}")
        self._names = names
        self._values = tuple(float(v) for _, v in items)
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def names(self) -> tuple:
        return self._names

    @property
    def values(self) -> tuple:
        return self._values

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> float:
        return self._values[self._index[name]]

    def __len__(self) -> int:
        return len(self._names)

    def with_values(self, values: Sequence[float]) -> "VariableTable":
        """Same names, new values (used when scanning sample points)."""
        if len(values) != len(self._names):
            raise ExprError("value count does not match the variable table")
        return VariableTable(zip(self._names, values))

    def __repr__(self):
        inner = ", ".join(f"{n}={v!r}" for n, v in zip(self._names, self._values))
        return f"VariableTable({inner})"


# ---------------------------------------------------------------------------
# Parsing


_TOKEN_RE = re.compile(
    r"""
    (?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
  | (?P<ws>\s+)
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


def _tokenize(source: str):
    tokens = []
    for m in _TOKEN_RE.finditer(source):
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ParseError(f"unexpected character '{m.group()}'", m.start() + 1)
        tokens.append((kind, m.group(), m.start() + 1))
    tokens.append(("eof", "", len(source) + 1))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, offset = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected '{op}'", offset)
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, offset = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected trailing input '{text}'", offset)
        return e

    def expr(self) -> Expr:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in ("+", "-"):
                self.advance()
                node = Binary(text, node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in ("*", "/"):
                self.advance()
                node = Binary(text, node, self.factor())
            else:
                return node

    def factor(self) -> Expr:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Unary("neg", self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            _, _, exp_offset = self.peek()
            exponent = self.factor()
            folded = _constant_value(simplify(exponent))
            if folded is None:
                raise ParseError("exponent must be a constant number", exp_offset)
            return Binary("^", base, Constant(folded))
        return base

    def atom(self) -> Expr:
        kind, text, offset = self.advance()
        if kind == "number":
            return Constant(float(text))
        if kind == "ident":
            peek_kind, peek_text, _ = self.peek()
            if peek_kind == "op" and peek_text == "(":
                if text not in UNARY_FUNCTIONS:
                    raise ParseError(f"unknown function '{text}'", offset)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Unary(text, arg)
            return Variable(text)
        if kind == "op" and text == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"expected a number, name or '('", offset)


def parse(source: str) -> Expr:
    """Parse ``source`` into the unique AST under standard precedence."""
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# Printing


_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


def _precedence(e: Expr) -> int:
    if isinstance(e, Binary):
        if e.op in ("+", "-"):
            return _PREC_ADD
        if e.op in ("*", "/"):
            return _PREC_MUL
        return _PREC_POW
    if isinstance(e, Unary) and e.op == "neg":
        return _PREC_NEG
    if isinstance(e, Constant) and e.value < 0:
        return _PREC_NEG
    return _PREC_ATOM


def _format_constant(value: float) -> str:
    if value != value or value in (math.inf, -math.inf):
        raise ExprError(f"cannot print non-finite constant {value!r}")
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def format_expr(e: Expr) -> str:
    """Render ``e`` so that ``parse(format_expr(e))`` is structurally ``e``."""
    if isinstance(e, Constant):
        return _format_constant(e.value)
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            inner = format_expr(e.child)
            if _precedence(e.child) <= _PREC_NEG:
                inner = f"({inner})"
            return f"-{inner}"
        return f"{e.op}({format_expr(e.child)})"
    left, right = format_expr(e.left), format_expr(e.right)
    if e.op in ("+", "-"):
        if _precedence(e.left) < _PREC_ADD:
            left = f"({left})"
        if _precedence(e.right) <= _PREC_ADD:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    if e.op in ("*", "/"):
        if _precedence(e.left) < _PREC_MUL:
            left = f"({left})"
        if _precedence(e.right) <= _PREC_MUL or isinstance(e.right, Unary) and e.right.op == "neg":
            right = f"({right})"
        return f"{left}{e.op}{right}"
    # power: left binds loosely, exponent is a constant
    if _precedence(e.left) <= _PREC_POW:
        left = f"({left})"
    if e.right.value < 0:
        right = f"({right})"
    return f"{left}^{right}"


# ---------------------------------------------------------------------------
# Evaluation


def _lookup(name: str, vars) -> float:
    if isinstance(vars, VariableTable):
        if name in vars:
            return vars[name]
    elif isinstance(vars, Mapping):
        if name in vars:
            return float(vars[name])
    else:
        raise TypeError("vars must be a VariableTable or a mapping")
    raise EvalError(f"unbound variable '{name}'")


def _apply_unary(op: str, x: float, node: Unary) -> float:
    if op == "neg":
        return -x
    if op == "sin":
        return math.sin(x)
    if op == "cos":
        return math.cos(x)
    if op == "exp":
        try:
            return math.exp(x)
        except OverflowError:
            raise EvalError("overflow in exp", node) from None
    if op == "ln":
        if x <= 0.0:
            raise EvalError(f"ln of non-positive value {x!r}", node)
        return math.log(x)
    if x < 0.0:
        raise EvalError(f"sqrt of negative value {x!r}", node)
    return math.sqrt(x)


def _apply_binary(op: str, a: float, b: float, node: Binary) -> float:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0.0:
            raise EvalError("division by zero", node)
        return a / b
    if a == 0.0 and b < 0.0:
        raise EvalError("zero raised to a negative power", node)
    if a < 0.0 and not float(b).is_integer():
        raise EvalError("negative base with fractional exponent", node)
    try:
        return math.pow(a, b)
    except OverflowError:
        raise EvalError("overflow in power", node) from None


def evaluate(e: Expr, vars) -> float:
    """IEEE double value of ``e`` with every variable bound in ``vars``."""
    if isinstance(e, Constant):
        return e.value
    if isinstance(e, Variable):
        return _lookup(e.name, vars)
    if isinstance(e, Unary):
        return _apply_unary(e.op, evaluate(e.child, vars), e)
    return _apply_binary(e.op, evaluate(e.left, vars), evaluate(e.right, vars), e)


def eval_with_scale(e: Expr, vars) -> tuple:
    """Value of ``e`` plus the largest |subexpression value| met on the way.

    The scale is the magnitude reference for relative zero tests: an
    expression that only ever produces tiny intermediates is compared
    against an O(1) floor, while one built from large cancelling terms is
    judged relative to those terms.
    """
    if isinstance(e, Constant):
        return e.value, abs(e.value)
    if isinstance(e, Variable):
        v = _lookup(e.name, vars)
        return v, abs(v)
    if isinstance(e, Unary):
        child, scale = eval_with_scale(e.child, vars)
        v = _apply_unary(e.op, child, e)
        return v, max(scale, abs(v))
    lv, ls = eval_with_scale(e.left, vars)
    rv, rs = eval_with_scale(e.right, vars)
    v = _apply_binary(e.op, lv, rv, e)
    return v, max(ls, rs, abs(v))


def free_variables(e: Expr) -> frozenset:
    if isinstance(e, Constant):
        return frozenset()
    if isinstance(e, Variable):
        return frozenset((e.name,))
    if isinstance(e, Unary):
        return free_variables(e.child)
    return free_variables(e.left) | free_variables(e.right)


# ---------------------------------------------------------------------------
# Differentiation


def diff(e: Expr, var: str) -> Expr:
    """Exact symbolic partial derivative of ``e`` with respect to ``var``."""
    return simplify(_diff(e, var))


def _diff(e: Expr, var: str) -> Expr:
    if isinstance(e, Constant):
        return ZERO
    if isinstance(e, Variable):
        return ONE if e.name == var else ZERO
    if isinstance(e, Unary):
        dc = _diff(e.child, var)
        if e.op == "neg":
            return Unary("neg", dc)
        if e.op == "sin":
            return Binary("*", Unary("cos", e.child), dc)
        if e.op == "cos":
            return Binary("*", Unary("neg", Unary("sin", e.child)), dc)
        if e.op == "exp":
            return Binary("*", e, dc)
        if e.op == "ln":
            return Binary("/", dc, e.child)
        return Binary("/", dc, Binary("*", Constant(2.0), e))
    dl, dr = _diff(e.left, var), _diff(e.right, var)
    if e.op == "+":
        return Binary("+", dl, dr)
    if e.op == "-":
        return Binary("-", dl, dr)
    if e.op == "*":
        return Binary("+", Binary("*", dl, e.right), Binary("*", e.left, dr))
    if e.op == "/":
        num = Binary("-", Binary("*", dl, e.right), Binary("*", e.left, dr))
        return Binary("/", num, Binary("^", e.right, Constant(2.0)))
    # power with constant exponent: c * base^(c-1) * dbase
    c = e.right.value
    scaled = Binary("*", Constant(c), Binary("^", e.left, Constant(c - 1.0)))
    return Binary("*", scaled, dl)


# ---------------------------------------------------------------------------
# Simplification


def _constant_value(e: Expr):
    return e.value if isinstance(e, Constant) else None


def _is_const(e: Expr, value: float) -> bool:
    return isinstance(e, Constant) and e.value == value


def _fold_unary(op: str, x: float):
    try:
        if op == "neg":
            return -x
        if op == "sin":
            return math.sin(x)
        if op == "cos":
            return math.cos(x)
        if op == "exp":
            v = math.exp(x)
        elif op == "ln":
            if x <= 0.0:
                return None
            v = math.log(x)
        else:
            if x < 0.0:
                return None
            v = math.sqrt(x)
        return v if math.isfinite(v) else None
    except (OverflowError, ValueError):
        return None


def _fold_binary(op: str, a: float, b: float):
    try:
        if op == "+":
            v = a + b
        elif op == "-":
            v = a - b
        elif op == "*":
            v = a * b
        elif op == "/":
            if b == 0.0:
                return None
            v = a / b
        else:
            if a == 0.0 and b < 0.0:
                return None
            if a < 0.0 and not float(b).is_integer():
                return None
            v = math.pow(a, b)
        return v if math.isfinite(v) else None
    except (OverflowError, ValueError):
        return None


def _chain_leaves(op: str, e: Expr, out: list):
    if isinstance(e, Binary) and e.op == op:
        _chain_leaves(op, e.left, out)
        _chain_leaves(op, e.right, out)
    else:
        out.append(e)


def _rebuild_chain(op: str, e: Binary):
    """Fold the constant leaves of a + or * chain into one canonical slot.

    Chains with fewer than two constant leaves are left untouched: the rule
    merges constants, it does not reassociate general terms.
    """
    leaves: list = []
    _chain_leaves(op, e, leaves)
    consts = [l.value for l in leaves if isinstance(l, Constant)]
    rest = [l for l in leaves if not isinstance(l, Constant)]
    if len(consts) < 2:
        return e
    if op == "+":
        total = math.fsum(consts)
        if not rest:
            return Constant(total)
        node = rest[0]
        for leaf in rest[1:]:
            node = Binary("+", node, leaf)
        if total != 0.0:
            node = Binary("+", node, Constant(total))
        return node
    total = 1.0
    for c in consts:
        total *= c
    if total == 0.0:
        return ZERO
    if not rest:
        return Constant(total)
    node = rest[0]
    for leaf in rest[1:]:
        node = Binary("*", node, leaf)
    if total != 1.0:
        node = Binary("*", Constant(total), node)
    return node


def _simplify_node(e: Expr) -> Expr:
    """One bottom-up rewriting pass; :func:`simplify` iterates to a fixpoint.

    Rewrite set (fixed, nothing else is applied): constant folding,
    ``x+0 / 0+x / x-0 -> x``, ``0-x -> -x``, ``x*1 / 1*x -> x``,
    ``x*0 / 0*x -> 0``, ``x^0 -> 1``, ``x^1 -> x``, ``0/x -> 0``,
    ``-(-x) -> x``, and folding all constant leaves of a nested ``+`` or
    ``*`` chain into a single constant (placed last for sums, first for
    products).
    """
    if isinstance(e, (Constant, Variable)):
        return e
    if isinstance(e, Unary):
        child = _simplify_node(e.child)
        if e.op == "neg":
            if isinstance(child, Unary) and child.op == "neg":
                return child.child
            if isinstance(child, Constant):
                return Constant(-child.value)
            return Unary("neg", child)
        cv = _constant_value(child)
        if cv is not None:
            folded = _fold_unary(e.op, cv)
            if folded is not None:
                return Constant(folded)
        return Unary(e.op, child)

    left = _simplify_node(e.left)
    right = _simplify_node(e.right)
    lv, rv = _constant_value(left), _constant_value(right)
    if lv is not None and rv is not None:
        folded = _fold_binary(e.op, lv, rv)
        if folded is not None:
            return Constant(folded)

    if e.op == "+":
        if _is_const(left, 0.0):
            return right
        if _is_const(right, 0.0):
            return left
        return _rebuild_chain("+", Binary("+", left, right))
    if e.op == "-":
        if _is_const(right, 0.0):
            return left
        if _is_const(left, 0.0):
            return Unary("neg", right) if not isinstance(right, Constant) else Constant(-right.value)
        return Binary("-", left, right)
    if e.op == "*":
        if _is_const(left, 0.0) or _is_const(right, 0.0):
            return ZERO
        if _is_const(left, 1.0):
            return right
        if _is_const(right, 1.0):
            return left
        return _rebuild_chain("*", Binary("*", left, right))
    if e.op == "/":
        if _is_const(left, 0.0):
            return ZERO
        return Binary("/", left, right)
    # power
    if rv == 0.0:
        return ONE
    if rv == 1.0:
        return left
    return Binary("^", left, right)


def simplify(e: Expr) -> Expr:
    """Apply the documented rewrite set until nothing changes (idempotent)."""
    current = e
    for _ in range(64):
        nxt = _simplify_node(current)
        if nxt == current:
            return current
        current = nxt
    return current  # pragma: no cover - rewrite set terminates long before


def substitute(e: Expr, bindings: "Sequence[tuple[str, Expr]] | Mapping[str, Expr]") -> Expr:
    """Simultaneous substitution of variables by expressions, then simplify."""
    if isinstance(bindings, Mapping):
        table = dict(bindings)
    else:
        table = dict(bindings)
    table = {name: _coerce(val) for name, val in table.items()}
    return simplify(_substitute(e, table))


def _substitute(e: Expr, table: dict) -> Expr:
    if isinstance(e, Constant):
        return e
    if isinstance(e, Variable):
        return table.get(e.name, e)
    if isinstance(e, Unary):
        return Unary(e.op, _substitute(e.child, table))
    return Binary(e.op, _substitute(e.left, table), _substitute(e.right, table))


# ---------------------------------------------------------------------------
# Sampled zero test


DEFAULT_BOUNDS = (-1.0, 1.0)


def box_bounds(names: Sequence[str], domain: "Mapping[str, tuple] | None"):
    """Per-variable (lo, hi) bounds, defaulting to [-1, 1]."""
    domain = domain or {}
    out = []
    for name in names:
        lo, hi = domain.get(name, DEFAULT_BOUNDS)
        if not lo < hi:
            raise ExprError(f"empty sampling box for '{name}': [{lo}, {hi}]")
        out.append((float(lo), float(hi)))
    return out


def numerically_zero(
    e: Expr,
    vars: "Sequence[str] | None" = None,
    trials: int = 100,
    tol: float = 1e-9,
    domain: "Mapping[str, tuple] | None" = None,
    seed: int = 0,
    rng=None,
) -> bool:
    """Sampled zero test: |e| <= tol * (1 + local scale) at every trial point.

    Points are drawn uniformly from the per-variable box (seeded, so the
    verdict is reproducible).  Domain errors from evaluation propagate.
    """
    import numpy as np

    if trials < 1:
        raise ExprError("trials must be >= 1")
    if tol <= 0.0:
        raise ExprError("tol must be positive")
    fast = simplify(e)
    if isinstance(fast, Constant):
        return fast.value == 0.0
    names = tuple(vars) if vars is not None else tuple(sorted(free_variables(e)))
    bounds = box_bounds(names, domain)
    if rng is None:
        rng = np.random.default_rng(seed)
    for _ in range(trials):
        point = {name: rng.uniform(lo, hi) for name, (lo, hi) in zip(names, bounds)}
        value, scale = eval_with_scale(e, point)
        if abs(value) > tol * (1.0 + scale):
            return False
    return True


# ---------------------------------------------------------------------------
# Compilation (fast repeated evaluation)


def _pycode(e: Expr, index: Mapping) -> str:
    if isinstance(e, Constant):
        return repr(e.value)
    if isinstance(e, Variable):
        try:
            return f"_v[{index[e.name]}]"
        except KeyError:
            raise EvalError(f"unbound variable '{e.name}'") from None
    if isinstance(e, Unary):
        inner = _pycode(e.child, index)
        if e.op == "neg":
            return f"(-{inner})"
        fn = {"sin": "_m.sin", "cos": "_m.cos", "exp": "_m.exp", "ln": "_m.log", "sqrt": "_m.sqrt"}[e.op]
        return f"{fn}({inner})"
    left, right = _pycode(e.left, index), _pycode(e.right, index)
    if e.op == "^":
        return f"_m.pow({left}, {right})"
    return f"({left} {e.op} {right})"


def compile_expr(e: Expr, names: Sequence[str]) -> Callable:
    """Compile ``e`` to a fast ``f(values) -> float`` over the given ordering.

    The compiled function mirrors :func:`evaluate` except that domain
    failures surface as ValueError / ZeroDivisionError / OverflowError
    instead of :class:`EvalError`; hot loops catch those where needed.
    """
    index = {name: i for i, name in enumerate(names)}
    source = f"lambda _v: {_pycode(e, index)}"
    return eval(source, {"_m": math})


def compile_many(exprs: Sequence[Expr], names: Sequence[str]) -> Callable:
    """Compile several expressions into one ``f(values) -> list[float]``."""
    fns = [compile_expr(e, names) for e in exprs]

    def stacked(values):
        return [fn(values) for fn in fns]

    return stacked
