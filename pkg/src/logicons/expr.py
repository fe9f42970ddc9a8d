"""Symbolic Boolean expressions over state and input variables.

Expressions are immutable trees built from :class:`Const`, :class:`StateVar`,
:class:`InputVar`, :class:`And`, :class:`Or` and :class:`Not`. Variable
indices are 0-based. The textual form (used by scenario files and rule files)
numbers variables from 1: ``x1`` is ``StateVar(0)`` and ``u1`` is
``InputVar(0)``.
"""

from __future__ import annotations

import functools
import operator
import re
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DecisionSyntaxError, ShapeError, UnknownIdentifierError


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class StateVar:
    index: int


@dataclass(frozen=True)
class InputVar:
    index: int


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("And needs at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("Or needs at least two children")


@dataclass(frozen=True)
class Not:
    child: "BoolExpr"


BoolExpr = Union[Const, StateVar, InputVar, And, Or, Not]

TRUE = Const(True)
FALSE = Const(False)


def conj(terms: Sequence[BoolExpr]) -> BoolExpr:
    """AND of ``terms``; collapses the empty and single-term cases."""
    terms = tuple(terms)
    if not terms:
        return TRUE
    if len(terms) == 1:
        return terms[0]
    return And(terms)


def disj(terms: Sequence[BoolExpr]) -> BoolExpr:
    """OR of ``terms``; collapses the empty and single-term cases."""
    terms = tuple(terms)
    if not terms:
        return FALSE
    if len(terms) == 1:
        return terms[0]
    return Or(terms)


def state_vars(expr: BoolExpr) -> frozenset[int]:
    """Indices of the state variables occurring in ``expr``."""
    if isinstance(expr, StateVar):
        return frozenset((expr.index,))
    if isinstance(expr, (And, Or)):
        return frozenset().union(*(state_vars(c) for c in expr.children))
    if isinstance(expr, Not):
        return state_vars(expr.child)
    return frozenset()


def input_vars(expr: BoolExpr) -> frozenset[int]:
    if isinstance(expr, InputVar):
        return frozenset((expr.index,))
    if isinstance(expr, (And, Or)):
        return frozenset().union(*(input_vars(c) for c in expr.children))
    if isinstance(expr, Not):
        return input_vars(expr.child)
    return frozenset()


def evaluate(expr: BoolExpr, x: Sequence, u: Sequence = ()) -> bool:
    """Evaluate ``expr`` on state assignment ``x`` and input assignment ``u``."""
    if isinstance(expr, StateVar):
        return bool(x[expr.index])
    if isinstance(expr, InputVar):
        return bool(u[expr.index])
    if isinstance(expr, And):
        return all(evaluate(c, x, u) for c in expr.children)
    if isinstance(expr, Or):
        return any(evaluate(c, x, u) for c in expr.children)
    if isinstance(expr, Not):
        return not evaluate(expr.child, x, u)
    if isinstance(expr, Const):
        return bool(expr.value)
    raise TypeError(f"not a Boolean expression: {expr!r}")


def compile_expr(expr: BoolExpr) -> Callable:
    """Compile ``expr`` into ``f(xs, us)`` working elementwise on numpy arrays.

    ``xs[i]`` and ``us[j]`` may be Boolean scalars or equally shaped Boolean
    arrays; the result broadcasts accordingly.
    """
    if isinstance(expr, StateVar):
        i = expr.index
        return lambda xs, us: xs[i]
    if isinstance(expr, InputVar):
        j = expr.index
        return lambda xs, us: us[j]
    if isinstance(expr, Const):
        v = np.bool_(expr.value)
        return lambda xs, us: v
    if isinstance(expr, Not):
        f = compile_expr(expr.child)
        return lambda xs, us: np.logical_not(f(xs, us))
    if isinstance(expr, (And, Or)):
        fs = [compile_expr(c) for c in expr.children]
        op = operator.and_ if isinstance(expr, And) else operator.or_
        return lambda xs, us: functools.reduce(op, (f(xs, us) for f in fs))
    raise TypeError(f"not a Boolean expression: {expr!r}")


def substitute(expr: BoolExpr, fn: Callable[[BoolExpr], BoolExpr | None]) -> BoolExpr:
    """Rebuild ``expr`` bottom-up, replacing every leaf for which ``fn`` returns a value."""
    if isinstance(expr, (Const, StateVar, InputVar)):
        replaced = fn(expr)
        return expr if replaced is None else replaced
    if isinstance(expr, Not):
        return Not(substitute(expr.child, fn))
    return type(expr)(tuple(substitute(c, fn) for c in expr.children))


@dataclass(frozen=True)
class BoolMap:
    """A map from (state, input) in B^n x B^m to B^n, one expression per state component."""

    n_state: int
    n_input: int
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != self.n_state:
            raise ShapeError(f"{len(self.components)} components for {self.n_state} state variables")
        for k, comp in enumerate(self.components):
            bad_x = [i for i in state_vars(comp) if not 0 <= i < self.n_state]
            bad_u = [j for j in input_vars(comp) if not 0 <= j < self.n_input]
            if bad_x or bad_u:
                raise ShapeError(f"component {k} references out-of-range variables")

    def __call__(self, x: Sequence, u: Sequence = ()) -> tuple[int, ...]:
        if len(x) != self.n_state or len(u) != self.n_input:
            raise ShapeError("assignment length mismatch")
        return tuple(int(evaluate(c, x, u)) for c in self.components)

    @functools.cached_property
    def compiled(self) -> tuple[Callable, ...]:
        return tuple(compile_expr(c) for c in self.components)

    def evaluate_batch(self, states: np.ndarray, inputs) -> np.ndarray:
        """Apply the map to every row of ``states`` (shape ``(N, n_state)``).

        ``inputs`` is either one input vector shared by all rows or an
        ``(N, n_input)`` array.
        """
        states = np.asarray(states, dtype=bool)
        inputs = np.asarray(inputs, dtype=bool)
        xs = [states[:, i] for i in range(self.n_state)]
        us = [inputs[..., j] for j in range(self.n_input)]
        out = np.empty_like(states)
        for i, f in enumerate(self.compiled):
            out[:, i] = f(xs, us)
        return out


# text form

_TOKEN = re.compile(r"\s*(?:(?P<op>[&|!()])|(?P<ident>[A-Za-z_]\w*)|(?P<const>[01](?![\w]))|(?P<bad>\S))")


class _Parser:
    """Recursive descent over: expr := term ('|' term)*; term := factor ('&' factor)*;
    factor := '!' factor | '(' expr ')' | identifier | '0' | '1'."""

    def __init__(self, text: str, n_input: int | None, n_state: int | None, allow_state: bool):
        self.text = text
        self.n_input = n_input
        self.n_state = n_state
        self.allow_state = allow_state
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            if m.group("bad") is not None:
                raise DecisionSyntaxError(f"unexpected character {m.group('bad')!r}", self._byte(m.start("bad")))
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.pos = 0

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _offset(self):
        tok = self._peek()
        return tok[2] if tok else len(self.text.encode())

    def _take(self, value):
        tok = self._peek()
        if tok is not None and tok[0] == "op" and tok[1] == value:
            self.pos += 1
            return True
        return False

    def parse(self) -> BoolExpr:
        expr = self.expr()
        if self._peek() is not None:
            raise DecisionSyntaxError(f"unexpected token {self._peek()[1]!r}", self._byte(self._offset()))
        return expr

    def _byte(self, char_offset):
        return len(self.text[:char_offset].encode())

    def expr(self):
        terms = [self.term()]
        while self._take("|"):
            terms.append(self.term())
        return disj(terms)

    def term(self):
        factors = [self.factor()]
        while self._take("&"):
            factors.append(self.factor())
        return conj(factors)

    def factor(self):
        tok = self._peek()
        if tok is None:
            raise DecisionSyntaxError("unexpected end of expression", self._byte(len(self.text)))
        kind, value, offset = tok
        if kind == "op" and value == "!":
            self.pos += 1
            return Not(self.factor())
        if kind == "op" and value == "(":
            self.pos += 1
            inner = self.expr()
            if not self._take(")"):
                raise DecisionSyntaxError("expected ')'", self._byte(self._offset()))
            return inner
        if kind == "const":
            self.pos += 1
            return Const(value == "1")
        if kind == "ident":
            self.pos += 1
            return self._variable(value, self._byte(offset))
        raise DecisionSyntaxError(f"unexpected token {value!r}", self._byte(offset))

    def _variable(self, name, offset):
        m = re.fullmatch(r"([ux])([0-9]+)", name)
        if m is None:
            raise UnknownIdentifierError(name, offset)
        kind, number = m.group(1), int(m.group(2))
        if kind == "u":
            if number < 1 or (self.n_input is not None and number > self.n_input):
                raise UnknownIdentifierError(name, offset)
            return InputVar(number - 1)
        if not self.allow_state or number < 1 or (self.n_state is not None and number > self.n_state):
            raise UnknownIdentifierError(name, offset)
        return StateVar(number - 1)


def parse_decision(text: str, n_input: int | None = None) -> BoolExpr:
    """Parse a decision over inputs ``u1 .. um`` (``&``, ``|``, ``!``, parentheses).

    Precedence is NOT > AND > OR. Raises :class:`DecisionSyntaxError` carrying
    a byte offset, or :class:`UnknownIdentifierError` for anything other than
    an in-range ``u<k>``.
    """
    return _Parser(text, n_input, None, allow_state=False).parse()


def parse_expr(text: str, n_state: int | None = None, n_input: int | None = None) -> BoolExpr:
    """Like :func:`parse_decision` but also accepts state variables ``x<k>``."""
    return _Parser(text, n_input, n_state, allow_state=True).parse()


def format_expr(expr: BoolExpr) -> str:
    """Render ``expr`` in the textual grammar with minimal parentheses."""
    return _fmt(expr, 0)


def _fmt(expr, parent_prec):
    # precedence: Or 1, And 2, Not/leaf 3
    if isinstance(expr, StateVar):
        return f"x{expr.index + 1}"
    if isinstance(expr, InputVar):
        return f"u{expr.index + 1}"
    if isinstance(expr, Const):
        return "1" if expr.value else "0"
    if isinstance(expr, Not):
        return "!" + _fmt(expr.child, 3)
    if isinstance(expr, And):
        text = " & ".join(_fmt(c, 2) for c in expr.children)
        return f"({text})" if parent_prec > 2 else text
    if isinstance(expr, Or):
        text = " | ".join(_fmt(c, 1) for c in expr.children)
        return f"({text})" if parent_prec > 1 else text
    raise TypeError(f"not a Boolean expression: {expr!r}")
