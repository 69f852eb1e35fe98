"""Expression-level numbers with adaptive-precision ball evaluation.

Input numbers are kept as small ASTs (rationals, the symbols i and w,
square roots, real k-th roots, roots of unity, field operations) and
evaluated on demand to a complex ball at any requested precision.  A
number whose value provably lies in the field K is detected exactly and
routed to rational arithmetic instead of balls.

Grammar accepted by parse():

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-'? atom
    atom   := integer | 'i' | 'w' | func '(' args ')' | '(' expr ')'
    func   := 'sqrt' | 'root' | 'e'

Rationals are written as quotients of integers, e.g. 3/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from . import balls
from .balls import Ball
from .errors import NeedMorePrecision, ParseError, PrecisionExhausted, DivisionNearZero
from .qring import FieldId, KElement, QuadInt

START_BITS = 128
CAP_BITS = 2**20
MIN_EVAL_BITS = 16


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Rat:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str  # 'i' or 'w'


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sqrt:
    arg: "Expr"


@dataclass(frozen=True)
class Root:
    k: int
    radicand: Fraction  # positive rational; value is the real k-th root


@dataclass(frozen=True)
class Cyc:
    turn: Fraction  # value is exp(2*pi*i*turn)


Expr = Union[Rat, Sym, Neg, Add, Sub, Mul, Div, Sqrt, Root, Cyc]


def node_count(e: Expr) -> int:
    if isinstance(e, (Rat, Sym, Root, Cyc)):
        return 1
    if isinstance(e, (Neg, Sqrt)):
        return 1 + node_count(e.arg)
    return 1 + node_count(e.left) + node_count(e.right)


def guard_bits(e: Expr) -> int:
    return 2 * node_count(e)


# ---------------------------------------------------------------------------
# Parser


class _Tokens:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        c = self.peek()
        self.pos += 1
        return c

    def expect(self, c: str) -> None:
        got = self.peek()
        if got != c:
            raise ParseError(f"expected {c!r}, found {got!r}", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an integer", start)
        return int(self.text[start : self.pos])

    def ident(self) -> str:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start : self.pos]


_FUNCS = ("sqrt", "root", "e")


def parse(text: str) -> Expr:
    """Parse expression text to an AST; raises ParseError with the byte
    offset of the problem."""
    toks = _Tokens(text)
    e = _parse_expr(toks)
    toks._skip_ws()
    if toks.pos != len(text):
        raise ParseError(f"trailing input {text[toks.pos:]!r}", toks.pos)
    return e


def _parse_expr(toks: _Tokens) -> Expr:
    e = _parse_term(toks)
    while toks.peek() in "+-":
        op = toks.take()
        rhs = _parse_term(toks)
        e = Add(e, rhs) if op == "+" else Sub(e, rhs)
    return e


def _parse_term(toks: _Tokens) -> Expr:
    e = _parse_factor(toks)
    while toks.peek() in "*/":
        op = toks.take()
        rhs = _parse_factor(toks)
        e = Mul(e, rhs) if op == "*" else Div(e, rhs)
    return e


def _parse_factor(toks: _Tokens) -> Expr:
    if toks.peek() == "-":
        toks.take()
        return Neg(_parse_atom(toks))
    return _parse_atom(toks)


def _parse_atom(toks: _Tokens) -> Expr:
    c = toks.peek()
    if c == "(":
        toks.take()
        e = _parse_expr(toks)
        toks.expect(")")
        return e
    if c.isdigit():
        return Rat(Fraction(toks.integer()))
    if c.isalpha():
        pos = toks.pos
        name = toks.ident()
        if name in ("i", "w"):
            return Sym(name)
        if name not in _FUNCS:
            raise ParseError(f"unknown function {name!r}", pos)
        toks.expect("(")
        args = [_parse_expr(toks)]
        while toks.peek() == ",":
            toks.take()
            args.append(_parse_expr(toks))
        toks.expect(")")
        return _build_call(name, args, pos)
    raise ParseError(f"unexpected character {c!r}", toks.pos)


def _build_call(name: str, args: list, pos: int) -> Expr:
    if name == "sqrt":
        if len(args) != 1:
            raise ParseError("sqrt takes one argument", pos)
        return Sqrt(args[0])
    if name == "e":
        if len(args) != 1:
            raise ParseError("e takes one argument", pos)
        turn = _fold_rational(args[0])
        if turn is None:
            raise ParseError("e argument must be rational", pos)
        return Cyc(turn)
    if len(args) != 2:
        raise ParseError("root takes two arguments", pos)
    k = _fold_rational(args[0])
    rad = _fold_rational(args[1])
    if k is None or k.denominator != 1 or k <= 0:
        raise ParseError("root order must be a positive integer", pos)
    if rad is None or rad <= 0:
        raise ParseError("root radicand must be a positive rational", pos)
    return Root(int(k), rad)


def _fold_rational(e: Expr) -> Optional[Fraction]:
    """Collapse a rational-valued subtree to a Fraction, else None."""
    if isinstance(e, Rat):
        return e.value
    if isinstance(e, Neg):
        v = _fold_rational(e.arg)
        return None if v is None else -v
    if isinstance(e, (Add, Sub, Mul, Div)):
        lv = _fold_rational(e.left)
        rv = _fold_rational(e.right)
        if lv is None or rv is None:
            return None
        if isinstance(e, Add):
            return lv + rv
        if isinstance(e, Sub):
            return lv - rv
        if isinstance(e, Mul):
            return lv * rv
        if rv == 0:
            raise ZeroDivisionError("division by zero in rational constant")
        return lv / rv
    return None


# ---------------------------------------------------------------------------
# Emission (round-trips through parse)

_LVL_ADD, _LVL_MUL, _LVL_NEG, _LVL_ATOM = 1, 2, 3, 4


def emit(e: Expr) -> str:
    return _emit(e, 0)


def _emit(e: Expr, parent_level: int) -> str:
    text, level = _emit_level(e)
    if level < parent_level:
        return f"({text})"
    return text


def _emit_level(e: Expr):
    if isinstance(e, Rat):
        v = e.value
        if v < 0:
            if v.denominator == 1:
                return f"-{-v.numerator}", _LVL_NEG
            # '-' plus '/' mix binding levels; force parens in any context
            return f"-{-v.numerator}/{v.denominator}", _LVL_ADD
        if v.denominator == 1:
            return str(v.numerator), _LVL_ATOM
        return f"{v.numerator}/{v.denominator}", _LVL_MUL
    if isinstance(e, Sym):
        return e.name, _LVL_ATOM
    if isinstance(e, Neg):
        return f"-{_emit(e.arg, _LVL_ATOM)}", _LVL_NEG
    if isinstance(e, Add):
        return f"{_emit(e.left, _LVL_ADD)}+{_emit(e.right, _LVL_MUL)}", _LVL_ADD
    if isinstance(e, Sub):
        return f"{_emit(e.left, _LVL_ADD)}-{_emit(e.right, _LVL_MUL)}", _LVL_ADD
    if isinstance(e, Mul):
        return f"{_emit(e.left, _LVL_MUL)}*{_emit(e.right, _LVL_NEG)}", _LVL_MUL
    if isinstance(e, Div):
        return f"{_emit(e.left, _LVL_MUL)}/{_emit(e.right, _LVL_NEG)}", _LVL_MUL
    if isinstance(e, Sqrt):
        return f"sqrt({emit(e.arg)})", _LVL_ATOM
    if isinstance(e, Root):
        r = e.radicand
        rtext = (
            str(r.numerator)
            if r.denominator == 1
            else f"{r.numerator}/{r.denominator}"
        )
        return f"root({e.k},{rtext})", _LVL_ATOM
    if isinstance(e, Cyc):
        t = e.turn
        ttext = (
            str(t.numerator)
            if t.denominator == 1
            else f"{t.numerator}/{t.denominator}"
        )
        return f"e({ttext})", _LVL_ATOM
    raise TypeError(f"not an Expr: {e!r}")


# ---------------------------------------------------------------------------
# Exact-in-K detection


def exact_in_k(e: Expr, fld: FieldId) -> Optional[KElement]:
    """The exact field element when the tree uses only rationals, i, w
    and field operations (with i only exact for d = 1); otherwise None.
    Raises ZeroDivisionError on an exactly-zero denominator.
    """
    if isinstance(e, Rat):
        return KElement.from_rational(e.value, fld)
    if isinstance(e, Sym):
        if e.name == "w":
            return KElement.from_quadint(QuadInt(0, 1, fld))
        return (
            KElement.from_quadint(QuadInt(0, 1, fld)) if fld.d == 1 else None
        )
    if isinstance(e, Neg):
        v = exact_in_k(e.arg, fld)
        return None if v is None else -v
    if isinstance(e, (Add, Sub, Mul, Div)):
        lv = exact_in_k(e.left, fld)
        if lv is None:
            return None
        rv = exact_in_k(e.right, fld)
        if rv is None:
            return None
        if isinstance(e, Add):
            return lv + rv
        if isinstance(e, Sub):
            return lv - rv
        if isinstance(e, Mul):
            return lv * rv
        if not rv:
            raise ZeroDivisionError(f"exact division by zero: {emit(e)}")
        return lv / rv
    return None


# ---------------------------------------------------------------------------
# Realness analysis (conservative, for square roots of negative reals)


def certainly_real(e: Expr) -> bool:
    if isinstance(e, (Rat, Root)):
        return True
    if isinstance(e, Cyc):
        t = e.turn - int(e.turn)
        return t == 0 or abs(t) == Fraction(1, 2)
    if isinstance(e, Neg):
        return certainly_real(e.arg)
    if isinstance(e, (Add, Sub, Mul, Div)):
        return certainly_real(e.left) and certainly_real(e.right)
    if isinstance(e, Sqrt):
        return _certainly_nonneg_real(e.arg)
    return False


def _certainly_nonneg_real(e: Expr) -> bool:
    if isinstance(e, Rat):
        return e.value >= 0
    if isinstance(e, Root):
        return True
    if isinstance(e, (Add, Mul)):
        return _certainly_nonneg_real(e.left) and _certainly_nonneg_real(
            e.right
        )
    if isinstance(e, Div):
        return _certainly_nonneg_real(e.left) and _certainly_nonneg_real(
            e.right
        )
    if isinstance(e, Sqrt):
        return _certainly_nonneg_real(e.arg)
    return False


# ---------------------------------------------------------------------------
# Evaluation


def _eval_node(e: Expr, fld: FieldId, wp: int) -> Ball:
    if isinstance(e, Rat):
        return balls.from_fraction(e.value, wp)
    if isinstance(e, Sym):
        if e.name == "i":
            return balls.IMAG_UNIT
        return balls.omega_ball(fld, wp)
    if isinstance(e, Neg):
        return balls.bneg(_eval_node(e.arg, fld, wp))
    if isinstance(e, Add):
        return balls.badd(
            _eval_node(e.left, fld, wp), _eval_node(e.right, fld, wp), wp
        )
    if isinstance(e, Sub):
        return balls.bsub(
            _eval_node(e.left, fld, wp), _eval_node(e.right, fld, wp), wp
        )
    if isinstance(e, Mul):
        return balls.bmul(
            _eval_node(e.left, fld, wp), _eval_node(e.right, fld, wp), wp
        )
    if isinstance(e, Div):
        num = _eval_node(e.left, fld, wp)
        den = _eval_node(e.right, fld, wp)
        if balls.contains_zero(den):
            _raise_for_small_divisor(e.right, fld)
        return balls.bdiv(num, den, wp)
    if isinstance(e, Sqrt):
        arg = _eval_node(e.arg, fld, wp)
        return balls.bsqrt(arg, wp, known_real=certainly_real(e.arg))
    if isinstance(e, Root):
        return balls.nthroot_rational(e.radicand, e.k, wp)
    if isinstance(e, Cyc):
        return balls.unit_root(e.turn, wp)
    raise TypeError(f"not an Expr: {e!r}")


def _raise_for_small_divisor(den_expr: Expr, fld: FieldId) -> None:
    try:
        v = exact_in_k(den_expr, fld)
    except ZeroDivisionError:
        raise
    if v is not None and not v:
        raise ZeroDivisionError(f"exact division by zero: {emit(den_expr)}")
    raise NeedMorePrecision("division")


class RefinableComplex:
    """An expression over a fixed field, evaluable to a ball at any
    precision.  Immutable; safe to evaluate concurrently."""

    __slots__ = ("expr", "field", "exact")

    def __init__(self, expr: Expr, fld: FieldId) -> None:
        if isinstance(expr, str):
            expr = parse(expr)
        object.__setattr__(self, "expr", expr)
        object.__setattr__(self, "field", fld)
        try:
            exact = exact_in_k(expr, fld)
        except ZeroDivisionError:
            exact = None  # surfaced again at evaluation time
        object.__setattr__(self, "exact", exact)

    def __setattr__(self, *args) -> None:
        raise AttributeError("RefinableComplex is immutable")

    def __repr__(self) -> str:
        return f"RefinableComplex({emit(self.expr)!r}, d={self.field.d})"

    def text(self) -> str:
        return emit(self.expr)

    def eval(self, precision_bits: int) -> Ball:
        """Enclosure of the value; the working precision adds a guard of
        two bits per AST node.  Raises NeedMorePrecision when a branch
        cut or a near-zero divisor is undecidable at this precision, and
        ZeroDivisionError on an exactly-zero divisor.
        """
        if precision_bits < MIN_EVAL_BITS:
            raise ValueError(f"precision must be >= {MIN_EVAL_BITS} bits")
        wp = precision_bits + guard_bits(self.expr)
        return _eval_node(self.expr, self.field, wp)

    def eval_auto(
        self, start_bits: int = START_BITS, cap_bits: int = CAP_BITS
    ) -> Ball:
        """Evaluate with the standard escalation policy: double the
        precision on NeedMorePrecision up to the cap, then raise
        PrecisionExhausted (DivisionNearZero for a stuck divisor)."""
        bits = start_bits
        while True:
            try:
                return self.eval(bits)
            except NeedMorePrecision as exc:
                if bits >= cap_bits:
                    cls = (
                        DivisionNearZero
                        if exc.reason == "division"
                        else PrecisionExhausted
                    )
                    raise cls(
                        f"no decision for {self.text()!r} at {bits} bits"
                        f" ({exc.reason})",
                        precision_bits=bits,
                    ) from None
                bits = min(2 * bits, cap_bits)


def is_exact_in_k(z: RefinableComplex) -> Optional[KElement]:
    """The exact KElement when the expression provably lies in K, else
    None.  Raises ZeroDivisionError for an exactly-zero denominator."""
    return exact_in_k(z.expr, z.field)


def k_element_expr(x: KElement) -> Expr:
    """AST with exact value x, using only rationals and w."""
    a = Fraction(x.num.a, x.den)
    b = Fraction(x.num.b, x.den)
    if b == 0:
        return Rat(a)
    wterm = Mul(Rat(b), Sym("w")) if b != 1 else Sym("w")
    if a == 0:
        return wterm
    return Add(Rat(a), wterm)


def refinable(text_or_expr, fld: FieldId) -> RefinableComplex:
    return RefinableComplex(text_or_expr, fld)
