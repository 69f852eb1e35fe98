"""Exact arithmetic in imaginary quadratic orders and their fraction fields.

For squarefree d > 0 the ring of integers of Q(sqrt(-d)) is Z[w] with

    w = sqrt(-d)          when d = 1, 2 mod 4,
    w = (1 + sqrt(-d))/2  when d = 3 mod 4.

Everything here is plain integer arithmetic on the coordinates with
respect to the basis (1, w); no floating point is involved.  All values
are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import FieldMismatchError, ParseError

EUCLIDEAN_DS = (1, 2, 3, 7, 11)


def _is_squarefree(n: int) -> bool:
    if n % 4 == 0:
        return False
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class FieldId:
    """The imaginary quadratic field Q(sqrt(-d)), d > 0 squarefree."""

    d: int

    def __post_init__(self) -> None:
        if not isinstance(self.d, int) or self.d <= 0:
            raise ValueError(f"d must be a positive integer, got {self.d!r}")
        if not _is_squarefree(self.d):
            raise ValueError(f"d must be squarefree, got {self.d}")

    @property
    def is_euclidean(self) -> bool:
        return self.d in EUCLIDEAN_DS

    @property
    def discriminant(self) -> int:
        return -self.d if self.d % 4 == 3 else -4 * self.d

    @property
    def half_integral(self) -> bool:
        """True when w = (1 + sqrt(-d))/2, i.e. d = 3 mod 4."""
        return self.d % 4 == 3

    @property
    def omega_trace(self) -> int:
        """Trace of w; w satisfies w^2 = t*w - n with t the trace."""
        return 1 if self.half_integral else 0

    @property
    def omega_norm(self) -> int:
        return (1 + self.d) // 4 if self.half_integral else self.d

    def require_euclidean(self) -> None:
        if not self.is_euclidean:
            from .errors import NonEuclideanFieldError

            raise NonEuclideanFieldError(
                f"d must be one of {EUCLIDEAN_DS}, got {self.d}"
            )

    def __repr__(self) -> str:
        return f"FieldId({self.d})"


@lru_cache(maxsize=None)
def field(d: int) -> FieldId:
    return FieldId(d)


class QuadInt:
    """An algebraic integer a + b*w in the order Z[w]."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a: int, b: int, fld: FieldId) -> None:
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "field", fld)

    def __setattr__(self, *args) -> None:
        raise AttributeError("QuadInt is immutable")

    # -- basic protocol -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadInt):
            return (
                self.a == other.a
                and self.b == other.b
                and self.field == other.field
            )
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.field.d))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __repr__(self) -> str:
        return f"QuadInt({self.a}, {self.b}, d={self.field.d})"

    def __str__(self) -> str:
        return self.text()

    # -- ring operations ------------------------------------------------

    def _coerce(self, other) -> "QuadInt":
        if isinstance(other, int):
            return QuadInt(other, 0, self.field)
        if isinstance(other, QuadInt):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"d={self.field.d} vs d={other.field.d}"
                )
            return other
        return NotImplemented

    def __add__(self, other) -> "QuadInt":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadInt(self.a + other.a, self.b + other.b, self.field)

    __radd__ = __add__

    def __sub__(self, other) -> "QuadInt":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadInt(self.a - other.a, self.b - other.b, self.field)

    def __rsub__(self, other) -> "QuadInt":
        return (-self) + other

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.a, -self.b, self.field)

    def __mul__(self, other) -> "QuadInt":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        # w^2 = t*w - n with t = Tr(w), n = N(w)
        t = self.field.omega_trace
        n = self.field.omega_norm
        a, b, c, e = self.a, self.b, other.a, other.b
        return QuadInt(a * c - n * b * e, a * e + b * c + t * b * e, self.field)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadInt":
        """Complex conjugate; conj(w) = Tr(w) - w."""
        return QuadInt(
            self.a + self.field.omega_trace * self.b, -self.b, self.field
        )

    def norm(self) -> int:
        """N(a + b*w) = a^2 + t*ab + n*b^2, always a nonnegative integer."""
        return (
            self.a * self.a
            + self.field.omega_trace * self.a * self.b
            + self.field.omega_norm * self.b * self.b
        )

    def trace(self) -> int:
        return 2 * self.a + self.field.omega_trace * self.b

    def content(self) -> int:
        return gcd(self.a, self.b)

    # -- text form ------------------------------------------------------

    def text(self) -> str:
        """Canonical form `a+b*w`: no spaces, explicit sign on the w term."""
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*w"
        return f"{self.a}{self.b:+}*w"

    @staticmethod
    def parse(text: str, fld: FieldId) -> "QuadInt":
        """Parse the canonical `a+b*w` form (leniently: spaces allowed,
        bare `w` accepted for `1*w`)."""
        s = text.replace(" ", "")
        if not s:
            raise ParseError("empty quadratic integer", 0)
        # split into at most two signed terms
        terms = []
        i = 0
        start = 0
        while i < len(s):
            if s[i] in "+-" and i > start:
                terms.append(s[start:i])
                start = i
            i += 1
        terms.append(s[start:])
        a = b = 0
        seen_a = seen_b = False
        for term in terms:
            if "w" in term:
                if seen_b:
                    raise ParseError(f"duplicate w term in {text!r}", 0)
                seen_b = True
                coef = term.replace("*w", "").replace("w", "")
                if coef in ("", "+"):
                    b = 1
                elif coef == "-":
                    b = -1
                else:
                    b = int(coef)
            else:
                if seen_a:
                    raise ParseError(f"duplicate integer term in {text!r}", 0)
                seen_a = True
                a = int(term)
        return QuadInt(a, b, fld)


def omega(fld: FieldId) -> QuadInt:
    return QuadInt(0, 1, fld)


def one(fld: FieldId) -> QuadInt:
    return QuadInt(1, 0, fld)


def zero(fld: FieldId) -> QuadInt:
    return QuadInt(0, 0, fld)


def units(fld: FieldId) -> tuple[QuadInt, ...]:
    """All units of the order: 4 for d=1, 6 for d=3, 2 otherwise."""
    if fld.d == 1:
        return (
            QuadInt(1, 0, fld),
            QuadInt(-1, 0, fld),
            QuadInt(0, 1, fld),
            QuadInt(0, -1, fld),
        )
    if fld.d == 3:
        return (
            QuadInt(1, 0, fld),
            QuadInt(-1, 0, fld),
            QuadInt(0, 1, fld),
            QuadInt(0, -1, fld),
            QuadInt(1, -1, fld),
            QuadInt(-1, 1, fld),
        )
    return (QuadInt(1, 0, fld), QuadInt(-1, 0, fld))


class KElement:
    """An element of Q(sqrt(-d)) as num/den with num in Z[w] and den a
    positive rational integer, in lowest terms (gcd(den, content(num)) = 1).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: QuadInt, den: int = 1) -> None:
        if den == 0:
            raise ZeroDivisionError("KElement with zero denominator")
        if den < 0:
            num, den = -num, -den
        g = gcd(den, num.content())
        if g > 1:
            num = QuadInt(num.a // g, num.b // g, num.field)
            den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *args) -> None:
        raise AttributeError("KElement is immutable")

    @property
    def field(self) -> FieldId:
        return self.num.field

    @staticmethod
    def from_rational(r, fld: FieldId) -> "KElement":
        r = Fraction(r)
        return KElement(QuadInt(r.numerator, 0, fld), r.denominator)

    @staticmethod
    def from_quadint(x: QuadInt) -> "KElement":
        return KElement(x, 1)

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "KElement":
        if isinstance(other, KElement):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"d={self.field.d} vs d={other.field.d}"
                )
            return other
        if isinstance(other, QuadInt):
            return KElement.from_quadint(self.num._coerce(other))
        if isinstance(other, (int, Fraction)):
            return KElement.from_rational(other, self.field)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (KElement, QuadInt, int, Fraction)):
            o = self._coerce(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return bool(self.num)

    def __add__(self, other) -> "KElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return KElement(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> "KElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return KElement(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other) -> "KElement":
        return (-self) + other

    def __neg__(self) -> "KElement":
        return KElement(-self.num, self.den)

    def __mul__(self, other) -> "KElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return KElement(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "KElement":
        """1/x = den * conj(num) / N(num)."""
        n = self.num.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return KElement(self.den * self.num.conjugate(), n)

    def __truediv__(self, other) -> "KElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> "KElement":
        return self.inverse() * other

    def conjugate(self) -> "KElement":
        return KElement(self.num.conjugate(), self.den)

    def norm(self) -> Fraction:
        return Fraction(self.num.norm(), self.den * self.den)

    def is_integral(self) -> bool:
        return self.den == 1

    def as_quadint(self) -> QuadInt:
        if self.den != 1:
            raise ValueError(f"{self} is not integral")
        return self.num

    def real_part(self) -> Fraction:
        """Real part of the complex embedding, a rational number."""
        return Fraction(self.num.trace(), 2 * self.den)

    def imag_coeff(self) -> Fraction:
        """Coefficient of sqrt(d) in the imaginary part (embedding with
        Im sqrt(-d) > 0): Im z = imag_coeff * sqrt(d)."""
        half = self.field.half_integral
        return Fraction(self.num.b, 2 * self.den if half else self.den)

    def as_rational(self) -> Fraction:
        if self.num.b != 0:
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num.a, self.den)

    def __repr__(self) -> str:
        return f"KElement({self.num!r}, {self.den})"

    def __str__(self) -> str:
        if self.den == 1:
            return self.num.text()
        return f"({self.num.text()})/{self.den}"


class Matrix2:
    """A 2x2 matrix over Z[w]; rows ((a, b), (c, d))."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt) -> None:
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *args) -> None:
        raise AttributeError("Matrix2 is immutable")

    @staticmethod
    def identity(fld: FieldId) -> "Matrix2":
        return Matrix2(one(fld), zero(fld), zero(fld), one(fld))

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Matrix2):
            return (
                self.a == other.a
                and self.b == other.b
                and self.c == other.c
                and self.d == other.d
            )
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.c, self.d))

    def det(self) -> QuadInt:
        return self.a * self.d - self.b * self.c

    def adjugate(self) -> "Matrix2":
        return Matrix2(self.d, -self.b, -self.c, self.a)

    def conj_transpose(self) -> "Matrix2":
        return Matrix2(
            self.a.conjugate(),
            self.c.conjugate(),
            self.b.conjugate(),
            self.d.conjugate(),
        )

    def apply(self, z: KElement) -> KElement:
        """Moebius action (az + b)/(cz + d); raises ZeroDivisionError at
        the pole."""
        den = KElement.from_quadint(self.c) * z + self.d
        return (KElement.from_quadint(self.a) * z + self.b) / den

    def __repr__(self) -> str:
        return f"Matrix2([[{self.a}, {self.b}], [{self.c}, {self.d}]])"


def embed(x):
    """Lift a QuadInt or KElement to a refinable complex number."""
    from . import realg

    if isinstance(x, QuadInt):
        x = KElement.from_quadint(x)
    if not isinstance(x, KElement):
        raise TypeError(f"cannot embed {type(x).__name__}")
    expr = realg.k_element_expr(x)
    return realg.RefinableComplex(expr, x.field)
