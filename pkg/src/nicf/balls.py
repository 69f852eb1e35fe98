"""Complex ball arithmetic on raw mpmath mantissa/exponent tuples.

A ball is a rigorous enclosure {z : |z - center| <= radius}.  Centers
are rounded to the working precision `wp` passed to each operation;
every rounding is charged to the radius, so containment of the exact
value is preserved by construction.  Radii are kept at a fixed small
precision and always rounded up.

The raw-tuple layer (mpmath.libmp) is used instead of mpf/mpc objects
because these operations sit inside the continued fraction hot loop.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath.libmp import (
    from_int,
    from_man_exp,
    from_rational,
    fzero,
    mpf_abs,
    mpf_add,
    mpf_cos_sin,
    mpf_div,
    mpf_ge,
    mpf_gt,
    mpf_le,
    mpf_lt,
    mpf_mul,
    mpf_mul_int,
    mpf_neg,
    mpf_nthroot,
    mpf_pi,
    mpf_shift,
    mpf_sqrt,
    mpf_sub,
)

from .errors import NeedMorePrecision

RPREC = 48  # radius working precision; radii always round up


class Ball:
    """Closed complex disk: center (re, im) plus radius, raw mpf tuples."""

    __slots__ = ("re", "im", "rad")

    def __init__(self, re, im=fzero, rad=fzero):
        self.re = re
        self.im = im
        self.rad = rad

    def __repr__(self) -> str:
        c = mpmath.mpc(mpmath.mp.make_mpf(self.re), mpmath.mp.make_mpf(self.im))
        r = mpmath.mp.make_mpf(self.rad)
        return f"Ball({c}, rad={mpmath.nstr(r, 5)})"

    def mid_complex(self) -> complex:
        return complex(
            float(mpmath.mp.make_mpf(self.re)),
            float(mpmath.mp.make_mpf(self.im)),
        )

    def rad_float(self) -> float:
        return float(mpmath.mp.make_mpf(self.rad))

    def mid_mpc(self):
        return mpmath.mpc(
            mpmath.mp.make_mpf(self.re), mpmath.mp.make_mpf(self.im)
        )

    def rad_mpf(self):
        return mpmath.mp.make_mpf(self.rad)

    def is_exact(self) -> bool:
        return self.rad == fzero


EXACT_ZERO = Ball(fzero, fzero, fzero)
IMAG_UNIT = Ball(fzero, from_int(1), fzero)


def _eps(wp: int):
    return from_man_exp(1, -wp)


def radd(*rs):
    acc = fzero
    for r in rs:
        acc = mpf_add(acc, r, RPREC, "u")
    return acc


def rmul(a, b):
    return mpf_mul(a, b, RPREC, "u")


def mag_upper(b: Ball):
    """Strict upper bound for |center| (loose: |re| + |im|)."""
    return mpf_add(mpf_abs(b.re), mpf_abs(b.im), RPREC, "u")


def mag_lower(b: Ball):
    """Strict lower bound for |center| (loose: max component)."""
    r, i = mpf_abs(b.re), mpf_abs(b.im)
    return r if mpf_ge(r, i) else i


def cabs_bounds(b: Ball):
    """Tight bounds (lo, hi) for |z| over the ball, raw mpf."""
    t = mpf_add(mpf_mul(b.re, b.re), mpf_mul(b.im, b.im), 0, "n")  # exact
    chi = mpf_sqrt(t, RPREC, "u")
    clo = mpf_sqrt(t, RPREC, "d")
    hi = mpf_add(chi, b.rad, RPREC, "u")
    lo = mpf_sub(clo, b.rad, RPREC, "d")
    if mpf_lt(lo, fzero):
        lo = fzero
    return lo, hi


def contains_zero(b: Ball) -> bool:
    lo, _ = cabs_bounds(b)
    return lo == fzero


def badd(x: Ball, y: Ball, wp: int) -> Ball:
    re = mpf_add(x.re, y.re, wp, "n")
    im = mpf_add(x.im, y.im, wp, "n")
    rnd = rmul(mpf_add(mpf_abs(re), mpf_abs(im), RPREC, "u"), _eps(wp))
    return Ball(re, im, radd(x.rad, y.rad, rnd))


def bsub(x: Ball, y: Ball, wp: int) -> Ball:
    re = mpf_sub(x.re, y.re, wp, "n")
    im = mpf_sub(x.im, y.im, wp, "n")
    rnd = rmul(mpf_add(mpf_abs(re), mpf_abs(im), RPREC, "u"), _eps(wp))
    return Ball(re, im, radd(x.rad, y.rad, rnd))


def bneg(x: Ball) -> Ball:
    return Ball(mpf_neg(x.re), mpf_neg(x.im), x.rad)


def bconj(x: Ball) -> Ball:
    return Ball(x.re, mpf_neg(x.im), x.rad)


def bmul(x: Ball, y: Ball, wp: int) -> Ball:
    re = mpf_sub(mpf_mul(x.re, y.re, 0), mpf_mul(x.im, y.im, 0), wp, "n")
    im = mpf_add(mpf_mul(x.re, y.im, 0), mpf_mul(x.im, y.re, 0), wp, "n")
    mx, my = mag_upper(x), mag_upper(y)
    rad = radd(
        rmul(mx, y.rad),
        rmul(my, x.rad),
        rmul(x.rad, y.rad),
        rmul(rmul(mx, my), _eps(wp)),
    )
    return Ball(re, im, rad)


def bmul_int(x: Ball, n: int, wp: int) -> Ball:
    if n == 0:
        return EXACT_ZERO
    re = mpf_mul_int(x.re, n, wp, "n")
    im = mpf_mul_int(x.im, n, wp, "n")
    an = from_int(abs(n))
    rnd = rmul(mpf_add(mpf_abs(re), mpf_abs(im), RPREC, "u"), _eps(wp))
    return Ball(re, im, radd(rmul(x.rad, an), rnd))


def bdiv(x: Ball, y: Ball, wp: int) -> Ball:
    """x / y; raises NeedMorePrecision when the divisor ball meets zero."""
    ylo, _ = cabs_bounds(y)
    if ylo == fzero:
        raise NeedMorePrecision("division")
    den = mpf_add(mpf_mul(y.re, y.re, 0), mpf_mul(y.im, y.im, 0), 0, "n")
    re = mpf_div(
        mpf_add(mpf_mul(x.re, y.re, 0), mpf_mul(x.im, y.im, 0), 0, "n"),
        den, wp, "n",
    )
    im = mpf_div(
        mpf_sub(mpf_mul(x.im, y.re, 0), mpf_mul(x.re, y.im, 0), 0, "n"),
        den, wp, "n",
    )
    # |x'/y' - cx/cy| <= rx/|y'| + |cx| ry/(|y'||cy|), |y'| >= ylo
    mx = mag_upper(x)
    cy_lo = mpf_sqrt(den, RPREC, "d")
    prop = radd(
        mpf_div(x.rad, ylo, RPREC, "u"),
        mpf_div(rmul(mx, y.rad), rmul(ylo, cy_lo), RPREC, "u"),
    )
    rnd = rmul(mpf_add(mpf_abs(re), mpf_abs(im), RPREC, "u"),
               from_man_exp(1, -wp + 2))
    return Ball(re, im, radd(prop, rnd))


def binv(x: Ball, wp: int) -> Ball:
    return bdiv(Ball(from_int(1)), x, wp)


def _csqrt_center(re, im, wp: int):
    """Principal square root of the center point, small relative error."""
    m = mpf_sqrt(
        mpf_add(mpf_mul(re, re, 0), mpf_mul(im, im, 0), 0, "n"), wp + 8, "n"
    )
    if mpf_ge(re, fzero):
        t = mpf_sqrt(mpf_shift(mpf_add(m, re, wp + 8, "n"), -1), wp, "n")
        if t == fzero:
            return fzero, fzero
        u = mpf_div(im, mpf_shift(t, 1), wp, "n")
        return t, u
    umag = mpf_sqrt(mpf_shift(mpf_sub(m, re, wp + 8, "n"), -1), wp, "n")
    t = mpf_div(mpf_abs(im), mpf_shift(umag, 1), wp, "n")
    # principal branch: Re >= 0, and sqrt of a negative real is +i sqrt|.|
    return t, (mpf_neg(umag) if mpf_lt(im, fzero) else umag)


def bsqrt(x: Ball, wp: int, known_real: bool = False) -> Ball:
    """Principal branch enclosure of sqrt over the ball.

    known_real asserts the exact value is a real number, which allows a
    determinate answer (a purely imaginary result) when the enclosure
    lies on the negative axis.  Without it, a ball crossing the branch
    cut away from zero raises NeedMorePrecision.
    """
    lo, hi = cabs_bounds(x)
    if lo == fzero:
        # zero may be inside: enclose by the origin-centered disk
        return Ball(fzero, fzero, mpf_sqrt(hi, RPREC, "u"))
    if known_real:
        vlo = mpf_sub(x.re, x.rad, RPREC, "d")
        vhi = mpf_add(x.re, x.rad, RPREC, "u")
        if mpf_gt(vlo, fzero):
            return _real_sqrt_interval(vlo, vhi, wp)
        if mpf_lt(vhi, fzero):
            b = _real_sqrt_interval(mpf_neg(vhi), mpf_neg(vlo), wp)
            return Ball(fzero, b.re, b.rad)
        raise NeedMorePrecision("sqrt-sign")
    imlo = mpf_sub(mpf_abs(x.im), x.rad, RPREC, "d")
    if mpf_le(x.re, fzero) and mpf_le(imlo, fzero):
        # ball crosses the negative real axis with zero outside it
        raise NeedMorePrecision("sqrt-branch")
    sre, sim = _csqrt_center(x.re, x.im, wp)
    # mean value bound on the convex cut-free ball: |sqrt'| <= 1/(2 sqrt(lo))
    slo = mpf_sqrt(lo, RPREC, "d")
    prop = mpf_div(x.rad, mpf_shift(slo, 1), RPREC, "u")
    rnd = rmul(mpf_add(mpf_abs(sre), mpf_abs(sim), RPREC, "u"),
               from_man_exp(1, -wp + 3))
    return Ball(sre, sim, radd(prop, rnd))


def _real_sqrt_interval(vlo, vhi, wp: int) -> Ball:
    rlo = mpf_sqrt(vlo, wp, "d")
    rhi = mpf_sqrt(vhi, wp, "u")
    mid = mpf_shift(mpf_add(rlo, rhi, wp, "n"), -1)
    half = mpf_add(
        mpf_shift(mpf_sub(rhi, rlo, RPREC, "u"), -1),
        rmul(mpf_abs(mid), _eps(wp)),
        RPREC, "u",
    )
    return Ball(mid, fzero, half)


def from_fraction(fr: Fraction, wp: int) -> Ball:
    """Real rational as a ball; radius is zero when exactly representable."""
    p, q = fr.numerator, fr.denominator
    if q == 1:
        return Ball(from_int(p))
    v = from_rational(p, q, wp, "n")
    if _raw_to_fraction(v) == fr:
        return Ball(v)
    return Ball(v, fzero, rmul(mpf_abs(v), _eps(wp - 1)))


def _raw_to_fraction(v) -> Fraction:
    sign, man, exp, bc = v
    if man == 0:
        if exp == 0:
            return Fraction(0)
        raise ValueError("special value has no rational form")
    man = int(man)
    if sign:
        man = -man
    return Fraction(man, 1) * Fraction(2) ** exp


def unit_root(turn: Fraction, wp: int) -> Ball:
    """exp(2*pi*i*turn) for rational turn."""
    turn = turn - int(turn)
    if turn < 0:
        turn += 1
    if turn == 0:
        return Ball(from_int(1))
    if 2 * turn == 1:
        return Ball(from_int(-1))
    if 4 * turn == 1:
        return Ball(fzero, from_int(1))
    if 4 * turn == 3:
        return Ball(fzero, from_int(-1))
    pi = mpf_pi(wp + 8)
    t = mpf_div(
        mpf_mul_int(pi, 2 * turn.numerator, wp + 8, "n"),
        from_int(turn.denominator), wp + 8, "n",
    )
    c, s = mpf_cos_sin(t, wp, "n")
    return Ball(c, s, from_man_exp(1, -wp + 4))


def nthroot_rational(fr: Fraction, k: int, wp: int) -> Ball:
    """Real k-th root of a positive rational."""
    if fr <= 0:
        raise ValueError(f"nthroot requires a positive rational, got {fr}")
    if k < 1:
        raise ValueError(f"root order must be >= 1, got {k}")
    p, q = fr.numerator, fr.denominator
    rp, rq = _iroot_exact(p, k), _iroot_exact(q, k)
    if rp is not None and rq is not None:
        return from_fraction(Fraction(rp, rq), wp)
    v = mpf_div(
        mpf_nthroot(from_int(p), k, wp + 8, "n"),
        mpf_nthroot(from_int(q), k, wp + 8, "n"),
        wp, "n",
    )
    return Ball(v, fzero, rmul(mpf_abs(v), from_man_exp(1, -wp + 3)))


def _iroot_exact(n: int, k: int):
    if n == 0:
        return 0
    r = round(n ** (1.0 / k))
    for c in (r - 1, r, r + 1):
        if c > 0 and c**k == n:
            return c
    return None


@lru_cache(maxsize=64)
def _sqrt_d(d: int, wp: int):
    return mpf_sqrt(from_int(d), wp, "n")


def omega_ball(fld, wp: int) -> Ball:
    """The field generator w = (t + i sqrt(d))/2^(1-t) as a ball."""
    d = fld.d
    if d == 1:
        return Ball(fzero, from_int(1))
    s = _sqrt_d(d, wp)
    rad = rmul(s, _eps(wp - 1))
    if fld.half_integral:
        return Ball(from_man_exp(1, -1), mpf_shift(s, -1), rad)
    return Ball(fzero, s, rad)


def embed_quadint(a: int, b: int, fld, wp: int) -> Ball:
    """Exact lattice point a + b*w as a ball (only sqrt(d) rounds)."""
    if b == 0:
        return Ball(from_int(a))
    if fld.d == 1:
        return Ball(from_int(a), from_int(b))
    s = _sqrt_d(fld.d, wp)
    im = mpf_mul_int(s, b, wp, "n")
    if fld.half_integral:
        re = mpf_shift(from_int(2 * a + b), -1)
        im = mpf_shift(im, -1)
    else:
        re = from_int(a)
    return Ball(re, im, rmul(mpf_abs(im), _eps(wp - 2)))


def embed_kelement(x, wp: int) -> Ball:
    num = embed_quadint(x.num.a, x.num.b, x.field, wp)
    if x.den == 1:
        return num
    den = Ball(from_int(x.den))
    return bdiv(num, den, wp)


def real_ball(mid, rad) -> Ball:
    return Ball(mid, fzero, rad)


def to_mpf(v):
    return mpmath.mp.make_mpf(v)


__all__ = [
    "Ball",
    "EXACT_ZERO",
    "RPREC",
    "badd",
    "bsub",
    "bneg",
    "bconj",
    "bmul",
    "bmul_int",
    "bdiv",
    "binv",
    "bsqrt",
    "cabs_bounds",
    "contains_zero",
    "embed_kelement",
    "embed_quadint",
    "from_fraction",
    "mag_lower",
    "mag_upper",
    "nthroot_rational",
    "omega_ball",
    "to_mpf",
    "unit_root",
]
