"""Certified real/complex interval arithmetic with dyadic endpoints.

Every operation returns an enclosure guaranteed to contain the exact
mathematical result (outward rounding throughout). Transcendental
enclosures are delegated to mpmath's libmp interval primitives, which take
an explicit working precision and round endpoints outward; rational and
dyadic steps are exact integer arithmetic.

Precision is measured as interval *width*, never significand bits. Exact
zero is never decided here: ``refine`` reports MaxPrecision when a width
target is unreachable and leaves the decision to symbolic layers.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath.libmp as libmp

from .dyadic import Dyadic, ZERO, ceil_div, floor_div
from .errors import DivisionByZero, DomainStraddle, MaxPrecision

DEFAULT_CEILING_BITS = 4096
_GUARD = 8


def precision_ceiling() -> int:
    """Refinement cap in bits; override with QX_PRECISION_CEILING."""
    value = os.environ.get("QX_PRECISION_CEILING")
    return int(value) if value else DEFAULT_CEILING_BITS


@dataclass(frozen=True)
class RInterval:
    """Closed real interval [lo, hi] with dyadic endpoints."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    # --- constructors ---

    @staticmethod
    def point(d: Dyadic) -> "RInterval":
        return RInterval(d, d)

    @staticmethod
    def zero() -> "RInterval":
        return RInterval(ZERO, ZERO)

    @staticmethod
    def from_int(n: int) -> "RInterval":
        return RInterval.point(Dyadic.new(n))

    @staticmethod
    def from_fraction(fr: Fraction, prec: int) -> "RInterval":
        den = fr.denominator
        if den & (den - 1) == 0:
            return RInterval.point(Dyadic.from_fraction(fr))
        scale = -(prec + _GUARD)
        return RInterval(floor_div(fr.numerator, den, scale), ceil_div(fr.numerator, den, scale))

    @staticmethod
    def from_mpi(t) -> "RInterval":
        return RInterval(Dyadic.from_mpf(t[0]), Dyadic.from_mpf(t[1]))

    def to_mpi(self):
        return (self.lo.to_mpf(), self.hi.to_mpf())

    # --- predicates and measures ---

    @property
    def width(self) -> Fraction:
        return (self.hi - self.lo).to_fraction()

    def mid(self) -> Dyadic:
        return (self.lo + self.hi).ldexp(-1)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def is_zero_point(self) -> bool:
        return self.lo.is_zero() and self.hi.is_zero()

    def contains_zero(self) -> bool:
        return self.lo.sign <= 0 <= self.hi.sign

    def contains_fraction(self, fr: Fraction) -> bool:
        return self.lo.to_fraction() <= fr <= self.hi.to_fraction()

    def strictly_positive(self) -> bool:
        return self.lo.sign > 0

    def strictly_negative(self) -> bool:
        return self.hi.sign < 0

    def intersects(self, other: "RInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "RInterval") -> "RInterval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return RInterval(lo, hi)

    def hull(self, other: "RInterval") -> "RInterval":
        return RInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def widen(self, delta: Fraction) -> "RInterval":
        d = _fraction_upper_dyadic(delta)
        return RInterval(self.lo - d, self.hi + d)

    def mag(self) -> Dyadic:
        """Upper bound on |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def mignitude(self) -> Dyadic:
        """Lower bound on |x| over the interval (0 if it contains 0)."""
        if self.contains_zero():
            return ZERO
        return min(abs(self.lo), abs(self.hi))

    # --- exact arithmetic (dyadic closed ops, rounded outward at prec) ---

    def add(self, other: "RInterval", prec: int) -> "RInterval":
        return RInterval.from_mpi(libmp.mpi_add(self.to_mpi(), other.to_mpi(), prec + _GUARD))

    def sub(self, other: "RInterval", prec: int) -> "RInterval":
        return RInterval.from_mpi(libmp.mpi_sub(self.to_mpi(), other.to_mpi(), prec + _GUARD))

    def mul(self, other: "RInterval", prec: int) -> "RInterval":
        return RInterval.from_mpi(libmp.mpi_mul(self.to_mpi(), other.to_mpi(), prec + _GUARD))

    def neg(self) -> "RInterval":
        return RInterval(-self.hi, -self.lo)

    def div(self, other: "RInterval", prec: int) -> "RInterval":
        if other.contains_zero():
            raise DomainStraddle("division by an enclosure containing 0")
        return RInterval.from_mpi(libmp.mpi_div(self.to_mpi(), other.to_mpi(), prec + _GUARD))

    # --- elementary functions ---

    def sqrt_nonneg(self, prec: int) -> "RInterval":
        """Real sqrt; the interval must not be strictly negative."""
        lo = self.lo if self.lo.sign > 0 else ZERO
        return RInterval.from_mpi(libmp.mpi_sqrt((lo.to_mpf(), self.hi.to_mpf()), prec + _GUARD))

    def exp(self, prec: int) -> "RInterval":
        return RInterval.from_mpi(libmp.mpi_exp(self.to_mpi(), prec + _GUARD))

    def log_pos(self, prec: int) -> "RInterval":
        if not self.strictly_positive():
            raise DomainStraddle("log of an enclosure touching (-inf, 0]")
        return RInterval.from_mpi(libmp.mpi_log(self.to_mpi(), prec + _GUARD))

    def sin(self, prec: int) -> "RInterval":
        return RInterval.from_mpi(libmp.mpi_sin(self.to_mpi(), prec + _GUARD))

    def cos(self, prec: int) -> "RInterval":
        return RInterval.from_mpi(libmp.mpi_cos(self.to_mpi(), prec + _GUARD))

    def atan(self, prec: int) -> "RInterval":
        return RInterval.from_mpi(libmp.mpi_atan(self.to_mpi(), prec + _GUARD))

    def ldexp(self, k: int) -> "RInterval":
        return RInterval(self.lo.ldexp(k), self.hi.ldexp(k))

    def decimal(self) -> str:
        if self.is_point():
            return self.lo.decimal()
        return f"[{self.lo.decimal()}, {self.hi.decimal()}]"

    def __str__(self):
        return self.decimal()


def _fraction_upper_dyadic(fr: Fraction) -> Dyadic:
    """Smallest convenient dyadic >= fr."""
    if fr < 0:
        raise ValueError("nonnegative width expected")
    den = fr.denominator
    if den & (den - 1) == 0:
        return Dyadic.from_fraction(fr)
    return ceil_div(fr.numerator, den, -(den.bit_length() + 2))


def pi_interval(prec: int) -> RInterval:
    p = prec + _GUARD
    return RInterval(Dyadic.from_mpf(libmp.mpf_pi(p, "d")), Dyadic.from_mpf(libmp.mpf_pi(p, "u")))


def asin_interval(x: RInterval, prec: int) -> RInterval:
    """arcsin on [-1, 1]; endpoints outside [-1, 1] are clamped (outward rounding slack)."""
    one = Dyadic.new(1)
    lo = max(x.lo, -one)
    hi = min(x.hi, one)
    if lo > hi:
        raise DomainStraddle("arcsin argument enclosure outside [-1, 1]")
    return RInterval(_asin_endpoint(lo, prec, upper=False), _asin_endpoint(hi, prec, upper=True))


def _asin_endpoint(d: Dyadic, prec: int, upper: bool) -> Dyadic:
    one = Dyadic.new(1)
    if d >= one:
        half_pi = pi_interval(prec).ldexp(-1)
        return half_pi.hi if upper else half_pi.lo
    if d <= -one:
        half_pi = pi_interval(prec).ldexp(-1)
        return -half_pi.lo if upper else -half_pi.hi
    # asin(d) = atan(d / sqrt(1 - d^2)), monotone, so a point evaluation suffices
    pt = RInterval.point(d)
    rad = RInterval.from_int(1).sub(pt.mul(pt, prec), prec).sqrt_nonneg(prec)
    val = pt.div(rad, prec).atan(prec)
    return val.hi if upper else val.lo


def sin_pi_interval(x: RInterval, prec: int) -> RInterval:
    """Enclosure of sin(pi * x)."""
    extra = int(x.mag().to_fraction()).bit_length() + 4
    inner = pi_interval(prec + extra)
    return x.mul(inner, prec + extra).sin(prec)


@dataclass(frozen=True)
class CInterval:
    """Rectangular complex enclosure re + i*im."""

    re: RInterval
    im: RInterval

    # --- constructors ---

    @staticmethod
    def real(r: RInterval) -> "CInterval":
        return CInterval(r, RInterval.zero())

    @staticmethod
    def from_int(n: int) -> "CInterval":
        return CInterval.real(RInterval.from_int(n))

    @staticmethod
    def from_fraction(fr: Fraction, prec: int) -> "CInterval":
        return CInterval.real(RInterval.from_fraction(fr, prec))

    # --- predicates and measures ---

    @property
    def width(self) -> Fraction:
        return max(self.re.width, self.im.width)

    def is_real(self) -> bool:
        return self.im.is_zero_point()

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def intersects(self, other: "CInterval") -> bool:
        return self.re.intersects(other.re) and self.im.intersects(other.im)

    def contains_fraction(self, re_fr: Fraction, im_fr: Fraction = Fraction(0)) -> bool:
        return self.re.contains_fraction(re_fr) and self.im.contains_fraction(im_fr)

    def mag_upper(self) -> Fraction:
        m = max(self.re.mag(), self.im.mag()).to_fraction()
        return 2 * m  # cheap bound: |z| <= |re| + |im| <= 2*max

    # --- arithmetic ---

    def add(self, other: "CInterval", prec: int) -> "CInterval":
        return CInterval(self.re.add(other.re, prec), self.im.add(other.im, prec))

    def sub(self, other: "CInterval", prec: int) -> "CInterval":
        return CInterval(self.re.sub(other.re, prec), self.im.sub(other.im, prec))

    def neg(self) -> "CInterval":
        return CInterval(self.re.neg(), self.im.neg())

    def mul(self, other: "CInterval", prec: int) -> "CInterval":
        if self.is_real() and other.is_real():
            return CInterval.real(self.re.mul(other.re, prec))
        a, b, c, d = self.re, self.im, other.re, other.im
        re = a.mul(c, prec).sub(b.mul(d, prec), prec)
        im = a.mul(d, prec).add(b.mul(c, prec), prec)
        return CInterval(re, im)

    def div(self, other: "CInterval", prec: int) -> "CInterval":
        if other.is_real():
            return CInterval(self.re.div(other.re, prec), self.im.div(other.re, prec))
        den = other.re.mul(other.re, prec).add(other.im.mul(other.im, prec), prec)
        if den.contains_zero():
            raise DomainStraddle("division by an enclosure containing 0")
        num = self.mul(other.conj(), prec)
        return CInterval(num.re.div(den, prec), num.im.div(den, prec))

    def conj(self) -> "CInterval":
        return CInterval(self.re, self.im.neg())

    # --- elementary functions ---

    def sqrt(self, prec: int) -> "CInterval":
        if self.is_real():
            if not self.re.strictly_negative():
                if self.re.contains_zero():
                    # principal sqrt over [lo, hi] with lo <= 0: hull of the
                    # real branch and the +i branch (im >= 0 on the cut)
                    pos = self.re.sqrt_nonneg(prec)
                    neg_mag = self.re.neg().sqrt_nonneg(prec)
                    return CInterval(RInterval(ZERO, pos.hi), RInterval(ZERO, neg_mag.hi))
                return CInterval.real(self.re.sqrt_nonneg(prec))
            return CInterval(RInterval.zero(), self.re.neg().sqrt_nonneg(prec))
        return self.log(0, prec).scale_half().exp(prec)

    def scale_half(self) -> "CInterval":
        return CInterval(self.re.ldexp(-1), self.im.ldexp(-1))

    def exp(self, prec: int) -> "CInterval":
        r = self.re.exp(prec)
        if self.im.is_zero_point():
            return CInterval.real(r)
        return CInterval(r.mul(self.im.cos(prec), prec), r.mul(self.im.sin(prec), prec))

    def arg(self, prec: int) -> RInterval:
        """Principal argument in (-pi, pi]; DomainStraddle on the branch cut."""
        x, y = self.re, self.im
        if x.strictly_positive():
            return y.div(x, prec).atan(prec)
        pi2 = pi_interval(prec).ldexp(-1)
        if y.strictly_positive():
            return pi2.sub(x.div(y, prec).atan(prec), prec)
        if y.strictly_negative():
            return pi2.neg().sub(x.div(y, prec).atan(prec), prec)
        if x.strictly_negative() and y.is_zero_point():
            return pi_interval(prec)  # on the cut: arg = +pi by convention
        raise DomainStraddle("argument enclosure straddles 0 or the branch cut")

    def log(self, branch: int, prec: int) -> "CInterval":
        """log z + 2*pi*i*branch, principal branch Im in (-pi, pi]."""
        if self.is_real() and self.re.strictly_positive():
            re = self.re.log_pos(prec)
            if branch == 0:
                return CInterval.real(re)
            im = pi_interval(prec).ldexp(1).mul(RInterval.from_int(branch), prec)
            return CInterval(re, im)
        sq = self.re.mul(self.re, prec).add(self.im.mul(self.im, prec), prec)
        if sq.contains_zero():
            raise DomainStraddle("log of an enclosure containing 0")
        re = sq.log_pos(prec).ldexp(-1)
        im = self.arg(prec)
        if branch:
            im = im.add(pi_interval(prec).ldexp(1).mul(RInterval.from_int(branch), prec), prec)
        return CInterval(re, im)

    def pow(self, other: "CInterval", prec: int) -> "CInterval":
        """Principal power z^w = exp(w * log z)."""
        return other.mul(self.log(0, prec), prec).exp(prec)

    def decimal(self) -> str:
        if self.is_real():
            return self.re.decimal()
        return f"{self.re.decimal()} + {self.im.decimal()}i"

    def __str__(self):
        return self.decimal()


def sin_pi_complex(x: CInterval, prec: int) -> CInterval:
    """sin(pi*x); exact real path with [-1,1] clamp, general path otherwise.

    Arguments whose imaginary enclosure merely contains 0 (real values with
    rectangular rounding slack, e.g. ratios involving a pi enclosure) go
    through the entire-function formula with no clamping.
    """
    if x.is_real():
        one = Dyadic.new(1)
        val = sin_pi_interval(x.re, prec)
        return CInterval.real(val.intersect(RInterval(-one, one)))
    if not x.im.contains_zero():
        raise DomainStraddle("sin_pi requires a (near-)real enclosure")
    extra = int(x.mag_upper()).bit_length() + 4
    w = x.mul(CInterval.real(pi_interval(prec + extra)), prec + extra)
    iw = CInterval(w.im.neg(), w.re)
    a = iw.exp(prec)
    b = iw.neg().exp(prec)
    # (a - b) / (2i) = ((a.im - b.im) + i*(b.re - a.re)) / 2
    return CInterval(a.im.sub(b.im, prec).ldexp(-1), b.re.sub(a.re, prec).ldexp(-1))


def arcsin_over_pi_complex(x: CInterval, prec: int) -> CInterval:
    if not x.is_real():
        raise DomainStraddle("arcsin_over_pi requires a real enclosure")
    val = asin_interval(x.re, prec).div(pi_interval(prec), prec)
    half = Dyadic.new(1, -1)
    return CInterval.real(val.intersect(RInterval(-half, half)))


# --- spec-surface dispatchers ------------------------------------------------

def rat_arith(op: str, a: Fraction, b: Fraction) -> Fraction:
    """Exact rational arithmetic; results are canonical by Fraction's invariants."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise DivisionByZero("rational division by zero")
        return a / b
    raise ValueError(f"unknown rational op {op!r}")


_UNARY = {"sqrt", "exp", "sin_pi", "arcsin_over_pi"}
_BINARY = {"add", "sub", "mul", "div", "pow"}


def iv_arith(op: str, args: list, precision: Fraction, branch: int = 0) -> CInterval:
    """Interval dispatcher; escalates working precision toward the target width."""
    prec = max(64, _bits_for(precision))
    ceiling = precision_ceiling()
    best = None
    while True:
        result = _iv_once(op, args, prec, branch)
        best = result
        if result.width <= precision or prec >= ceiling:
            return best
        prec *= 2


def _iv_once(op: str, args: list, prec: int, branch: int) -> CInterval:
    if op in _BINARY:
        a, b = args
        if op == "add":
            return a.add(b, prec)
        if op == "sub":
            return a.sub(b, prec)
        if op == "mul":
            return a.mul(b, prec)
        if op == "div":
            return a.div(b, prec)
        return a.pow(b, prec)
    if op == "log":
        (a,) = args
        return a.log(branch, prec)
    if op in _UNARY:
        (a,) = args
        if op == "sqrt":
            return a.sqrt(prec)
        if op == "exp":
            return a.exp(prec)
        if op == "sin_pi":
            return sin_pi_complex(a, prec)
        return arcsin_over_pi_complex(a, prec)
    raise ValueError(f"unknown interval op {op!r}")


def _bits_for(width: Fraction) -> int:
    if width <= 0:
        raise ValueError("target width must be positive")
    return max(1, (width.denominator // max(width.numerator, 1)).bit_length())


def refine(thunk: Callable[[int], CInterval], target: Fraction,
           ceiling: int | None = None, start: int | None = None) -> CInterval:
    """Re-evaluate thunk at growing precision until the width target is met.

    Raises MaxPrecision at the ceiling; a tiny-but-nonpoint enclosure around a
    possibly-exact zero is reported this way, never silently decided.
    """
    cap = ceiling if ceiling is not None else precision_ceiling()
    prec = start if start is not None else max(64, _bits_for(target) + 32)
    last_domain_error = None
    while prec <= cap:
        try:
            value = thunk(prec)
        except DomainStraddle as exc:
            last_domain_error = exc
            prec *= 2
            continue
        if value.width <= target:
            return value
        prec *= 2
    if last_domain_error is not None:
        raise MaxPrecision(
            f"precision ceiling {cap} bits hit while a domain straddle persists: {last_domain_error}")
    raise MaxPrecision(f"width target {target} unreachable within {cap} bits")
