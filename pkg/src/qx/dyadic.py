"""Exact dyadic rationals man * 2**exp, the endpoint type for all enclosures.

Dyadics are closed under +, -, * and comparison, all computed in integer
arithmetic with no rounding. They convert losslessly to and from mpmath's
raw mpf tuples, which is how the interval layer talks to libmp.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath.libmp import from_man_exp, fzero


@dataclass(frozen=True)
class Dyadic:
    """Normalized dyadic rational: man odd unless zero, zero is (0, 0)."""

    man: int
    exp: int

    @staticmethod
    def new(man: int, exp: int = 0) -> "Dyadic":
        if man == 0:
            return Dyadic(0, 0)
        while man % 2 == 0:
            man //= 2
            exp += 1
        return Dyadic(man, exp)

    @staticmethod
    def from_fraction(fr: Fraction) -> "Dyadic":
        """Exact conversion; raises ValueError if the denominator is not a power of 2."""
        den = fr.denominator
        if den & (den - 1):
            raise ValueError(f"{fr} is not a dyadic rational")
        return Dyadic.new(fr.numerator, -(den.bit_length() - 1))

    @staticmethod
    def from_mpf(t) -> "Dyadic":
        sign, man, exp, _bc = t
        man = int(man)
        if man == 0:
            if t != fzero and exp != 0:
                raise ValueError("special mpf value (inf/nan) has no dyadic form")
            return Dyadic(0, 0)
        return Dyadic.new(-man if sign else man, exp)

    def to_mpf(self):
        return from_man_exp(self.man, self.exp)

    def to_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.man << self.exp)
        return Fraction(self.man, 1 << -self.exp)

    @property
    def sign(self) -> int:
        return (self.man > 0) - (self.man < 0)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = min(self.exp, other.exp)
        return Dyadic.new((self.man << (self.exp - e)) + (other.man << (other.exp - e)), e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.man, self.exp if self.man else 0)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic.new(self.man * other.man, self.exp + other.exp)

    def __abs__(self) -> "Dyadic":
        return Dyadic(abs(self.man), self.exp)

    def _cmp(self, other: "Dyadic") -> int:
        d = self - other
        return d.sign

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def ldexp(self, k: int) -> "Dyadic":
        """self * 2**k, exact."""
        if self.man == 0:
            return self
        return Dyadic(self.man, self.exp + k)

    def is_zero(self) -> bool:
        return self.man == 0

    def decimal(self) -> str:
        """Exact decimal string (dyadics always terminate in base 10)."""
        if self.exp >= 0:
            return str(self.man << self.exp)
        digits = -self.exp
        scaled = self.man * 5**digits  # man * 10**digits / 2**digits
        sign = "-" if scaled < 0 else ""
        s = str(abs(scaled)).rjust(digits + 1, "0")
        whole, frac = s[:-digits], s[-digits:]
        frac = frac.rstrip("0")
        return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"

    def __float__(self) -> float:
        return self.man * 2.0**self.exp

    def __str__(self) -> str:
        return self.decimal()


ZERO = Dyadic(0, 0)
ONE = Dyadic(1, 0)


def floor_div(p: int, q: int, scale_exp: int) -> Dyadic:
    """Largest dyadic m*2**scale_exp with value <= p/q (q > 0, scale_exp <= 0)."""
    return Dyadic.new(p * (1 << -scale_exp) // q, scale_exp)


def ceil_div(p: int, q: int, scale_exp: int) -> Dyadic:
    return Dyadic.new(-((-p) * (1 << -scale_exp) // q), scale_exp)
