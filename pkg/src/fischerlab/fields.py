"""Coefficient backends.

Two fields are supported throughout the package: exact Gaussian rationals
(pairs of arbitrary-precision rationals) and double-precision complex
numbers.  The exact field keeps every ring operation and division
error-free, so algebraic identities can be asserted with ``==``; the float
field is what the numerical layers (SVD sweeps, Monte Carlo) consume.

Both coefficient kinds expose ``.real``, ``.imag`` and ``.conjugate()``,
so generic code can treat them uniformly.
"""

from __future__ import annotations

import math
from fractions import Fraction

EXACT = "exact"
FLOAT = "float"


class GaussianRational:
    """Complex number with exact rational real and imaginary parts.

    Arithmetic with ``int`` and ``Fraction`` stays exact; mixing with
    ``float`` or ``complex`` promotes the result to ``complex``.
    """

    __slots__ = ("_re", "_im")

    def __init__(self, re=0, im=0):
        self._re = re if isinstance(re, Fraction) else Fraction(re)
        self._im = im if isinstance(im, Fraction) else Fraction(im)

    @property
    def real(self) -> Fraction:
        return self._re

    @property
    def imag(self) -> Fraction:
        return self._im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self._re, -self._im)

    def __bool__(self):
        return bool(self._re) or bool(self._im)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self._re + other._re, self._im + other._im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self._re + other, self._im)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self._re, -self._im)

    def __sub__(self, other):
        if isinstance(other, (GaussianRational, int, Fraction)):
            return self + (-other if isinstance(other, GaussianRational) else GaussianRational(-other))
        if isinstance(other, (float, complex)):
            return complex(self) - other
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other - self._re, -self._im)
        if isinstance(other, (float, complex)):
            return other - complex(self)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(
                self._re * other._re - self._im * other._im,
                self._re * other._im + self._im * other._re,
            )
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self._re * other, self._im * other)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self._re / other, self._im / other)
        if isinstance(other, GaussianRational):
            d = other._re * other._re + other._im * other._im
            if not d:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return (self * other.conjugate()) / d
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other) / self
        if isinstance(other, (float, complex)):
            return other / complex(self)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return GaussianRational(1) / self ** (-n)
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self._re == other._re and self._im == other._im
        if isinstance(other, (int, Fraction)):
            return self._im == 0 and self._re == other
        return NotImplemented

    def __hash__(self):
        if self._im == 0:
            return hash(self._re)
        return hash((self._re, self._im))

    def __abs__(self) -> float:
        return math.hypot(float(self._re), float(self._im))

    def __complex__(self) -> complex:
        return complex(float(self._re), float(self._im))

    def __repr__(self):
        return f"GaussianRational({self._re!s}, {self._im!s})"

    def __str__(self):
        if self._im == 0:
            return str(self._re)
        sign = "+" if self._im >= 0 else "-"
        return f"({self._re}{sign}{abs(self._im)}i)"


def is_exact_scalar(c) -> bool:
    return isinstance(c, (GaussianRational, int, Fraction))


def to_exact(c) -> GaussianRational:
    if isinstance(c, GaussianRational):
        return c
    if isinstance(c, (int, Fraction)):
        return GaussianRational(c)
    raise TypeError(f"cannot represent {type(c).__name__} exactly")


def abs_sq(c):
    """|c|^2, exact (Fraction) for exact scalars, float otherwise."""
    if isinstance(c, GaussianRational):
        return c.real * c.real + c.imag * c.imag
    if isinstance(c, (int, Fraction)):
        return c * c
    return c.real * c.real + c.imag * c.imag


def fraction_sqrt(f: Fraction):
    """Exact square root of a non-negative rational, or None."""
    if f < 0:
        return None
    if f == 0:
        return Fraction(0)
    n, d = f.numerator, f.denominator
    sn, sd = math.isqrt(n), math.isqrt(d)
    if sn * sn == n and sd * sd == d:
        return Fraction(sn, sd)
    return None


def gaussian_sqrt(c: GaussianRational):
    """Exact square root within the Gaussian rationals, or None.

    Solves (u + iv)^2 = c; a solution exists in the field iff |c| and
    (Re c + |c|)/2 are rational squares.
    """
    a, b = c.real, c.imag
    if b == 0:
        if a >= 0:
            u = fraction_sqrt(a)
            return None if u is None else GaussianRational(u, 0)
        v = fraction_sqrt(-a)
        return None if v is None else GaussianRational(0, v)
    t = fraction_sqrt(a * a + b * b)
    if t is None:
        return None
    u = fraction_sqrt((a + t) / 2)
    if u is None or u == 0:
        return None
    root = GaussianRational(u, b / (2 * u))
    if root * root == c:
        return root
    return None
