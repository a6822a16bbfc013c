"""Two-backend scalar arithmetic.

Exact scalars hold a Gaussian rational (a pair of ``Fraction`` values);
float scalars hold a double-precision complex number.  Mixed operations
coerce the exact operand to float, never the other way around.  Equality in
the float backend is relative: ``|a - b| <= tol * max(1, |a|, |b|)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ZeroDenominator


@dataclass
class Config:
    """Process-wide numeric policy (CLI flags override these)."""

    tol: float = 1e-10
    cluster_radius: float = 1e-7


config = Config()


def _is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


class Scalar:
    """A Gaussian rational or a complex double, with backend-aware equality."""

    __slots__ = ("re", "im", "exact")

    def __init__(self, re, im, exact: bool):
        self.re = re
        self.im = im
        self.exact = exact

    # -- constructors -----------------------------------------------------

    @staticmethod
    def rational(p, q=1) -> "Scalar":
        return Scalar(Fraction(p, q), Fraction(0), True)

    @staticmethod
    def gauss(re, im) -> "Scalar":
        return Scalar(Fraction(re), Fraction(im), True)

    @staticmethod
    def of_complex(z) -> "Scalar":
        z = complex(z)
        return Scalar(z.real, z.imag, False)

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return Scalar(Fraction(x), Fraction(0), True)
        if isinstance(x, (float, complex)):
            return Scalar.of_complex(x)
        raise TypeError(f"cannot interpret {x!r} as a scalar")

    def to_float(self) -> "Scalar":
        if not self.exact:
            return self
        return Scalar(float(self.re), float(self.im), False)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    # -- arithmetic ---------------------------------------------------------

    def _pair(self, other):
        other = Scalar.coerce(other)
        if self.exact and other.exact:
            return self, other, True
        return self.to_float(), other.to_float(), False

    def __add__(self, other):
        a, b, exact = self._pair(other)
        return Scalar(a.re + b.re, a.im + b.im, exact)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, exact = self._pair(other)
        return Scalar(a.re - b.re, a.im - b.im, exact)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        a, b, exact = self._pair(other)
        return Scalar(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re, exact)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b, exact = self._pair(other)
        d = b.re * b.re + b.im * b.im
        if d == 0:
            raise ZeroDenominator("division by zero scalar")
        return Scalar((a.re * b.re + a.im * b.im) / d,
                      (a.im * b.re - a.re * b.im) / d, exact)

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def __neg__(self):
        return Scalar(-self.re, -self.im, self.exact)

    def __pow__(self, n: int):
        if n < 0:
            return Scalar.rational(1) / self ** (-n)
        out = Scalar(Fraction(1), Fraction(0), True) if self.exact else Scalar(1.0, 0.0, False)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im, self.exact)

    def abs2(self) -> "Scalar":
        """|self|^2 in the same backend (rational for exact input)."""
        return Scalar(self.re * self.re + self.im * self.im,
                      Fraction(0) if self.exact else 0.0, self.exact)

    def __abs__(self) -> float:
        return abs(self.to_complex())

    def sqrt(self) -> "Scalar":
        """Principal square root; stays exact only for squares of rationals."""
        if self.exact and self.im == 0 and self.re >= 0:
            f = self.re
            if _is_perfect_square(f.numerator) and _is_perfect_square(f.denominator):
                return Scalar(Fraction(math.isqrt(f.numerator), math.isqrt(f.denominator)),
                              Fraction(0), True)
        return Scalar.of_complex(cmath.sqrt(self.to_complex()))

    # -- predicates ---------------------------------------------------------

    def is_zero(self, tol: float | None = None) -> bool:
        if self.exact:
            return self.re == 0 and self.im == 0
        return abs(self) <= (config.tol if tol is None else tol)

    def eq(self, other, tol: float | None = None) -> bool:
        other = Scalar.coerce(other)
        if self.exact and other.exact:
            return self.re == other.re and self.im == other.im
        t = config.tol if tol is None else tol
        a, b = self.to_complex(), other.to_complex()
        return abs(a - b) <= t * max(1.0, abs(a), abs(b))

    def is_real(self, tol: float | None = None) -> bool:
        if self.exact:
            return self.im == 0
        return abs(self.im) <= (config.tol if tol is None else tol) * max(1.0, abs(self))

    def __eq__(self, other):
        if not isinstance(other, (Scalar, int, float, complex, Fraction)):
            return NotImplemented
        return self.eq(other)

    __hash__ = None

    # -- display ------------------------------------------------------------

    def __repr__(self):
        if self.exact:
            if self.im == 0:
                return str(self.re)
            if self.re == 0:
                return f"{self.im}i"
            sign = "+" if self.im > 0 else "-"
            return f"{self.re}{sign}{abs(self.im)}i"
        z = self.to_complex()
        if z.imag == 0:
            return repr(z.real)
        return repr(z)


ZERO = Scalar.rational(0)
ONE = Scalar.rational(1)
I = Scalar.gauss(0, 1)


def scalar_sum(items, exact_start: bool = True) -> Scalar:
    out = ZERO if exact_start else Scalar(0.0, 0.0, False)
    for x in items:
        out = out + x
    return out
