"""Finite Blaschke products: unimodular constant times factors (z-a)/(1-conj(a)z)."""
from __future__ import annotations

from .errors import LoweringError, NotUnimodular, ZeroOnCircle
from .poly import Polynomial, _merge_root_lists
from .rational import RationalFn
from .scalars import ONE, Scalar, config
from .linalg import sort_root_pairs


class BlaschkeProduct:
    __slots__ = ("constant", "zeros")

    def __init__(self, constant=1, zeros=()):
        c = Scalar.coerce(constant)
        if not c.abs2().eq(ONE):
            raise NotUnimodular(f"constant {c!r} is not unimodular")
        pairs = ()
        for a, m in zeros:
            a = Scalar.coerce(a)
            mod = abs(a.to_complex())
            if mod >= 1.0 - config.tol:
                raise ZeroOnCircle(f"Blaschke zero {a!r} not strictly inside the disc")
            if m > 0:
                pairs = _merge_root_lists(pairs, ((a, m),))
        self.constant = c
        self.zeros = tuple(sort_root_pairs(pairs))

    @staticmethod
    def one() -> "BlaschkeProduct":
        return BlaschkeProduct(1, ())

    @staticmethod
    def single(a, mult=1) -> "BlaschkeProduct":
        return BlaschkeProduct(1, ((a, mult),))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.zeros)

    @property
    def exact(self) -> bool:
        return self.constant.exact and all(a.exact for a, _ in self.zeros)

    def to_rational(self) -> RationalFn:
        num = Polynomial.from_roots(self.zeros, self.constant)
        den_pairs = []
        lc = ONE
        for a, m in self.zeros:
            if a.is_zero():
                continue
            den_pairs.append((ONE / a.conj(), m))
            lc = lc * (-a.conj()) ** m
        den = Polynomial.from_roots(den_pairs, lc)
        return RationalFn(num, den)

    def __call__(self, x) -> Scalar:
        return self.to_rational()(x)

    def __mul__(self, other: "BlaschkeProduct") -> "BlaschkeProduct":
        return BlaschkeProduct(self.constant * other.constant,
                               _merge_root_lists(self.zeros, other.zeros))

    def scale_constant(self, c) -> "BlaschkeProduct":
        return BlaschkeProduct(self.constant * Scalar.coerce(c), self.zeros)

    def gcd(self, other: "BlaschkeProduct") -> "BlaschkeProduct":
        """Common inner factor: matched zeros with minimum multiplicities."""
        taken = []
        pool = list(other.zeros)
        for a, m in self.zeros:
            for i, (b, k) in enumerate(pool):
                if k > 0 and _zeros_match(a, b):
                    taken.append((a, min(m, k)))
                    pool[i] = (b, k - min(m, k))
                    break
        return BlaschkeProduct(1, taken)

    def divide(self, other: "BlaschkeProduct"):
        """self / other when other divides self, else None."""
        pool = list(self.zeros)
        for b, k in other.zeros:
            hit = False
            for i, (a, m) in enumerate(pool):
                if m >= k and _zeros_match(a, b):
                    pool[i] = (a, m - k)
                    hit = True
                    break
            if not hit:
                return None
        return BlaschkeProduct(self.constant / other.constant,
                               [(a, m) for a, m in pool if m > 0])

    def same_up_to_constant(self, other: "BlaschkeProduct") -> bool:
        q = self.divide(other)
        return q is not None and q.degree == 0

    def eq(self, other: "BlaschkeProduct") -> bool:
        return self.same_up_to_constant(other) and self.constant.eq(other.constant)

    def __repr__(self):
        if not self.zeros:
            return f"Blaschke({self.constant!r})"
        zs = ", ".join(f"{a!r}^{m}" if m > 1 else repr(a) for a, m in self.zeros)
        return f"Blaschke({self.constant!r}; zeros {zs})"

    @staticmethod
    def from_rational(r: RationalFn) -> "BlaschkeProduct":
        """Recognise a rational function as a finite Blaschke product."""
        if r.is_zero():
            raise LoweringError("zero function is not a Blaschke product")
        if r.num.degree == 0 and r.den.degree == 0:
            return BlaschkeProduct(r.constant_value(), ())
        zs = []
        for a, m in r.zeros():
            if abs(a.to_complex()) >= 1.0 - config.tol:
                raise NotUnimodular(
                    f"zero {a!r} of modulus >= 1: not an inner function")
            zs.append((a, m))
        cand = BlaschkeProduct(1, zs)
        quot = r / cand.to_rational()
        if not quot.is_constant():
            raise NotUnimodular("not a quotient of the expected Blaschke factors")
        c = quot.constant_value()
        if not c.abs2().eq(ONE):
            raise NotUnimodular(f"leftover constant {c!r} is not unimodular")
        return cand.scale_constant(c)


def _zeros_match(a: Scalar, b: Scalar) -> bool:
    if a.exact and b.exact:
        return a.eq(b)
    return abs(a.to_complex() - b.to_complex()) <= config.cluster_radius
