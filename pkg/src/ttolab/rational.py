"""Rational functions of one variable over the two scalar backends.

A :class:`RationalFn` is stored as ``num/den`` with ``den`` monic and the pair
reduced.  Reduction prefers root bookkeeping over blind gcds: polynomials
carry their root multisets when these are known by construction, and
cancellation is then performed by exact matching (exact backend) or matching
within the clustering radius (float backend).  Without bookkeeping the exact
backend falls back to a Euclidean gcd and the float backend to numeric
root finding.

``conj_star`` implements the circle reflection ``r*(z) = conj(r(1/conj(z)))``,
which represents complex conjugation of boundary values on the unit circle.
"""
from __future__ import annotations

from .errors import PoleOnCircle, ZeroDenominator, ZeroPolynomial
from .poly import Polynomial, as_poly, poly_z, _merge_root_lists
from .scalars import ONE, ZERO, Scalar, config


def _abs_horner(p: Polynomial, x: complex) -> float:
    s = 0.0
    ax = max(1.0, abs(x))
    for k, c in enumerate(p.coeffs):
        s += abs(c) * ax ** k
    return s


def _deflate_at(p: Polynomial, root: Scalar, max_mult: int):
    """Divide out (z - root) up to max_mult times; return (quotient, count).

    Float deflation at a root outside the unit circle runs backward from the
    constant coefficient (dividing by the root each step shrinks rounding
    noise), since forward division amplifies it by |root|^degree.
    """
    count = 0
    lin = Polynomial((-root, ONE))
    backward = not (p.exact and root.exact) and abs(root) > 1.0
    while count < max_mult and p.degree >= 1:
        if backward:
            cs = p.coeffs
            d = p.degree
            q = []
            acc = ZERO
            for k in range(d):
                acc = (acc - cs[k]) / root
                q.append(acc)
            rem = abs(cs[d] - q[d - 1]) * (abs(root) ** d)
            if rem > config.tol * max(1.0, _abs_horner(p, root.to_complex())):
                break
            p = Polynomial(tuple(q))
            count += 1
            continue
        q, r = divmod(p, lin)
        if r.is_zero():
            ok = True
        elif p.exact and root.exact:
            ok = False
        else:
            rem = abs(r.coeffs[0]) if r.coeffs else 0.0
            ok = rem <= config.tol * max(1.0, _abs_horner(p, root.to_complex()))
        if not ok:
            break
        p = q
        count += 1
    return p, count


def _taylor_at(p: Polynomial, at: Scalar, count: int):
    """First count coefficients of p expanded around z = at (synthetic division)."""
    cs = list(p.coeffs)
    out = []
    for _ in range(count):
        if not cs:
            out.append(ZERO)
            continue
        r = cs[-1]
        quot = [r]
        for c in reversed(cs[:-1]):
            r = c + at * r
            quot.append(r)
        out.append(quot.pop())          # remainder = value at the point
        quot.reverse()
        cs = quot
    return out


def _series_div(a, b, count):
    """First count coefficients of the power series a(w)/b(w), b[0] != 0."""
    inv0 = ONE / b[0]
    q = []
    for k in range(count):
        acc = a[k]
        for j in range(1, min(k, len(b) - 1) + 1):
            acc = acc - b[j] * q[k - j]
        q.append(acc * inv0)
    return q


def _roots_match(a: Scalar, b: Scalar) -> bool:
    if a.exact and b.exact:
        return a.eq(b)
    return abs(a.to_complex() - b.to_complex()) <= config.cluster_radius


def _reduce(num: Polynomial, den: Polynomial):
    if den.is_zero():
        raise ZeroDenominator("rational function with zero denominator")
    if num.is_zero():
        return Polynomial(()), Polynomial((ONE,))
    if den.degree > 0:
        if num._roots is not None and den._roots is not None:
            nr, dr = list(num._roots), list(den._roots)
            changed = False
            # denominator-major with pooling: a float double root can split
            # into two simple roots either side of an exact one, and a half
            # cancellation would leave a spurious near-pole/zero pair
            for i, (s, k) in enumerate(dr):
                pool = [j for j, (r, m) in enumerate(nr)
                        if m > 0 and _roots_match(r, s)]
                c = min(sum(nr[j][1] for j in pool), k)
                if c == 0:
                    continue
                changed = True
                dr[i] = (s, k - c)
                for j in pool:
                    take = min(nr[j][1], c)
                    nr[j] = (nr[j][0], nr[j][1] - take)
                    c -= take
                    if c == 0:
                        break
            out_n = [(r, m) for r, m in nr if m > 0]
            out_d = [(s, k) for s, k in dr if k > 0]
            if changed:
                num = Polynomial.from_roots(out_n, num.leading())
                den = Polynomial.from_roots(out_d, den.leading())
        elif den._roots is not None or num._roots is not None:
            swap = den._roots is None
            if swap:
                num, den = den, num
            remaining = []
            for p, m in den._roots:
                val = num(p)
                is_root = val.is_zero() if (num.exact and p.exact) else \
                    abs(val) <= config.tol * max(1.0, _abs_horner(num, p.to_complex()))
                if is_root:
                    num, c = _deflate_at(num, p, m)
                    if m - c > 0:
                        remaining.append((p, m - c))
                else:
                    remaining.append((p, m))
            den = Polynomial.from_roots(remaining, den.leading())
            if swap:
                num, den = den, num
        elif num.exact and den.exact:
            from .poly import exact_gcd
            g = exact_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        else:
            den = den.with_roots(den.roots())
            return _reduce(num, den)
    lead = den.leading()
    if not (lead.exact and lead.re == 1 and lead.im == 0):
        inv = ONE / lead
        num, den = num.scale(inv), den.scale(inv)
    if den.degree > 0 and den._roots is None and den.exact:
        # exact denominators whose roots are Gaussian rationals keep them as
        # bookkeeping, so later denominator products are never re-rooted
        # numerically (a float double root is only known to sqrt(eps))
        rts = den.roots()
        if all(r.exact for r, _ in rts):
            den = den.with_roots(rts)
    return num, den


class RationalFn:
    __slots__ = ("num", "den", "_pf")

    def __init__(self, num, den=1):
        num, den = as_poly(num), as_poly(den)
        self.num, self.den = _reduce(num, den)
        self._pf = None

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def const(s) -> "RationalFn":
        return RationalFn(Polynomial((Scalar.coerce(s),)))

    @staticmethod
    def z_power(k: int) -> "RationalFn":
        """z**k for any integer k (negative powers put the factor below)."""
        if k >= 0:
            return RationalFn(poly_z(k))
        return RationalFn(Polynomial((ONE,)), poly_z(-k))

    @staticmethod
    def coerce(x) -> "RationalFn":
        if isinstance(x, RationalFn):
            return x
        if isinstance(x, Polynomial):
            return RationalFn(x)
        return RationalFn.const(x)

    # -- basics ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    @property
    def exact(self) -> bool:
        return self.num.exact and self.den.exact

    def to_float(self) -> "RationalFn":
        return RationalFn(self.num.to_float(), self.den.to_float())

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("not a constant")
        return (self.num.coeffs[0] if self.num.coeffs else ZERO) / self.den.coeffs[0]

    def __call__(self, x) -> Scalar:
        x = Scalar.coerce(x)
        d = self.den(x)
        if d.is_zero():
            raise ZeroDenominator("evaluation at a pole")
        return self.num(x) / d

    def __repr__(self):
        return f"RationalFn({self.num!r}, {self.den!r})"

    # -- field operations -------------------------------------------------------

    def __add__(self, other):
        other = RationalFn.coerce(other)
        if self.den is other.den or (self.den.exact and other.den.exact
                                     and self.den.eq(other.den)):
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = RationalFn.__new__(RationalFn)
        out.num, out.den, out._pf = -self.num, self.den, None
        return out

    def __sub__(self, other):
        return self + (-RationalFn.coerce(other))

    def __rsub__(self, other):
        return RationalFn.coerce(other) - self

    def __mul__(self, other):
        other = RationalFn.coerce(other)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFn.coerce(other)
        if other.is_zero():
            raise ZeroDenominator("division by the zero function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RationalFn.coerce(other) / self

    def pow(self, n: int) -> "RationalFn":
        if n < 0:
            return (RationalFn.const(1) / self).pow(-n)
        out = RationalFn.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, s) -> "RationalFn":
        s = Scalar.coerce(s)
        if s.re == 0 and s.im == 0:
            return RationalFn(Polynomial(()))
        out = RationalFn.__new__(RationalFn)
        out.num, out.den, out._pf = self.num.scale(s), self.den, None
        return out

    def derivative(self) -> "RationalFn":
        return RationalFn(self.num.derivative() * self.den
                          - self.num * self.den.derivative(),
                          self.den * self.den)

    def eq(self, other, tol=None) -> bool:
        other = RationalFn.coerce(other)
        return (self.num * other.den).eq(other.num * self.den, tol=tol)

    # -- circle reflection --------------------------------------------------------

    def conj_star(self) -> "RationalFn":
        """conj(r(1/conj(z))): conjugation of boundary values on |z| = 1."""
        if self.is_zero():
            return self
        rn, rd = self.num.reversed_conj(), self.den.reversed_conj()
        shift = self.den.degree - self.num.degree
        if shift >= 0:
            return RationalFn(rn.shift(shift), rd)
        return RationalFn(rn, rd.shift(-shift))

    # -- structure ------------------------------------------------------------------

    def poles(self):
        """Root multiset of the denominator."""
        if self.den.degree == 0:
            return []
        return self.den.roots()

    def zeros(self):
        if self.num.is_zero():
            raise ZeroPolynomial("the zero function has no zero multiset")
        if self.num.degree == 0:
            return []
        return self.num.roots()

    def order_at_zero(self) -> int:
        return self.num.order_at_zero() - self.den.order_at_zero()

    def check_no_pole_on_circle(self, what="function"):
        for p, _ in self.poles():
            if abs(abs(p.to_complex()) - 1.0) <= config.tol:
                raise PoleOnCircle(f"{what} has a pole at {p!r} on the unit circle")
        return self

    def is_h2(self, margin=None) -> bool:
        """All poles strictly outside the closed unit disc."""
        m = config.tol if margin is None else margin
        return all(abs(p.to_complex()) > 1.0 + m for p, _ in self.poles())

    # -- expansions -------------------------------------------------------------------

    def taylor(self, n: int):
        """First n Taylor coefficients at the origin (needs den(0) != 0)."""
        d0 = self.den.coeff(0)
        if d0.is_zero():
            raise ZeroDenominator("Taylor expansion at a pole of the function")
        out = []
        for k in range(n):
            acc = self.num.coeff(k)
            for j in range(1, min(k, self.den.degree) + 1):
                acc = acc - self.den.coeff(j) * out[k - j]
            out.append(acc / d0)
        return out

    def laurent(self, lo: int, hi: int):
        """Laurent coefficients a_lo..a_hi on an annulus around the circle.

        Valid whenever the only pole inside some annulus containing |z| = 1 is
        at the origin, i.e. the denominator factors as z^k * (no roots in the
        closed disc apart from 0).  This is the situation for analytic and
        conjugate-analytic content used in tests; general functions should go
        through partial fractions instead.
        """
        k = self.den.order_at_zero()
        rest = RationalFn(self.num, _shift_down(self.den, k))
        coeffs = rest.taylor(hi + k + 1)
        out = []
        for m in range(lo, hi + 1):
            idx = m + k
            out.append(coeffs[idx] if 0 <= idx < len(coeffs) else ZERO)
        return out

    # -- partial fractions ----------------------------------------------------------

    def partial_fractions(self):
        """Decompose as (polynomial, [(pole, [c1..cm])]).

        The function equals poly(z) + sum over poles p of
        sum_{j=1..m} c_j / (z - p)**j.  Block coefficients come from the local
        Taylor expansion of rem/(den/(z-p)**m) at p, by polynomial shift and
        series division; this stays exact on the exact backend and avoids
        re-rooting powers of the denominator on the float one.
        """
        if self._pf is not None:
            return self._pf
        quo, rem = divmod(self.num, self.den)
        terms = []
        if not rem.is_zero() and self.den.degree > 0:
            for p, m in self.den.roots():
                reduced = self.den
                reduced, cnt = _deflate_at(reduced, p, m)
                if cnt < m:
                    # float multiplicity fuzz: force the division
                    reduced = self.den
                    lin = Polynomial((-p, ONE)).pow(m)
                    reduced = reduced // lin
                a = _taylor_at(rem, p, m)
                b = _taylor_at(reduced, p, m)
                if b[0].is_zero():
                    raise ZeroDenominator(
                        "pole multiplicity inconsistent with the denominator")
                qs = _series_div(a, b, m)
                cs = [qs[m - 1 - j] for j in range(m)]  # cs[j-1] on 1/(z-p)**j
                terms.append((p, cs))
        self._pf = (quo, terms)
        return self._pf

    def residues_inside_circle(self) -> Scalar:
        """Sum of residues over all poles with |p| < 1 (errors on |p| = 1).

        Computed from the outside in: the sum over every pole equals the 1/z
        coefficient of the expansion at infinity (a ratio of leading
        coefficients), and the outside poles are well separated, whereas the
        inside poles may pile up at the origin where the block coefficients
        grow and cancel.
        """
        self.check_no_pole_on_circle()
        _, rem = divmod(self.num, self.den)
        if rem.is_zero() or self.den.degree == 0:
            return ZERO
        total = rem.coeff(self.den.degree - 1) / self.den.leading()
        for p, m in self.den.roots():
            if abs(p.to_complex()) <= 1.0:
                continue
            reduced, cnt = _deflate_at(self.den, p, m)
            if cnt < m:
                reduced = self.den // Polynomial((-p, ONE)).pow(m)
            b = _taylor_at(reduced, p, m)
            if b[0].is_zero():
                raise ZeroDenominator(
                    "pole multiplicity inconsistent with the denominator")
            qs = _series_div(_taylor_at(rem, p, m), b, m)
            total = total - qs[m - 1]
        return total


def _shift_down(p: Polynomial, k: int) -> Polynomial:
    if k == 0:
        return p
    known = None
    if p._roots is not None:
        known = tuple((r, m) for r, m in p._roots if not r.is_zero())
    return Polynomial(p.coeffs[k:], known_roots=known)
