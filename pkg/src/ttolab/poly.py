"""Dense univariate polynomials over :class:`~ttolab.scalars.Scalar`.

Coefficients are stored lowest degree first and trimmed; the zero polynomial
has an empty coefficient tuple and degree -1.  A polynomial is backend-uniform:
if any coefficient is a float scalar, all are.

Root finding is hybrid.  Float polynomials go through the companion matrix
(numpy) and roots closer than the clustering radius are merged with summed
multiplicity.  Exact polynomials are first split into square-free factors, the
numeric roots of each factor are then recognised back into Gaussian rationals
where an exact verification succeeds; unrecognised roots stay float.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import ZeroDenominator, ZeroPolynomial
from .scalars import ONE, ZERO, Scalar, config


def _uniform(coeffs):
    coeffs = tuple(Scalar.coerce(c) for c in coeffs)
    if coeffs and not all(c.exact for c in coeffs):
        coeffs = tuple(c.to_float() for c in coeffs)
    return coeffs


class Polynomial:
    __slots__ = ("coeffs", "_roots")

    def __init__(self, coeffs=(), known_roots=None):
        coeffs = _uniform(coeffs)
        # trim trailing zeros relative to the largest coefficient
        if coeffs and not coeffs[-1].exact:
            scale = max(abs(c) for c in coeffs)
            tol = config.tol * max(1.0, scale)
            n = len(coeffs)
            while n > 0 and abs(coeffs[n - 1]) <= tol:
                n -= 1
            coeffs = coeffs[:n]
        else:
            n = len(coeffs)
            while n > 0 and coeffs[n - 1].is_zero():
                n -= 1
            coeffs = coeffs[:n]
        self.coeffs = coeffs
        if known_roots is not None:
            self._roots = tuple(known_roots)
        elif len(coeffs) == 1:
            # a nonzero constant knows its (empty) root multiset, so products
            # with constants keep the bookkeeping of the other factor
            self._roots = ()
        else:
            self._roots = None

    # -- basics -------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return all(c.exact for c in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Scalar:
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> Scalar:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __call__(self, x) -> Scalar:
        x = Scalar.coerce(x)
        out = ZERO if (self.exact and x.exact) else Scalar.of_complex(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def to_float(self) -> "Polynomial":
        return Polynomial(tuple(c.to_float() for c in self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        return "Poly(" + ", ".join(repr(c) for c in self.coeffs) + ")"

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        other = as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs),
                          known_roots=self._roots)

    def __sub__(self, other):
        return self + (-as_poly(other))

    def __rsub__(self, other):
        return as_poly(other) - self

    def __mul__(self, other):
        other = as_poly(other)
        if self.is_zero() or other.is_zero():
            return Polynomial(())
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        known = None
        sr, tr = self._roots, other._roots
        if (sr is None) != (tr is None) and not (self.exact and other.exact):
            # rooting the fresh factor of a float product is cheap and
            # accurate; re-rooting the product later would split any double
            # root by sqrt(eps) (exact products cancel via exact gcd instead)
            if sr is None:
                sr = self.roots()
            else:
                tr = other.roots()
        if sr is not None and tr is not None:
            known = _merge_root_lists(sr, tr)
        return Polynomial(tuple(out), known_roots=known)

    __rmul__ = __mul__

    def scale(self, s) -> "Polynomial":
        s = Scalar.coerce(s)
        if s.re == 0 and s.im == 0:
            return Polynomial(())
        known = self._roots
        if known is None and self.exact and not s.exact and self.degree > 0:
            # last chance to root this polynomial exactly (squarefree split
            # keeps multiplicities); once the scale makes it float, a repeated
            # root could only be recovered to eps**(1/multiplicity)
            known = tuple(_find_roots(self))
        return Polynomial(tuple(c * s for c in self.coeffs), known_roots=known)

    def shift(self, k: int) -> "Polynomial":
        """Multiply by z**k."""
        if self.is_zero() or k == 0:
            return self if k == 0 else Polynomial(())
        known = None
        if self._roots is not None:
            known = _merge_root_lists(self._roots, ((ZERO, k),))
        return Polynomial((ZERO,) * k + self.coeffs, known_roots=known)

    def __divmod__(self, other):
        other = as_poly(other)
        if other.is_zero():
            raise ZeroDenominator("polynomial division by zero")
        if self.degree < other.degree:
            return Polynomial(()), self
        rem = list(self.coeffs)
        lead = other.leading()
        qdeg = self.degree - other.degree
        quo = [ZERO] * (qdeg + 1)
        for k in range(qdeg, -1, -1):
            c = rem[other.degree + k] / lead
            quo[k] = c
            if not c.is_zero():
                for j, b in enumerate(other.coeffs):
                    rem[j + k] = rem[j + k] - c * b
        return Polynomial(tuple(quo)), Polynomial(tuple(rem[:other.degree]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(ONE / self.leading())

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(self.coeffs[k] * Scalar.rational(k)
                                for k in range(1, len(self.coeffs))))

    def pow(self, n: int) -> "Polynomial":
        out = Polynomial((ONE,))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- structural equality ---------------------------------------------------

    def eq(self, other, tol=None) -> bool:
        other = as_poly(other)
        if self.exact and other.exact:
            return self.coeffs == () and other.coeffs == () or (
                len(self.coeffs) == len(other.coeffs)
                and all(a.eq(b) for a, b in zip(self.coeffs, other.coeffs)))
        t = config.tol if tol is None else tol
        scale = max([1.0] + [abs(c) for c in self.coeffs] + [abs(c) for c in other.coeffs])
        n = max(len(self.coeffs), len(other.coeffs))
        return all(abs(self.coeff(k).to_complex() - other.coeff(k).to_complex())
                   <= t * scale for k in range(n))

    # -- roots ------------------------------------------------------------------

    @staticmethod
    def from_roots(roots, lc=ONE) -> "Polynomial":
        """Build lc * prod (z - r)**m from an iterable of (root, multiplicity)."""
        lc = Scalar.coerce(lc)
        out = Polynomial((lc,))
        pairs = ()
        for r, m in roots:
            r = Scalar.coerce(r)
            pairs = _merge_root_lists(pairs, ((r, m),))
            out = out * Polynomial((-r, ONE)).pow(m)
        return Polynomial(out.coeffs, known_roots=pairs)

    def order_at_zero(self) -> int:
        """Multiplicity of the root z = 0 (0 if nonvanishing at the origin)."""
        if self.is_zero():
            raise ZeroPolynomial("order at zero undefined for the zero polynomial")
        if self.exact:
            k = 0
            while self.coeffs[k].is_zero():
                k += 1
            return k
        scale = max(abs(c) for c in self.coeffs)
        tol = config.tol * max(1.0, scale)
        k = 0
        while k <= self.degree and abs(self.coeffs[k]) <= tol:
            k += 1
        return k

    def reversed_conj(self) -> "Polynomial":
        """z**deg(p) * conj(p)(1/z): conjugate-reciprocal reflection.

        Roots map to 1/conj(root); roots at the origin drop the degree.
        """
        coeffs = tuple(c.conj() for c in reversed(self.coeffs))
        known = None
        if self._roots is not None:
            known = tuple((ONE / r.conj(), m) for r, m in self._roots if not r.is_zero())
        return Polynomial(coeffs, known_roots=known)

    def roots(self):
        """Return [(root, multiplicity)]; exact roots where recognisable."""
        if self.is_zero():
            raise ZeroPolynomial("the zero polynomial has no root multiset")
        if self._roots is None:
            self._roots = tuple(_find_roots(self))
        return list(self._roots)

    def with_roots(self, roots) -> "Polynomial":
        return Polynomial(self.coeffs, known_roots=tuple(roots))


def as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial((Scalar.coerce(x),))


def poly_z(k: int = 1) -> Polynomial:
    return Polynomial((ZERO,) * k + (ONE,), known_roots=((ZERO, k),) if k else ())


def _merge_root_lists(a, b):
    out = list(a)
    for r, m in b:
        for i, (s, k) in enumerate(out):
            same = (r.exact and s.exact and r.eq(s)) or \
                (not (r.exact and s.exact) and abs(r.to_complex() - s.to_complex()) <= config.cluster_radius)
            if same:
                out[i] = (s, k + m)
                break
        else:
            out.append((r, m))
    return tuple(out)


# -- exact gcd / square-free machinery ---------------------------------------


def exact_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd over the Gaussian rationals (Euclid)."""
    if not (a.exact and b.exact):
        raise ValueError("exact_gcd needs exact polynomials")
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def squarefree_decomposition(p: Polynomial):
    """Yun's algorithm: return [(factor_i, i)] with p = lc * prod factor_i**i."""
    parts = []
    g = exact_gcd(p, p.derivative())
    if g.degree <= 0:
        return [(p.monic(), 1)]
    w = p // g
    i = 1
    while w.degree > 0:
        y = exact_gcd(w, g)
        f = w // y
        if f.degree > 0:
            parts.append((f.monic(), i))
        w, g = y, g // y
        i += 1
    if g.degree > 0:
        # remaining factor (should not happen over characteristic zero)
        parts.append((g.monic(), i))
    return parts


# -- numeric root finding -----------------------------------------------------


def _numpy_roots(p: Polynomial):
    cs = [c.to_complex() for c in p.coeffs]
    arr = np.array(list(reversed(cs)), dtype=complex)
    return list(np.roots(arr))


def _newton_polish(p: Polynomial, r: complex, steps: int = 2) -> complex:
    dp = p.derivative()
    for _ in range(steps):
        d = dp(Scalar.of_complex(r)).to_complex()
        if abs(d) < 1e-300:
            break
        step = p(Scalar.of_complex(r)).to_complex() / d
        if not (abs(step) < 1.0):
            break
        r = r - step
    return r


def _cluster(roots, radius: float):
    clusters = []  # (sum, count)
    for r in roots:
        for i, (s, n) in enumerate(clusters):
            if abs(r - s / n) <= radius:
                clusters[i] = (s + r, n + 1)
                break
        else:
            clusters.append((r, 1))
    return [(s / n, n) for s, n in clusters]


def _polish_cluster(p: Polynomial, dp: Polynomial, r: complex, m: int,
                    radius: float | None = None) -> complex:
    """Refine a multiplicity-m cluster centre with the modified Newton map.

    Plain Newton stalls near sqrt(eps) at a multiple root, so the centre of a
    cluster of numerically split roots keeps an error of that order.  The map
    x -> x - m p(x)/p'(x) is quadratically convergent there.  Iterates are
    kept only while they stay inside the cluster radius and decrease |p|.
    """
    if radius is None:
        radius = config.cluster_radius
    best, best_val = r, abs(p(Scalar.of_complex(r)).to_complex())
    x = r
    for _ in range(6):
        d = dp(Scalar.of_complex(x)).to_complex()
        if abs(d) < 1e-300:
            break
        step = m * p(Scalar.of_complex(x)).to_complex() / d
        x = x - step
        if abs(x - r) > radius:
            break
        val = abs(p(Scalar.of_complex(x)).to_complex())
        if val < best_val:
            best, best_val = x, val
        if val == 0.0 or abs(step) <= 1e-17 * max(1.0, abs(x)):
            break
    return best


def _taylor_values(coeffs, at, count):
    """First count Taylor coefficients of the polynomial around z = at."""
    cs = list(coeffs)
    out = []
    for _ in range(count):
        if not cs:
            out.append(0.0)
            continue
        r = cs[-1]
        quot = [r]
        for c in reversed(cs[:-1]):
            r = c + at * r
            quot.append(r)
        out.append(quot.pop())
        quot.reverse()
        cs = quot
    return out


_MERGE_BUDGET = 1e4 * float(np.finfo(float).eps)


def _multiplicity_supported(p: Polynomial, c: complex, m: int) -> bool:
    """Whether the Taylor chain at c is consistent with a multiplicity-m root.

    A multiplicity-m root scattered by coefficient noise of relative size B
    leaves |p^(j)(c)|/j! around B**((m-j)/m) times the absolute-coefficient
    majorant (the centre itself is only known to B**(1/m)), so each order gets
    its own graded threshold.  Equivalently: accept when zeroing the low
    Taylor coefficients perturbs the polynomial by at most the noise budget,
    which is when the data genuinely cannot tell the cluster from one root.
    """
    vals = _taylor_values([x.to_complex() for x in p.coeffs], c, m)
    majs = _taylor_values([abs(x.to_complex()) for x in p.coeffs], abs(c), m)
    return all(abs(v) <= (_MERGE_BUDGET ** ((m - j) / m)) * max(abs(s), 1e-300)
               for j, (v, s) in enumerate(zip(vals, majs)))


def _merge_split_roots(p: Polynomial, dp: Polynomial, clusters):
    """Collapse numerically split multiple roots the derivative chain supports.

    A multiplicity-m root of a float polynomial scatters over a radius like
    eps**(1/m), far beyond the plain clustering radius for m > 2, so clusters
    are agglomerated (closest pair first) whenever the merged centre still
    zeroes the Taylor chain; the centre is then re-polished at the right
    multiplicity.
    """
    pts = list(clusters)
    merged = True
    while merged and len(pts) > 1:
        merged = False
        order = sorted((abs(pts[i][0] - pts[j][0]), i, j)
                       for i in range(len(pts)) for j in range(i + 1, len(pts)))
        for d, i, j in order:
            (c1, m1), (c2, m2) = pts[i], pts[j]
            if d > 0.05 * max(1.0, abs(c1)):
                break
            m = m1 + m2
            c = (c1 * m1 + c2 * m2) / m
            if not _multiplicity_supported(p, c, m):
                continue
            c = _polish_cluster(p, dp, c, m, radius=4 * d + config.cluster_radius)
            pts[i] = (c, m)
            del pts[j]
            merged = True
            break
    return pts


def _recognise_gaussian(p: Polynomial, r: complex):
    """Try to upgrade a numeric root of an exact polynomial to a Gaussian rational."""
    for limit in (1, 100, 10**6, 10**12):
        re = Fraction(r.real).limit_denominator(limit)
        im = Fraction(r.imag).limit_denominator(limit)
        if abs(complex(re, im) - r) > max(1e-6, 10 * config.cluster_radius):
            continue
        cand = Scalar(re, im, True)
        if p(cand).is_zero():
            return cand
    return None


def _find_roots(p: Polynomial):
    if p.degree == 0:
        return []
    if p.exact:
        out = []
        for factor, mult in squarefree_decomposition(p):
            remaining = factor
            for r in _numpy_roots(factor):
                if remaining.degree <= 0:
                    break
                exact_root = _recognise_gaussian(remaining, r)
                if exact_root is not None:
                    out.append((exact_root, mult))
                    remaining = remaining // Polynomial((-exact_root, ONE))
                else:
                    r = _newton_polish(factor, r)
                    out.append((Scalar.of_complex(r), mult))
                    # deflation of the float root is numeric; keep the exact
                    # remainder only when division is exact, else drop out.
        return out
    # peel off the origin root exactly first: numeric root finders scatter a
    # multiplicity-m zero over a radius like eps**(1/m), far past clustering
    k = p.order_at_zero()
    out = [(ZERO, k)] if k else []
    if k:
        p = Polynomial(p.coeffs[k:])
    if p.degree > 0:
        dp = p.derivative()
        polished = [_newton_polish(p, r) for r in _numpy_roots(p)]
        clusters = []
        for r, m in _cluster(polished, config.cluster_radius):
            if m > 1:
                r = _polish_cluster(p, dp, r, m)
            clusters.append((r, m))
        for r, m in _merge_split_roots(p, dp, clusters):
            out.append((Scalar.of_complex(r), m))
    return out
