"""Hardy-space operations for rational boundary functions.

Everything runs over rational functions with no poles on the unit circle.
The central primitive is the boundary pairing

    <a, b> = (1/2*pi*i) * integral over |z|=1 of a(z) conj(b)(z) dz/z,

evaluated as a sum of residues of ``a * conj_star(b) / z`` over the poles
inside the open disc.  For analytic arguments this is the H^2 inner product;
in the exact backend with recognisable poles it is computed exactly.

Once either operand carries float data the pairing is instead averaged over
roots of unity: the integrand is rational with poles off the circle, so the
trapezoid sum converges geometrically, and the value depends only on the
coefficients -- no root extraction whose accuracy degrades at multiple poles.
"""
from __future__ import annotations

import numpy as np

from .blaschke import BlaschkeProduct
from .errors import (NotConjugateSymmetric, NotInH2, NotPositive,
                     VerificationFailed, ZeroFunction, ZeroOnCircle)
from .poly import Polynomial
from .rational import RationalFn
from .scalars import ONE, ZERO, Scalar, config


def require_h2(f: RationalFn, what="function") -> RationalFn:
    if not f.is_h2():
        raise NotInH2(f"{what} has a pole in the closed unit disc")
    return f


def boundary_pairing(a: RationalFn, b: RationalFn) -> Scalar:
    """L^2(circle) inner product of two rational boundary functions."""
    a.check_no_pole_on_circle("left factor")
    b.check_no_pole_on_circle("right factor")
    if not (a.exact and b.exact):
        value = _pairing_by_sampling(a, b)
        if value is not None:
            return value
    integrand = a * b.conj_star() * RationalFn.z_power(-1)
    return integrand.residues_inside_circle()


_grids: dict = {}


def _unit_grid(n: int):
    if n not in _grids:
        _grids[n] = np.exp(2j * np.pi * np.arange(n) / n)
    return _grids[n]


def _eval_on(p: Polynomial, grid):
    cs = [c.to_complex() for c in p.coeffs] or [0.0]
    return np.polynomial.polynomial.polyval(grid, np.asarray(cs))


def _pairing_by_sampling(a: RationalFn, b: RationalFn):
    """Mean of a * conj(b) over roots of unity, doubling until stable.

    Aliasing decays like rho**n with rho the largest pole modulus inside the
    circle (or reciprocal outside), so agreement between consecutive grids
    certifies convergence.  Returns None when a denominator nearly vanishes
    on the grid (poles hugging the circle); the residue route handles those.
    """
    prev = None
    n = 512
    while n <= 16384:
        grid = _unit_grid(n)
        da, db = _eval_on(a.den, grid), _eval_on(b.den, grid)
        if (np.abs(da).min() <= 1e-9 * np.abs(da).max()
                or np.abs(db).min() <= 1e-9 * np.abs(db).max()):
            return None
        vals = (_eval_on(a.num, grid) / da) * np.conj(_eval_on(b.num, grid) / db)
        cur = complex(vals.mean())
        if prev is not None and abs(cur - prev) <= 1e-13 * max(1.0, float(np.abs(vals).mean())):
            return Scalar.of_complex(cur)
        prev = cur
        n *= 2
    return None


def h2_inner(f: RationalFn, g: RationalFn) -> Scalar:
    require_h2(f, "left argument")
    require_h2(g, "right argument")
    return boundary_pairing(f, g)


def h2_norm2(f: RationalFn) -> Scalar:
    return h2_inner(f, f)


def cauchy_kernel(lam) -> RationalFn:
    """Reproducing kernel 1/(1 - conj(lam) z) of H^2 at a point of the disc."""
    lam = Scalar.coerce(lam)
    if abs(lam.to_complex()) >= 1.0:
        raise NotInH2(f"kernel point {lam!r} outside the open disc")
    return RationalFn(Polynomial((ONE,)), Polynomial((ONE, -lam.conj())))


def backward_shift(f: RationalFn) -> RationalFn:
    """(f - f(0)) / z, the adjoint of multiplication by z on H^2."""
    g = f - RationalFn.const(f(ZERO))
    if g.is_zero():
        return g
    return g * RationalFn.z_power(-1)


# -- Riesz projection ----------------------------------------------------------


def riesz_split(s: RationalFn):
    """Split into (analytic, co-analytic) parts: s = plus + minus.

    ``plus`` collects the polynomial part and all pole terms with |pole| > 1
    (nonnegative frequencies), ``minus`` the pole terms inside the disc
    (negative frequencies, vanishing at infinity).
    """
    s.check_no_pole_on_circle()
    quo, terms = s.partial_fractions()
    plus = RationalFn(quo)
    minus = RationalFn.const(0)
    for p, cs in terms:
        m = len(cs)
        num = Polynomial(())
        lin = Polynomial((-p, ONE))
        for j, c in enumerate(cs, start=1):
            num = num + lin.pow(m - j).scale(c)
        term = RationalFn(num, lin.pow(m))
        if abs(p.to_complex()) < 1.0:
            minus = minus + term
        else:
            plus = plus + term
    return plus, minus


def p_plus(s: RationalFn) -> RationalFn:
    return riesz_split(s)[0]


def p_minus(s: RationalFn) -> RationalFn:
    return riesz_split(s)[1]


# -- multiplicative structure ---------------------------------------------------


def inner_outer(f: RationalFn):
    """Factor f in H^2 as (finite Blaschke product, outer rational function).

    The unimodular constant is chosen so the outer factor is positive at the
    origin.  Zeros on the circle are rejected.
    """
    require_h2(f)
    if f.is_zero():
        raise ZeroFunction("cannot factor the zero function")
    inside = []
    for a, m in (f.zeros() if f.num.degree > 0 else []):
        mod = abs(a.to_complex())
        if abs(mod - 1.0) <= config.tol:
            raise ZeroOnCircle(f"zero {a!r} on the unit circle")
        if mod < 1.0:
            inside.append((a, m))
    b = BlaschkeProduct(1, inside)
    outer = f / b.to_rational() if inside else f
    o0 = outer(ZERO)
    phase = _unit_phase(o0)
    return b.scale_constant(phase), outer.scale(ONE / phase)


def _unit_phase(s: Scalar) -> Scalar:
    """s / |s| with exactness kept when |s| is rational."""
    if s.is_zero():
        raise ZeroFunction("phase of zero")
    return s / s.abs2().sqrt()


def blaschke_gcd(b1: BlaschkeProduct, b2: BlaschkeProduct) -> BlaschkeProduct:
    return b1.gcd(b2)


# -- spectral factorization -------------------------------------------------------


def spectral_factor_outer(s: RationalFn) -> RationalFn:
    """Outer u with |u|^2 = s on the circle, u(0) > 0.

    Requires s conjugate-symmetric (s = conj_star(s)) and strictly positive on
    the circle.  Zeros and poles of u sit strictly outside the closed disc;
    the result is verified against u * conj_star(u) = s before returning.
    """
    s.check_no_pole_on_circle("spectral density")
    if s.is_zero():
        raise NotPositive("zero density has no outer factor")
    if not s.eq(s.conj_star()):
        raise NotConjugateSymmetric("density is not conjugate-symmetric")
    _check_positive_on_circle(s)

    num_out, den_out = [], []
    for r, m in (s.zeros() if s.num.degree > 0 else []):
        mod = abs(r.to_complex())
        if abs(mod - 1.0) <= config.tol:
            raise ZeroOnCircle(f"density vanishes at {r!r} on the circle")
        if mod > 1.0:
            num_out.append((r, m))
    for p, m in s.poles():
        if abs(p.to_complex()) > 1.0:
            den_out.append((p, m))
    u1 = RationalFn(Polynomial.from_roots(num_out),
                    Polynomial.from_roots(den_out))
    ratio = s / (u1 * u1.conj_star())
    if not ratio.is_constant():
        raise VerificationFailed("density does not factor over reflected root pairs")
    c = ratio.constant_value()
    if not c.is_real() or c.to_complex().real <= 0:
        raise NotPositive(f"factorization constant {c!r} is not positive")
    u = u1.scale(c.sqrt())
    u = u.scale(ONE / _unit_phase(u(ZERO)))
    if not (u * u.conj_star()).eq(s):
        raise VerificationFailed("spectral factor failed |u|^2 = density check")
    return u


def _check_positive_on_circle(s: RationalFn, samples: int = 64):
    import cmath
    for k in range(samples):
        w = cmath.exp(2j * cmath.pi * k / samples)
        v = s(Scalar.of_complex(w)).to_complex()
        if v.real <= 0 or abs(v.imag) > 1e-8 * max(1.0, abs(v)):
            raise NotPositive(f"density not positive at sample {k}: {v}")


# -- smallest model space containing a rational function ----------------------------


def minimal_model_space(f: RationalFn) -> BlaschkeProduct:
    """Inner function of the span of the backward-shift orbit of f.

    The orbit span of a rational H^2 function is read off its partial
    fractions: the polynomial part of degree s shifts down to the span of
    1, z, ..., z^s, and the block at a pole p (necessarily outside the
    closed disc, with a nonzero top coefficient once num/den is reduced)
    shifts through the span of the kernels 1/(z-p)^j.  The smallest
    backward-shift-invariant subspace containing f is therefore the model
    space of z^(s+1) times a Blaschke factor at 1/conj(p) per pole order.
    Iterating the shift and watching the span's dimension would build the
    same space, but via Gram matrices that are numerically singular when
    the poles sit far outside; the reflection form is exact.  Verified by
    checking that the analytic part of conj(B) * f vanishes on the circle.
    """
    require_h2(f)
    if f.is_zero():
        raise ZeroFunction("orbit of the zero function is trivial")
    zeros = []
    s = f.num.degree - f.den.degree
    if s >= 0:
        zeros.append((ZERO, s + 1))
    for p, m in f.poles():
        zeros.append((ONE / p.conj(), m))
    b = BlaschkeProduct(1, zeros)
    check = p_plus(b.to_rational().conj_star() * f)
    scale = max(1.0, abs(h2_norm2(f).to_complex()))
    if not (check.is_zero()
            or abs(h2_norm2(check).to_complex()) <= config.tol * scale):
        raise VerificationFailed("orbit inner function does not annihilate f")
    return b


# -- invertible completion of a symbol ------------------------------------------------


def _model_projection(f: RationalFn, th: RationalFn) -> RationalFn:
    """Orthogonal projection of f in H^2 onto the model space of th."""
    return f - th * p_plus(th.conj_star() * f)


def make_invertible_symbol(g: RationalFn, theta: BlaschkeProduct) -> RationalFn:
    """Replace g by an equivalent symbol whose reciprocal is a bounded analytic function.

    The symbol is first reduced modulo theta*H^2 + conj(theta*H^2), which
    leaves the compressed operator unchanged, to its part g0 in
    conj(K_theta) + K_theta.  The output is g0 - conj(Phi * theta * u) where
    u is the outer spectral factor of 4|g0|^2 + 1 and Phi the smallest inner
    function with 1/u in its model space.  On the circle |u| - |g0| is
    bounded below by a positive constant, so the result and its reciprocal
    are bounded; the reduction makes theta*g0 analytic, so the Neumann series
    for the reciprocal lives in H^2 and the result has no zeros in the closed
    disc (checked before returning).
    """
    g.check_no_pole_on_circle("symbol")
    th = theta.to_rational()
    if theta.degree == 0:
        reduced = RationalFn.const(0)
    else:
        plus, minus = riesz_split(g)
        analytic_part = _model_projection(plus, th)
        coanalytic_part = _model_projection(minus.conj_star(), th)
        reduced = analytic_part + coanalytic_part.conj_star()
    density = ((reduced * reduced.conj_star()).scale(Scalar.rational(4))
               + RationalFn.const(1))
    u = spectral_factor_outer(density)
    phi = minimal_model_space(RationalFn.const(1) / u)
    analytic = phi.to_rational() * th * u
    out = reduced - analytic.conj_star()
    for r, _ in out.zeros():
        if abs(r.to_complex()) <= 1.0:
            raise VerificationFailed(
                f"perturbed symbol still vanishes at {r!r} in the closed disc")
    return out
