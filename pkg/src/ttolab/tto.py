"""Truncated Toeplitz operators on finite model spaces.

An operator is represented by its matrix in the Takenaka-Malmquist basis:
entry (k, j) is the boundary pairing of (symbol * e_j) against e_k.  With
exact input everything here stays exact, including kernels (computed through
exact reduced row echelon elimination).
"""
from __future__ import annotations

from dataclasses import dataclass

from .blaschke import BlaschkeProduct
from .errors import (BandsNotOrthogonal, DimensionOutOfRange, DivisionNotInH2,
                     EmptyKernel, NotInOrthocomplement, NotUnimodular,
                     QuotientLeavesH2, SymbolNotInvertible, VerificationFailed,
                     WDimensionUnexpected)
from .hardy import blaschke_gcd, boundary_pairing, inner_outer, p_plus
from .linalg import matvec, nullspace
from .model_space import (ModelSpace, Subspace, VectorFn, inner_of_invariant,
                          span_of, w_split)
from .rational import RationalFn
from .scalars import config


@dataclass
class OperatorMatrix:
    """A matrix in an explicit orthonormal basis of a (block) model space."""

    entries: list
    domain: str = "model space TM basis"

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def apply(self, coords):
        return matvec(self.entries, coords)

    def eq(self, other: "OperatorMatrix", tol=None) -> bool:
        if self.rows != other.rows or self.cols != other.cols:
            return False
        t = config.tol if tol is None else tol
        scale = max([1.0] + [abs(e) for m in (self, other)
                             for row in m.entries for e in row])
        return all(a.eq(b, tol=t * scale)
                   for ra, rb in zip(self.entries, other.entries)
                   for a, b in zip(ra, rb))


def _as_model(theta) -> ModelSpace:
    return theta if isinstance(theta, ModelSpace) else ModelSpace(theta)


def tto_matrix(g: RationalFn, theta) -> OperatorMatrix:
    """Matrix of the compression f -> P(g f) to the model space of theta."""
    m = _as_model(theta)
    g.check_no_pole_on_circle("symbol")
    cols = []
    for e in m.basis:
        ge = g * e
        cols.append([boundary_pairing(ge, ek) for ek in m.basis])
    entries = [[cols[j][k] for j in range(m.dim)] for k in range(m.dim)]
    return OperatorMatrix(entries)


def _ladder_matrix(g: RationalFn, m: ModelSpace):
    """Pairings of g times the unnormalised basis ladder against itself.

    The ladder spans the model space without the square-root normalisers, so
    rational data stays rational; kernels and operator comparisons only need
    the span.
    """
    cols = []
    for e in m.ladder:
        ge = g * e
        cols.append([boundary_pairing(ge, ek) for ek in m.ladder])
    return [[cols[j][k] for j in range(m.dim)] for k in range(m.dim)]


def tto_kernel(g: RationalFn, theta) -> Subspace:
    """Kernel of the compression as a subspace of the model space."""
    m = _as_model(theta)
    g.check_no_pole_on_circle("symbol")
    vectors = []
    for coords in nullspace(_ladder_matrix(g, m)):
        f = RationalFn.const(0)
        for c, e in zip(coords, m.ladder):
            f = f + e.scale(c)
        vectors.append(VectorFn((f,)))
    return Subspace(1, vectors)


def symbols_equivalent(g1: RationalFn, g2: RationalFn, theta, tol=None) -> bool:
    """Whether two symbols compress to the same operator on the model space."""
    m = _as_model(theta)
    a = _ladder_matrix(g1, m)
    b = _ladder_matrix(g2, m)
    return OperatorMatrix(a).eq(OperatorMatrix(b), tol=tol)


# -- vector lift of a kernel -----------------------------------------------------


@dataclass
class KernelLift:
    """Kernel of the compression, lifted to pairs (f, -conj(theta) P+(g f))."""

    space: Subspace
    w: VectorFn
    kernel: Subspace


def matricial_lift(g: RationalFn, theta) -> KernelLift:
    """Lift ker to C^2-valued functions killed by the analytic block symbol.

    Pairs are (f, h) with h = -P+(g f)/theta; the lift is checked to stay in
    H^2(C^2).  ``w`` is the normalised generator of the lift minus its
    subspace of functions vanishing at the origin (one dimensional here).
    """
    m = _as_model(theta)
    ker = tto_kernel(g, m)
    if ker.dim == 0:
        raise EmptyKernel("kernel of the compression is trivial")
    th = m.theta.to_rational()
    pairs = []
    for b in ker.basis:
        f = b.scalar()
        h = -(p_plus(g * f) / th)
        if not h.is_h2():
            raise DivisionNotInH2("lift coordinate left H^2")
        pairs.append(VectorFn((f, h)))
    lift = Subspace(2, pairs)
    w_space, _ = w_split(lift)
    if w_space.dim != 1:
        raise WDimensionUnexpected(
            f"lift splits with a {w_space.dim}-dimensional top part")
    return KernelLift(space=lift, w=w_space.basis[0], kernel=ker)


@dataclass
class AssociatedInner:
    """Inner function generating the kernel, with its certificate data."""

    phi: BlaschkeProduct
    w: VectorFn
    p1: RationalFn
    p2: RationalFn


def associated_inner(g: RationalFn, theta) -> AssociatedInner:
    """Express ker = w1 * K_{z phi} and certify via the coprime pair (p1, p2)."""
    m = _as_model(theta)
    lift = matricial_lift(g, m)
    w1 = lift.w[0]
    quotients = []
    for b in lift.kernel.basis:
        q = b.scalar() / w1
        if not q.is_h2():
            raise QuotientLeavesH2("kernel member not divisible by the generator")
        quotients.append(VectorFn((q,)))
    quotient_space = span_of(quotients, 1)
    if quotient_space.dim != lift.kernel.dim:
        raise VerificationFailed("quotient by the generator lost dimensions")
    z_phi = inner_of_invariant(quotient_space)
    phi = z_phi.divide(BlaschkeProduct.single(0, 1))
    if phi is None:
        raise VerificationFailed("quotient space inner function has no zero at 0")
    th = m.theta.to_rational()
    phi_r = phi.to_rational()
    w2 = lift.w[1]
    p1 = (w1 * phi_r / th).conj_star() * RationalFn.z_power(-1)
    p2 = ((g * w1 + th * w2) * phi_r).conj_star() * RationalFn.z_power(-1)
    for name, p in (("p1", p1), ("p2", p2)):
        if not p.is_h2():
            raise DivisionNotInH2(f"certificate function {name} left H^2")
    i1, _ = inner_outer(p1) if not p1.is_zero() else (BlaschkeProduct.one(), p1)
    i2, _ = inner_outer(p2) if not p2.is_zero() else (BlaschkeProduct.one(), p2)
    if blaschke_gcd(i1, i2).degree != 0:
        raise VerificationFailed("certificate pair shares an inner factor")
    return AssociatedInner(phi=phi, w=lift.w, p1=p1, p2=p2)


# -- multiband compressions -------------------------------------------------------


def _require_unimodular(fn: RationalFn, name: str):
    fn.check_no_pole_on_circle(name)
    prod = fn * fn.conj_star()
    if not prod.eq(RationalFn.const(1)):
        raise NotUnimodular(f"{name} is not unimodular on the circle")


def _require_orthogonal_bands(phi: RationalFn, psi: RationalFn, m: ModelSpace):
    for ei in m.ladder:
        for ek in m.ladder:
            if not boundary_pairing(phi * ei, psi * ek).is_zero():
                raise BandsNotOrthogonal("band subspaces are not orthogonal")


def multiband_matrix(g: RationalFn, phi: RationalFn, psi: RationalFn,
                     theta) -> OperatorMatrix:
    """Compression of multiplication by g to phi*K + psi*K (orthogonal bands).

    In the stacked basis (phi basis block, then psi block) the matrix has the
    2x2 block form [[A_g, A_{g conj(phi) psi}], [A_{g conj(psi) phi}, A_g]].
    """
    m = _as_model(theta)
    _require_unimodular(phi, "first band multiplier")
    _require_unimodular(psi, "second band multiplier")
    _require_orthogonal_bands(phi, psi, m)
    a = tto_matrix(g, m).entries
    a12 = tto_matrix(g * phi.conj_star() * psi, m).entries
    a21 = tto_matrix(g * psi.conj_star() * phi, m).entries
    d = m.dim
    entries = []
    for i in range(d):
        entries.append(list(a[i]) + list(a12[i]))
    for i in range(d):
        entries.append(list(a21[i]) + list(a[i]))
    return OperatorMatrix(entries, domain="stacked two-band TM basis")


def multiband_kernel(g: RationalFn, phi: RationalFn, psi: RationalFn, theta):
    """Kernel of the multiband compression plus its near-invariance report."""
    from .nearly import defect_of
    m = _as_model(theta)
    _require_unimodular(phi, "first band multiplier")
    _require_unimodular(psi, "second band multiplier")
    _require_orthogonal_bands(phi, psi, m)
    a = _ladder_matrix(g, m)
    a12 = _ladder_matrix(g * phi.conj_star() * psi, m)
    a21 = _ladder_matrix(g * psi.conj_star() * phi, m)
    d = m.dim
    stacked = []
    for i in range(d):
        stacked.append(list(a[i]) + list(a12[i]))
    for i in range(d):
        stacked.append(list(a21[i]) + list(a[i]))
    vectors = []
    for coords in nullspace(stacked):
        f1 = RationalFn.const(0)
        f2 = RationalFn.const(0)
        for c, e in zip(coords[:d], m.ladder):
            f1 = f1 + e.scale(c)
        for c, e in zip(coords[d:], m.ladder):
            f2 = f2 + e.scale(c)
        vectors.append(VectorFn((f1, f2)))
    ker = Subspace(2, vectors)
    report = defect_of(ker)
    if report.defect_dim > 2:
        raise DimensionOutOfRange(
            f"two-band kernel reported defect {report.defect_dim} > 2")
    return ker, report


# -- dual operators ----------------------------------------------------------------


def _project_out_model(h: RationalFn, m: ModelSpace) -> RationalFn:
    plus = p_plus(h)
    th = m.theta.to_rational()
    return h - (plus - th * p_plus(th.conj_star() * plus))


def dual_apply(f: RationalFn, g: RationalFn, theta) -> RationalFn:
    """Apply the dual compression (I - P)(g f) on the orthocomplement."""
    m = _as_model(theta)
    f.check_no_pole_on_circle("argument")
    g.check_no_pole_on_circle("symbol")
    comp = f - _project_out_model(f, m)
    if not comp.is_zero():
        c2 = abs(boundary_pairing(comp, comp).to_complex())
        f2 = abs(boundary_pairing(f, f).to_complex())
        if c2 > config.tol * max(1.0, f2):
            raise NotInOrthocomplement("argument has a model-space component")
    return _project_out_model(g * f, m)


def dual_kernel(g: RationalFn, theta) -> Subspace:
    """Kernel of the dual compression for an invertible symbol.

    Computed as (1/g) * ker of the compression with symbol 1/g; every element
    is verified to be annihilated by the dual operator.
    """
    m = _as_model(theta)
    g.check_no_pole_on_circle("symbol")
    if g.is_zero():
        raise SymbolNotInvertible("zero symbol")
    for r, _ in (g.zeros() if g.num.degree > 0 else []):
        if abs(abs(r.to_complex()) - 1.0) <= config.tol:
            raise SymbolNotInvertible(f"symbol vanishes at {r!r} on the circle")
    ginv = RationalFn.const(1) / g
    inner_ker = tto_kernel(ginv, m)
    vectors = [VectorFn((ginv * b.scalar(),)) for b in inner_ker.basis]
    ker = Subspace(1, vectors)
    for v in ker.basis:
        out = dual_apply(v.scalar(), g, m)
        if not out.is_zero():
            o2 = abs(boundary_pairing(out, out).to_complex())
            gv = g * v.scalar()
            s2 = abs(boundary_pairing(gv, gv).to_complex())
            if o2 > config.tol * max(1.0, s2):
                raise VerificationFailed(
                    "claimed dual kernel element not annihilated")
    return ker
