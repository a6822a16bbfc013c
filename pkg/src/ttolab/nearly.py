"""Nearly backward-shift-invariant subspaces and their decompositions.

Given a finite-dimensional subspace M of vector-valued boundary functions,
this module measures how far M is from being invariant under the backward
shift (the defect), and produces the multiplier decompositions that go with
that measurement: the isometric-multiplier form when the defect vanishes,
the general defect form driven by a resolvent solve, the two competing
decompositions of a compression kernel, and the decomposition of a dual
compression kernel.

Every decomposition carries machine-checkable certificates: reconstruction
residuals, a Gram (norm-identity) residual, and a parameter space verified
to be invariant under the backward shift.
"""
from __future__ import annotations

from dataclasses import dataclass

from .blaschke import BlaschkeProduct
from .errors import (DefectMismatch, DefectNonzero, DimensionOutOfRange,
                     EmptyKernel, IndexOutOfRange, NotNearlyInvariant,
                     QuotientLeavesH2, VerificationFailed,
                     WDimensionUnexpected)
from .linalg import identity, mat_is_exact, mat_scale_bound, matmul, nullspace, trace
from .model_space import (ModelSpace, Subspace, VectorFn, backward_shift_matrix,
                          inner_of_invariant, span_of, w_split)
from .poly import Polynomial
from .rational import RationalFn
from .scalars import ONE, ZERO, Scalar, config
from .tto import dual_kernel, matricial_lift, tto_kernel


def _small(n2: Scalar, scale: float) -> bool:
    """Zero test for a squared norm against a squared scale."""
    if n2.exact:
        return n2.is_zero()
    return abs(n2) <= config.tol * max(1.0, scale)


def _certificate_tol() -> float:
    """Gram-identity raise threshold: an order looser than the rank tolerance.

    Pairings of high-degree products carry conditioning-driven rounding at the
    rank-tolerance level, so the certificate bound sits one order above it.
    """
    return 10.0 * config.tol


def _gram_residual(a, b) -> float:
    worst = 0.0
    for ra, rb in zip(a, b):
        for x, y in zip(ra, rb):
            worst = max(worst, abs(x - y))
    return worst


def _gram_scale(g) -> float:
    return max([1.0] + [abs(x) for row in g for x in row])


# -- defect measurement ------------------------------------------------------------


@dataclass
class DefectReport:
    """How far a subspace is from backward-shift invariance.

    ``witnesses`` holds, for every basis element f of M vanishing at the
    origin, the squared norm of the part of S*f outside M + defect_space
    (zero up to roundoff by construction).
    """

    is_nearly_invariant: bool
    defect_space: Subspace
    defect_dim: int
    witnesses: tuple


def defect_of(m: Subspace) -> DefectReport:
    """Minimal escape space for the backward shift acting on m ∩ zH^2."""
    m0 = m.vanishing_subspace()
    shifts, residuals = [], []
    for b in m0.basis:
        s = b.backward_shift()
        _, diff = m.coords_of(s)
        shifts.append((b, s))
        residuals.append(diff)
    escaped = []
    for (_, s), r in zip(shifts, residuals):
        if not _small(r.norm2(), abs(s.norm2())):
            escaped.append(r)
    d = span_of(escaped, m.ambient)
    if d.dim:
        d = d.orthonormalize()
    witnesses = []
    for (b, _), r in zip(shifts, residuals):
        _, left = d.coords_of(r)
        witnesses.append((b, left.norm2()))
    return DefectReport(is_nearly_invariant=(d.dim == 0), defect_space=d,
                        defect_dim=d.dim, witnesses=tuple(witnesses))


def project_coords_defect(m: Subspace, d: Subspace, i: int):
    """Coordinate truncation of m with a predicted defect for the image.

    Truncating to the first i coordinates sends m to a subspace m_i whose
    defect directions are covered by: (truncations of the origin-complement
    part of m that vanish at 0, divided by z) plus the truncation of d.
    Returns (m_i, predicted_defect, defect report of m_i); the covering
    inclusion is verified.
    """
    if not 1 <= i <= m.ambient:
        raise IndexOutOfRange(f"coordinate count {i} not in 1..{m.ambient}")
    rep = defect_of(m)
    if not d.contains_subspace(rep.defect_space) and rep.defect_space.dim:
        raise DefectMismatch("supplied defect space misses escape directions")

    def truncate(v: VectorFn) -> VectorFn:
        return VectorFn(tuple(v[c] for c in range(i)))

    m_i = span_of([truncate(b) for b in m.basis], i)
    w_on, _ = w_split(m)
    w_image = span_of([truncate(b) for b in w_on.basis], i)
    zdown = RationalFn.z_power(-1)
    divided = [b.mul_fn(zdown) for b in w_image.vanishing_subspace().basis]
    d_image = span_of([truncate(b) for b in d.basis], i)
    predicted = span_of(divided + list(d_image.basis), i)
    report = defect_of(m_i)
    cover = m_i.sum(predicted)
    if not cover.contains_subspace(report.defect_space):
        raise VerificationFailed("actual defect escapes the predicted cover")
    return m_i, predicted, report


# -- decompositions ----------------------------------------------------------------


@dataclass
class Decomposition:
    """A multiplier decomposition of a subspace, with certificates.

    ``parameter_space.basis[i]`` is the coordinate tuple of the i-th basis
    element of the decomposed space: for the defect kinds the tuple lists the
    origin-block coordinates first and the defect coordinates last, and the
    element equals sum(multipliers[l]*k[l]) + z*sum(defect_basis[j]*k[r+j]).
    The dual kinds reconstruct as sum(multipliers[l]*k[l]) with the Gram
    certificate taken on the symbol-multiplied side.

    Both certificate residuals are scale-relative (worst squared residual or
    Gram-entry deviation divided by max(1, the matching squared norm scale)),
    so a bound on them is meaningful for unnormalised bases; exact-backend
    decompositions report 0.0.
    """

    kind: str
    multipliers: tuple
    defect_basis: tuple
    parameter_space: Subspace
    inner: BlaschkeProduct | None
    isometry_residual: float
    reconstruction_residual: float


def _resolvent_inverse(lmat):
    """Adjugate and determinant of (Id - z L), via Faddeev-LeVerrier.

    Returns (adj, det) where adj[t][i] is the polynomial numerator of entry
    (t, i) of (Id - zL)^{-1} and det is the shared denominator.  Working in
    plain matrix arithmetic keeps a single reduced denominator per entry,
    which the field-of-fractions elimination does not.
    """
    d = len(lmat)
    scale = mat_scale_bound(lmat)
    mats = [identity(d, exact=mat_is_exact(lmat))]
    coeffs = [ONE]  # det(Id - zL) coefficient at z^k is coeffs[k]
    for k in range(1, d + 1):
        prod = matmul(lmat, mats[-1])
        c = trace(prod) * Scalar.rational(-1, k)
        coeffs.append(c)
        mats.append([[prod[i][j] + (c if i == j else ZERO) for j in range(d)]
                     for i in range(d)])
    closing = mats.pop()  # L·M_d + c_0·Id must vanish (Cayley-Hamilton)
    for row in closing:
        for entry in row:
            if not _small(entry * entry.conj(), scale**2):
                raise VerificationFailed("resolvent recurrence failed to close")
    den = Polynomial(coeffs)
    adj = [[Polynomial([mk[t][i] for mk in mats]) for i in range(d)]
           for t in range(d)]
    return adj, den


def _coordinate_tuples(lmat, functional_rows, count):
    """k-vectors Σ_t row[t]·X[t][i] for X = (Id - zL)^{-1}, one per column."""
    adj, den = _resolvent_inverse(lmat)
    tuples = []
    for i in range(count):
        ks = []
        for row in functional_rows:
            num = Polynomial([ZERO])
            for t in range(count):
                num = num + adj[t][i].scale(row[t])
            k = RationalFn(num, den)
            if not k.is_h2():
                raise VerificationFailed("coordinate function left H^2")
            ks.append(k)
        tuples.append(VectorFn(tuple(ks)))
    return tuples


def _checked_parameter_space(tuples, ambient, count):
    if span_of(tuples, ambient).dim != count:
        raise VerificationFailed("coordinate map dropped rank")
    kspace = Subspace(ambient, tuples)
    _, residuals = backward_shift_matrix(kspace)
    for tup, r in zip(tuples, residuals):
        if not _small(r.norm2(), abs(tup.norm2())):
            raise VerificationFailed(
                "parameter space is not invariant under the backward shift")
    return kspace


def decompose_with_defect(m: Subspace, d: Subspace | None = None) -> Decomposition:
    """Multiplier decomposition of m relative to a defect space d ⊇ escape(m).

    Every element splits as a combination of the orthonormal origin-block
    columns with H^2 coefficient functions, plus z times a combination of the
    defect directions; the coefficients come from a single parametric linear
    solve against the compressed backward shift.
    """
    rep = defect_of(m)
    if d is None:
        d = rep.defect_space
    d_on = d.orthonormalize() if (d.dim and not d.orthonormal) else d
    for e in d_on.basis:
        for b in m.basis:
            if abs(e.pair(b)) > config.tol * max(1.0, abs(b.norm2()) ** 0.5):
                raise DefectMismatch("defect space not orthogonal to the subspace")
    for b in rep.defect_space.basis:
        if not d_on.contains(b):
            raise DefectMismatch("supplied defect space misses escape directions")

    w_on, m0 = w_split(m)
    r, mm = w_on.dim, d_on.dim
    if m.dim and r + mm == 0:
        raise NotNearlyInvariant("no origin block and no defect directions")

    lcols = []
    wrows = [[] for _ in range(r)]
    drows = [[] for _ in range(mm)]
    for b in m.basis:
        for l, u in enumerate(w_on.basis):
            wrows[l].append(b.pair(u))
        _, diff0 = m0.coords_of(b)
        s = (b - diff0).backward_shift()
        coords, sdiff = m.coords_of(s)
        lcols.append(coords)
        for j, e in enumerate(d_on.basis):
            drows[j].append(s.pair(e))
        _, left = d_on.coords_of(sdiff)
        if not _small(left.norm2(), abs(s.norm2())):
            raise NotNearlyInvariant("a shifted element escapes the defect cover")
    lmat = [[lcols[j][i] for j in range(m.dim)] for i in range(m.dim)]

    tuples = _coordinate_tuples(lmat, wrows + drows, m.dim)
    kspace = _checked_parameter_space(tuples, r + mm, m.dim)

    zup = RationalFn.z_power(1)
    worst = 0.0
    for b, tup in zip(m.basis, tuples):
        recon = None
        for l, u in enumerate(w_on.basis):
            t = u.mul_fn(tup[l])
            recon = t if recon is None else recon + t
        for j, e in enumerate(d_on.basis):
            t = e.mul_fn(tup[r + j] * zup)
            recon = t if recon is None else recon + t
        r2 = (b - recon).norm2()
        if not _small(r2, abs(b.norm2())):
            raise VerificationFailed("reconstruction residual above tolerance")
        worst = max(worst, abs(r2) / max(1.0, abs(b.norm2())))

    iso = _gram_residual(m.gram(), kspace.gram()) / _gram_scale(m.gram())
    if iso > _certificate_tol():
        raise VerificationFailed("coordinate map is not an isometry")

    inner = inner_of_invariant(kspace) if r + mm == 1 else None
    return Decomposition(kind="DefectM_Case1" if r else "DefectM_Case2",
                         multipliers=tuple(w_on.basis),
                         defect_basis=tuple(d_on.basis),
                         parameter_space=kspace, inner=inner,
                         isometry_residual=iso, reconstruction_residual=worst)


def hitt_decompose(m: Subspace) -> Decomposition:
    """Isometric-multiplier form u·K_B of a defect-free scalar subspace."""
    if m.ambient != 1:
        raise IndexOutOfRange("isometric-multiplier form needs scalar functions")
    rep = defect_of(m)
    if rep.defect_dim:
        raise DefectNonzero(f"defect dimension {rep.defect_dim}, expected 0")
    w_on, _ = w_split(m)
    if w_on.dim != 1:
        raise WDimensionUnexpected(
            f"origin block has dimension {w_on.dim}, expected 1")
    u = w_on.basis[0].scalar()
    quotients = []
    for b in m.basis:
        q = b.scalar() / u
        if not q.is_h2():
            raise QuotientLeavesH2("a quotient by the generator leaves H^2")
        quotients.append(VectorFn.wrap(q))
    kspace = Subspace(1, quotients)
    inner = inner_of_invariant(kspace)
    worst = 0.0
    for b, q in zip(m.basis, quotients):
        r2 = (b - VectorFn.wrap(u * q.scalar())).norm2()
        worst = max(worst, abs(r2) / max(1.0, abs(b.norm2())))
    iso = _gram_residual(m.gram(), kspace.gram()) / _gram_scale(m.gram())
    if iso > _certificate_tol():
        raise VerificationFailed("quotients do not preserve the Gram matrix")
    return Decomposition(kind="Hitt", multipliers=(w_on.basis[0],),
                         defect_basis=(), parameter_space=kspace, inner=inner,
                         isometry_residual=iso, reconstruction_residual=worst)


# -- the two decompositions of a compression kernel ---------------------------------


@dataclass
class TwoWaysReport:
    """Both decompositions of a compression kernel, with the shift power n."""

    approach1: Decomposition
    approach2: Decomposition
    n: int
    differ: bool
    kernel: Subspace


def tt_kernel_two_ways(g: RationalFn, theta) -> TwoWaysReport:
    """Decompose ker of the compression both ways and compare inner functions.

    If some kernel element survives at the origin the kernel is already
    defect-free and a single isometric-multiplier decomposition fills both
    slots.  Otherwise approach 1 strips the maximal power z^n and decomposes
    the quotient, while approach 2 keeps the kernel and pays for it with a
    one-dimensional defect direction derived from the lifted generator.
    """
    mod = theta if isinstance(theta, ModelSpace) else ModelSpace(theta)
    ker = tto_kernel(g, mod)
    if ker.dim == 0:
        raise EmptyKernel("the compression has trivial kernel")
    n = min(b.scalar().order_at_zero() for b in ker.basis)
    if n == 0:
        dec = hitt_decompose(ker)
        return TwoWaysReport(dec, dec, 0, False, ker)
    zdown = RationalFn.z_power(-n)
    shifted = Subspace(1, [b.mul_fn(zdown) for b in ker.basis])
    approach1 = hitt_decompose(shifted)

    lift = matricial_lift(g, mod)
    v = VectorFn.wrap(lift.w[0] * RationalFn.z_power(-1))
    _, diff = ker.coords_of(v)
    r2 = diff.norm2()
    if _small(r2, abs(v.norm2())):
        raise VerificationFailed("defect direction degenerates into the kernel")
    e = diff.scale(ONE / r2.sqrt())
    approach2 = decompose_with_defect(ker, Subspace(1, [e], orthonormal=True))

    differ = True
    if approach1.inner is not None and approach2.inner is not None:
        differ = not approach1.inner.same_up_to_constant(approach2.inner)
    return TwoWaysReport(approach1, approach2, n, differ, ker)


# -- dual kernel decomposition -------------------------------------------------------


def dual_kernel_decompose(g: RationalFn, theta) -> Decomposition:
    """Generator form of the dual-compression kernel for an invertible symbol.

    The kernel splits off the codimension-one-or-two complement of the
    elements that both push g·f into zH^2 and avoid the theta direction.  The
    recursion runs on the multiplied kernel g·ker, where the complement's
    generators are orthonormal in H^2 and stripping them followed by division
    by z is an isometry; the returned multipliers are those generators divided
    by g again, so the kernel itself is multipliers times the parameter space.
    """
    mod = theta if isinstance(theta, ModelSpace) else ModelSpace(theta)
    ker = dual_kernel(g, mod)
    if ker.dim == 0:
        raise EmptyKernel("the dual compression has trivial kernel")
    th = mod.theta.to_rational()
    mker = Subspace(1, [VectorFn.wrap(g * b.scalar()) for b in ker.basis])

    a_row = [(g * b.scalar())(ZERO) for b in ker.basis]
    t_row = [b.pair(VectorFn.wrap(th)) for b in ker.basis]
    combos = nullspace([a_row, t_row])
    gc_sub = Subspace(1, [mker.combination(c) for c in combos])
    d_perp = mker.dim - gc_sub.dim
    if d_perp not in (1, 2):
        raise DimensionOutOfRange(
            f"kernel complement has dimension {d_perp}, expected 1 or 2")

    k0 = mod.kernel_at(0)
    raw = []
    for cand in (g.conj_star() * k0, th * k0):
        v = VectorFn.wrap(cand)
        _, dk = ker.coords_of(v)
        inside = VectorFn.wrap(g * (v - dk).scalar())
        _, off_c = gc_sub.coords_of(inside)
        raw.append(off_c)
    gen_span = span_of(raw, 1)
    if gen_span.dim != d_perp:
        raise VerificationFailed("projected generators do not span the complement")
    gens = gen_span.orthonormalize()

    zdown = RationalFn.z_power(-1)
    lcols = []
    rows = [[] for _ in range(d_perp)]
    for b in mker.basis:
        rem = b
        for l, gen in enumerate(gens.basis):
            c = b.pair(gen)
            rows[l].append(c)
            rem = rem - gen.scale(c)
        nxt = rem.mul_fn(zdown)
        coords, diff = mker.coords_of(nxt)
        if not _small(diff.norm2(), abs(nxt.norm2())):
            raise VerificationFailed("recursion step left the kernel")
        lcols.append(coords)
    lmat = [[lcols[j][i] for j in range(mker.dim)] for i in range(mker.dim)]

    tuples = _coordinate_tuples(lmat, rows, mker.dim)
    kspace = _checked_parameter_space(tuples, d_perp, mker.dim)

    worst = 0.0
    for b, tup in zip(mker.basis, tuples):
        recon = None
        for l, gen in enumerate(gens.basis):
            t = gen.mul_fn(tup[l])
            recon = t if recon is None else recon + t
        r2 = (b - recon).norm2()
        if not _small(r2, abs(b.norm2())):
            raise VerificationFailed("reconstruction residual above tolerance")
        worst = max(worst, abs(r2) / max(1.0, abs(b.norm2())))

    iso = _gram_residual(mker.gram(), kspace.gram()) / _gram_scale(mker.gram())
    if iso > _certificate_tol():
        raise VerificationFailed("norm identity fails on the multiplied kernel")

    inner = None
    if d_perp == 1:
        zchi = inner_of_invariant(kspace)
        inner = zchi.divide(BlaschkeProduct.single(0, 1))
        if inner is None:
            raise VerificationFailed("parameter space lacks the zero at the origin")
    mults = tuple(VectorFn.wrap(gen.scalar() / g) for gen in gens.basis)
    return Decomposition(kind=f"Dual{d_perp}", multipliers=mults,
                         defect_basis=(), parameter_space=kspace, inner=inner,
                         isometry_residual=iso, reconstruction_residual=worst)


# -- independent oracle: direct truncation of the recursion ---------------------------


def truncated_recursion(m: Subspace, d: Subspace, f, terms: int = 60):
    """Leading Taylor coefficients of the decomposition coordinates of f.

    Iterates the splitting step directly instead of solving the resolvent
    system: one coefficient list per coordinate, origin block first.
    """
    w_on, m0 = w_split(m)
    d_on = d.orthonormalize() if (d.dim and not d.orthonormal) else d
    rows = [[] for _ in range(w_on.dim + d_on.dim)]
    g = VectorFn.wrap(f)
    for _ in range(terms):
        for l, u in enumerate(w_on.basis):
            rows[l].append(g.pair(u))
        _, diff0 = m0.coords_of(g)
        s = (g - diff0).backward_shift()
        for j, e in enumerate(d_on.basis):
            rows[w_on.dim + j].append(s.pair(e))
        _, sdiff = m.coords_of(s)
        g = s - sdiff
    return rows
