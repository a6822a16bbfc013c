"""Model spaces, their orthonormal rational bases, and finite subspaces of H^2(C^n).

A model space K_B = H^2 - B H^2 for a finite Blaschke product B carries the
Takenaka-Malmquist ladder basis

    e_k = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} (z - a_j)/(1 - conj(a_j) z)

over the zeros a_1..a_d listed with multiplicity, sorted by (|a|, arg a).  The
ladder is orthonormal; with exact zeros the unnormalised ladder and its
squared norms stay rational, so orthogonality checks remain exact even when
the normalisation constants are irrational.

``Subspace`` is a finite-dimensional subspace of vector-valued boundary
functions, stored as an independent list of :class:`VectorFn`.  Projections,
membership tests and shift matrices are Gram-based and exact in the exact
backend.
"""
from __future__ import annotations

from .blaschke import BlaschkeProduct
from .errors import (DegreeZero, IndexOutOfRange, NotInvariant, RankDeficient,
                     VerificationFailed)
from .hardy import backward_shift, boundary_pairing, p_plus, require_h2
from .linalg import eigenvalues, gram_solve, nullspace, sort_root_pairs
from .poly import Polynomial
from .rational import RationalFn
from .scalars import ONE, ZERO, Scalar, config


class VectorFn:
    """A C^n-valued rational boundary function (coordinatewise rational)."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = tuple(RationalFn.coerce(c) for c in coords)
        if not coords:
            raise IndexOutOfRange("vector function needs at least one coordinate")
        self.coords = coords

    @staticmethod
    def wrap(f) -> "VectorFn":
        return f if isinstance(f, VectorFn) else VectorFn((RationalFn.coerce(f),))

    @property
    def n(self) -> int:
        return len(self.coords)

    def scalar(self) -> RationalFn:
        if self.n != 1:
            raise IndexOutOfRange("not a scalar-valued function")
        return self.coords[0]

    def __getitem__(self, i) -> RationalFn:
        return self.coords[i]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __add__(self, other: "VectorFn") -> "VectorFn":
        return VectorFn(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "VectorFn") -> "VectorFn":
        return VectorFn(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, s) -> "VectorFn":
        return VectorFn(tuple(c.scale(s) for c in self.coords))

    def mul_fn(self, f: RationalFn) -> "VectorFn":
        return VectorFn(tuple(c * f for c in self.coords))

    def div_fn(self, f: RationalFn) -> "VectorFn":
        return VectorFn(tuple(c / f for c in self.coords))

    def backward_shift(self) -> "VectorFn":
        return VectorFn(tuple(backward_shift(c) for c in self.coords))

    def eval0(self):
        return [c(ZERO) for c in self.coords]

    def order_at_zero(self) -> int:
        return min(c.order_at_zero() for c in self.coords if not c.is_zero())

    def pair(self, other: "VectorFn") -> Scalar:
        if self.n != other.n:
            raise IndexOutOfRange("vector length mismatch in pairing")
        acc = ZERO
        for a, b in zip(self.coords, other.coords):
            if a.is_zero() or b.is_zero():
                continue
            acc = acc + boundary_pairing(a, b)
        return acc

    def norm2(self) -> Scalar:
        return self.pair(self)

    def is_h2(self) -> bool:
        return all(c.is_h2() for c in self.coords)

    def eq(self, other: "VectorFn", tol=None) -> bool:
        return all(a.eq(b, tol=tol) for a, b in zip(self.coords, other.coords))

    def __repr__(self):
        return f"VectorFn{self.coords!r}"


class Subspace:
    """Finite-dimensional subspace of C^n-valued boundary functions."""

    __slots__ = ("ambient", "basis", "orthonormal", "_gram")

    def __init__(self, ambient: int, basis, orthonormal: bool = False):
        self.ambient = ambient
        self.basis = tuple(VectorFn.wrap(b) for b in basis)
        for b in self.basis:
            if b.n != ambient:
                raise IndexOutOfRange("basis vector with wrong coordinate count")
        self.orthonormal = orthonormal
        self._gram = None

    @staticmethod
    def from_vectors(vectors, ambient: int | None = None) -> "Subspace":
        """Build a subspace from an independent list (RankDeficient otherwise)."""
        vecs = [VectorFn.wrap(v) for v in vectors]
        if ambient is None:
            if not vecs:
                raise IndexOutOfRange("ambient dimension needed for empty basis")
            ambient = vecs[0].n
        s = Subspace(ambient, vecs)
        if vecs:
            sp = span_of(vecs, ambient)
            if sp.dim != len(vecs):
                raise RankDeficient("basis list is linearly dependent")
        return s

    @property
    def dim(self) -> int:
        return len(self.basis)

    def gram(self):
        if self._gram is None:
            g = [[None] * self.dim for _ in range(self.dim)]
            for i, bi in enumerate(self.basis):
                for j in range(i + 1):
                    v = bi.pair(self.basis[j])
                    g[i][j] = v
                    if i != j:
                        g[j][i] = v.conj()
            self._gram = g
        return self._gram

    def coords_of(self, v: VectorFn):
        """Best-approximation coordinates and the residual vector function."""
        v = VectorFn.wrap(v)
        if self.dim == 0:
            return [], v
        rhs = [v.pair(b) for b in self.basis]
        coords = gram_solve(self.gram(), rhs)
        diff = v
        for c, b in zip(coords, self.basis):
            diff = diff - b.scale(c)
        return coords, diff

    def project(self, v: VectorFn):
        coords, diff = self.coords_of(v)
        return VectorFn.wrap(v) - diff, coords, diff

    def residual2(self, v: VectorFn) -> Scalar:
        _, diff = self.coords_of(v)
        return diff.norm2()

    def contains(self, v: VectorFn, tol=None) -> bool:
        r2 = self.residual2(v)
        if r2.exact:
            return r2.is_zero()
        t = config.tol if tol is None else tol
        scale = max(1.0, abs(VectorFn.wrap(v).norm2()))
        return abs(r2) <= t * scale

    def contains_subspace(self, other: "Subspace", tol=None) -> bool:
        return all(self.contains(b, tol=tol) for b in other.basis)

    def same_space(self, other: "Subspace", tol=None) -> bool:
        return (self.dim == other.dim and self.contains_subspace(other, tol=tol)
                and other.contains_subspace(self, tol=tol))

    def combination(self, coeffs) -> VectorFn:
        out = None
        for c, b in zip(coeffs, self.basis):
            t = b.scale(c)
            out = t if out is None else out + t
        if out is None:
            raise IndexOutOfRange("empty combination")
        return out

    def orthonormalize(self) -> "Subspace":
        """Gram-Schmidt in basis order; the first vector keeps its direction."""
        out = []
        for b in self.basis:
            v = b
            for e in out:
                v = v - e.scale(v.pair(e))
            n2 = v.norm2()
            if n2.is_zero() or (not n2.exact and abs(n2) <= config.tol):
                raise RankDeficient("dependent vector during orthonormalisation")
            v = v.scale(ONE / n2.sqrt())
            out.append(v)
        s = Subspace(self.ambient, out, orthonormal=True)
        return s

    def eval0_matrix(self):
        """ambient x dim matrix of coordinate values at the origin."""
        return [[self.basis[j][c](ZERO) for j in range(self.dim)]
                for c in range(self.ambient)]

    def vanishing_subspace(self) -> "Subspace":
        """The subspace of members vanishing at the origin."""
        if self.dim == 0:
            return self
        combos = nullspace(self.eval0_matrix())
        return Subspace(self.ambient, [self.combination(c) for c in combos])

    def sum(self, other: "Subspace") -> "Subspace":
        return span_of(list(self.basis) + list(other.basis), self.ambient)

    def scaled_copies(self, fn: RationalFn) -> "Subspace":
        return Subspace(self.ambient, [b.mul_fn(fn) for b in self.basis])


def span_of(vectors, ambient: int) -> Subspace:
    """Span of a possibly dependent list: greedily keeps an independent subset."""
    kept: list[VectorFn] = []
    current = Subspace(ambient, [])
    for v in vectors:
        v = VectorFn.wrap(v)
        if v.is_zero():
            continue
        if kept:
            _, diff = current.coords_of(v)
            r2 = diff.norm2()
            ok_zero = r2.is_zero() if r2.exact else \
                abs(r2) <= config.tol * max(1.0, abs(v.norm2()))
            if ok_zero:
                continue
        kept.append(v)
        current = Subspace(ambient, kept)
    return current


# -- backward-shift structure ---------------------------------------------------


def backward_shift_matrix(s: Subspace):
    """Matrix of the compressed backward shift on s plus leftover components.

    Returns (matrix, residuals) where column j holds the coordinates of the
    projection of S* b_j onto s and residuals[j] = S* b_j - (that projection).
    """
    cols, residuals = [], []
    for b in s.basis:
        shifted = b.backward_shift()
        coords, diff = s.coords_of(shifted)
        cols.append(coords)
        residuals.append(diff)
    matrix = [[cols[j][i] for j in range(s.dim)] for i in range(s.dim)]
    return matrix, residuals


def inner_of_invariant(s: Subspace) -> BlaschkeProduct:
    """The finite Blaschke product B with s = K_B, for S*-invariant scalar s.

    Zeros are the conjugated eigenvalues of the compressed shift with their
    algebraic multiplicities; membership of the basis in K_B is verified.
    """
    if s.ambient != 1:
        raise IndexOutOfRange("inner function recovery needs scalar functions")
    if s.dim == 0:
        raise DegreeZero("the zero subspace has no inner function")
    matrix, residuals = backward_shift_matrix(s)
    for b, r in zip(s.basis, residuals):
        r2 = r.norm2()
        bad = (not r2.is_zero()) if r2.exact else \
            abs(r2) > config.tol * max(1.0, abs(b.norm2()))
        if bad:
            raise NotInvariant("subspace is not invariant under the backward shift")
    zeros = sort_root_pairs([(lam.conj(), m) for lam, m in eigenvalues(matrix)])
    b = BlaschkeProduct(1, zeros)
    star = b.to_rational().conj_star()
    for f in s.basis:
        require_h2(f.scalar(), "invariant subspace member")
        leftover = p_plus(star * f.scalar())
        if not leftover.is_zero():
            l2 = abs(boundary_pairing(leftover, leftover).to_complex())
            if l2 > config.tol * max(1.0, abs(f.norm2())):
                raise VerificationFailed(
                    "recovered inner function misses a basis member")
    return b


def w_split(s: Subspace):
    """Split s into (W, M0): members vanishing at 0 and their orthocomplement.

    W is returned with an orthonormal basis; s = W + M0 orthogonally.
    """
    m0 = s.vanishing_subspace()
    w_raw = []
    for b in s.basis:
        _, diff = m0.coords_of(b)
        w_raw.append(diff)
    w = span_of(w_raw, s.ambient)
    if w.dim + m0.dim != s.dim:
        raise VerificationFailed("splitting at the origin lost dimensions")
    return (w.orthonormalize() if w.dim else w), m0


# -- model spaces ------------------------------------------------------------------


class ModelSpace:
    """K_B with its Takenaka-Malmquist orthonormal basis."""

    __slots__ = ("theta", "basis", "ladder", "norm2s")

    def __init__(self, theta: BlaschkeProduct):
        if theta.degree < 1:
            raise DegreeZero("model space needs an inner function of degree >= 1")
        self.theta = theta
        points = []
        for a, m in sort_root_pairs(theta.zeros):
            points.extend([a] * m)
        ladder, norms, normalized = [], [], []
        prefix = RationalFn.const(1)
        for k, a in enumerate(points):
            kernel = RationalFn(Polynomial((ONE,)), Polynomial((ONE, -a.conj())))
            e = prefix * kernel
            n2 = ONE / (ONE - a.abs2())
            ladder.append(e)
            norms.append(n2)
            normalized.append(e.scale(ONE / n2.sqrt()))
            prefix = prefix * BlaschkeProduct.single(a).to_rational()
        self.basis = tuple(normalized)
        self.ladder = tuple(ladder)
        self.norm2s = tuple(norms)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def gram(self):
        """Gram matrix of the normalised basis, exact off-diagonal zeros kept."""
        g = [[None] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            for j in range(i + 1):
                raw = boundary_pairing(self.ladder[i], self.ladder[j])
                if i == j:
                    g[i][i] = raw / self.norm2s[i]
                else:
                    if raw.is_zero():
                        val = ZERO if raw.exact else raw
                    else:
                        val = raw / (self.norm2s[i] * self.norm2s[j]).sqrt()
                    g[i][j] = val
                    g[j][i] = val.conj()
        return g

    def to_subspace(self) -> Subspace:
        return Subspace(1, [VectorFn((e,)) for e in self.basis], orthonormal=True)

    def contains(self, f: RationalFn, tol=None) -> bool:
        if not f.is_h2():
            return False
        leftover = p_plus(self.theta.to_rational().conj_star() * f)
        if leftover.is_zero():
            return True
        t = config.tol if tol is None else tol
        l2 = abs(boundary_pairing(leftover, leftover).to_complex())
        f2 = abs(boundary_pairing(f, f).to_complex())
        return l2 <= t * max(1.0, f2)

    def kernel_at(self, lam) -> RationalFn:
        """Reproducing kernel of K_B at a point of the disc."""
        lam = Scalar.coerce(lam)
        tval = self.theta.to_rational()(lam)
        th = self.theta.to_rational()
        num = RationalFn.const(1) - th.scale(tval.conj())
        return num / RationalFn(Polynomial((ONE, -lam.conj())))


def tm_basis(theta: BlaschkeProduct) -> ModelSpace:
    return ModelSpace(theta)


def project_model(f: RationalFn, m: ModelSpace):
    """Coordinates of the model-space projection of f in the TM basis."""
    f.check_no_pole_on_circle("projected function")
    return [boundary_pairing(f, e) for e in m.basis]


def project_model_fn(f: RationalFn, m: ModelSpace) -> RationalFn:
    """The projection itself, built from the TM coordinates."""
    out = RationalFn.const(0)
    for c, e in zip(project_model(f, m), m.basis):
        out = out + e.scale(c)
    return out


def project_model_riesz(f: RationalFn, m: ModelSpace) -> RationalFn:
    """Independent route: P f = P+ f - B P+(conj(B) P+ f)."""
    f.check_no_pole_on_circle("projected function")
    plus = p_plus(f)
    th = m.theta.to_rational()
    return plus - th * p_plus(th.conj_star() * plus)
