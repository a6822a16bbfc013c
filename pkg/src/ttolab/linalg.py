"""Dense linear algebra over Scalar matrices (lists of row lists).

Pivoting policy follows the scalar backend: exact matrices use the first
nonzero entry in the current column, float matrices partial-pivot on the
largest modulus with entries below ``tol * max(1, |M|_max)`` treated as zero.
Eigenvalues go through the characteristic polynomial (Faddeev-LeVerrier, exact
for exact input) and the hybrid root finder, so rational eigenvalues of exact
matrices come back exact.
"""
from __future__ import annotations

import math

from .errors import RankDeficient
from .poly import Polynomial
from .scalars import ONE, ZERO, Scalar, config


def mat_copy(m):
    return [list(row) for row in m]


def identity(n, exact=True):
    one = ONE if exact else ONE.to_float()
    zero = ZERO if exact else ZERO.to_float()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_is_exact(m) -> bool:
    return all(e.exact for row in m for e in row)


def mat_scale_bound(m) -> float:
    vals = [abs(e) for row in m for e in row]
    return max([1.0] + vals)


def matmul(a, b):
    n, k, p = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = ZERO
            for t in range(k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def matvec(a, v):
    return [sum_scalars(a_ij * v[j] for j, a_ij in enumerate(row)) for row in a]


def sum_scalars(items):
    acc = ZERO
    for x in items:
        acc = acc + x
    return acc


def conj_transpose(m):
    if not m:
        return []
    return [[m[i][j].conj() for i in range(len(m))] for j in range(len(m[0]))]


def trace(m) -> Scalar:
    return sum_scalars(m[i][i] for i in range(len(m)))


def _zero_test(entry: Scalar, scale: float):
    if entry.exact:
        return entry.is_zero()
    return abs(entry) <= config.tol * scale


def rref(m):
    """Reduced row echelon form; returns (rows, pivot_column_list)."""
    if not m:
        return [], []
    a = mat_copy(m)
    rows, cols = len(a), len(a[0])
    exact = mat_is_exact(a)
    scale = 1.0 if exact else mat_scale_bound(a)
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pick, best = -1, 0.0
        for i in range(r, rows):
            if _zero_test(a[i][c], scale):
                continue
            if exact:
                pick = i
                break
            mag = abs(a[i][c])
            if mag > best:
                pick, best = i, mag
        if pick < 0:
            continue
        a[r], a[pick] = a[pick], a[r]
        inv = ONE / a[r][c]
        a[r] = [e * inv for e in a[r]]
        for i in range(rows):
            if i != r and not _zero_test(a[i][c], scale):
                f = a[i][c]
                a[i] = [a[i][j] - f * a[r][j] for j in range(cols)]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m) -> int:
    return len(rref(m)[1])


def nullspace(m):
    """Basis of the kernel; each vector scaled so its first nonzero entry is 1."""
    if not m:
        return []
    a, pivots = rref(m)
    cols = len(m[0])
    free = [c for c in range(cols) if c not in pivots]
    out = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -a[i][f]
        for x in v:
            if not x.is_zero():
                lead = x
                break
        out.append([x / lead for x in v])
    return out


def solve(a, b):
    """Solve a x = b for square a (b a vector); RankDeficient when singular."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    exact = mat_is_exact(a) and all(x.exact for x in b)
    scale = 1.0 if exact else max(mat_scale_bound(a), mat_scale_bound([b]))
    for c in range(n):
        pick, best = -1, 0.0
        for i in range(c, n):
            if _zero_test(aug[i][c], scale):
                continue
            if exact:
                pick = i
                break
            mag = abs(aug[i][c])
            if mag > best:
                pick, best = i, mag
        if pick < 0:
            raise RankDeficient("singular linear system")
        aug[c], aug[pick] = aug[pick], aug[c]
        inv = ONE / aug[c][c]
        aug[c] = [e * inv for e in aug[c]]
        for i in range(n):
            if i != c and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [aug[i][j] - f * aug[c][j] for j in range(n + 1)]
    return [aug[i][n] for i in range(n)]


def gram_solve(gram, rhs):
    """Solve the normal equations sum_j gram[j][i] c_j = rhs_i.

    With gram[i][j] = <b_i, b_j> and rhs_i = <v, b_i>, the solution gives the
    coordinates of the orthogonal projection of v onto span(b).
    """
    n = len(gram)
    m = [[gram[j][i] for j in range(n)] for i in range(n)]
    return solve(m, rhs)


def det(m) -> Scalar:
    n = len(m)
    if n == 0:
        return ONE
    a = mat_copy(m)
    exact = mat_is_exact(a)
    scale = 1.0 if exact else mat_scale_bound(a)
    out = ONE
    sign = 1
    for c in range(n):
        pick, best = -1, 0.0
        for i in range(c, n):
            if _zero_test(a[i][c], scale):
                continue
            if exact:
                pick = i
                break
            mag = abs(a[i][c])
            if mag > best:
                pick, best = i, mag
        if pick < 0:
            return ZERO
        if pick != c:
            a[c], a[pick] = a[pick], a[c]
            sign = -sign
        out = out * a[c][c]
        inv = ONE / a[c][c]
        for i in range(c + 1, n):
            if not a[i][c].is_zero():
                f = a[i][c] * inv
                a[i] = [a[i][j] - f * a[c][j] for j in range(n)]
    return out if sign > 0 else -out


def charpoly(m) -> Polynomial:
    """Characteristic polynomial det(z I - m), lowest degree first."""
    n = len(m)
    coeffs_high_first = [ONE]
    acc = identity(n, exact=mat_is_exact(m))
    for k in range(1, n + 1):
        acc = matmul(m, acc)
        ck = -trace(acc) / Scalar.rational(k)
        coeffs_high_first.append(ck)
        for i in range(n):
            acc[i][i] = acc[i][i] + ck
    return Polynomial(tuple(reversed(coeffs_high_first)))


def eigenvalues(m):
    """[(eigenvalue, algebraic multiplicity)] via the characteristic polynomial."""
    if not m:
        return []
    return sort_root_pairs(charpoly(m).roots())


def scalar_sort_key(s: Scalar):
    z = s.to_complex()
    mag = abs(z)
    ang = math.atan2(z.imag, z.real)
    if ang < -1e-12:
        ang += 2 * math.pi
    return (round(mag, 9), round(ang, 9))


def sort_root_pairs(pairs):
    return sorted(pairs, key=lambda rm: scalar_sort_key(rm[0]))
