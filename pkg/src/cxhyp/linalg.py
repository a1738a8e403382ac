"""Dense complex linear algebra for small matrices.

Vectors and matrices are plain numpy complex arrays.  The eigensolver is a
Householder reduction to Hessenberg form followed by implicit single-shift
complex QR iteration; eigenvectors of simple eigenvalues come from
back-substitution on the Schur factor and clustered eigenvalues are returned
as an orthonormal basis of their joint invariant subspace, obtained by
reordering the Schur form.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .errors import DimensionMismatch, NonConvergence, Singular
from .tolerances import max_dim, tol

EPS = np.finfo(float).eps


def as_matrix(m, square: bool = False) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def as_vector(v) -> np.ndarray:
    a = np.array(v, dtype=complex).reshape(-1)
    if a.size == 0:
        raise DimensionMismatch("empty vector")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector has non-finite entries")
    return a


def norm(a) -> float:
    """Frobenius norm (Euclidean norm for vectors)."""
    return float(np.linalg.norm(a))


def adjoint(m) -> np.ndarray:
    return np.conj(np.asarray(m, dtype=complex)).T.copy()


def solve(m, b) -> np.ndarray:
    """Solve ``m x = b`` by LU with partial pivoting.

    Raises Singular if any pivot is below ``solve_tol * ||m||``.
    """
    a = as_matrix(m, square=True)
    rhs = np.asarray(b, dtype=complex)
    if rhs.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"rhs has {rhs.shape[0]} rows, matrix has {a.shape[0]}")
    with warnings.catch_warnings():
        # exact zero pivots are reported below as Singular
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    floor = tol().solve_tol * max(norm(a), np.finfo(float).tiny)
    if np.min(np.abs(np.diag(lu))) <= floor:
        raise Singular("pivot below solve_tol")
    return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)


def inv(m) -> np.ndarray:
    a = as_matrix(m, square=True)
    return solve(a, np.eye(a.shape[0], dtype=complex))


def gram(form: Callable[[np.ndarray, np.ndarray], complex], basis: Sequence) -> np.ndarray:
    """Matrix of ``form(basis[i], basis[j])``."""
    vecs = [as_vector(v) for v in basis]
    if len({v.size for v in vecs}) > 1:
        raise DimensionMismatch("basis vectors differ in dimension")
    k = len(vecs)
    g = np.zeros((k, k), dtype=complex)
    for i in range(k):
        for j in range(i, k):
            g[i, j] = form(vecs[i], vecs[j])
            g[j, i] = np.conj(g[i, j]) if i != j else g[i, j].real
    return g


def eigh(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix, ascending eigenvalues."""
    a = as_matrix(m, square=True)
    a = (a + adjoint(a)) / 2
    w, v = np.linalg.eigh(a)
    return w, v


def null_space(m, threshold: float) -> np.ndarray:
    """Orthonormal basis (as columns) of vectors with ``||m v|| <= threshold``."""
    a = as_matrix(m)
    _, s, vh = np.linalg.svd(a)
    svals = np.zeros(a.shape[1])
    svals[: s.size] = s
    keep = svals <= threshold
    return adjoint(vh)[:, keep]


# ---------------------------------------------------------------- eigensolver


def hessenberg(m) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(h, q)`` with ``m = q h q*`` and ``h`` upper Hessenberg."""
    a = as_matrix(m, square=True).copy()
    n = a.shape[0]
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = a[k + 1 :, k].copy()
        if not np.any(x[1:]):
            continue
        xnorm = np.linalg.norm(x)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        alpha = -phase * xnorm
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        a[k + 1 :, :] -= 2.0 * np.outer(v, np.conj(v) @ a[k + 1 :, :])
        a[:, k + 1 :] -= 2.0 * np.outer(a[:, k + 1 :] @ v, np.conj(v))
        q[:, k + 1 :] -= 2.0 * np.outer(q[:, k + 1 :] @ v, np.conj(v))
        a[k + 2 :, k] = 0.0
        a[k + 1, k] = alpha
    return a, q


def _givens(x: complex, y: complex) -> tuple[float, complex]:
    """(c, s) with [[c, s], [-conj(s), c]] @ [x, y] = [r, 0]."""
    ax = abs(x)
    if y == 0:
        return 1.0, 0j
    if ax == 0:
        return 0.0, 1 + 0j
    rho = np.hypot(ax, abs(y))
    return ax / rho, (x / ax) * np.conj(y) / rho


def _wilkinson(a: complex, b: complex, c: complex, d: complex) -> complex:
    half = (a - d) / 2
    disc = np.sqrt(half * half + b * c)
    mu1 = (a + d) / 2 + disc
    mu2 = (a + d) / 2 - disc
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def schur(m) -> tuple[np.ndarray, np.ndarray]:
    """Complex Schur form ``m = q r q*`` by shifted QR on the Hessenberg form."""
    h, q = hessenberg(m)
    n = h.shape[0]
    hnorm = norm(h)
    if hnorm == 0:
        return h, q
    budget = 100 * n
    total = 0
    hi = n - 1
    its = 0
    while hi > 0:
        l = hi
        while l > 0:
            scale = abs(h[l, l]) + abs(h[l - 1, l - 1])
            if scale == 0:
                scale = hnorm
            if abs(h[l, l - 1]) <= EPS * scale or abs(h[l, l - 1]) <= EPS * EPS * hnorm:
                h[l, l - 1] = 0
                break
            l -= 1
        if l == hi:
            hi -= 1
            its = 0
            continue
        total += 1
        its += 1
        if total > budget:
            raise NonConvergence(f"QR iteration did not converge in {budget} sweeps")
        if its % 10 == 0:
            shift = h[hi, hi] + 0.75 * abs(h[hi, hi - 1]) * np.exp(1j * its)
        else:
            shift = _wilkinson(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        x = h[l, l] - shift
        y = h[l + 1, l]
        for k in range(l, hi):
            if k > l:
                x = h[k, k - 1]
                y = h[k + 1, k - 1]
            c, s = _givens(x, y)
            g = np.array([[c, s], [-np.conj(s), c]])
            col0 = max(l, k - 1)
            h[k : k + 2, col0:] = g @ h[k : k + 2, col0:]
            row1 = min(k + 2, hi) + 1
            gh = adjoint(g)
            h[:row1, k : k + 2] = h[:row1, k : k + 2] @ gh
            q[:, k : k + 2] = q[:, k : k + 2] @ gh
            if k > l:
                h[k + 1, k - 1] = 0
    return np.triu(h), q


def _swap(r: np.ndarray, q: np.ndarray, k: int) -> None:
    """Exchange diagonal entries k and k+1 of the triangular ``r`` in place."""
    a, b, c = r[k, k], r[k, k + 1], r[k + 1, k + 1]
    x = np.array([b, c - a])
    xn = np.linalg.norm(x)
    if xn == 0:
        return
    x /= xn
    z = np.array([[x[0], -np.conj(x[1])], [x[1], np.conj(x[0])]])
    r[:, k : k + 2] = r[:, k : k + 2] @ z
    r[k : k + 2, :] = adjoint(z) @ r[k : k + 2, :]
    q[:, k : k + 2] = q[:, k : k + 2] @ z
    r[k + 1, k] = 0
    r[k, k] = c
    r[k + 1, k + 1] = a


def reorder_front(r: np.ndarray, q: np.ndarray, positions: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Move the diagonal entries at ``positions`` to the top-left of ``r``."""
    r = r.copy()
    q = q.copy()
    order = list(range(r.shape[0]))
    for target, pos in enumerate(sorted(positions)):
        cur = order.index(pos)
        while cur > target:
            _swap(r, q, cur - 1)
            order[cur - 1], order[cur] = order[cur], order[cur - 1]
            cur -= 1
    return r, q


def _right_vector(r: np.ndarray, k: int, floor: float) -> np.ndarray:
    lam = r[k, k]
    x = np.zeros(r.shape[0], dtype=complex)
    x[k] = 1.0
    for j in range(k - 1, -1, -1):
        d = r[j, j] - lam
        if abs(d) < floor:
            d = floor
        x[j] = -(r[j, j + 1 : k + 1] @ x[j + 1 : k + 1]) / d
    return x


def _left_vector(r: np.ndarray, k: int, floor: float) -> np.ndarray:
    lam = r[k, k]
    n = r.shape[0]
    u = np.zeros(n, dtype=complex)
    u[k] = 1.0
    for j in range(k + 1, n):
        d = r[j, j] - lam
        if abs(d) < floor:
            d = floor
        u[j] = -(u[k:j] @ r[k:j, j]) / d
    return u


def _order_key(z: complex, quantum: float) -> tuple:
    return (-round(abs(z) / quantum), -round(z.real / quantum), -round(z.imag / quantum))


def _single_linkage(values: np.ndarray, radius: float, extra=None) -> list[list[int]]:
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            limit = radius if extra is None else max(radius, extra(i, j))
            if abs(values[i] - values[j]) <= limit:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues with multiplicity, unit eigenvectors and their residuals.

    ``clusters`` lists index groups of eigenvalues closer than
    ``cluster_tol * ||m||``; the vectors at those indices form an orthonormal
    basis of the joint invariant subspace and share a subspace residual.
    """

    eigenvalues: np.ndarray
    eigenvectors: list
    residuals: list
    clusters: list = field(default_factory=list)


def _check_dim(a: np.ndarray) -> None:
    if a.shape[0] > max_dim():
        raise DimensionMismatch(f"dimension {a.shape[0]} exceeds CXHYP_MAX_DIM={max_dim()}")


def eig(m) -> EigenResult:
    a = as_matrix(m, square=True)
    _check_dim(a)
    n = a.shape[0]
    mnorm = norm(a)
    r, q = schur(a)
    lams = np.diag(r).copy()
    t = tol()
    radius = t.cluster_tol * mnorm
    quantum = max(radius, np.finfo(float).tiny)
    groups = _single_linkage(lams, radius)
    groups = [sorted(g, key=lambda i: _order_key(lams[i], quantum)) for g in groups]
    groups.sort(key=lambda g: _order_key(np.mean(lams[g]), quantum))

    floor = EPS * max(mnorm, np.finfo(float).tiny)
    values, vectors, residuals, clusters = [], [], [], []
    for g in groups:
        if len(g) == 1:
            k = g[0]
            v = q[:, : k + 1] @ _right_vector(r, k, floor)[: k + 1]
            v /= np.linalg.norm(v)
            values.append(lams[k])
            vectors.append(v)
            residuals.append(float(np.linalg.norm(a @ v - lams[k] * v)))
        else:
            rr, qq = reorder_front(r, q, g)
            size = len(g)
            basis = qq[:, :size]
            res = float(np.linalg.norm(a @ basis - basis @ rr[:size, :size]))
            clusters.append(list(range(len(values), len(values) + size)))
            for j, k in enumerate(g):
                values.append(lams[k])
                vectors.append(basis[:, j].copy())
                residuals.append(res)
    return EigenResult(np.array(values, dtype=complex), vectors, residuals, clusters)


def eigvals(m) -> np.ndarray:
    """Eigenvalues only, in the same order ``eig`` would report them."""
    a = as_matrix(m, square=True)
    _check_dim(a)
    r, _ = schur(a)
    lams = np.diag(r)
    quantum = max(tol().cluster_tol * norm(a), np.finfo(float).tiny)
    return np.array(sorted(lams, key=lambda z: _order_key(z, quantum)), dtype=complex)


def multiset_distance(a, b) -> float:
    """Largest gap under the best one-to-one matching of two value lists."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.size != b.size:
        return float("inf")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


@dataclass(frozen=True)
class SpectralGroup:
    """Numerically coincident eigenvalues and the spaces they carry.

    ``value`` is the group mean, ``invariant`` an orthonormal basis (columns)
    of the joint invariant subspace and ``eigenspace`` an orthonormal basis of
    the approximate kernel of ``m - value``.
    """

    value: complex
    members: np.ndarray
    invariant: np.ndarray
    eigenspace: np.ndarray

    @property
    def multiplicity(self) -> int:
        return len(self.members)

    @property
    def geometric(self) -> int:
        return self.eigenspace.shape[1]


def spectral_groups(m, merge_factor: float = 256.0) -> list[SpectralGroup]:
    """Group eigenvalues that cannot be told apart in floating point.

    Besides the ``cluster_tol`` radius, two eigenvalues are merged when their
    distance is within ``merge_factor * eps * ||m|| * (kappa_i + kappa_j)``,
    with ``kappa`` the eigenvalue condition numbers.  This reunites the split
    eigenvalues of a perturbed Jordan block.
    """
    a = as_matrix(m, square=True)
    _check_dim(a)
    mnorm = norm(a)
    r, q = schur(a)
    lams = np.diag(r).copy()
    n = a.shape[0]
    floor = EPS * max(mnorm, np.finfo(float).tiny)
    kappa = np.empty(n)
    for k in range(n):
        x = _right_vector(r, k, floor)
        u = _left_vector(r, k, floor)
        kappa[k] = np.linalg.norm(x) * np.linalg.norm(u)
    t = tol()
    radius = t.cluster_tol * mnorm

    def extra(i, j):
        return merge_factor * EPS * mnorm * (kappa[i] + kappa[j])

    groups = _single_linkage(lams, radius, extra)
    quantum = max(radius, np.finfo(float).tiny)
    groups.sort(key=lambda g: _order_key(np.mean(lams[g]), quantum))
    out = []
    eye = np.eye(n, dtype=complex)
    for g in groups:
        rr, qq = reorder_front(r, q, g)
        size = len(g)
        value = complex(np.mean(lams[g]))
        spread = float(np.max(np.abs(lams[g] - value)))
        threshold = max(t.null_tol * mnorm, 4 * spread)
        # The group mean is accurate even when the members are split by a
        # Jordan perturbation, so the kernel of the full shifted matrix is a
        # much better eigenspace than anything read off the Schur vectors.
        _, svals, vh = np.linalg.svd(a - value * eye)
        order = np.argsort(svals)[:size]
        keep = [i for i in order if svals[i] <= threshold] or [order[0]]
        kernel = adjoint(vh)[:, keep]
        out.append(SpectralGroup(value, lams[g].copy(), qq[:, :size], kernel))
    return out
