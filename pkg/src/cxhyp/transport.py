"""Extension of form-preserving partial maps, and the conjugators built on it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ball import BallForm, IsometryMatrix, form_A, lift_fb, mobius_apply
from .classify import classify, is_unitary
from .errors import (
    BoundaryViolation,
    CoincidentPoints,
    DegenerateSpan,
    DimensionMismatch,
    NotElliptic,
    NotPartialIsometry,
    VerificationFailed,
)
from .forms import HermitianForm
from .linalg import adjoint, as_vector, eigh, norm, null_space, solve
from .tolerances import tol

MAX_REDRAWS = 8


@dataclass(frozen=True, eq=False)
class PartialIsometry:
    """Vectors ``domain_basis[i]`` meant to be sent to ``images[i]``."""

    domain_basis: list
    images: list
    form: HermitianForm | None = None

    def __post_init__(self):
        dom = [as_vector(v) for v in self.domain_basis]
        img = [as_vector(v) for v in self.images]
        if len(dom) != len(img):
            raise DimensionMismatch(f"{len(dom)} domain vectors but {len(img)} images")
        sizes = {v.size for v in dom + img}
        if len(sizes) > 1:
            raise DimensionMismatch("vectors differ in dimension")
        object.__setattr__(self, "domain_basis", dom)
        object.__setattr__(self, "images", img)
        if self.form is None and dom:
            object.__setattr__(self, "form", BallForm(dom[0].size - 1))


def _hgram(j: np.ndarray, x: np.ndarray) -> np.ndarray:
    """X* J X; entry (i, k) is form(x_k, x_i)."""
    g = adjoint(x) @ j @ x
    return (g + adjoint(g)) / 2


def _independent(x: np.ndarray) -> bool:
    s = np.linalg.svd(x, compute_uv=False)
    return s.size == 0 or s[-1] > 1e-10 * s[0]


def _form_complement(j: np.ndarray, vecs: np.ndarray, dim: int) -> np.ndarray:
    if vecs.shape[1] == 0:
        return np.eye(dim, dtype=complex)
    rows = adjoint(j @ vecs)
    return null_space(rows, 1e-9 * max(1.0, norm(rows)))


def _hyperbolic_partner(j: np.ndarray, ortho: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Null p orthogonal to ``ortho`` with form(r, p) = 1."""
    c = _form_complement(j, ortho, r.size)
    q = c @ (adjoint(c) @ (j @ r))
    pairing = np.vdot(q, j @ r)  # form(r, q)
    if abs(pairing) < 1e-12 * max(1.0, norm(q) * norm(r)):
        raise DegenerateSpan("radical vector has no partner")
    q = q / np.conj(pairing)
    qq = np.vdot(q, j @ q).real
    return q - (qq / 2) * r


def _signature_gram_schmidt(j: np.ndarray, basis: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Form-orthonormal basis of a non-degenerate subspace and the signs.

    The pivot is the candidate with largest |Q|; if every candidate is null,
    two of them are combined into a non-null vector.  A pivot smaller than
    pivot_tol triggers a re-draw of the spanning set with a random unitary
    mixing, up to MAX_REDRAWS times.
    """
    k = basis.shape[1]
    if k == 0:
        return basis, np.zeros(0)
    ptol = tol().pivot_tol
    for attempt in range(MAX_REDRAWS + 1):
        if attempt == 0:
            cand = basis.copy()
        else:
            z = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
            mix, _ = np.linalg.qr(z)
            cand = basis @ mix
        cand = [cand[:, i] / np.linalg.norm(cand[:, i]) for i in range(k)]
        out, signs = [], []
        ok = True
        while cand:
            qs = [np.vdot(v, j @ v).real for v in cand]
            i = int(np.argmax(np.abs(qs)))
            if abs(qs[i]) < ptol and len(cand) > 1:
                best = None
                for a in range(len(cand)):
                    for b in range(a + 1, len(cand)):
                        f = np.vdot(cand[b], j @ cand[a])
                        if best is None or abs(f) > abs(best[2]):
                            best = (a, b, f)
                a, b, f = best
                if abs(f) >= ptol:
                    cand[a] = cand[a] + (f / abs(f)) * cand[b]
                    cand[a] /= np.linalg.norm(cand[a])
                    continue
            v = cand.pop(i)
            q = np.vdot(v, j @ v).real
            if abs(q) < ptol:
                ok = False
                break
            v = v / np.sqrt(abs(q))
            out.append(v)
            signs.append(np.sign(q))
            cand = [w - (np.vdot(v, j @ w) / np.sign(q)) * v for w in cand]
            cand = [w / np.linalg.norm(w) for w in cand if np.linalg.norm(w) > 1e-12]
        if ok and len(out) == k:
            return np.column_stack(out), np.array(signs)
    raise DegenerateSpan("complement could not be orthonormalized")


def witt_extend(p: PartialIsometry, seed: int = 0) -> IsometryMatrix:
    """Extend a form-preserving map on a subspace to a full isometry."""
    form = p.form
    if form is None:
        raise DimensionMismatch("empty partial isometry needs an explicit form")
    j = form.signature
    dim = form.dim
    if not p.domain_basis:
        return IsometryMatrix.of(np.eye(dim), form)
    x = np.column_stack(p.domain_basis)
    y = np.column_stack(p.images)
    if x.shape[0] != dim:
        raise DimensionMismatch(f"vectors have length {x.shape[0]}, form needs {dim}")
    if not _independent(x):
        raise DegenerateSpan("domain vectors are linearly dependent")
    if not _independent(y):
        raise NotPartialIsometry("image vectors are linearly dependent")
    hx, hy = _hgram(j, x), _hgram(j, y)
    scale = max(1.0, norm(x) ** 2, norm(y) ** 2)
    if norm(hx - hy) > tol().member_tol * scale:
        raise NotPartialIsometry(f"form values differ by {norm(hx - hy):.3e}")

    w, c = eigh((hx + hy) / 2)
    # relative to the size of the vectors, so a lone null vector counts as radical
    radical = np.abs(w) <= 1e-9 * max(np.max(np.abs(w)), norm(x) ** 2) * max(1.0, x.shape[1])
    if radical.sum() > 1:
        raise DegenerateSpan("span contains more than one null direction")
    nondeg = ~radical
    coeff = c[:, nondeg] / np.sqrt(np.abs(w[nondeg]))
    ux, uy = x @ coeff, y @ coeff
    dom_cols, img_cols = [ux], [uy]
    if radical.any():
        cr = c[:, radical][:, 0]
        rx, ry = x @ cr, y @ cr
        px = _hyperbolic_partner(j, ux, rx)
        py = _hyperbolic_partner(j, uy, ry)
        dom_cols.append(np.column_stack([rx, px]))
        img_cols.append(np.column_stack([ry, py]))
    d0x = np.column_stack(dom_cols)
    d0y = np.column_stack(img_cols)

    rng = np.random.default_rng(seed)
    ex, sx = _signature_gram_schmidt(j, _form_complement(j, d0x, dim), rng)
    ey, sy = _signature_gram_schmidt(j, _form_complement(j, d0y, dim), rng)
    if ex.shape[1] != ey.shape[1] or sorted(sx) != sorted(sy):
        raise NotPartialIsometry("complements have different signatures")
    ox, oy = np.argsort(sx, kind="stable"), np.argsort(sy, kind="stable")
    full_x = np.column_stack([d0x, ex[:, ox]])
    full_y = np.column_stack([d0y, ey[:, oy]])
    if full_x.shape[1] != dim:
        raise DegenerateSpan("completed basis has the wrong size")
    t = adjoint(solve(adjoint(full_x), adjoint(full_y)))
    result = IsometryMatrix.of(t, form, check=False)
    bound = tol().member_tol * (1 + norm(t) ** 2)
    if result.residual > bound:
        raise VerificationFailed(f"extension residual {result.residual:.3e} exceeds tolerance")
    miss = norm(t @ x - y)
    if miss > tol().point_tol * max(1.0, norm(y)):
        raise VerificationFailed(f"extension misses the prescribed images by {miss:.3e}")
    return result


def _boundary_vector(x) -> np.ndarray:
    x = as_vector(x)
    if abs(norm(x) - 1) > tol().boundary_tol:
        raise BoundaryViolation(f"|x| = {norm(x):.12g} is not on the sphere")
    return np.append(x, 1)


def boundary_transport(x1, x2, y1, y2, seed: int = 0) -> IsometryMatrix:
    """Member whose Möbius action sends x1 ↦ y1 and x2 ↦ y2 on the sphere."""
    vx1, vx2, vy1, vy2 = (_boundary_vector(v) for v in (x1, x2, y1, y2))
    if len({v.size for v in (vx1, vx2, vy1, vy2)}) > 1:
        raise DimensionMismatch("points differ in dimension")
    ptol = tol().point_tol
    if norm(vx1 - vx2) <= ptol or norm(vy1 - vy2) <= ptol:
        raise CoincidentPoints("the two points of a pair coincide")
    mu = form_A(vx1, vx2) / form_A(vy1, vy2)
    m = witt_extend(PartialIsometry([vx1, vx2], [mu * vy1, vy2]), seed=seed)
    for src, dst in ((x1, y1), (x2, y2)):
        miss = norm(mobius_apply(m, src) - as_vector(dst))
        if miss > 1e-7:
            raise VerificationFailed(f"transported point misses its target by {miss:.3e}")
    return m


def elliptic_to_unitary(t) -> tuple[IsometryMatrix, IsometryMatrix]:
    """Conjugator s moving the interior fixed point to 0, and u = s t s⁻¹."""
    report = classify(t)
    if not report.kind.is_elliptic or report.timelike_witness is None:
        raise NotElliptic(f"element is {report.kind}")
    w = report.timelike_witness
    b = w[:-1] / w[-1]
    s = lift_fb(b)
    tm = t.m if isinstance(t, IsometryMatrix) else np.asarray(t, dtype=complex)
    u = IsometryMatrix.of(s.m @ tm @ s.inverse().m, s.form)
    if not is_unitary(u):
        raise VerificationFailed("conjugated element is not unitary")
    return s, u
