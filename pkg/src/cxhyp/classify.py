"""Fixed points, dynamical type, closed-form subclass spectra and the
M ⊕ M† splittings of elliptic and hyperbolic elements.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass, field

import numpy as np

from .ball import (
    GeneratorData,
    IsometryMatrix,
    build_isometry,
    ensure_member,
)
from .errors import NotElliptic, NotHyperbolic, ZeroXi
from .forms import INFINITY, Causal, HermitianForm, causal_class_for
from .linalg import SpectralGroup, adjoint, as_vector, eigh, norm, null_space, spectral_groups
from .tolerances import tol


class DynamicalType(enum.Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    AMBIGUOUS = "ambiguous"

    def __str__(self) -> str:
        return self.value


class Kind(enum.Enum):
    ELLIPTIC_REGULAR = "elliptic regular"
    ELLIPTIC_BOUNDARY = "elliptic boundary"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    AMBIGUOUS = "ambiguous"

    @property
    def is_elliptic(self) -> bool:
        return self in (Kind.ELLIPTIC_REGULAR, Kind.ELLIPTIC_BOUNDARY)

    @property
    def type(self) -> DynamicalType:
        if self.is_elliptic:
            return DynamicalType.ELLIPTIC
        return DynamicalType(self.value)

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class FixedPoint:
    """A fixed point with the eigenvalue of its homogeneous vector.

    ``point`` is in affine coordinates of the model (or INFINITY);
    ``vector`` is the homogeneous eigenvector.
    """

    point: object
    eigenvalue: complex
    vector: np.ndarray


@dataclass(frozen=True)
class FixedPointReport:
    interior_points: list = field(default_factory=list)
    boundary_points: list = field(default_factory=list)
    note: str | None = None


@dataclass(frozen=True)
class ClassificationReport:
    kind: Kind
    spectral_radius: float
    timelike_witness: np.ndarray | None
    evidence: FixedPointReport
    eigenvalues: list
    radius_margin: float
    causal_margin: float | None


def _as_member(t) -> IsometryMatrix:
    return ensure_member(t)


def _affine(form: HermitianForm, v: np.ndarray):
    """Affine point of a homogeneous vector, INFINITY, or None if undefined."""
    t = tol()
    vn = np.linalg.norm(v)
    z = v[-1]
    if abs(z) > t.z_tol * vn:
        return v[:-1] / z
    if form.name == "siegel" and np.linalg.norm(v[1:]) <= t.z_tol * vn:
        return INFINITY
    return None


def _bucket(form: HermitianForm, v: np.ndarray, point) -> str | None:
    """'interior', 'boundary' or None for a candidate fixed point."""
    t = tol()
    if point is None:
        return None
    if point is INFINITY:
        return "boundary"
    if form.name == "ball":
        r = np.linalg.norm(point)
        if r < 1 - t.boundary_tol:
            return "interior"
        if abs(r - 1) <= t.boundary_tol:
            return "boundary"
        return None
    tag = causal_class_for(form, v).tag
    if tag is Causal.TIME_LIKE:
        return "interior"
    if tag is Causal.LIGHT_LIKE:
        return "boundary"
    return None


def dehomogenize(v: np.ndarray) -> np.ndarray:
    z = v[-1]
    if abs(z) > tol().z_tol * np.linalg.norm(v):
        return v / z
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class _GroupScan:
    group: SpectralGroup
    gram_values: np.ndarray
    gram_vectors: np.ndarray

    @property
    def defective(self) -> bool:
        # eigenvectors heading a Jordan chain of an isometry are light-like,
        # whatever sign rounding gives their form value
        return self.group.geometric < self.group.multiplicity

    @property
    def min_q(self) -> float:
        return 0.0 if self.defective else float(self.gram_values[0])

    def direction(self, i: int) -> np.ndarray:
        return self.group.eigenspace @ self.gram_vectors[:, i]


def _scan(t: IsometryMatrix) -> list[_GroupScan]:
    out = []
    for g in spectral_groups(t.m):
        w, v = eigh(t.form.coefficient_matrix(g.eigenspace))
        out.append(_GroupScan(g, w, v))
    return out


def _fixed_points(t: IsometryMatrix, scans: list[_GroupScan]) -> FixedPointReport:
    ctol = tol().causal_tol
    interior, boundary = [], []
    note = None
    for sc in scans:
        g = sc.group
        if g.geometric == t.form.dim:
            note = "AllOfB"
        values = np.zeros_like(sc.gram_values) if sc.defective else sc.gram_values
        for i, q in enumerate(values):
            if i == 0 and q < -ctol:
                v = dehomogenize(sc.direction(0))
            elif abs(q) <= ctol:
                v = dehomogenize(sc.direction(i))
            else:
                continue
            point = _affine(t.form, v)
            where = _bucket(t.form, v, point)
            fp = FixedPoint(point, g.value, v)
            if where == "interior":
                interior.append(fp)
            elif where == "boundary":
                boundary.append(fp)
    if note == "AllOfB" and t.form.name == "ball":
        # every point is fixed: report the canonical witness only
        scalar = scans[0].group.value
        zero = np.zeros(t.n + 1, dtype=complex)
        zero[-1] = 1
        interior = [FixedPoint(np.zeros(t.n, dtype=complex), scalar, zero)]
        boundary = []
    return FixedPointReport(interior, boundary, note)


def fixed_points(t) -> FixedPointReport:
    t = _as_member(t)
    return _fixed_points(t, _scan(t))


def classify(t) -> ClassificationReport:
    """Decide the dynamical type from the spectrum and the eigenvector signs.

    A spectral radius above 1 + circle_tol means hyperbolic.  Otherwise an
    eigenspace carrying a time-like direction means elliptic (regular when
    that eigenspace is a line).  Everything else is parabolic.  A margin that
    falls within half a tolerance of its threshold yields AMBIGUOUS.
    """
    t = _as_member(t)
    tl = tol()
    scans = _scan(t)
    evidence = _fixed_points(t, scans)
    values = [sc.group.value for sc in scans]
    rho = max(abs(v) for v in values)
    radius_margin = rho - 1 - tl.circle_tol
    ambiguous = abs(radius_margin) <= tl.circle_tol / 2

    best = min(scans, key=lambda sc: sc.min_q)
    causal_margin = best.min_q + tl.causal_tol
    witness = None
    if radius_margin > 0:
        kind = Kind.HYPERBOLIC
        causal_margin = None
    else:
        ambiguous = ambiguous or abs(causal_margin) <= tl.causal_tol / 2
        if causal_margin < 0:
            witness = dehomogenize(best.direction(0))
            kind = Kind.ELLIPTIC_REGULAR if best.group.geometric == 1 else Kind.ELLIPTIC_BOUNDARY
        else:
            kind = Kind.PARABOLIC
    if ambiguous:
        kind = Kind.AMBIGUOUS
    return ClassificationReport(kind, float(rho), witness, evidence, values, float(radius_margin),
                                None if causal_margin is None else float(causal_margin))


# ------------------------------------------------------------ subclass spectra


@dataclass(frozen=True)
class SubclassSpectrum:
    lambda1: complex
    lambda2: complex
    k1: complex
    k2: complex
    r: complex
    xi: np.ndarray
    a: float


def _branch_sqrt(z: complex) -> complex:
    """Square root with nonnegative real part, nonnegative imaginary part on ties."""
    w = cmath.sqrt(z)
    re, im = w.real, w.imag
    if re == 0:
        re = 0.0
        im = abs(im)
    return complex(re, im)


def _subclass_inputs(xi, r) -> tuple[np.ndarray, complex, float, float]:
    xi = as_vector(xi)
    nsq = float(np.vdot(xi, xi).real)
    if nsq == 0:
        raise ZeroXi("xi must be nonzero")
    r = complex(r)
    if abs(abs(r) - 1) > tol().circle_tol:
        raise ValueError(f"|r| = {abs(r):.6g}, expected 1")
    return xi, r, nsq, float(np.sqrt(1 + nsq))


def subclass_spectrum(xi, r) -> SubclassSpectrum:
    """Closed-form eigenvalues and eigenvector coefficients for U ξ = r ξ.

    The eigenvectors are (k ξ, 1) with eigenvalue λ = k |ξ|² + a.
    """
    xi, r, nsq, a = _subclass_inputs(xi, r)
    root = _branch_sqrt(a * a * (r + 1) ** 2 - 4 * r)
    lam1 = (a * (r + 1) + root) / 2
    lam2 = (a * (r + 1) - root) / 2
    k1 = (a * (r - 1) + root) / (2 * nsq)
    k2 = (a * (r - 1) - root) / (2 * nsq)
    return SubclassSpectrum(lam1, lam2, k1, k2, r, xi, a)


def subclass_unitary(xi, r, rest=None) -> np.ndarray:
    """Unitary acting as r on ξ and as ``rest`` (default identity) on ξ⊥."""
    xi, r, nsq, _ = _subclass_inputs(xi, r)
    n = xi.size
    proj = np.outer(xi, np.conj(xi)) / nsq
    if rest is None:
        return np.eye(n, dtype=complex) + (r - 1) * proj
    perp = null_space(np.conj(xi)[None, :], 0.5 * np.sqrt(nsq))
    rest = np.asarray(rest, dtype=complex)
    return r * proj + perp @ rest @ adjoint(perp)


def subclass_isometry(xi, r, theta: float = 0.0, rest=None) -> IsometryMatrix:
    return build_isometry(GeneratorData(theta, subclass_unitary(xi, r, rest), as_vector(xi)))


def parabolic_r(xi) -> tuple[complex, complex]:
    """The two values of r on the unit circle giving a parabolic element."""
    xi = as_vector(xi)
    nsq = float(np.vdot(xi, xi).real)
    if nsq == 0:
        raise ZeroXi("xi must be nonzero")
    a2 = 1 + nsq
    re = 2 / a2 - 1
    im = 2 * np.sqrt(nsq) / a2
    return complex(re, im), complex(re, -im)


def subclass_classify(xi, r) -> DynamicalType:
    """Type of the element with U ξ = r ξ, read off from r alone.

    The two eigenvalues are e^{iψ/2}(c ± sqrt(c² − 1)) with r = e^{iψ} and
    c = a cos(ψ/2), so the type is decided by Re r against 2/a² − 1:
    below is elliptic, equal is parabolic, above is hyperbolic.
    """
    xi, r, nsq, a = _subclass_inputs(xi, r)
    threshold = 2 / (a * a) - 1
    gap = r.real - threshold
    ctol = tol().circle_tol
    if abs(gap) <= ctol:
        return DynamicalType.PARABOLIC
    return DynamicalType.HYPERBOLIC if gap > 0 else DynamicalType.ELLIPTIC


# ------------------------------------------------------------------ normality


def is_normal(t) -> bool:
    m = _as_member(t).m
    return norm(m @ adjoint(m) - adjoint(m) @ m) <= tol().member_tol * norm(m) ** 2


def is_unitary(t) -> bool:
    m = _as_member(t).m
    return norm(adjoint(m) @ m - np.eye(m.shape[0])) <= tol().member_tol


# ------------------------------------------------------------ decompositions


@dataclass(frozen=True)
class DecompositionReport:
    """Bases (as lists of vectors) of M and M† with the restricted blocks.

    ``t1`` is expressed in ``m_basis`` and ``t2`` in ``m_dagger_basis``; the
    latter is orthonormal for the form, so ``t2`` is unitary.
    """

    m_basis: list
    m_dagger_basis: list
    t1: np.ndarray
    t2: np.ndarray


def form_complement(form: HermitianForm, basis: np.ndarray) -> np.ndarray:
    """Columns spanning {v : form(v, b) = 0 for every column b}."""
    rows = adjoint(form.signature @ basis)
    return null_space(rows, 1e-9 * max(1.0, norm(rows)))


def form_orthonormalize(form: HermitianForm, basis: np.ndarray) -> np.ndarray:
    """Rescale a basis on which the form is definite to a form-orthonormal one."""
    g = form.coefficient_matrix(basis)
    w, v = eigh(g)
    return basis @ v @ np.diag(1 / np.sqrt(np.abs(w)))


def _restrict(t: IsometryMatrix, basis: np.ndarray) -> np.ndarray:
    coeffs, *_ = np.linalg.lstsq(basis, t.m @ basis, rcond=None)
    return coeffs


def _dagger_block(t: IsometryMatrix, basis: np.ndarray) -> np.ndarray:
    # entry (i, j) is form(t b_j, b_i); the basis is form-orthonormal and positive
    return adjoint(basis) @ t.form.signature @ t.m @ basis


def _columns(b: np.ndarray) -> list:
    return [b[:, i].copy() for i in range(b.shape[1])]


def decompose_elliptic(t) -> DecompositionReport:
    t = _as_member(t)
    report = classify(t)
    if not report.kind.is_elliptic or report.timelike_witness is None:
        raise NotElliptic(f"element is {report.kind}")
    m_basis = report.timelike_witness[:, None]
    dagger = form_orthonormalize(t.form, form_complement(t.form, m_basis))
    return DecompositionReport(
        _columns(m_basis), _columns(dagger), _restrict(t, m_basis), _dagger_block(t, dagger)
    )


def lightlike_pair(t: IsometryMatrix) -> tuple[SpectralGroup, SpectralGroup]:
    """Eigen-groups of largest and smallest modulus of a hyperbolic element."""
    groups = spectral_groups(t.m)
    big = max(groups, key=lambda g: abs(g.value))
    small = min(groups, key=lambda g: abs(g.value))
    if big.geometric != 1 or small.geometric != 1:
        raise NotHyperbolic("attracting/repelling eigenvalues are not simple")
    return big, small


def decompose_hyperbolic(t) -> DecompositionReport:
    t = _as_member(t)
    report = classify(t)
    if report.kind is not Kind.HYPERBOLIC:
        raise NotHyperbolic(f"element is {report.kind}")
    big, small = lightlike_pair(t)
    m_basis = np.column_stack([dehomogenize(big.eigenspace[:, 0]), dehomogenize(small.eigenspace[:, 0])])
    dagger = form_orthonormalize(t.form, form_complement(t.form, m_basis))
    return DecompositionReport(
        _columns(m_basis), _columns(dagger), _restrict(t, m_basis), _dagger_block(t, dagger)
    )

