"""The Siegel domain model.

Coordinates on H ⊕ ℂ are ordered (e, ⟨e⟩⊥, ℂ): index 0 is the distinguished
boundary direction e, indices 1..n-1 span its orthogonal complement and the
last index is the ℂ-coordinate.  In these coordinates the form is
−z conj(⟨y,e⟩) − ⟨x,e⟩ conj(w) + ⟨x′,y′⟩.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ball import BallForm, IsometryMatrix, ensure_member, member_bound
from .errors import (
    DegenerateDenominator,
    DimensionMismatch,
    NotMember,
    NotStabilizer,
    OutsideClosedBall,
    OutsideDomain,
)
from .forms import INFINITY, HermitianForm
from .linalg import adjoint, as_matrix, as_vector, eigvals, norm
from .tolerances import tol


class SiegelForm(HermitianForm):
    name = "siegel"

    def __init__(self, n: int):
        j = np.eye(n + 1, dtype=complex)
        j[0, 0] = 0
        j[n, n] = 0
        j[0, n] = -1
        j[n, 0] = -1
        super().__init__(n, j)


def form_Ahat(u, v) -> complex:
    u = as_vector(u)
    v = as_vector(v)
    if u.size != v.size:
        raise DimensionMismatch(f"vector lengths differ: {u.size} vs {v.size}")
    if u.size < 2:
        raise DimensionMismatch("vectors on H ⊕ ℂ need at least two coordinates")
    return SiegelForm(u.size - 1)(u, v)


def quad_Qhat(u) -> float:
    u = as_vector(u)
    if u.size < 2:
        raise DimensionMismatch("vectors on H ⊕ ℂ need at least two coordinates")
    return float(-2 * (np.conj(u[-1]) * u[0]).real + np.vdot(u[1:-1], u[1:-1]).real)


def cayley_operator(n: int) -> np.ndarray:
    """Unitary D with D⁻¹ J_ball D = J_siegel."""
    d = np.eye(n + 1, dtype=complex)
    h = 1 / np.sqrt(2)
    d[0, 0] = h
    d[0, n] = -h
    d[n, 0] = h
    d[n, n] = h
    return d


def _require_form(t: IsometryMatrix, kind: type) -> None:
    if not isinstance(t.form, kind):
        raise NotMember(f"expected a {kind.name}-model element, got {t.form.name}")


def to_siegel(t) -> IsometryMatrix:
    t = ensure_member(t)
    _require_form(t, BallForm)
    d = cayley_operator(t.n)
    return IsometryMatrix.of(adjoint(d) @ t.m @ d, SiegelForm(t.n))


def to_ball(t: IsometryMatrix) -> IsometryMatrix:
    if not isinstance(t, IsometryMatrix):
        t = siegel_member(t)
    _require_form(t, SiegelForm)
    if not t.residual <= member_bound(t.m):
        raise NotMember(f"membership residual {t.residual:.3e} exceeds tolerance")
    d = cayley_operator(t.n)
    return IsometryMatrix.of(d @ t.m @ adjoint(d), BallForm(t.n))


def siegel_member(m) -> IsometryMatrix:
    a = as_matrix(m, square=True)
    return IsometryMatrix.of(a, SiegelForm(a.shape[0] - 1))


def cayley_point(x):
    """Map a point of the closed ball to the closed Siegel domain (or INFINITY)."""
    x = as_vector(x)
    t = tol()
    if norm(x) > 1 + t.boundary_tol:
        raise OutsideClosedBall(f"|x| = {norm(x):.6g} > 1")
    e = np.zeros_like(x)
    e[0] = 1
    if norm(x - e) <= t.point_tol:
        return INFINITY
    x0 = x[0]
    out = np.empty_like(x)
    out[0] = (1 + x0) / (1 - x0)
    out[1:] = np.sqrt(2) * x[1:] / (1 - x0)
    return out


def inverse_cayley_point(p) -> np.ndarray:
    """Inverse of ``cayley_point``; INFINITY goes to e."""
    if p is INFINITY:
        raise ValueError("INFINITY corresponds to e; its dimension is not recorded")
    p = as_vector(p)
    v = cayley_operator(p.size) @ np.append(p, 1)
    return v[:-1] / v[-1]


def in_domain(p) -> bool:
    """Closed Siegel domain: Re p0 ≥ ½‖p′‖² − boundary_tol."""
    if p is INFINITY:
        return True
    p = as_vector(p)
    return p[0].real >= 0.5 * np.vdot(p[1:], p[1:]).real - tol().boundary_tol * max(1.0, norm(p))


def siegel_apply(t: IsometryMatrix, p):
    """Projective action of a Siegel-model element on the closed domain."""
    _require_form(t, SiegelForm)
    if p is INFINITY:
        v = np.zeros(t.n + 1, dtype=complex)
        v[0] = 1
    else:
        p = as_vector(p)
        if p.size != t.n:
            raise DimensionMismatch(f"point has dimension {p.size}, expected {t.n}")
        v = np.append(p, 1)
    y = t.m @ v
    scale = tol().denom_tol * max(1.0, norm(y))
    if abs(y[-1]) < scale:
        if norm(y[1:]) < tol().point_tol * norm(y):
            return INFINITY
        raise DegenerateDenominator("image has vanishing last coordinate")
    return y[:-1] / y[-1]


# ---------------------------------------------------------------- stabilizer


@dataclass(frozen=True, eq=False)
class SiegelStabilizerElement:
    """Parameters of an element fixing INFINITY.

    ``U`` acts on ⟨e⟩⊥ and ``a_prime`` lies there; ``mu = 1/conj(lambda)``.
    """

    lam: complex
    U: np.ndarray
    a_prime: np.ndarray
    s: complex
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        lam = complex(self.lam)
        if lam == 0:
            raise ValueError("lambda must be nonzero")
        u = np.array(self.U, dtype=complex)
        if u.size == 0:
            u = u.reshape(0, 0)
        a = np.array(self.a_prime, dtype=complex).reshape(-1)
        if u.shape != (a.size, a.size):
            raise DimensionMismatch(f"U has shape {u.shape} but a' has length {a.size}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "U", u)
        object.__setattr__(self, "a_prime", a)
        object.__setattr__(self, "s", complex(self.s))
        if not self.check:
            return
        t = tol()
        if a.size and norm(adjoint(u) @ u - np.eye(a.size)) > t.member_tol:
            raise ValueError("U is not unitary")
        half = 0.5 * float(np.vdot(a, a).real)
        if abs(self.s.real - half) > t.member_tol * max(1.0, half):
            raise ValueError(f"Re s = {self.s.real:.6g} must equal |a'|²/2 = {half:.6g}")

    @property
    def mu(self) -> complex:
        return 1 / np.conj(self.lam)

    @property
    def n(self) -> int:
        return self.a_prime.size + 1


def stabilizer_build(el: SiegelStabilizerElement) -> IsometryMatrix:
    n = el.n
    lam, mu = el.lam, el.mu
    m = np.zeros((n + 1, n + 1), dtype=complex)
    m[0, 0] = lam
    m[0, 1:n] = np.conj(el.a_prime) @ el.U
    m[0, n] = mu * el.s
    m[1:n, 1:n] = el.U
    m[1:n, n] = mu * el.a_prime
    m[n, n] = mu
    return IsometryMatrix.of(m, SiegelForm(n))


def stabilizer_parse(t) -> SiegelStabilizerElement:
    if not isinstance(t, IsometryMatrix):
        t = siegel_member(t)
    _require_form(t, SiegelForm)
    if not t.residual <= member_bound(t.m):
        raise NotMember(f"membership residual {t.residual:.3e} exceeds tolerance")
    m = t.m
    n = t.n
    scale = max(1.0, norm(m))
    if norm(m[1:, 0]) > tol().member_tol * scale:
        raise NotStabilizer("element does not fix the point at infinity")
    lam = m[0, 0]
    mu = m[n, n]
    if abs(mu * np.conj(lam) - 1) > tol().member_tol * scale**2:
        raise NotMember("corner entries are not of the form λ, 1/conj(λ)")
    a_prime = m[1:n, n] / mu
    s = m[0, n] / mu
    # membership of m already pins Re s and unitarity of U to the relative
    # tolerance; skip the absolute re-check on the parsed parameters
    return SiegelStabilizerElement(lam, m[1:n, 1:n].copy(), a_prime, s, check=False)


def translation_matrix(a_prime, s) -> np.ndarray:
    a = np.array(a_prime, dtype=complex).reshape(-1)
    n = a.size + 1
    m = np.eye(n + 1, dtype=complex)
    m[0, 1:n] = np.conj(a)
    m[0, n] = s
    m[1:n, n] = a
    return m


def iwasawa(t) -> tuple[IsometryMatrix, IsometryMatrix, IsometryMatrix]:
    """Split a stabilizer element as translation · rotation · dilation."""
    el = stabilizer_parse(t)
    n = el.n
    form = SiegelForm(n)
    rot = np.eye(n + 1, dtype=complex)
    rot[1:n, 1:n] = el.U
    dil = np.eye(n + 1, dtype=complex)
    dil[0, 0] = el.lam
    dil[n, n] = el.mu
    return (
        IsometryMatrix.of(translation_matrix(el.a_prime, el.s), form),
        IsometryMatrix.of(rot, form),
        IsometryMatrix.of(dil, form),
    )


def stabilizer_spectrum(el: SiegelStabilizerElement) -> list:
    """Eigenvalues with multiplicity: λ, μ and those of U."""
    rest = list(eigvals(el.U)) if el.U.size else []
    return [complex(el.lam), complex(el.mu)] + [complex(z) for z in rest]


def affine_action(el: SiegelStabilizerElement, x) -> np.ndarray:
    """(|λ|² x₀ + conj(λ)⟨U x′, a′⟩ + s, conj(λ) U x′ + a′)."""
    x = as_vector(x)
    if x.size != el.n:
        raise DimensionMismatch(f"point has dimension {x.size}, expected {el.n}")
    if not in_domain(x):
        raise OutsideDomain("point is outside the closed Siegel domain")
    lbar = np.conj(el.lam)
    xp = x[1:]
    out = np.empty_like(x)
    out[0] = abs(el.lam) ** 2 * x[0] + lbar * np.vdot(el.a_prime, el.U @ xp) + el.s
    out[1:] = lbar * (el.U @ xp) + el.a_prime
    return out
