"""Centralizer membership: block-structural tests checked against the direct
commutation oracle ‖st − ts‖ ≤ comm_tol ‖s‖ ‖t‖.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ball import IsometryMatrix, ensure_member
from .classify import Kind, dehomogenize, classify, form_complement, form_orthonormalize, lightlike_pair
from .errors import FormMismatch, NotCommuting, NotElliptic, NotHyperbolic, NotStabilizer
from .heisenberg import HeisenbergTranslation
from .linalg import adjoint, norm, spectral_groups
from .siegel import SiegelForm, stabilizer_parse
from .tolerances import tol


@dataclass(frozen=True)
class CentralizerEvidence:
    """Relative commutator norm, named structural checks and both verdicts."""

    commutator_norm: float
    structural_checks: list = field(default_factory=list)
    verdict: bool = False

    @property
    def oracle(self) -> bool:
        return self.commutator_norm <= tol().comm_tol

    @property
    def agrees(self) -> bool:
        return self.verdict == self.oracle


def _member(t) -> IsometryMatrix:
    return t if isinstance(t, IsometryMatrix) else ensure_member(t)


def commutator_norm(s: IsometryMatrix, t: IsometryMatrix) -> float:
    if s.form != t.form:
        raise FormMismatch(f"{s.form!r} vs {t.form!r}")
    return norm(s.m @ t.m - t.m @ s.m) / (norm(s.m) * norm(t.m))


def commutes(s, t) -> CentralizerEvidence:
    s, t = _member(s), _member(t)
    c = commutator_norm(s, t)
    return CentralizerEvidence(c, [], bool(c <= tol().comm_tol))


def _preserves(s: np.ndarray, basis: np.ndarray) -> bool:
    """Whether s maps span(basis) into itself."""
    if basis.shape[1] == 0:
        return True
    q, _ = np.linalg.qr(basis)
    image = s @ q
    leak = image - q @ (adjoint(q) @ image)
    return bool(norm(leak) <= tol().struct_tol * norm(s))


def _block(s: np.ndarray, basis: np.ndarray) -> np.ndarray:
    coeffs, *_ = np.linalg.lstsq(basis, s @ basis, rcond=None)
    return coeffs


def _blocks_commute(a: np.ndarray, b: np.ndarray) -> bool:
    if a.size == 0:
        return True
    return bool(norm(a @ b - b @ a) <= tol().struct_tol * max(1e-300, norm(a) * norm(b)))


def elliptic_centralizer_test(s, t) -> CentralizerEvidence:
    """Commutes iff s preserves the time-like eigenspace M and M†, and s on M†
    commutes with t on M† (t is scalar on M)."""
    s, t = _member(s), _member(t)
    c = commutator_norm(s, t)
    report = classify(t)
    if not report.kind.is_elliptic:
        raise NotElliptic(f"element is {report.kind}")
    w = report.timelike_witness
    group = min(spectral_groups(t.m), key=lambda g: norm(t.m @ w - g.value * w))
    m_basis = group.eigenspace
    dagger = form_orthonormalize(t.form, form_complement(t.form, m_basis))
    checks = [("preserves-M", _preserves(s.m, m_basis)), ("preserves-M-dagger", _preserves(s.m, dagger))]
    if all(ok for _, ok in checks):
        sm = _block(s.m, m_basis)
        g = t.form.coefficient_matrix(m_basis)
        iso = bool(norm(adjoint(sm) @ g @ sm - g) <= tol().struct_tol * max(1.0, norm(sm) ** 2 * norm(g)))
        checks.append(("isometric-on-M", iso))
        checks.append(("commutes-on-M-dagger", _blocks_commute(_block(s.m, dagger), _block(t.m, dagger))))
    verdict = all(ok for _, ok in checks)
    return CentralizerEvidence(c, checks, verdict)


def _line_eigenvalue(s: np.ndarray, v: np.ndarray) -> tuple[bool, complex]:
    sv = s @ v
    alpha = np.vdot(v, sv) / np.vdot(v, v)
    return bool(norm(sv - alpha * v) <= tol().struct_tol * norm(s) * norm(v)), complex(alpha)


def hyperbolic_centralizer_test(s, t) -> CentralizerEvidence:
    """Commutes iff s fixes both light-like eigenlines (with αβ̄ = 1), preserves
    M†, and commutes with t there."""
    s, t = _member(s), _member(t)
    c = commutator_norm(s, t)
    if classify(t).kind is not Kind.HYPERBOLIC:
        raise NotHyperbolic("t is not hyperbolic")
    big, small = lightlike_pair(t)
    vp, vm = big.eigenspace[:, 0], small.eigenspace[:, 0]
    ok_p, alpha = _line_eigenvalue(s.m, vp)
    ok_m, beta = _line_eigenvalue(s.m, vm)
    m_basis = np.column_stack([vp, vm])
    dagger = form_orthonormalize(t.form, form_complement(t.form, m_basis))
    checks = [("preserves-attracting-line", ok_p), ("preserves-repelling-line", ok_m)]
    if ok_p and ok_m:
        checks.append(("alpha-conj-beta-is-one", bool(abs(alpha * np.conj(beta) - 1) <= tol().struct_tol)))
    checks.append(("preserves-M-dagger", _preserves(s.m, dagger)))
    if checks[-1][1]:
        checks.append(("commutes-on-M-dagger", _blocks_commute(_block(s.m, dagger), _block(t.m, dagger))))
    verdict = all(ok for _, ok in checks)
    return CentralizerEvidence(c, checks, verdict)


def heisenberg_centralizer_test(s, h: HeisenbergTranslation) -> CentralizerEvidence:
    """Vertical h: s commutes iff λ′ = μ′.  Non-vertical h: iff additionally
    U a′ = λ′ a′ and ⟨b′, a′⟩ is real, with (λ′, U, b′, ·) the parameters of s.
    An s that does not fix infinity is reported as not commuting."""
    s = _member(s) if isinstance(s, IsometryMatrix) else IsometryMatrix.of(s, SiegelForm(h.n))
    t = h.matrix()
    c = commutator_norm(s, t)
    tl = tol()
    try:
        el = stabilizer_parse(s)
    except NotStabilizer:
        return CentralizerEvidence(c, [("fixes-infinity", False)], False)
    checks = [("fixes-infinity", True)]
    checks.append(("non-hyperbolic", bool(abs(el.lam - el.mu) <= tl.struct_tol * max(1.0, abs(el.lam)))))
    if not h.is_vertical:
        a, b = h.a_prime, el.a_prime
        checks.append(("U-fixes-a-prime-direction", bool(norm(el.U @ a - el.lam * a) <= tl.struct_tol * norm(a))))
        checks.append(("real-product", bool(abs(np.vdot(a, b).imag) <= tl.iso_tol * max(1.0, norm(a) * norm(b)))))
    verdict = all(ok for _, ok in checks)
    return CentralizerEvidence(c, checks, verdict)


def _boundary_pair(t: IsometryMatrix) -> list[np.ndarray]:
    big, small = lightlike_pair(t)
    pts = []
    for g in (big, small):
        v = dehomogenize(g.eigenspace[:, 0])
        pts.append(v[:-1])
    return pts


def shared_fixed_points(t1, t2) -> bool:
    """Whether two commuting hyperbolic elements fix the same boundary pair."""
    t1, t2 = _member(t1), _member(t2)
    for t in (t1, t2):
        if classify(t).kind is not Kind.HYPERBOLIC:
            raise NotHyperbolic("both elements must be hyperbolic")
    if commutator_norm(t1, t2) > tol().comm_tol:
        raise NotCommuting("elements do not commute")
    p, q = _boundary_pair(t1), _boundary_pair(t2)
    ptol = tol().point_tol

    def close(x, y):
        return norm(x - y) <= ptol * max(1.0, norm(x))

    return (close(p[0], q[0]) and close(p[1], q[1])) or (close(p[0], q[1]) and close(p[1], q[0]))


def centralizer_element_from(t, r: float, theta: float) -> IsometryMatrix:
    """Element acting as r·e^{iθ} on the attracting eigenline of the hyperbolic
    t, as e^{iθ}/r on the repelling one and as the identity on M†."""
    t = _member(t)
    if r <= 0:
        raise ValueError("r must be positive")
    if classify(t).kind is not Kind.HYPERBOLIC:
        raise NotHyperbolic("t is not hyperbolic")
    big, small = lightlike_pair(t)
    m_basis = np.column_stack([big.eigenspace[:, 0], small.eigenspace[:, 0]])
    dagger = form_complement(t.form, m_basis)
    basis = np.column_stack([m_basis, dagger])
    phase = np.exp(1j * theta)
    d = np.ones(basis.shape[1], dtype=complex)
    d[0] = r * phase
    d[1] = phase / r
    s = basis @ np.diag(d) @ np.linalg.inv(basis)
    return IsometryMatrix.of(s, t.form)
