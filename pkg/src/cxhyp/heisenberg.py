"""Heisenberg translations of the Siegel domain: construction, action,
conjugacy with explicit conjugators, the invariant subspace K and isotropy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ball import IsometryMatrix
from .errors import InvalidTranslation, NotStabilizer, OutsideDomain, VerificationFailed
from .linalg import adjoint, as_vector, norm, null_space
from .siegel import (
    SiegelForm,
    SiegelStabilizerElement,
    in_domain,
    stabilizer_build,
    stabilizer_parse,
    translation_matrix,
)
from .tolerances import tol


@dataclass(frozen=True, eq=False)
class HeisenbergTranslation:
    """λ times the unipotent translation by (a′, s); |λ| = 1, s ≠ 0."""

    lam: complex
    a_prime: np.ndarray
    s: complex

    def __post_init__(self):
        lam = complex(self.lam)
        a = np.array(self.a_prime, dtype=complex).reshape(-1)
        s = complex(self.s)
        t = tol()
        if abs(abs(lam) - 1) > t.circle_tol:
            raise InvalidTranslation(f"|lambda| = {abs(lam):.6g}, expected 1")
        half = 0.5 * float(np.vdot(a, a).real)
        if abs(s.real - half) > t.member_tol * max(1.0, half):
            raise InvalidTranslation(f"Re s = {s.real:.6g} must equal |a'|²/2 = {half:.6g}")
        if abs(s) <= t.denom_tol:
            raise InvalidTranslation("s = 0 gives no translation")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "a_prime", a)
        object.__setattr__(self, "s", s)

    @classmethod
    def vertical(cls, lam: complex, height: float, n: int) -> "HeisenbergTranslation":
        return cls(lam, np.zeros(n - 1), 1j * height)

    @classmethod
    def horizontal(cls, lam: complex, a_prime, height: float = 0.0) -> "HeisenbergTranslation":
        """Translation by a′ with Re s fixed by a′ and Im s = ``height``."""
        a = as_vector(a_prime)
        return cls(lam, a, complex(0.5 * float(np.vdot(a, a).real), height))

    @property
    def n(self) -> int:
        return self.a_prime.size + 1

    @property
    def is_vertical(self) -> bool:
        return norm(self.a_prime) <= tol().point_tol

    def element(self) -> SiegelStabilizerElement:
        return SiegelStabilizerElement(self.lam, self.lam * np.eye(self.n - 1), self.a_prime, self.s)

    def matrix(self) -> IsometryMatrix:
        return IsometryMatrix.of(self.lam * translation_matrix(self.a_prime, self.s), SiegelForm(self.n))


def translation_from_matrix(t) -> HeisenbergTranslation:
    """Read a Heisenberg translation off a stabilizer element, or raise NotStabilizer."""
    el = stabilizer_parse(t)
    lam = el.lam
    scale = max(1.0, norm(el.U))
    if norm(el.U - lam * np.eye(el.n - 1)) > tol().struct_tol * scale:
        raise NotStabilizer("rotation part is not scalar")
    if abs(abs(lam) - 1) > tol().circle_tol:
        raise NotStabilizer("dilation part is nontrivial")
    a = el.a_prime
    s = complex(0.5 * float(np.vdot(a, a).real), el.s.imag)
    return HeisenbergTranslation(lam / abs(lam), a, s)


def translate_point(h: HeisenbergTranslation, x) -> np.ndarray:
    """(x₀ + s + ⟨x′, a′⟩, x′ + a′)."""
    x = as_vector(x)
    if x.size != h.n:
        raise OutsideDomain(f"point has dimension {x.size}, expected {h.n}")
    if not in_domain(x):
        raise OutsideDomain("point is outside the closed Siegel domain")
    out = np.empty_like(x)
    out[0] = x[0] + h.s + np.vdot(h.a_prime, x[1:])
    out[1:] = x[1:] + h.a_prime
    return out


# ---------------------------------------------------------------- conjugacy


@dataclass(frozen=True)
class ConjugacyVerdict:
    conjugate: bool
    conjugator: IsometryMatrix | None = None
    reason: str = ""
    residual: float | None = None


def _householder_to_e1(x: np.ndarray) -> tuple[np.ndarray, complex]:
    """Unitary Hermitian H and unit α with H x = α e₁ for a unit vector x."""
    m = x.size
    phase = x[0] / abs(x[0]) if abs(x[0]) > 0 else 1.0
    alpha = -phase
    v = x.copy()
    v[0] -= alpha
    vn = np.linalg.norm(v)
    if vn < 1e-300:
        return np.eye(m, dtype=complex), x[0]
    v /= vn
    return np.eye(m, dtype=complex) - 2 * np.outer(v, np.conj(v)), alpha


def unitary_taking(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Deterministic unitary sending the direction of ``a`` to that of ``b``."""
    ha, alpha_a = _householder_to_e1(a / np.linalg.norm(a))
    hb, alpha_b = _householder_to_e1(b / np.linalg.norm(b))
    d = np.eye(a.size, dtype=complex)
    d[0, 0] = alpha_b / alpha_a
    return hb @ d @ ha


def verify_conjugator(r: IsometryMatrix, t1: IsometryMatrix, t2: IsometryMatrix) -> float:
    res = norm(r.m @ t1.m @ r.inverse().m - t2.m)
    if res > 1e-8 * norm(t2.m):
        raise VerificationFailed(f"conjugator residual {res:.3e} too large")
    return res


def conjugacy_decide(h1: HeisenbergTranslation, h2: HeisenbergTranslation) -> ConjugacyVerdict:
    """Decide whether R h1 R⁻¹ = h2 for some R fixing infinity; build R if so."""
    if h1.n != h2.n:
        return ConjugacyVerdict(False, reason="dimensions differ")
    if abs(h1.lam - h2.lam) > tol().circle_tol:
        return ConjugacyVerdict(False, reason="eigenvalues differ")
    if h1.is_vertical != h2.is_vertical:
        return ConjugacyVerdict(False, reason="one translation is vertical, the other is not")
    n = h1.n
    t1, t2 = h1.matrix(), h2.matrix()
    if h1.is_vertical:
        ratio = h2.s.imag / h1.s.imag
        if ratio <= 0:
            return ConjugacyVerdict(False, reason="vertical heights have opposite signs")
        scale = float(np.sqrt(ratio))
        el = SiegelStabilizerElement(scale, np.eye(n - 1), np.zeros(n - 1), 0)
    else:
        a, b = h1.a_prime, h2.a_prime
        lam_c = norm(b) / norm(a)
        u = unitary_taking(a, b)
        kappa = (lam_c**2 * h1.s.imag - h2.s.imag) / (2 * float(np.vdot(b, b).real))
        c = kappa * 1j * b
        el = SiegelStabilizerElement(lam_c, u, c, 0.5 * float(np.vdot(c, c).real))
    r = stabilizer_build(el)
    res = verify_conjugator(r, t1, t2)
    return ConjugacyVerdict(True, r, "explicit conjugator", res)


# ----------------------------------------------------------- K decomposition


@dataclass(frozen=True)
class KDecomposition:
    """The invariant subspace K, a basis of K† and the minimal polynomial degree
    of the restriction to K.  ``kernel`` spans ker(restriction − λ)."""

    k_basis: list
    k_dagger_basis: list
    minpoly_degree: int
    kernel: np.ndarray
    dagger_residual: float
    k_dagger_note: str = field(default="")


def k_decompose(h: HeisenbergTranslation) -> KDecomposition:
    n = h.n
    t = h.matrix().m
    e0 = np.zeros(n + 1, dtype=complex)
    e0[0] = 1
    en = np.zeros(n + 1, dtype=complex)
    en[n] = 1
    basis = [e0]
    if not h.is_vertical:
        basis.append(np.concatenate([[0], h.a_prime, [0]]))
    basis.append(en)
    kb = np.column_stack(basis)
    restricted, *_ = np.linalg.lstsq(kb, t @ kb, rcond=None)
    nil = restricted - h.lam * np.eye(kb.shape[1])
    square = nil @ nil
    degree = 3 if norm(square) > tol().struct_tol * max(1.0, norm(restricted)) ** 2 else 2
    kernel = kb @ null_space(nil, tol().struct_tol * max(1.0, norm(restricted)))

    if h.is_vertical:
        perp = np.eye(n - 1, dtype=complex)
    else:
        perp = null_space(np.conj(h.a_prime)[None, :], 0.5 * norm(h.a_prime))
    dagger = np.zeros((n + 1, perp.shape[1]), dtype=complex)
    dagger[1:n, :] = perp
    dres = norm(t @ dagger - h.lam * dagger) if dagger.size else 0.0
    note = "{(x′, 0) : ⟨x′, a′⟩ = 0}" if not h.is_vertical else "{(x′, 0) : x′ ⊥ e}"
    return KDecomposition(
        [kb[:, i].copy() for i in range(kb.shape[1])],
        [dagger[:, i].copy() for i in range(dagger.shape[1])],
        degree,
        kernel,
        dres,
        note,
    )


def isotropic(h1: HeisenbergTranslation, h2: HeisenbergTranslation) -> bool:
    """Horizontal parts have real inner product."""
    a, b = h1.a_prime, h2.a_prime
    return abs(np.vdot(a, b).imag) <= tol().iso_tol * norm(a) * norm(b)
