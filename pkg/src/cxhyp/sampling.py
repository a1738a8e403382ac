"""Seeded random instances of each kind of element.

Every function takes a ``numpy.random.Generator`` so that callers control the
stream; nothing here touches global random state.
"""

from __future__ import annotations

import numpy as np

from .ball import BallForm, GeneratorData, IsometryMatrix, build_isometry, lift_fb
from .classify import parabolic_r, subclass_isometry
from .heisenberg import HeisenbergTranslation
from .linalg import adjoint
from .siegel import SiegelStabilizerElement, stabilizer_build, to_ball, to_siegel


def complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a Gaussian matrix."""
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    q, r = np.linalg.qr(complex_normal(rng, (n, n)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_phase(rng: np.random.Generator) -> complex:
    return complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))


def random_generator(rng: np.random.Generator, n: int, scale: float = 1.0) -> GeneratorData:
    return GeneratorData(rng.uniform(0, 2 * np.pi), random_unitary(rng, n), scale * complex_normal(rng, n))


def random_member(rng: np.random.Generator, n: int, scale: float = 1.0) -> IsometryMatrix:
    return build_isometry(random_generator(rng, n, scale))


def random_ball_point(rng: np.random.Generator, n: int, max_radius: float = 0.9) -> np.ndarray:
    v = complex_normal(rng, n)
    return v / np.linalg.norm(v) * max_radius * rng.uniform() ** (1 / (2 * n))


def random_boundary_point(rng: np.random.Generator, n: int) -> np.ndarray:
    v = complex_normal(rng, n)
    return v / np.linalg.norm(v)


def conjugate(g: IsometryMatrix, t: IsometryMatrix) -> IsometryMatrix:
    return IsometryMatrix.of(g.m @ t.m @ g.inverse().m, t.form)


def random_conjugator(rng: np.random.Generator, n: int) -> IsometryMatrix:
    return random_member(rng, n, scale=0.7)


def random_elliptic(rng: np.random.Generator, n: int, regular: bool = True) -> IsometryMatrix:
    """Unitary block diag(U, e^{iφ}) moved to a random interior fixed point."""
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))
    q = random_unitary(rng, n)
    u = np.eye(n + 1, dtype=complex)
    u[:n, :n] = q @ np.diag(phases) @ adjoint(q)
    # repeating an H-eigenvalue on the time-like line makes it boundary elliptic
    u[n, n] = random_phase(rng) if regular else phases[0]
    s = lift_fb(random_ball_point(rng, n))
    return IsometryMatrix.of(s.inverse().m @ u @ s.m, BallForm(n))


def random_hyperbolic(rng: np.random.Generator, n: int) -> IsometryMatrix:
    """A normal hyperbolic element (U ξ = ξ) conjugated by a random member."""
    xi = complex_normal(rng, n)
    rest = random_unitary(rng, n - 1) if n > 1 else None
    t = subclass_isometry(xi, 1.0, theta=rng.uniform(0, 2 * np.pi), rest=rest)
    return conjugate(random_conjugator(rng, n), t)


def random_parabolic(rng: np.random.Generator, n: int) -> IsometryMatrix:
    """Element with U ξ = r ξ at one of the two parabolic values of r."""
    xi = complex_normal(rng, n)
    r = parabolic_r(xi)[int(rng.integers(2))]
    rest = random_unitary(rng, n - 1) if n > 1 else None
    t = subclass_isometry(xi, r, theta=rng.uniform(0, 2 * np.pi), rest=rest)
    return conjugate(random_conjugator(rng, n), t)


def random_stabilizer(rng: np.random.Generator, n: int) -> SiegelStabilizerElement:
    lam = np.exp(rng.normal(scale=0.5)) * random_phase(rng)
    a = complex_normal(rng, n - 1)
    s = complex(0.5 * float(np.vdot(a, a).real), rng.normal())
    return SiegelStabilizerElement(lam, random_unitary(rng, n - 1), a, s)


def random_translation(rng: np.random.Generator, n: int, vertical: bool = False,
                       lam: complex | None = None) -> HeisenbergTranslation:
    lam = random_phase(rng) if lam is None else lam
    if vertical or n == 1:
        height = rng.normal()
        while abs(height) < 1e-3:
            height = rng.normal()
        return HeisenbergTranslation.vertical(lam, height, n)
    return HeisenbergTranslation.horizontal(lam, complex_normal(rng, n - 1), rng.normal())


def random_translation_ball(rng: np.random.Generator, n: int) -> IsometryMatrix:
    return to_ball(random_translation(rng, n).matrix())


# ------------------------------------------------------- structured pairs
#
# Each returns (s, t) where roughly half the draws commute by construction and
# the rest are generic; callers compare structural verdicts with the oracle.


def _commuting_unitaries(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    q = random_unitary(rng, n)
    a = q @ np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))) @ adjoint(q)
    b = q @ np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))) @ adjoint(q)
    return a, b


def elliptic_pair(rng: np.random.Generator, n: int) -> tuple[IsometryMatrix, IsometryMatrix]:
    """t elliptic (regular or boundary); s commuting with it, or not."""
    q = random_unitary(rng, n)
    phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))
    boundary = bool(rng.integers(2))
    tu = np.eye(n + 1, dtype=complex)
    tu[:n, :n] = q @ np.diag(phases) @ adjoint(q)
    tu[n, n] = phases[0] if boundary else random_phase(rng)
    conj = lift_fb(random_ball_point(rng, n))
    t = IsometryMatrix.of(conj.inverse().m @ tu @ conj.m, BallForm(n))
    mode = int(rng.integers(3))
    if mode == 0:
        return random_member(rng, n, scale=0.5), t
    su = np.eye(n + 1, dtype=complex)
    other = np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))
    if mode == 1:
        # same eigenbasis on H: commutes
        su[:n, :n] = q @ np.diag(other) @ adjoint(q)
        su[n, n] = random_phase(rng)
        if boundary:
            # mix the time-like line with the repeated H-eigenline by a boost
            c = rng.normal()
            boost = np.array([[np.cosh(c), np.sinh(c)], [np.sinh(c), np.cosh(c)]])
            basis = np.column_stack([np.append(q[:, 0], 0), np.eye(n + 1)[:, n]])
            block = basis @ boost @ adjoint(basis)
            proj = basis @ adjoint(basis)
            su = su @ (np.eye(n + 1) - proj) + block
    else:
        # fixes the same interior point, generic unitary on H: does not commute
        su[:n, :n] = random_unitary(rng, n)
        su[n, n] = random_phase(rng)
    return IsometryMatrix.of(conj.inverse().m @ su @ conj.m, BallForm(n)), t


def hyperbolic_pair(rng: np.random.Generator, n: int) -> tuple[IsometryMatrix, IsometryMatrix]:
    """t hyperbolic; s sharing its axis and commuting on M†, or not."""
    xi = complex_normal(rng, n)
    direction = xi / np.linalg.norm(xi)
    g = random_conjugator(rng, n)
    if n > 1:
        rest_t, rest_s = _commuting_unitaries(rng, n - 1)
    else:
        rest_t = rest_s = None
    t = subclass_isometry(xi, 1.0, theta=rng.uniform(0, 2 * np.pi), rest=rest_t)
    mode = int(rng.integers(3))
    if mode == 0:
        s = random_member(rng, n, scale=0.5)
        return s, conjugate(g, t)
    if mode == 1:
        # real multiple of the same ξ, commuting rest: commutes
        coeff = rng.normal(scale=1.5)
        s = subclass_isometry(coeff * direction if coeff != 0 else direction, 1.0,
                              theta=rng.uniform(0, 2 * np.pi), rest=rest_s)
    else:
        other = direction * np.exp(1j * rng.uniform(0.3, 2 * np.pi - 0.3))
        s = subclass_isometry(other, 1.0, theta=rng.uniform(0, 2 * np.pi),
                              rest=random_unitary(rng, n - 1) if n > 1 else None)
    return conjugate(g, s), conjugate(g, t)


def heisenberg_pair(rng: np.random.Generator, n: int) -> tuple[IsometryMatrix, HeisenbergTranslation]:
    """h a Heisenberg translation; s a Siegel-model element built to commute or not."""
    vertical = n == 1 or bool(rng.integers(2))
    h = random_translation(rng, n, vertical=vertical)
    mode = int(rng.integers(4))
    k = n - 1
    if mode == 0:
        return to_siegel(random_member(rng, n, scale=0.5)), h
    if mode == 1:
        return stabilizer_build(random_stabilizer(rng, n)), h
    lam = random_phase(rng)
    if vertical:
        u = random_unitary(rng, k)
        b = complex_normal(rng, k)
        if mode == 3:
            lam = lam * np.exp(rng.uniform(0.3, 1.0))  # a dilation, which does not commute
    else:
        a = h.a_prime
        ahat = a / np.linalg.norm(a)
        # orthonormal basis whose first column is â, so U = diag(λ′, W) in it
        basis, _ = np.linalg.qr(np.column_stack([ahat, complex_normal(rng, (k, k - 1))]))
        basis = basis * (np.vdot(basis[:, 0], ahat) / abs(np.vdot(basis[:, 0], ahat)))
        inner = np.eye(k, dtype=complex)
        inner[0, 0] = lam
        inner[1:, 1:] = random_unitary(rng, k - 1)
        u = basis @ inner @ adjoint(basis)
        b = rng.normal() * a + basis[:, 1:] @ complex_normal(rng, k - 1)
        if mode == 3:
            b = b + 1j * rng.uniform(0.5, 1.5) * a  # breaks the real-product condition
    el = SiegelStabilizerElement(lam, u, b, complex(0.5 * float(np.vdot(b, b).real), rng.normal()))
    return stabilizer_build(el), h


def regular_elliptic_vs_other(rng: np.random.Generator, n: int) -> tuple[IsometryMatrix, IsometryMatrix]:
    t = random_elliptic(rng, n, regular=True)
    s = random_hyperbolic(rng, n) if rng.integers(2) else random_parabolic(rng, n)
    return s, t


def commuting_hyperbolic_pair(rng: np.random.Generator, n: int) -> tuple[IsometryMatrix, IsometryMatrix]:
    """Two hyperbolic elements along one axis, commuting by construction."""
    xi = complex_normal(rng, n)
    direction = xi / np.linalg.norm(xi)
    g = random_conjugator(rng, n)
    if n > 1:
        rest_t, rest_s = _commuting_unitaries(rng, n - 1)
    else:
        rest_t = rest_s = None
    t = subclass_isometry(xi, 1.0, theta=rng.uniform(0, 2 * np.pi), rest=rest_t)
    coeff = rng.uniform(0.2, 2.0) * (1 if rng.integers(2) else -1)
    s = subclass_isometry(coeff * direction, 1.0, theta=rng.uniform(0, 2 * np.pi), rest=rest_s)
    return conjugate(g, s), conjugate(g, t)
