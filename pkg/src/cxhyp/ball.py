"""The ball model: the form ⟨x,y⟩ − z w̄ on H ⊕ ℂ, its isometry group and the
projective (Möbius) action on the closed unit ball.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateDenominator,
    DimensionMismatch,
    NotInterior,
    NotMember,
    NotUnitary,
    OutsideClosedBall,
)
from .forms import CausalClass, HermitianForm, causal_class_for
from .linalg import adjoint, as_matrix, as_vector, norm
from .tolerances import tol


class BallForm(HermitianForm):
    """Signature diag(1, ..., 1, -1) of size n + 1."""

    name = "ball"

    def __init__(self, n: int):
        j = np.eye(n + 1, dtype=complex)
        j[n, n] = -1
        super().__init__(n, j)


def form_A(u, v) -> complex:
    u = as_vector(u)
    v = as_vector(v)
    if u.size != v.size:
        raise DimensionMismatch(f"vector lengths differ: {u.size} vs {v.size}")
    if u.size < 2:
        raise DimensionMismatch("vectors on H ⊕ ℂ need at least two coordinates")
    return BallForm(u.size - 1)(u, v)


def causal_class(u, form: HermitianForm | None = None) -> CausalClass:
    u = as_vector(u)
    return causal_class_for(form or BallForm(u.size - 1), u)


def membership_residual(m: np.ndarray, form: HermitianForm) -> float:
    j = form.signature
    with np.errstate(over="ignore", invalid="ignore"):
        return norm(adjoint(m) @ j @ m - j)


def is_member(m, form: HermitianForm | None = None) -> float:
    """Residual ``||m* J m - J||``; the caller compares it against member_tol."""
    a = as_matrix(m, square=True)
    form = form or BallForm(a.shape[0] - 1)
    if a.shape[0] != form.dim:
        raise DimensionMismatch(f"matrix size {a.shape[0]} does not match form size {form.dim}")
    return membership_residual(a, form)


def member_bound(m: np.ndarray) -> float:
    return tol().member_tol * (1 + norm(m) ** 2)


@dataclass(frozen=True, eq=False)
class IsometryMatrix:
    """A matrix preserving ``form``, with its cached membership residual."""

    m: np.ndarray
    form: HermitianForm
    residual: float = field(default=0.0)

    def __post_init__(self):
        self.m.setflags(write=False)

    @classmethod
    def of(cls, m, form: HermitianForm | None = None, check: bool = True) -> "IsometryMatrix":
        a = as_matrix(m, square=True).copy()
        form = form or BallForm(a.shape[0] - 1)
        if a.shape[0] != form.dim:
            raise DimensionMismatch(f"matrix size {a.shape[0]} does not match form size {form.dim}")
        res = membership_residual(a, form)
        if check and not res <= member_bound(a):  # NaN from overflow counts as failure
            raise NotMember(f"membership residual {res:.3e} exceeds tolerance")
        return cls(a, form, res)

    @property
    def n(self) -> int:
        return self.form.n

    def __matmul__(self, other: "IsometryMatrix") -> "IsometryMatrix":
        if not isinstance(other, IsometryMatrix):
            return NotImplemented
        if other.form != self.form:
            raise DimensionMismatch("product of isometries of different forms")
        return IsometryMatrix.of(self.m @ other.m, self.form, check=False)

    def inverse(self) -> "IsometryMatrix":
        j = self.form.signature
        return IsometryMatrix.of(j @ adjoint(self.m) @ j, self.form, check=False)

    def power(self, k: int) -> "IsometryMatrix":
        base = self if k >= 0 else self.inverse()
        out = np.eye(self.form.dim, dtype=complex)
        for _ in range(abs(k)):
            out = out @ base.m
        return IsometryMatrix.of(out, self.form, check=False)

    def __repr__(self) -> str:
        return f"IsometryMatrix(form={self.form!r}, residual={self.residual:.2e})"


def identity(n: int, form: HermitianForm | None = None) -> IsometryMatrix:
    form = form or BallForm(n)
    return IsometryMatrix.of(np.eye(n + 1), form)


def ensure_member(t) -> IsometryMatrix:
    """Accept an IsometryMatrix or a raw ball-model matrix."""
    if isinstance(t, IsometryMatrix):
        if not t.residual <= member_bound(t.m):
            raise NotMember(f"membership residual {t.residual:.3e} exceeds tolerance")
        return t
    return IsometryMatrix.of(t)


def inverse(t) -> IsometryMatrix:
    return ensure_member(t).inverse()


@dataclass(frozen=True, eq=False)
class GeneratorData:
    """Phase, unitary part and translation vector of a general element."""

    theta: float
    U: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        u = as_matrix(self.U, square=True)
        xi = as_vector(self.xi)
        if u.shape[0] != xi.size:
            raise DimensionMismatch(f"U is {u.shape[0]}x{u.shape[0]} but xi has length {xi.size}")
        object.__setattr__(self, "U", u)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def n(self) -> int:
        return self.xi.size

    @property
    def a(self) -> float:
        return float(np.sqrt(1 + np.vdot(self.xi, self.xi).real))

    @property
    def A(self) -> np.ndarray:
        """Positive operator acting as ``a`` on ξ and as the identity on ξ⊥."""
        nsq = float(np.vdot(self.xi, self.xi).real)
        eye = np.eye(self.n, dtype=complex)
        if nsq == 0:
            return eye
        return eye + ((self.a - 1) / nsq) * np.outer(self.xi, np.conj(self.xi))


def build_isometry(g: GeneratorData) -> IsometryMatrix:
    u = g.U
    if norm(adjoint(u) @ u - np.eye(g.n)) > tol().member_tol:
        raise NotUnitary("U is not unitary within member_tol")
    n = g.n
    m = np.zeros((n + 1, n + 1), dtype=complex)
    m[:n, :n] = u @ g.A
    m[:n, n] = u @ g.xi
    m[n, :n] = np.conj(g.xi)
    m[n, n] = g.a
    return IsometryMatrix.of(np.exp(1j * g.theta) * m, BallForm(n))


def mobius_apply(t, x) -> np.ndarray:
    """Action on the closed ball: apply to (x, 1) and rescale the last coordinate to 1."""
    t = ensure_member(t)
    x = as_vector(x)
    if x.size != t.n:
        raise DimensionMismatch(f"point has dimension {x.size}, expected {t.n}")
    if norm(x) > 1 + tol().boundary_tol:
        raise OutsideClosedBall(f"|x| = {norm(x):.6g} > 1")
    y = t.m @ np.append(x, 1)
    if abs(y[-1]) < tol().denom_tol * max(1.0, norm(y)):
        raise DegenerateDenominator("image has vanishing last coordinate")
    return y[:-1] / y[-1]


def lift_fb(b) -> IsometryMatrix:
    """The member whose Möbius action sends ``b`` to the origin.

    Built as (1/s)[[T_b, -T_b b], [-b*, 1]] with s = sqrt(1 - |b|^2) and
    T_b x = <x,b>/(1+s) b + s x; both defining properties are re-checked.
    """
    b = as_vector(b)
    t = tol()
    nb2 = float(np.vdot(b, b).real)
    if np.sqrt(nb2) >= 1 - t.interior_tol:
        raise NotInterior(f"|b| = {np.sqrt(nb2):.6g} is not inside the ball")
    n = b.size
    s = np.sqrt(1 - nb2)
    tb = np.outer(b, np.conj(b)) / (1 + s) + s * np.eye(n)
    m = np.zeros((n + 1, n + 1), dtype=complex)
    m[:n, :n] = tb
    m[:n, n] = -tb @ b
    m[n, :n] = -np.conj(b)
    m[n, n] = 1
    lifted = IsometryMatrix.of(m / s, BallForm(n))
    if norm(mobius_apply(lifted, b)) > t.point_tol:
        raise ArithmeticError("lift does not send b to the origin")
    return lifted
