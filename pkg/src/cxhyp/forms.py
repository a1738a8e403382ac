"""Hermitian forms of signature (n, 1) on H ⊕ ℂ, given by a signature matrix.

The form of ``u`` and ``v`` is ``v* J u``: linear in the first argument,
conjugate-linear in the second.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroVector
from .linalg import as_vector
from .tolerances import tol


class HermitianForm:
    """A form given by a self-adjoint, involutive signature matrix."""

    name = "generic"

    def __init__(self, n: int, signature: np.ndarray):
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        self.n = n
        j = np.array(signature, dtype=complex)
        j.setflags(write=False)
        self._j = j

    @property
    def signature(self) -> np.ndarray:
        return self._j

    @property
    def dim(self) -> int:
        return self.n + 1

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.n == other.n

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.n))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n})"

    def _check(self, u: np.ndarray) -> np.ndarray:
        u = as_vector(u)
        if u.size != self.dim:
            raise DimensionMismatch(f"expected a vector of length {self.dim}, got {u.size}")
        return u

    def __call__(self, u, v) -> complex:
        u = self._check(u)
        v = self._check(v)
        return complex(np.vdot(v, self._j @ u))

    def quad(self, u) -> float:
        u = self._check(u)
        return float(np.vdot(u, self._j @ u).real)

    def gram(self, basis) -> np.ndarray:
        """Gram matrix of the columns of ``basis``: entry (i, j) is form(b_i, b_j)."""
        b = np.asarray(basis, dtype=complex)
        g = b.T @ self._j.T @ np.conj(b)
        return (g + np.conj(g).T) / 2

    def coefficient_matrix(self, basis) -> np.ndarray:
        """B* J B: the form in coordinates, form(B x, B y) = y* (B* J B) x."""
        b = np.asarray(basis, dtype=complex)
        g = np.conj(b).T @ self._j @ b
        return (g + np.conj(g).T) / 2


class Causal(enum.Enum):
    TIME_LIKE = "time-like"
    LIGHT_LIKE = "light-like"
    SPACE_LIKE = "space-like"


@dataclass(frozen=True)
class CausalClass:
    tag: Causal
    q_value: float


def causal_class_for(form: HermitianForm, u) -> CausalClass:
    """Sign of the quadratic form, with a relative band counted as light-like."""
    u = form._check(u)
    size = float(np.vdot(u, u).real)
    if size == 0:
        raise ZeroVector("causal class of the zero vector")
    q = form.quad(u)
    band = tol().causal_tol * size
    if q < -band:
        tag = Causal.TIME_LIKE
    elif q > band:
        tag = Causal.SPACE_LIKE
    else:
        tag = Causal.LIGHT_LIKE
    return CausalClass(tag, q)


class Infinity(enum.Enum):
    """The boundary point at infinity of the Siegel domain."""

    INFINITY = "infinity"

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = Infinity.INFINITY
