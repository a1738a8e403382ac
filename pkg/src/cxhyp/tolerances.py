"""Numerical tolerances shared by every module.

All thresholds live in one frozen dataclass.  The active set is held in a
context variable so that ``scaled(k)`` can widen or tighten everything for a
block of code without touching global state seen by other threads.
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    eig_tol: float = 1e-10
    cluster_tol: float = 1e-8
    solve_tol: float = 1e-12
    member_tol: float = 1e-9
    point_tol: float = 1e-8
    boundary_tol: float = 1e-8
    causal_tol: float = 1e-10
    interior_tol: float = 1e-9
    circle_tol: float = 1e-7
    iso_tol: float = 1e-10
    comm_tol: float = 1e-9
    # relative size of |z| below which an eigenvector is treated as lying in H
    z_tol: float = 1e-9
    denom_tol: float = 1e-12
    # numerical rank threshold for eigenspaces inside a spectral group
    null_tol: float = 1e-7
    # invariance residuals of subspaces under commuting elements
    struct_tol: float = 1e-7
    # pivots of the signature-aware Gram-Schmidt
    pivot_tol: float = 1e-10

    def scaled(self, factor: float) -> "Tolerances":
        if not factor > 0:
            raise ValueError(f"tolerance scale must be positive, got {factor}")
        return Tolerances(
            **{f.name: getattr(self, f.name) * factor for f in dataclasses.fields(self)}
        )


DEFAULT = Tolerances()

_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "cxhyp_tolerances", default=DEFAULT
)


def tol() -> Tolerances:
    """Return the tolerances active in the current context."""
    return _current.get()


@contextlib.contextmanager
def scaled(factor: float):
    """Multiply every tolerance by ``factor`` inside the ``with`` block."""
    token = _current.set(_current.get().scaled(factor))
    try:
        yield _current.get()
    finally:
        _current.reset(token)


def max_dim() -> int:
    """Largest admissible matrix dimension (``CXHYP_MAX_DIM``, default 64)."""
    raw = os.environ.get("CXHYP_MAX_DIM", "64")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"CXHYP_MAX_DIM must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"CXHYP_MAX_DIM must be positive, got {value}")
    return value
