"""Seeded generation of elements of a requested kind, post-checked by classify."""

from __future__ import annotations

import numpy as np

from .classify import Kind, classify, parabolic_r, subclass_unitary
from .document import IsometryDocument, ball_generator, from_member, siegel_generator
from .errors import CxHypError
from .heisenberg import HeisenbergTranslation
from .sampling import complex_normal, random_phase, random_unitary
from .ball import GeneratorData, build_isometry

KINDS = ("elliptic", "hyperbolic", "parabolic", "translation")
RETRY_BUDGET = 16


class GenerationFailed(CxHypError, RuntimeError):
    """No draw passed the post-check within the retry budget."""


def _subclass_r(kind: str, xi: np.ndarray, rng: np.random.Generator) -> complex:
    if kind == "elliptic":
        return -1.0
    if kind == "hyperbolic":
        return 1.0
    return parabolic_r(xi)[int(rng.integers(2))]


def _draw(kind: str, n: int, rng: np.random.Generator) -> IsometryDocument:
    if kind == "translation":
        if n == 1:
            h = HeisenbergTranslation.vertical(random_phase(rng), rng.normal(), 1)
        else:
            h = HeisenbergTranslation.horizontal(random_phase(rng), complex_normal(rng, n - 1), rng.normal())
        el = h.element()
        return from_member(h.matrix(), siegel_generator(el.lam, el.U, el.a_prime, el.s))
    xi = complex_normal(rng, n)
    theta = float(rng.uniform(0, 2 * np.pi))
    rest = random_unitary(rng, n - 1) if n > 1 else None
    u = subclass_unitary(xi, _subclass_r(kind, xi, rng), rest)
    t = build_isometry(GeneratorData(theta, u, xi))
    return from_member(t, ball_generator(theta, u, xi))


def _wanted(kind: str, found: Kind) -> bool:
    if kind == "elliptic":
        return found.is_elliptic
    if kind == "hyperbolic":
        return found is Kind.HYPERBOLIC
    return found is Kind.PARABOLIC


def generate(kind: str, n: int, rng: np.random.Generator, budget: int = RETRY_BUDGET) -> IsometryDocument:
    """Element with U ξ = r ξ for an r of the requested type (or a Heisenberg
    translation), redrawn until classify agrees."""
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if n < 1:
        raise ValueError("n must be at least 1")
    for _ in range(budget):
        doc = _draw(kind, n, rng)
        if _wanted(kind, classify(doc.member()).kind):
            return doc
    raise GenerationFailed(f"no {kind} element passed the post-check in {budget} draws")
