"""Conjugacy in the full group for elliptic, hyperbolic and translation-type
parabolic elements, with an explicit verified conjugator.

Semisimple elements (elliptic and hyperbolic) are conjugate exactly when their
eigenvalues agree with multiplicity and each unimodular eigenspace carries the
same form signature.  The conjugator maps a form-adapted eigenbasis of one to
the corresponding basis of the other.  Parabolic elements are moved so that
their fixed point is infinity in the Siegel model; if both become Heisenberg
translations, conjugacy is decided there.
"""

from __future__ import annotations

import numpy as np

from .ball import BallForm, IsometryMatrix, ensure_member
from .classify import Kind, classify, fixed_points
from .errors import NotStabilizer, Unsupported
from .heisenberg import ConjugacyVerdict, conjugacy_decide, translation_from_matrix, verify_conjugator
from .linalg import adjoint, eigh, norm, solve, spectral_groups
from .siegel import SiegelForm, to_ball, to_siegel
from .tolerances import tol
from .transport import PartialIsometry, witt_extend


def _same(a: complex, b: complex) -> bool:
    return abs(a - b) <= tol().circle_tol * max(1.0, abs(a))


def _unimodular_basis(form, space: np.ndarray) -> tuple[np.ndarray, list]:
    """Form-orthonormal basis of a non-degenerate eigenspace, negatives first."""
    w, v = eigh(form.coefficient_matrix(space))
    if np.min(np.abs(w)) <= tol().pivot_tol * max(1.0, np.max(np.abs(w))):
        raise Unsupported("degenerate unimodular eigenspace")
    order = np.argsort(np.sign(w), kind="stable")
    basis = space @ v[:, order] @ np.diag(1 / np.sqrt(np.abs(w[order])))
    return basis, [int(np.sign(x)) for x in w[order]]


def _adapted_bases(t1: IsometryMatrix, t2: IsometryMatrix) -> tuple[np.ndarray, np.ndarray] | str:
    """Matching bases X, Y with t1 X = X D and t2 Y = Y D, or a reason they
    cannot exist."""
    form = t1.form
    g1, g2 = spectral_groups(t1.m), spectral_groups(t2.m)
    for g in g1 + g2:
        if g.geometric != g.multiplicity:
            raise Unsupported("element is not diagonalizable")
    pairs = []
    for a in g1:
        match = [b for b in g2 if _same(a.value, b.value) and b.multiplicity == a.multiplicity]
        if not match:
            return "spectra differ"
        pairs.append((a, match[0]))
    if len({id(b) for _, b in pairs}) != len(g2):
        return "spectra differ"

    xs, ys, done = [], [], set()
    for a, b in pairs:
        if id(a) in done:
            continue
        if abs(abs(a.value) - 1) <= tol().circle_tol:
            bx, sx = _unimodular_basis(form, a.eigenspace)
            by, sy = _unimodular_basis(form, b.eigenspace)
            if sx != sy:
                return "eigenspace signatures differ"
            xs.append(bx)
            ys.append(by)
            done.add(id(a))
            continue
        # a light-like line paired with the line of eigenvalue 1/conj(value)
        target = 1 / np.conj(a.value)
        partner = [(c, d) for c, d in pairs if _same(c.value, target)]
        if not partner:
            raise Unsupported("unpaired non-unimodular eigenvalue")
        c, d = partner[0]
        for out, (p, q) in ((xs, (a, c)), (ys, (b, d))):
            vp, vm = p.eigenspace[:, 0], q.eigenspace[:, 0]
            f = form(vp, vm)
            out.append(np.column_stack([vp, vm / np.conj(f)]))
        done.update({id(a), id(c)})
    return np.column_stack(xs), np.column_stack(ys)


def _semisimple(t1: IsometryMatrix, t2: IsometryMatrix) -> ConjugacyVerdict:
    bases = _adapted_bases(t1, t2)
    if isinstance(bases, str):
        return ConjugacyVerdict(False, reason=bases)
    x, y = bases
    r = IsometryMatrix.of(adjoint(solve(adjoint(x), adjoint(y))), t1.form)
    return ConjugacyVerdict(True, r, "eigenbasis map", verify_conjugator(r, t1, t2))


def _to_infinity(t: IsometryMatrix) -> IsometryMatrix:
    """Ball member sending the boundary fixed point of a parabolic t to e."""
    report = fixed_points(t)
    if len(report.boundary_points) != 1:
        raise Unsupported("parabolic element without a unique boundary fixed point")
    v = report.boundary_points[0].vector
    e = np.zeros(t.n + 1, dtype=complex)
    e[0] = e[-1] = 1
    return witt_extend(PartialIsometry([v], [e]))


def _parabolic(t1: IsometryMatrix, t2: IsometryMatrix) -> ConjugacyVerdict:
    g1, g2 = _to_infinity(t1), _to_infinity(t2)
    try:
        h1 = translation_from_matrix(to_siegel(g1 @ t1 @ g1.inverse()))
        h2 = translation_from_matrix(to_siegel(g2 @ t2 @ g2.inverse()))
    except NotStabilizer as exc:
        raise Unsupported(f"parabolic element is not a Heisenberg translation: {exc}") from None
    verdict = conjugacy_decide(h1, h2)
    if not verdict.conjugate:
        return verdict
    r = g2.inverse() @ to_ball(verdict.conjugator) @ g1
    return ConjugacyVerdict(True, r, "via Heisenberg translations", verify_conjugator(r, t1, t2))


def decide_conjugacy(t1, t2) -> ConjugacyVerdict:
    """Whether r t1 r⁻¹ = t2 for some member r, with r when it exists.

    Both inputs must live in the same model; Siegel inputs are handled in
    the ball model and the conjugator is returned in the input model.
    Raises Unsupported for ambiguous or non-diagonalizable non-parabolic input
    and for parabolic elements that are not Heisenberg translations.
    """
    t1, t2 = ensure_member(t1), ensure_member(t2)
    if t1.form != t2.form:
        return ConjugacyVerdict(False, reason="different models or dimensions")
    siegel = isinstance(t1.form, SiegelForm)
    if siegel:
        try:
            return conjugacy_decide(translation_from_matrix(t1), translation_from_matrix(t2))
        except NotStabilizer:
            pass
        t1, t2 = to_ball(t1), to_ball(t2)
    if norm(t1.m - t2.m) <= tol().member_tol * max(1.0, norm(t1.m)):
        verdict = ConjugacyVerdict(True, IsometryMatrix.of(np.eye(t1.n + 1), BallForm(t1.n)), "equal", 0.0)
    else:
        k1, k2 = classify(t1).kind, classify(t2).kind
        if Kind.AMBIGUOUS in (k1, k2):
            raise Unsupported("classification is ambiguous")
        if k1 is not k2:
            return ConjugacyVerdict(False, reason=f"{k1} vs {k2}")
        verdict = _parabolic(t1, t2) if k1 is Kind.PARABOLIC else _semisimple(t1, t2)
    if siegel and verdict.conjugate:
        return ConjugacyVerdict(True, to_siegel(verdict.conjugator), verdict.reason, verdict.residual)
    return verdict
