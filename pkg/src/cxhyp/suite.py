"""Seeded property suites over every module, with a deterministic report.

Each property gets its own child of the master ``SeedSequence`` and each
trial a grandchild, so a trial's draw depends only on (seed, property, trial
index).  Results are aggregated by property name, never by completion order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import sampling as smp
from .ball import (
    BallForm,
    IsometryMatrix,
    causal_class,
    form_A,
    is_member,
    member_bound,
    mobius_apply,
)
from .centralizer import (
    commutator_norm,
    elliptic_centralizer_test,
    heisenberg_centralizer_test,
    hyperbolic_centralizer_test,
    shared_fixed_points,
)
from .classify import (
    Kind,
    classify,
    lightlike_pair,
    subclass_isometry,
    subclass_spectrum,
)
from .conjugacy import decide_conjugacy
from .document import encode_array, from_member, parse
from .generate import KINDS, generate
from .heisenberg import HeisenbergTranslation, conjugacy_decide, isotropic, translate_point
from .linalg import adjoint, eig, eigvals, multiset_distance, norm, solve, spectral_groups
from .siegel import (
    SiegelForm,
    cayley_operator,
    cayley_point,
    iwasawa,
    quad_Qhat,
    siegel_apply,
    stabilizer_build,
    stabilizer_spectrum,
    to_siegel,
)
from .tolerances import tol
from .transport import PartialIsometry, boundary_transport, witt_extend


@dataclass(frozen=True)
class Outcome:
    ok: bool
    residual: float = 0.0
    witness: object = None


@dataclass(frozen=True)
class PropertyResult:
    name: str
    trials: int
    failures: int
    max_residual: float
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class RunReport:
    command: str
    seed: int
    trials: int
    results: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "warnings": list(self.warnings),
            "results": [
                {
                    "property": r.name,
                    "passed": r.passed,
                    "trials": r.trials,
                    "failures": r.failures,
                    "max_residual": float(f"{r.max_residual:.3e}"),
                    **({"counterexample": r.counterexample} if r.counterexample is not None else {}),
                }
                for r in self.results
            ],
        }

    def to_text(self) -> str:
        lines = [self.command]
        lines += [f"WARNING: {w}" for w in self.warnings]
        for r in self.results:
            line = f"{'PASS' if r.passed else 'FAIL'} {r.name} trials={r.trials} failures={r.failures} max_residual={r.max_residual:.3e}"
            if r.counterexample is not None:
                line += " counterexample=" + json.dumps(r.counterexample, sort_keys=True)
            lines.append(line)
        ok = sum(r.passed for r in self.results)
        lines.append(f"summary: {ok} passed, {len(self.results) - ok} failed")
        return "\n".join(lines) + "\n"


def _n(rng, lo: int = 1, hi: int = 6) -> int:
    return int(rng.integers(lo, hi + 1))


def _serialize(w) -> dict | None:
    if w is None:
        return None
    if isinstance(w, IsometryMatrix):
        return from_member(w).to_json()
    if isinstance(w, HeisenbergTranslation):
        return {"lambda": encode_array([w.lam]), "a_prime": encode_array(w.a_prime), "s": encode_array([w.s])}
    if isinstance(w, np.ndarray):
        return {"array": encode_array(w), "shape": list(w.shape)}
    if isinstance(w, (list, tuple)):
        return {"items": [_serialize(x) for x in w]}
    if isinstance(w, dict):
        return w
    return {"value": repr(w)}


# ------------------------------------------------------------------- linalg


def p_eig_residuals(rng):
    n = _n(rng, 1, 8)
    m = smp.complex_normal(rng, (n, n))
    res = max(eig(m).residuals) / norm(m)
    return Outcome(res <= tol().eig_tol, res, m)


def p_adjoint_involution(rng):
    n = _n(rng, 1, 8)
    m = smp.complex_normal(rng, (n, n))
    return Outcome(bool(np.array_equal(adjoint(adjoint(m)), m)), 0.0, m)


def p_hermitian_real_spectrum(rng):
    n = _n(rng, 1, 8)
    m = smp.complex_normal(rng, (n, n))
    h = m + adjoint(m)
    res = float(np.max(np.abs(eigvals(h).imag))) / norm(h)
    return Outcome(res <= tol().eig_tol, res, h)


def p_solve_recovers(rng):
    n = _n(rng, 1, 8)
    q = smp.random_unitary(rng, n)
    m = q @ np.diag(rng.uniform(1, 2, size=n)) @ smp.random_unitary(rng, n)
    x = smp.complex_normal(rng, n)
    res = norm(solve(m, m @ x) - x) / norm(x)
    return Outcome(res <= tol().solve_tol, res, m)


# --------------------------------------------------------------------- ball


def p_membership(rng):
    t = smp.random_member(rng, _n(rng))
    res = is_member(t.m)
    return Outcome(res <= 1e-9, res, t)


def p_form_preservation(rng):
    n = _n(rng)
    t = smp.random_member(rng, n)
    u, v = smp.complex_normal(rng, n + 1), smp.complex_normal(rng, n + 1)
    res = abs(form_A(t.m @ u, t.m @ v) - form_A(u, v)) / (norm(u) * norm(v))
    return Outcome(res <= tol().member_tol, res, t)


def p_mobius_composition(rng):
    n = _n(rng)
    t1, t2 = smp.random_member(rng, n, 0.5), smp.random_member(rng, n, 0.5)
    x = smp.random_ball_point(rng, n)
    res = norm(mobius_apply(t1 @ t2, x) - mobius_apply(t1, mobius_apply(t2, x)))
    return Outcome(res <= tol().point_tol, res, t1 @ t2)


def p_boundary_invariance(rng):
    n = _n(rng)
    t = smp.random_member(rng, n)
    y = mobius_apply(t, smp.random_boundary_point(rng, n))
    res = abs(norm(y) - 1)
    return Outcome(res <= tol().boundary_tol, res, t)


def p_causal_invariance(rng):
    n = _n(rng)
    t = smp.random_member(rng, n, 0.5)
    choice = int(rng.integers(3))
    if choice == 0:
        u = np.append(smp.random_boundary_point(rng, n), 1)
    elif choice == 1:
        u = np.append(smp.random_ball_point(rng, n), 1)
    else:
        u = np.append(smp.random_boundary_point(rng, n) * rng.uniform(1.2, 3), 1)
    before, after = causal_class(u).tag, causal_class(t.m @ u).tag
    return Outcome(before is after, 0.0, t)


# ----------------------------------------------------------------- classify


def _subclass_draw(rng):
    n = _n(rng)
    xi = smp.complex_normal(rng, n)
    r = smp.random_phase(rng)
    return xi, r, subclass_isometry(xi, r)


def p_subclass_spectrum_oracle(rng):
    xi, r, t = _subclass_draw(rng)
    sp = subclass_spectrum(xi, r)
    expected = [sp.lambda1, sp.lambda2] + [1.0] * (xi.size - 1)
    res = multiset_distance(expected, eigvals(t.m))
    return Outcome(res <= 1e-8, res, t)


def p_subclass_moduli(rng):
    xi, r, t = _subclass_draw(rng)
    sp = subclass_spectrum(xi, r)
    nx = norm(xi)
    res = max(abs(abs(sp.lambda1 * sp.lambda2) - 1), abs(abs(sp.k1) * nx * abs(sp.k2) * nx - 1))
    return Outcome(res <= 1e-10, res, t)


def _random_kind(rng, n):
    pick = int(rng.integers(4))
    if pick == 0:
        return smp.random_elliptic(rng, n, regular=True)
    if pick == 1:
        return smp.random_elliptic(rng, n, regular=False)
    if pick == 2:
        return smp.random_hyperbolic(rng, n)
    return smp.random_parabolic(rng, n)


def p_conjugation_invariance(rng):
    n = _n(rng)
    t = _random_kind(rng, n)
    s = smp.conjugate(smp.random_conjugator(rng, n), t)
    return Outcome(classify(t).kind is classify(s).kind, 0.0, t)


def p_elliptic_witness(rng):
    t = smp.random_elliptic(rng, _n(rng), regular=bool(rng.integers(2)))
    report = classify(t)
    w = report.timelike_witness
    ok = report.kind.is_elliptic and w is not None and t.form.quad(w) < 0
    return Outcome(ok, 0.0, t)


def p_hyperbolic_lines(rng):
    t = smp.random_hyperbolic(rng, _n(rng))
    report = classify(t)
    if report.kind is not Kind.HYPERBOLIC:
        return Outcome(False, 0.0, t)
    big, small = lightlike_pair(t)
    vb, vs = big.eigenspace[:, 0], small.eigenspace[:, 0]
    rho = abs(big.value)
    res = max(abs(t.form.quad(vb)) / norm(vb) ** 2, abs(t.form.quad(vs)) / norm(vs) ** 2,
              abs(abs(small.value) * rho - 1))
    return Outcome(rho > 1 and res <= 1e-7, res, t)


def p_parabolic_circle(rng):
    t = smp.random_parabolic(rng, _n(rng))
    report = classify(t)
    res = max(abs(abs(v) - 1) for v in report.eigenvalues)
    ok = report.kind is Kind.PARABOLIC and report.timelike_witness is None and res <= tol().circle_tol
    return Outcome(ok, res, t)


def p_boundary_elliptic_witness(rng):
    n = _n(rng)
    if rng.integers(4) == 0:
        t = IsometryMatrix.of(np.eye(n + 1) * smp.random_phase(rng), BallForm(n))
    else:
        phases = np.exp(1j * rng.uniform(0, 2 * np.pi, size=n))
        q = smp.random_unitary(rng, n)
        u = np.eye(n + 1, dtype=complex)
        u[:n, :n] = q @ np.diag(phases) @ adjoint(q)
        u[n, n] = phases[int(rng.integers(n))]
        t = IsometryMatrix.of(u, BallForm(n))
    return Outcome(classify(t).kind is Kind.ELLIPTIC_BOUNDARY, 0.0, t)


# ---------------------------------------------------------------- transport


def p_witt_membership(rng):
    n = _n(rng)
    g = smp.random_member(rng, n, 0.7)
    k = int(rng.integers(1, n + 2))
    xs = [smp.complex_normal(rng, n + 1) for _ in range(k)]
    t = witt_extend(PartialIsometry(xs, [g.m @ x for x in xs]), seed=int(rng.integers(2**31)))
    res = t.residual
    return Outcome(res <= member_bound(t.m), res, g)


def p_boundary_transport(rng):
    n = int(rng.integers(2, 4))
    x1, x2, y1, y2 = (smp.random_boundary_point(rng, n) for _ in range(4))
    t = boundary_transport(x1, x2, y1, y2)
    res = max(norm(mobius_apply(t, x1) - y1), norm(mobius_apply(t, x2) - y2))
    return Outcome(res <= 1e-7 and t.residual <= member_bound(t.m), res, t)


def p_conjugation_spectrum(rng):
    n = _n(rng)
    t = smp.random_hyperbolic(rng, n) if rng.integers(2) else smp.random_elliptic(rng, n)
    s = smp.conjugate(smp.random_conjugator(rng, n), t)
    res = multiset_distance(eigvals(t.m), eigvals(s.m))
    return Outcome(res <= 1e-7, res, t)


# ------------------------------------------------------------------- siegel


def p_cayley_form(rng):
    n = _n(rng, 1, 8)
    d = cayley_operator(n)
    res = max(norm(adjoint(d) @ d - np.eye(n + 1)),
              norm(adjoint(d) @ BallForm(n).signature @ d - SiegelForm(n).signature))
    return Outcome(res <= 1e-14, res, d)


def p_point_matrix_compat(rng):
    n = _n(rng)
    t = smp.random_member(rng, n, 0.5)
    e = np.zeros(n, dtype=complex)
    e[0] = 1
    for _ in range(16):
        x = smp.random_ball_point(rng, n)
        y = mobius_apply(t, x)
        if norm(x - e) > 0.1 and norm(y - e) > 0.1:
            break
    else:
        return Outcome(True)
    lhs = cayley_point(y)
    rhs = siegel_apply(to_siegel(t), cayley_point(x))
    res = norm(lhs - rhs) / max(1.0, norm(lhs))
    return Outcome(res <= 1e-7, res, t)


def p_boundary_to_boundary(rng):
    n = _n(rng)
    x = smp.random_boundary_point(rng, n)
    e = np.zeros(n, dtype=complex)
    e[0] = 1
    if norm(x - e) < 1e-3:
        return Outcome(True)
    v = np.append(cayley_point(x), 1)
    res = abs(quad_Qhat(v)) / norm(v) ** 2
    return Outcome(res <= 1e-7, res, x)


def p_stabilizer_spectrum(rng):
    el = smp.random_stabilizer(rng, _n(rng))
    t = stabilizer_build(el)
    res = multiset_distance(stabilizer_spectrum(el), eigvals(t.m))
    return Outcome(res <= 1e-7, res, t)


def p_iwasawa(rng):
    t = stabilizer_build(smp.random_stabilizer(rng, _n(rng)))
    a, r, d = iwasawa(t)
    res = norm(a.m @ r.m @ d.m - t.m) / norm(t.m)
    return Outcome(res <= 1e-9, res, t)


# --------------------------------------------------------------- heisenberg


def p_conjugacy_soundness(rng):
    n = _n(rng, 2, 6)
    lam = smp.random_phase(rng)
    h1 = smp.random_translation(rng, n, lam=lam)
    h2 = smp.random_translation(rng, n, lam=lam)
    v = conjugacy_decide(h1, h2)
    ok = v.conjugate and v.residual <= 1e-8 * norm(h2.matrix().m)
    return Outcome(ok, v.residual or 0.0, (h1, h2))


def p_vertical_dichotomy(rng):
    n = _n(rng)
    lam = smp.random_phase(rng)
    h1 = smp.random_translation(rng, n, vertical=True, lam=lam)
    h2 = smp.random_translation(rng, n, vertical=True, lam=lam)
    v = conjugacy_decide(h1, h2)
    return Outcome(v.conjugate == (h1.s.imag * h2.s.imag > 0), v.residual or 0.0, (h1, h2))


def p_isotropic_iff_commute(rng):
    n = _n(rng, 2, 6)
    h1 = smp.random_translation(rng, n)
    a = h1.a_prime
    if rng.integers(2):
        perp = smp.complex_normal(rng, n - 1)
        perp -= a * (np.vdot(a, perp) / np.vdot(a, a))
        b = rng.normal() * a + perp
        h2 = HeisenbergTranslation.horizontal(smp.random_phase(rng), b, rng.normal())
    else:
        h2 = smp.random_translation(rng, n)
    c = commutator_norm(h1.matrix(), h2.matrix())
    return Outcome(isotropic(h1, h2) == (c <= tol().comm_tol), c, (h1, h2))


def p_singleton_spectrum(rng):
    n = _n(rng)
    h = smp.random_translation(rng, n, vertical=bool(rng.integers(2)))
    groups = spectral_groups(h.matrix().m)
    res = abs(groups[0].value - h.lam) if len(groups) == 1 else float("inf")
    ok = len(groups) == 1 and groups[0].multiplicity == n + 1 and res <= tol().circle_tol
    return Outcome(ok, res, h)


def p_translate_point(rng):
    n = _n(rng)
    h = smp.random_translation(rng, n)
    xp = smp.complex_normal(rng, n - 1)
    x = np.concatenate([[0.5 * np.vdot(xp, xp).real + abs(rng.normal()) + 1j * rng.normal()], xp])
    lhs = siegel_apply(h.matrix(), x)
    rhs = translate_point(h, x)
    res = norm(lhs - rhs) / max(1.0, norm(rhs))
    return Outcome(res <= 1e-8, res, h)


# -------------------------------------------------------------- centralizer


def _oracle(pair_fn, test_fn):
    def prop(rng):
        s, t = pair_fn(rng, _n(rng, 1, 5))
        ev = test_fn(s, t)
        return Outcome(ev.agrees, ev.commutator_norm, [s, t] if isinstance(t, IsometryMatrix) else [s, t.matrix()])

    return prop


def p_regular_elliptic_exclusive(rng):
    s, t = smp.regular_elliptic_vs_other(rng, _n(rng))
    c = commutator_norm(s, t)
    return Outcome(c > tol().comm_tol, c, [s, t])


def p_eigenspace_invariance(rng):
    n = _n(rng, 1, 5)
    s, t = smp.elliptic_pair(rng, n) if rng.integers(2) else smp.hyperbolic_pair(rng, n)
    if commutator_norm(s, t) > tol().comm_tol:
        return Outcome(True)
    res = 0.0
    for g in spectral_groups(t.m):
        q = g.eigenspace
        image = s.m @ q
        res = max(res, norm(image - q @ (adjoint(q) @ image)) / norm(s.m))
    return Outcome(res <= 1e-7, res, [s, t])


def p_shared_fixed_points(rng):
    s, t = smp.commuting_hyperbolic_pair(rng, _n(rng, 1, 5))
    return Outcome(bool(shared_fixed_points(s, t)), commutator_norm(s, t), [s, t])


# ---------------------------------------------------------------- documents


def p_document_round_trip(rng):
    n = _n(rng)
    doc = generate(KINDS[int(rng.integers(len(KINDS)))], n, rng)
    if rng.integers(2):
        doc = from_member(doc.member())
    back = parse(doc.dumps())
    return Outcome(back == doc, 0.0, doc.to_json())


def p_emitted_documents_are_members(rng):
    n = _n(rng)
    doc = generate(KINDS[int(rng.integers(len(KINDS)))], n, rng)
    t = smp.random_elliptic(rng, n)
    v = decide_conjugacy(t, smp.conjugate(smp.random_conjugator(rng, n), t))
    res = 0.0
    for d in (doc, from_member(v.conjugator)):
        back = parse(d.dumps())
        res = max(res, is_member(back.matrix, back.form) / member_bound(back.matrix))
    return Outcome(res <= 1.0, res, doc.to_json())


def p_injected_failure(rng):
    return Outcome(False, 1.0, smp.random_member(rng, 2))


PROPERTIES: dict[str, Callable] = {
    "linalg.eig-residuals": p_eig_residuals,
    "linalg.adjoint-involution": p_adjoint_involution,
    "linalg.hermitian-real-spectrum": p_hermitian_real_spectrum,
    "linalg.solve-recovers": p_solve_recovers,
    "ball.membership": p_membership,
    "ball.form-preservation": p_form_preservation,
    "ball.mobius-composition": p_mobius_composition,
    "ball.boundary-invariance": p_boundary_invariance,
    "ball.causal-invariance": p_causal_invariance,
    "classify.subclass-spectrum-oracle": p_subclass_spectrum_oracle,
    "classify.subclass-moduli": p_subclass_moduli,
    "classify.conjugation-invariance": p_conjugation_invariance,
    "classify.elliptic-witness": p_elliptic_witness,
    "classify.hyperbolic-lines": p_hyperbolic_lines,
    "classify.parabolic-circle": p_parabolic_circle,
    "classify.boundary-elliptic-witness": p_boundary_elliptic_witness,
    "transport.witt-membership": p_witt_membership,
    "transport.boundary-transport": p_boundary_transport,
    "transport.conjugation-spectrum": p_conjugation_spectrum,
    "siegel.cayley-form": p_cayley_form,
    "siegel.point-matrix-compat": p_point_matrix_compat,
    "siegel.boundary-to-boundary": p_boundary_to_boundary,
    "siegel.stabilizer-spectrum": p_stabilizer_spectrum,
    "siegel.iwasawa": p_iwasawa,
    "heisenberg.conjugacy-soundness": p_conjugacy_soundness,
    "heisenberg.vertical-dichotomy": p_vertical_dichotomy,
    "heisenberg.isotropic-iff-commute": p_isotropic_iff_commute,
    "heisenberg.singleton-spectrum": p_singleton_spectrum,
    "heisenberg.translate-point": p_translate_point,
    "centralizer.elliptic-oracle": _oracle(smp.elliptic_pair, elliptic_centralizer_test),
    "centralizer.hyperbolic-oracle": _oracle(smp.hyperbolic_pair, hyperbolic_centralizer_test),
    "centralizer.heisenberg-oracle": _oracle(smp.heisenberg_pair, heisenberg_centralizer_test),
    "centralizer.regular-elliptic-exclusive": p_regular_elliptic_exclusive,
    "centralizer.eigenspace-invariance": p_eigenspace_invariance,
    "centralizer.shared-fixed-points": p_shared_fixed_points,
    "document.round-trip": p_document_round_trip,
    "document.emitted-members": p_emitted_documents_are_members,
}

INJECTED = "harness.injected-failure"


def run_property(name: str, prop: Callable, seq: np.random.SeedSequence, trials: int) -> PropertyResult:
    failures, worst, example = 0, 0.0, None
    for i, child in enumerate(seq.spawn(trials)):
        rng = np.random.default_rng(child)
        try:
            out = prop(rng)
        except Exception as exc:  # a crash is a failed trial, reported with its cause
            out = Outcome(False, float("inf"), {"error": f"{type(exc).__name__}: {exc}"})
        if np.isfinite(out.residual):
            worst = max(worst, float(out.residual))
        if not out.ok:
            failures += 1
            if example is None:
                example = {"trial": i, "witness": _serialize(out.witness)}
    return PropertyResult(name, trials, failures, worst, example)


def run_suite(seed: int = 0, trials: int = 20, inject_failure: bool = False,
              only: list[str] | None = None) -> RunReport:
    """Run every property ``trials`` times; deterministic in (seed, trials, flags)."""
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    props = dict(PROPERTIES)
    if inject_failure:
        props[INJECTED] = p_injected_failure
    names = sorted(props)
    if only:
        unknown = set(only) - set(names)
        if unknown:
            raise ValueError(f"unknown properties: {sorted(unknown)}")
    master = np.random.SeedSequence(seed)
    # one child per name in sorted order, so adding a filter does not shift streams
    streams = dict(zip(names, master.spawn(len(names))))
    report = RunReport(f"cxhyp suite --seed {seed} --trials {trials}", seed, trials)
    if trials == 0:
        report.warnings.append("trials=0: every property passes vacuously")
    for name in names:
        if only and name not in only:
            continue
        report.results.append(run_property(name, props[name], streams[name], trials))
    return report
