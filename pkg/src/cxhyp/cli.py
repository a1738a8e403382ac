"""Command-line interface.

Exit codes: 0 success, 1 property failure, 2 parse error, 3 ambiguous
classification, 4 not a member, 5 unsupported input, 6 generation failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .ball import IsometryMatrix
from .centralizer import commutes
from .classify import Kind, classify, decompose_elliptic, decompose_hyperbolic, fixed_points
from .conjugacy import decide_conjugacy
from .document import DocumentError, IsometryDocument, encode_array, from_member, load
from .errors import CxHypError, NotMember, NotStabilizer, Unsupported
from .forms import INFINITY
from .generate import KINDS, GenerationFailed, generate
from .heisenberg import k_decompose, translation_from_matrix
from .siegel import SiegelForm, to_ball, to_siegel
from .suite import run_suite
from .tolerances import scaled

OK, PROPERTY_FAILURE, PARSE_ERROR, AMBIGUOUS, NOT_MEMBER, UNSUPPORTED, GENERATION_FAILED = range(7)


class Output:
    """Collects a report as ordered (key, value) lines or as one JSON object."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.data: dict = {}

    def put(self, key: str, value) -> None:
        self.data[key] = value

    def emit(self, stream=None) -> None:
        stream = stream or sys.stdout
        if self.as_json:
            stream.write(json.dumps(self.data, sort_keys=True, indent=2) + "\n")
            return
        for key, value in self.data.items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value, sort_keys=True)
            stream.write(f"{key}: {value}\n")


def _fmt(z: complex) -> str:
    z = complex(z) + 0.0  # drop negative zeros
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _point(p):
    if p is INFINITY:
        return "infinity"
    return [_fmt(z) for z in np.asarray(p).reshape(-1)]


def _fixed_point_json(report) -> dict:
    out = {
        "interior": [_point(fp.point) for fp in report.interior_points],
        "boundary": [_point(fp.point) for fp in report.boundary_points],
    }
    if report.note:
        out["note"] = report.note
    return out


def _member(doc: IsometryDocument) -> IsometryMatrix:
    return doc.member()


# ------------------------------------------------------------------ commands


def cmd_classify(args, out: Output) -> int:
    t = _member(load(args.file))
    report = classify(t)
    out.put("kind", str(report.kind))
    out.put("spectral_radius", f"{report.spectral_radius:.12g}")
    out.put("fixed_points", _fixed_point_json(report.evidence))
    return AMBIGUOUS if report.kind is Kind.AMBIGUOUS else OK


def cmd_fixed_points(args, out: Output) -> int:
    report = fixed_points(_member(load(args.file)))
    for key, value in _fixed_point_json(report).items():
        out.put(key, value)
    return OK


def _pair(args) -> tuple[IsometryMatrix, IsometryMatrix]:
    d1, d2 = load(args.file1), load(args.file2)
    if (d1.model, d1.n) != (d2.model, d2.n):
        raise Unsupported("documents differ in model or dimension")
    return _member(d1), _member(d2)


def cmd_conjugacy(args, out: Output) -> int:
    t1, t2 = _pair(args)
    verdict = decide_conjugacy(t1, t2)
    out.put("verdict", "Conjugate" if verdict.conjugate else "NotConjugate")
    out.put("reason", verdict.reason)
    if verdict.conjugate:
        out.put("residual", f"{verdict.residual:.3e}")
        out.put("conjugator", from_member(verdict.conjugator).to_json())
    return OK


def cmd_commute(args, out: Output) -> int:
    t1, t2 = _pair(args)
    ev = commutes(t1, t2)
    out.put("commute", "yes" if ev.verdict else "no")
    out.put("commutator_norm", f"{ev.commutator_norm:.3e}")
    return OK


def cmd_convert(args, out: Output) -> int:
    doc = load(args.file)
    t = _member(doc)
    if doc.model == args.to:
        result = t
    elif args.to == "siegel":
        result = to_siegel(t)
    else:
        result = to_ball(t)
    for key, value in from_member(result).to_json().items():
        out.put(key, value)
    return OK


def _block(m: np.ndarray) -> dict:
    return {"shape": list(m.shape), "entries": encode_array(m)}


def cmd_decompose(args, out: Output) -> int:
    doc = load(args.file)
    t = _member(doc)
    if isinstance(t.form, SiegelForm):
        try:
            h = translation_from_matrix(t)
        except NotStabilizer:
            h = None
        if h is not None:
            k = k_decompose(h)
            out.put("kind", "parabolic")
            out.put("k_dimension", len(k.k_basis))
            out.put("minpoly_degree", k.minpoly_degree)
            out.put("k_dagger_dimension", len(k.k_dagger_basis))
            out.put("k_dagger", k.k_dagger_note)
            return OK
        t = to_ball(t)
    kind = classify(t).kind
    if kind.is_elliptic:
        d = decompose_elliptic(t)
    elif kind is Kind.HYPERBOLIC:
        d = decompose_hyperbolic(t)
    else:
        raise Unsupported(f"no decomposition for a {kind} element in this model")
    out.put("kind", str(kind))
    out.put("m_dimension", len(d.m_basis))
    out.put("t1", _block(d.t1))
    out.put("t1_eigenvalues", [_fmt(z) for z in sorted(np.linalg.eigvals(d.t1), key=lambda z: (-abs(z), z.real, z.imag))])
    out.put("m_dagger_dimension", len(d.m_dagger_basis))
    out.put("t2", _block(d.t2))
    return OK


def cmd_generate(args, out: Output) -> int:
    if args.n < 1:
        raise Unsupported("n must be at least 1")
    doc = generate(args.kind, args.n, np.random.default_rng(args.seed))
    for key, value in doc.to_json().items():
        out.put(key, value)
    return OK


def cmd_suite(args, out: Output) -> int:
    report = run_suite(seed=args.seed, trials=args.trials, inject_failure=args.inject_failure)
    if out.as_json:
        for key, value in report.to_json().items():
            out.put(key, value)
    else:
        sys.stdout.write(report.to_text())
    return OK if report.passed else PROPERTY_FAILURE


# -------------------------------------------------------------------- parser


def _common() -> argparse.ArgumentParser:
    # SUPPRESS defaults let these flags appear before or after the verb
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol-scale", type=float, default=argparse.SUPPRESS, help="multiply every tolerance")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="master random seed")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="cxhyp", parents=[common],
                                     description="Isometries of complex hyperbolic space.")
    sub = parser.add_subparsers(dest="command", required=True)

    def verb(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    verb("classify", cmd_classify, "kind, spectral radius and fixed points").add_argument("file")
    p = verb("conjugacy", cmd_conjugacy, "decide conjugacy and emit a conjugator")
    p.add_argument("file1")
    p.add_argument("file2")
    p = verb("commute", cmd_commute, "check whether two elements commute")
    p.add_argument("file1")
    p.add_argument("file2")
    verb("fixed-points", cmd_fixed_points, "interior and boundary fixed points").add_argument("file")
    p = verb("convert", cmd_convert, "convert between ball and Siegel models")
    p.add_argument("file")
    p.add_argument("--to", choices=["ball", "siegel"], required=True)
    verb("decompose", cmd_decompose, "invariant subspace decomposition").add_argument("file")
    p = verb("generate", cmd_generate, "random element of a given kind")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p = verb("suite", cmd_suite, "run the property suites")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--inject-failure", action="store_true", help="add a property that always fails")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return PARSE_ERROR if exc.code else OK
    args.seed = getattr(args, "seed", 0)
    args.json = getattr(args, "json", False)
    factor = getattr(args, "tol_scale", 1.0)
    out = Output(args.json)
    start = time.perf_counter()
    try:
        if not factor > 0:
            raise Unsupported("--tol-scale must be positive")
        with scaled(factor):
            code = args.func(args, out)
    except DocumentError as exc:
        code, message = PARSE_ERROR, str(exc)
    except NotMember as exc:
        code, message = NOT_MEMBER, str(exc)
    except GenerationFailed as exc:
        code, message = GENERATION_FAILED, str(exc)
    except (Unsupported, CxHypError, ValueError) as exc:
        code, message = UNSUPPORTED, f"{type(exc).__name__}: {exc}"
    else:
        message = None
    if message is not None:
        out.put("error", message)
        out.put("exit_code", code)
    out.emit()
    sys.stderr.write(f"wall time {time.perf_counter() - start:.3f} s\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
