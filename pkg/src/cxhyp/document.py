"""JSON interchange documents for isometry matrices.

Complex numbers are two-element ``[re, im]`` arrays and matrices are flat
row-major lists of them.  Python's float repr is the shortest string that
round-trips, so parse(serialize(doc)) reproduces every double exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .ball import BallForm, GeneratorData, IsometryMatrix, build_isometry, member_bound, membership_residual
from .errors import CxHypError, NotMember
from .siegel import SiegelForm, SiegelStabilizerElement, stabilizer_build
from .tolerances import max_dim, tol

MODELS = {"ball": BallForm, "siegel": SiegelForm}


class DocumentError(CxHypError, ValueError):
    """Malformed interchange document."""


def _pair(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def encode_array(a) -> list:
    return [_pair(complex(z)) for z in np.asarray(a, dtype=complex).reshape(-1)]


def _unpair(p) -> complex:
    if not (isinstance(p, list) and len(p) == 2 and all(isinstance(x, (int, float)) for x in p)):
        raise DocumentError(f"expected [re, im], got {p!r}")
    re, im = float(p[0]), float(p[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise DocumentError("non-finite entry")
    return complex(re, im)


def decode_array(items, count: int, what: str) -> np.ndarray:
    if not isinstance(items, list) or len(items) != count:
        raise DocumentError(f"{what}: expected {count} entries")
    return np.array([_unpair(p) for p in items], dtype=complex)


@dataclass(frozen=True, eq=False)
class IsometryDocument:
    model: str
    n: int
    matrix: np.ndarray
    generator: dict | None = None

    @property
    def form(self):
        return MODELS[self.model](self.n)

    def member(self) -> IsometryMatrix:
        """The matrix as a checked member of its model's group."""
        return IsometryMatrix.of(self.matrix, self.form)

    def to_json(self) -> dict:
        out = {"model": self.model, "n": self.n, "matrix": encode_array(self.matrix)}
        if self.generator is not None:
            out["generator"] = self.generator
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IsometryDocument):
            return NotImplemented
        return (
            self.model == other.model
            and self.n == other.n
            and np.array_equal(self.matrix, other.matrix)
            and self.generator == other.generator
        )


def from_member(t: IsometryMatrix, generator: dict | None = None) -> IsometryDocument:
    return IsometryDocument(t.form.name, t.n, np.array(t.m), generator)


def ball_generator(theta: float, u, xi) -> dict:
    return {"theta": float(theta), "U": encode_array(u), "xi": encode_array(xi)}


def siegel_generator(lam: complex, u, a_prime, s: complex) -> dict:
    return {"lambda": _pair(complex(lam)), "U": encode_array(u), "a_prime": encode_array(a_prime), "s": _pair(complex(s))}


def _matrix_from_generator(model: str, n: int, g: dict) -> np.ndarray:
    try:
        if model == "ball":
            u = decode_array(g["U"], n * n, "generator.U").reshape(n, n)
            xi = decode_array(g["xi"], n, "generator.xi")
            return build_isometry(GeneratorData(float(g["theta"]), u, xi)).m
        k = n - 1
        u = decode_array(g["U"], k * k, "generator.U").reshape(k, k)
        a = decode_array(g["a_prime"], k, "generator.a_prime")
        el = SiegelStabilizerElement(_unpair(g["lambda"]), u, a, _unpair(g["s"]))
        return stabilizer_build(el).m
    except KeyError as exc:
        raise DocumentError(f"generator is missing {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(f"invalid generator: {exc}") from None


def parse(data: dict | str) -> IsometryDocument:
    """Validate a document (dict or JSON text); raises DocumentError or NotMember."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    model = data.get("model")
    if model not in MODELS:
        raise DocumentError(f"model must be one of {sorted(MODELS)}, got {model!r}")
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DocumentError(f"n must be a positive integer, got {n!r}")
    if n + 1 > max_dim():
        raise DocumentError(f"n = {n} exceeds CXHYP_MAX_DIM")
    generator = data.get("generator")
    if generator is not None and not isinstance(generator, dict):
        raise DocumentError("generator must be an object")
    if "matrix" in data:
        m = decode_array(data["matrix"], (n + 1) ** 2, "matrix").reshape(n + 1, n + 1)
    elif generator is not None:
        m = _matrix_from_generator(model, n, generator)
    else:
        raise DocumentError("document needs a matrix or a generator")
    form = MODELS[model](n)
    res = membership_residual(m, form)
    if not res <= member_bound(m):
        raise NotMember(f"membership residual {res:.3e} exceeds tolerance")
    if generator is not None and "matrix" in data:
        built = _matrix_from_generator(model, n, generator)
        if np.linalg.norm(built - m) > tol().member_tol * max(1.0, np.linalg.norm(m)):
            raise DocumentError("matrix and generator disagree")
    return IsometryDocument(model, n, m, generator)


def load(path: str) -> IsometryDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text)
