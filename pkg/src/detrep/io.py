"""JSON files for polynomials and representations.

Complex numbers are stored as ``[re, im]`` pairs of plain JSON floats, so
``parse(serialize(x))`` reproduces every finite double exactly.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import InputError, SizeMismatch
from .poly import BiPoly, UniPoly
from .realzero import RealBiPoly

POLY_KINDS = ("bivariate_complex", "bivariate_real", "univariate_complex")
REP_KINDS = ("detrep", "rzrep", "doubled")


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _unpair(v, where: str) -> complex:
    if (not isinstance(v, (list, tuple)) or len(v) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)):
        raise InputError(f"{where}: expected a [re, im] pair, got {v!r}")
    return complex(float(v[0]), float(v[1]))


def _real(v, where: str) -> float:
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise InputError(f"{where}: expected a number, got {v!r}")
    return float(v)


def complex_array_to_json(a) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return _pair(a)
    return [complex_array_to_json(x) for x in a]


def complex_array_from_json(v, ndim: int, where: str) -> np.ndarray:
    def walk(x, depth, path):
        if depth == 0:
            return _unpair(x, path)
        if not isinstance(x, list):
            raise InputError(f"{path}: expected a list")
        return [walk(y, depth - 1, f"{path}[{k}]") for k, y in enumerate(x)]

    out = walk(v, ndim, where)
    try:
        arr = np.array(out, dtype=complex)
    except ValueError as exc:
        raise InputError(f"{where}: ragged array") from exc
    if arr.ndim != ndim:
        raise InputError(f"{where}: ragged array")
    return arr


def real_array_from_json(v, ndim: int, where: str) -> np.ndarray:
    def walk(x, depth, path):
        if depth == 0:
            return _real(x, path)
        if not isinstance(x, list):
            raise InputError(f"{path}: expected a list")
        return [walk(y, depth - 1, f"{path}[{k}]") for k, y in enumerate(x)]

    try:
        arr = np.array(walk(v, ndim, where), dtype=float)
    except ValueError as exc:
        raise InputError(f"{where}: ragged array") from exc
    if arr.ndim != ndim:
        raise InputError(f"{where}: ragged array")
    return arr


def _finite(x):
    """JSON-safe float: non-finite values become strings."""
    x = float(x)
    return x if math.isfinite(x) else str(x)


# ---------------------------------------------------------------- polynomials

def poly_to_json(p) -> dict:
    if isinstance(p, RealBiPoly):
        c = p.coeffs
        return {"kind": "bivariate_real", "bidegree": [c.shape[0] - 1, c.shape[1] - 1],
                "coeffs": c.tolist()}
    if isinstance(p, UniPoly):
        return {"kind": "univariate_complex", "degree": int(p.coeffs.size - 1),
                "coeffs": complex_array_to_json(p.coeffs)}
    if isinstance(p, BiPoly):
        n1, n2 = p.bidegree
        return {"kind": "bivariate_complex", "bidegree": [n1, n2],
                "coeffs": complex_array_to_json(p.coeffs)}
    raise TypeError(f"cannot serialize {type(p).__name__}")


def poly_from_json(doc) -> BiPoly | RealBiPoly | UniPoly:
    if not isinstance(doc, dict):
        raise InputError("polynomial file must hold a JSON object")
    kind = doc.get("kind")
    if kind not in POLY_KINDS:
        raise InputError(f"unknown polynomial kind {kind!r}")
    if "coeffs" not in doc:
        raise InputError("missing 'coeffs'")
    if kind == "univariate_complex":
        c = complex_array_from_json(doc["coeffs"], 1, "coeffs")
        deg = doc.get("degree", c.size - 1)
        if deg != c.size - 1:
            raise InputError(f"declared degree {deg} does not match {c.size} coefficients")
        return UniPoly(c, trim=False)
    if kind == "bivariate_real":
        c = real_array_from_json(doc["coeffs"], 2, "coeffs")
    else:
        c = complex_array_from_json(doc["coeffs"], 2, "coeffs")
    bideg = doc.get("bidegree", [c.shape[0] - 1, c.shape[1] - 1])
    if list(bideg) != [c.shape[0] - 1, c.shape[1] - 1]:
        raise InputError(f"declared bidegree {bideg} does not match grid shape {c.shape}")
    if kind == "bivariate_real":
        return RealBiPoly(c, tol=0.0)
    return BiPoly(c, trim=False)


# ------------------------------------------------------------ representations

def detrep_to_json(rep, seed: int | None = None, tol: float | None = None) -> dict:
    K = np.asarray(rep.K)
    sv = np.linalg.svd(K, compute_uv=False) if K.size else np.zeros(0)
    diag = {"norm": _finite(rep.norm), "max_eval_error": _finite(rep.max_eval_error),
            "singular_values": [_finite(s) for s in sv], "route": rep.route,
            "seed": seed, "tol": tol}
    extra = {k: _finite(v) if isinstance(v, (float, np.floating)) else v
             for k, v in rep.info.items() if isinstance(v, (int, float, str, bool, list))}
    if extra:
        diag["info"] = extra
    return {"kind": "detrep", "n": list(rep.n), "K": complex_array_to_json(K),
            "diagnostics": diag}


def rzrep_to_json(rep, seed: int | None = None, tol: float | None = None) -> dict:
    sv = np.concatenate([np.linalg.eigvalsh(rep.A1), np.linalg.eigvalsh(rep.A2)])
    diag = {"max_eval_error": _finite(rep.max_eval_error), "backend": rep.backend,
            "eigenvalues_A1": [_finite(x) for x in sv[: rep.d]],
            "eigenvalues_A2": [_finite(x) for x in sv[rep.d:]],
            "seed": seed, "tol": tol}
    return {"kind": "rzrep", "d": int(rep.d), "A1": complex_array_to_json(rep.A1),
            "A2": complex_array_to_json(rep.A2), "diagnostics": diag}


def doubled_to_json(alpha1, alpha2, max_eval_error: float, backend: str,
                    seed: int | None = None, tol: float | None = None) -> dict:
    diag = {"max_eval_error": _finite(max_eval_error), "backend": backend,
            "seed": seed, "tol": tol}
    return {"kind": "doubled", "d": int(alpha1.shape[0]),
            "alpha1": np.asarray(alpha1, dtype=float).tolist(),
            "alpha2": np.asarray(alpha2, dtype=float).tolist(), "diagnostics": diag}


def _square(M, size, name):
    if M.ndim != 2 or M.shape != (size, size):
        raise SizeMismatch(f"{name} has shape {M.shape}, expected {(size, size)}")
    return M


def rep_from_json(doc) -> dict:
    """Parse a representation file into ``{"kind", matrices..., "diagnostics"}``."""
    if not isinstance(doc, dict):
        raise InputError("representation file must hold a JSON object")
    kind = doc.get("kind")
    if kind not in REP_KINDS:
        raise InputError(f"unknown representation kind {kind!r}")
    diag = doc.get("diagnostics")
    if not isinstance(diag, dict):
        raise InputError("missing diagnostics")
    if kind == "detrep":
        n = doc.get("n")
        if not (isinstance(n, list) and len(n) == 2 and all(isinstance(x, int) for x in n)):
            raise InputError("'n' must be a pair of integers")
        K = complex_array_from_json(doc.get("K"), 2, "K") if doc.get("K") else \
            np.zeros((0, 0), dtype=complex)
        return {"kind": kind, "n": tuple(n), "K": _square(K, sum(n), "K"), "diagnostics": diag}
    d = doc.get("d")
    if not isinstance(d, int):
        raise InputError("'d' must be an integer")
    if kind == "rzrep":
        A1 = _square(complex_array_from_json(doc.get("A1"), 2, "A1"), d, "A1")
        A2 = _square(complex_array_from_json(doc.get("A2"), 2, "A2"), d, "A2")
        return {"kind": kind, "d": d, "A1": A1, "A2": A2, "diagnostics": diag}
    a1 = _square(real_array_from_json(doc.get("alpha1"), 2, "alpha1"), d, "alpha1")
    a2 = _square(real_array_from_json(doc.get("alpha2"), 2, "alpha2"), d, "alpha2")
    return {"kind": kind, "d": d, "A1": a1, "A2": a2, "diagnostics": diag}


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
