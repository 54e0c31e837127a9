"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 numerical
or pipeline failure.  Reports and error objects are JSON on stdout.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io
from ._kernels import pencil_values
from .bidisk import (DetRep, represent_contractive, represent_unitary,
                     verify_detrep)
from .errors import DetrepError, InputError, NotRealZero, SizeMismatch
from .poly import BiPoly, UniPoly
from .realzero import (RealBiPoly, pencil_error, realsym_2x2, represent_hermitian,
                       square_double, verification_grid)
from .stability import (knese_check, scattering_schur_test, self_reversive_test,
                        semistability, stability_radius)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class CliFailure(Exception):
    def __init__(self, code, payload):
        super().__init__(payload.get("message", ""))
        self.code = code
        self.payload = payload


def _emit(doc, out=None):
    text = io.dumps(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(exc, stage, code=None):
    # a polynomial that fails the real-zero test parses fine; the failure is numerical
    if code is None:
        code = EXIT_INPUT if isinstance(exc, (InputError, ValueError)) else EXIT_NUMERIC
    if isinstance(exc, NotRealZero):
        code = EXIT_NUMERIC
    payload = {"error": type(exc).__name__, "message": str(exc), "stage": stage}
    witness = getattr(exc, "witness", None)
    if witness is not None:
        payload["witness"] = _jsonable(witness)
    return CliFailure(code, payload)


def _jsonable(x):
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (tuple, list, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    return str(x)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("DETREP_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"DETREP_SEED must be an integer, got {env!r}") from exc


def _load_poly(path):
    return io.poly_from_json(io.load(path))


def _as_bipoly(p) -> BiPoly:
    if isinstance(p, UniPoly):
        return BiPoly(p.coeffs[:, None], trim=False)
    if isinstance(p, RealBiPoly):
        return BiPoly(p.coeffs, trim=False)
    return p


# ------------------------------------------------------------------ commands

def cmd_analyze(args):
    p = BiPoly(_as_bipoly(_load_poly(args.input)).coeffs)
    if p.constant == 0:
        raise InputError("constant term must be nonzero")
    report = {"bidegree": list(p.bidegree)}
    v = semistability(p, grid=args.grid)
    report["class"] = v.status
    report["margin"] = io._finite(v.margin)
    if args.radius and not p.is_constant:
        r = stability_radius(p, tol=args.tol)
        report["radius"] = r.s
        report["radius_tol"] = r.tol
    if not p.is_constant:
        sr = self_reversive_test(p)
        report["self_reversive"] = sr.flag
        report["alpha"] = [sr.alpha.real, sr.alpha.imag] if sr.flag else None
        report["corner_unimodular"] = sr.corner_unimodular
        if v.is_semistable and p.bidegree[1] > 0 and p.bidegree[0] > 0:
            report["scattering_schur"] = scattering_schur_test(p)
    if args.knese:
        k = knese_check(p)
        report["knese"] = {"c": k.c, "holds": k.holds, "worst_slack": k.worst_slack}
    _emit(report)
    return EXIT_OK


def cmd_represent(args):
    seed = _seed(args)
    p = _load_poly(args.input)
    if not isinstance(p, BiPoly):
        raise InputError("represent needs a bivariate_complex polynomial")
    if abs(p.constant - 1.0) > 1e-12:
        raise InputError(f"constant term must be 1, got {p.constant}")
    stage = "represent_unitary" if args.unitary else "represent_contractive"
    try:
        if args.unitary:
            rep = represent_unitary(p, tol=args.tol, seed=seed)
        else:
            rep = represent_contractive(p, tol=args.tol, seed=seed)
    except DetrepError as exc:
        # the input passed its guards, so any rejection here is a pipeline verdict
        raise _fail(exc, stage, EXIT_NUMERIC) from exc
    report = verify_detrep(p, rep)
    rep = DetRep(rep.n, rep.K, rep.norm, report.max_error, rep.route, rep.info)
    _emit(io.detrep_to_json(rep, seed=seed, tol=args.tol), args.output)
    return EXIT_OK if report.max_error <= args.tol else EXIT_VERIFY


def cmd_realzero(args):
    seed = _seed(args)
    p = _load_poly(args.input)
    if not isinstance(p, RealBiPoly):
        raise InputError("realzero needs a bivariate_real polynomial")
    try:
        rep = represent_hermitian(p, backend=args.backend, tol=args.tol, seed=seed)
        if args.realsym2:
            rep = realsym_2x2(rep)
    except DetrepError as exc:
        raise _fail(exc, "represent_hermitian") from exc
    err = pencil_error(p, rep.A1, rep.A2)
    if args.square:
        a1, a2 = square_double(rep)
        err = _doubled_error(p, a1, a2)
        _emit(io.doubled_to_json(a1, a2, err, rep.backend, seed=seed, tol=args.tol),
              args.output)
    else:
        rep = type(rep)(rep.d, rep.A1, rep.A2, err, rep.backend, rep.info)
        _emit(io.rzrep_to_json(rep, seed=seed, tol=args.tol), args.output)
    return EXIT_OK if err <= args.tol else EXIT_VERIFY


def _doubled_error(p, a1, a2, size=32):
    x1, x2 = verification_grid(size)
    return float(np.max(np.abs(pencil_values(a1, a2, x1, x2) - p(x1, x2) ** 2)))


def cmd_verify(args):
    p = _load_poly(args.poly)
    doc = io.rep_from_json(io.load(args.rep))
    tol = doc["diagnostics"].get("tol")
    tol = args.tol if args.tol is not None else (tol if isinstance(tol, (int, float)) else 1e-6)
    if doc["kind"] == "detrep":
        bp = _as_bipoly(p)
        K, n = doc["K"], doc["n"]
        rep = DetRep(n, K, float(np.linalg.norm(K, 2)) if K.size else 0.0,
                     float("nan"), "pipeline")
        r = verify_detrep(bp, rep, grid=args.grid)
        report = {"kind": "detrep", "max_error": r.max_error, "norm": r.norm,
                  "singular_values": r.singular_values.tolist(),
                  "unitarity_distance": r.unitarity_distance, "points": r.points,
                  "tol": tol}
        err = r.max_error
    else:
        if not isinstance(p, RealBiPoly):
            raise InputError("pencil files pair with bivariate_real polynomials")
        d = p.total_degree * (2 if doc["kind"] == "doubled" else 1)
        if doc["d"] != d:
            raise SizeMismatch(f"pencil size {doc['d']} does not match degree {d}")
        if doc["kind"] == "rzrep":
            err = pencil_error(p, doc["A1"], doc["A2"], args.grid)
        else:
            err = _doubled_error(p, doc["A1"], doc["A2"], args.grid)
        report = {"kind": doc["kind"], "max_error": err, "tol": tol}
    report["passed"] = bool(err <= tol)
    _emit(report)
    return EXIT_OK if err <= tol else EXIT_VERIFY


def _selftest_cases():
    s = np.sqrt(0.15)

    def contractive():
        p = BiPoly.from_terms({(0, 0): 1, (1, 0): 0.3, (0, 1): 0.5})
        rep = represent_contractive(p, normalize=False)
        ev = np.sort_complex(np.linalg.eigvals(rep.K))
        ref = np.sort_complex(np.linalg.eigvals(np.array([[-0.3, s], [s, -0.5]])))
        return rep.max_eval_error <= 1e-8 and np.max(np.abs(ev - ref)) <= 1e-7

    def unitary():
        p = BiPoly.from_terms({(0, 0): 1, (1, 1): -1, (2, 0): -0.5, (0, 2): -0.5, (2, 2): 1})
        K = np.array([[0, 1, 0, 1], [1, 0, -1, 0], [0, -1, 0, 1], [1, 0, 1, 0]]) / np.sqrt(2)
        exact = verify_detrep(p, DetRep((2, 2), K, 1.0, 0.0, "unitary_sos"))
        rep = represent_unitary(p)
        sv = np.linalg.svd(rep.K, compute_uv=False)
        return (exact.max_error <= 1e-12 and rep.max_eval_error <= 1e-6
                and np.max(np.abs(sv - 1)) <= 1e-6)

    def hermitian():
        p = RealBiPoly.from_terms({(0, 0): 1, (0, 1): 10, (1, 0): 4, (0, 2): -1,
                                   (1, 1): -2, (2, 0): -1})
        rep = represent_hermitian(p)
        spec = np.linalg.eigvalsh(rep.A1)
        ref = np.array([2 - np.sqrt(5), 2 + np.sqrt(5)])
        return rep.max_eval_error <= 1e-8 and np.max(np.abs(spec - ref)) <= 1e-7

    return [("contractive 1+0.3z1+0.5z2", contractive),
            ("unitary self-reversive (2,2)", unitary),
            ("hermitian pencil 1+4x+10y-x^2-2xy-y^2", hermitian)]


def cmd_selftest(args):
    ok = True
    for name, fn in _selftest_cases():
        try:
            passed = bool(fn())
        except DetrepError as exc:
            passed = False
            name = f"{name} ({type(exc).__name__})"
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
    return EXIT_OK if ok else EXIT_VERIFY


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="detrep",
                                 description="Determinantal representations of "
                                             "bivariate polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="stability report for a polynomial")
    a.add_argument("input")
    a.add_argument("--radius", action="store_true", help="compute the stability radius")
    a.add_argument("--tol", type=float, default=1e-8, help="radius bisection tolerance")
    a.add_argument("--knese", action="store_true")
    a.add_argument("--grid", type=int, default=512)
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("represent", help="det(I - K Z) representation")
    r.add_argument("input")
    r.add_argument("--unitary", action="store_true")
    r.add_argument("--tol", type=float, default=1e-6)
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_represent)

    z = sub.add_parser("realzero", help="det(I + x1 A1 + x2 A2) representation")
    z.add_argument("input")
    z.add_argument("--backend", choices=("hermite", "bezoutian"), default="hermite")
    z.add_argument("--realsym2", action="store_true")
    z.add_argument("--square", action="store_true")
    z.add_argument("--tol", type=float, default=1e-6)
    z.add_argument("--seed", type=int, default=None)
    z.add_argument("-o", "--output")
    z.set_defaults(func=cmd_realzero)

    v = sub.add_parser("verify", help="check a representation file against a polynomial")
    v.add_argument("poly")
    v.add_argument("rep")
    v.add_argument("--grid", type=int, default=32)
    v.add_argument("--tol", type=float, default=None)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", help="run the worked-example regressions")
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliFailure as exc:
        _emit(exc.payload)
        return exc.code
    except DetrepError as exc:
        _emit(_fail(exc, args.command).payload)
        return _fail(exc, args.command).code
    except ValueError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc), "stage": args.command})
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
