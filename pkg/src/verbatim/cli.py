"""Command-line front end.

Exit codes: 0 success or pass, 1 property violated (witness printed as
JSON), 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import convexity, language, radius, structure
from .errors import NotPythagoreanError, PreconditionError, VerbatimError
from .linalg import matrix_from_json, matrix_to_json, tuple_from_json


EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _load(path: str, loader):
    data = _read_json(path)
    try:
        return loader(data)
    except VerbatimError as exc:
        raise InputError(f"{path}: {exc}") from None


def _spec(path):
    return _load(path, language.load_language)


def _matrix(path):
    return _load(path, matrix_from_json)


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2) + "\n"
    if args.out and args.out != "-":
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_side(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_lang_check(args) -> int:
    L = _spec(args.spec)
    report = structure.check_pythagorean(L, args.max_len)
    _emit(args, report.to_json())
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_lang_enumerate(args) -> int:
    L = _spec(args.spec)
    words = L.words(args.max_len)
    counts = [0] * (args.max_len + 1)
    for w in words:
        counts[len(w)] += 1
    out = {"max_len": args.max_len, "total": len(words), "counts_by_length": counts}
    if not args.counts_only:
        out["words"] = [L.word(w).names for w in words]
    _emit(args, out)
    return EXIT_OK


def cmd_lang_graph(args) -> int:
    L = _spec(args.spec)
    try:
        g = structure.chromatic_graph(L, args.depth)
    except NotPythagoreanError as exc:
        _emit(args, {"refused": str(exc), "report": exc.report.to_json()})
        return EXIT_VIOLATION
    _emit(args, g.to_json())
    return EXIT_OK


def cmd_hankel(args) -> int:
    L = _spec(args.spec)
    H = convexity.hankel(L, args.K)
    ev = H.eigenvalues()
    res = H.is_psd(args.tol)
    out = {"K": args.K, "size": len(H.index), "psd": bool(res.is_psd), "min_eig": float(ev[0])}
    if args.eigs:
        out["eigenvalues"] = [float(x) for x in ev]
    if args.csv:
        _write_side(args.csv, H.to_csv())
    _emit(args, out)
    return EXIT_OK if res.is_psd else EXIT_VIOLATION


def cmd_midpoint(args) -> int:
    L = _spec(args.spec)
    report = convexity.midpoint_convexity_test(L, args.degree, args.dim, args.samples,
                                               args.radius, args.seed)
    out = report.to_json()
    out["seed"] = args.seed
    _emit(args, out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_realize(args) -> int:
    L = _spec(args.spec)
    try:
        g = structure.chromatic_graph(L, args.depth)
        R = convexity.build_realization(g, L)
    except NotPythagoreanError as exc:
        _emit(args, {"refused": str(exc), "report": exc.report.to_json()})
        return EXIT_VIOLATION
    _emit(args, R.to_json())
    return EXIT_OK


def cmd_eval(args) -> int:
    if (args.realization is None) == (args.spec is None):
        raise InputError("eval needs exactly one of --realization or --spec")
    if args.realization is not None:
        R = _load(args.realization, convexity.Realization.from_json)
        X = _load(args.tuple, lambda d: tuple_from_json(R.alphabet, d))
        value = convexity.eval_realization(R, X)
    else:
        if args.degree is None:
            raise InputError("eval --spec needs --degree")
        L = _spec(args.spec)
        X = _load(args.tuple, lambda d: tuple_from_json(L.alphabet, d))
        value = convexity.eval_series(L, args.degree, X)
    _emit(args, matrix_to_json(value))
    return EXIT_OK


def cmd_radius_estimate(args) -> int:
    A = _matrix(args.matrix)
    series = radius.gelfand_estimate(A, args.mmax)
    if args.csv:
        _write_side(args.csv, series.to_csv())
    _emit(args, series.to_json())
    return EXIT_OK


def cmd_radius_oracle(args) -> int:
    A = _matrix(args.matrix)
    _emit(args, {"numerical_radius": radius.numerical_radius(A, args.tol), "tol": args.tol})
    return EXIT_OK


def _certificate_exit(args, cert) -> int:
    out = cert.to_json()
    ok = cert.residual <= args.cert_tol and cert.adjoint_block_min_eig >= -args.cert_tol
    out["verdict"] = "pass" if ok else "fail"
    _emit(args, out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_ando(args) -> int:
    Z = _matrix(args.matrix)
    try:
        cert = radius.ando_fixed_point(Z, args.iters, args.tol)
    except PreconditionError as exc:
        _emit(args, {"refused": str(exc), "measured": exc.measured})
        return EXIT_VIOLATION
    return _certificate_exit(args, cert)


def cmd_amt(args) -> int:
    Z = _matrix(args.z)
    X = _matrix(args.x)
    try:
        cert = radius.amt_fixed_point(Z, X, args.iters, args.tol)
    except PreconditionError as exc:
        _emit(args, {"refused": str(exc), "measured": exc.measured})
        return EXIT_VIOLATION
    return _certificate_exit(args, cert)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON result here instead of stdout")

    p = argparse.ArgumentParser(prog="verbatim", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    lang = sub.add_parser("lang", help="language checks, enumeration and graphs")
    lsub = lang.add_subparsers(dest="action", required=True)
    c = lsub.add_parser("check", parents=[common], help="self-adjointness and Pythagorean check")
    c.add_argument("--spec", required=True)
    c.add_argument("--max-len", type=int, required=True)
    c.set_defaults(func=cmd_lang_check)
    c = lsub.add_parser("enumerate", parents=[common], help="list words up to a length")
    c.add_argument("--spec", required=True)
    c.add_argument("--max-len", type=int, required=True)
    c.add_argument("--counts-only", action="store_true")
    c.set_defaults(func=cmd_lang_enumerate)
    c = lsub.add_parser("graph", parents=[common], help="emit the chromatic graph")
    c.add_argument("--spec", required=True)
    c.add_argument("--depth", type=int, required=True)
    c.set_defaults(func=cmd_lang_graph)

    cx = sub.add_parser("convexity", help="Hankel positivity and midpoint sampling")
    csub = cx.add_subparsers(dest="action", required=True)
    c = csub.add_parser("hankel", parents=[common])
    c.add_argument("--spec", required=True)
    c.add_argument("--K", type=int, required=True)
    c.add_argument("--eigs", action="store_true", help="include the full spectrum")
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--csv", help="also export the matrix as CSV ('-' for stdout)")
    c.set_defaults(func=cmd_hankel)
    c = csub.add_parser("midpoint", parents=[common])
    c.add_argument("--spec", required=True)
    c.add_argument("--degree", type=int, required=True)
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--samples", type=int, required=True)
    c.add_argument("--radius", type=float, required=True)
    c.add_argument("--seed", type=int, required=True)
    c.set_defaults(func=cmd_midpoint)

    c = sub.add_parser("realize", parents=[common], help="emit the butterfly realization")
    c.add_argument("--spec", required=True)
    c.add_argument("--depth", type=int, required=True)
    c.set_defaults(func=cmd_realize)

    c = sub.add_parser("eval", parents=[common], help="evaluate a realization or a truncated series")
    c.add_argument("--realization")
    c.add_argument("--spec")
    c.add_argument("--degree", type=int)
    c.add_argument("--tuple", required=True)
    c.set_defaults(func=cmd_eval)

    rad = sub.add_parser("radius", help="numerical radius")
    rsub = rad.add_subparsers(dest="action", required=True)
    c = rsub.add_parser("estimate", parents=[common], help="irreducible-Dyck polynomial estimate")
    c.add_argument("--matrix", required=True)
    c.add_argument("--mmax", type=int, required=True)
    c.add_argument("--csv", help="write the convergence series as CSV ('-' for stdout)")
    c.set_defaults(func=cmd_radius_estimate)
    c = rsub.add_parser("oracle", parents=[common], help="field-of-values maximization")
    c.add_argument("--matrix", required=True)
    c.add_argument("--tol", type=float, default=1e-10)
    c.set_defaults(func=cmd_radius_oracle)

    for name, func in (("ando", cmd_ando), ("amt", cmd_amt)):
        c = sub.add_parser(name, parents=[common], help=f"{name.upper()} fixed-point certificate")
        if name == "ando":
            c.add_argument("--matrix", required=True)
        else:
            c.add_argument("--z", required=True)
            c.add_argument("--x", required=True)
        c.add_argument("--iters", type=int, default=10000)
        c.add_argument("--tol", type=float, default=1e-13)
        c.add_argument("--cert-tol", type=float, default=1e-8)
        c.set_defaults(func=func)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (VerbatimError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
