"""Command-line front end: ncspaces {check, reduce, dims, clifford, koszul, make}.

Exit status 0 means every requested check passed, 1 means a check failed
(the report is still written), 2 means bad usage or unreadable input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .algebra import NonConfluentError, check_confluence, dual_presentation, graded_dimensions, presentation_from_R
from .clifford import clifford_summary
from .conditions import run_suite, suite_passed
from .families import build_theta_deformation, classical_R, quaternionic_R, simplified_quaternionic_R, theta_R
from .koszul import KOSZUL_CAP, homology_summary, is_acyclic, koszul_homology_low
from .reduction import DEFAULT_SEED, ReductionError, reduce_R
from .rmatrix import SchemaError, dump_rmatrix, load_rmatrix
from .scalars import DEFAULT_TOL


class UsageError(Exception):
    pass


def _number(text: str):
    """'3/5' or '2' -> exact Fraction; anything with a decimal point or exponent -> float."""
    t = text.strip()
    try:
        if any(ch in t.lower() for ch in ".e") and "/" not in t:
            return float(t)
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a number: {text!r}") from exc


def _vector(text: str) -> list:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != 3:
        raise UsageError(f"expected three comma-separated components, got {text!r}")
    return [_number(p) for p in parts]


def _read_R(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return load_rmatrix(text)
    except SchemaError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _emit(args, payload, text_lines: list[str]) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        out = "\n".join(text_lines) + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _report_line(rep: dict) -> str:
    if rep["passed"]:
        return f"{rep['condition']}: pass"
    wit = ", ".join(str(w) for w in rep["witness"])
    return f"{rep['condition']}: FAIL at ({wit}) residual {rep['residual']:.6g}"


def _tol(args) -> float | None:
    return args.tol


# subcommands

def cmd_check(args) -> int:
    R = _read_R(args.file)
    reports = run_suite(R, _tol(args))
    payload = {"n1": R.n1, "n2": R.n2, "backend": R.backend.value,
               "reports": [r.to_dict() for r in reports], "passed": suite_passed(reports)}
    _emit(args, payload, [_report_line(r.to_dict()) for r in reports])
    return 0 if payload["passed"] else 1


def cmd_reduce(args) -> int:
    R = _read_R(args.file)
    try:
        C = reduce_R(R, args.seed, args.tol or 1e-9)
    except ReductionError as exc:
        payload = {"passed": False, "error": str(exc),
                   "report": exc.report.to_dict() if exc.report else None}
        _emit(args, payload, [f"reduction refused: {exc}"])
        return 1
    payload = C.to_dict()
    payload["passed"] = True
    lines = [f"k1 = {C.k1}, k2 = {C.k2}"]
    for m1, row in enumerate(payload["theta"]):
        for m2, t in enumerate(row):
            lines.append(f"theta[{m1 + 1}][{m2 + 1}] = {t:.12f}")
    lines.append(f"eps = {payload['eps']}")
    lines.append(f"seed = {C.seed}")
    _emit(args, payload, lines)
    return 0


def cmd_dims(args) -> int:
    R = _read_R(args.file)
    tol = args.tol or DEFAULT_TOL
    P = presentation_from_R(R, tol)
    D = dual_presentation(R, tol)
    d = 6 if args.max_degree is None else args.max_degree
    try:
        primal = graded_dimensions(P, d, cap=args.cap)
        dual = graded_dimensions(D, max(d, R.n + 1), cap=None)
    except NonConfluentError as exc:
        payload = {"passed": False, "confluence": exc.report.to_dict()}
        _emit(args, payload, [_report_line(exc.report.to_dict())])
        return 1
    payload = {"passed": True, "relations": P.relation_count, "dual_relations": D.relation_count,
               "primal": primal.to_list(), "dual": dual.to_list(),
               "confluence": check_confluence(P).to_dict()}
    _emit(args, payload, [f"primal: {primal.to_list()}", f"dual: {dual.to_list()}"])
    return 0


def cmd_clifford(args) -> int:
    R = _read_R(args.file)
    try:
        summary = clifford_summary(R, args.tol or DEFAULT_TOL)
    except (ValueError, NonConfluentError) as exc:
        _emit(args, {"passed": False, "error": str(exc)}, [f"clifford refused: {exc}"])
        return 1
    ok = (summary["dimension"] == summary["expected"] and summary["pbw"]["passed"]
          and summary["theta_x_identity"]["passed"] and summary["gamma_x_identity"]["passed"]
          and summary["orthogonality"]["passed"])
    summary["passed"] = ok
    lines = [f"dimension = {summary['dimension']} (2^{summary['n']} = {summary['expected']})"]
    lines += [_report_line(summary[k]) for k in ("pbw", "orthogonality", "theta_x_identity", "gamma_x_identity")]
    _emit(args, summary, lines)
    return 0 if ok else 1


def cmd_koszul(args) -> int:
    R = _read_R(args.file)
    d = 5 if args.max_degree is None else args.max_degree
    if d > KOSZUL_CAP:
        raise UsageError(f"--max-degree {d} exceeds the Koszul cap {KOSZUL_CAP}")
    groups = koszul_homology_low(R, d, tol=args.tol or DEFAULT_TOL)
    ok = is_acyclic(groups)
    payload = {"passed": ok, "max_total_degree": d, "groups": [g.to_dict() for g in groups],
               "summary": [list(p) for p in homology_summary(groups)]}
    lines = [f"H_{n}: total dimension {dim}" for n, dim in homology_summary(groups)]
    lines.append("acyclic in positive degree" if ok else "nonzero homology found")
    _emit(args, payload, lines)
    return 0 if ok else 1


def cmd_make(args) -> int:
    kind = args.kind
    if kind == "classical":
        R = classical_R(args.n1, args.n2)
    elif kind == "theta":
        R = theta_R(_number(args.cos), _number(args.sin))
    elif kind == "quaternionic":
        R = quaternionic_R(_number(args.u), _vector(args.v1), _vector(args.v2))
    elif kind == "quaternionic-simple":
        R = simplified_quaternionic_R(_number(args.u0), _number(args.u1), _number(args.u2))
    else:
        theta = json.loads(args.theta) if args.theta else None
        eps = json.loads(args.eps) if args.eps else None
        R = build_theta_deformation(args.n1, args.n2, args.k1, args.k2, theta, eps)
    text = dump_rmatrix(R)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="tolerance for the approx backend")
    common.add_argument("--max-degree", type=int, default=None, help="degree bound for dims/koszul")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for all randomized steps")
    common.add_argument("--format", choices=("text", "json"), default="json")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="ncspaces", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, helptext in (("check", cmd_check, "run the condition suite"),
                               ("reduce", cmd_reduce, "canonical form, theta and eps invariants"),
                               ("dims", cmd_dims, "graded dimensions of A_R and its dual"),
                               ("clifford", cmd_clifford, "Clifford algebra dimension, PBW, identities"),
                               ("koszul", cmd_koszul, "low-degree Koszul homology")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file", help="R-matrix interchange file")
        if name == "dims":
            p.add_argument("--cap", type=int, default=None, help="refuse degrees above this")
        p.set_defaults(func=fn)

    make = sub.add_parser("make", parents=[common], help="write an interchange file for a built-in family")
    make.add_argument("kind", choices=("classical", "theta", "quaternionic", "quaternionic-simple", "deformation"))
    make.add_argument("--n1", type=int, default=2)
    make.add_argument("--n2", type=int, default=2)
    make.add_argument("--k1", type=int, default=0)
    make.add_argument("--k2", type=int, default=0)
    make.add_argument("--cos", default="1")
    make.add_argument("--sin", default="0")
    make.add_argument("--u", default="1")
    make.add_argument("--v1", default="0,0,0")
    make.add_argument("--v2", default="0,0,0")
    make.add_argument("--u0", default="1")
    make.add_argument("--u1", default="0")
    make.add_argument("--u2", default="0")
    make.add_argument("--theta", default=None, help='JSON k1 x k2 table of angles or ["c","s"] pairs')
    make.add_argument("--eps", default=None, help="JSON block table of +1/-1 (null at cell/cell)")
    make.set_defaults(func=cmd_make)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ncspaces: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"ncspaces: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
