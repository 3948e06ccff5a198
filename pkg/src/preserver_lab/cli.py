"""``preserver-lab`` command line.

Exit codes: 0 ok, 1 property or repro failure, 2 input error, 3 retry
exhaustion inside a witness construction.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .classify import classify, sos_decompose
from .hankel import Verdict, const_coeff_hankel, diag_hankel, necessary_conditions, positive_counterexample
from .operators import (
    ConstCoeffOperator,
    DiagSequence,
    DiffOperator,
    OperatorError,
    apply_diag,
    apply_diff,
    operator_from_json,
)
from .polycore import poly_from_json, poly_to_json
from .repro import CASES, run_case
from .witness import (
    WitnessError,
    verify_certificate,
    witness_auto,
    witness_ct3,
    witness_t1,
    witness_t2,
    witness_t3,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_EXHAUSTED = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(arg: str) -> str:
    """``-`` means stdin, an existing path is read, anything else is literal."""
    if arg == "-":
        return sys.stdin.read()
    path = Path(arg)
    try:
        if len(arg) < 4096 and path.is_file():
            return path.read_text()
    except OSError:
        pass
    return arg


def _poly(arg: str):
    try:
        return poly_from_json(_read(arg))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"bad polynomial: {exc}") from None


def _operator(arg: str):
    text = _read(arg)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad operator JSON: {exc}") from None
    try:
        return operator_from_json(obj)
    except (OperatorError, ValueError, TypeError) as exc:
        raise InputError(f"bad operator: {exc}") from None


def _as_diff(op) -> DiffOperator:
    if isinstance(op, ConstCoeffOperator):
        return op.as_diff()
    if isinstance(op, DiffOperator):
        return op
    raise InputError("witness constructions need a differential operator")


# --------------------------------------------------------------------------
# subcommands; each returns (exit code, JSON-able payload)


def cmd_classify(args) -> tuple[int, dict]:
    p = _poly(args.poly)
    return EXIT_OK, {"p": poly_to_json(p), **classify(p).to_json()}


def cmd_sos(args) -> tuple[int, dict]:
    p = _poly(args.poly)
    try:
        w = sos_decompose(p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return EXIT_OK, {"p": poly_to_json(p), **w.to_json()}


def cmd_apply(args) -> tuple[int, dict]:
    op, p = _operator(args.operator), _poly(args.poly)
    try:
        image = apply_diag(op, p) if isinstance(op, DiagSequence) else apply_diff(op, p)
    except OperatorError as exc:
        raise InputError(str(exc)) from None
    return EXIT_OK, {"p": poly_to_json(p), "image": poly_to_json(image)}


def _hankel_report(op, degree: int | None):
    if isinstance(op, DiagSequence):
        n = op.degree if degree is None else degree
        if n > op.degree:
            raise InputError(f"degree {n} exceeds the {op.degree + 1} given lambdas")
        if n < 0:
            raise InputError("degree must be non-negative")
        T = DiagSequence(op.lambdas[: n + 1])
        return T, diag_hankel(T)
    if isinstance(op, ConstCoeffOperator):
        n = max(op.order, 0) if degree is None else degree
        if n < 0:
            raise InputError("degree must be non-negative")
        n -= n % 2
        return op, const_coeff_hankel(op, n)
    raise InputError(
        "not a diagonal or constant-coefficient operator; an operator with a "
        "non-constant coefficient never preserves non-negativity, use `witness`"
    )


def cmd_hankel(args) -> tuple[int, dict]:
    _, report = _hankel_report(_operator(args.operator), args.degree)
    return EXIT_OK, report.to_json()


def cmd_check(args) -> tuple[int, dict]:
    op, report = _hankel_report(_operator(args.operator), args.degree)
    out = report.to_json()
    out["preserves_positivity"] = report.verdict is Verdict.POSITIVE_DEFINITE
    if isinstance(op, DiagSequence):
        out["necessary_condition_violations"] = [v.to_json() for v in necessary_conditions(op)]
    cx = positive_counterexample(op, report)
    out["witness"] = cx.to_json() if cx else None
    return EXIT_OK, out


_CONSTRUCTIONS = {
    "auto": lambda U, seed: witness_auto(U, seed=seed),
    "t1": lambda U, seed: witness_t1(U, seed=seed),
    "t2": lambda U, seed: witness_t2(U),
    "t3": lambda U, seed: witness_t3(U),
    "ct3": lambda U, seed: witness_ct3(U),
}


def cmd_witness(args) -> tuple[int, dict]:
    U = _as_diff(_operator(args.operator))
    try:
        cert = _CONSTRUCTIONS[args.construction](U, args.seed)
    except WitnessError as exc:
        payload = {"error": str(exc), "diagnostics": exc.diagnostics}
        return (EXIT_EXHAUSTED if exc.exhausted else EXIT_INPUT), payload
    out = cert.to_json()
    out["verified"] = verify_certificate(U, cert)
    return (EXIT_OK if out["verified"] else EXIT_FAIL), out


def cmd_repro(args) -> tuple[int, dict]:
    if args.all:
        ids = sorted(CASES)
    elif args.case:
        if args.case not in CASES:
            raise InputError(f"unknown case {args.case!r}; known: {', '.join(sorted(CASES))}")
        ids = [args.case]
    else:
        raise InputError("give a case id or --all")
    results = []
    for cid in ids:
        passed, details = run_case(cid, args.seed)
        case = CASES[cid]
        entry = {"id": cid, "passed": passed, "anchor": case.anchor, "details": details}
        if not passed:
            entry["expected"] = case.expected
        results.append(entry)
    ok = all(r["passed"] for r in results)
    return (EXIT_OK if ok else EXIT_FAIL), {"passed": ok, "cases": results}


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", help="compact JSON (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", help="indented JSON")
    common.set_defaults(pretty=False)

    ap = argparse.ArgumentParser(prog="preserver-lab",
                                 description="Exact polynomial classification and preserver checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="hyperbolic / elliptic / positive / non-negative")
    s.add_argument("poly", help='shorthand ("x^2+1"), JSON, a file, or - for stdin')
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("sos", parents=[common], help="two-square decomposition of a non-negative polynomial")
    s.add_argument("poly")
    s.set_defaults(func=cmd_sos)

    s = sub.add_parser("apply", parents=[common], help="apply an operator to a polynomial")
    s.add_argument("operator", help="operator JSON, a file, or -")
    s.add_argument("poly")
    s.set_defaults(func=cmd_apply)

    for name, func, text in (
        ("hankel", cmd_hankel, "Hankel entries, leading minors and verdict"),
        ("check", cmd_check, "decide positivity preservation, with a counterexample when it fails"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("operator")
        s.add_argument("--degree", type=int, default=None, help="degree bound n")
        s.set_defaults(func=func)

    s = sub.add_parser("witness", parents=[common], help="certificate that an operator breaks non-negativity")
    s.add_argument("operator")
    s.add_argument("--construction", choices=sorted(_CONSTRUCTIONS), default="auto")
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("repro", parents=[common], help="run the regression corpus")
    s.add_argument("case", nargs="?", choices=sorted(CASES))
    s.add_argument("--all", action="store_true")
    s.set_defaults(func=cmd_repro)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        code, payload = args.func(args)
    except InputError as exc:
        code, payload = EXIT_INPUT, {"error": str(exc)}
    text = json.dumps(payload, indent=2 if args.pretty else None, sort_keys=True)
    (sys.stdout if code in (EXIT_OK, EXIT_FAIL) else sys.stderr).write(text + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
