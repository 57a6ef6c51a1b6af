"""Command-line front end.

Every subcommand writes one JSON report to stdout (or a CSV artifact with
``--format csv``) and exits 0 when the checked property holds, 1 on a
mathematical refusal, 2 on malformed input.

Examples::

    rotabaxter verify '{"family": "Nondegenerate", "avg": {"d": 2, "sigma": [1, 1]},
                        "beta_rule": {"rule": "ReciprocalTheta", "c": 2}}'
    rotabaxter codec phi theta.csv
    rotabaxter measure '{"op": "Compose", "outer": {"op": "IntegralFrom", "a": 3},
                         "inner": {"op": "MultiplyBy", "r": "x^2"}}' --r x^2
    rotabaxter selftest --seed 7
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from . import acceptance
from .averaging_codec import AveragingSeq, CodecError, ThetaTable, phi, psi
from .double_product import (
    MEASURE_BOUND,
    NotInFamilyError,
    classify_rbo_xk,
    measure_of,
    probe,
)
from .exact_poly import Poly, parse_poly
from .linear_op import (
    DEFAULT_BOUND,
    FamilyOp,
    OpExpr,
    PreconditionError,
    TableOp,
    TableRangeError,
    check_rb,
    op_from_json,
    op_to_json,
)
from .monomial_rbo import (
    MonomialTable,
    check_rb_table,
    classify,
    family_from_json,
    verify_family_conditions,
)

EXIT_OK, EXIT_REFUSED, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


class _Result:
    def __init__(self, verdict: str, status: int, data: Any = None,
                 counterexample: dict | None = None, csv: str | None = None):
        self.verdict = verdict
        self.status = status
        self.data = data
        self.counterexample = counterexample
        self.csv = csv


# -- input helpers ----------------------------------------------------------


def _payload(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _json(arg: str) -> Any:
    text = _payload(arg)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _operator(data: Any) -> OpExpr:
    if isinstance(data, dict) and "family" in data and "op" not in data:
        return FamilyOp(family_from_json(data))
    return op_from_json(data)


def _table(arg: str, bound: int) -> MonomialTable:
    text = _payload(arg).strip()
    if text.startswith("{") or text.startswith("["):
        data = _json(text)
        if isinstance(data, dict) and ("op" in data or "family" in data):
            return MonomialTable.from_operator(_operator(data), bound)
        return MonomialTable.from_json(data)
    return MonomialTable.from_csv(text)


def _theta_table(arg: str) -> ThetaTable:
    text = _payload(arg).strip()
    if text.startswith("["):
        return ThetaTable(tuple(int(v) for v in _json(text)))
    return ThetaTable.from_csv(text)


def _report_verdict(rep) -> _Result:
    if rep.holds:
        return _Result("holds", EXIT_OK, data=rep.to_json())
    return _Result("fails", EXIT_REFUSED, data=rep.to_json(),
                   counterexample=rep.counterexample.to_json())


# -- subcommands ------------------------------------------------------------


def cmd_construct(args) -> _Result:
    fam = family_from_json(_json(args.source))
    table = fam.table(args.bound)
    return _Result("constructed", EXIT_OK,
                   data={"family": fam.to_json(), "table": table.to_json()},
                   csv=table.to_csv())


def cmd_verify(args) -> _Result:
    data = _json(args.source)
    if isinstance(data, dict) and "rows" in data:
        return _report_verdict(check_rb_table(MonomialTable.from_json(data)))
    P = _operator(data)
    rep = check_rb(P, args.bound)
    res = _report_verdict(rep)
    if isinstance(P, FamilyOp) and rep.holds:
        cond = verify_family_conditions(P.family, args.bound)
        res.data = {"rota_baxter": rep.to_json(), "family_conditions": cond.to_json()}
        if not cond.holds:
            res = _Result("fails", EXIT_REFUSED, data=res.data,
                          counterexample=cond.counterexample.to_json())
    return res


def cmd_classify(args) -> _Result:
    report = classify(_table(args.input, args.bound))
    if not report.is_rbo.holds:
        return _Result("fails", EXIT_REFUSED, data=report.to_json(),
                       counterexample=report.is_rbo.counterexample.to_json())
    return _Result("classified", EXIT_OK, data=report.to_json())


def cmd_codec(args) -> _Result:
    if args.direction == "phi":
        s = phi(_theta_table(args.payload))
        return _Result("decoded", EXIT_OK, data=s.to_json())
    s = AveragingSeq.from_json(_json(args.payload))
    t = psi(s, args.bound)
    return _Result("encoded", EXIT_OK, data={"theta": list(t.values)}, csv=t.to_csv())


def _monomial_exponent(r: Poly) -> int | None:
    terms = list(r.terms())
    if len(terms) == 1 and terms[0][1] == 1:
        return terms[0][0]
    return None


def cmd_measure(args) -> _Result:
    P = _operator(_json(args.source))
    r = parse_poly(args.r)
    k = _monomial_exponent(r)
    if k is not None:
        res = classify_rbo_xk(P, k, args.bound)
        return _Result("classified", EXIT_OK, data=res.to_json(), csv=res.mu.to_csv())
    mu = measure_of(P, r, args.bound)
    return _Result("measured", EXIT_OK, data={"mu": mu.to_json()}, csv=mu.to_csv())


def cmd_probe(args) -> _Result:
    P = _operator(_json(args.source))
    return _Result("evidence", EXIT_OK, data=probe(P, parse_poly(args.r), args.bound))


def cmd_selftest(args) -> _Result:
    results = acceptance.run_all(args.seed)
    for res in results:
        print(res.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    return _Result("holds" if ok else "fails", EXIT_OK if ok else EXIT_REFUSED,
                   data=[r.to_json() for r in results])


# -- driver -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotabaxter",
        description="Construct, verify and classify Rota-Baxter operators on Q[x].")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=None, help="degree bound N")
    common.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="tabulate a monomial family")
    p.add_argument("source", help="family JSON (inline, file path, or - for stdin)")
    p.set_defaults(func=cmd_construct, default_bound=DEFAULT_BOUND)

    p = sub.add_parser("verify", parents=[common], help="check the Rota-Baxter identity")
    p.add_argument("source", help="operator, family or table JSON")
    p.set_defaults(func=cmd_verify, default_bound=DEFAULT_BOUND)

    p = sub.add_parser("classify", parents=[common], help="classify a monomial table")
    p.add_argument("input", help="table CSV/JSON, or operator JSON to tabulate")
    p.set_defaults(func=cmd_classify, default_bound=DEFAULT_BOUND)

    p = sub.add_parser("codec", parents=[common], help="averaging sequence codec")
    p.add_argument("direction", choices=("phi", "psi"))
    p.add_argument("payload", help="theta table (phi) or averaging sequence JSON (psi)")
    p.set_defaults(func=cmd_codec, default_bound=DEFAULT_BOUND)

    p = sub.add_parser("measure", parents=[common], help="associated measure of P with d/dx P = r")
    p.add_argument("source", help="operator JSON")
    p.add_argument("--r", required=True, help="polynomial r, e.g. 'x^2'")
    p.set_defaults(func=cmd_measure, default_bound=MEASURE_BOUND)

    p = sub.add_parser("probe", parents=[common], help="gather evidence on P = integral_a r")
    p.add_argument("source", help="operator JSON")
    p.add_argument("--r", required=True, help="polynomial r")
    p.set_defaults(func=cmd_probe, default_bound=MEASURE_BOUND)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.set_defaults(func=cmd_selftest, default_bound=DEFAULT_BOUND)
    return parser


def _inputs(args) -> dict:
    skip = {"func", "default_bound", "out", "format", "command", "bound"}
    if args.command != "selftest":
        skip.add("seed")
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.bound is None:
        args.bound = args.default_bound
    report: dict[str, Any] = {"command": args.command, "inputs": _inputs(args), "bound": args.bound}
    try:
        if args.bound < 0:
            raise InputError("--bound must be nonnegative")
        res = args.func(args)
    except (PreconditionError, NotInFamilyError) as exc:
        res = _Result("refused", EXIT_REFUSED, data={"reason": str(exc)})
        if isinstance(exc, PreconditionError) and exc.report is not None and exc.report.counterexample:
            res.counterexample = exc.report.counterexample.to_json()
    except (ValueError, TypeError, KeyError, CodecError, TableRangeError) as exc:
        print(f"rotabaxter {args.command}: {exc}", file=sys.stderr)
        res = _Result("input_error", EXIT_INPUT, data={"diagnostic": str(exc)})
    report["verdict"] = res.verdict
    if res.counterexample is not None:
        report["counterexample"] = res.counterexample
    if res.data is not None:
        report["data"] = res.data
    if args.format == "csv" and res.status == EXIT_OK:
        if res.csv is None:
            print(f"rotabaxter {args.command}: no CSV form for this output", file=sys.stderr)
            return EXIT_INPUT
        _emit(res.csv, args.out)
    else:
        _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
