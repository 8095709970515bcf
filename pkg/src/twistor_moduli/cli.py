"""Command line entry point: ``twistor-moduli <subcommand> ...``.

Exit codes: 0 success, 1 failed verification or assertion (or non-integral
formal data), 2 usage and parse errors.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import dsl
from .bundles import FormalBundle, euler_characteristic, is_integral
from .instanton import (FormalDataError, InstantonData, VerificationReport, chi_end_twisted,
                        fraction_text, json_number, moduli_dimension, sweep,
                        verify_identities)
from .interpreter import AssertionFailed, Interpreter
from .twistor import TwistorPresentation, build_presentation, canonical_class_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


def _int_list(flag: str, text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(flag, f"expected comma-separated integers, got {text!r}") from None


def _space_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("space")
    g.add_argument("--n", type=int, default=0, help="number of -CP^2 summands (default 0)")
    g.add_argument("--a", help="a-vector such as 1,0,1 (default: all ones)")
    g.add_argument("--c2-mode", choices=["paper", "normalized"], default="paper")
    g.add_argument("--euler", type=int, help="expert: override e(M)")
    g.add_argument("--signature", type=int, help="expert: override sgn(M)")


def _bundle_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("bundle")
    g.add_argument("--rank", type=int, default=2)
    g.add_argument("--c1", help="c1 = sum b_i e_i given as b1,...,bn (default: zero)")
    g.add_argument("--k", type=int, default=0, help="c2 = k F")


def _grid_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("grid")
    g.add_argument("--n-max", type=int, default=5)
    g.add_argument("--r-max", type=int, default=3)
    g.add_argument("--k-min", type=int, default=0)
    g.add_argument("--k-max", type=int, default=6)
    g.add_argument("--b-values", default="0", help="entries for b-vectors, e.g. --b-values=-1,0,1")
    g.add_argument("--b-samples", type=int, help="random b-vectors per (n, a) instead of all")
    g.add_argument("--route", choices=["standard", "paper", "both"], default="both")
    g.add_argument("--c2-mode", choices=["paper", "normalized", "both"], default="both")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--jobs", type=int, default=1, help="worker processes")
    g.add_argument("--omega2-eta", type=int, default=1,
                   help="expert: value of w^2*e_i; anything but 1 corrupts the ring "
                        "(negative control)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistor-moduli",
                                     description="Intersection theory on twistor spaces "
                                                 "over #n(-CP^2).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="run a .tws script")
    p.add_argument("script", type=Path)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("dim", help="moduli dimension -chi(End(V)(-S))")
    _space_args(p)
    _bundle_args(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("chi", help="chi(End(V)(-S)) and chi(End(V)(-Sbar))")
    _space_args(p)
    _bundle_args(p)
    p.add_argument("--route", choices=["standard", "paper", "both"], default="both")
    p.add_argument("--json", action="store_true")

    for name, helptext in (("verify", "check an identity or the S/Sbar symmetry"),
                           ("sweep", "full report over a parameter grid")):
        p = sub.add_parser(name, help=helptext)
        if name == "verify":
            what = p.add_mutually_exclusive_group(required=True)
            what.add_argument("--lemma", choices=["2.5"])
            what.add_argument("--identity", choices=["canonical", "intersections", "all"])
        _grid_args(p)
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("table", help="dimension table over one varying parameter")
    _space_args(p)
    _bundle_args(p)
    p.add_argument("--vary", action="append", choices=["k", "r", "n"], required=True)
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="stop", type=int, required=True)
    p.add_argument("--json", action="store_true", help="JSON instead of CSV")
    return parser


# -- helpers -------------------------------------------------------------------

def _presentation(args, n: int | None = None) -> TwistorPresentation:
    n = args.n if n is None else n
    a = _int_list("--a", args.a) if n == args.n else None
    try:
        return build_presentation(n, a, args.c2_mode, euler=args.euler,
                                  signature=args.signature)
    except ValueError as exc:
        raise UsageError("--a" if "a-vector" in str(exc) else "--n", str(exc)) from None


def _instanton(args, p: TwistorPresentation, r: int | None = None, k: int | None = None,
               vary_n: bool = False) -> InstantonData:
    b = _int_list("--c1", args.c1)
    if b is None or (vary_n and not any(b)):
        b = (0,) * p.n
    if len(b) != p.n:
        raise UsageError("--c1", f"expected {p.n} entries, got {len(b)}")
    if (args.rank if r is None else r) < 1:
        raise UsageError("--rank", "rank must be positive")
    return InstantonData(args.rank if r is None else r, b, args.k if k is None else k, p)


def _space_line(p: TwistorPresentation) -> str:
    return (f"space: n={p.n} a={list(p.a)} c2_mode={p.c2_mode} A={p.A} "
            f"e={p.e} sgn={p.sgn}")


def _emit_json(doc: dict, out: TextIO) -> None:
    json.dump(doc, out, indent=2)
    out.write("\n")


# -- subcommands -----------------------------------------------------------------

def cmd_dim(args, out: TextIO) -> int:
    p = _presentation(args)
    d = _instanton(args, p)
    try:
        res = moduli_dimension(d)
    except FormalDataError as exc:
        print(f"formal-data error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        _emit_json({"schema": 1, "space": p.serialize(), "params": d.params(),
                    **res.as_dict()}, out)
    else:
        print(_space_line(p), file=out)
        print(f"bundle: rank={d.r} c1={list(d.b)} k={d.k}", file=out)
        print(f"dimension: {res.dimension}", file=out)
        print(f"chi: {fraction_text(res.chi)}", file=out)
        print(f"real_dimension: {res.real_dimension}", file=out)
        if res.advisory:
            print(f"advisory: {res.advisory}", file=out)
    return EXIT_OK


def cmd_chi(args, out: TextIO) -> int:
    p = _presentation(args)
    d = _instanton(args, p)
    routes = ["standard", "paper"] if args.route == "both" else [args.route]
    values = []
    for route in routes:
        for divisor in ("S", "Sbar"):
            chi = chi_end_twisted(d, divisor, route)
            values.append({"route": route, "divisor": divisor, "chi": json_number(chi),
                           "integral": is_integral(chi)})
    if args.json:
        _emit_json({"schema": 1, "space": p.serialize(), "params": d.params(),
                    "values": values}, out)
    else:
        print(_space_line(p), file=out)
        print(f"bundle: rank={d.r} c1={list(d.b)} k={d.k}", file=out)
        for v in values:
            print(f"chi(End(V)(-{v['divisor']})) [{v['route']}]: {v['chi']}", file=out)
    return EXIT_OK


def _grid(args) -> dict:
    modes = ["paper", "normalized"] if args.c2_mode == "both" else [args.c2_mode]
    routes = ["standard", "paper"] if args.route == "both" else [args.route]
    if args.n_max < 0 or args.r_max < 1 or args.k_max < args.k_min:
        raise UsageError("--n-max/--r-max/--k-max", "empty range")
    return dict(n_values=range(0, args.n_max + 1), r_values=range(1, args.r_max + 1),
                k_values=range(args.k_min, args.k_max + 1),
                b_values=_int_list("--b-values", args.b_values) or (0,),
                b_samples=args.b_samples, routes=routes, modes=modes,
                omega_sq_eta=args.omega2_eta, seed=args.seed, jobs=args.jobs)


def identity_report(n_max: int, which: str, modes: Sequence[str], omega_sq_eta: int = 1) -> VerificationReport:
    report = VerificationReport({"check": f"identity:{which}", "n_max": n_max,
                                 "c2_modes": list(modes)})
    for n in range(n_max + 1):
        for a, mode in itertools.product(itertools.product((0, 1), repeat=n), modes):
            p = build_presentation(n, a, mode, omega_sq_eta=omega_sq_eta)
            if which in ("canonical", "all"):
                report.record({"space": p.serialize(), "identity": "c1(P) = 2S + 2Sbar"},
                              canonical_class_check(p))
            if which in ("intersections", "all"):
                report.merge(verify_identities(p))
    return report


def _report_text(report: VerificationReport, out: TextIO, full: bool) -> None:
    status = "pass" if report.passed else "FAIL"
    print(f"{report.config.get('check')}: {status} ({len(report.cases)} cases, "
          f"{len(report.counterexamples)} counterexamples)", file=out)
    if full:
        for case in report.cases:
            print(json.dumps(case, sort_keys=True), file=out)
    elif report.counterexamples:
        print("first counterexample: " + json.dumps(report.counterexamples[0], sort_keys=True),
              file=out)


def cmd_verify(args, out: TextIO, full: bool = False) -> int:
    grid = _grid(args)
    if getattr(args, "identity", None):
        report = identity_report(args.n_max, args.identity, grid["modes"], args.omega2_eta)
    else:
        report = sweep(**grid)
    if args.json:
        _emit_json(report.to_json(), out)
    else:
        _report_text(report, out, full)
    return EXIT_OK if report.passed else EXIT_FAIL


def table_rows(args) -> list[dict]:
    if len(args.vary) != 1:
        raise UsageError("--vary", "exactly one --vary is allowed")
    vary = args.vary[0]
    if args.stop < args.start:
        raise UsageError("--from/--to", "empty range")
    rows = []
    for v in range(args.start, args.stop + 1):
        if vary == "n":
            if v < 0:
                raise UsageError("--from", "n must be >= 0")
            p = _presentation(args, n=v)
            d = _instanton(args, p, vary_n=True)
        else:
            p = _presentation(args)
            d = _instanton(args, p, **{vary: v})
        chi_op = euler_characteristic(FormalBundle.trivial(p), p)
        row = {"params": d.params(), "space": p.serialize(), "chi_OP": json_number(chi_op)}
        try:
            res = moduli_dimension(d)
            row.update(dim=res.dimension, chi=json_number(res.chi), real_dim=res.real_dimension)
        except FormalDataError as exc:
            row.update(dim=None, chi=json_number(exc.chi), real_dim=None)
        rows.append(row)
    return rows


def cmd_table(args, out: TextIO) -> int:
    rows = table_rows(args)
    if args.json:
        _emit_json({"schema": 1, "vary": args.vary[0], "rows": rows}, out)
        return EXIT_OK
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "a", "c2_mode", "r", "b", "k", "dim", "chi", "real_dim", "chi(O_P)"])
    for row in rows:
        prm = row["params"]
        writer.writerow([prm["n"], " ".join(map(str, prm["a"])), prm["c2_mode"], prm["r"],
                         " ".join(map(str, prm["b"])), prm["k"],
                         "" if row["dim"] is None else row["dim"], row["chi"],
                         "" if row["real_dim"] is None else row["real_dim"], row["chi_OP"]])
    return EXIT_OK


def cmd_eval(args, out: TextIO) -> int:
    try:
        text = args.script.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError("script", str(exc)) from None
    outputs = []
    interp = Interpreter()
    status, error = EXIT_OK, None
    try:
        script = dsl.parse(text)
        outputs = interp.run(script)
        if any(o.passed is False for o in outputs):
            status = EXIT_FAIL
    except AssertionFailed as exc:
        status, error = EXIT_FAIL, exc
    except dsl.DslError as exc:
        status, error = EXIT_USAGE, exc
    if error is not None:
        outputs = interp.outputs
    if args.json:
        doc = {"schema": 1, "outputs": [o.to_json() for o in outputs],
               "pass": status == EXIT_OK}
        if error is not None:
            doc["error"] = error.to_json()
        _emit_json(doc, out)
    else:
        for o in outputs:
            print(o.text, file=out)
    if error is not None:
        print(f"{args.script}: {error}", file=sys.stderr)
    return status


def run(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "dim":
            return cmd_dim(args, out)
        if args.command == "chi":
            return cmd_chi(args, out)
        if args.command == "verify":
            return cmd_verify(args, out)
        if args.command == "sweep":
            return cmd_verify(args, out, full=True)
        if args.command == "table":
            return cmd_table(args, out)
        return cmd_eval(args, out)
    except UsageError as exc:
        print(f"twistor-moduli {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # output piped into e.g. head; silence the flush at interpreter exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = EXIT_OK
    sys.exit(code)


if __name__ == "__main__":
    main()
