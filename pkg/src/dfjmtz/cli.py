"""Command-line front end.

Exit codes: 0 success/feasible, 2 violated (certificate printed), 1 I/O or
input error, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ._numeric import to_text
from .dfj import MAX_BRUTE_FORCE_N, MAX_ENUMERATE_N, brute_force_optimum, dfj_check_enumerate, dfj_lp_bound, separation_mincut
from .experiments import ContainmentFailure, persist_gap_fixture, reports_to_json, run_containment_suite, run_gap_search
from .instance import FractionalPoint, check_degrees, parse_tsplib, point_from_tour, random_dfj_point
from .lift import cycle_to_cut, lift_point
from .mtz import Potentials, mtz_check, mtz_lp_bound

EXIT_OK, EXIT_ERROR, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt_vec(values) -> str:
    return "[" + ", ".join(to_text(v) for v in values) + "]"


def _fmt_set(nodes) -> str:
    return "{" + ",".join(str(v) for v in sorted(nodes)) + "}"


def _read_point(path) -> FractionalPoint:
    return FractionalPoint.from_json(Path(path).read_text())


def _read_instance(path):
    return parse_tsplib(Path(path).read_text())


def _n_range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return range(int(a), int(b) + 1)
        return range(int(text), int(text) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None


def cmd_lift(args) -> int:
    p = _read_point(args.point)
    res = lift_point(p)
    if res.ok:
        if args.json:
            print(res.potentials.to_json())
        else:
            print(f"u = {_fmt_vec(res.potentials.u)}")
        return EXIT_OK
    cut = cycle_to_cut(p, res.cycle)
    if args.json:
        print(json.dumps({"cycle": list(res.cycle), "weight": to_text(res.cycle_weight), "cut": cut.to_dict()}))
    else:
        print(f"negative cycle {_fmt_vec(res.cycle)} weight {to_text(res.cycle_weight)}")
        print(f"cut Q={_fmt_set(cut.q)} lhs {to_text(cut.lhs)} violation {to_text(cut.violation)}")
    return EXIT_VIOLATED


def cmd_check(args) -> int:
    p = _read_point(args.point)
    if not check_degrees(p):
        print("degree constraints violated")
        return EXIT_VIOLATED
    if args.formulation == "dfj":
        cert = dfj_check_enumerate(p) if p.n <= MAX_ENUMERATE_N else separation_mincut(p)
        if cert is None:
            print("dfj: feasible")
            return EXIT_OK
        print(f"dfj: violated Q={_fmt_set(cert.q)} lhs {to_text(cert.lhs)} violation {to_text(cert.violation)}")
        return EXIT_VIOLATED
    if args.u is None:
        raise UsageError("--formulation mtz requires --u FILE")
    u = Potentials.from_json(Path(args.u).read_text())
    bad = mtz_check(p, u)
    if bad is None:
        print("mtz: feasible")
        return EXIT_OK
    i, j, slack = bad
    print(f"mtz: violated arc ({i},{j}) slack {to_text(slack)}")
    return EXIT_VIOLATED


def cmd_bound(args) -> int:
    inst = _read_instance(args.instance)
    if args.formulation == "dfj":
        value, point = dfj_lp_bound(inst)
        payload = point.to_dict()
    elif args.formulation == "mtz":
        value, point, u = mtz_lp_bound(inst)
        payload = {**point.to_dict(), **u.to_dict()}
    else:
        value, tour = brute_force_optimum(inst)
        payload = {**point_from_tour(tour, inst.n).to_dict(), "tour": list(tour.order)}
    print(to_text(value))
    print(json.dumps(payload))
    return EXIT_OK


def cmd_compare(args) -> int:
    inst = _read_instance(args.instance)
    dfj_value, _ = dfj_lp_bound(inst)
    mtz_value = mtz_lp_bound(inst)[0]
    chain = [mtz_value, dfj_value]
    print(f"mtz: {to_text(mtz_value)}")
    print(f"dfj: {to_text(dfj_value)}")
    if inst.n <= MAX_BRUTE_FORCE_N:
        ip_value = brute_force_optimum(inst)[0]
        chain.append(ip_value)
        print(f"ip: {to_text(ip_value)}")
    holds = all(a <= b for a, b in zip(chain, chain[1:]))
    relation = " <= ".join(["mtz", "dfj", "ip"][: len(chain)])
    strict = " (strict dfj > mtz)" if dfj_value > mtz_value else ""
    print(f"ordering {relation}: {'holds' if holds else 'VIOLATED'}{strict}")
    return EXIT_OK if holds else EXIT_VIOLATED


def cmd_suite(args) -> int:
    if args.mode == "containment":
        try:
            reports = run_containment_suite(args.n, args.trials, args.seed)
        except ContainmentFailure as exc:
            print(f"containment failure: {exc}", file=sys.stderr)
            return EXIT_VIOLATED
    else:
        reports = []
        for n in args.n:
            reports += run_gap_search(n, args.trials, args.seed)
        if args.fixtures:
            flagged = [r for r in reports if r.flagged_strict]
            if flagged:
                persist_gap_fixture(flagged[0], args.fixtures)
    Path(args.out).write_text(reports_to_json(reports))
    failures = sum(r.failures for r in reports)
    flagged = sum(r.flagged_strict for r in reports)
    print(f"{len(reports)} reports, {failures} lift failures, {flagged} strict dfj > mtz")
    return EXIT_OK


def cmd_gen(args) -> int:
    print(random_dfj_point(args.n, args.tours, args.seed).to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dfjmtz", description="DFJ/MTZ relaxations of the asymmetric TSP")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lift", help="lift a point to MTZ potentials or report a violated cut")
    p.add_argument("--point", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("check", help="check a point against one formulation")
    p.add_argument("--point", required=True)
    p.add_argument("--formulation", choices=("dfj", "mtz"), required=True)
    p.add_argument("--u")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bound", help="optimal value of a relaxation (or the tour optimum)")
    p.add_argument("--instance", required=True)
    p.add_argument("--formulation", choices=("dfj", "mtz", "ip"), required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("compare", help="both relaxation bounds and the tour optimum")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("suite", help="run the containment or gap experiments")
    p.add_argument("--mode", choices=("containment", "gap"), required=True)
    p.add_argument("--n", type=_n_range, required=True, help="N or A..B")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fixtures", help="directory for the first strictly flagged gap instance")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("gen", help="random DFJ-feasible point as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tours", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dfjmtz: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"dfjmtz: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
