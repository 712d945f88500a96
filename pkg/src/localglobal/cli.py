"""Command-line entry point: every verification, search, and scan in the
package as a machine-readable report.

Reports are JSON objects {command, params, result, status, timings} printed
to standard output (or a flattened text rendering with --format text).
Invariant values appear as exact fraction strings ("0", "1/2", "1/3",
"2/3"); prime lists are ascending.  For fixed arguments and seed the
report is reproducible byte for byte apart from the timings block, which
records wall-clock milliseconds.

Exit codes: 0 for a definite scientific outcome (ok, obstructed, or
no_local_point), 2 for inconclusive (precision budget exhausted), 1 for
runtime errors, 64 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .cubic import PI, Eisenstein, cube_class_group, hilbert3
from .elkies import fibre, family_scan, local_solvability_report, obstruction_parity, rationals_of_height
from .exact import legendre_symbol, quartic_residue_symbol
from .padic import InsufficientPrecision
from .reichardt_lind import (
    NoPointError,
    ObstructionReport,
    TwistParams,
    density_experiment,
    exhaustive_search,
    forced_section_invariants,
    model_smoothness_check,
    point_obstruction,
    twist_conditions,
    twist_search,
)
from .selmer import evaluate_F_local, section_point, survival_analysis
from .symbols import as_place, hilbert2
from .tower import GAMMA, evaluate_F_symbolic, norm_K_over_k

__all__ = ["main", "build_parser"]

USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    """argparse with the conventional 64 exit for usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _parameter_t(text: str):
    if text.lower() in ("inf", "infinity", "oo"):
        return None
    return _rational(text)


def _prime_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS,
                        help="working p-adic digits (per-command default)")
    common.add_argument("--max-prime", type=int, default=argparse.SUPPRESS,
                        help="upper bound for prime searches and sweeps")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for any randomized sampling (default 0)")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS,
                        help="report rendering (default json)")

    parser = _Parser(prog="localglobal",
                     description="Exact local-global obstruction computations.")
    parser.set_defaults(precision=None, max_prime=None, seed=0, format="json")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    symbol = groups.add_parser("symbol", help="residue and Hilbert symbols")
    symbol_sub = symbol.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = symbol_sub.add_parser("legendre", parents=[common])
    sp.add_argument("a", type=int)
    sp.add_argument("p", type=int)
    sp = symbol_sub.add_parser("quartic", parents=[common])
    sp.add_argument("a", type=int)
    sp.add_argument("p", type=int)
    sp = symbol_sub.add_parser("hilbert2", parents=[common])
    sp.add_argument("a", type=_rational)
    sp.add_argument("b", type=_rational)
    sp.add_argument("place", help="a prime, or 'infinity'")
    sp = symbol_sub.add_parser("hilbert3", parents=[common])
    sp.add_argument("a", type=_rational)
    sp.add_argument("b", type=_rational)

    rl = groups.add_parser("rl", help="the quartic twist family ell*y^2 = z^4 - p")
    rl_sub = rl.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = rl_sub.add_parser("verify", parents=[common])
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--samples", type=int, default=20,
                    help="number of adelic points to sample (default 20)")
    sp = rl_sub.add_parser("search", parents=[common])
    sp.add_argument("--ell", type=int, required=True)
    sp = rl_sub.add_parser("density", parents=[common])
    sp.add_argument("--ell", type=int, required=True)
    sp = rl_sub.add_parser("exhaust", parents=[common])
    sp.add_argument("--ell", type=int, default=2)
    sp.add_argument("--rhs", type=int, default=17)
    sp.add_argument("--bound", type=int, required=True)
    sp = rl_sub.add_parser("smooth", parents=[common])
    sp.add_argument("--ell", type=int, default=2)
    sp.add_argument("--p", type=int, default=17)
    sp.add_argument("--primes", type=_prime_list, default=(3, 5, 7, 11, 13))

    elk = groups.add_parser("elkies", help="the quartic family with constant N(t)")
    elk_sub = elk.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = elk_sub.add_parser("verify", parents=[common])
    sp.add_argument("--t", type=_parameter_t, required=True,
                    help="rational parameter, or 'infinity'")
    sp = elk_sub.add_parser("scan", parents=[common])
    sp.add_argument("--height", type=int, default=10)

    sel = groups.add_parser("selmer", help="the diagonal cubic 3X^3+4Y^3+5Z^3")
    sel_sub = sel.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sel_sub.add_parser("verify", parents=[common])
    sel_sub.add_parser("survival", parents=[common])

    return parser


# ------------------------------------------------------------ serialization
def _invariants(values) -> list[str]:
    return [str(v) for v in sorted(values, key=lambda i: i.value)]


def _obstruction_payload(report: ObstructionReport) -> dict:
    return {
        "contributions": {
            str(place): _invariants(vals) for place, vals in report.contributions
        },
        "total": _invariants(report.total),
        "verdict": report.verdict,
    }


def _eisenstein_pair(x: Eisenstein) -> list[str]:
    return [str(x.a), str(x.b)]


# ------------------------------------------------------------------ workers
def _work_symbol(args, stage):
    if args.command == "legendre":
        value = legendre_symbol(args.a, args.p)
        return "ok", {"a": args.a, "p": args.p,
                      "value": {1: "+1", -1: "-1", 0: "0"}[value]}
    if args.command == "quartic":
        return "ok", {"a": args.a, "p": args.p,
                      "value": quartic_residue_symbol(args.a, args.p).label}
    if args.command == "hilbert2":
        sign, inv = hilbert2(args.a, args.b, as_place(args.place))
        return "ok", {"a": str(args.a), "b": str(args.b), "place": str(as_place(args.place)),
                      "sign": sign, "invariant": str(inv)}
    inv = hilbert3(args.a, args.b)
    return "ok", {"a": str(args.a), "b": str(args.b), "field": "Q_3(zeta_3)",
                  "invariant": str(inv)}


def _work_rl(args, stage):
    if args.command == "verify":
        tw = TwistParams(args.ell, args.p)
        precision = args.precision or 16
        t0 = time.perf_counter()
        reports = [
            point_obstruction(tw, precision=precision, variant=args.seed + k)
            for k in range(args.samples)
        ]
        stage("points", t0)
        totals = {report.total for report in reports}
        t0 = time.perf_counter()
        forced = forced_section_invariants(tw)
        stage("forced", t0)
        conditions = twist_conditions(tw)
        obstructed = (
            len(totals) == 1
            and reports[0].verdict == "obstructed"
            and forced.verdict == "obstructed"
        )
        return ("obstructed" if obstructed else "ok"), {
            "ell": args.ell,
            "p": args.p,
            "samples": args.samples,
            "totals_constant": len(totals) == 1,
            "point_analysis": _obstruction_payload(reports[0]),
            "forced_analysis": _obstruction_payload(forced),
            "conditions": {
                "odd_prime_coprime": conditions.odd_prime_coprime,
                "quartic_nonresidue": conditions.quartic_nonresidue,
                "square_mod_ell_primes": conditions.square_mod_ell_primes,
                "two_adic_solvable": conditions.two_adic_solvable,
            },
        }
    if args.command == "search":
        bound = args.max_prime or 100
        return "ok", {"ell": args.ell, "max_prime": bound,
                      "twists": twist_search(args.ell, bound)}
    if args.command == "density":
        bound = args.max_prime or 200_000
        report = density_experiment(args.ell, bound)
        relative = abs(report.ratio - report.predicted) / report.predicted
        return "ok", {
            "ell": report.ell,
            "max_prime": report.p_max,
            "valid_twists": report.valid_count,
            "primes_tested": report.prime_count,
            "empirical": str(report.ratio),
            "predicted": str(report.predicted),
            "relative_error": f"{float(relative):.6f}",
        }
    if args.command == "exhaust":
        solutions = exhaustive_search(args.bound, args.ell, args.rhs)
        return "ok", {"ell": args.ell, "rhs": args.rhs, "bound": args.bound,
                      "solutions": [list(s) for s in solutions]}
    tw = TwistParams(args.ell, args.p)
    results = {str(q): model_smoothness_check(q, tw) for q in args.primes}
    return "ok", {"ell": args.ell, "p": args.p, "primes": list(args.primes),
                  "results": results, "all_smooth": all(results.values())}


def _work_elkies(args, stage):
    good_bound = args.max_prime or 50
    precision = args.precision or 12
    if args.command == "verify":
        fib = fibre(args.t)
        t0 = time.perf_counter()
        local = local_solvability_report(fib, precision, good_bound)
        stage("local", t0)
        parity = obstruction_parity(fib)
        payload = {
            "t": "infinity" if args.t is None else str(args.t),
            "N": str(fib.N),
            "N0": fib.N0,
            "A": fib.A,
            "B": fib.B,
            "everywhere_locally_solvable": local.everywhere_solvable,
            "odd_bad_places": {str(p): ok for p, ok in local.odd_bad_places},
            "contributing_primes": list(parity.contributing_primes),
            "count": parity.count,
            "invariant": str(parity.invariant),
            "verdict": parity.verdict,
        }
        if not local.everywhere_solvable:
            return "no_local_point", payload
        return parity.verdict, payload
    ts = rationals_of_height(args.height)
    t0 = time.perf_counter()
    scan = family_scan(ts, precision, good_bound)
    stage("scan", t0)
    payload = {
        "height": args.height,
        "fibres": scan.fibre_count,
        "all_locally_solvable": scan.all_locally_solvable,
        "all_obstructed": scan.all_obstructed,
        "every_count_odd": all(par.count % 2 == 1 for _, par, _ in scan.entries),
    }
    good = scan.all_locally_solvable and scan.all_obstructed
    return ("obstructed" if good else "ok"), payload


def _work_selmer(args, stage):
    precision = args.precision or 12
    if args.command == "verify":
        gamma_norm = norm_K_over_k(GAMMA)
        coefficients = evaluate_F_symbolic()
        group = cube_class_group()
        t0 = time.perf_counter()
        f_class = evaluate_F_local(precision)
        stage("descent", t0)
        expected = group.express(PI * (Eisenstein.of(1) + PI * PI))
        section_point(precision)  # validates 4*10 - 40 = 0 at precision
        pairing = group.pairing_of_vectors(group.express(2), f_class)
        checks = f_class == expected and gamma_norm == Eisenstein.of(-10) and pairing != 0
        return ("ok" if checks else "error"), {
            "gamma_norm": _eisenstein_pair(gamma_norm),
            "descent_coefficients": [_eisenstein_pair(c) for c in coefficients],
            "F_class": list(f_class),
            "expected_class": list(expected),
            "classes_match": f_class == expected,
            "pairing_with_2": pairing,
            "pairing_nontrivial": pairing != 0,
        }
    t0 = time.perf_counter()
    report = survival_analysis(precision)
    conjugated = survival_analysis(precision, conjugate=True)
    stage("analysis", t0)
    consistent = (
        conjugated.survives == report.survives
        and conjugated.ann_23_dimension == report.ann_23_dimension
        and conjugated.ann_60_dimension == report.ann_60_dimension
        and (conjugated.pairing_with_2 != 0) == (report.pairing_with_2 != 0)
    )
    status = "ok" if report.survives and consistent else "error"
    return status, {
        "F_class": list(report.F_class),
        "pairing_with_2": report.pairing_with_2,
        "pairing_with_3": report.pairing_with_3,
        "pairing_with_60": report.pairing_with_60,
        "in_annihilator_60": report.in_annihilator_60,
        "annihilator_23_dimension": report.ann_23_dimension,
        "annihilator_60_dimension": report.ann_60_dimension,
        "witness": list(report.witness),
        "tau_plus_dimension": report.tau_plus_dimension,
        "tau_minus_dimension": report.tau_minus_dimension,
        "survives": report.survives,
        "conjugation_consistent": consistent,
    }


_WORKERS = {"symbol": _work_symbol, "rl": _work_rl, "elkies": _work_elkies,
            "selmer": _work_selmer}


# ------------------------------------------------------------------ driver
def _flatten(prefix: str, value, lines: list):
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], lines)
    elif isinstance(value, list):
        lines.append(f"{prefix} = {json.dumps(value)}")
    else:
        lines.append(f"{prefix} = {json.dumps(value)}")


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True)
    lines: list = []
    for key in ("command", "status", "params", "result", "timings"):
        _flatten(key, report[key], lines)
    return "\n".join(lines)


def _params_of(args) -> dict:
    skip = {"group", "command", "format"}
    out = {}
    for key, v in sorted(vars(args).items()):
        if key in skip or (v is None and key != "t"):
            continue
        if key == "t":
            out[key] = "infinity" if v is None else str(v)
        elif isinstance(v, Fraction):
            out[key] = str(v)
        elif isinstance(v, tuple):
            out[key] = list(v)
        else:
            out[key] = v
    return out


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    timings: dict = {}

    def stage(name: str, started: float):
        timings[name] = round((time.perf_counter() - started) * 1000)

    began = time.perf_counter()
    try:
        status, result = _WORKERS[args.group](args, stage)
        code = 0
    except NoPointError as exc:
        status, result, code = "no_local_point", {"message": str(exc)}, 0
    except InsufficientPrecision as exc:
        status, result, code = "inconclusive", {"message": str(exc)}, 2
    except Exception as exc:  # noqa: BLE001 - reported in the payload
        status, result, code = "error", {"message": f"{type(exc).__name__}: {exc}"}, 1
    timings["total"] = round((time.perf_counter() - began) * 1000)

    command = f"{args.group} {args.command}" if args.command else args.group
    report = {
        "command": command,
        "params": _params_of(args),
        "result": result,
        "status": status,
        "timings": timings,
    }
    print(_render(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
