"""Command-line front end: evaluation, tables, verification, calibration.

Subcommands: eval, table, verify, calibrate, constants.  All numeric output
carries the method tag and the error estimate — never a bare number.  Machine
formats (json, csv) are byte-deterministic: fixed key order, fixed digit
counts derived from --precision.

Exit codes: 0 ok, 1 usage or configuration error, 2 singular input,
3 verification failure, 4 calibration failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

import mpmath

from .constants import Precision, zeta_prime_neg
from .conventions import ConventionError, ConventionSet
from .evaluate import (
    CalibrationError,
    EvalConfig,
    SingularInputError,
    calibrate_conventions,
    euler_partial,
    gauss_partial,
    extrapolate,
    log_multigamma,
    multiplication_residual,
)
from .exact_poly import check_identities

DEFAULT_CONVENTIONS_PATH = "./multigamma-conventions.json"
CONVENTIONS_ENV_VAR = "MULTIGAMMA_CONVENTIONS"


class UsageError(Exception):
    """Bad flags, bad values, or missing configuration: exit code 1."""


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def parse_component(text: str) -> Fraction:
    """One real component: integer, decimal, or n/d rational — kept exact."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse number {text!r}: {exc}") from None


def parse_z(text: str) -> tuple[Fraction, Fraction]:
    """Parse "a", "bi", or "a+bi" with rational components; returns (re, im)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise UsageError("empty z value")
    if s[-1] in "iI":
        body = s[:-1]
        # split real and imaginary at the last sign that is not leading and
        # not part of an exponent
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                re_part, im_part = body[:pos], body[pos:]
                break
        else:
            re_part, im_part = "", body
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        re_val = parse_component(re_part) if re_part else Fraction(0)
        return re_val, parse_component(im_part)
    return parse_component(s), Fraction(0)


def parse_int_list(text: str) -> list[int]:
    try:
        items = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}: {exc}") from None
    if not items:
        raise UsageError(f"empty integer list {text!r}")
    return items


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are 1
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multigamma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tolerance_default):
        p.add_argument("--precision", type=int, default=30,
                       help="decimal digits (default 30)")
        p.add_argument("--tolerance", type=float, default=tolerance_default)
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--conventions", default=None,
                       help=f"conventions file (default {DEFAULT_CONVENTIONS_PATH}, "
                            f"or ${CONVENTIONS_ENV_VAR})")

    p_eval = sub.add_parser("eval", help="evaluate log G_r(z) and G_r(z)")
    p_eval.add_argument("--r", type=int, required=True)
    p_eval.add_argument("--z", required=True)
    common(p_eval, 1e-8)

    p_table = sub.add_parser("table", help="tabulate log G_r over a grid")
    p_table.add_argument("--r", type=int, required=True)
    p_table.add_argument("--from", dest="z_from", required=True)
    p_table.add_argument("--to", dest="z_to", required=True)
    p_table.add_argument("--step", required=True)
    common(p_table, 1e-8)

    p_verify = sub.add_parser("verify", help="run identity suites")
    p_verify.add_argument("--suite", choices=("symbolic", "numeric", "all"),
                          default="all")
    p_verify.add_argument("--r-max", dest="r_max", type=int, default=4)
    p_verify.add_argument("--p", default="2,3", help="comma list of orders p")
    common(p_verify, None)  # default depends on suite; resolved later

    p_cal = sub.add_parser("calibrate", help="resolve and persist conventions")
    common(p_cal, 1e-8)

    p_const = sub.add_parser("constants", help="print zeta'(-j) constants")
    p_const.add_argument("--j", default="0,1,2", help="comma list of j >= 0")
    common(p_const, 1e-8)

    return parser


# ---------------------------------------------------------------------------
# Shared plumbing
# ---------------------------------------------------------------------------


def conventions_path(args) -> str:
    if args.conventions:
        return args.conventions
    return os.environ.get(CONVENTIONS_ENV_VAR) or DEFAULT_CONVENTIONS_PATH


def load_conventions(args) -> ConventionSet:
    path = conventions_path(args)
    if not os.path.exists(path):
        raise UsageError(
            f"conventions file {path!r} not found; run `multigamma calibrate` first "
            f"(or point --conventions/${CONVENTIONS_ENV_VAR} at one)")
    try:
        return ConventionSet.load(path)
    except (ConventionError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot load conventions from {path!r}: {exc}") from None


def make_config(args, conventions=None) -> EvalConfig:
    if args.precision < 10:
        raise UsageError("--precision must be at least 10")
    tol = args.tolerance if args.tolerance is not None else 1e-8
    kwargs = dict(precision=Precision(digits=args.precision), tolerance=tol)
    if conventions is not None:
        kwargs["conventions"] = conventions
    try:
        return EvalConfig(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def nstr(x, digits: int) -> str:
    return mpmath.nstr(x, digits)


def to_mp(zq: tuple[Fraction, Fraction], dps: int):
    with mpmath.workdps(dps):
        re = mpmath.mpf(zq[0].numerator) / zq[0].denominator
        im = mpmath.mpf(zq[1].numerator) / zq[1].denominator
        return re if im == 0 else mpmath.mpc(re, im)


def emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True, separators=(", ", ": ")))


def emit_csv(header: list[str], rows: list[list[str]]) -> None:
    print(",".join(header))
    for row in rows:
        print(",".join(row))


def emit_text_table(header: list[str], rows: list[list[str]]) -> None:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(header)]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def cmd_eval(args) -> int:
    cfg = make_config(args)
    zq = parse_z(args.z)
    digits = args.precision
    with mpmath.workdps(cfg.precision.working_dps):
        zm = to_mp(zq, cfg.precision.working_dps)
        log_value = log_multigamma(args.r, zm, cfg)
        g_value = mpmath.exp(log_value.value)
        row = {
            "r": args.r,
            "z": args.z,
            "log": log_value.to_json_obj(digits),
            "value": {"re": nstr(mpmath.re(g_value), digits),
                      "im": nstr(mpmath.im(g_value), digits)},
        }
    if args.format == "json":
        emit_json(row)
    elif args.format == "csv":
        emit_csv(
            ["r", "z", "log_re", "log_im", "value_re", "value_im", "method", "err_est"],
            [[str(args.r), args.z, row["log"]["re"], row["log"]["im"],
              row["value"]["re"], row["value"]["im"],
              row["log"]["method"], row["log"]["err_est"] or ""]],
        )
    else:
        print(f"log G_{args.r}({args.z}) = {row['log']['re']} + {row['log']['im']}i")
        print(f"G_{args.r}({args.z})     = {row['value']['re']} + {row['value']['im']}i")
        print(f"method  = {row['log']['method']}")
        print(f"err_est = {row['log']['err_est']}")
    return 0


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------


def grid_points(z_from: Fraction, z_to: Fraction, step: Fraction) -> list[Fraction]:
    if step <= 0:
        raise UsageError("--step must be positive")
    points = []
    z = z_from
    while z <= z_to:
        points.append(z)
        z += step
    if not points:
        raise UsageError(f"empty range: from {z_from} to {z_to} step {step}")
    return points


def cmd_table(args) -> int:
    cfg = make_config(args)
    z_from, im_f = parse_z(args.z_from)
    z_to, im_t = parse_z(args.z_to)
    step, im_s = parse_z(args.step)
    if im_f or im_t or im_s:
        raise UsageError("table ranges are real: complex bounds not supported")
    digits = args.precision
    rows = []
    with mpmath.workdps(cfg.precision.working_dps):
        for zq in grid_points(z_from, z_to, step):
            zm = to_mp((zq, Fraction(0)), cfg.precision.working_dps)
            z_str = nstr(zm, digits)
            try:
                lv = log_multigamma(args.r, zm, cfg)
            except SingularInputError:
                rows.append([z_str, "", "", "singular", ""])
                continue
            rows.append([
                z_str,
                nstr(mpmath.re(lv.value), digits),
                nstr(mpmath.im(lv.value), digits),
                lv.method,
                nstr(lv.err_est, 3) if lv.err_est is not None else "",
            ])
    header = ["z", "log_re", "log_im", "method", "err_est"]
    if args.format == "json":
        emit_json({"r": args.r,
                   "rows": [dict(zip(header, row)) for row in rows]})
    elif args.format == "csv":
        emit_csv(header, rows)
    else:
        emit_text_table(header, rows)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


NUMERIC_GRID = (Fraction(1, 2), Fraction(3, 2), Fraction(5, 2))


def _report(identity: str, params: dict, residual, tolerance: float) -> dict:
    ok = residual <= tolerance
    return {
        "identity": identity,
        "params": params,
        "residual": nstr(residual, 6),
        "pass": bool(ok),
    }


def numeric_reports(args, cfg: EvalConfig, p_list: list[int], tol: float) -> list[dict]:
    reports = []
    dps = cfg.precision.working_dps
    r_top = max(1, min(args.r_max, 3))
    with mpmath.workdps(dps):
        # recurrence: log G_r(z+1) = log G_{r-1}(z) + log G_r(z)
        for r in range(1, r_top + 1):
            for zq in NUMERIC_GRID:
                zm = to_mp((zq, Fraction(0)), dps)
                lhs = log_multigamma(r, zm + 1, cfg).value
                rhs = log_multigamma(r - 1, zm, cfg).value + log_multigamma(r, zm, cfg).value
                reports.append(_report(
                    "recurrence", {"r": r, "z": str(zq)}, abs(lhs - rhs), tol))
        # cross-route: Euler and Gauss extrapolants of the same limit
        for r in range(1, min(r_top, 2) + 1):
            for zq in (Fraction(1, 2), Fraction(3, 2)):
                zm = to_mp((zq, Fraction(0)), dps)
                ns = [cfg.truncation_n >> i for i in range(5)]
                g = extrapolate([gauss_partial(r, zm, n, cfg) for n in ns[::-1]], 4)
                e = extrapolate([euler_partial(r, zm, n, cfg) for n in ns[::-1]], 4)
                rel = abs(g.value - e.value) / max(1, abs(g.value))
                reports.append(_report(
                    "euler_vs_gauss", {"r": r, "z": str(zq)}, rel, tol))
        # convexity: the (r+1)-th forward difference of log G_r(z+1) at
        # integer nodes collapses to log(1+1/z) >= 0
        for r in (1, 2):
            if r > args.r_max:
                continue
            for z0 in (1, 2):
                acc = mpmath.mpf(0)
                for k in range(r + 2):
                    acc += ((-1) ** (r + 1 - k) * math.comb(r + 1, k)
                            * log_multigamma(r, z0 + 1 + k, cfg).value)
                # residual: how far below zero the difference dips
                reports.append(_report(
                    "log_convexity", {"r": r, "z": str(z0)},
                    max(mpmath.mpf(0), -mpmath.re(acc)), tol))
        # multiplication formula
        for r in range(1, min(r_top, 2) + 1):
            for p in p_list:
                for zq in (Fraction(1), Fraction(3, 2)):
                    rep = multiplication_residual(r, p, to_mp((zq, Fraction(0)), dps), cfg)
                    reports.append(_report(
                        "multiplication", {"r": r, "p": p, "z": str(zq)},
                        rep.residual, tol))
    return reports


def cmd_verify(args) -> int:
    suite = args.suite
    p_list = parse_int_list(args.p)
    if args.r_max < 1:
        raise UsageError("--r-max must be >= 1")
    reports: list[dict] = []
    if suite in ("symbolic", "all"):
        for rep in check_identities(args.r_max, tuple(p_list)):
            reports.append(rep.to_json_obj())
    if suite in ("numeric", "all"):
        conv = load_conventions(args)  # hard error when missing — no silent default
        tol = args.tolerance if args.tolerance is not None else 1e-8
        cfg = make_config(args, conventions=conv)
        reports.extend(numeric_reports(args, cfg, p_list, tol))

    all_pass = all(rep["pass"] for rep in reports)
    if args.format == "json":
        emit_json({"suite": suite, "reports": reports, "pass": all_pass})
    else:
        header = ["identity", "params", "residual", "pass"]
        rows = [[rep["identity"], json.dumps(rep["params"], sort_keys=True),
                 str(rep["residual"]), "pass" if rep["pass"] else "FAIL"]
                for rep in reports]
        if args.format == "csv":
            emit_csv(header, [[c.replace(",", ";") for c in row] for row in rows])
        else:
            emit_text_table(header, rows)
    if not all_pass:
        first = next(rep for rep in reports if not rep["pass"])
        print(f"first counterexample: {json.dumps(first, sort_keys=True)}",
              file=sys.stderr)
        return 3
    return 0


# ---------------------------------------------------------------------------
# calibrate
# ---------------------------------------------------------------------------


def cmd_calibrate(args) -> int:
    cfg = make_config(args)
    path = conventions_path(args)
    resolved = calibrate_conventions(cfg, persist_path=path)
    if args.format == "json":
        emit_json({"path": path, "conventions": resolved.to_json_obj()})
    else:
        print(f"resolved: s_phi={resolved.s_phi} sigma_phi={resolved.sigma_phi} "
              f"s_R={resolved.s_R}")
        print(f"written : {path}")
        for item in resolved.evidence:
            p_str = "-" if item["p"] is None else str(item["p"])
            print(f"  {item['anchor']:14s} r={item['r']} p={p_str} "
                  f"z={item['z']:4s} residual={item['residual']:.3e}")
    return 0


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def cmd_constants(args) -> int:
    cfg = make_config(args)
    digits = args.precision
    js = parse_int_list(args.j)
    if any(j < 0 for j in js):
        raise UsageError("--j entries must be >= 0")
    rows = []
    with mpmath.workdps(cfg.precision.working_dps):
        for j in js:
            value = zeta_prime_neg(j, cfg.precision)
            rows.append([f"zeta'({-j})", nstr(value, digits)])
    if args.format == "json":
        emit_json({"constants": [{"name": name, "value": val} for name, val in rows]})
    elif args.format == "csv":
        emit_csv(["name", "value"], rows)
    else:
        emit_text_table(["name", "value"], rows)
    return 0


# ---------------------------------------------------------------------------
# Entry
# ---------------------------------------------------------------------------


_DISPATCH = {
    "eval": cmd_eval,
    "table": cmd_table,
    "verify": cmd_verify,
    "calibrate": cmd_calibrate,
    "constants": cmd_constants,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SingularInputError as exc:
        print(f"singular lattice point: {exc}", file=sys.stderr)
        return 2
    except CalibrationError as exc:
        print(f"calibration failed:\n{exc}", file=sys.stderr)
        return 4
    except ConventionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:  # cross-route disagreement is a failed check
        print(f"verification failure: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
