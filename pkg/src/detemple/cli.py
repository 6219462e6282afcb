"""Command-line front end: constants, sequences, bound brackets and verification suites.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage errors.
The run configuration is echoed to stderr so any output can be reproduced.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import algebra, cm_verify, kernel, sequences, special
from .errors import DomainError
from .extprec import ExtReal

STATUS_OK = ("pass", "info")


@dataclass
class Row:
    check: str
    status: str  # pass, fail, equal or info
    computed_value: object = None
    paper_value: object = None
    margin: object = None
    detail: str = ""


def num(v, digits: int = 30) -> str | None:
    """Decimal string with ``digits`` significant digits; None passes through."""
    if v is None:
        return None
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, Fraction):
        v = ExtReal.from_fraction(v)
    elif not isinstance(v, ExtReal):
        v = ExtReal(float(v))
    return v.to_string(digits)


def short(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (str, bool, int)):
        return str(v)
    return f"{float(v):.10g}"


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# ---------------------------------------------------------------------------
# constants

# name, closed form, paper value, tolerance
_PAPER_CONSTANTS = (
    ("c0", "min over t > 0 of Q'(t)/Q(t)", -0.061875, 5e-6),
    ("t0", "argmin of Q'(t)/Q(t)", 15.40151, 1e-4),
    ("a0", "sqrt(c0^2 + 7/40) - c0", 0.48476, 5e-5),
    ("lambda1", None, 0.007979, 5e-6),
    ("lambda2", None, 0.0090636, 5e-7),
    ("lambda3", None, 0.0016903, 5e-7),
    ("lambda4", None, -0.000032387, 5e-9),
    ("villarino", "1/(1 - ln 3 + ln 2 - gamma) - 54", 3.7393, 5e-4),
    ("chen_lambda", "1/(2 sqrt(6(1 - gamma - ln 3 + ln 2))) - 1", 0.55107, 5e-5),
)


def constants_rows() -> list[Row]:
    m = kernel.minimize_ratio()
    lam = cm_verify.lambda_constants()
    values = {
        "c0": ExtReal(m.c0),
        "t0": ExtReal(m.t0),
        "a0": kernel.a0_extended(m.c0),
        "lambda1": lam.lambda1,
        "lambda2": lam.lambda2,
        "lambda3": lam.lambda3,
        "lambda4": lam.lambda4,
        "villarino": cm_verify.villarino_constant(),
        "chen_lambda": cm_verify.chen_lambda(),
    }
    rows = []
    g = special.euler_gamma()
    ref = special.euler_gamma("reference")
    diff = abs(float(g.value - ref.value))
    rows.append(Row("gamma", _status(diff < 1e-30), g.value, ref.digits, diff,
                    "Richardson limit of z_n vs stored reference"))
    for name, form, paper, tol in _PAPER_CONSTANTS:
        v = values[name]
        d = abs(float(v) - paper)
        form = form or lam.provenance[name]
        rows.append(Row(name, _status(d <= tol), v, paper, d, f"{form}; tolerance {tol:g}"))
    rows.append(Row("ratio_at_printed_t0", "info", kernel.ratio(15.40151), -0.061875, None,
                    "Q'/Q evaluated at the printed t0; the slope there is positive, so it is not the minimum"))
    rows.append(Row("a0_from_printed_c0", "info", kernel.a0(-0.061875), 0.48476, None,
                    "sqrt(c0^2 + 7/40) - c0 with the printed c0"))
    return rows


# ---------------------------------------------------------------------------
# sequences

SEQ_KINDS = ("D", "R", "w", "y", "z")


def seq_rows(kind: str, n_max: int) -> list[list]:
    """(n, value, value - gamma) for n = 1..n_max."""
    limit = 10**6 if kind in ("D", "R") else 300
    if not 1 <= n_max <= limit:
        raise DomainError(f"--n-max for kind {kind} must be in [1, {limit}]")
    g = special.euler_gamma().value
    out = []
    for n in range(1, n_max + 1):
        if kind == "D":
            v = sequences.classical_D(n)
            err = v - g
        elif kind == "R":
            v = sequences.detemple_R(n)
            err = sequences.r_half(n)
        else:
            corr = ExtReal.from_fraction(sequences.correction(kind, Fraction(2 * n + 1, 2)))
            v = sequences.accel(kind, n)
            err = sequences.r_half(n) - corr
        out.append([n, v, err])
    return out


# ---------------------------------------------------------------------------
# bounds


def bounds_rows(family: str, n_max: int, workers: int = 1) -> list[Row]:
    names = sequences.FAMILY_NAMES if family == "all" else (family,)
    rows = []
    for name in names:
        rep = sequences.check_brackets(name, n_max, workers=workers)
        margin = min(rep.min_lower_margin, rep.min_upper_margin)
        if rep.violations:
            n, side, m = rep.violations[0]
            status = "fail"
            detail = f"{len(rep.violations)} violations; first at n={n} ({side}, margin {m:.3e})"
        elif rep.attained:
            status = "equal"
            sides = ", ".join(f"{side} at n={n}" for n, side, _ in rep.attained)
            detail = f"equality ({sides}): best constant attained, strict inequality fails there"
        else:
            status = "pass"
            detail = f"min lower margin at n={rep.argmin_lower}, min upper margin at n={rep.argmin_upper}"
        rows.append(Row(f"{name} brackets R_n - gamma, n <= {n_max}", status, None, None, margin, detail))
    if family == "all":
        rows.extend(comparison_rows(min(n_max, 1000)))
    return rows


def _compare(label: str, n_max: int, pred) -> Row:
    bad = [n for n in range(1, n_max + 1) if not pred(n)]
    detail = f"fails at {len(bad)} of {n_max} n, first n={bad[0]}" if bad else f"holds for n <= {n_max}"
    return Row(label, _status(not bad), None, None, None, detail)


def comparison_rows(n_max: int) -> list[Row]:
    d2 = sequences.bound_family("d2")
    de2 = sequences.bound_family("de2")
    d4 = sequences.bound_family("d4")
    return [
        _compare("d2_upper < de2_upper", n_max, lambda n: d2.upper(n) < de2.upper(n)),
        _compare("d4_lower > d2_lower", n_max, lambda n: d4.lower(n) > d2.lower(n)),
        _compare("d4_upper < d2_upper", n_max, lambda n: d4.upper(n) < d2.upper(n)),
    ]


# ---------------------------------------------------------------------------
# verification suites

SUITES = ("lemmas", "identities", "cm", "thresholds", "limits")


def identities_rows() -> list[Row]:
    rows = []
    for fn in algebra.IDENTITY_SUITE:
        chk = fn()
        # margin: number of nonzero residual coefficients
        rows.append(Row(chk.name, _status(chk.holds), None, None, len(chk.residual), chk.detail))
    facts = algebra.verify_u_closed_series(3, 50).facts
    rows.append(Row("u_2 closed form vs series", "info", facts.get("n2_closed_form"),
                    facts.get("n2_series_times_factorial"), None,
                    "the closed form describes n >= 3 only"))
    return rows


def lemmas_rows(grid_points: int) -> list[Row]:
    rows = []
    t_grid = cm_verify.log_grid(1e-3, 50.0, grid_points)
    hyp = cm_verify.hyperbolic_check(t_grid)
    for label, m in hyp.min_margin.items():
        ok = not any(v[0] == label for v in hyp.violations)
        rows.append(Row(label, _status(ok), None, None, m, f"{grid_points}-point log grid on [1e-3, 50]"))
    t_grid = cm_verify.log_grid(1e-3, 300.0, grid_points)
    for which, label in (("q1", "q1 = Q'' + (7/40)Q > 0"), ("q2", "q2 = Q'''' - (31/336)Q < 0"),
                         ("q3", "q3 = Q'''' + (11165/8284)Q'' + (199849/1391712)Q > 0")):
        rep = cm_verify.integrand_check(which, t_grid=t_grid)
        ok = rep.passed and rep.min_margin_away > 1e-12
        rows.append(Row(label, _status(ok), None, None, rep.min_margin_away,
                        f"margin on t >= {rep.tangency_cutoff}; smallest overall {rep.min_margin:.3e} at t={rep.argmin:.3g}"))
    a0 = kernel.a0()
    rep = cm_verify.integrand_check("delta", a0, t_grid)
    rows.append(Row("delta_a0 >= -1e-10", _status(rep.min_margin >= -1e-10), a0, None, rep.min_margin,
                    f"minimum at t={rep.argmin:.4g}"))
    mono = cm_verify.v_monotone_check()
    rows.append(Row("V increasing", _status(mono.v_increasing), None, None, None,
                    f"{mono.n_points} points, {len(mono.v_violations)} violations"))
    rows.append(Row("155/294 <= f/F ratio <= 11165/8284", _status(mono.ratio_in_bounds),
                    mono.ratio_max, float(cm_verify.A3), None,
                    f"range [{mono.ratio_min:.6g}, {mono.ratio_max:.6g}]"))
    rows.append(Row("f/F ratio increasing on the grid", "info", None, None, None, str(mono.ratio_monotone).lower()))
    return rows


def _cm_grid(grid_points: int) -> list[float]:
    # step 0.1 from 0.1; grid_points = 500 is x in [0.1, 50]
    if not 1 <= grid_points <= 1000:
        raise DomainError("--grid-points must be in [1, 1000] for the cm suite")
    return cm_verify.standard_grid(grid_points)


def cm_rows(grid_points: int, k_max: int) -> list[Row]:
    grid = _cm_grid(grid_points)
    cases = (
        ("h", kernel.a0(), "h_a0"),
        ("F", cm_verify.A1, "F_7/40"),
        ("f", cm_verify.A2, "f_-31/336"),
        ("G", cm_verify.A3, "G_11165/8284"),
    )
    rows = []
    for fam, a, label in cases:
        rep = cm_verify.sign_pattern(fam, a, grid, k_max)
        detail = f"orders 0..{k_max}, {len(grid)} points, {len(rep.indeterminate)} indeterminate"
        if rep.violations:
            x, k, m = rep.violations[0]
            detail += f"; first violation x={x}, k={k}"
        rows.append(Row(f"{label} sign pattern", _status(rep.passed), None, None, rep.min_margin, detail))
    rep = cm_verify.sign_pattern("h", 0.1, grid, k_max)
    rows.append(Row("h_0.1 sign pattern finds violations", _status(not rep.passed), None, None, rep.min_margin,
                    f"{len(rep.violations)} violations below the empirical threshold"))
    return rows


# family, side, interval, exact value, tolerance, printed value, note
_THRESHOLDS = (
    ("F", "min_a", (0.0, 1.0), Fraction(7, 40), 1e-3, "17/40",
     "necessity limit is a - 7/40 >= 0; the printed 17/40 does not match it"),
    ("f", "max_a", (-1.0, 0.0), Fraction(-31, 336), 1e-3, "-31/336", ""),
    ("G", "min_a", (0.0, 3.0), Fraction(11165, 8284), 1e-2, "11165/8284", ""),
)


def thresholds_rows(grid_points: int, k_max: int) -> list[Row]:
    grid = _cm_grid(grid_points)
    rows = []
    for fam, side, iv, exact, tol, printed, note in _THRESHOLDS:
        v = cm_verify.threshold_bisect(fam, side, iv, tol=1e-5, grid=grid, k_max=k_max)
        d = abs(v - float(exact))
        detail = f"exact {exact}, tolerance {tol:g}" + (f"; {note}" if note else "")
        rows.append(Row(f"{fam} threshold", _status(d <= tol), v, printed, d, detail))
    v = cm_verify.threshold_bisect("h", "min_a", (0.0, 1.0), tol=1e-5, grid=grid, k_max=k_max)
    a0 = kernel.a0()
    rows.append(Row("h threshold <= a0", _status(v <= a0), v, 0.48476, a0 - v,
                    f"a0 = {a0:.8f} is sufficient only"))
    return rows


_LIMIT_CASES = (
    ("w", 8, (20, 40, 80, 160)),
    ("y", 10, (10, 20, 40, 80)),
    ("z", 8, (20, 40, 80, 160)),
)


def limits_rows() -> list[Row]:
    rows = []
    for kind, p, ns in _LIMIT_CASES:
        est = sequences.estimate_limit(kind, p, ns)
        rows.append(Row(f"lim n^{p}({kind}_n - gamma)", _status(est.rel_error < 0.02), est.estimate,
                        est.target, est.rel_error, f"n = {', '.join(map(str, ns))}"))
    return rows


def suite_rows(suite: str, grid_points: int | None = None, k_max: int = 6) -> list[Row]:
    if not 0 <= k_max <= 8:
        raise DomainError("--k-max must be in [0, 8]")
    if suite == "identities":
        return identities_rows()
    if suite == "lemmas":
        return lemmas_rows(grid_points or 2000)
    if suite == "cm":
        return cm_rows(grid_points or 500, k_max)
    if suite == "thresholds":
        return thresholds_rows(grid_points or 500, k_max)
    if suite == "limits":
        return limits_rows()
    raise DomainError(f"unknown suite {suite!r}")


# ---------------------------------------------------------------------------
# output

ROW_FIELDS = ("check", "status", "margin", "paper_value", "computed_value", "detail")


def _row_dict(r: Row) -> dict:
    return {
        "check": r.check,
        "status": r.status,
        "margin": num(r.margin),
        "paper_value": num(r.paper_value),
        "computed_value": num(r.computed_value),
        "detail": r.detail,
    }


def emit_rows(rows: list[Row], fmt: str, command: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        doc = {
            "command": command,
            "status": "pass" if all(r.status in STATUS_OK for r in rows) else "fail",
            "results": [_row_dict(r) for r in rows],
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(ROW_FIELDS)
        for r in rows:
            d = _row_dict(r)
            w.writerow(["" if d[k] is None else d[k] for k in ROW_FIELDS])
    else:
        table = [("check", "status", "computed", "reference", "margin", "detail")]
        for r in rows:
            table.append((r.check, r.status, short(r.computed_value), short(r.paper_value),
                          short(r.margin), r.detail))
        _print_table(table, out)


def emit_seq(rows: list[list], kind: str, fmt: str, out=None) -> None:
    out = out or sys.stdout
    header = ("n", "value", "value_minus_gamma")
    if fmt == "json":
        doc = {
            "command": f"seq {kind}",
            "status": "pass",
            "columns": list(header),
            "rows": [[str(n), num(v), num(e)] for n, v, e in rows],
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for n, v, e in rows:
            w.writerow([n, num(v), num(e)])
    else:
        _print_table([header] + [(str(n), num(v, 20), num(e, 12)) for n, v, e in rows], out)


def _print_table(table, out) -> None:
    widths = [max(len(str(row[i])) for row in table) for i in range(len(table[0]))]
    for j, row in enumerate(table):
        out.write("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")
        if j == 0:
            out.write("  ".join("-" * w for w in widths) + "\n")


# ---------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="detemple", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("constants", help="computed constants beside their printed approximations")

    s = sub.add_parser("seq", help="rows (n, value, value - gamma) of a sequence")
    s.add_argument("--kind", choices=SEQ_KINDS, required=True)
    s.add_argument("--n-max", type=int, required=True)

    b = sub.add_parser("bounds", help="check a bound family against R_n - gamma")
    b.add_argument("--family", choices=sequences.FAMILY_NAMES + ("all",), required=True)
    b.add_argument("--n-max", type=int, default=10**4)
    b.add_argument("--workers", type=int, default=1)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--grid-points", type=int, default=None)
    v.add_argument("--k-max", type=int, default=6)
    return p


def _config_line(args) -> str:
    items = " ".join(f"{k}={v}" for k, v in sorted(vars(args).items()))
    return f"# detemple config: {items}"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    print(_config_line(args), file=sys.stderr)
    try:
        if args.command == "seq":
            emit_seq(seq_rows(args.kind, args.n_max), args.kind, args.format)
            return 0
        if args.command == "constants":
            rows = constants_rows()
        elif args.command == "bounds":
            if not 1 <= args.n_max <= 10**6:
                raise DomainError("--n-max must be in [1, 10^6]")
            rows = bounds_rows(args.family, args.n_max, args.workers)
        else:
            rows = suite_rows(args.suite, args.grid_points, args.k_max)
    except DomainError as exc:
        print(f"detemple: error: {exc}", file=sys.stderr)
        return 2
    emit_rows(rows, args.format, args.command)
    failed = [r for r in rows if r.status not in STATUS_OK]
    if failed:
        print(f"detemple: {len(failed)} check(s) failed, first: {failed[0].check}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
