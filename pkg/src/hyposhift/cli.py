"""Command-line entry point: ``hyposhift {classify,threshold,sweep,verify-berger,selftest}``.

Exit codes: 0 when every empirical verdict agrees with its closed-form
expectation, 1 on bad input, 2 on a mismatch or failed self-test, 3 when a
threshold search cannot bracket a verdict change.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import berger, checks, hyponormality as hy
from .kernels import BACKEND
from .scalar import FLOAT_TOL, format_scalar, parse_scalar
from .shifts import x_sequence_sq

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_BRACKET = 0, 1, 2, 3


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    mode: str = "exact"
    tol: float = hy.DEFAULT_BISECT_TOL
    u_bound: int = hy.DEFAULT_U_BOUND
    k_max: int = hy.DEFAULT_K_MAX
    output: str = "pretty"
    threads: int = 1


def _literal(text: str, name: str) -> Fraction:
    try:
        return parse_scalar(text, "exact")
    except (ValueError, ZeroDivisionError) as err:
        raise InputError(f"cannot parse {name}={text!r}: {err}") from None


def parse_grid(text: str, name: str) -> list[Fraction]:
    """Comma-separated literals, or ``lo:hi:n`` for n evenly spaced rationals."""
    if text.count(":") == 2:
        lo, hi, n = text.split(":")
        lo, hi = _literal(lo, name), _literal(hi, name)
        try:
            count = int(n)
        except ValueError:
            raise InputError(f"bad point count in {name}={text!r}") from None
        if count < 1:
            raise InputError(f"{name} grid needs at least one point")
        if count == 1:
            return [lo]
        return [lo + (hi - lo) * i / (count - 1) for i in range(count)]
    values = [_literal(t, name) for t in text.split(",") if t.strip()]
    if not values:
        raise InputError(f"{name} grid is empty")
    return values


def parse_k_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition("-")
        try:
            out.extend(range(int(lo), int(hi) + 1) if sep else [int(lo)])
        except ValueError:
            raise InputError(f"bad k list {text!r}") from None
    if not out or min(out) < 1:
        raise InputError("k values must be positive integers")
    return sorted(set(out))


def _config(ns) -> RunConfig:
    if ns.tol <= 0:
        raise InputError("--tol must be positive")
    if ns.ubound < 0:
        raise InputError("--ubound must be nonnegative")
    if ns.kmax < 1:
        raise InputError("--kmax must be at least 1")
    if ns.threads == "auto":
        threads = os.cpu_count() or 1
    else:
        try:
            threads = int(ns.threads)
        except ValueError:
            raise InputError(f"--threads must be an integer or 'auto', got {ns.threads!r}") from None
        if threads < 1:
            raise InputError("--threads must be at least 1")
    return RunConfig(ns.mode, ns.tol, ns.ubound, ns.kmax, ns.out, threads)


def _emit_rows(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
        return
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=hy.SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    out.write(buf.getvalue())


def _warn_outside(a2: Fraction) -> None:
    if a2 > hy.HALF:
        print(f"warning: a2={format_scalar(a2)} is outside the validated range a2 <= 1/2; "
              "verdicts are exploratory", file=sys.stderr)


def cmd_classify(ns, cfg: RunConfig, out) -> int:
    a2, y2 = _literal(ns.a2, "a2"), _literal(ns.y2, "y2")
    ks = parse_k_list(ns.k) if ns.k else list(range(1, cfg.k_max + 1))
    _warn_outside(a2)
    rep = hy.classify_point(a2, y2, u_bound=cfg.u_bound, mode=cfg.mode, k_list=ks,
                            tol=FLOAT_TOL)
    if cfg.output == "pretty":
        out.write(f"a2={format_scalar(a2)} y2={format_scalar(y2)} u_bound={cfg.u_bound} "
                  f"mode={cfg.mode}\n")
        for r in rep.rows:
            exp = "-" if r.expected is None else ("pass" if r.expected else "fail")
            thr = "" if r.threshold is None else f"  D^2={format_scalar(r.threshold)}"
            wit = "" if r.witness_u is None else f"  witness u={r.witness_u}"
            flag = "" if r.agree is None else ("  ok" if r.agree else "  MISMATCH")
            out.write(f"  k={r.k}: {'pass' if r.holds else 'fail'} (expected {exp}){thr}{wit}{flag}\n")
        if rep.subnormal_bound is not None:
            out.write(f"subnormal bound: {format_scalar(rep.subnormal_bound)}\n")
        out.write(f"{rep.label}\n")
    else:
        _emit_rows(hy.report_rows(rep), cfg.output, out)
    return EXIT_MISMATCH if rep.disagreements else EXIT_OK


def cmd_threshold(ns, cfg: RunConfig, out) -> int:
    a2 = _literal(ns.a2, "a2")
    try:
        k = int(ns.k)
    except ValueError:
        raise InputError(f"--k must be an integer, got {ns.k!r}") from None
    if k < 1:
        raise InputError("--k must be at least 1")
    _warn_outside(a2)
    try:
        rep = hy.bisect_threshold(hy.figure2_factory, a2, k, cfg.tol, cfg.u_bound,
                                  mode=cfg.mode)
    except hy.BracketError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BRACKET
    agree = rep.closed_form_y2 is None or rep.lo <= rep.closed_form_y2 <= rep.hi
    record = {
        "a2": format_scalar(a2), "k": k,
        "closed_form": None if rep.closed_form_y2 is None else format_scalar(rep.closed_form_y2),
        "closed_form_float": None if rep.closed_form_y2 is None else float(rep.closed_form_y2),
        "bisected": rep.bisected_y2,
        "bracket": [format_scalar(rep.lo), format_scalar(rep.hi)],
        "gap": rep.abs_gap, "exact_confirmed": rep.exact_confirmed,
        "evaluations": rep.evaluations, "agree": agree,
    }
    if cfg.output == "json":
        json.dump(record, out, indent=2)
        out.write("\n")
    elif cfg.output == "csv":
        w = csv.DictWriter(out, fieldnames=list(record), lineterminator="\n")
        w.writeheader()
        w.writerow({**record, "bracket": ";".join(record["bracket"])})
    else:
        cf = "n/a" if record["closed_form"] is None else \
            f"{record['closed_form']} ({record['closed_form_float']:.12g})"
        out.write(f"a2={record['a2']} k={k}\n  closed form y2: {cf}\n"
                  f"  bisected y2:    {rep.bisected_y2:.12g}\n"
                  f"  bracket:        [{record['bracket'][0]}, {record['bracket'][1]}]\n")
        if rep.abs_gap is not None:
            out.write(f"  gap:            {rep.abs_gap:.3e}\n")
        out.write(f"  {'agrees' if agree else 'MISMATCH'}\n")
    return EXIT_OK if agree else EXIT_MISMATCH


def cmd_sweep(ns, cfg: RunConfig, out) -> int:
    a2s, y2s = parse_grid(ns.a2, "a2"), parse_grid(ns.y2, "y2")
    ks = parse_k_list(ns.k) if ns.k else list(range(1, cfg.k_max + 1))
    for a2 in sorted(set(a2s)):
        _warn_outside(a2)
    rows = hy.sweep(a2s, y2s, ks, cfg.u_bound, cfg.mode, cfg.threads, FLOAT_TOL)
    _emit_rows(rows, "json" if cfg.output == "json" else "csv", out)
    return EXIT_MISMATCH if any(r["agree"] == "no" for r in rows) else EXIT_OK


def cmd_verify_berger(ns, cfg: RunConfig, out) -> int:
    y2 = _literal(ns.y2, "y2")
    n = ns.moments
    w = x_sequence_sq(y2)
    mismatch = berger.first_moment_mismatch(w, berger.builtin_measure("mu_x", y2=y2), n)
    record: dict = {"y2": format_scalar(y2), "moments_checked": n,
                    "first_mismatch": mismatch, "berger_ok": mismatch is None}
    ok = mismatch is None
    if ns.a2 is not None:
        a2 = _literal(ns.a2, "a2")
        _warn_outside(a2)
        res = berger.figure2_extension(a2, y2)
        expected = y2 <= hy.closed_form("subnormal", a2) if a2 <= hy.HALF else None
        record.update({
            "a2": format_scalar(a2), "subnormal": res.subnormal,
            "failed_condition": res.failed_condition,
            "witness": None if res.witness is None else str(res.witness),
            "expected_subnormal": expected,
        })
        if res.subnormal:
            record["mass"] = format_scalar(res.constructed_mu.total_mass())
        ok = ok and (expected is None or expected == res.subnormal)
    record["agree"] = ok
    if cfg.output == "json":
        json.dump(record, out, indent=2)
        out.write("\n")
    elif cfg.output == "csv":
        w_ = csv.DictWriter(out, fieldnames=list(record), lineterminator="\n")
        w_.writeheader()
        w_.writerow(record)
    else:
        status = "ok" if mismatch is None else f"first mismatch at n={mismatch}"
        out.write(f"x-sequence y2={record['y2']}: moments 0..{n} vs mu_x: {status}\n")
        if "a2" in record:
            verdict = "subnormal" if record["subnormal"] else \
                f"not subnormal (condition {record['failed_condition']} fails, witness {record['witness']})"
            out.write(f"backward extension a2={record['a2']}: {verdict}\n")
            if record["expected_subnormal"] is not None:
                out.write(f"  expected {'subnormal' if record['expected_subnormal'] else 'not subnormal'}\n")
        out.write("agrees\n" if ok else "MISMATCH\n")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_selftest(ns, cfg: RunConfig, out) -> int:
    results = checks.run_all(seed=ns.seed)
    if cfg.output == "json":
        json.dump([{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results], out, indent=2)
        out.write("\n")
    else:
        for r in results:
            out.write(f"{'PASS' if r.ok else 'FAIL'} {r.name} ({r.seconds:.2f}s)"
                      f"{': ' + r.detail if r.detail else ''}\n")
        out.write(f"kernel backend: {BACKEND}\n")
    return EXIT_OK if all(r.ok for r in results) else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--tol", type=float, default=hy.DEFAULT_BISECT_TOL,
                        help="bisection tolerance in y2")
    common.add_argument("--ubound", type=int, default=hy.DEFAULT_U_BOUND)
    common.add_argument("--kmax", type=int, default=hy.DEFAULT_K_MAX)
    common.add_argument("--out", choices=("csv", "json", "pretty"), default="pretty")
    common.add_argument("--threads", default="1", help="worker processes, or 'auto'")

    p = _Parser(prog="hyposhift", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", parents=[common], help="per-k verdicts at one (a2, y2)")
    c.add_argument("--a2", required=True)
    c.add_argument("--y2", required=True)
    c.add_argument("--k", help="k values, e.g. 2 or 1-4 or 1,3 (default 1..kmax)")
    c.set_defaults(func=cmd_classify)

    t = sub.add_parser("threshold", parents=[common], help="bisect the k-hyponormality boundary in y2")
    t.add_argument("--a2", required=True)
    t.add_argument("--k", required=True)
    t.set_defaults(func=cmd_threshold)

    s = sub.add_parser("sweep", parents=[common], help="grid of (a2, y2, k) verdicts as CSV or JSON")
    s.add_argument("--a2", required=True, help="comma list or lo:hi:n")
    s.add_argument("--y2", required=True, help="comma list or lo:hi:n")
    s.add_argument("--k", help="k values (default 1..kmax)")
    s.set_defaults(func=cmd_sweep)

    b = sub.add_parser("verify-berger", parents=[common],
                       help="moment check of the x-sequence measure and the backward extension")
    b.add_argument("--y2", default="1")
    b.add_argument("--a2", help="also test the backward extension of the 2-variable family")
    b.add_argument("--moments", type=int, default=100)
    b.set_defaults(func=cmd_verify_berger)

    st = sub.add_parser("selftest", parents=[common], help="run the property suites")
    st.add_argument("--seed", type=int, default=20240601)
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns, _config(ns), out)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as err:
        # domain checks on parameters (e.g. a2 outside (0, 1])
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
