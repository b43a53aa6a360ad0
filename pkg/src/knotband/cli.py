"""Command-line front end: ``knotband invariants|bounds|table|verify-paper``.

Every command builds a JSON report first; text output is rendered from
that report.  Exit codes: 0 success, 2 input or parse error, 3 deduction
contradiction, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .bounds import Contradiction, Operand, build_operand, slice_obstruction, solve_pair, solve_single
from .diagram import DiagramError, render_pd
from .invariants import QEvaluator, identity_checks, invariants
from .notation import (
    ParseError, TableError, default_table_path, expr_diagram, load_knot_table, parse_expr, render_expr,
)
from .verify import RANGED, SUITES, run_suites

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONTRADICTION = 3
EXIT_VERIFY = 4

SCHEMA_PATH = Path(__file__).with_name("data") / "report.schema.json"


class InputError(ValueError):
    pass


def _table(args):
    path = Path(args.data) if args.data else default_table_path()
    try:
        return load_knot_table(path)
    except OSError as exc:
        raise InputError(f"cannot read knot table {path}: {exc.strerror or exc}") from None


def parse_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+))?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


# ---------------------------------------------------------------------------
# reports


def invariants_report(expr: str, table, evaluator: QEvaluator | None = None) -> dict:
    e = parse_expr(expr)
    d = expr_diagram(e, table)
    inv = invariants(d, q_evaluator=evaluator)
    return {
        "command": "invariants",
        "expr": render_expr(e),
        "diagram": render_pd(d),
        "crossings": d.n,
        "invariants": inv.to_json(),
        "checks": identity_checks(inv),
    }


def _operand_json(op: Operand) -> dict:
    return {
        "expr": op.label,
        "components": op.inv.components,
        "u": list(op.u) if op.u is not None else None,
        "asserted": {"bu": op.asserted_bu, "u2": op.asserted_u2, "provenance": op.provenance},
    }


def bounds_report(exprs: list[str], table, mode: str, gordian=None, evaluator: QEvaluator | None = None) -> dict:
    ops = [build_operand(e, table, evaluator) for e in exprs]
    single = len(ops) == 1
    report = {
        "command": "bounds",
        "mode": mode,
        "problem": "single" if single else "pair",
        "operands": [_operand_json(op) for op in ops],
        "gordian": list(gordian) if gordian else None,
    }
    try:
        st = solve_single(ops[0], mode) if single else solve_pair(ops[0], ops[1], mode, gordian)
    except Contradiction as exc:
        report.update(error="contradiction", message=str(exc), trace=exc.trace)
        return report
    names = ("bu", "u2") if single else ("bd", "d2")
    report["result"] = {names[0]: st.db.to_json(), names[1]: st.d2.to_json() if st.d2 else None}
    report["trace"] = list(st.trace)
    if single and ops[0].inv.components == 1:
        report["slice"] = slice_obstruction(ops[0].inv)
    return report


def _table_row(name: str, data_path: str | None, check: bool) -> dict:
    table = load_knot_table(data_path) if data_path else load_knot_table(default_table_path())
    rec = table[name]
    op = build_operand(name, table)
    row = {
        "name": name,
        "crossings": rec.crossings,
        "u": list(rec.u),
        "published": None,
        "note": rec.note,
        "derived": None,
        "asserted": None,
        "status": "computed",
    }
    out = {}
    for mode in ("derived", "asserted"):
        try:
            st = solve_single(op, mode)
            out[mode] = {"bu": st.db.to_json(), "u2": st.d2.to_json() if st.d2 else None}
        except Contradiction as exc:
            out[mode] = {"error": str(exc)}
    row.update(out)
    is_published = rec.note.startswith("published table") or rec.ambiguous
    if is_published and not rec.ambiguous:
        row["published"] = {"bu": rec.bu, "u2": rec.u2}
    if check and is_published:
        if rec.ambiguous:
            row["status"] = "flagged"
        else:
            a, d = row["asserted"], row["derived"]
            ok = a.get("bu") == [rec.bu, rec.bu] and a.get("u2") == [rec.u2, rec.u2]
            ok = ok and "bu" in d and _contains(d["bu"], rec.bu) and _contains(d["u2"], rec.u2)
            row["status"] = "ok" if ok else "mismatch"
    return row


def _contains(iv, v) -> bool:
    return iv[0] <= v and (iv[1] is None or v <= iv[1])


def table_report(table, data_path: str | None, max_crossings: int | None, check: bool, jobs: int = 1) -> dict:
    names = [n for n in table.names() if max_crossings is None or table[n].crossings <= max_crossings]
    args = [(n, data_path, check) for n in names]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_table_row, *zip(*args)))
    else:
        rows = [_table_row(*a) for a in args]
    return {
        "command": "table",
        "max_crossings": max_crossings,
        "check": check,
        "rows": rows,
        "processed": len(rows),
        "mismatches": sum(1 for r in rows if r["status"] == "mismatch"),
        "flagged": [r["name"] for r in rows if r["status"] == "flagged"],
    }


def verify_report(table, suites: list[str] | None, rng) -> dict:
    results = run_suites(table, suites, rng)
    return {
        "command": "verify-paper",
        "passed": all(r.passed for r in results),
        "range": list(rng) if rng else None,
        "suites": [r.to_json() for r in results],
    }


# ---------------------------------------------------------------------------
# text rendering


def _iv(v) -> str:
    if v is None:
        return "n/a"
    return f"[{v[0]},{'inf)' if v[1] is None else str(v[1]) + ']'}"


def render_text(report: dict) -> str:
    cmd = report["command"]
    lines = []
    if "error" in report and report["error"] != "contradiction":
        return f"error: {report['message']}"
    if cmd == "invariants":
        lines.append(f"{report['expr']}  ({report['crossings']} crossings)")
        lines.append(f"  diagram: {report['diagram']}")
        for k, v in report["invariants"].items():
            lines.append(f"  {k}: {json.dumps(v)}")
        checks = ", ".join(f"{k}={'pass' if v else 'FAIL'}" for k, v in report["checks"].items() if v is not None)
        lines.append(f"  checks: {checks}")
    elif cmd == "bounds":
        ops = " vs ".join(o["expr"] for o in report["operands"])
        lines.append(f"{ops}  (mode {report['mode']})")
        if "error" in report:
            lines.append(f"  contradiction: {report['message']}")
        else:
            lines.append("  " + ", ".join(f"{k}: {_iv(v)}" for k, v in report["result"].items()))
            if "slice" in report:
                lines.append(f"  slice obstruction: {report['slice']}")
        for e in report["trace"]:
            flag = " (asserted)" if e["asserted"] else ""
            b, a = e["before"], e["after"]
            lines.append(f"  {e['rule']}{flag}: {_iv(b['db'])},{_iv(b['d2'])} -> {_iv(a['db'])},{_iv(a['d2'])}"
                         f"  [{e['paper_ref']}]")
    elif cmd == "table":
        for r in report["rows"]:
            pub = r["published"]
            pub_s = f"published bu={pub['bu']} u2={pub['u2']}" if pub else ""
            d, a = r["derived"], r["asserted"]
            lines.append(f"{r['name']:<14} u={_iv(r['u'])}  derived bu={_iv(d.get('bu'))} u2={_iv(d.get('u2'))}  "
                         f"asserted bu={_iv(a.get('bu'))} u2={_iv(a.get('u2'))}  {pub_s}  {r['status']}")
        lines.append(f"processed {report['processed']}, mismatches {report['mismatches']}, "
                     f"flagged {', '.join(report['flagged']) or 'none'}")
    elif cmd == "verify-paper":
        for s in report["suites"]:
            mark = "PASS" if s["passed"] else "FAIL"
            lines.append(f"{mark}  {s['suite']:<14} {s['total'] - s['failed']}/{s['total']}")
            for c in s["checks"]:
                if not c["passed"]:
                    lines.append(f"      failed: {c['name']}: {c['detail']}")
        lines.append("all suites passed" if report["passed"] else "verification FAILED")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="knotband", description="Exact knot invariants and band-surgery bounds.")
    p.add_argument("--data", help="knot table (JSON lines); default $KNOTBAND_DATA or the bundled table")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariants", help="compute the invariant set of a knot expression")
    s.add_argument("expr")
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("bounds", help="bound bu/u2 of a knot, or bd/d2 of a pair")
    s.add_argument("exprs", nargs="+", metavar="EXPR", help="EXPR, or EXPR vs EXPR")
    s.add_argument("--mode", choices=("derived", "asserted"), default="derived")
    s.add_argument("--gordian", type=parse_range, help="known Gordian distance of the pair, N or LO..HI")
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("table", help="recompute bounds for every table knot")
    s.add_argument("--max-crossings", type=int)
    s.add_argument("--check", action="store_true", help="compare with the published values")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("verify-paper", help="run the family and table verification suites")
    s.add_argument("--suite", action="append", choices=sorted(SUITES))
    s.add_argument("--range", type=parse_range, help=f"integer range LO..HI for {', '.join(sorted(RANGED))}")
    s.add_argument("--json", action="store_true")
    return p


def _pair_exprs(exprs: list[str]) -> list[str]:
    if len(exprs) == 3 and exprs[1] == "vs":
        return [exprs[0], exprs[2]]
    if len(exprs) in (1, 2) and "vs" not in exprs:
        return exprs
    raise InputError("expected EXPR or EXPR vs EXPR")


def _join_ranges(argv: list[str]) -> list[str]:
    """Allow ``--range -3..3``; argparse would read the value as an option."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in ("--range", "--gordian") and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv: list[str] | None = None) -> tuple[dict, int]:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_join_ranges(argv))
    try:
        table = _table(args)
        if args.command == "invariants":
            report = invariants_report(args.expr, table)
            code = EXIT_OK
        elif args.command == "bounds":
            exprs = _pair_exprs(args.exprs)
            if args.gordian and len(exprs) != 2:
                raise InputError("--gordian needs a pair of knots")
            report = bounds_report(exprs, table, args.mode, args.gordian)
            code = EXIT_CONTRADICTION if "error" in report else EXIT_OK
        elif args.command == "table":
            report = table_report(table, args.data, args.max_crossings, args.check, args.jobs)
            code = EXIT_VERIFY if report["mismatches"] else EXIT_OK
        else:
            report = verify_report(table, args.suite, args.range)
            code = EXIT_OK if report["passed"] else EXIT_VERIFY
    except (ParseError, TableError, DiagramError, InputError) as exc:
        return {"command": args.command, "error": type(exc).__name__, "message": str(exc)}, EXIT_INPUT
    return report, code


def main(argv: list[str] | None = None) -> int:
    args_list = sys.argv[1:] if argv is None else argv
    report, code = run(args_list)
    want_json = "--json" in args_list
    if want_json:
        print(json.dumps(report, indent=2))
    else:
        print(render_text(report), file=sys.stderr if code == EXIT_INPUT else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
