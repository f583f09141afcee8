"""Command-line surface: compute, sweep, classify, pd.

Exit codes: 0 success, 2 input/parse error, 3 resource cap exceeded,
4 disagreement between computation routes (never swallowed).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import diagram, formulas, khcube, linalg, twist

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_RESOURCE = 3
EXIT_DISAGREE = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _table_json(table: linalg.HomologyTable) -> list[dict]:
    return [
        {"h": h, "q": q, "rank": rk, "torsion": list(tor)}
        for (h, q), (rk, tor) in table.sorted_items()
    ]


def _poly_table(poly: formulas.BigradedPoly) -> linalg.HomologyTable:
    return linalg.HomologyTable(
        {(he, qe): (c, ()) for (qe, he), c in poly.coeffs.items()})


def _delta_json(two_delta: dict[int, int]) -> dict[str, int]:
    return {str(k): v for k, v in sorted(two_delta.items())}


def _require_pattern(p, q, r, pattern: Optional[str]) -> str:
    if pattern is not None:
        if pattern not in diagram.valid_orientation_patterns(p, q, r):
            raise CliError(
                f"pattern {pattern} not realizable for P(-{p},{q},{r})",
                EXIT_PARSE)
        return pattern
    try:
        return diagram.knot_orientation_pattern(p, q, r)
    except diagram.OrientationError:
        raise CliError(
            "orientation required: this pretzel is a link; pass "
            "--orientation (one of "
            + ",".join(sorted(diagram.valid_orientation_patterns(p, q, r)))
            + ")", EXIT_PARSE)


def _cube_only_report(params: diagram.PretzelParams,
                      max_crossings: int) -> dict:
    """Oracle-only report for twist signs outside the P(-p, q, r) family."""
    t_start = time.perf_counter()
    pd = diagram.build_pretzel_pd(params)
    try:
        cx = khcube.build_reduced_complex(pd, max_crossings=max_crossings)
    except khcube.ResourceCapError as e:
        raise CliError(str(e), EXIT_RESOURCE)
    table = linalg.homology(cx)
    return {
        "twists": list(params.twists),
        "orientation": pd.orientation,
        "n_plus": pd.n_plus, "n_minus": pd.n_minus,
        "methods": {"cube": {
            "homology": _table_json(table),
            "two_delta": _delta_json(linalg.delta_collapse(table)),
            "torsion": table.torsion(),
        }},
        "agree": True,
        "ms": round(1000 * (time.perf_counter() - t_start), 3),
    }


def compute_report(params: diagram.PretzelParams, methods: list[str],
                   pattern: Optional[str], max_crossings: int) -> dict:
    """Run the requested routes on a pretzel and cross-compare."""
    t_start = time.perf_counter()
    try:
        p, q, r, mirrored = diagram.normalize_params(params)
    except diagram.DiagramError as e:
        if methods == ["cube"]:
            # the oracle takes any twist signs; only the formula and twist
            # routes are tied to the P(-p, q, r) family
            return _cube_only_report(params, max_crossings)
        raise CliError(str(e), EXIT_PARSE)
    if mirrored:
        if methods == ["cube"]:
            return _cube_only_report(params, max_crossings)
        raise CliError(
            f"{params} has two or more negative twist counts; compute its "
            "mirror image instead", EXIT_PARSE)
    pattern = _require_pattern(p, q, r, pattern)
    n_plus, n_minus = diagram.crossing_counts(pattern, p, q, r)

    tables: dict[str, linalg.HomologyTable] = {}
    notes: dict[str, str] = {}
    formula_applies = p >= 2
    for method in methods:
        if method == "cube":
            pd = diagram.build_pretzel_pd(
                diagram.PretzelParams(-p, q, r), pattern)
            try:
                cx = khcube.build_reduced_complex(
                    pd, max_crossings=max_crossings)
            except khcube.ResourceCapError as e:
                raise CliError(str(e), EXIT_RESOURCE)
            tables[method] = linalg.homology(cx)
        elif method == "fast":
            tables[method] = twist.fast_homology(p, q, r, pattern)
        elif method == "formula":
            if not formula_applies:
                notes[method] = ("quasi-alternating (p = 1): no closed "
                                 "formula; deferring to the other routes")
                continue
            tables[method] = _poly_table(
                formulas.bigraded_table(p, q, r, pattern))
        else:
            raise CliError(f"unknown method {method!r}", EXIT_PARSE)

    computed = list(tables.values())
    agree = all(t == computed[0] for t in computed[1:]) if computed else True
    report = {
        "p": p, "q": q, "r": r,
        "orientation": pattern,
        "n_plus": n_plus, "n_minus": n_minus,
        "methods": {},
        "classification": diagram.classify(p, q, r).value,
        "agree": agree,
        "ms": round(1000 * (time.perf_counter() - t_start), 3),
    }
    for method, table in tables.items():
        report["methods"][method] = {
            "homology": _table_json(table),
            "two_delta": _delta_json(linalg.delta_collapse(table)),
            "torsion": table.torsion(),
        }
    for method, note in notes.items():
        report["methods"][method] = {"note": note}
    return report


def _print_report(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, sort_keys=True))
        return
    if "twists" in report:
        head = "P(%d,%d,%d)" % tuple(report["twists"])
    else:
        head = (f"P(-{report['p']},{report['q']},{report['r']})"
                f"  [{report['classification']}]")
    print(f"{head}  orientation {report['orientation']}  "
          f"n+ = {report['n_plus']}  n- = {report['n_minus']}")
    for method, data in report["methods"].items():
        if "note" in data:
            print(f"  {method}: {data['note']}")
            continue
        print(f"  {method}:")
        for row in data["homology"]:
            tor = ("  torsion " + "+".join(f"Z/{t}" for t in row["torsion"])
                   if row["torsion"] else "")
            print(f"    h={row['h']:>3}  q={row['q']:>3}  "
                  f"rank {row['rank']}{tor}")
        print(f"    2-delta table: {data['two_delta']}")
    print(f"  agreement: {'match' if report['agree'] else 'MISMATCH'}  "
          f"({report['ms']} ms)")


def cmd_compute(args) -> int:
    try:
        params = diagram.PretzelParams.parse(args.link)
    except diagram.DiagramError as e:
        raise CliError(str(e), EXIT_PARSE)
    methods = (["cube", "fast", "formula"] if args.method == "all"
               else [args.method])
    report = compute_report(params, methods, args.orientation,
                            args.max_crossings)
    _print_report(report, args.format)
    return EXIT_OK if report["agree"] else EXIT_DISAGREE


def cmd_pd(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(str(e), EXIT_PARSE)
    try:
        pd = khcube.parse_pd(text)
        cx = khcube.build_reduced_complex(pd, max_crossings=args.max_crossings)
    except (khcube.ParseError, diagram.DiagramError) as e:
        raise CliError(str(e), EXIT_PARSE)
    except khcube.ResourceCapError as e:
        raise CliError(str(e), EXIT_RESOURCE)
    table = linalg.homology(cx)
    report = {
        "crossings": pd.n_crossings,
        "components": pd.components,
        "n_plus": pd.n_plus, "n_minus": pd.n_minus,
        "homology": _table_json(table),
        "two_delta": _delta_json(linalg.delta_collapse(table)),
        "torsion": table.torsion(),
    }
    if args.format == "json":
        print(json.dumps(report, sort_keys=True))
    else:
        print(f"{pd.n_crossings} crossings, {pd.components} component(s), "
              f"n+ = {pd.n_plus}, n- = {pd.n_minus}")
        for row in report["homology"]:
            print(f"  h={row['h']:>3}  q={row['q']:>3}  rank {row['rank']}")
        print(f"  2-delta table: {report['two_delta']}")
    return EXIT_OK


def cmd_classify(args) -> int:
    try:
        cls = diagram.classify(args.p, args.q, args.r)
    except diagram.DiagramError as e:
        raise CliError(str(e), EXIT_PARSE)
    report = {"p": args.p, "q": args.q, "r": args.r,
              "classification": cls.value}
    if args.with_homology:
        p, q, r = sorted((args.p, args.q, args.r))
        pat = sorted(diagram.valid_orientation_patterns(p, q, r))[0]
        table = twist.fast_homology(p, q, r, pat)
        delta = linalg.delta_collapse(table)
        report["delta_width"] = len(delta)
        report["two_delta"] = _delta_json(delta)
    if args.format == "json":
        print(json.dumps(report, sort_keys=True))
    else:
        msg = f"P(-{args.p},{args.q},{args.r}): {cls.value}"
        if "delta_width" in report:
            msg += (f"  (delta-width {report['delta_width']}, "
                    f"2-delta table {report['two_delta']})")
        print(msg)
    return EXIT_OK


def sweep_instances(max_sum: int):
    for p in range(2, max_sum - 3):
        for q in range(p, max_sum - p - 1):
            for r in range(q, max_sum - p - q + 1):
                for pat in sorted(
                        diagram.valid_orientation_patterns(p, q, r)):
                    yield p, q, r, pat


def cmd_sweep(args) -> int:
    methods = args.methods.split(",")
    for m in methods:
        if m not in ("cube", "fast", "formula"):
            raise CliError(f"unknown method {m!r}", EXIT_PARSE)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    mismatches = []
    try:
        for p, q, r, pat in sweep_instances(args.max_sum):
            t0 = time.perf_counter()
            tables = {}
            if "cube" in methods:
                pd = diagram.build_pretzel_pd(
                    diagram.PretzelParams(-p, q, r), pat)
                try:
                    cx = khcube.build_reduced_complex(
                        pd, max_crossings=args.max_crossings)
                except khcube.ResourceCapError as e:
                    raise CliError(str(e), EXIT_RESOURCE)
                tables["cube"] = linalg.homology(cx)
            if "fast" in methods:
                tables["fast"] = twist.fast_homology(p, q, r, pat)
            if "formula" in methods and p >= 2:
                tables["formula"] = _poly_table(
                    formulas.bigraded_table(p, q, r, pat))
            ref = next(iter(tables.values()))
            agree = all(t == ref for t in tables.values())
            torsion_free = all(t.torsion() == [] for t in tables.values())
            ms = round(1000 * (time.perf_counter() - t0), 3)
            for method, table in sorted(tables.items()):
                line = {
                    "p": p, "q": q, "r": r, "orientation": pat,
                    "n_plus": diagram.crossing_counts(pat, p, q, r)[0],
                    "n_minus": diagram.crossing_counts(pat, p, q, r)[1],
                    "method": method,
                    "homology": _table_json(table),
                    "two_delta": _delta_json(linalg.delta_collapse(table)),
                    "agree": agree and torsion_free,
                    "ms": ms,
                }
                out.write(json.dumps(line, sort_keys=True) + "\n")
            if not (agree and torsion_free):
                mismatches.append((p, q, r, pat))
    finally:
        if out is not sys.stdout:
            out.close()
    if mismatches:
        print(f"DISAGREEMENT on {len(mismatches)} instance(s): "
              f"{mismatches[:10]}", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pretzelkh",
        description="Reduced integer Khovanov homology of 3-strand "
                    "pretzel links, three ways.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute one pretzel link")
    c.add_argument("link", help="pretzel spec, e.g. 'P(-3,4,5)'")
    c.add_argument("--method", default="all",
                   choices=["cube", "fast", "formula", "all"])
    c.add_argument("--orientation", default=None,
                   help="orientation pattern for links, e.g. '+-'")
    c.add_argument("--format", default="table", choices=["table", "json"])
    c.add_argument("--max-crossings", type=int, default=20)
    c.set_defaults(func=cmd_compute)

    s = sub.add_parser("sweep", help="sweep all pretzels up to a size")
    s.add_argument("--max-sum", type=int, required=True)
    s.add_argument("--methods", default="fast,formula")
    s.add_argument("--out", default=None)
    s.add_argument("--max-crossings", type=int, default=20)
    s.set_defaults(func=cmd_sweep)

    k = sub.add_parser("classify", help="QA / thin / thick classification")
    k.add_argument("p", type=int)
    k.add_argument("q", type=int)
    k.add_argument("r", type=int)
    k.add_argument("--with-homology", action="store_true",
                   help="also compute the diagonal width")
    k.add_argument("--format", default="table", choices=["table", "json"])
    k.set_defaults(func=cmd_classify)

    d = sub.add_parser("pd", help="compute from a PD code file")
    d.add_argument("file")
    d.add_argument("--format", default="table", choices=["table", "json"])
    d.add_argument("--max-crossings", type=int, default=20)
    d.set_defaults(func=cmd_pd)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (diagram.DiagramError, formulas.FormulaDomainError,
            khcube.ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
