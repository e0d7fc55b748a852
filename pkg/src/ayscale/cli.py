"""Command-line front end.

Every command writes deterministic output: exact values use the canonical
``c0;c1;c2`` serialization, decimals are display-only annotations, CSV is
comma-separated with a header row and LF line endings, and JSON is emitted
with sorted keys.  Re-running a command with the same configuration yields
byte-identical bytes for any worker count.

Exit status: 0 all requested checks passed, 2 usage error, 3 budget
exceeded, 4 a check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError
from .field import FieldElement
from . import acceptance, coding, cycles, iet, orders

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_CHECK_FAILED = 4


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
    p.add_argument("--precision", type=int, default=12, help="display decimal digits")


def _positive(name):
    def parse(value):
        n = int(value)
        if n < 1:
            raise argparse.ArgumentTypeError(f"{name} must be a positive integer")
        return n

    return parse


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ay",
        description="exact computations for the cubic Arnoux-Yoccoz scaling dynamics",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-tables", help="re-derive the map data and check the permutation")
    _common_flags(p)

    p = sub.add_parser("code", help="symbolic code of a field point")
    p.add_argument("--point", required=True, help="field element as 'c0;c1;c2'")
    p.add_argument("--depth", type=_positive("depth"), default=None,
                   help="emit only this many leading symbols")
    _common_flags(p)

    p = sub.add_parser("cycles", help="all periodic points of one period")
    p.add_argument("--period", type=_positive("period"), required=True)
    _common_flags(p)

    p = sub.add_parser("stats", help="multiplicity and core-region statistics by period")
    p.add_argument("--max-period", type=_positive("max-period"), required=True)
    _common_flags(p)

    p = sub.add_parser("core-region", help="integer-part histogram at one period")
    p.add_argument("--max-period", type=_positive("max-period"), required=True)
    _common_flags(p)

    p = sub.add_parser("embed", help="fractional parts as a cube point cloud")
    p.add_argument("--period", type=_positive("period"), required=True)
    _common_flags(p)

    p = sub.add_parser("order", help="splitting data and order bound for a modulus")
    p.add_argument("--modulus", type=_positive("modulus"), required=True)
    _common_flags(p)

    p = sub.add_parser("denominators", help="survey periodic points by denominator")
    p.add_argument("--max-m", type=_positive("max-m"), required=True)
    p.add_argument("--kappa-max-m", type=_positive("kappa-max-m"), default=None,
                   help="locate periodic partners only up to this denominator")
    _common_flags(p)

    p = sub.add_parser("cyclotomic", help="check the cyclotomic factorization identity")
    p.add_argument("--max-n", type=_positive("max-n"), required=True)
    _common_flags(p)

    p = sub.add_parser("reproduce-all", help="run the acceptance checklist")
    p.add_argument("--budget-minutes", type=float, default=None)
    _common_flags(p)

    return ap


# -- output helpers -------------------------------------------------------------


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _triple_str(t) -> str:
    return ";".join(str(int(v)) for v in t)


def _dec(value: float, precision: int) -> str:
    return f"{value:.{precision}f}"


# -- command implementations -----------------------------------------------------


def cmd_verify_tables(args) -> int:
    table = iet.canonical_table()
    nu, path = iet.derive_path_data()
    rep = iet.verify_permutation()
    ok = nu == table.nu and path == table.path and rep.ok
    if args.fmt == "json":
        out = {
            "derived_nu": list(nu),
            "derived_path": [list(p) for p in path],
            "permutation": list(rep.permutation),
            "total_image_length": rep.total_image_length.to_str(),
            "ok": ok,
        }
        _write(_json_dumps(out), args.out)
    else:
        lines = ["j,delta,tau,nu,path"]
        for j in range(iet.N_INTERVALS):
            lines.append(
                f"{j},{table.delta[j].to_str()},{table.tau[j].to_str()},"
                f"{nu[j]},({' '.join(map(str, path[j]))})"
            )
        lines.append(f"permutation,({' '.join(map(str, rep.permutation))})")
        lines.append(f"result,{'pass' if ok else 'fail'}")
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_code(args) -> int:
    x = FieldElement.from_str(args.point)
    if args.depth is not None:
        syms = coding.encode(x, args.depth)
        pre, per = syms, ()
    else:
        c = coding.encode_rational(x)
        pre, per = c.preperiod, c.period
    if args.fmt == "json":
        out = {
            "point": x.to_str(),
            "preperiod": [[s.j, s.t] for s in pre],
            "period": [[s.j, s.t] for s in per],
        }
        _write(_json_dumps(out), args.out)
    else:
        rows = []
        for pos, s in enumerate(pre + per, start=1):
            rows.append((pos, s.j, s.t, coding.DIGITS[s].to_str()))
        text = _csv_text(("position", "j", "t", "digit"), rows)
        marked = "".join(map(str, pre)) + (
            "[" + "".join(map(str, per)) + "]" if per else ""
        )
        _write(f"code,{marked}\n{text}", args.out)
    return EXIT_OK


def cmd_cycles(args) -> int:
    cycs = sorted(cycles.iter_cycles(args.period), key=lambda c: cycles.sort_key(c.x))
    if args.fmt == "json":
        out = [
            {
                "code": "".join(map(str, c.code.period)),
                "x": c.x.to_str(),
                "xi": c.xi.to_str(),
                "beta": c.beta.to_str(),
            }
            for c in cycs
        ]
        _write(_json_dumps({"period": args.period, "cycles": out}), args.out)
    else:
        rows = [
            (
                "".join(map(str, c.code.period)),
                c.x.to_str(),
                c.xi.to_str(),
                c.beta.to_str(),
            )
            for c in cycs
        ]
        _write(_csv_text(("code", "x", "xi", "beta"), rows), args.out)
    return EXIT_OK


def _stats_payload(max_period: int, workers: int):
    payload = []
    for n in range(1, max_period + 1):
        s = cycles.stats(n, workers=workers)
        payload.append(
            {
                "period": n,
                "fix_count": s.fix_count,
                "i_n": s.i_n,
                "i_doubleprime": s.i_doubleprime,
                "b_n": s.b_n,
                "histogram": {str(k): v for k, v in s.multiplicity_hist.items()},
            }
        )
    return payload


def render_stats_text(max_period: int, workers: int = 1) -> str:
    rows = []
    for entry in _stats_payload(max_period, workers):
        ratio = entry["i_doubleprime"] / entry["fix_count"]
        rows.append(
            (
                entry["period"],
                entry["fix_count"],
                entry["i_n"],
                entry["i_doubleprime"],
                f"{ratio:.4g}",
                entry["b_n"],
            )
        )
    return _csv_text(("n", "fix", "i_n", "i_doubleprime", "ratio", "b_n"), rows)


def cmd_stats(args) -> int:
    if args.fmt == "json":
        _write(_json_dumps(_stats_payload(args.max_period, args.workers)), args.out)
    else:
        _write(render_stats_text(args.max_period, args.workers), args.out)
    return EXIT_OK


def cmd_core_region(args) -> int:
    hist = cycles.core_histogram(args.max_period, workers=args.workers)
    if args.fmt == "json":
        out = {
            "period": hist.n,
            "fix_count": hist.total,
            "histogram": {
                _triple_str(beta): {"count": count, "density": str(dens)}
                for beta, count, dens in hist.rows
            },
        }
        _write(_json_dumps(out), args.out)
    else:
        rows = [
            (_triple_str(beta), count, str(dens), f"{float(dens):.5g}")
            for beta, count, dens in hist.rows
        ]
        _write(
            _csv_text(("beta", "count", "density_exact", "density"), rows), args.out
        )
    return EXIT_OK


def cmd_embed(args) -> int:
    data = cycles.cycle_arrays(args.period, workers=args.workers)
    order = np.lexsort((data.xi_num[:, 2], data.xi_num[:, 1], data.xi_num[:, 0]))
    xs = data.xi_num[order]
    p = args.precision
    m = data.m
    rows = []
    for row in xs:
        exact = [Fraction(int(v), m) for v in row]
        rows.append(
            tuple(_dec(v.numerator / v.denominator, p) for v in exact)
            + tuple(str(v) for v in exact)
        )
    header = ("r0", "r1", "r2", "r0_exact", "r1_exact", "r2_exact")
    if args.fmt == "json":
        out = {"period": args.period, "points": [dict(zip(header, r)) for r in rows]}
        _write(_json_dumps(out), args.out)
    else:
        _write(_csv_text(header, rows), args.out)
    return EXIT_OK


def cmd_order(args) -> int:
    bound = orders.t_bound(args.modulus)
    payload = {
        "modulus": bound.m,
        "T": bound.T,
        "parts": [
            {
                "p": p,
                "e": e,
                "T_pe": tpe,
                "lifting_threshold": k,
                "kind": orders.splitting_type(p).kind,
                "factors": list(orders.splitting_type(p).factors),
            }
            for (p, e, tpe, k) in bound.parts
        ],
    }
    if args.modulus > 1 and args.modulus**3 <= 64_000:
        hist = {}
        o = orders.all_orders_mod(args.modulus)
        for v in sorted(set(int(t) for t in o)):
            hist[str(v)] = int((o == v).sum())
        payload["order_histogram"] = hist
    if args.fmt == "json":
        _write(_json_dumps(payload), args.out)
    else:
        lines = [f"modulus,{payload['modulus']}", f"T,{payload['T']}"]
        for part in payload["parts"]:
            factors = " ".join(f"(x+{a})^{e}" for a, e in part["factors"]) or "-"
            lines.append(
                f"prime,{part['p']},e={part['e']},kind={part['kind']},"
                f"T={part['T_pe']},k={part['lifting_threshold']},factors,{factors}"
            )
        for t, c in payload.get("order_histogram", {}).items():
            lines.append(f"order,{t},count,{c}")
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_denominators(args) -> int:
    rep = orders.denominator_survey(args.max_m, kappa_max_m=args.kappa_max_m)
    counts_ok = all(a == b for a, b in rep.primitive_counts.values())
    if args.fmt == "json":
        out = {
            "max_m": rep.max_m,
            "kappa_max_m": rep.kappa_max_m,
            "primitive_counts": {
                str(m): {"direct": a, "mobius": b}
                for m, (a, b) in sorted(rep.primitive_counts.items())
            },
            "kappa_fraction": rep.kappa_fraction(),
            "unmatched": rep.unmatched,
            "mu_prime": {
                _triple_str(b): c for b, c in sorted(rep.mu_prime.items())
            },
            "counts_ok": counts_ok,
        }
        _write(_json_dumps(out), args.out)
    else:
        rows = []
        for r in rep.records:
            if r.partners:
                for beta, period in r.partners:
                    rows.append(
                        (r.m, _triple_str(r.xi), r.order, period,
                         _triple_str(beta), r.multiplicity)
                    )
            else:
                rows.append((r.m, _triple_str(r.xi), r.order, "", "", 0))
        _write(
            _csv_text(("m", "xi", "order", "period", "beta", "multiplicity"), rows),
            args.out,
        )
    return EXIT_OK if counts_ok else EXIT_CHECK_FAILED


def cmd_cyclotomic(args) -> int:
    results = [orders.cyclotomic_check(n) for n in range(1, args.max_n + 1)]
    ok = all(r["ok"] for r in results)
    if args.fmt == "json":
        out = [{"n": r["n"], "ok": r["ok"]} for r in results]
        _write(_json_dumps(out), args.out)
    else:
        lines = [f"{r['n']},{'pass' if r['ok'] else 'fail'}" for r in results]
        _write("n,result\n" + "\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_reproduce_all(args) -> int:
    verdicts = acceptance.run_all(
        budget_minutes=args.budget_minutes, workers=args.workers
    )
    _write(_json_dumps(verdicts), args.out)
    failed = any(v["status"] == "fail" for v in verdicts)
    return EXIT_CHECK_FAILED if failed else EXIT_OK


_HANDLERS = {
    "verify-tables": cmd_verify_tables,
    "code": cmd_code,
    "cycles": cmd_cycles,
    "stats": cmd_stats,
    "core-region": cmd_core_region,
    "embed": cmd_embed,
    "order": cmd_order,
    "denominators": cmd_denominators,
    "cyclotomic": cmd_cyclotomic,
    "reproduce-all": cmd_reproduce_all,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, coding.InadmissibleCodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
