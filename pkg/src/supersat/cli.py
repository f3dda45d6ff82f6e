"""Command-line entry point: analyze, curve, count, construct, oracle, verify.

Exit codes: 0 ok, 2 bad input, 3 pattern not color-critical, 4 budget exceeded,
5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .catalog import by_name
from .coloring import NotColorCritical, SizeLimitExceeded
from .counting import ConsistencyError, count_copies, count_copies_at_edge, count_copies_at_vertex
from .graph import Graph, GraphFormatError, encode_graph, parse_edge_list, parse_graph6, to_graph6
from .invariants import pattern

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_CRITICAL = 3
EXIT_BUDGET = 4
EXIT_VERIFY = 5


class InputError(ValueError):
    pass


def resolve_graph(spec: str) -> Graph:
    """Catalog name first, then a file path, then a literal graph6 string."""
    try:
        return by_name(spec)
    except KeyError:
        pass
    path = Path(spec)
    if path.is_file():
        text = path.read_text(encoding="utf-8")
        body = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        looks_g6 = path.suffix == ".g6" or (len(body) == 1 and not body[0].replace(" ", "").isdigit()
                                            and " " not in body[0])
        try:
            return parse_graph6(body[0]) if looks_g6 and body else parse_edge_list(text)
        except GraphFormatError as exc:
            raise InputError(f"{spec}: {exc}") from None
    try:
        return parse_graph6(spec)
    except GraphFormatError as exc:
        raise InputError(f"{spec!r} is not a catalog name, a readable file or a graph6 string ({exc})") from None


def _cache(args):
    from .oracle import ResultCache

    if getattr(args, "no_cache", False):
        return None
    return ResultCache(args.cache_dir)  # None falls back to the environment, then the default


# -- subcommands ------------------------------------------------------------------

def cmd_analyze(args) -> int:
    from .report import build_report, report_document, to_json, to_text

    g = resolve_graph(args.pattern)
    rep, _, _ = build_report(pattern(g))
    doc = report_document(g, rep)
    sys.stdout.write(to_json(doc) if args.format == "json" else to_text(doc))
    return EXIT_OK


def cmd_curve(args) -> int:
    from .optimize import curve_csv, emit_curve, rho_thresholds

    g = resolve_graph(args.pattern)
    pat = pattern(g)
    rho0 = (pat.r - 1) / pat.r
    if args.step <= 0 or args.rho_hi > 1 or args.rho_lo < rho0 - args.step - 1e-12 or args.rho_hi < args.rho_lo:
        raise InputError(f"range must satisfy {rho0 - args.step:.6g} <= from <= to <= 1 with step > 0")
    pts = emit_curve(pat, args.rho_lo, args.rho_hi, args.step)
    th = rho_thresholds(pat)
    text = curve_csv(pat, pts)
    summary = sys.stderr if args.out is None else sys.stdout
    if args.out is None:
        sys.stdout.write(text)
    else:
        out = Path(args.out)
        out.write_text(text, encoding="utf-8")
        print(f"wrote {len(pts)} rows to {out}", file=summary)
        if not args.no_plot:
            from .plotting import plot_curve

            png = plot_curve(pts, float(pat.alpha), pat.r, out.with_suffix(".png"), th, title=to_graph6(g))
            print(f"wrote plot to {png}", file=summary)
    if th.status == "degree":
        print("degenerate: the density polynomial has degree r, so both thresholds are infinite", file=summary)
    else:
        print(f"rho = {_num(th.rho)}  rho_hat = {_num(th.rho_hat)}  status = {th.status}"
              f"  tangency = {str(th.tangency_flag).lower()}", file=summary)
    return EXIT_OK


def _num(x: float) -> str:
    return "inf" if math.isinf(x) else format(x, ".12g")


def cmd_count(args) -> int:
    f = resolve_graph(args.pattern)
    g = resolve_graph(args.host)
    if args.vertex is not None:
        val = count_copies_at_vertex(f, g, args.vertex)
    elif args.edge is not None:
        val = count_copies_at_edge(f, g, *args.edge)
    else:
        val = count_copies(f, g)
    print(val)
    return EXIT_OK


def cmd_construct(args) -> int:
    from .oracle import construct

    f = resolve_graph(args.pattern)
    g = construct(args.kind, f, args.n, args.q, args.xi)
    sys.stdout.write(encode_graph(g, args.format))
    print(f"{g.n} vertices, {g.m} edges, {count_copies(f, g)} copies", file=sys.stderr)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import Budget, run_oracle

    f = resolve_graph(args.pattern)
    pattern(f)  # rejects non-critical patterns before any search
    budget = Budget(args.max_ex_n, args.max_subsets, args.max_t_subsets)
    res = run_oracle(args.kind, f, args.n, args.q, args.witnesses, args.jobs, budget, _cache(args))
    wits = [to_graph6(w) for w in res.witnesses]
    if args.format == "json":
        doc = {"kind": res.kind, "pattern": res.pattern_g6 or to_graph6(f), "n": res.n, "q": res.q,
               "value": res.value, "witnesses": wits, "examined": res.examined}
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        print(res.value)
        for w in wits:
            print(w)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    checks = run_suite(args.suite, args.jobs, _cache(args), emit=lambda s: print(s, flush=True))
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


# -- parser -----------------------------------------------------------------------

def _add_cache_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--jobs", type=int, default=1, help="worker processes (results do not depend on this)")
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the result cache")
    p.add_argument("--cache-dir", default=None, help="cache directory (overrides SUPERSAT_CACHE_DIR)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="supersat", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"supersat {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="constants, thresholds and c1 bounds for a pattern")
    p.add_argument("pattern", help="catalog name, edge-list/graph6 file, or graph6 string")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("curve", help="tabulate p(rho) against the line, as CSV (plus a PNG)")
    p.add_argument("pattern")
    p.add_argument("rho_lo", type=float)
    p.add_argument("rho_hi", type=float)
    p.add_argument("step", type=float)
    p.add_argument("--out", default=None, help="CSV path; the plot goes next to it with a .png suffix")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("count", help="copies of a pattern in a host graph")
    p.add_argument("pattern")
    p.add_argument("host")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--vertex", type=int, default=None, help="only copies containing this vertex")
    grp.add_argument("--edge", type=int, nargs=2, default=None, metavar=("U", "V"), help="only copies using this edge")
    p.set_defaults(func=cmd_count)

    from .oracle import CONSTRUCTIONS

    p = sub.add_parser("construct", help="build an explicit near-extremal graph")
    p.add_argument("kind", choices=CONSTRUCTIONS)
    p.add_argument("pattern")
    p.add_argument("n", type=int)
    p.add_argument("q", type=int, nargs="?", default=0)
    p.add_argument("--xi", type=float, nargs="+", default=None, help="density vector for attached_vertex")
    p.add_argument("--format", choices=("edge-list", "graph6"), default="edge-list")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("oracle", help="exhaustive ex, h or t value")
    p.add_argument("kind", choices=("ex", "h", "t"))
    p.add_argument("pattern")
    p.add_argument("n", type=int)
    p.add_argument("q", type=int, nargs="?", default=0)
    p.add_argument("--witnesses", type=int, default=1, help="number of optimal graphs to report")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--max-ex-n", type=int, default=10)
    p.add_argument("--max-subsets", type=int, default=30_000_000)
    p.add_argument("--max-t-subsets", type=int, default=5_000_000)
    _add_cache_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("suite", choices=("quick", "full"), nargs="?", default="quick")
    _add_cache_flags(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    from .oracle import BudgetExceeded

    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotColorCritical as exc:
        print(f"error: pattern is not color-critical: {exc}", file=sys.stderr)
        return EXIT_NOT_CRITICAL
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (InputError, GraphFormatError, SizeLimitExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
