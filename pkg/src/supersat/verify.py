"""The verification suites behind ``supersat verify``.

Each check compares computed values against known results or independent
recomputation and yields a PASS/FAIL line naming the claim it tests.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from .catalog import by_name, clique_minus_edge, complete, cycle, fig2, kst_plus
from .counting import Partition, build_host, count_copies, count_copies_at_vertex, HostSpec
from .graph import Graph, parse_graph6, to_graph6
from .invariants import (
    attached_vertex_bound, attached_vertex_formula, c_value, derivative_symmetry, gradient_identity,
    is_symmetric, nonnegative_coefficients, pattern, taylor_consistency, vanishing_identity,
)
from .optimize import c1_lower_bound, emit_curve, rho_thresholds
from .oracle import ResultCache, h_brute, run_oracle, t_search, verify_crossing_quadratic

SUITES = ("quick", "full")


@dataclass
class Check:
    name: str
    claim: str
    passed: bool
    detail: str
    elapsed: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name}: {self.detail}  [claim: {self.claim}]"


def catalog_patterns() -> dict[str, Graph]:
    """Every color-critical catalog pattern used by the identity and classification checks."""
    out = {f"K{r + 1}": complete(r + 1) for r in range(2, 6)}
    out.update({f"C{2 * k + 1}": cycle(2 * k + 1) for k in range(2, 5)})
    out.update({f"K{r + 2}-e": clique_minus_edge(r) for r in range(2, 5)})
    out.update({f"K{s},{t}+": kst_plus(s, t) for s, t in ((2, 2), (2, 3), (3, 3), (3, 4))})
    out["fig2"] = fig2()
    return out


def contains_spanning_multipartite(g: Graph, r: int) -> tuple[bool, tuple[int, ...] | None]:
    """Whether g contains a complete r-partite graph on all its vertices (nonempty parts); returns part sizes."""
    comp = g.complement()
    # non-adjacent vertices must share a part, so complement components are atoms
    seen, atoms = set(), []
    for v in range(g.n):
        if v in seen:
            continue
        stack, comp_v = [v], []
        seen.add(v)
        while stack:
            u = stack.pop()
            comp_v.append(u)
            for w in comp.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        atoms.append(len(comp_v))
    if len(atoms) < r:
        return False, None
    best = None
    for lab in product(range(r), repeat=len(atoms)):
        if lab[0] != 0 or len(set(lab)) < r:
            continue
        sizes = tuple(sorted(sum(a for a, l in zip(atoms, lab) if l == i) for i in range(r)))
        if best is None or sizes[-1] - sizes[0] < best[-1] - best[0]:
            best = sizes
    return True, best


# -- individual checks ------------------------------------------------------------

def check_one_extra_edge_triangles(ns, jobs, cache) -> Check:
    bad = []
    vals = []
    for n in ns:
        v = run_oracle("h", complete(3), n, 1, jobs=jobs, cache=cache).value
        vals.append(f"n={n}:{v}")
        if v != n // 2:
            bad.append(f"n={n} got {v}, expected {n // 2}")
    return Check("triangles-one-extra-edge", "one edge beyond the Turán number forces floor(n/2) triangles",
                 not bad, "; ".join(bad) if bad else ", ".join(vals))


def check_small_q_triangles(jobs, cache) -> Check:
    bad, vals = [], []
    for q in (1, 2, 3):
        res = h_brute(complete(3), 6, q, k=2000, jobs=jobs)
        vals.append(f"q={q}:{res.value}")
        if res.value != 3 * q:
            w = to_graph6(res.witnesses[0]) if res.witnesses else "-"
            bad.append(f"q={q} got {res.value}, expected {3 * q} (witness {w})")
        for w in res.witnesses:
            ok, _ = contains_spanning_multipartite(w, 2)
            if not ok:
                bad.append(f"q={q} witness {to_graph6(w)} has no spanning complete bipartite subgraph")
                break
    return Check("triangles-small-q", "q extra edges force q*floor(n/2) triangles for q <= 3 at n = 6, "
                 "and minimizers contain a spanning complete bipartite graph",
                 not bad, "; ".join(bad) if bad else ", ".join(vals))


def check_formula_bridge(max_part: int = 5) -> Check:
    cases = bad = 0
    first = ""
    for name, g in (("K3", complete(3)), ("C5", cycle(5)), ("K4-e", clique_minus_edge(2)), ("K2,3+", kst_plus(2, 3))):
        pat = pattern(g)
        for sizes in product(range(max_part + 1), repeat=pat.r):
            if sizes[0] < 2:
                continue
            host = build_host(HostSpec(Partition(sizes), ((0, 1),)))
            cases += 1
            if c_value(pat, list(sizes)) != count_copies(g, host):
                bad += 1
                first = first or f"{name} {sizes}"
    return Check("formula-vs-count", "the closed count formula matches direct counting on K(V_1..V_r) plus an edge",
                 bad == 0, f"{cases} cases, {bad} mismatches" + (f", first {first}" if first else ""))


def check_constant_catalog() -> Check:
    expect: list[tuple[str, Graph, str, Fraction]] = []
    for r in (2, 3, 4):
        g = clique_minus_edge(r)
        expect += [(f"K{r + 2}-e", g, "alpha", Fraction(r - 1, 2 * r ** r)),
                   (f"K{r + 2}-e", g, "zeta", Fraction(1, 2 * r ** (r - 2))),
                   (f"K{r + 2}-e", g, "pi", Fraction(r - 1, r * r))]
    for s, t in ((2, 2), (2, 3), (3, 3), (3, 4)):
        g = kst_plus(s, t)
        den = math.factorial(t) * math.factorial(s - 2)
        expect += [(f"K{s},{t}+", g, "alpha", Fraction(1, 2 ** (s + t - 2) * den)),
                   (f"K{s},{t}+", g, "zeta", Fraction(t - s + 2, den * 2 ** (s + t - 3)))]
    g = fig2()
    expect += [("fig2", g, "alpha", Fraction(1, 192)), ("fig2", g, "zeta", Fraction(1, 32)),
               ("fig2", g, "pi", Fraction(1, 6))]
    bad = []
    for name, g, q, v in expect:
        got = getattr(pattern(g), q)
        if got != v:
            bad.append(f"{name} {q} = {got}, expected {v}")
    p = pattern(fig2()).pf_poly
    want = p.__class__(p.variables, {(1, 3): Fraction(1, 24), (3, 1): Fraction(1, 24)})
    if p != want:
        bad.append(f"fig2 density polynomial {p}")
    return Check("constant-catalog", "exact constants for cliques minus an edge, K_{s,t}^+ and the seven-vertex example",
                 not bad, "; ".join(bad) if bad else f"{len(expect) + 1} values exact")


def check_classification() -> Check:
    bad = []
    pats = catalog_patterns()
    for name, g in pats.items():
        pat = pattern(g)
        degree_r = name in ("K3", "K4", "K5", "K6", "C5", "C7", "C9")
        if (pat.deg_p == pat.r) != degree_r:
            bad.append(f"{name}: deg {pat.deg_p}, r {pat.r}")
    return Check("degree-classification", "the density polynomial has degree r exactly for cliques and odd cycles",
                 not bad, "; ".join(bad) if bad else f"{len(pats)} patterns")


def check_identities() -> Check:
    bad = []
    tests: list[tuple[str, Callable]] = [
        ("gradient", gradient_identity), ("vanishing", vanishing_identity),
        ("symmetric", lambda p: is_symmetric(p.pf_poly)), ("nonnegative", lambda p: nonnegative_coefficients(p.pf_poly)),
        ("derivative-symmetry", derivative_symmetry), ("taylor", taylor_consistency),
    ]
    pats = catalog_patterns()
    for name, g in pats.items():
        pat = pattern(g)
        for tname, fn in tests:
            if not fn(pat):
                bad.append(f"{name} {tname}")
    return Check("polynomial-identities", "gradient, vanishing, symmetry, derivative-symmetry and linear-term identities",
                 not bad, "; ".join(bad) if bad else f"{len(pats) * len(tests)} identities hold")


def _bisect_quintic() -> float:
    lo, hi = 0.5, 0.6  # rho^5 - rho + 1/2 changes sign here
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid ** 5 - mid + 0.5 > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def check_thresholds() -> Check:
    bad = []
    th = rho_thresholds(pattern(kst_plus(3, 4)))
    ref = _bisect_quintic()
    if not abs(th.rho - ref) <= 1e-8:
        bad.append(f"K3,4+ rho {th.rho!r} vs root {ref!r}")
    theta = th.rho - 0.5
    if not 2 ** -5 < theta < 2 ** -4:
        bad.append(f"K3,4+ theta {theta} outside (1/32, 1/16)")
    infinite = {"K4-e": clique_minus_edge(2), "K2,3+": kst_plus(2, 3)}
    infinite.update({f"C{n}": cycle(n) for n in (5, 7, 9)})
    infinite.update({f"K{n}": complete(n) for n in (3, 4, 5, 6)})
    for name, g in infinite.items():
        t = rho_thresholds(pattern(g))
        if not (math.isinf(t.rho) and math.isinf(t.rho_hat) and t.infinite_is_proven):
            bad.append(f"{name}: ({t.rho}, {t.rho_hat}, {t.status})")
    return Check("rho-thresholds", "K_{3,4}^+ crosses at the root of rho^5 = rho - 1/2; "
                 "no crossing for K4-e, K_{2,3}^+, odd cycles and cliques",
                 not bad, "; ".join(bad) if bad else f"rho = {th.rho:.12g}, {len(infinite)} infinite cases certified")


def check_c1_table() -> Check:
    bad = []
    for n in (5, 7, 9):
        v, _ = c1_lower_bound(pattern(cycle(n)), rho_thresholds(pattern(cycle(n))))
        if v != Fraction(1, 2):
            bad.append(f"C{n}: {v}")
    for r in (2, 3, 4, 5):
        pat = pattern(complete(r + 1))
        v, _ = c1_lower_bound(pat, rho_thresholds(pat))
        if v != Fraction(1, r):
            bad.append(f"K{r + 1}: {v}")
    for r in (2, 3, 4):
        pat = pattern(clique_minus_edge(r))
        v, _ = c1_lower_bound(pat, rho_thresholds(pat))
        if v != Fraction(r - 1, r * r):
            bad.append(f"K{r + 2}-e: {v}")
    for s, t in ((2, 2), (2, 3), (3, 3), (3, 4)):
        pat = pattern(kst_plus(s, t))
        th = rho_thresholds(pat)
        theta = th.rho - 0.5
        v, per = c1_lower_bound(pat, th)
        want0 = min(float(pat.pi), theta)
        want1 = min(2 * float(pat.pi), theta)
        if not (math.isclose(float(per[0]), want0, abs_tol=1e-12) and math.isclose(float(per[1]), want1, abs_tol=1e-12)):
            bad.append(f"K{s},{t}+: {per} vs ({want0}, {want1})")
    return Check("c1-bounds", "c1 is 1/2 for odd cycles, 1/r for cliques, (r-1)/r^2 for cliques minus an edge, "
                 "min(pi, theta) and min(2 pi, theta) for K_{s,t}^+",
                 not bad, "; ".join(bad) if bad else "all bounds reproduced")


def check_crossing() -> Check:
    cq = verify_crossing_quadratic(fig2())
    small = (3 - math.sqrt(5)) / 4
    ok = (cq.coefficients == (4, -6, 1) and abs(cq.roots[0] - small) < 1e-12
          and cq.smaller_root_exceeds_pi and small > 1 / 6)
    return Check("pair-crossing", "for the seven-vertex example the packings cross at the smaller root "
                 "(3 - sqrt 5)/4 of 4c^2 - 6c + 1, which exceeds pi = 1/6",
                 ok, f"coefficients {cq.coefficients}, roots ({cq.roots[0]:.12f}, {cq.roots[1]:.12f})")


def check_all_in_one_part(qs=(1, 2, 3, 4)) -> Check:
    bad, vals = [], []
    for q in qs:
        v = t_search(clique_minus_edge(2), 8, q).value
        want = 6 * q if q <= 2 else 6 * q + 2 * (q - 2) * 4
        vals.append(f"q={q}:{v}")
        if v != want:
            bad.append(f"q={q} got {v}, expected {want}")
    return Check("turan-plus-q-K4-e", "fewest K4-e copies over the Turán graph T_2(8) plus q edges",
                 not bad, "; ".join(bad) if bad else ", ".join(vals))


def check_jobs_determinism(jobs_list) -> Check:
    outs = {}
    for j in jobs_list:
        res = h_brute(complete(3), 7, 2, k=3, jobs=j)
        outs[j] = (res.value, tuple(to_graph6(w) for w in res.witnesses), res.examined)
    first = outs[jobs_list[0]]
    ok = all(o == first for o in outs.values())
    return Check("jobs-determinism", "oracle value, witnesses and search size do not depend on the worker count",
                 ok, f"jobs {list(jobs_list)}: value {first[0]}, {len(first[1])} witnesses, {first[2]} nodes")


def check_curve_monotone() -> Check:
    bad = []
    for name in ("K4-e", "K_{3,4}^+", "fig2", "K5-e"):
        pat = pattern(by_name(name))
        rho0 = (pat.r - 1) / pat.r
        pts = emit_curve(pat, rho0, 1.0, (1 - rho0) / 40)
        for a, b in zip(pts, pts[1:]):
            if b.p < a.p - a.certified_gap - 1e-12:
                bad.append(f"{name} p({b.rho:.4f}) < p({a.rho:.4f})")
                break
        if pts[0].p != 0.0:
            bad.append(f"{name} p(rho0) = {pts[0].p}")
    return Check("curve-monotone", "p(rho) is nondecreasing and vanishes at (r-1)/r", not bad,
                 "; ".join(bad) if bad else "4 curves")


def check_h_le_t(cases) -> Check:
    bad, vals = [], []
    for g, n, q in cases:
        h = h_brute(g, n, q).value
        t = t_search(g, n, q).value
        vals.append(f"({g.n},{n},{q}): {h}<={t}")
        if h > t:
            bad.append(f"h={h} > t={t} at n={n}, q={q}")
    return Check("h-at-most-t", "the unrestricted minimum never exceeds the Turán-plus-q minimum",
                 not bad, "; ".join(bad) if bad else ", ".join(vals))


def check_witness_recount() -> Check:
    bad = []
    for g, n, q in ((complete(3), 6, 2), (clique_minus_edge(2), 7, 1), (cycle(5), 6, 1)):
        res = h_brute(g, n, q, k=4)
        for w in res.witnesses:
            if count_copies(g, w) != res.value or w.m != res.info["ex"] + q:
                bad.append(f"witness {to_graph6(w)}")
        t = t_search(g, n, q, k=4)
        for w in t.witnesses:
            if count_copies(g, w) != t.value:
                bad.append(f"t witness {to_graph6(w)}")
    return Check("witness-recount", "every returned witness has the reported edge and copy counts",
                 not bad, "; ".join(bad) if bad else "all witnesses recount")


def check_graph6_roundtrip() -> Check:
    bad = 0
    total = 0
    for g in catalog_patterns().values():
        for h in (g, g.complement()):
            total += 1
            if parse_graph6(to_graph6(h)) != h:
                bad += 1
    big = Graph(70, [(i, i + 1) for i in range(69)] + [(i, i + 5) for i in range(0, 65, 3)])
    total += 1
    bad += parse_graph6(to_graph6(big)) != big
    return Check("graph6-roundtrip", "graph6 encoding and decoding are inverse", bad == 0, f"{total} graphs, {bad} failures")


def check_attached_vertex(max_part: int = 5) -> Check:
    cases = bad = 0
    first = ""
    for name, g in (("K3", complete(3)), ("C5", cycle(5)), ("K4-e", clique_minus_edge(2)), ("K2,3+", kst_plus(2, 3))):
        pat = pattern(g)
        for sizes in product(range(max_part + 1), repeat=pat.r):
            C, N = attached_vertex_bound(pat, list(sizes))
            n = sum(sizes)
            host_base = Partition(sizes)
            for d in product(*[range(s + 1) for s in sizes]):
                cases += 1
                brute = count_copies_at_vertex(g, build_host(HostSpec(host_base, (), d)), n)
                if brute != attached_vertex_formula(pat, list(sizes), list(d)):
                    bad += 1
                    first = first or f"{name} {sizes} {d} (formula)"
                    continue
                if n == 0:
                    continue
                approx = Fraction(n) ** (pat.f - 1) * pat.pf_poly(*[Fraction(x, n) for x in d])
                if abs(brute - approx) > C * Fraction(N) ** (pat.f - 2):
                    bad += 1
                    first = first or f"{name} {sizes} {d} (bound)"
    return Check("attached-vertex-bound", "copies through an attached vertex match the formula and stay within "
                 "C n^(f-2) of n^(f-1) P(d/n)", bad == 0,
                 f"{cases} hosts, {bad} violations" + (f", first {first}" if first else ""))


def check_cache(cache: ResultCache | None, limit: int = 3) -> Check:
    if cache is None:
        return Check("cache-spot-check", "cached oracle results match a fresh recomputation", True, "no cache in use")
    from .oracle import Budget
    version = ResultCache.version(Budget(), 1)
    keys = [k for k in cache.keys() if k[4] == version and k[1] in ("h", "t", "ex")]
    seen, bad = [], []
    for g6, kind, n, q, _ in keys:
        if (g6, kind, n, q) in seen:
            continue
        seen.append((g6, kind, n, q))
        if len(seen) > limit:
            break
        stored = cache.lookup(g6, kind, n, q, version)
        fresh = run_oracle(kind, parse_graph6(g6), n, q)
        if stored.value != fresh.value:
            bad.append(f"{kind} {g6} n={n} q={q}: cached {stored.value}, fresh {fresh.value}")
    return Check("cache-spot-check", "cached oracle results match a fresh recomputation", not bad,
                 "; ".join(bad) if bad else f"{min(len(seen), limit)} entries rechecked")


def _safe(fn: Callable[[], Check], name: str) -> Check:
    t0 = time.perf_counter()
    try:
        c = fn()
    except Exception as exc:  # a crashing check is a failing check
        c = Check(name, "check ran to completion", False, f"{type(exc).__name__}: {exc}")
    c.elapsed = time.perf_counter() - t0
    return c


def suite_checks(suite: str, jobs: int = 1, cache: ResultCache | None = None) -> list[tuple[str, Callable[[], Check]]]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    full = suite == "full"
    ns = (5, 6, 7, 8)
    jobs_list = (1, 2, 8) if full else (1, 2)
    hcases = [(complete(3), 7, 2), (clique_minus_edge(2), 7, 2)]
    if full:
        hcases += [(complete(3), 8, 3), (clique_minus_edge(2), 8, 1)]
    return [
        ("triangles-one-extra-edge", lambda: check_one_extra_edge_triangles(ns, jobs, cache)),
        ("triangles-small-q", lambda: check_small_q_triangles(jobs, cache)),
        ("formula-vs-count", check_formula_bridge),
        ("constant-catalog", check_constant_catalog),
        ("degree-classification", check_classification),
        ("polynomial-identities", check_identities),
        ("rho-thresholds", check_thresholds),
        ("c1-bounds", check_c1_table),
        ("pair-crossing", check_crossing),
        ("turan-plus-q-K4-e", check_all_in_one_part),
        ("jobs-determinism", lambda: check_jobs_determinism(jobs_list)),
        ("curve-monotone", check_curve_monotone),
        ("h-at-most-t", lambda: check_h_le_t(hcases)),
        ("witness-recount", check_witness_recount),
        ("graph6-roundtrip", check_graph6_roundtrip),
        ("attached-vertex-bound", check_attached_vertex),
        ("cache-spot-check", lambda: check_cache(cache)),
    ]


def run_suite(suite: str, jobs: int = 1, cache: ResultCache | None = None,
              emit: Callable[[str], None] | None = None) -> list[Check]:
    out = []
    for name, fn in suite_checks(suite, jobs, cache):
        c = _safe(fn, name)
        out.append(c)
        if emit is not None:
            emit(c.line())
    return out

