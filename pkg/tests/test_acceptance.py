"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for just the summary lines.
"""

from __future__ import annotations

import math
import sys
import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from supersat.catalog import clique_minus_edge, complete, cycle, fig2, kst_plus
from supersat.counting import HostSpec, Partition, build_host, count_copies, count_copies_at_vertex
from supersat.graph import Graph, parse_graph6, to_graph6
from supersat.invariants import (
    attached_vertex_bound, c_value, derivative_symmetry, gradient_identity, is_symmetric, nonnegative_coefficients,
    pattern, taylor_consistency, vanishing_identity,
)
from supersat.oracle import h_brute, t_search, verify_crossing_quadratic
from supersat.optimize import c1_lower_bound, emit_curve, rho_thresholds
from supersat.poly import ExactPolynomial
from supersat.verify import catalog_patterns, contains_spanning_multipartite

from oracles import copies

DEGREE_R = {"K3", "K4", "K5", "K6", "C5", "C7", "C9"}

# collected by conftest.py into the terminal summary
RESULT_LINES: list[str] = []


def report(num: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {num:2d}  {title}: {detail}"
    RESULT_LINES.append(line)
    print(line)


def criterion(num: int, title: str):
    """Wrap a check returning (ok, detail); print the line, then assert."""
    def deco(fn):
        def test():
            t0 = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            report(num, title, ok, f"{detail} ({time.perf_counter() - t0:.1f}s)")
            assert ok, detail
        test.__name__ = fn.__name__
        test.__doc__ = fn.__doc__
        return test
    return deco


# 1 ---------------------------------------------------------------------------------

@criterion(1, "one extra edge forces floor(n/2) triangles")
def test_criterion_01_one_extra_edge():
    vals = {n: h_brute(complete(3), n, 1).value for n in (5, 6, 7, 8)}
    return all(v == n // 2 for n, v in vals.items()), f"h = {vals}"


# 2 ---------------------------------------------------------------------------------

def _small_q():
    vals, witness_ok = {}, True
    for q in (1, 2, 3):
        res = h_brute(complete(3), 6, q, k=2000)
        vals[q] = res.value
        witness_ok &= all(contains_spanning_multipartite(w, 2)[0] for w in res.witnesses)
    return vals, witness_ok


@pytest.mark.xfail(strict=True, reason="exhaustive search gives 8 triangles at n=6, q=3: K_{2,4} plus a 4-cycle "
                                       "inside the 4-part beats 3q = 9")
@criterion(2, "q extra edges force 3q triangles at n = 6 for q <= 3, minimizers contain a spanning K_{a,b}")
def test_criterion_02_small_q():
    vals, witness_ok = _small_q()
    ok = all(vals[q] == 3 * q for q in vals) and witness_ok
    return ok, f"h = {vals}, expected {{1: 3, 2: 6, 3: 9}}; spanning complete bipartite in every witness: {witness_ok}"


def test_criterion_02_values_established_by_search():
    """What the exhaustive search does establish: 3, 6 and 8, every minimizer with a spanning K_{a,b}."""
    vals, witness_ok = _small_q()
    assert vals == {1: 3, 2: 6, 3: 8}
    assert witness_ok
    w = h_brute(complete(3), 6, 3).witnesses[0]
    assert copies(complete(3), w) == 8 and w.m == 12


# 3 ---------------------------------------------------------------------------------

@criterion(3, "closed-form count equals direct count on K(V_1..V_r) plus an edge")
def test_criterion_03_formula_bridge():
    cases, bad = 0, []
    for name, g in (("K3", complete(3)), ("C5", cycle(5)), ("K4-e", clique_minus_edge(2)), ("K2,3+", kst_plus(2, 3))):
        pat = pattern(g)
        for sizes in product(range(6), repeat=pat.r):
            if sizes[0] < 2:
                continue  # the extra edge needs two vertices in its part
            host = build_host(HostSpec(Partition(sizes), ((0, 1),)))
            cases += 1
            if c_value(pat, list(sizes)) != count_copies(g, host):
                bad.append(f"{name}{sizes}")
    return not bad, f"{cases} partitions, mismatches: {bad or 'none'}"


# 4 ---------------------------------------------------------------------------------

@criterion(4, "exact constant catalog")
def test_criterion_04_constants():
    bad, n = [], 0
    for r in (2, 3, 4):
        p = pattern(clique_minus_edge(r))
        want = (Fraction(r - 1, 2 * r ** r), Fraction(1, 2 * r ** (r - 2)), Fraction(r - 1, r * r))
        n += 3
        if (p.alpha, p.zeta, p.pi) != want:
            bad.append(f"K{r + 2}-e {(p.alpha, p.zeta, p.pi)}")
    for s, t in ((2, 2), (2, 3), (3, 3), (3, 4)):
        p = pattern(kst_plus(s, t))
        den = math.factorial(t) * math.factorial(s - 2)
        want = (Fraction(1, 2 ** (s + t - 2) * den), Fraction(t - s + 2, den * 2 ** (s + t - 3)))
        n += 2
        if (p.alpha, p.zeta) != want:
            bad.append(f"K{s},{t}+ {(p.alpha, p.zeta)}")
    p = pattern(fig2())
    poly = ExactPolynomial(["x1", "x2"], {(1, 3): Fraction(1, 24), (3, 1): Fraction(1, 24)})
    n += 4
    if (p.alpha, p.zeta, p.pi) != (Fraction(1, 192), Fraction(1, 32), Fraction(1, 6)) or p.pf_poly != poly:
        bad.append(f"fig2 {(p.alpha, p.zeta, p.pi)} {p.pf_poly}")
    return not bad, f"{n} exact values, mismatches: {bad or 'none'}"


# 5 ---------------------------------------------------------------------------------

@criterion(5, "density polynomial has degree r exactly for cliques and odd cycles")
def test_criterion_05_classification():
    bad = []
    pats = catalog_patterns()
    for name, g in pats.items():
        p = pattern(g)
        is_r = p.deg_p == p.r
        if is_r != (name in DEGREE_R) or p.deg_p < p.r:
            bad.append(f"{name}: deg {p.deg_p}, r {p.r}")
    return not bad, f"{len(pats)} patterns, misclassified: {bad or 'none'}"


# 6 ---------------------------------------------------------------------------------

@criterion(6, "exact polynomial identities on every catalog pattern")
def test_criterion_06_identities():
    bad = []
    pats = catalog_patterns()
    for name, g in pats.items():
        p = pattern(g)
        checks = {
            "gradient": gradient_identity(p), "vanishing": vanishing_identity(p),
            "symmetric": is_symmetric(p.pf_poly), "nonnegative": nonnegative_coefficients(p.pf_poly),
            "derivative-symmetry": derivative_symmetry(p), "linear-term": taylor_consistency(p),
        }
        bad += [f"{name}:{k}" for k, v in checks.items() if not v]
    return not bad, f"{6 * len(pats)} identities, failures: {bad or 'none'}"


# 7 ---------------------------------------------------------------------------------

def _quintic_root() -> float:
    lo, hi = 0.5, 0.6
    for _ in range(200):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if mid ** 5 - mid + 0.5 > 0 else (lo, mid)
    return (lo + hi) / 2


@criterion(7, "K_{3,4}^+ threshold is the root of rho^5 = rho - 1/2; infinite thresholds elsewhere")
def test_criterion_07_thresholds():
    th = rho_thresholds(pattern(kst_plus(3, 4)))
    ref = _quintic_root()
    theta = th.rho - 0.5
    ok = abs(th.rho - ref) <= 1e-8 and 2 ** -5 < theta < 2 ** -4
    inf_cases = {"K4-e": clique_minus_edge(2), "K2,3+": kst_plus(2, 3)}
    inf_cases.update({f"C{n}": cycle(n) for n in (5, 7, 9)})
    inf_cases.update({f"K{n}": complete(n) for n in (3, 4, 5, 6)})
    bad = []
    for name, g in inf_cases.items():
        t = rho_thresholds(pattern(g))
        if not (math.isinf(t.rho) and math.isinf(t.rho_hat) and t.infinite_is_proven):
            bad.append(name)
    return ok and not bad, (f"rho = {th.rho:.12f}, root = {ref:.12f}, |diff| = {abs(th.rho - ref):.1e}, "
                            f"theta = {theta:.6f}; not infinite: {bad or 'none'}")


# 8 ---------------------------------------------------------------------------------

@criterion(8, "c1 lower-bound table")
def test_criterion_08_c1_table():
    bad = []

    def c1(g):
        p = pattern(g)
        return p, c1_lower_bound(p, rho_thresholds(p))

    for n in (5, 7, 9):
        if c1(cycle(n))[1][0] != Fraction(1, 2):
            bad.append(f"C{n}")
    for r in (2, 3, 4, 5):
        if c1(complete(r + 1))[1][0] != Fraction(1, r):
            bad.append(f"K{r + 1}")
    for r in (2, 3, 4):
        if c1(clique_minus_edge(r))[1][0] != Fraction(r - 1, r * r):
            bad.append(f"K{r + 2}-e")
    for s, t in ((2, 2), (2, 3), (3, 3), (3, 4)):
        p, (v, per) = c1(kst_plus(s, t))
        theta = rho_thresholds(p).rho - 0.5
        w0, w1 = min(float(p.pi), theta), min(2 * float(p.pi), theta)
        if not (math.isclose(float(per[0]), w0, abs_tol=1e-12) and math.isclose(float(per[1]), w1, abs_tol=1e-12)):
            bad.append(f"K{s},{t}+")
    return not bad, f"mismatches: {bad or 'none'}"


# 9 ---------------------------------------------------------------------------------

@criterion(9, "seven-vertex example: crossing at (3 - sqrt 5)/4 > pi = 1/6")
def test_criterion_09_crossing():
    cq = verify_crossing_quadratic(fig2())
    small = (3 - math.sqrt(5)) / 4
    a, b, c = cq.coefficients
    ok = (a, b, c) == (4, -6, 1) and abs(cq.roots[0] - small) < 1e-12 and cq.smaller_root_exceeds_pi \
        and cq.pi == Fraction(1, 6) and small > 1 / 6
    return ok, f"{a}c^2 + ({b})c + {c}, smaller root {cq.roots[0]:.12f}"


# 10 --------------------------------------------------------------------------------

@criterion(10, "Turán graph T_2(8) plus q edges: fewest K4-e copies")
def test_criterion_10_all_in_one_part():
    vals = {q: t_search(clique_minus_edge(2), 8, q, reduced=False).value for q in (1, 2, 3, 4)}
    want = {q: 6 * q if q <= 2 else 6 * q + 2 * (q - 2) * 4 for q in vals}
    return vals == want, f"t = {vals}, formula {want}"


# 11 --------------------------------------------------------------------------------

@criterion(11, "property suite")
def test_criterion_11_properties():
    notes = []
    # determinism under worker count
    runs = [h_brute(complete(3), 7, 2, k=3, jobs=j) for j in (1, 2, 8)]
    keys = {(r.value, tuple(to_graph6(w) for w in r.witnesses), r.examined) for r in runs}
    det = len(keys) == 1
    notes.append(f"jobs-determinism {det}")
    # p(rho) monotone on a grid
    mono = True
    for g in (kst_plus(3, 4), clique_minus_edge(2), clique_minus_edge(3), fig2()):
        p = pattern(g)
        rho0 = (p.r - 1) / p.r
        pts = emit_curve(p, rho0, 1.0, (1 - rho0) / 50)
        mono &= all(b.p >= a.p - a.certified_gap - 1e-12 for a, b in zip(pts, pts[1:]))
    notes.append(f"monotone {mono}")
    # h <= t, witnesses recount
    hlt = rec = True
    for g, n, q in ((complete(3), 7, 2), (clique_minus_edge(2), 7, 2), (cycle(5), 7, 1)):
        h = h_brute(g, n, q, k=3)
        t = t_search(g, n, q, k=3)
        hlt &= h.value <= t.value
        rec &= all(copies(g, w) == h.value and w.m == h.info["ex"] + q for w in h.witnesses)
        rec &= all(copies(g, w) == t.value for w in t.witnesses)
    notes.append(f"h<=t {hlt}, recount {rec}")
    # graph6 round trip
    rng = np.random.default_rng(11)
    g6 = True
    for _ in range(200):
        n = int(rng.integers(0, 80))
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        keep = rng.random(len(pairs)) < rng.random()
        g = Graph(n, [e for e, k in zip(pairs, keep) if k])
        g6 &= parse_graph6(to_graph6(g)) == g
    notes.append(f"graph6 {g6}")
    # attached-vertex deviation bound over all hosts with parts <= 5
    bound_ok, hosts = True, 0
    for g in (complete(3), cycle(5), clique_minus_edge(2), kst_plus(2, 3)):
        p = pattern(g)
        for sizes in product(range(6), repeat=p.r):
            n = sum(sizes)
            if n == 0:
                continue
            C, N = attached_vertex_bound(p, list(sizes))
            for d in product(*[range(s + 1) for s in sizes]):
                hosts += 1
                val = count_copies_at_vertex(g, build_host(HostSpec(Partition(sizes), (), d)), n)
                approx = Fraction(n) ** (p.f - 1) * p.pf_poly(*[Fraction(x, n) for x in d])
                bound_ok &= abs(val - approx) <= C * Fraction(N) ** (p.f - 2)
    notes.append(f"attached-vertex bound {bound_ok} over {hosts} hosts")
    return det and mono and hlt and rec and g6 and bound_ok, ", ".join(notes)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_") and callable(v)]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
