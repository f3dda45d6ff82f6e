from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

import pytest

from supersat.catalog import clique_minus_edge, complete, cycle, fig2, kst_plus
from supersat.counting import HostSpec, Partition, build_host, count_copies
from supersat.invariants import (
    alpha, attached_vertex_bound, attached_vertex_formula, c_min, c_polynomial, c_value, derivative_symmetry,
    gradient_identity, is_symmetric, nonnegative_coefficients, pair_copy_coefficient, pattern, pf_degree,
    pf_polynomial, pi, taylor_consistency, vanishing_identity, zeta,
)
from supersat.poly import ExactPolynomial

from oracles import copies

CATALOG = [complete(3), complete(4), complete(5), cycle(5), cycle(7), clique_minus_edge(2), clique_minus_edge(3),
           clique_minus_edge(4), kst_plus(2, 2), kst_plus(2, 3), kst_plus(3, 3), kst_plus(3, 4), fig2()]


@pytest.mark.parametrize("f", [complete(3), cycle(5), clique_minus_edge(2), kst_plus(2, 3), complete(4)])
def test_c_value_matches_networkx_count(f):
    r = pattern(f).r
    for sizes in product(range(2, 5), *[range(4)] * (r - 1)):
        host = build_host(HostSpec(Partition(sizes), ((0, 1),)))
        assert c_value(f, list(sizes)) == copies(f, host)


def test_c_value_preconditions():
    with pytest.raises(ValueError):
        c_value(complete(3), [1, 4])
    with pytest.raises(ValueError):
        c_value(complete(3), [3, 3, 3])


def test_c5_on_balanced_hosts():
    # unlabelled 5-cycles through the added edge of K_{m,m} + e
    for m in range(2, 9):
        assert c_value(cycle(5), [m, m]) == m * (m - 1) * (m - 2)


def test_c_min_orientation():
    assert c_min(fig2(), 9) == c_min(fig2(), 9)
    cm = c_min(fig2(), 9)
    assert cm.value == 12 and cm.sizes == (5, 4) and cm.orientation == "larger-part"
    assert c_min(complete(3), 6).orientation == "balanced"
    for n in range(4, 12):
        cm = c_min(kst_plus(2, 3), n)
        lo, hi = n // 2, n - n // 2
        assert cm.value == min(c_value(kst_plus(2, 3), [a, n - a]) for a in {lo, hi} if a >= 2)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_clique_minus_edge_constants(r):
    f = clique_minus_edge(r)
    assert alpha(f) == Fraction(r - 1, 2 * r ** r)
    assert zeta(f) == Fraction(1, 2 * r ** (r - 2))
    assert pi(f) == Fraction(r - 1, r * r)


@pytest.mark.parametrize("s, t", [(2, 2), (2, 3), (3, 3), (3, 4)])
def test_kst_plus_constants(s, t):
    f = kst_plus(s, t)
    den = math.factorial(t) * math.factorial(s - 2)
    assert alpha(f) == Fraction(1, 2 ** (s + t - 2) * den)
    assert zeta(f) == Fraction(t - s + 2, den * 2 ** (s + t - 3))


def test_kst_plus_density_polynomial():
    p = pf_polynomial(kst_plus(3, 4))
    assert p == ExactPolynomial(["x1", "x2"], {(4, 1): Fraction(1, 48), (1, 4): Fraction(1, 48)})


def test_seven_vertex_example():
    f = fig2()
    assert (alpha(f), zeta(f), pi(f)) == (Fraction(1, 192), Fraction(1, 32), Fraction(1, 6))
    assert pf_polynomial(f) == ExactPolynomial(["x1", "x2"], {(1, 3): Fraction(1, 24), (3, 1): Fraction(1, 24)})
    assert pair_copy_coefficient(f) == Fraction(1, 12)
    assert pair_copy_coefficient(kst_plus(3, 4)) == 0


def test_alpha_is_leading_term_of_balanced_count():
    # alpha n^{f-2} ~ c(n/r, ..., n/r) for large n divisible by r
    for f in (clique_minus_edge(2), kst_plus(2, 3), fig2()):
        pat = pattern(f)
        n = 600
        approx = Fraction(c_value(pat, [n // pat.r] * pat.r), n ** (pat.f - 2))
        assert abs(approx - pat.alpha) < Fraction(pat.f ** 3, n) * pat.alpha


def test_zeta_sign_from_imbalance():
    # moving a vertex out of the edge part changes the count by about zeta n^{f-3}
    f = kst_plus(2, 4)
    pat = pattern(f)
    n = 400
    d = c_value(pat, [n // 2 - 1, n // 2 + 1]) - c_value(pat, [n // 2, n // 2])
    assert d > 0 and abs(Fraction(d, n ** (pat.f - 3)) - pat.zeta) < Fraction(1, 10) * pat.zeta


@pytest.mark.parametrize("f", CATALOG)
def test_identities(f):
    pat = pattern(f)
    assert gradient_identity(pat)
    assert vanishing_identity(pat)
    assert is_symmetric(pat.pf_poly)
    assert nonnegative_coefficients(pat.pf_poly)
    assert derivative_symmetry(pat)
    assert taylor_consistency(pat)


@pytest.mark.parametrize("f, deg_r", [
    (complete(3), True), (complete(4), True), (complete(5), True), (complete(6), True),
    (cycle(5), True), (cycle(7), True), (cycle(9), True),
    (clique_minus_edge(2), False), (clique_minus_edge(3), False), (kst_plus(2, 2), False),
    (kst_plus(3, 4), False), (fig2(), False),
])
def test_degree_classification(f, deg_r):
    deg, eq = pf_degree(f)
    assert eq == deg_r
    assert deg >= pattern(f).r


def test_pi_infinite_when_zeta_vanishes():
    # K_{s,s-2}^+ has t - s + 2 = 0
    f = kst_plus(4, 2)
    assert zeta(f) == 0 and math.isinf(pi(f))


def test_c_polynomial_variables():
    p = c_polynomial(clique_minus_edge(3))
    assert p.variables == ("n1", "n2", "n3")


@pytest.mark.parametrize("f", [complete(3), cycle(5), clique_minus_edge(2), kst_plus(2, 3)])
def test_attached_vertex_error_bound(f):
    pat = pattern(f)
    for sizes in product(range(6), repeat=pat.r):
        n = sum(sizes)
        if n == 0:
            continue
        C, N = attached_vertex_bound(pat, list(sizes))
        for d in product(*[range(s + 1) for s in sizes]):
            val = attached_vertex_formula(pat, list(sizes), list(d))
            approx = Fraction(n) ** (pat.f - 1) * pat.pf_poly(*[Fraction(x, n) for x in d])
            assert abs(val - approx) <= C * Fraction(N) ** (pat.f - 2)
