"""Exact symbolic invariants of an r-critical pattern.

Builds the one-extra-edge copy count c(n_1..n_r; F) and the attached-vertex
density polynomial P_F as exact polynomials, and extracts alpha, zeta, pi and
deg P_F from them.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations

from .coloring import CriticalStructure, automorphism_count, criticality
from .graph import Graph
from .poly import ExactPolynomial, falling_factorial

INF = math.inf


class Pattern:
    """An r-critical pattern with its critical structure and derived polynomials (all lazily cached)."""

    def __init__(self, graph: Graph, cs: CriticalStructure | None = None):
        self.graph = graph
        self.cs = cs if cs is not None else criticality(graph)
        if self.cs.r < 2:
            raise ValueError("patterns must be r-critical with r >= 2")

    @property
    def r(self) -> int:
        return self.cs.r

    @property
    def f(self) -> int:
        return self.graph.n

    @cached_property
    def aut(self) -> int:
        return automorphism_count(self.graph)

    @cached_property
    def edge_profiles(self) -> Counter:
        """Multiset of colour-class sizes (x^1..x^r) over critical edges and their pinned colourings."""
        prof: Counter = Counter()
        for (u, v), cols in self.cs.colorings_per_edge.items():
            for col in cols:
                x = [0] * self.r
                for w, c in enumerate(col):
                    if w not in (u, v):
                        x[c - 1] += 1
                prof[tuple(x)] += 1
        return prof

    @cached_property
    def vertex_profiles(self) -> Counter:
        """Multiset of (y, x) over critical vertices u and colourings of F-u.

        y_i counts neighbours of u coloured i, x_i the remaining vertices coloured i.
        """
        prof: Counter = Counter()
        g = self.graph
        for u, cols in self.cs.colorings_per_vertex.items():
            for col in cols:
                y = [0] * self.r
                x = [0] * self.r
                for w, c in enumerate(col):
                    if w == u:
                        continue
                    if g.adj(u, w):
                        y[c - 1] += 1
                    else:
                        x[c - 1] += 1
                prof[(tuple(y), tuple(x))] += 1
        return prof

    @cached_property
    def c_poly(self) -> ExactPolynomial:
        return c_polynomial(self)

    @cached_property
    def pf_poly(self) -> ExactPolynomial:
        return pf_polynomial(self)

    @cached_property
    def alpha(self) -> Fraction:
        return alpha(self)

    @cached_property
    def zeta(self) -> Fraction:
        return zeta(self)

    @cached_property
    def pi(self) -> Fraction | float:
        return pi(self)

    @cached_property
    def deg_p(self) -> int:
        return self.pf_poly.degree()


@lru_cache(maxsize=256)
def pattern(graph: Graph) -> Pattern:
    return Pattern(graph)


def _as_pattern(F: Graph | Pattern, cs: CriticalStructure | None = None) -> Pattern:
    if isinstance(F, Pattern):
        return F
    return pattern(F) if cs is None else Pattern(F, cs)


def part_vars(r: int) -> list[str]:
    return [f"n{i}" for i in range(1, r + 1)]


def density_vars(r: int) -> list[str]:
    return [f"x{i}" for i in range(1, r + 1)]


def c_polynomial(F: Graph | Pattern, cs: CriticalStructure | None = None) -> ExactPolynomial:
    """Copies of F in K(V_1..V_r) plus one edge inside V_1, as a polynomial in n_1..n_r."""
    p = _as_pattern(F, cs)
    names = part_vars(p.r)
    nvars = [ExactPolynomial.var(names, v) for v in names]
    ff = {}

    def fall(i: int, k: int) -> ExactPolynomial:
        if (i, k) not in ff:
            base = nvars[0] - 2 if i == 0 else nvars[i]
            ff[(i, k)] = falling_factorial(base, k)
        return ff[(i, k)]

    total = ExactPolynomial(names)
    for x, mult in sorted(p.edge_profiles.items()):
        term = ExactPolynomial.const(names, 2 * mult)
        for i, k in enumerate(x):
            term = term * fall(i, k)
        total = total + term
    return total / p.aut


def c_value(F: Graph | Pattern, sizes: list[int]) -> int:
    p = _as_pattern(F)
    if len(sizes) != p.r:
        raise ValueError(f"partition needs {p.r} parts, got {len(sizes)}")
    if sizes[0] < 2:
        raise ValueError("the first part must hold the extra edge (size >= 2)")
    if min(sizes) < 0:
        raise ValueError("part sizes must be nonnegative")
    val = p.c_poly(*sizes)
    assert val.denominator == 1
    return int(val)


@dataclass(frozen=True)
class CMin:
    value: int
    sizes: tuple[int, ...]  # orientation attaining the minimum; extra edge in sizes[0]
    orientation: str  # "balanced", "smaller-part" or "larger-part"


def c_min(F: Graph | Pattern, n: int) -> CMin:
    """c(n, F): the cheaper of the two orientations of the near-equal partition."""
    p = _as_pattern(F)
    if n < p.r:
        raise ValueError("need n >= r")
    q, rem = divmod(n, p.r)
    asc = [q] * (p.r - rem) + [q + 1] * rem
    desc = asc[::-1]
    if rem == 0:
        return CMin(c_value(p, asc), tuple(asc), "balanced")
    small = c_value(p, asc) if asc[0] >= 2 else None
    large = c_value(p, desc)
    if small is not None and small < large:
        return CMin(small, tuple(asc), "smaller-part")
    return CMin(large, tuple(desc), "larger-part")


def _balanced(poly: ExactPolynomial, r: int) -> ExactPolynomial:
    n = ExactPolynomial.var(["n"], "n")
    return poly.substitute({v: n / r for v in poly.variables}, ["n"])


def alpha(F: Graph | Pattern) -> Fraction:
    p = _as_pattern(F)
    return _balanced(p.c_poly, p.r).coefficient((p.f - 2,))


def zeta(F: Graph | Pattern) -> Fraction:
    """Coefficient of n^{f-3} in (dc/dn_2 - dc/dn_1) at the balanced point."""
    p = _as_pattern(F)
    diff = p.c_poly.diff("n2") - p.c_poly.diff("n1")
    return _balanced(diff, p.r).coefficient((p.f - 3,))


def pi(F: Graph | Pattern) -> Fraction | float:
    p = _as_pattern(F)
    return INF if p.zeta == 0 else p.alpha / abs(p.zeta)


def pf_polynomial(F: Graph | Pattern, cs: CriticalStructure | None = None) -> ExactPolynomial:
    p = _as_pattern(F, cs)
    names = density_vars(p.r)
    terms: Counter = Counter()
    for (y, x), mult in p.vertex_profiles.items():
        terms[y] += Fraction(mult, p.r ** sum(x))
    return ExactPolynomial(names, terms) / p.aut


def pf_degree(F: Graph | Pattern) -> tuple[int, bool]:
    """Total degree of P_F and whether it equals r."""
    p = _as_pattern(F)
    return p.deg_p, p.deg_p == p.r


def attached_vertex_formula(F: Graph | Pattern, sizes: list[int], d: list[int]) -> int:
    """Copies of F through the extra vertex z of K(V_1..V_r) + z, z having d_i neighbours in V_i."""
    p = _as_pattern(F)
    total = 0
    for (y, x), mult in p.vertex_profiles.items():
        t = mult
        for i in range(p.r):
            t *= _fall_int(sizes[i] - y[i], x[i]) * _fall_int(d[i], y[i])
            if not t:
                break
        total += t
    q, rem = divmod(total, p.aut)
    assert rem == 0
    return q


def _fall_int(a: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= a - j
    return out


def attached_vertex_bound(F: Graph | Pattern, sizes: list[int]) -> tuple[Fraction, int]:
    """Constant C and base N with |F(n;d) - n^{f-1} P_F(d/n)| <= C N^{f-2} for every admissible d.

    n = sum(sizes), N = max(n, f); C grows with the imbalance max|n_i - n/r|.
    """
    p = _as_pattern(F)
    n = sum(sizes)
    imb = max(abs(Fraction(s) - Fraction(n, p.r)) for s in sizes)
    acc = Fraction(0)
    for (y, x), mult in p.vertex_profiles.items():
        per = sum(x[i] * (imb + y[i]) + math.comb(x[i], 2) + math.comb(y[i], 2) for i in range(p.r))
        acc += mult * per
    return acc / p.aut, max(n, p.f)


# -- identities ---------------------------------------------------------------

def gradient_identity(F: Graph | Pattern) -> bool:
    """dP_F/dxi_1 at (0, 1/r, ..., 1/r) equals alpha."""
    p = _as_pattern(F)
    pt = [Fraction(0)] + [Fraction(1, p.r)] * (p.r - 1)
    return p.pf_poly.diff("x1")(*pt) == p.alpha


def vanishing_identity(F: Graph | Pattern) -> bool:
    p = _as_pattern(F)
    return p.pf_poly(*([Fraction(1, p.r)] * (p.r - 1) + [0])) == 0


def is_symmetric(poly: ExactPolynomial) -> bool:
    k = len(poly.variables)
    for i in range(k - 1):
        perm = list(range(k))
        perm[i], perm[i + 1] = i + 1, i
        if poly.permuted(perm) != poly:
            return False
    return True


def nonnegative_coefficients(poly: ExactPolynomial) -> bool:
    return all(c >= 0 for c in poly.terms.values())


def derivative_symmetry(F: Graph | Pattern) -> bool:
    """dc/dn_i agree for all i >= 2 at the balanced point, as polynomials in n."""
    p = _as_pattern(F)
    derivs = [_balanced(p.c_poly.diff(f"n{i}"), p.r) for i in range(2, p.r + 1)]
    return all(d == derivs[0] for d in derivs[1:])


def taylor_linear_part(F: Graph | Pattern) -> ExactPolynomial:
    """Part of c(n/r,...) - c(n/r + a_1, ..., n/r + a_r) linear in a and of degree f-3 in n (sum a_i = 0)."""
    p = _as_pattern(F)
    r = p.r
    names = ["n"] + [f"a{i}" for i in range(1, r)]
    n = ExactPolynomial.var(names, "n")
    a = [ExactPolynomial.var(names, f"a{i}") for i in range(1, r)]
    a.append(-sum(a, ExactPolynomial(names)))
    base = p.c_poly.substitute({f"n{i + 1}": n / r for i in range(r)}, names)
    moved = p.c_poly.substitute({f"n{i + 1}": n / r + a[i] for i in range(r)}, names)
    diff = base - moved
    keep = {e: c for e, c in diff.terms.items() if e[0] == p.f - 3 and sum(e[1:]) == 1}
    return ExactPolynomial(names, keep)


def taylor_consistency(F: Graph | Pattern) -> bool:
    p = _as_pattern(F)
    names = ["n"] + [f"a{i}" for i in range(1, p.r)]
    expect = ExactPolynomial(names, {(p.f - 3, 1) + (0,) * (p.r - 2): p.zeta})
    return taylor_linear_part(p) == expect


def pair_copy_coefficient(F: Graph | Pattern) -> Fraction:
    """Leading coefficient (in n^{f-4}) of copies through two disjoint extra edges of V_1 at the balanced partition.

    Counts colourings of F minus two edges with all four endpoints in colour 1.
    """
    from .coloring import proper_colorings

    p = _as_pattern(F)
    g = p.graph
    total = Fraction(0)
    for e1, e2 in combinations(g.edges, 2):
        if set(e1) & set(e2):
            continue
        pins = {v: 1 for v in (*e1, *e2)}
        for col in proper_colorings(g.without_edges(e1, e2), p.r, pins):
            # two orders of (e1, e2) onto the two extra edges, two orientations each
            total += 8 * Fraction(1, p.r ** (p.f - 4))
    return total / p.aut
