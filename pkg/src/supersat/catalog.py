"""Named pattern graphs and a small canonical-form routine for cache keys."""

from __future__ import annotations

import re
from itertools import combinations

from .graph import Graph, to_graph6


def complete(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def clique_minus_edge(r: int) -> Graph:
    """K_{r+2} with the edge 0-1 removed."""
    return Graph(r + 2, (e for e in combinations(range(r + 2), 2) if e != (0, 1)))


def kst_plus(s: int, t: int) -> Graph:
    """K_{s,t} plus the edge 0-1 inside the part of size s (vertices 0..s-1)."""
    if s < 2 or t < 1:
        raise ValueError("K_{s,t}^+ needs s >= 2 and t >= 1")
    edges = [(0, 1)] + [(a, s + b) for a in range(s) for b in range(t)]
    return Graph(s + t, edges)


# vertices a..g -> 0..6; ab is the only critical edge
FIG2_EDGES = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (5, 2), (5, 3), (5, 4), (5, 6)]
FIG2_LABELS = "abcdefg"


def fig2() -> Graph:
    """7-vertex 2-critical graph whose c1 exceeds min(pi, theta)."""
    return Graph(7, FIG2_EDGES)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def complete_multipartite(sizes: list[int]) -> Graph:
    starts = [sum(sizes[:i]) for i in range(len(sizes))]
    edges = []
    for i, j in combinations(range(len(sizes)), 2):
        edges += [(starts[i] + a, starts[j] + b) for a in range(sizes[i]) for b in range(sizes[j])]
    return Graph(sum(sizes), edges)


def balanced_sizes(n: int, r: int) -> list[int]:
    """Part sizes of T_r(n) in ascending order."""
    q, rem = divmod(n, r)
    return [q] * (r - rem) + [q + 1] * rem


def turan_graph(n: int, r: int) -> Graph:
    return complete_multipartite(balanced_sizes(n, r))


def turan_edges(n: int, r: int) -> int:
    sizes = balanced_sizes(n, r)
    return (n * n - sum(s * s for s in sizes)) // 2


_NAME_PATTERNS: list[tuple[re.Pattern, object]] = [
    (re.compile(r"^k_?\{?(\d+)\}?-e$"), lambda m: clique_minus_edge(int(m[1]) - 2)),
    (re.compile(r"^k_?\{?(\d+),(\d+)\}?\^?\{?\+\}?$"), lambda m: kst_plus(int(m[1]), int(m[2]))),
    (re.compile(r"^k_?\{?(\d+)\}?$"), lambda m: complete(int(m[1]))),
    (re.compile(r"^c_?\{?(\d+)\}?$"), lambda m: cycle(int(m[1]))),
    (re.compile(r"^(fig2|figure2|counterexample)$"), lambda m: fig2()),
    (re.compile(r"^petersen$"), lambda m: petersen()),
]


def by_name(name: str) -> Graph:
    """Build a catalog graph from names like ``K3``, ``K_4-e``, ``C_5``, ``K_{3,4}^+``, ``fig2``."""
    key = name.strip().lower().replace(" ", "").replace("−", "-")
    for pat, build in _NAME_PATTERNS:
        m = pat.match(key)
        if m:
            return build(m)
    raise KeyError(f"unknown catalog graph {name!r}")


# -- canonical form ------------------------------------------------------------

def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement: split cells by neighbour counts into every cell until stable."""
    while True:
        masks = [sum(1 << v for v in c) for c in cells]
        out: list[list[int]] = []
        changed = False
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            sig = {v: tuple((g.rows[v] & mk).bit_count() for mk in masks) for v in c}
            keys = sorted(set(sig.values()))
            if len(keys) > 1:
                changed = True
            for k in keys:
                out.append([v for v in c if sig[v] == k])
        cells = out
        if not changed:
            return cells


def _twin_reps(g: Graph, cell: list[int]) -> list[int]:
    reps: list[int] = []
    for v in cell:
        for w in reps:
            if g.rows[v] & ~(1 << w) == g.rows[w] & ~(1 << v):
                break
        else:
            reps.append(v)
    return reps


def canonical_form(g: Graph) -> Graph:
    """Isomorphism-invariant relabelling (individualize-refine, min graph6 over leaves).

    Interchangeable twin vertices are branched on once; fine for the pattern
    sizes used here, not meant for large symmetric hosts.
    """
    if g.n <= 1:
        return g
    by_deg: dict[int, list[int]] = {}
    for v in range(g.n):
        by_deg.setdefault(g.degree(v), []).append(v)
    start = _refine(g, [by_deg[d] for d in sorted(by_deg)])
    best: tuple[str, Graph] | None = None
    stack = [start]
    while stack:
        cells = stack.pop()
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            perm = [0] * g.n
            for pos, c in enumerate(cells):
                perm[c[0]] = pos
            h = g.relabel(perm)
            code = to_graph6(h)
            if best is None or code < best[0]:
                best = (code, h)
            continue
        cell = cells[target]
        for v in _twin_reps(g, cell):
            split = cells[:target] + [[v], [w for w in cell if w != v]] + cells[target + 1:]
            stack.append(_refine(g, split))
    assert best is not None
    return best[1]


def canonical_graph6(g: Graph) -> str:
    return to_graph6(canonical_form(g))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if (g.n, g.m) != (h.n, h.m) or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_graph6(g) == canonical_graph6(h)
