"""Exact colorings, color-criticality, automorphism counts and the pair-free test."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph import Graph

MAX_PATTERN_VERTICES = 10
MAX_AUT_VERTICES = 12

Coloring = tuple[int, ...]  # colour of vertex v is coloring[v], colours 1..r


class NotColorCritical(ValueError):
    pass


class SizeLimitExceeded(ValueError):
    pass


def proper_colorings(g: Graph, r: int, pins: dict[int, int] | None = None) -> list[Coloring]:
    """All labelled proper ``r``-colorings honouring ``pins``, in lexicographic order."""
    if r < 1:
        raise ValueError("r must be positive")
    pins = dict(pins or {})
    for v, c in pins.items():
        if not 0 <= v < g.n:
            raise ValueError(f"pinned vertex {v} not in graph")
        if not 1 <= c <= r:
            return []
    out: list[Coloring] = []
    col = [0] * g.n
    earlier = [[u for u in g.neighbors(v) if u < v] for v in range(g.n)]

    def extend(v: int) -> None:
        if v == g.n:
            out.append(tuple(col))
            return
        choices = (pins[v],) if v in pins else range(1, r + 1)
        for c in choices:
            if all(col[u] != c for u in earlier[v]):
                col[v] = c
                extend(v + 1)
        col[v] = 0

    extend(0)
    return out


def is_colorable(g: Graph, k: int, pins: dict[int, int] | None = None) -> bool:
    """Whether ``g`` has a proper ``k``-colouring; stops at the first one found."""
    if g.n == 0:
        return True
    if k < 1:
        return False
    pins = pins or {}
    order = sorted(range(g.n), key=lambda v: (v not in pins, -g.degree(v), v))
    placed = [False] * g.n
    col = [0] * g.n
    nbrs = [g.neighbors(v) for v in range(g.n)]

    def extend(i: int, used: int) -> bool:
        if i == g.n:
            return True
        v = order[i]
        if v in pins:
            choices = [pins[v]]
        else:
            # symmetry: a fresh colour is only tried once
            choices = list(range(1, min(used + 1, k) + 1))
        for c in choices:
            if all(not placed[u] or col[u] != c for u in nbrs[v]):
                col[v], placed[v] = c, True
                if extend(i + 1, max(used, c) if v not in pins else k):
                    return True
                placed[v] = False
        return False

    return extend(0, 0 if not pins else k)


def chromatic_number(g: Graph) -> int:
    """Exact chromatic number by increasing-k backtracking."""
    if g.n == 0:
        raise ValueError("chromatic number of the empty graph is undefined here")
    if g.m == 0:
        return 1
    k = 2
    while not is_colorable(g, k):
        k += 1
    return k


@dataclass(frozen=True)
class CriticalStructure:
    r: int
    critical_edges: tuple[tuple[int, int], ...]
    critical_vertices: tuple[int, ...]
    colorings_per_edge: dict[tuple[int, int], tuple[Coloring, ...]]
    # colourings of F-u indexed by original vertex labels, u itself gets 0
    colorings_per_vertex: dict[int, tuple[Coloring, ...]]


def criticality(f: Graph) -> CriticalStructure:
    if f.n == 0 or f.m == 0:
        raise NotColorCritical("pattern must have at least one edge")
    if f.n > MAX_PATTERN_VERTICES:
        raise SizeLimitExceeded(f"pattern has {f.n} vertices; limit is {MAX_PATTERN_VERTICES}")
    r = chromatic_number(f) - 1
    crit_edges = tuple(e for e in f.edges if is_colorable(f.without_edges(e), r))
    if not crit_edges:
        raise NotColorCritical(f"no edge lowers the chromatic number {r + 1}")
    crit_vertices = []
    per_vertex = {}
    for u in range(f.n):
        rest, back = f.without_vertex(u)
        if not is_colorable(rest, r):
            continue
        crit_vertices.append(u)
        lifted = []
        for col in proper_colorings(rest, r):
            full = [0] * f.n
            for i, c in enumerate(col):
                full[back[i]] = c
            lifted.append(tuple(full))
        per_vertex[u] = tuple(lifted)
    per_edge = {
        (u, v): tuple(proper_colorings(f.without_edges((u, v)), r, {u: 1, v: 1}))
        for u, v in crit_edges
    }
    return CriticalStructure(r, crit_edges, tuple(crit_vertices), per_edge, per_vertex)


def automorphism_count(g: Graph) -> int:
    """|Aut(g)| as a product of orbit sizes along the pointwise stabiliser chain."""
    if g.n > MAX_AUT_VERTICES:
        raise SizeLimitExceeded(f"automorphism search limited to {MAX_AUT_VERTICES} vertices")
    deg = g.degrees()
    total = 1
    for k in range(g.n):
        prefix = list(range(k))
        orbit = sum(1 for w in range(k, g.n) if deg[w] == deg[k] and _extends(g, deg, prefix + [w]))
        total *= orbit
    return total


def _extends(g: Graph, deg: list[int], images: list[int]) -> bool:
    """Is there an automorphism sending vertex i to images[i] for the given prefix?"""
    n = g.n
    img = images + [-1] * (n - len(images))
    used = 0
    for i, w in enumerate(images):
        used |= 1 << w
    for i in range(len(images)):
        for j in range(i):
            if g.adj(i, j) != g.adj(img[i], img[j]):
                return False

    def extend(i: int, used: int) -> bool:
        if i == n:
            return True
        for w in range(n):
            if used >> w & 1 or deg[w] != deg[i]:
                continue
            if all(g.adj(i, j) == g.adj(w, img[j]) for j in range(i)):
                img[i] = w
                if extend(i + 1, used | 1 << w):
                    return True
        img[i] = -1
        return False

    return extend(len(images), used)


@dataclass(frozen=True)
class PairWitness:
    edges: tuple[tuple[int, int], tuple[int, int]]
    coloring: Coloring


def is_pair_free(f: Graph, cs: CriticalStructure) -> tuple[bool, PairWitness | None]:
    """Pair-free test; on failure returns the lexicographically first offending edge pair."""
    for e1, e2 in combinations(f.edges, 2):
        pins = {v: 1 for v in (*e1, *e2)}
        cols = proper_colorings(f.without_edges(e1, e2), cs.r, pins)
        if cols:
            return False, PairWitness((e1, e2), cols[0])
    return True, None
