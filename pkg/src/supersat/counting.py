"""Exact subgraph-copy counts and the structured hosts (multipartite + extras + attached vertex)."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .coloring import MAX_PATTERN_VERTICES, SizeLimitExceeded, automorphism_count
from .graph import MAX_HOST_VERTICES, Graph


class ConsistencyError(RuntimeError):
    """Closed formula and brute count disagree."""


# -- pattern preprocessing ----------------------------------------------------

def search_order(f: Graph, start: tuple[int, ...] = ()) -> list[int]:
    """Vertex order: the given roots first, then most already-placed neighbours, then degree."""
    order = list(start)
    placed = set(order)
    while len(order) < f.n:
        v = max(
            (w for w in range(f.n) if w not in placed),
            key=lambda w: (sum(f.adj(w, u) for u in order), f.degree(w), -w),
        )
        order.append(v)
        placed.add(v)
    return order


def prev_masks(f: Graph, order: list[int]) -> np.ndarray:
    pos = {v: i for i, v in enumerate(order)}
    out = np.zeros(len(order), np.int64)
    for i, v in enumerate(order):
        out[i] = sum(1 << pos[u] for u in f.neighbors(v) if pos[u] < i)
    return out


def host_rows(g: Graph) -> np.ndarray:
    if g.n > MAX_HOST_VERTICES:
        raise SizeLimitExceeded(f"host has {g.n} vertices; limit is {MAX_HOST_VERTICES}")
    return np.array(g.rows, dtype=np.uint64)


@dataclass(frozen=True)
class PatternKernel:
    """Arrays the numba kernels need for one pattern."""

    aut: int
    full: np.ndarray = field(repr=False)  # prev masks for an unrooted count
    edge_prevs: np.ndarray = field(repr=False)  # one row per orbit of ordered edges, root pair pinned
    edge_weights: np.ndarray = field(repr=False)  # orbit sizes
    vertex_prevs: np.ndarray = field(repr=False)  # one row per vertex orbit
    vertex_weights: np.ndarray = field(repr=False)


@lru_cache(maxsize=128)
def pattern_kernel(f: Graph) -> PatternKernel:
    if f.n > MAX_PATTERN_VERTICES:
        raise SizeLimitExceeded(f"pattern has {f.n} vertices; limit is {MAX_PATTERN_VERTICES}")
    aut = automorphism_count(f)
    frows = host_rows(f)

    def orbit_reps(roots: list[tuple[int, ...]]) -> tuple[np.ndarray, np.ndarray]:
        reps: list[tuple[tuple[int, ...], np.ndarray]] = []
        weights: list[int] = []
        for root in roots:
            for k, (rep, prevs) in enumerate(reps):
                pins = tuple(root) + (-1,) * (2 - len(root))
                if _kernels.count_injections(frows, f.n, prevs, *pins) > 0:
                    weights[k] += 1
                    break
            else:
                reps.append((root, prev_masks(f, search_order(f, root))))
                weights.append(1)
        prevs = np.array([p for _, p in reps], dtype=np.int64).reshape(len(reps), f.n)
        return prevs, np.array(weights, dtype=np.int64)

    ordered_edges = [(a, b) for a, b in f.edges] + [(b, a) for a, b in f.edges]
    edge_prevs, edge_w = orbit_reps(sorted(ordered_edges))
    # positions 0 and 1 are pinned onto (u, v): drop their mutual adjacency so the
    # count means "copies in G + uv through uv" whether or not uv is already present
    edge_prevs[:, 1] &= ~1
    vertex_prevs, vertex_w = orbit_reps([(v,) for v in range(f.n)])
    return PatternKernel(aut, prev_masks(f, search_order(f)), edge_prevs, edge_w, vertex_prevs, vertex_w)


# -- counting -----------------------------------------------------------------

def count_injections(f: Graph, g: Graph, order: list[int] | None = None) -> int:
    """Edge-preserving injections V(f) -> V(g); ``order`` overrides the search order."""
    if f.n > g.n:
        return 0
    prevs = prev_masks(f, order) if order is not None else pattern_kernel(f).full
    return int(_kernels.count_injections(host_rows(g), g.n, prevs, -1, -1))


def count_copies(f: Graph, g: Graph) -> int:
    """Number of subgraphs of ``g`` isomorphic to ``f``."""
    if f.n > g.n:
        return 0
    pk = pattern_kernel(f)
    inj = int(_kernels.count_injections(host_rows(g), g.n, pk.full, -1, -1))
    assert inj % pk.aut == 0
    return inj // pk.aut


def count_copies_at_vertex(f: Graph, g: Graph, v: int) -> int:
    """Copies of ``f`` in ``g`` whose vertex set contains ``v``."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} not in host")
    if f.n > g.n:
        return 0
    pk = pattern_kernel(f)
    rows = host_rows(g)
    total = sum(int(w) * int(_kernels.count_injections(rows, g.n, p, v, -1))
                for p, w in zip(pk.vertex_prevs, pk.vertex_weights))
    assert total % pk.aut == 0
    return total // pk.aut


def count_copies_at_edge(f: Graph, g: Graph, u: int, v: int) -> int:
    """Copies of ``f`` in ``g`` that use the edge ``uv``."""
    if not g.adj(u, v):
        raise ValueError(f"({u}, {v}) is not an edge of the host")
    if f.n > g.n:
        return 0
    pk = pattern_kernel(f)
    total = int(_kernels.rooted_weighted(host_rows(g), g.n, pk.edge_prevs, pk.edge_weights, u, v))
    assert total % pk.aut == 0
    return total // pk.aut


# -- structured hosts ---------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not self.sizes or min(self.sizes) < 0:
            raise ValueError("partition sizes must be nonnegative and nonempty")

    @classmethod
    def balanced(cls, n: int, r: int) -> Partition:
        q, rem = divmod(n, r)
        return cls(tuple([q] * (r - rem) + [q + 1] * rem))

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def r(self) -> int:
        return len(self.sizes)

    def starts(self) -> list[int]:
        return [sum(self.sizes[:i]) for i in range(self.r)]

    def part_of(self, v: int) -> int:
        for i, s in enumerate(self.starts()):
            if s <= v < s + self.sizes[i]:
                return i
        raise ValueError(f"vertex {v} outside partition")

    def vertices(self, i: int) -> list[int]:
        s = self.starts()[i]
        return list(range(s, s + self.sizes[i]))


@dataclass(frozen=True)
class HostSpec:
    partition: Partition
    extra_edges: tuple[tuple[int, int], ...] = ()
    attached: tuple[int, ...] | None = None  # degree list d into the parts

    def validate(self) -> None:
        p = self.partition
        for u, v in self.extra_edges:
            if u == v or not (0 <= u < p.n and 0 <= v < p.n):
                raise ValueError(f"extra edge ({u}, {v}) invalid")
            if p.part_of(u) != p.part_of(v):
                raise ValueError(f"extra edge ({u}, {v}) crosses parts")
        if self.attached is not None:
            if len(self.attached) != p.r:
                raise ValueError("degree list length must equal the number of parts")
            for d, s in zip(self.attached, p.sizes):
                if not 0 <= d <= s:
                    raise ValueError(f"attached degree {d} outside [0, {s}]")


def build_host(spec: HostSpec) -> Graph:
    """K(V_1..V_r) on contiguous parts, plus intra-part extras, plus an optional last vertex z."""
    spec.validate()
    p = spec.partition
    edges = []
    starts = p.starts()
    for i in range(p.r):
        for j in range(i + 1, p.r):
            edges += [(a, b) for a in p.vertices(i) for b in p.vertices(j)]
    edges += list(spec.extra_edges)
    n = p.n
    if spec.attached is not None:
        z = n
        n += 1
        for i, d in enumerate(spec.attached):
            edges += [(starts[i] + k, z) for k in range(d)]
    return Graph(n, edges)


def count_with_attached_vertex(f: Graph, partition: Partition | tuple[int, ...], d: tuple[int, ...]) -> int:
    """Copies through the attached vertex, by brute count and by closed formula (which must agree)."""
    from .invariants import attached_vertex_formula

    if not isinstance(partition, Partition):
        partition = Partition(tuple(partition))
    host = build_host(HostSpec(partition, (), tuple(d)))
    brute = count_copies_at_vertex(f, host, host.n - 1)
    formula = attached_vertex_formula(f, list(partition.sizes), list(d))
    if brute != formula:
        raise ConsistencyError(f"attached-vertex count: brute {brute} != formula {formula}")
    return brute
