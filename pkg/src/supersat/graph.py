"""Small simple undirected graphs, edge-list and graph6 I/O."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

MAX_HOST_VERTICES = 64


class GraphFormatError(ValueError):
    """Malformed graph text; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, init=False)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    Adjacency rows are kept as int bitmasks so ``adj(u, v)`` is O(1).
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    rows: tuple[int, ...] = field(repr=False, compare=False)

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen: set[tuple[int, int]] = set()
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            e = _norm(u, v)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        object.__setattr__(self, "rows", tuple(rows))

    # -- queries ---------------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.edges)

    def adj(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, u: int) -> list[int]:
        row = self.rows[u]
        return [v for v in range(self.n) if row >> v & 1]

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, g6={to_graph6(self)!r})"

    # -- derived graphs --------------------------------------------------
    def without_edges(self, *drop: tuple[int, int]) -> Graph:
        gone = {_norm(*e) for e in drop}
        missing = gone.difference(self.edges)
        if missing:
            raise ValueError(f"edges not present: {sorted(missing)}")
        return Graph(self.n, (e for e in self.edges if e not in gone))

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> Graph:
        return Graph(self.n, list(self.edges) + [_norm(*e) for e in extra])

    def without_vertex(self, v: int) -> tuple[Graph, list[int]]:
        """Delete ``v``; returns the relabelled graph and new->old vertex map."""
        keep = [u for u in range(self.n) if u != v]
        pos = {u: i for i, u in enumerate(keep)}
        return Graph(self.n - 1, ((pos[a], pos[b]) for a, b in self.edges if v not in (a, b))), keep

    def relabel(self, perm: list[int]) -> Graph:
        """Graph with vertex ``u`` renamed to ``perm[u]``."""
        return Graph(self.n, ((perm[a], perm[b]) for a, b in self.edges))

    def complement(self) -> Graph:
        present = set(self.edges)
        return Graph(self.n, ((u, v) for u in range(self.n) for v in range(u + 1, self.n) if (u, v) not in present))

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen, frontier = 1, 1
        while frontier:
            nxt = 0
            for v in range(self.n):
                if frontier >> v & 1:
                    nxt |= self.rows[v]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1


# -- edge list -------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines (0-based). An optional first data line ``n`` fixes the vertex count."""
    header: int | None = None
    edges: list[tuple[int, int]] = []
    where: dict[tuple[int, int], int] = {}
    first = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"expected integers, got {raw.strip()!r}", lineno) from None
        if first and len(nums) == 1:
            if nums[0] < 0:
                raise GraphFormatError("vertex count must be nonnegative", lineno)
            header = nums[0]
            first = False
            continue
        first = False
        if len(nums) != 2:
            raise GraphFormatError(f"expected 'u v', got {raw.strip()!r}", lineno)
        u, v = nums
        if u < 0 or v < 0:
            raise GraphFormatError(f"negative vertex index in {raw.strip()!r}", lineno)
        if header is not None and (u >= header or v >= header):
            raise GraphFormatError(f"vertex index out of range for n={header}", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        e = _norm(u, v)
        if e in where:
            raise GraphFormatError(f"duplicate edge {u} {v} (first on line {where[e]})", lineno)
        where[e] = lineno
        edges.append(e)
    n = header if header is not None else 1 + max((max(e) for e in edges), default=-1)
    return Graph(n, edges)


def to_edge_list(g: Graph, header: bool = True) -> str:
    lines = [str(g.n)] if header else []
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


# -- graph6 ----------------------------------------------------------------

def _g6_size(n: int) -> list[int]:
    if n < 63:
        return [n]
    if n < 258048:
        return [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    return [63, 63] + [(n >> s) & 63 for s in (30, 24, 18, 12, 6, 0)]


def to_graph6(g: Graph) -> str:
    """Encode as graph6 (no header); bits run over the upper triangle column by column."""
    bits = [1 if g.adj(i, j) else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    data = [int("".join(map(str, bits[k:k + 6])), 2) for k in range(0, len(bits), 6)]
    return "".join(chr(63 + x) for x in _g6_size(g.n) + data)


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphFormatError("empty graph6 string", 1)
    vals = [ord(c) - 63 for c in s]
    if any(not 0 <= x <= 63 for x in vals):
        raise GraphFormatError("graph6 characters must lie in '?'..'~'", 1)
    if vals[0] != 63:
        n, data = vals[0], vals[1:]
    elif len(vals) >= 2 and vals[1] == 63:
        if len(vals) < 8:
            raise GraphFormatError("truncated graph6 size field", 1)
        n, data = _from6(vals[2:8]), vals[8:]
    else:
        if len(vals) < 4:
            raise GraphFormatError("truncated graph6 size field", 1)
        n, data = _from6(vals[1:4]), vals[4:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(data) != need:
        raise GraphFormatError(f"graph6 body has {len(data)} bytes, expected {need} for n={n}", 1)
    bits = [(x >> (5 - k)) & 1 for x in data for k in range(6)]
    edges = []
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if bits[pos]:
                edges.append((i, j))
            pos += 1
    if any(bits[pos:]):
        raise GraphFormatError("nonzero padding bits in graph6 body", 1)
    return Graph(n, edges)


def _from6(chunk: list[int]) -> int:
    out = 0
    for x in chunk:
        out = (out << 6) | x
    return out


def parse_graph(text: str, fmt: str = "edge-list") -> Graph:
    if fmt == "edge-list":
        return parse_edge_list(text)
    if fmt == "graph6":
        return parse_graph6(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def encode_graph(g: Graph, fmt: str = "edge-list") -> str:
    if fmt == "edge-list":
        return to_edge_list(g)
    if fmt == "graph6":
        return to_graph6(g) + "\n"
    raise ValueError(f"unknown graph format {fmt!r}")
