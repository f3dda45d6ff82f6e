"""Exhaustive small-case values of ex(n,F), h_F(n,q), t_F(n,q), the explicit constructions, and a result cache."""

from __future__ import annotations

import fcntl
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from pathlib import Path

import numpy as np

from . import _kernels
from .catalog import balanced_sizes, canonical_form, canonical_graph6, turan_edges, turan_graph
from .counting import Partition, build_host, count_copies, HostSpec, pattern_kernel
from .graph import Graph, parse_graph6, to_graph6
from .invariants import Pattern, c_min, pair_copy_coefficient, pattern

CACHE_ENV = "SUPERSAT_CACHE_DIR"
CACHE_FILE = "oracle_cache.txt"
CACHE_FORMAT = 1
PREFIX_LEN = 6  # edge decisions fixed per work unit; independent of --jobs


class BudgetExceeded(RuntimeError):
    def __init__(self, what: str, projected: int, budget: int):
        self.projected = projected
        self.budget = budget
        super().__init__(f"{what}: projected {projected:,} exceeds budget {budget:,}")


@dataclass(frozen=True)
class Budget:
    max_ex_n: int = 10
    max_subsets: int = 30_000_000  # h: number of m-edge graphs on n labelled vertices
    max_t_subsets: int = 5_000_000  # t: added-edge subsets (before symmetry reduction)

    def signature(self) -> str:
        return f"e{self.max_ex_n}s{self.max_subsets}t{self.max_t_subsets}"


@dataclass
class OracleResult:
    kind: str  # "ex", "h" or "t"
    pattern_g6: str  # canonical graph6 of the pattern
    n: int
    q: int
    value: int
    witnesses: list[Graph] = field(default_factory=list)
    examined: int = 0
    elapsed: float = 0.0
    cached: bool = False
    info: dict = field(default_factory=dict)


# -- work distribution --------------------------------------------------------

def parallel_map(fn, items: list, jobs: int = 1) -> list:
    """Ordered map; ``jobs > 1`` uses worker processes. Output order never depends on ``jobs``."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def colex_edges(n: int) -> list[tuple[int, int]]:
    """All vertex pairs ordered by larger endpoint, then smaller: (0,1), (0,2), (1,2), (0,3), ..."""
    return [(u, v) for v in range(n) for u in range(v)]


def _prefixes(length: int, force_first: bool) -> list[np.ndarray]:
    out = []
    for bits in product((1, 0), repeat=length):
        if force_first and length and bits[0] == 0:
            continue
        out.append(np.array(bits, dtype=np.int8))
    return out


def _edge_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    edges = colex_edges(n)
    return np.array([e[0] for e in edges], np.int64), np.array([e[1] for e in edges], np.int64)


def _mask_graph(n: int, mask) -> Graph:
    return Graph(n, (e for e, b in zip(colex_edges(n), mask) if b))


# -- ex(n, F) -----------------------------------------------------------------

def _ex_unit(args):
    f, n, prefix, floor = args
    pk = pattern_kernel(f)
    eu, ev = _edge_arrays(n)
    best, wit, nodes = _kernels.max_free_search(n, eu, ev, prefix, pk.edge_prevs, pk.edge_weights, pk.aut, floor)
    return int(best), wit.copy(), int(nodes)


def ex_brute(f: Graph, n: int, budget: Budget = Budget(), jobs: int = 1) -> OracleResult:
    """Exact ex(n, F) by branch-and-bound over labelled graphs, seeded with the Turán lower bound."""
    t0 = time.perf_counter()
    pat = pattern(f)
    if n > budget.max_ex_n:
        raise BudgetExceeded(f"ex search at n={n}", 2 ** (n * (n - 1) // 2), 2 ** (budget.max_ex_n * (budget.max_ex_n - 1) // 2))
    g6 = canonical_graph6(f)
    tr = turan_edges(n, pat.r)
    total = n * (n - 1) // 2
    if n < f.n or total == 0:
        wit = Graph(n, colex_edges(n))
        return OracleResult("ex", g6, n, 0, total, [wit], 1, time.perf_counter() - t0,
                            info={"turan_edges": tr, "equals_turan": total == tr})
    # some maximum F-free graph contains the edge (0,1) after relabelling
    plen = min(PREFIX_LEN, total)
    units = [(f, n, p, tr - 1) for p in _prefixes(plen, True)]
    results = parallel_map(_ex_unit, units, jobs)
    best = max(r[0] for r in results)
    wmask = next(r[1] for r in results if r[0] == best)
    examined = sum(r[2] for r in results)
    assert best >= tr, "Turán graph is always F-free"
    return OracleResult("ex", g6, n, 0, best, [_mask_graph(n, wmask)], examined, time.perf_counter() - t0,
                        info={"turan_edges": tr, "equals_turan": best == tr})


# -- h_F(n, q) ----------------------------------------------------------------

def _h_unit(args):
    f, n, m, prefix, ub, k = args
    pk = pattern_kernel(f)
    eu, ev = _edge_arrays(n)
    best, wit, nwit, nodes = _kernels.min_copies_search(
        n, eu, ev, m, prefix, pk.edge_prevs, pk.edge_weights, pk.aut, ub, k)
    return int(best), [w.copy() for w in wit[:nwit]], int(nodes)


NO_BOUND = 1 << 62


def h_brute(f: Graph, n: int, q: int, k: int = 1, jobs: int = 1, budget: Budget = Budget(),
            ex: int | None = None) -> OracleResult:
    """Exact h_F(n, q): fewest copies of F over n-vertex graphs with ex(n,F) + q edges.

    Up to ``k`` witnesses are returned, in the search's deterministic order.
    """
    t0 = time.perf_counter()
    if q < 0 or k < 1:
        raise ValueError("need q >= 0 and k >= 1")
    pat = pattern(f)
    ex_res = None
    if ex is None:
        ex_res = ex_brute(f, n, budget, jobs)
        ex = ex_res.value
    total = n * (n - 1) // 2
    m = ex + q
    if m > total:
        raise ValueError(f"ex(n,F) + q = {m} exceeds C({n},2) = {total}")
    projected = math.comb(total, m)
    if projected > budget.max_subsets:
        raise BudgetExceeded(f"h search at n={n}, q={q}", projected, budget.max_subsets)
    ub = NO_BOUND
    tr = turan_edges(n, pat.r)
    if ex == tr and q <= max(balanced_sizes(n, pat.r)) - 1:
        ub = count_copies(f, construct("star", f, n, q))
    plen = min(PREFIX_LEN, total)
    units = [(f, n, m, p, ub, k) for p in _prefixes(plen, False)]
    results = parallel_map(_h_unit, units, jobs)
    best = min(r[0] for r in results)
    wits: list[Graph] = []
    for val, ws, _ in results:
        if val == best:
            wits += [_mask_graph(n, w) for w in ws]
    examined = sum(r[2] for r in results)
    if best == NO_BOUND:
        raise RuntimeError("no graph found; search bound was invalid")
    info = {"ex": ex, "turan_edges": tr, "m": m}
    if ex_res is not None:
        examined += ex_res.examined
    return OracleResult("h", canonical_graph6(f), n, q, best, wits[:k], examined, time.perf_counter() - t0, info=info)


# -- t_F(n, q) ----------------------------------------------------------------

def _part_classes(s: int, k: int) -> list[tuple[tuple[int, int], ...]]:
    """Edge sets of size k on s vertices, one per isomorphism class, in first-seen order."""
    seen: dict[str, tuple[tuple[int, int], ...]] = {}
    for es in combinations(list(combinations(range(s), 2)), k):
        key = canonical_graph6(Graph(s, es))
        seen.setdefault(key, es)
    return list(seen.values())


def _compositions(q: int, caps: list[int]):
    if not caps:
        if q == 0:
            yield ()
        return
    for a in range(min(q, caps[0]), -1, -1):
        for rest in _compositions(q - a, caps[1:]):
            yield (a,) + rest


def turan_added_subsets(n: int, r: int, q: int, reduced: bool) -> list[tuple[tuple[int, int], ...]]:
    """Added-edge sets for T_r^q(n); ``reduced`` keeps one per part-respecting isomorphism class."""
    sizes = balanced_sizes(n, r)
    part = Partition(tuple(sizes))
    pairs = [[(part.starts()[i] + a, part.starts()[i] + b) for a, b in combinations(range(s), 2)]
             for i, s in enumerate(sizes)]
    if not reduced:
        allpairs = [e for ps in pairs for e in ps]
        return list(combinations(allpairs, q))
    out = []
    caps = [len(ps) for ps in pairs]
    classes = {}
    for comp in _compositions(q, caps):
        # parts of equal size are interchangeable: require non-increasing edge counts among them
        if any(sizes[i] == sizes[i + 1] and comp[i] < comp[i + 1] for i in range(r - 1)):
            continue
        per_part = []
        for i, kk in enumerate(comp):
            key = (sizes[i], kk)
            if key not in classes:
                classes[key] = _part_classes(sizes[i], kk)
            per_part.append(list(enumerate(classes[key])))
        for choice in product(*per_part):
            ok = all(not (sizes[i] == sizes[i + 1] and comp[i] == comp[i + 1] and choice[i][0] > choice[i + 1][0])
                     for i in range(r - 1))
            if not ok:
                continue
            es = []
            for i, (_, cls) in enumerate(choice):
                s0 = part.starts()[i]
                es += [(s0 + a, s0 + b) for a, b in cls]
            out.append(tuple(es))
    return out


def t_search(f: Graph, n: int, q: int, k: int = 1, reduced: bool = True, budget: Budget = Budget()) -> OracleResult:
    """Exact t_F(n, q): fewest copies over the Turán graph plus q intra-part edges."""
    t0 = time.perf_counter()
    pat = pattern(f)
    sizes = balanced_sizes(n, pat.r)
    intra = sum(math.comb(s, 2) for s in sizes)
    if q > intra:
        raise ValueError(f"only {intra} intra-part pairs available")
    projected = math.comb(intra, q)
    if projected > budget.max_t_subsets:
        raise BudgetExceeded(f"t search at n={n}, q={q}", projected, budget.max_t_subsets)
    base = turan_graph(n, pat.r)
    best, wits, examined = None, [], 0
    for es in turan_added_subsets(n, pat.r, q, reduced):
        g = base.with_edges(es)
        val = count_copies(f, g)
        examined += 1
        if best is None or val < best:
            best, wits = val, [g]
        elif val == best and len(wits) < k:
            wits.append(g)
    return OracleResult("t", canonical_graph6(f), n, q, best, wits, examined, time.perf_counter() - t0,
                        info={"reduced": reduced})


# -- constructions ------------------------------------------------------------

CONSTRUCTIONS = ("star", "matching_path", "unbalanced", "attached_vertex")


def _path_and_matching(vertices: list[int], q: int) -> list[tuple[int, int]]:
    """q edges on ``vertices``: a perfect-as-possible matching, else one path plus disjoint edges."""
    s = len(vertices)
    if q > s - 1 and q > s // 2:
        raise ValueError(f"cannot place {q} edges as a path plus matching on {s} vertices")
    plen = max(0, 2 * q - s + 1) if q > s // 2 else 0
    edges = [(vertices[i], vertices[i + 1]) for i in range(plen)]
    pos = plen + 1 if plen else 0
    while len(edges) < q:
        edges.append((vertices[pos], vertices[pos + 1]))
        pos += 2
    return edges


def _edge_part(pat: Pattern, n: int) -> tuple[list[int], int]:
    """Ascending Turán sizes and the index of the part whose extra edge is cheapest."""
    sizes = balanced_sizes(n, pat.r)
    cm = c_min(pat, n)
    if cm.orientation == "smaller-part":
        return sizes, 0
    if cm.orientation == "larger-part":
        return sizes, len(sizes) - 1
    return sizes, 0


def construct(kind: str, f: Graph, n: int, q: int = 0, xi: list[float] | None = None) -> Graph:
    pat = pattern(f)
    r = pat.r
    if kind == "star":
        sizes, i = _edge_part(pat, n)
        part = Partition(tuple(sizes)).vertices(i)
        if q > len(part) - 1:
            raise ValueError(f"star with {q} leaves does not fit in a part of size {len(part)}")
        return turan_graph(n, r).with_edges((part[0], part[j]) for j in range(1, q + 1))
    if kind == "matching_path":
        sizes, i = _edge_part(pat, n)
        part = Partition(tuple(sizes)).vertices(i)
        return turan_graph(n, r).with_edges(_path_and_matching(part, q))
    if kind == "unbalanced":
        if n % r:
            raise ValueError("unbalanced construction needs r | n")
        s = n // r
        if s < 1:
            raise ValueError("parts too small")
        sizes = (s + 1, s - 1) + (s,) * (r - 2)
        part = Partition(sizes)
        extra = _path_and_matching(part.vertices(0), q + 1)
        return build_host(HostSpec(part, tuple(extra)))
    if kind == "attached_vertex":
        if xi is None or len(xi) != r:
            raise ValueError(f"attached_vertex needs a density vector of length {r}")
        sizes = balanced_sizes(n - 1, r)
        d = tuple(min(s, max(0, round(x * n))) for s, x in zip(sizes, xi))
        return build_host(HostSpec(Partition(tuple(sizes)), (), d))
    raise ValueError(f"unknown construction {kind!r}; choose from {', '.join(CONSTRUCTIONS)}")


# -- leading-order comparison for a pattern with a disjoint pair of critical edges

@dataclass(frozen=True)
class CrossingQuadratic:
    coefficients: tuple[int, int, int]  # integer a, b, c of a x^2 + b x + c
    roots: tuple[float, float]
    alpha: Fraction
    zeta: Fraction
    pair_coefficient: Fraction
    pi: Fraction
    smaller_root_exceeds_pi: bool
    odd_residue_bound: Fraction  # 2 * pi


def verify_crossing_quadratic(f: Graph) -> CrossingQuadratic:
    """Compare q extra edges packed into one part (with a one-vertex shift) against a split packing.

    With q = x n the two leading n^{f-3} terms differ by alpha - zeta x + (kappa/4) x^2,
    kappa being the pair coefficient; the smaller root is where the shifted
    packing stops being cheaper.
    """
    pat = pattern(f)
    kappa = pair_copy_coefficient(pat)
    if kappa == 0:
        raise ValueError("pattern is pair-free: no quadratic term")
    a, b, c = kappa / 4, -pat.zeta, pat.alpha
    scale = math.lcm(a.denominator, b.denominator, c.denominator)
    ints = [int(v * scale) for v in (a, b, c)]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    disc = ints[1] ** 2 - 4 * ints[0] * ints[2]
    if disc < 0:
        raise ValueError("no real crossing")
    sq = math.sqrt(disc)
    roots = tuple(sorted(((-ints[1] - sq) / (2 * ints[0]), (-ints[1] + sq) / (2 * ints[0]))))
    return CrossingQuadratic(tuple(ints), roots, pat.alpha, pat.zeta, kappa, pat.pi,
                             roots[0] > pat.pi, 2 * pat.pi)


# -- cache --------------------------------------------------------------------

def default_cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "supersat")


class ResultCache:
    """Append-only record file, one result per line.

    Fields: ``pattern_g6 | kind | n | q | value | witness_g6_list | examined | version``.
    """

    def __init__(self, directory: Path | str | None = None):
        self.dir = Path(directory) if directory is not None else default_cache_dir()
        self.path = self.dir / CACHE_FILE

    @staticmethod
    def version(budget: Budget, k: int) -> str:
        return f"{CACHE_FORMAT}:k{k}:{budget.signature()}"

    def lookup(self, pattern_g6: str, kind: str, n: int, q: int, version: str) -> OracleResult | None:
        if not self.path.exists():
            return None
        hit = None
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                parts = line.rstrip("\n").split(" | ")
                if len(parts) != 8:
                    continue
                g6, kd, nn, qq, val, wl, exm, ver = parts
                if (g6, kd, nn, qq, ver) == (pattern_g6, kind, str(n), str(q), version):
                    wits = [parse_graph6(w) for w in wl.split(",") if w]
                    hit = OracleResult(kind, g6, n, q, int(val), wits, int(exm), 0.0, cached=True)
        return hit

    def store(self, res: OracleResult, version: str) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        wl = ",".join(to_graph6(w) for w in res.witnesses)
        line = " | ".join([res.pattern_g6, res.kind, str(res.n), str(res.q), str(res.value), wl,
                           str(res.examined), version]) + "\n"
        with open(self.path, "a", encoding="utf-8") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            fh.write(line)
            fh.flush()
            fcntl.flock(fh, fcntl.LOCK_UN)

    def keys(self) -> list[tuple[str, str, int, int, str]]:
        if not self.path.exists():
            return []
        out = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                parts = line.rstrip("\n").split(" | ")
                if len(parts) == 8:
                    out.append((parts[0], parts[1], int(parts[2]), int(parts[3]), parts[7]))
        return out


def run_oracle(kind: str, f: Graph, n: int, q: int = 0, k: int = 1, jobs: int = 1,
               budget: Budget = Budget(), cache: ResultCache | None = None) -> OracleResult:
    """Dispatch with optional caching. The pattern is stored under its canonical form."""
    f = canonical_form(f) if cache is not None else f
    g6 = to_graph6(f) if cache is not None else ""
    version = ResultCache.version(budget, k)
    if cache is not None:
        hit = cache.lookup(g6, kind, n, q, version)
        if hit is not None:
            return hit
    if kind == "ex":
        res = ex_brute(f, n, budget, jobs)
    elif kind == "h":
        res = h_brute(f, n, q, k, jobs, budget)
    elif kind == "t":
        res = t_search(f, n, q, k, True, budget)
    else:
        raise ValueError(f"unknown oracle kind {kind!r}")
    if cache is not None:
        cache.store(res, version)
    return res
