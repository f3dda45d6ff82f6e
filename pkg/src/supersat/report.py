"""Parameter reports, the known-values table, and deterministic JSON/text rendering."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .catalog import canonical_graph6, clique_minus_edge, complete, cycle, fig2, is_isomorphic, kst_plus
from .coloring import is_pair_free
from .graph import Graph
from .invariants import Pattern, pattern
from .optimize import BetaEstimate, Thresholds, beta, c1_lower_bound, c2, rho_thresholds

Number = int | float | Fraction


def fmt_number(x) -> str | int | bool | None:
    """Rationals as "p/q", reals at 12 significant digits, infinities as "inf"."""
    if x is None or isinstance(x, bool):
        return x
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".12g")
    raise TypeError(f"cannot format {type(x).__name__}")


@dataclass
class ParameterReport:
    r: int
    f: int
    aut: int
    alpha: Fraction
    zeta: Fraction
    pi: Fraction | float
    degP: int
    pair_free: bool
    rho: float
    rho_hat: float
    theta: float
    beta: Fraction | float
    c2: float
    c1_lower: Fraction | float
    c1_per_residue: list
    # supporting detail
    beta_gap: float = 0.0
    threshold_status: str = ""
    tangency_flag: bool = False
    resolution: float = 0.0
    critical_edges: list = field(default_factory=list)
    pair_witness: list | None = None
    c_polynomial: str = ""
    pf_polynomial: str = ""


def build_report(f: Graph | Pattern, thresholds: Thresholds | None = None) -> tuple[ParameterReport, Thresholds, BetaEstimate]:
    pat = f if isinstance(f, Pattern) else pattern(f)
    th = thresholds or rho_thresholds(pat)
    be = beta(pat, th)
    c1, per = c1_lower_bound(pat, th)
    free, wit = is_pair_free(pat.graph, pat.cs)
    rho0 = (pat.r - 1) / pat.r
    rep = ParameterReport(
        r=pat.r, f=pat.f, aut=pat.aut, alpha=pat.alpha, zeta=pat.zeta, pi=pat.pi, degP=pat.deg_p,
        pair_free=free, rho=th.rho, rho_hat=th.rho_hat, theta=th.rho - rho0, beta=be.value, c2=c2(pat, th),
        c1_lower=c1, c1_per_residue=per, beta_gap=be.gap, threshold_status=th.status,
        tangency_flag=th.tangency_flag, resolution=th.resolution,
        critical_edges=[list(e) for e in pat.cs.critical_edges],
        pair_witness=[list(e) for e in wit.edges] if wit else None,
        c_polynomial=str(pat.c_poly), pf_polynomial=str(pat.pf_poly),
    )
    return rep, th, be


# -- known values ---------------------------------------------------------------

@dataclass(frozen=True)
class KnownValue:
    claim: str
    quantity: str
    expected: Number
    computed: Number

    @property
    def match(self) -> bool:
        e, c = self.expected, self.computed
        if isinstance(e, Fraction) and isinstance(c, Fraction):
            return e == c
        if math.isinf(float(e)) or math.isinf(float(c)):
            return float(e) == float(c)
        return abs(float(e) - float(c)) <= 1e-8


def recognise(g: Graph) -> tuple[str, dict] | None:
    """Match the pattern against the parametrised families with known constants."""
    for r in range(2, 7):
        if g.n == r + 1 and is_isomorphic(g, complete(r + 1)):
            return "clique", {"r": r}
        if g.n == r + 2 and is_isomorphic(g, clique_minus_edge(r)):
            return "clique-minus-edge", {"r": r}
    if g.n % 2 == 1 and g.n >= 5 and is_isomorphic(g, cycle(g.n)):
        return "odd-cycle", {"k": (g.n - 1) // 2}
    for s in range(2, g.n):
        t = g.n - s
        if t >= 1 and g.m == s * t + 1 and is_isomorphic(g, kst_plus(s, t)):
            return "kst-plus", {"s": s, "t": t}
    if g.n == 7 and is_isomorphic(g, fig2()):
        return "pair-example", {}
    return None


def known_values(rep: ParameterReport, g: Graph) -> list[KnownValue]:
    hit = recognise(g)
    if hit is None:
        return []
    fam, prm = hit
    out: list[KnownValue] = []
    if fam == "clique":
        r = prm["r"]
        out.append(KnownValue("cliques have a degree-r density polynomial", "degP", r, rep.degP))
        out.append(KnownValue("clique: c1 = 1/r", "c1_lower", Fraction(1, r), rep.c1_lower))
    elif fam == "odd-cycle":
        out.append(KnownValue("odd cycles have a degree-2 density polynomial", "degP", 2, rep.degP))
        out.append(KnownValue("odd cycle: c1 = 1/2", "c1_lower", Fraction(1, 2), rep.c1_lower))
    elif fam == "clique-minus-edge":
        r = prm["r"]
        out += [
            KnownValue("clique minus an edge: alpha = (r-1)/(2 r^r)", "alpha", Fraction(r - 1, 2 * r ** r), rep.alpha),
            KnownValue("clique minus an edge: zeta = 1/(2 r^(r-2))", "zeta", Fraction(1, 2 * r ** (r - 2)), rep.zeta),
            KnownValue("clique minus an edge: pi = (r-1)/r^2", "pi", Fraction(r - 1, r * r), rep.pi),
            KnownValue("clique minus an edge: rho threshold is infinite", "rho", math.inf, rep.rho),
            KnownValue("clique minus an edge: c1 = (r-1)/r^2", "c1_lower", Fraction(r - 1, r * r), rep.c1_lower),
        ]
    elif fam == "kst-plus":
        s, t = prm["s"], prm["t"]
        if s >= 2:
            den = math.factorial(t) * math.factorial(s - 2)
            out += [
                KnownValue("K_{s,t}^+: alpha = 2^-(s+t-2)/(t!(s-2)!)", "alpha", Fraction(1, 2 ** (s + t - 2) * den), rep.alpha),
                KnownValue("K_{s,t}^+: zeta = (t-s+2) 2^-(s+t-3)/(t!(s-2)!)", "zeta",
                           Fraction(t - s + 2, den) / Fraction(2) ** (s + t - 3), rep.zeta),
            ]
            if t in (2, 3):
                out.append(KnownValue("K_{s,t}^+ with t in {2,3}: rho threshold is infinite", "rho", math.inf, rep.rho))
            if t == 4:
                out.append(KnownValue("K_{s,4}^+: theta lies in (1/32, 1/16)", "theta_in_bracket", True,
                                      bool(Fraction(1, 32) < Fraction(rep.theta) < Fraction(1, 16)) if math.isfinite(rep.theta) else False))
    elif fam == "pair-example":
        out += [
            KnownValue("seven-vertex pair example: alpha = 1/192", "alpha", Fraction(1, 192), rep.alpha),
            KnownValue("seven-vertex pair example: zeta = 1/32", "zeta", Fraction(1, 32), rep.zeta),
            KnownValue("seven-vertex pair example: pi = 1/6", "pi", Fraction(1, 6), rep.pi),
            KnownValue("seven-vertex pair example: not pair-free", "pair_free", False, rep.pair_free),
        ]
    return out


def warnings_for(rep: ParameterReport, g: Graph) -> list[str]:
    out = []
    if rep.tangency_flag:
        out.append("tangency: p(rho) stays within tolerance of the line after rho; rho and rho_hat are not separated")
    if rep.threshold_status == "unresolved":
        out.append(f"no crossing found up to resolution {rep.resolution:.3g}, but positivity could not be certified")
    hit = recognise(g)
    if hit and hit[0] == "odd-cycle" and hit[1]["k"] == 2:
        out.append("convention: the literature value 2m(2m-1)(2m-2) for C5 with one extra edge counts rooted, "
                   "ordered cycles; this tool counts unlabelled copies, giving (m-2)m(m-1) on K_{m,m} plus an edge")
    return out


# -- documents -----------------------------------------------------------------

def report_document(g: Graph, rep: ParameterReport) -> dict:
    data = {k: v for k, v in asdict(rep).items()}
    params = {}
    for k, v in data.items():
        if isinstance(v, list) and k == "c1_per_residue":
            params[k] = [fmt_number(x) for x in v]
        elif isinstance(v, (Fraction, float)) and not isinstance(v, bool):
            params[k] = fmt_number(v)
        else:
            params[k] = v
    kv = [
        {"claim": k.claim, "quantity": k.quantity, "expected": fmt_number(k.expected),
         "computed": fmt_number(k.computed), "match": k.match}
        for k in known_values(rep, g)
    ]
    return {
        "tool_version": __version__,
        "pattern": {"canonical_graph6": canonical_graph6(g), "f": g.n, "edges": g.m},
        "parameters": params,
        "known_values": kv,
        "warnings": warnings_for(rep, g),
    }


def to_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def to_text(doc: dict) -> str:
    lines = [f"supersat {doc['tool_version']}",
             f"pattern  {doc['pattern']['canonical_graph6']}  (f={doc['pattern']['f']}, m={doc['pattern']['edges']})"]
    params = doc["parameters"]
    width = max(len(k) for k in params)
    for k in sorted(params):
        v = params[k]
        if isinstance(v, list):
            v = "[" + ", ".join(str(x) for x in v) + "]"
        lines.append(f"  {k:<{width}}  {v}")
    if doc["known_values"]:
        lines.append("known values:")
        for kv in doc["known_values"]:
            mark = "ok " if kv["match"] else "MISMATCH"
            lines.append(f"  [{mark}] {kv['claim']}: expected {kv['expected']}, computed {kv['computed']}")
    for w in doc["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"
