"""Minimisation of the density polynomial over the capped simplex slice, and the thresholds built on it.

The slice is S_rho = {0 <= xi_i <= 1/r, sum xi = rho}. Minima are certified by a
branch-and-bound over boxes in the first r-1 coordinates: each box gets a
lower bound (second-order Taylor bound at the centre, or the monotone corner
bound, whichever is larger) and an upper value at a feasible point, and boxes
are split until every lower bound is within ``tol`` of the incumbent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .invariants import Pattern
from .poly import ExactPolynomial

VALUE_TOL = 1e-8
BISECT_TOL = 1e-9
FEAS_TOL = 1e-12
INF = math.inf


class InfeasibleSlice(ValueError):
    pass


class NumericPoly:
    """Float evaluation of a polynomial at many points at once."""

    def __init__(self, exps: np.ndarray, coefs: np.ndarray):
        self.exps = np.asarray(exps, dtype=np.int64).reshape(-1, exps.shape[-1] if exps.size else 0)
        self.coefs = np.asarray(coefs, dtype=float)

    @classmethod
    def from_exact(cls, p: ExactPolynomial) -> NumericPoly:
        k = len(p.variables)
        if not p.terms:
            return cls(np.zeros((0, k), np.int64), np.zeros(0))
        items = sorted(p.terms.items())
        return cls(np.array([e for e, _ in items]), np.array([float(c) for _, c in items]))

    @property
    def nvars(self) -> int:
        return self.exps.shape[1]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not len(self.coefs):
            return np.zeros(x.shape[:-1])
        return np.prod(x[..., None, :] ** self.exps, axis=-1) @ self.coefs

    def diff(self, i: int) -> NumericPoly:
        keep = self.exps[:, i] > 0
        exps = self.exps[keep].copy()
        coefs = self.coefs[keep] * exps[:, i]
        exps[:, i] -= 1
        return NumericPoly(exps, coefs)

    def absolute(self) -> NumericPoly:
        return NumericPoly(self.exps, np.abs(self.coefs))


@dataclass(frozen=True)
class CurvePoint:
    rho: float
    p: float  # value at ``argmin``; the true minimum lies in [p - certified_gap, p]
    argmin: tuple[float, ...]  # ascending
    certified_gap: float

    @property
    def lower(self) -> float:
        return self.p - self.certified_gap


def _check_rho(rho: float, r: int) -> None:
    if rho < -FEAS_TOL or rho > 1 + FEAS_TOL:
        raise InfeasibleSlice(f"rho = {rho} outside [0, 1]")


def zero_argmin(rho: float, r: int) -> tuple[float, ...]:
    """Ascending point of S_rho with a zero coordinate (valid when rho <= (r-1)/r)."""
    cap = 1.0 / r
    xs = [0.0] * r
    left = max(rho, 0.0)
    for i in range(r - 1, 0, -1):
        take = min(cap, left)
        xs[i] = take
        left -= take
    return tuple(sorted(xs))


def project_capped(y: np.ndarray, rho: float, lo: float, hi: float) -> np.ndarray:
    """Euclidean projection onto {lo <= x_i <= hi, sum x = rho}.

    s(lam) = sum clip(y - lam, lo, hi) is piecewise linear and nonincreasing with
    breakpoints y - hi and y - lo, so the right piece is found by sorting them.
    """
    bps = np.sort(np.concatenate([y - hi, y - lo]))
    sums = np.clip(y[None, :] - bps[:, None], lo, hi).sum(1)
    # sums is nonincreasing along bps; find k with sums[k] >= rho >= sums[k+1]
    k = int(np.searchsorted(-sums, -rho, side="right")) - 1
    k = min(max(k, 0), len(bps) - 2)
    s0, s1 = sums[k], sums[k + 1]
    lam = bps[k] if s0 == s1 else bps[k] + (s0 - rho) * (bps[k + 1] - bps[k]) / (s0 - s1)
    return np.clip(y - lam, lo, hi)


class SliceMinimizer:
    """Certified minimum of a polynomial with nonnegative coefficients over S_rho.

    ``floor`` optionally raises the lower bound of every coordinate.
    """

    def __init__(self, poly: ExactPolynomial, r: int):
        if len(poly.variables) != r:
            raise ValueError("polynomial must have r variables")
        if any(c < 0 for c in poly.terms.values()):
            raise ValueError("the corner lower bound needs nonnegative coefficients")
        self.exact = poly
        self.r = r
        self.cap = 1.0 / r
        self.full = NumericPoly.from_exact(poly)
        self.full_grad = [self.full.diff(i) for i in range(r)]
        self.rho0 = (r - 1) / r
        self._build_reduced()

    def _build_reduced(self) -> None:
        """P(eta, rho - sum eta) as a polynomial in (eta, rho), regrouped by eta-exponent."""
        r = self.r
        names = [f"e{i}" for i in range(1, r)] + ["rho"]
        subs = {self.exact.variables[i]: ExactPolynomial.var(names, names[i]) for i in range(r - 1)}
        last = ExactPolynomial.var(names, "rho")
        for nm in names[:-1]:
            last = last - ExactPolynomial.var(names, nm)
        subs[self.exact.variables[r - 1]] = last
        red = self.exact.substitute(subs, names)
        groups: dict[tuple[int, ...], list[tuple[int, float]]] = {}
        for e, c in sorted(red.terms.items()):
            groups.setdefault(e[:-1], []).append((e[-1], float(c)))
        self._eta_exps = np.array(list(groups.keys()), dtype=np.int64).reshape(len(groups), r - 1)
        maxk = max((k for g in groups.values() for k, _ in g), default=0)
        self._rho_coef = np.zeros((len(groups), maxk + 1))
        for gi, g in enumerate(groups.values()):
            for k, c in g:
                self._rho_coef[gi, k] = c
        self._reduced_cache: dict[float, tuple] = {}

    def _reduced(self, rho: float):
        hit = self._reduced_cache.get(rho)
        if hit is not None:
            return hit
        coefs = self._rho_coef @ (rho ** np.arange(self._rho_coef.shape[1]))
        q = NumericPoly(self._eta_exps, coefs)
        d = self.r - 1
        grads = [q.diff(i) for i in range(d)]
        hess = [[grads[i].diff(j).absolute() for j in range(d)] for i in range(d)]
        if len(self._reduced_cache) > 4096:
            self._reduced_cache.clear()
        self._reduced_cache[rho] = (q, grads, hess)
        return q, grads, hess

    def value(self, x) -> float:
        return float(self.full(np.asarray(x, dtype=float)))

    def _local(self, x: np.ndarray, rho: float, floor: float, iters: int = 60) -> tuple[np.ndarray, float]:
        f = self.value(x)
        step = 1.0
        for _ in range(iters):
            g = np.array([float(gp(x)) for gp in self.full_grad])
            moved = False
            while step > 1e-14:
                y = project_capped(x - step * g, rho, floor, self.cap)
                fy = self.value(y)
                if fy < f:
                    x, f, moved = y, fy, True
                    step *= 2.0
                    break
                step *= 0.5
            if not moved:
                break
        return x, f

    def _seeds(self, rho: float, per_axis: int, floor: float) -> np.ndarray:
        """Ascending grid points of the slice (symmetry-reduced)."""
        r, cap = self.r, self.cap
        ticks = np.linspace(floor, cap, per_axis + 1)
        pts = []

        def rec(prefix: list[float], start: int):
            if len(prefix) == r - 1:
                last = rho - sum(prefix)
                if (not prefix or last >= prefix[-1] - 1e-15) and floor - 1e-15 <= last <= cap + 1e-15:
                    pts.append(prefix + [min(max(last, floor), cap)])
                return
            for k in range(start, len(ticks)):
                t = ticks[k]
                if sum(prefix) + t * (r - len(prefix)) > rho + 1e-15:
                    break
                rec(prefix + [t], k)

        rec([], 0)
        if not pts:
            pts.append(list(project_capped(np.full(r, rho / r), rho, floor, cap)))
        return np.array(pts)

    def minimize(self, rho: float, tol: float = VALUE_TOL, floor: float = 0.0,
                 max_cells: int = 400_000, max_levels: int = 400) -> CurvePoint:
        r, cap = self.r, self.cap
        _check_rho(rho, r)
        rho = min(max(rho, 0.0), 1.0)
        if floor == 0.0 and rho <= self.rho0 + 1e-15:
            # every monomial involves every variable, so a zero coordinate gives 0
            x = zero_argmin(rho, r)
            return CurvePoint(rho, self.value(x), x, 0.0)
        if rho < r * floor - 1e-15:
            return CurvePoint(rho, INF, (), 0.0)
        per_axis = {2: 64, 3: 24, 4: 12}.get(r, 8)
        seeds = self._seeds(rho, per_axis, floor)
        vals = self.full(seeds)
        k0 = int(np.argmin(vals))
        best_x, best = self._local(seeds[k0].copy(), rho, floor)
        q, grads, hess = self._reduced(rho)
        d = r - 1
        lo = np.full((1, d), floor)
        hi = np.full((1, d), cap)
        global_lb = INF
        certified = True
        levels = 0
        while len(lo):
            levels += 1
            if levels > max_levels:
                certified = False
                break
            # tighten boxes against floor <= xi_r <= cap
            for _ in range(2):
                slo, shi = lo.sum(1), hi.sum(1)
                lr = np.maximum(floor, rho - shi)
                hr = np.minimum(cap, rho - slo)
                ok = lr <= hr + 1e-15
                lo, hi, lr, hr, slo, shi = lo[ok], hi[ok], lr[ok], hr[ok], slo[ok], shi[ok]
                nlo = np.maximum(lo, (rho - hr - shi)[:, None] + hi)
                nhi = np.minimum(hi, (rho - lr - slo)[:, None] + lo)
                ok = np.all(nlo <= nhi + 1e-15, axis=1)
                lo, hi = np.minimum(nlo, nhi)[ok], nhi[ok]
            if not len(lo):
                break
            slo, shi = lo.sum(1), hi.sum(1)
            lr = np.clip(rho - shi, floor, cap)
            hr = np.clip(rho - slo, floor, cap)
            flo = np.hstack([lo, lr[:, None]])
            fhi = np.hstack([hi, hr[:, None]])
            # a feasible point in each box
            span = fhi.sum(1) - flo.sum(1)
            t = np.where(span > 0, (rho - flo.sum(1)) / np.where(span > 0, span, 1.0), 0.0)
            pts = flo + np.clip(t, 0.0, 1.0)[:, None] * (fhi - flo)
            pv = self.full(pts)
            k = int(np.argmin(pv))
            if pv[k] < best:
                best, best_x = float(pv[k]), pts[k]
            # lower bounds: Taylor at the centre with a Hessian bound, or the low corner
            c = 0.5 * (lo + hi)
            w = 0.5 * (hi - lo)
            lb2 = q(c)
            for i in range(d):
                lb2 = lb2 - np.abs(grads[i](c)) * w[:, i]
                for j in range(d):
                    lb2 = lb2 - 0.5 * hess[i][j](hi) * w[:, i] * w[:, j]
            lb = np.maximum(self.full(flo), lb2) - 1e-17
            keep = lb < best - tol
            if not np.all(keep):
                global_lb = min(global_lb, float(lb[~keep].min()))
            lo, hi = lo[keep], hi[keep]
            if len(lo) > max_cells:
                certified = False
                global_lb = min(global_lb, float(lb[keep].min()))
                break
            if not len(lo):
                break
            # bisect every box along its widest coordinate
            rows = np.arange(len(lo))
            ax = np.argmax(hi - lo, axis=1)
            mid = 0.5 * (lo[rows, ax] + hi[rows, ax])
            lo2, hi2 = lo.copy(), hi.copy()
            hi[rows, ax] = mid
            lo2[rows, ax] = mid
            lo = np.vstack([lo, lo2])
            hi = np.vstack([hi, hi2])
        if not certified and len(lo):
            slo = lo.sum(1)
            flo = np.hstack([lo, np.clip(rho - hi.sum(1), floor, cap)[:, None]])
            global_lb = min(global_lb, float(self.full(flo).min()))
        gap = max(0.0, best - global_lb) if global_lb < INF else 0.0
        x = tuple(float(v) for v in sorted(best_x))
        return CurvePoint(rho, float(best), x, gap)


def p_of_rho(poly: ExactPolynomial, r: int, rho: float, tol: float = VALUE_TOL) -> CurvePoint:
    return _minimizer(poly, r).minimize(rho, tol)


_MINIMIZERS: dict[tuple[str, int], SliceMinimizer] = {}


def _minimizer(poly: ExactPolynomial, r: int) -> SliceMinimizer:
    key = (poly.to_text(), r)
    if key not in _MINIMIZERS:
        _MINIMIZERS[key] = SliceMinimizer(poly, r)
    return _MINIMIZERS[key]


# -- thresholds -----------------------------------------------------------------

@dataclass(frozen=True)
class Thresholds:
    rho: float
    rho_hat: float
    tangency_flag: bool
    status: str  # "degree", "certified", "crossing" or "unresolved"
    resolution: float  # grid spacing of the scan (0 when exact)
    certified_below: bool  # g > 0 proven on (rho0, last grid point before the crossing)

    @property
    def infinite_is_proven(self) -> bool:
        return self.status in ("degree", "certified")


def taylor_floor(pat: Pattern) -> Fraction | None:
    """A floor delta such that g > 0 at every point of every slice with some coordinate below delta.

    Expand P_F at (0, 1/r, ..., 1/r) in shifts d. The pure d_1 part is alpha d_1
    plus nonnegative higher terms (at least one positive); every mixed monomial
    of degree k is at most delta^(k-1) times sum_{i>=2} |d_i| = xi_1 - s when
    xi_1 < delta, where s = rho - (r-1)/r. If the total K(delta) of those bounds
    is below alpha, then P - alpha s >= (alpha - K)(xi_1 - s) + (higher pure
    terms) > 0. Returns None when no such delta exists.
    """
    r = pat.r
    P = pat.pf_poly
    names = list(P.variables)
    x0 = [Fraction(0)] + [Fraction(1, r)] * (r - 1)
    shifted = P.substitute({v: ExactPolynomial.var(names, v) + x0[i] for i, v in enumerate(names)}, names)
    pure = {e[0]: c for e, c in shifted.terms.items() if not any(e[1:])}
    if pure.get(1, 0) != pat.alpha:
        raise AssertionError("gradient identity violated")
    if not any(c > 0 for k, c in pure.items() if k >= 2):
        return None
    mixed: dict[int, Fraction] = {}
    for e, c in shifted.terms.items():
        if any(e[1:]):
            mixed[sum(e)] = mixed.get(sum(e), Fraction(0)) + abs(c)

    def K(delta: Fraction) -> Fraction:
        return sum((c * delta ** (k - 1) for k, c in mixed.items()), Fraction(0))

    cap = Fraction(1, r)
    if K(cap) < pat.alpha:
        return cap
    lo, hi = Fraction(0), cap
    for _ in range(40):
        mid = (lo + hi) / 2
        if K(mid) < pat.alpha:
            lo = mid
        else:
            hi = mid
    return lo if lo > 0 else None


def certify_above_line(pat: Pattern, mini: SliceMinimizer, upto: float, tol: float,
                       max_steps: int = 5000) -> tuple[bool, float]:
    """Prove p(rho) > alpha (rho - rho0) for all rho in (rho0, upto].

    Points with a coordinate below the Taylor floor are handled exactly; the
    rest is covered using that the floor-restricted minimum is nondecreasing in
    rho. Returns (proved, how far the cover reached).
    """
    delta = taylor_floor(pat)
    rho0 = mini.rho0
    if delta is None:
        return False, rho0
    alpha = float(pat.alpha)
    fl = float(delta)
    a = max(rho0, pat.r * fl)
    for _ in range(max_steps):
        if a >= upto:
            return True, upto
        low = mini.minimize(a, tol, floor=fl).lower
        b = rho0 + 0.999 * low / alpha
        if b <= a:
            return False, a
        a = b
    return a >= upto, min(a, upto)


def rho_thresholds(pat: Pattern, tol: float = BISECT_TOL, value_tol: float = VALUE_TOL, grid: int = 200,
                   max_cover_steps: int = 5000) -> Thresholds:
    r = pat.r
    if pat.deg_p == r:
        return Thresholds(INF, INF, False, "degree", 0.0, True)
    mini = _minimizer(pat.pf_poly, r)
    rho0 = mini.rho0
    alpha = float(pat.alpha)
    # value accuracy that keeps the root error below ``tol`` for slopes down to alpha/100
    fine = max(min(value_tol, 1e-2 * alpha * tol), 1e-16)

    def g(rho: float, vt: float) -> float:
        return mini.minimize(rho, vt).p - alpha * (rho - rho0)

    h = (1.0 - rho0) / grid
    prev = rho0
    first = None
    for k in range(1, grid + 1):
        rho = rho0 + k * h if k < grid else 1.0
        if g(rho, value_tol) <= 0:
            first = rho
            break
        prev = rho
    if first is None:
        ok, _ = certify_above_line(pat, mini, 1.0, fine, max_cover_steps)
        status = "certified" if ok else "unresolved"
        return Thresholds(INF, INF, False, status, 0.0 if ok else h, ok)
    lo, hi = prev, first
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(mid, fine) <= 0:
            hi = mid
        else:
            lo = mid
    rho_f = hi
    # strict crossing: first point with g clearly negative
    strict = 10 * fine
    lo, hi = rho_f, None
    probe = rho_f
    step = tol
    while probe < 1.0:
        probe = min(1.0, probe + step)
        if g(probe, fine) < -strict:
            hi = probe
            break
        lo = probe
        step *= 2
    tangent = False
    if hi is None:
        rho_hat = INF
        tangent = True
    else:
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if g(mid, fine) < -strict:
                hi = mid
            else:
                lo = mid
        rho_hat = hi
        tangent = rho_hat - rho_f > 10 * tol
    below = prev > rho0 and certify_above_line(pat, mini, prev, fine, max_cover_steps)[0]
    return Thresholds(rho_f, rho_hat, tangent, "crossing", h, below)


# -- derived constants ------------------------------------------------------------

@dataclass(frozen=True)
class BetaEstimate:
    value: float | Fraction
    gap: float  # the infimum lies in [value - gap, value]
    at_rho: float | None
    exact: bool


def beta(pat: Pattern, th: Thresholds, tol: float = VALUE_TOL, grid: int = 200) -> BetaEstimate:
    """Infimum over rho in (rho0, 1] of p(rho) / (rho - rho0)."""
    if math.isinf(th.rho_hat) and th.infinite_is_proven:
        return BetaEstimate(pat.alpha, 0.0, None, True)
    mini = _minimizer(pat.pf_poly, pat.r)
    rho0 = mini.rho0

    def ratio(rho: float) -> tuple[float, float]:
        pt = mini.minimize(rho, tol)
        return pt.p / (rho - rho0), pt.certified_gap / (rho - rho0)

    h = (1.0 - rho0) / grid
    xs = [rho0 + k * h for k in range(1, grid + 1)]
    vals = [ratio(x) for x in xs]
    k = min(range(len(xs)), key=lambda i: vals[i][0])
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, len(xs) - 1)]
    best_x, (best, gap) = xs[k], vals[k]
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = ratio(c), ratio(d)
    while b - a > 1e-9:
        if fc[0] < fd[0]:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = ratio(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = ratio(d)
    for x, v in ((c, fc), (d, fd)):
        if v[0] < best:
            best_x, (best, gap) = x, v
    # values near rho0 approach alpha, so alpha bounds beta from above
    if float(pat.alpha) < best:
        return BetaEstimate(pat.alpha, 0.0, None, False)
    return BetaEstimate(best, gap, best_x, False)


def c2(pat: Pattern, th: Thresholds) -> float:
    return th.rho_hat - (pat.r - 1) / pat.r


def c1_lower_bound(pat: Pattern, th: Thresholds) -> tuple[float | Fraction, list[float | Fraction]]:
    """Lower bounds on c_1 and on each residue class c_{1,i}, i = 0..r-1."""
    r = pat.r
    if pat.deg_p == r:
        v = Fraction(1, r)
        return v, [v] * r
    theta = th.rho - (r - 1) / r
    pi = pat.pi
    base = _min_mixed(pi, theta)
    per = [base] * r
    t = (1 if pat.zeta > 0 else -1 if pat.zeta < 0 else 0) % r
    per[t] = _min_mixed(2 * pi if not math.isinf(pi) else INF, theta)
    return min(per, key=float), per


def _min_mixed(a, b):
    """min that keeps an exact rational when it wins."""
    return a if float(a) <= float(b) else b


def emit_curve(pat: Pattern, rho_lo: float, rho_hi: float, step: float, tol: float = VALUE_TOL) -> list[CurvePoint]:
    if step <= 0:
        raise ValueError("step must be positive")
    if rho_hi < rho_lo:
        raise ValueError("empty range")
    mini = _minimizer(pat.pf_poly, pat.r)
    count = int(math.floor((rho_hi - rho_lo) / step + 1e-9)) + 1
    pts = []
    for k in range(count):
        rho = min(rho_lo + k * step, rho_hi)
        pts.append(mini.minimize(rho, tol))
    return pts


def curve_csv(pat: Pattern, points: list[CurvePoint]) -> str:
    r = pat.r
    rho0 = (r - 1) / r
    alpha = float(pat.alpha)
    head = "rho,p,line,gap," + ",".join(f"xi_{i}" for i in range(1, r + 1))
    lines = [head]
    for pt in points:
        row = [pt.rho, pt.p, alpha * (pt.rho - rho0), pt.certified_gap, *pt.argmin]
        lines.append(",".join(f"{v:.12g}" for v in row))
    return "\n".join(lines) + "\n"
