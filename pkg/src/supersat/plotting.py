"""PNG rendering of a p(rho) curve next to its CSV."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .optimize import CurvePoint, Thresholds


def plot_curve(points: list[CurvePoint], alpha: float, r: int, out: Path | str,
               thresholds: Thresholds | None = None, title: str = "") -> Path:
    """Draw p(rho) against the line alpha (rho - (r-1)/r); mark finite thresholds."""
    rho0 = (r - 1) / r
    xs = [p.rho for p in points]
    fig, ax = plt.subplots(figsize=(6, 4), dpi=100)
    ax.plot(xs, [p.p for p in points], label="p(rho)", color="tab:blue")
    ax.plot(xs, [alpha * (x - rho0) for x in xs], label="alpha (rho - rho0)", color="tab:orange", linestyle="--")
    if thresholds is not None and math.isfinite(thresholds.rho):
        ax.axvline(thresholds.rho, color="tab:red", linewidth=0.8, label=f"rho = {thresholds.rho:.6g}")
    ax.set_xlabel("rho")
    ax.set_ylabel("value")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    out = Path(out)
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(out, format="png", metadata={"Software": None})
    plt.close(fig)
    return out
