"""CSV series and matching PNG figures for parameter sweeps."""
from __future__ import annotations

import csv
import math
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _cell(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else str(v.numerator)
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def write_series_csv(path, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])
    return path


def render_series(path, header: Sequence[str], rows: Sequence[Sequence], x: int = 0, ys: Sequence[int] = (1,), title: str = "", logx: bool = False) -> Path:
    """Line plot of columns ``ys`` against column ``x``; writes a PNG."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    xs = [float(r[x]) for r in rows]
    fig, ax = plt.subplots(figsize=(5.0, 3.2), dpi=120)
    for j in ys:
        ax.plot(xs, [float(r[j]) for r in rows], marker="o", linewidth=1.2, markersize=3.5, label=header[j])
    ax.set_xlabel(header[x])
    if logx:
        ax.set_xscale("log", base=2)
    if title:
        ax.set_title(title, fontsize=10)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8, frameon=False)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def write_series(stem, header, rows, x=0, ys=(1,), title="", logx=False) -> tuple[Path, Path]:
    """Write ``stem``.csv and ``stem``.png side by side."""
    stem = Path(stem)
    csv_path = write_series_csv(stem.with_suffix(".csv"), header, rows)
    png_path = render_series(stem.with_suffix(".png"), header, rows, x=x, ys=ys, title=title, logx=logx)
    return csv_path, png_path
