"""Summary figures for batch reports.

Rendered next to ``report.csv`` so a batch directory is self-describing:
grouped mean-metric bars per pattern and method, and a per-image PSNR
chart.  Infinite PSNR rows (bit-perfect results) are left out of the
averages and marked in the per-image chart at the top of the axis.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .pipeline import QualityReport


def _grouped_bars(report: QualityReport, metric: str, ylabel: str, path: Path) -> None:
    patterns = sorted({r.pattern for r in report.rows})
    methods = sorted({r.method for r in report.rows})
    fig, ax = plt.subplots(figsize=(1.8 + 1.4 * len(patterns), 3.6))
    width = 0.8 / max(len(methods), 1)
    for j, method in enumerate(methods):
        means = []
        for pattern in patterns:
            values = np.array([getattr(r, metric) for r in report.rows
                               if r.pattern == pattern and r.method == method])
            finite = values[np.isfinite(values)]
            means.append(float(finite.mean()) if finite.size else np.nan)
        offsets = np.arange(len(patterns)) + (j - (len(methods) - 1) / 2) * width
        ax.bar(offsets, means, width=width, label=method)
    ax.set_xticks(np.arange(len(patterns)))
    ax.set_xticklabels(patterns)
    ax.set_ylabel(ylabel)
    ax.set_title(f"mean {ylabel} by pattern and method")
    ax.legend(fontsize="small")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _per_image_chart(report: QualityReport, path: Path) -> None:
    files = sorted({r.filename for r in report.rows})
    combos = sorted({(r.pattern, r.method) for r in report.rows})
    finite = [r.psnr for r in report.rows if np.isfinite(r.psnr)]
    top = (max(finite) + 3.0) if finite else 1.0
    fig, ax = plt.subplots(figsize=(2.5 + 0.5 * len(files), 4.0))
    for pattern, method in combos:
        by_file = {r.filename: r.psnr for r in report.rows
                   if r.pattern == pattern and r.method == method}
        ys = [min(by_file.get(f, np.nan), top) for f in files]
        ax.plot(range(len(files)), ys, marker="o", markersize=3,
                label=f"{pattern}/{method}")
    ax.set_xticks(range(len(files)))
    ax.set_xticklabels(files, rotation=45, ha="right", fontsize="x-small")
    ax.set_ylabel("PSNR [dB]")
    ax.set_title("per-image PSNR (bit-perfect results drawn at axis top)")
    ax.legend(fontsize="x-small", ncol=2)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report_figures(report: QualityReport, out_dir: str | Path) -> list[Path]:
    """Write the summary figures for a batch report; returns their paths."""
    out_dir = Path(out_dir)
    if not report.rows:
        return []
    paths = [out_dir / "summary_psnr.png", out_dir / "summary_ssim.png",
             out_dir / "per_image_psnr.png"]
    _grouped_bars(report, "psnr", "PSNR [dB]", paths[0])
    _grouped_bars(report, "ssim", "SSIM", paths[1])
    _per_image_chart(report, paths[2])
    return paths
