"""Figure rendering for scan reports.

Matplotlib with the Agg backend, imported lazily so that report-only runs
never touch the plotting stack; figures land next to the delimited output.
"""

from __future__ import annotations

import numpy as np


def render_scan_heatmap(theta, t, scalar, r, out_path, title="scalar curvature") -> str:
    """Write a heatmap of S over the scan rectangle with the r = 0 contour.

    Axes are time (horizontal) and sphere angle (vertical); the dashed contour
    marks where the fiber radius vanishes and the chart closes up.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    TT, TH = np.meshgrid(t, theta)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    limit = np.nanmax(np.abs(scalar))
    mesh = ax.pcolormesh(TT, TH, scalar, cmap="RdBu_r", shading="auto",
                         vmin=-limit, vmax=limit)
    fig.colorbar(mesh, ax=ax, label="S")
    if np.nanmin(r) < 0.0 < np.nanmax(r):
        ax.contour(TT, TH, r, levels=[0.0], colors="k", linestyles="--",
                   linewidths=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel("theta")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return str(out_path)
