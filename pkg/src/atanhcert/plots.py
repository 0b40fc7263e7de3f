"""Figure rendering for the gap-surface report path.

One job: turn the sampled gap grid into a heatmap PNG next to the CSV,
same stem, so the delimited data stays the interchange format and the
figure is a glanceable companion.  Uses the Agg backend; nothing here
touches a display.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_gap_surface(
    axis1_values: np.ndarray,
    axis2_values: np.ndarray,
    grid: np.ndarray,
    axis1_name: str,
    axis2_name: str,
    fixed_label: str,
    path: str,
) -> None:
    """Write a heatmap of ``grid`` (indexed [axis1, axis2]) to ``path``.

    A symmetric color scale centered at 0 keeps the equality manifold
    visible as the white band.
    """
    fig, ax = plt.subplots(figsize=(7.0, 5.6))
    span = float(np.max(np.abs(grid))) or 1.0
    mesh = ax.pcolormesh(
        axis2_values,
        axis1_values,
        grid,
        cmap="RdBu_r",
        vmin=-span,
        vmax=span,
        shading="nearest",
    )
    fig.colorbar(mesh, ax=ax, label="gap")
    ax.set_xlabel(axis2_name)
    ax.set_ylabel(axis1_name)
    ax.set_title(f"gap over ({axis1_name}, {axis2_name}) at {fixed_label}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
