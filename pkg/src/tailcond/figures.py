"""Deterministic matplotlib rendering of the six illustration panels.

Each panel CSV produced by :func:`tailcond.experiment.figure_data` is turned
into an SVG next to it.  Output is byte-stable: the Agg backend, a fixed
``svg.hashsalt`` and a scrubbed Date field remove every source of
nondeterminism, which keeps the files golden-testable.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "tailcond"

_SAVEKW = {"metadata": {"Date": None}, "format": "svg"}


def _read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return header, data


def _scatter_panel(path, out, title):
    header, data = _read_csv(path)
    m = data.shape[1]
    if m == 3:
        fig = plt.figure(figsize=(5, 4))
        ax = fig.add_subplot(projection="3d")
        ax.scatter(data[:, 0], data[:, 1], data[:, 2], s=8, color="C0")
        ax.set_xlabel(header[0])
        ax.set_ylabel(header[1])
        ax.set_zlabel(header[2])
    else:
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.scatter(data[:, 0], data[:, 1], s=8, color="C0")
        ax.set_xlabel(header[0])
        ax.set_ylabel(header[1])
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out, **_SAVEKW)
    plt.close(fig)


def _pickands_panel(path, out, title):
    header, data = _read_csv(path)
    m = len(header) - 1
    t = data[:, :m]
    a_hat = data[:, m]
    fig, ax = plt.subplots(figsize=(5, 4))
    if m == 2:
        x = t[:, 1]
        order = np.argsort(x)
        ax.plot(x[order], a_hat[order], color="C0", label="estimate")
        ax.plot(x[order], np.maximum(x[order], 1.0 - x[order]), "k--",
                lw=0.8, label="complete dependence")
        ax.axhline(1.0, color="k", lw=0.8, ls=":", label="independence")
        ax.set_xlabel("t")
        ax.set_ylabel("A(t)")
        ax.legend(loc="lower right", fontsize=8)
    elif m == 3:
        # barycentric projection of the simplex onto the plane
        x = t[:, 1] + 0.5 * t[:, 2]
        y = np.sqrt(3.0) / 2.0 * t[:, 2]
        tcf = ax.tricontourf(x, y, a_hat, levels=12, cmap="viridis")
        fig.colorbar(tcf, ax=ax, label="A(t)")
        ax.set_aspect("equal")
        ax.set_axis_off()
    else:
        ax.plot(np.arange(len(a_hat)), a_hat, color="C0")
        ax.set_xlabel("grid index")
        ax.set_ylabel("A(t)")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out, **_SAVEKW)
    plt.close(fig)


_PANEL_TITLES = {
    1: "componentwise maxima",
    2: "Pickands estimate (maxima)",
    3: "pairwise maxima projection",
    4: "Pickands estimate (pair)",
    5: "conditional maxima",
    6: "Pickands estimate (conditional)",
}


def render_figure_bundle(outdir) -> dict:
    """Render fig1_panel{1..6}.svg from the CSVs already present in outdir."""
    rendered = {}
    for i in range(1, 7):
        csv_path = os.path.join(outdir, f"fig1_panel{i}.csv")
        svg_path = os.path.join(outdir, f"fig1_panel{i}.svg")
        if not os.path.exists(csv_path):
            raise FileNotFoundError(csv_path)
        if i in (1, 3, 5):
            _scatter_panel(csv_path, svg_path, _PANEL_TITLES[i])
        else:
            _pickands_panel(csv_path, svg_path, _PANEL_TITLES[i])
        rendered[f"fig1_panel{i}.svg"] = svg_path
    return rendered
