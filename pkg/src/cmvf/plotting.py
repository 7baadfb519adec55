"""SVG renderings of Morse sets, Morse intervals and Morse posets.

Output is byte-stable: the SVG id salt is fixed, the date stamp is dropped
and text is stored as text rather than glyph paths.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.collections import LineCollection, PolyCollection

from .discretize import GeometricComplex
from .dynamics import MorseDecomposition
from .errors import UnsupportedDimension

# tab10 followed by the light half of tab20; cycled for longer posets
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5",
    "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
)
MESH_COLOR = "#d9d9d9"

RC = {
    "svg.hashsalt": "cmvf",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "font.size": 8,
    "axes.linewidth": 0.6,
    "figure.dpi": 100,
}


def color_of(p: int) -> str:
    return PALETTE[p % len(PALETTE)]


def _save(fig, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return path


def _require_planar(G: GeometricComplex) -> None:
    if G.ambient_dim != 2:
        raise UnsupportedDimension(f"mesh plots need a planar complex, got dimension {G.ambient_dim}")


def _polygon(G: GeometricComplex, x: int):
    """Vertex coordinates of a 2-cell in boundary order."""
    coords = G.vertex_coords(x)
    if G.kind == "cubical":
        # vertex_cells enumerates (lo,lo), (lo,hi), (hi,lo), (hi,hi)
        return coords[[0, 2, 3, 1]]
    return coords


def _draw_cells(ax, G: GeometricComplex, cells: Iterable[int], color: str, z: float) -> None:
    X = G.complex
    polys, segs, pts = [], [], []
    for x in sorted(cells):
        d = X.dims[x]
        if d == 2:
            polys.append(_polygon(G, x))
        elif d == 1:
            segs.append(G.vertex_coords(x))
        else:
            pts.append(G.vertex_coords(x)[0])
    if polys:
        ax.add_collection(PolyCollection(polys, facecolors=color, edgecolors=color, linewidths=0.3, zorder=z))
    if segs:
        ax.add_collection(LineCollection(segs, colors=color, linewidths=1.2, zorder=z + 0.1))
    if pts:
        xs, ys = zip(*pts)
        ax.scatter(xs, ys, s=4, c=color, zorder=z + 0.2, linewidths=0)


def _mesh_axes(G: GeometricComplex, title: str):
    X = G.complex
    fig, ax = plt.subplots(figsize=(6.0, 4.8))
    edges = [G.vertex_coords(x) for x in X.cells_of_dim(1)]
    ax.add_collection(LineCollection(edges, colors=MESH_COLOR, linewidths=0.3, zorder=0))
    bc = G.barycenters_cache()
    ax.set_xlim(bc[:, 0].min(), bc[:, 0].max())
    ax.set_ylim(bc[:, 1].min(), bc[:, 1].max())
    ax.set_aspect("equal")
    ax.set_xlabel("$x_1$")
    ax.set_ylabel("$x_2$")
    ax.set_title(title)
    return fig, ax


def plot_morse_sets(G: GeometricComplex, M: MorseDecomposition, path, title: str = "Morse sets") -> Path:
    """Each Morse set filled in its palette colour over the mesh."""
    _require_planar(G)
    with plt.rc_context(RC):
        fig, ax = _mesh_axes(G, title)
        for p, cells in enumerate(M.morse_sets):
            _draw_cells(ax, G, cells, color_of(p), 1 + p * 0.001)
        handles = [
            plt.Line2D([], [], color=color_of(p), marker="s", linestyle="", label=f"M{p} {_sig(M.conley_indices[p])}")
            for p in M.indices
        ]
        if 0 < len(handles) <= 20:
            ax.legend(handles=handles, loc="center left", bbox_to_anchor=(1.02, 0.5), frameon=False)
        fig.tight_layout()
        return _save(fig, path)


def plot_interval(
    G: GeometricComplex, M: MorseDecomposition, I: Sequence[int], cells: Iterable[int], path, title: str | None = None
) -> Path:
    """The Morse interval cells in grey with its Morse sets coloured on top."""
    _require_planar(G)
    I = sorted(I)
    with plt.rc_context(RC):
        fig, ax = _mesh_axes(G, title or "Morse interval {" + ",".join(map(str, I)) + "}")
        _draw_cells(ax, G, cells, "#969696", 1)
        for p in I:
            _draw_cells(ax, G, M.morse_sets[p], color_of(p), 2 + p * 0.001)
        fig.tight_layout()
        return _save(fig, path)


def _sig(ch: Sequence[int]) -> str:
    return "(" + ",".join(str(c) for c in ch) + ")"


def hasse_levels(M: MorseDecomposition) -> list[int]:
    """Height of each Morse index: length of the longest chain below it."""
    level = [0] * len(M)
    order = sorted(M.indices, key=lambda q: sum(M.less(p, q) for p in M.indices))
    for q in order:
        below = [level[p] + 1 for p in M.indices if M.less(p, q)]
        level[q] = max(below, default=0)
    return level


def plot_hasse(M: MorseDecomposition, path, title: str = "Morse poset") -> Path:
    """Hasse diagram; each node shows its Morse index and Conley index ranks."""
    level = hasse_levels(M)
    rows: dict[int, list[int]] = {}
    for p in M.indices:
        rows.setdefault(level[p], []).append(p)
    pos = {}
    for h, members in rows.items():
        for k, p in enumerate(members):
            pos[p] = (k - (len(members) - 1) / 2.0, float(h))
    width = max((len(m) for m in rows.values()), default=1)
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(max(3.0, 1.2 * width + 1), 1.2 * (len(rows) or 1) + 1))
        for p, q in M.hasse_edges():
            (x0, y0), (x1, y1) = pos[q], pos[p]
            ax.annotate(
                "", xy=(x1, y1 + 0.12), xytext=(x0, y0 - 0.12),
                arrowprops=dict(arrowstyle="->", color="#525252", lw=0.8),
            )
        for p in M.indices:
            x, y = pos[p]
            ax.scatter([x], [y], s=220, c=color_of(p), zorder=2, linewidths=0)
            ax.text(x, y, str(p), ha="center", va="center", zorder=3, color="white", fontweight="bold")
            ax.text(x, y - 0.3, _sig(M.conley_indices[p]), ha="center", va="top", fontsize=6)
        ax.set_xlim(-width / 2.0 - 0.3, width / 2.0 + 0.3)
        ax.set_ylim(-0.7, max(rows, default=0) + 0.5)
        ax.set_axis_off()
        ax.set_title(title)
        fig.tight_layout()
        return _save(fig, path)
