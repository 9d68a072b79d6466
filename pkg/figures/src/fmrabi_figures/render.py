"""One renderer per figure id.

    fig1b  dressed-level energies vs coupling (spectrum CSV)
    fig2   relative coupling strengths vs modulation amplitude (sweep CSVs)
    fig3   fidelity traces (fidelity CSVs)
    fig4   phase-diagram heatmap with white boundary polylines (cells +
           boundaries CSVs, in that order)
    fig5   order-parameter ladder (ladder CSVs)

Each renderer returns a matplotlib Figure; render() optionally saves it.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import CsvTable, SchemaError, read_table

FIGURE_IDS = ("fig1b", "fig2", "fig3", "fig4", "fig5")

_LINESTYLES = ("--", "-", "-.", ":")
_COLORS = ("black", "tab:red", "tab:blue", "tab:green")


@dataclass(frozen=True)
class FigureSpec:
    fig_id: str
    inputs: tuple[str, ...]
    output: str
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None

    def __post_init__(self):
        if self.fig_id not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.fig_id!r} (choose from {FIGURE_IDS})")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


def _style(index: int) -> dict:
    return {
        "linestyle": _LINESTYLES[index % len(_LINESTYLES)],
        "color": _COLORS[index % len(_COLORS)],
    }


def _curve_label(table: CsvTable) -> str:
    v = table.meta.get("v")
    xi = table.meta.get("xi")
    parts = []
    if v is not None:
        parts.append(f"v = {v}")
    if xi not in (None, "0"):
        parts.append(f"xi = {xi}")
    return ", ".join(parts) if parts else table.path


def render_fig1b(inputs: tuple[str, ...]) -> plt.Figure:
    table = read_table(inputs[0], ("g_over_omega_c", "level_id", "E_over_omega_c"))
    g = table.column("g_over_omega_c")
    energy = table.column("E_over_omega_c")
    levels = table.text_column("level_id")
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for level in dict.fromkeys(levels):  # first-seen order
        mask = np.array([lv == level for lv in levels])
        color = "black" if level == "g0" else ("tab:blue" if level.endswith("-") else "tab:gray")
        ax.plot(g[mask], energy[mask], color=color, lw=1.2 if level == "g0" else 0.9)
    ax.set_xlabel(r"$g/\omega_c$")
    ax.set_ylabel(r"$E/\omega_c$")
    ax.set_title("dressed levels and ground-state crossings")
    return fig


def render_fig2(inputs: tuple[str, ...]) -> plt.Figure:
    fig, (ax_top, ax_bottom) = plt.subplots(2, 1, figsize=(5.2, 6.0), sharex=True)
    for k, path in enumerate(inputs):
        table = read_table(
            path, ("xi", "g_r_over_omega_c_eff", "abs_g_c_over_delta_m0")
        )
        xi = table.column("xi")
        ax_top.plot(xi, table.column("g_r_over_omega_c_eff"), label=_curve_label(table), **_style(k))
        ax_bottom.plot(xi, table.column("abs_g_c_over_delta_m0"), **_style(k))
    ax_top.axhline(1.0, color="gray", lw=0.6)
    ax_top.axhline(-1.0, color="gray", lw=0.6)
    ax_top.set_ylabel(r"$g_r(\xi)/\tilde\omega_{c}$")
    ax_top.legend(fontsize=8)
    ax_bottom.axhline(0.01, color="gray", linestyle=":", lw=1.0)
    ax_bottom.set_ylabel(r"$|g_c(\xi)|/\Delta_{m_0}$")
    ax_bottom.set_xlabel(r"$\xi$")
    ax_bottom.set_ylim(0.0, 0.05)
    return fig


def render_fig3(inputs: tuple[str, ...]) -> plt.Figure:
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for k, path in enumerate(inputs):
        table = read_table(path, ("t", "F"))
        ax.plot(table.column("t"), table.column("F"), label=_curve_label(table), **_style(k))
    ax.set_xlabel(r"$t\,\omega_c$")
    ax.set_ylabel(r"$F(t)$")
    ax.set_ylim(top=1.001)
    ax.legend(fontsize=8)
    return fig


def render_fig4(inputs: tuple[str, ...]) -> plt.Figure:
    if len(inputs) < 2:
        raise SchemaError("fig4 needs the cells CSV and the boundaries CSV, in that order")
    cells = read_table(inputs[0], ("delta", "xi", "n_bar"))
    bounds = read_table(inputs[1], ("curve_id", "delta", "xi"))
    delta = cells.column("delta")
    xi = cells.column("xi")
    n_bar = cells.column("n_bar")
    delta_axis = np.unique(delta)
    xi_axis = np.unique(xi)
    grid = np.full((len(xi_axis), len(delta_axis)), np.nan)
    d_idx = np.searchsorted(delta_axis, delta)
    x_idx = np.searchsorted(xi_axis, xi)
    grid[x_idx, d_idx] = n_bar
    if np.isnan(grid).any():
        raise SchemaError(f"{cells.path}: cells do not fill a rectangular (delta, xi) grid")
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    mesh = ax.pcolormesh(delta_axis, xi_axis, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=r"$\bar n$")
    curve_ids = bounds.column("curve_id")
    b_delta = bounds.column("delta")
    b_xi = bounds.column("xi")
    for cid in np.unique(curve_ids):
        mask = curve_ids == cid
        ax.plot(b_delta[mask], b_xi[mask], color="white", lw=1.4)
    ax.set_xlabel(r"$\delta/\omega_c$")
    ax.set_ylabel(r"$\xi$")
    return fig


def render_fig5(inputs: tuple[str, ...]) -> plt.Figure:
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for k, path in enumerate(inputs):
        table = read_table(path, ("xi", "n_bar"))
        ax.step(
            table.column("xi"),
            table.column("n_bar"),
            where="mid",
            label=_curve_label(table),
            **_style(k),
        )
    ax.set_xlabel(r"$\xi$")
    ax.set_ylabel(r"$\bar n$")
    ax.legend(fontsize=8)
    return fig


_RENDERERS = {
    "fig1b": render_fig1b,
    "fig2": render_fig2,
    "fig3": render_fig3,
    "fig4": render_fig4,
    "fig5": render_fig5,
}


def render(spec: FigureSpec, save: bool = True) -> plt.Figure:
    """Build the requested figure; write spec.output when save is set."""
    fig = _RENDERERS[spec.fig_id](spec.inputs)
    ax = fig.axes[0]
    if spec.xlim is not None:
        ax.set_xlim(*spec.xlim)
    if spec.ylim is not None:
        ax.set_ylim(*spec.ylim)
    fig.tight_layout()
    if save:
        fig.savefig(spec.output, dpi=150)
    return fig
