"""Render the six figure analogs from qsl-dephasing CSV sweeps.

Every renderer takes validated tables and draws onto a fresh matplotlib
figure; colors and line styles are assigned by sorted temperature (or
Ohmicity) so legends are stable across runs, and no timestamps are
embedded, so re-rendering identical input yields identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schemas import FIGURE_INPUTS, Table, temperature_key

_PNG_METADATA = {"Software": "qsl-plots"}


def _series(table: Table, group_col: str, x_col: str, y_col: str, fixed: dict[str, str]):
    """Sorted (group, x, y) curves from a long-format table."""
    idx = {name: table.columns.index(name) for name in table.columns}
    groups: dict[str, list[tuple[float, float]]] = {}
    for row in table.rows:
        if any(row[idx[k]] != v for k, v in fixed.items()):
            continue
        groups.setdefault(row[idx[group_col]], []).append(
            (float(row[idx[x_col]]), float(row[idx[y_col]]))
        )
    out = []
    for label in sorted(groups, key=temperature_key if group_col == "temperature" else float):
        pts = sorted(groups[label])
        out.append((label, np.array([p[0] for p in pts]), np.array([p[1] for p in pts])))
    return out


def _annotate_if_empty(ax, drew: bool):
    if not drew:
        ax.annotate("no data", (0.5, 0.5), xycoords="axes fraction", ha="center")


def _values(table: Table, col: str) -> list[str]:
    idx = table.columns.index(col)
    return sorted({row[idx] for row in table.rows}, key=float)


def _temp_labels(table: Table) -> list[str]:
    idx = table.columns.index("temperature")
    return sorted({row[idx] for row in table.rows}, key=temperature_key)


def _render_dephasing(tables, by_s: bool):
    """Shared layout of figs 1 and 2: F left column, gamma right column."""
    (table,) = tables
    if by_s:
        panels = _values(table, "s")
        fixed_col, group_col = "s", "temperature"
    else:
        panels = _temp_labels(table)
        fixed_col, group_col = "temperature", "s"
    n = max(len(panels), 1)
    fig, axes = plt.subplots(n, 2, figsize=(8.0, 2.6 * n), squeeze=False)
    for i, panel in enumerate(panels or [None]):
        fixed = {fixed_col: panel} if panel is not None else {}
        for j, (column, label) in enumerate((("F", "dephasing factor"), ("gamma", "dephasing rate"))):
            ax = axes[i][j]
            drew = False
            for name, x, y in _series(table, group_col, "t", column, fixed):
                ax.plot(x, y, label=name, linewidth=1.2)
                drew = True
            _annotate_if_empty(ax, drew)
            ax.set_xlabel(r"$\omega_c t$")
            ax.set_ylabel(label)
            if panel is not None:
                key = "s" if by_s else "T"
                ax.set_title(f"{key} = {panel}", fontsize=9)
            if drew:
                ax.legend(fontsize=7)
    if not panels:
        _annotate_if_empty(axes[0][0], False)
        _annotate_if_empty(axes[0][1], False)
    fig.tight_layout()
    return fig


def render_fig1(tables):
    return _render_dephasing(tables, by_s=True)


def render_fig2(tables):
    return _render_dephasing(tables, by_s=False)


def render_fig3(tables):
    steady, nonmarkov = tables
    fig, axes = plt.subplots(1, 2, figsize=(8.5, 3.4))
    for ax, table, column, label in (
        (axes[0], steady, "F_inf", "steady dephasing factor"),
        (axes[1], nonmarkov, "N", "non-Markovianity"),
    ):
        drew = False
        for name, x, y in _series(table, "temperature", "s", column, {}):
            ax.plot(x, y, label=name, linewidth=1.2)
            drew = True
        _annotate_if_empty(ax, drew)
        ax.set_xlabel("Ohmicity s")
        ax.set_ylabel(label)
        if drew:
            ax.legend(fontsize=7)
    fig.tight_layout()
    return fig


def render_fig4(tables):
    (table,) = tables
    panels = _values(table, "s")
    n = max(len(panels), 1)
    fig, axes = plt.subplots(n, 1, figsize=(6.5, 2.8 * n), squeeze=False)
    for i, panel in enumerate(panels or [None]):
        ax = axes[i][0]
        fixed = {"s": panel} if panel is not None else {}
        drew = False
        for name, x, y in _series(table, "temperature", "tau", "ratio", fixed):
            ax.plot(x, y, label=name, linewidth=1.2)
            drew = True
        _annotate_if_empty(ax, drew)
        ax.set_xlabel(r"$\omega_c \tau$")
        ax.set_ylabel(r"$\tau_{QSL}/\tau$")
        if panel is not None:
            ax.set_title(f"s = {panel}", fontsize=9)
        if drew:
            ax.legend(fontsize=7)
    fig.tight_layout()
    return fig


def render_fig5(tables):
    (table,) = tables
    panels = _values(table, "s")
    n = max(len(panels), 1)
    fig, axes = plt.subplots(n, 2, figsize=(8.0, 2.6 * n), squeeze=False)
    for i, panel in enumerate(panels or [None]):
        fixed = {"s": panel} if panel is not None else {}
        for j, (column, label) in enumerate(
            (("geodesic_scaled", "scaled geodesic"), ("speed_scaled", "scaled speed"))
        ):
            ax = axes[i][j]
            drew = False
            for name, x, y in _series(table, "temperature", "t", column, fixed):
                ax.plot(x, y, label=name, linewidth=1.2)
                drew = True
            _annotate_if_empty(ax, drew)
            ax.set_xlabel(r"$\omega_c t$")
            ax.set_ylabel(label)
            if panel is not None:
                ax.set_title(f"s = {panel}", fontsize=9)
            if drew:
                ax.legend(fontsize=7)
    fig.tight_layout()
    return fig


def render_fig6(tables):
    (table,) = tables
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    if not table.rows:
        _annotate_if_empty(ax, False)
        ax.set_xlabel("Ohmicity s")
        ax.set_ylabel(r"temperature $T/\omega_c$")
        fig.tight_layout()
        return fig
    i_s = table.columns.index("s")
    i_t = table.columns.index("temperature")
    i_r = table.columns.index("ratio")
    s_grid = np.array(sorted({float(r[i_s]) for r in table.rows}))
    t_grid = np.array(sorted({float(r[i_t]) for r in table.rows}))
    z = np.full((t_grid.size, s_grid.size), np.nan)
    s_pos = {v: i for i, v in enumerate(s_grid)}
    t_pos = {v: i for i, v in enumerate(t_grid)}
    for r in table.rows:
        z[t_pos[float(r[i_t])], s_pos[float(r[i_s])]] = float(r[i_r])
    mesh = ax.pcolormesh(s_grid, t_grid, z, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label=r"$\tau_{QSL}/\tau$")
    ax.set_xlabel("Ohmicity s")
    ax.set_ylabel(r"temperature $T/\omega_c$")
    fig.tight_layout()
    return fig


RENDERERS = {
    "fig1": render_fig1,
    "fig2": render_fig2,
    "fig3": render_fig3,
    "fig4": render_fig4,
    "fig5": render_fig5,
    "fig6": render_fig6,
}


def render(figure_id: str, tables, out_path: str, dpi: int = 150):
    """Draw one figure analog and write it as a raster image."""
    fig = RENDERERS[figure_id](tables)
    try:
        if out_path.lower().endswith(".png"):
            fig.savefig(out_path, dpi=dpi, metadata=_PNG_METADATA)
        else:
            fig.savefig(out_path, dpi=dpi)
    finally:
        plt.close(fig)


__all__ = ["render", "RENDERERS", "FIGURE_INPUTS"]
