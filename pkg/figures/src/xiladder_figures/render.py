"""Figure builders: xiladder CSV tables in, image files out.

Each builder is a pure rendering transform of the delimited data (no physics
is recomputed here); ``render`` dispatches on the figure id, validates the
input schemas, and writes the image.  Matplotlib is used through the
object-oriented API so no GUI backend is ever touched.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from matplotlib.figure import Figure

from .tables import SchemaError, read_table


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render: id, input tables (in registry order), output path."""

    figure_id: str
    inputs: tuple
    output: str


def _grid_from_long(table):
    xs = np.unique(table["mu12"])
    ys = np.unique(table["mu23"])
    grid = np.full((len(xs), len(ys)), np.nan)
    xi = np.searchsorted(xs, table["mu12"])
    yi = np.searchsorted(ys, table["mu23"])
    grid[xi, yi] = table["M"]
    return xs, ys, grid


def _boundary_points(xs, ys, grid):
    pts = []
    for i in range(len(xs) - 1):
        for j in range(len(ys)):
            if grid[i, j] != grid[i + 1, j]:
                pts.append((0.5 * (xs[i] + xs[i + 1]), ys[j]))
    for i in range(len(xs)):
        for j in range(len(ys) - 1):
            if grid[i, j] != grid[i, j + 1]:
                pts.append((xs[i], 0.5 * (ys[j] + ys[j + 1])))
    return np.array(pts) if pts else np.empty((0, 2))


def build_region_map(phase, triple) -> Figure:
    """Ground-state sector regions over the coupling plane, junctions starred."""
    fig = Figure(figsize=(6.0, 5.0))
    ax = fig.add_subplot(111)
    if phase["mu12"].size:
        xs, ys, grid = _grid_from_long(phase)
        mesh = ax.pcolormesh(xs, ys, grid.T, shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label="ground-state $M$")
        boundary = _boundary_points(xs, ys, grid)
        if boundary.size:
            ax.plot(boundary[:, 0], boundary[:, 1], ".", color="white", ms=1.0)
    if triple["mu12"].size:
        ax.plot(
            triple["mu12"],
            triple["mu23"],
            "*",
            color="red",
            ms=14,
            mec="black",
            gid="triple-points",
            linestyle="none",
        )
        for x, y, labels in zip(triple["mu12"], triple["mu23"], triple["labels"]):
            ax.annotate(
                f"({x:.4f}, {y:.4f})",
                (x, y),
                textcoords="offset points",
                xytext=(6, 6),
                fontsize=7,
            )
    ax.set_xlabel(r"$\mu_{12}$")
    ax.set_ylabel(r"$\mu_{23}$")
    ax.set_title("Ground-state regions and junctions")
    return fig


def build_ground_cut(*cuts) -> Figure:
    """Ground energy along mu12 at fixed mu23, transitions dotted."""
    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot(111)
    for idx, cut in enumerate(cuts):
        lam = cut["lambda"]
        if not lam.size:
            continue
        ax.plot(lam, cut["E"], "-", lw=1.2, label=f"input {idx + 1}")
        m = cut["M"]
        change = np.flatnonzero(m[1:] != m[:-1])
        mid_lam = 0.5 * (lam[change] + lam[change + 1])
        mid_e = 0.5 * (cut["E"][change] + cut["E"][change + 1])
        ax.plot(mid_lam, mid_e, "o", ms=4, color="black")
    ax.set_xlabel(r"$\mu_{12}$")
    ax.set_ylabel(r"$E_0$")
    ax.set_title(r"Ground energy cut (dots: $M$ changes)")
    if cuts and any(c["lambda"].size for c in cuts):
        ax.legend(fontsize=8)
    return fig


def build_fidelity_trace(sweep) -> Figure:
    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot(111)
    keep = ~np.isnan(sweep["F"]) if sweep["F"].size else np.array([], dtype=bool)
    ax.plot(sweep["lambda"][keep], sweep["F"][keep], "-", lw=1.0)
    ax.set_xlabel(r"$\mu_{23}$")
    ax.set_ylabel(r"$F$")
    ax.set_ylim(-0.05, 1.05)
    ax.set_title("Fidelity between neighboring ground states")
    return fig


def build_susceptibility_trace(sweep) -> Figure:
    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot(111)
    keep = ~np.isnan(sweep["chi"]) if sweep["chi"].size else np.array([], dtype=bool)
    ax.plot(sweep["lambda"][keep], sweep["chi"][keep], "-", lw=1.0)
    ax.set_xlabel(r"$\mu_{23}$")
    ax.set_ylabel(r"$\chi$")
    ax.set_title("Fidelity susceptibility")
    return fig


def build_spectrum_scatter(spectrum, mirror_axis: bool = False) -> Figure:
    fig = Figure(figsize=(6.0, 4.5))
    ax = fig.add_subplot(111)
    ax.plot(spectrum["M"], spectrum["E"], ".", ms=2.5, color="tab:blue")
    if mirror_axis and spectrum["M"].size:
        m_values = np.unique(spectrum["M"])
        ax.plot(m_values, m_values, "o", ms=3, color="black", label=r"$E = M$")
        ax.legend(fontsize=8)
    ax.set_xlabel(r"$M$")
    ax.set_ylabel(r"$E$")
    ax.set_title("Sector spectra" + (" with mirror axis" if mirror_axis else ""))
    return fig


def build_thermo_fan(thermo) -> Figure:
    fig = Figure(figsize=(6.0, 4.5))
    ax = fig.add_subplot(111)
    if thermo["M"].size:
        cmap = dict(zip(np.unique(thermo["M"]), _color_cycle(len(np.unique(thermo["M"])))))
        for m in np.unique(thermo["M"]):
            sel = thermo["M"] == m
            ax.plot(thermo["mu12"][sel], thermo["E"][sel], ".", ms=1.5, color=cmap[m], label=f"M={int(m)}")
        if len(cmap) <= 10:
            ax.legend(fontsize=7, ncol=2)
    ax.set_xlabel(r"$\mu_{12}$")
    ax.set_ylabel(r"$E$")
    ax.set_title("Infinite-atom-number spectrum")
    return fig


def build_thermo_harmonics(thermo) -> Figure:
    fig = Figure(figsize=(6.0, 4.5))
    ax = fig.add_subplot(111)
    ax.plot(thermo["M"], thermo["E"], ".", ms=2.5, color="tab:red")
    ax.set_xlabel(r"$M$")
    ax.set_ylabel(r"$E$")
    ax.set_title("Infinite-atom-number spectrum vs excitation number")
    return fig


def build_expectations(expect) -> Figure:
    fig = Figure(figsize=(6.5, 4.0))
    ax = fig.add_subplot(111)
    ax.plot(expect["k"], expect["A11"], "-", color="red", label=r"$\langle A_{11}\rangle$")
    ax.plot(expect["k"], expect["A22"], "--", color="blue", label=r"$\langle A_{22}\rangle$")
    ax.plot(expect["k"], expect["nphot"], ":", color="green", label=r"$\langle a^\dagger a\rangle$")
    ax.set_xlabel("eigenstate index $k$ (ascending energy)")
    ax.set_ylabel("expectation value")
    ax.set_title("Populations and photon number per eigenstate")
    if expect["k"].size:
        ax.legend(fontsize=8)
    return fig


def build_photon_bars(finite, limit) -> Figure:
    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot(111)
    for table, shift, color, label in (
        (finite, -0.2, "tab:blue", "finite $M$"),
        (limit, 0.2, "tab:orange", r"$M \to \infty$"),
    ):
        if not table["nu"].size:
            continue
        excess = table["nu"] - table["nu"].min()
        ax.bar(excess + shift, table["P"], width=0.38, color=color, label=label)
    ax.set_xlabel(r"excess photons $\nu - \nu_0$")
    ax.set_ylabel(r"$P$")
    ax.set_title("Photon-number distribution of the sector ground state")
    if finite["nu"].size or limit["nu"].size:
        ax.legend(fontsize=8)
    return fig


def _color_cycle(n):
    from matplotlib import colormaps

    cmap = colormaps["tab20"] if n > 10 else colormaps["tab10"]
    return [cmap(i % cmap.N) for i in range(n)]


# figure id -> (input schema names, builder, extra kwargs)
REGISTRY = {
    "fig2a": (("phase", "triple"), build_region_map, {}),
    "fig2b": (("sweep",), build_ground_cut, {}),  # accepts 1+ cut tables
    "fig3a": (("sweep",), build_fidelity_trace, {}),
    "fig3b": (("sweep",), build_susceptibility_trace, {}),
    "fig5a": (("spectrum",), build_spectrum_scatter, {"mirror_axis": False}),
    "fig5b": (("spectrum",), build_spectrum_scatter, {"mirror_axis": True}),
    "fig6a": (("thermo",), build_thermo_fan, {}),
    "fig6b": (("thermo",), build_thermo_harmonics, {}),
    "fig7": (("expect",), build_expectations, {}),
    "fig8": (("photons", "photons"), build_photon_bars, {}),
}


def build_figure(spec: FigureSpec) -> Figure:
    if spec.figure_id not in REGISTRY:
        raise SchemaError(f"unknown figure id {spec.figure_id!r}")
    schemas, builder, kwargs = REGISTRY[spec.figure_id]
    if spec.figure_id == "fig2b":
        tables = [read_table(path, "sweep") for path in spec.inputs]
    else:
        if len(spec.inputs) != len(schemas):
            raise SchemaError(
                f"{spec.figure_id} needs {len(schemas)} input table(s), got {len(spec.inputs)}"
            )
        tables = [read_table(path, schema) for path, schema in zip(spec.inputs, schemas)]
    return builder(*tables, **kwargs)


def render(spec: FigureSpec) -> str:
    """Render one figure spec to its output image and return the path."""
    fig = build_figure(spec)
    directory = os.path.dirname(os.path.abspath(spec.output))
    os.makedirs(directory, exist_ok=True)
    fig.savefig(spec.output, dpi=150)
    return spec.output
