"""SVG figures of sweep results: purity, zeta* and screening current
against external flux, one curve per (order, cutoff) series."""

from __future__ import annotations

import logging
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from cycler import cycler  # noqa: E402

from squid_lindblad.errors import MissingColumnsError  # noqa: E402

log = logging.getLogger(__name__)

golden_mean = (math.sqrt(5) - 1.0) / 2.0
fig_width = 5.0
fig_size = [fig_width, fig_width * golden_mean]
colors = ["#08589e", "#2b8cbe", "#4eb3d3", "#7bccc4", "#a8ddb5", "#d95f0e"]

params = {
    "axes.prop_cycle": cycler(color=colors),
    "axes.labelsize": 10,
    "font.family": "serif",
    "font.size": 8,
    "mathtext.fontset": "stix",
    "legend.fontsize": 8,
    "xtick.labelsize": 9,
    "ytick.labelsize": 9,
    "figure.figsize": fig_size,
    "lines.linewidth": 1,
    "figure.subplot.left": 0.15,
    "figure.subplot.bottom": 0.17,
    "figure.subplot.right": 0.95,
    "figure.subplot.top": 0.93,
    # fixed ids and no date keep the SVG byte-reproducible
    "svg.hashsalt": "squid-lindblad",
    "svg.fonttype": "path",
}

FIGURES = {
    "fig1": ("flux_fraction", "xi", "purity_first"),
    "fig2": ("flux_fraction", "xi", "zeta_star"),
    "fig3": ("flux_fraction", "xi", "current_first_A", "current_second_A"),
    "fig4": ("flux_fraction", "xi", "purity_first", "purity_second"),
}

FLUX_LABEL = r"$\Phi_x / \Phi_0$"


def _cutoff_label(xi: float) -> str:
    if xi == 0:
        return r"$\Omega = \infty$"
    return rf"$\Omega = {1.0 / xi:g}\,\omega_0$"


def required_columns(figure: str) -> tuple[str, ...]:
    try:
        return FIGURES[figure]
    except KeyError:
        raise ValueError(
            f"unknown figure {figure!r}, choose from {', '.join(FIGURES)}"
        ) from None


def check_columns(frame: pd.DataFrame, figure: str) -> None:
    required = required_columns(figure)
    missing = [c for c in required if c not in frame.columns]
    if frame.empty:
        missing = missing or list(required)
    if missing:
        raise MissingColumnsError(missing)


def _series(frame: pd.DataFrame):
    """(label, xi, rows) per cutoff, split by damping rate when the results
    hold more than one."""
    by_gamma = "gamma_ratio" in frame.columns and frame["gamma_ratio"].nunique() > 1
    keys = ["gamma_ratio", "xi"] if by_gamma else ["xi"]
    for key, group in frame.groupby(keys, sort=True):
        key = key if isinstance(key, tuple) else (key,)
        xi = float(key[-1])
        label = _cutoff_label(xi)
        if by_gamma:
            label = rf"$\gamma = {float(key[0]):g}\,\omega_0$, {label}"
        yield label, xi, group.sort_values("flux_fraction")


def _plot_fig1(ax, frame):
    for label, _, group in _series(frame):
        ax.plot(group["flux_fraction"], group["purity_first"], label=label)
    ax.set_ylabel(r"Tr $\rho^2$")


def _plot_fig2(ax, frame):
    for label, xi, group in _series(frame):
        (line,) = ax.plot(group["flux_fraction"], group["zeta_star"], label=label)
        ax.axhline(1.0 - xi, color=line.get_color(), linestyle=":", linewidth=0.8)
    ax.set_ylabel(r"$\zeta^*$")
    ax.set_ylim(-0.02, 1.02)


def _plot_fig3(ax, frame):
    for label, _, group in _series(frame):
        (line,) = ax.plot(
            group["flux_fraction"],
            1e6 * group["current_first_A"],
            label=f"first order, {label}",
        )
        ax.plot(
            group["flux_fraction"],
            1e6 * group["current_second_A"],
            color=line.get_color(),
            linestyle="--",
            label=f"second order, {label}",
        )
    ax.set_ylabel(r"$\langle \hat{\Phi} / L \rangle$ ($\mu$A)")


def _plot_fig4(ax, frame):
    for label, _, group in _series(frame):
        (line,) = ax.plot(
            group["flux_fraction"], group["purity_first"], label=f"first, {label}"
        )
        ax.plot(
            group["flux_fraction"],
            group["purity_second"],
            color=line.get_color(),
            linestyle="--",
            label=f"second, {label}",
        )
    ax.set_ylabel(r"Tr $\rho^2$")


_PLOTTERS = {
    "fig1": _plot_fig1,
    "fig2": _plot_fig2,
    "fig3": _plot_fig3,
    "fig4": _plot_fig4,
}


def plot_figure(frame: pd.DataFrame, figure: str, path: str | Path) -> Path:
    check_columns(frame, figure)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    frame = frame.replace([np.inf, -np.inf], np.nan)
    with plt.rc_context(params):
        fig, ax = plt.subplots()
        try:
            _PLOTTERS[figure](ax, frame)
            ax.set_xlabel(FLUX_LABEL)
            lo, hi = frame["flux_fraction"].min(), frame["flux_fraction"].max()
            if hi > lo:
                ax.set_xlim(lo, hi)
            ax.legend(frameon=False)
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)

    log.info("%s written to %s", figure, path)
    return path
