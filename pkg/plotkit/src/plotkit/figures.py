"""Figure builders and file-writing wrappers.

Each figure type has a pure builder that turns parsed data into a
``matplotlib`` Figure (handy for tests and embedding) and a ``plot_*``
wrapper that reads CSVs, builds, and writes the figure file:

* :func:`plot_energy_trace` — energy vs wall time with a standard-error
  band per series and optional horizontal reference lines.
* :func:`plot_order_profile` — coefficient magnitude per interaction
  order, log-scaled magnitudes by default.
* :func:`plot_disorder_delta` — disorder-averaged final energy (mean with
  stderr error bars) versus coupling strength g.

Rendering is deterministic: a fixed style sheet, the ``Agg`` backend, and
timestamp metadata stripped from written files, so identical inputs yield
byte-identical outputs.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schemas import (
    DisorderSummary,
    OrderProfile,
    Reference,
    TraceSet,
    as_reference,
    read_disorder_summary,
    read_order_table,
)

__all__ = [
    "STYLE",
    "save_figure",
    "build_energy_trace",
    "plot_energy_trace",
    "build_order_profile",
    "plot_order_profile",
    "build_disorder_delta",
    "plot_disorder_delta",
]

#: Fixed style sheet used by every builder (deterministic rendering).
STYLE = {
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 110.0,
    "savefig.dpi": 150.0,
    "font.size": 11.0,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.framealpha": 0.9,
    "svg.hashsalt": "plotkit",
}

#: Metadata overrides per file suffix that drop embedded timestamps.
_STRIP_METADATA = {
    ".svg": {"Date": None},
    ".pdf": {"CreationDate": None},
    ".eps": {"CreationDate": None},
    ".ps": {"CreationDate": None},
}

_REFERENCE_COLORS = ("#444444", "#9467bd", "#8c564b", "#e377c2")


def save_figure(fig: "plt.Figure", out: str | Path) -> Path:
    """Write ``fig`` to ``out`` (format from the suffix) and close it.

    Creates the output's parent directory if needed and strips
    timestamp metadata so repeated renders are byte-identical.
    """
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = _STRIP_METADATA.get(out.suffix.lower(), None)
    try:
        with plt.rc_context(STYLE):
            fig.savefig(out, metadata=metadata)
    finally:
        plt.close(fig)
    return out


def _draw_references(ax: "plt.Axes", references: Sequence[Reference]) -> None:
    for k, ref in enumerate(references):
        ax.axhline(
            ref.value,
            color=_REFERENCE_COLORS[k % len(_REFERENCE_COLORS)],
            linestyle="--",
            linewidth=1.2,
            label=ref.label,
            zorder=1,
        )


def build_energy_trace(
    traces: TraceSet,
    *,
    log_time: bool = False,
    title: str | None = None,
) -> "plt.Figure":
    """Energy vs wall time: one line + stderr band per series."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for series in traces.series:
            (line,) = ax.plot(
                series.t_wall_s, series.energy, label=series.label, zorder=3
            )
            ax.fill_between(
                series.t_wall_s,
                series.energy - series.stderr,
                series.energy + series.stderr,
                color=line.get_color(),
                alpha=0.25,
                linewidth=0,
                zorder=2,
            )
        _draw_references(ax, traces.references)
        if log_time:
            ax.set_xscale("log")
        ax.set_xlabel("wall time (s)")
        ax.set_ylabel("energy")
        if title:
            ax.set_title(title)
        ax.legend()
        fig.tight_layout()
    return fig


def plot_energy_trace(
    csv_paths: Iterable[str | Path],
    references: Iterable[Reference | tuple[str, float] | float] = (),
    *,
    out: str | Path,
    labels: Sequence[str] | None = None,
    log_time: bool = False,
    title: str | None = None,
) -> Path:
    """Render one or more trace CSVs into a single figure file."""
    traces = TraceSet.from_csvs(csv_paths, references=references, labels=labels)
    fig = build_energy_trace(traces, log_time=log_time, title=title)
    return save_figure(fig, out)


def build_order_profile(
    profile: OrderProfile,
    *,
    value: str = "max_abs",
    log_scale: bool = True,
    title: str | None = None,
) -> "plt.Figure":
    """Coefficient magnitude per interaction order for one site label."""
    if value not in ("max_abs", "l1"):
        raise ValueError(f"value must be 'max_abs' or 'l1', got {value!r}")
    magnitudes = getattr(profile, value)
    pretty = {"max_abs": "max |coefficient|", "l1": "L1 norm of coefficients"}
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(
            profile.orders,
            magnitudes,
            marker="o",
            markersize=7,
            linewidth=1.5,
            label=f"site {profile.site}" if profile.site != "all" else "all sites",
            zorder=3,
        )
        if log_scale:
            ax.set_yscale("log")
        ax.set_xticks(profile.orders)
        ax.set_xlabel("interaction order (subset size)")
        ax.set_ylabel(pretty[value])
        if title:
            ax.set_title(title)
        ax.legend()
        fig.tight_layout()
    return fig


def plot_order_profile(
    csv_path: str | Path,
    *,
    out: str | Path,
    site: str = "all",
    value: str = "max_abs",
    log_scale: bool = True,
    title: str | None = None,
) -> Path:
    """Render one order-profile CSV (one site label) into a figure file."""
    profile = read_order_table(csv_path).profile(site=site)
    fig = build_order_profile(
        profile, value=value, log_scale=log_scale, title=title
    )
    return save_figure(fig, out)


def build_disorder_delta(
    summary: DisorderSummary,
    *,
    title: str | None = None,
) -> "plt.Figure":
    """Disorder-averaged final energy (mean ± stderr) versus g."""
    n_failed = int(np.sum(summary.n_failed))
    label = "disorder mean"
    if n_failed:
        label += f" ({n_failed} run{'s' if n_failed != 1 else ''} failed)"
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.errorbar(
            summary.g,
            summary.mean_energy,
            yerr=summary.stderr,
            fmt="o-",
            capsize=4,
            linewidth=1.5,
            markersize=6,
            label=label,
            zorder=3,
        )
        ax.set_xlabel("transverse field g")
        ax.set_ylabel("mean final energy")
        if title:
            ax.set_title(title)
        ax.legend()
        fig.tight_layout()
    return fig


def plot_disorder_delta(
    csv_paths: str | Path | Iterable[str | Path],
    *,
    out: str | Path,
    title: str | None = None,
) -> Path:
    """Render one or more disorder-summary CSVs into a single figure file."""
    if isinstance(csv_paths, (str, Path)):
        csv_paths = [csv_paths]
    summary = read_disorder_summary(csv_paths)
    fig = build_disorder_delta(summary, title=title)
    return save_figure(fig, out)
