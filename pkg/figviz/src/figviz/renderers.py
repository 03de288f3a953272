"""Figure builders and renderers.

Every figure id pairs a pure builder, which turns one artifact file into the
arrays that will be plotted, with a draw function that lays those arrays out
on matplotlib axes. Builders never recompute physics; images are views of
the files. Splitting the two keeps the plotted values testable without
rasterizing anything.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
# stable element ids in SVG output (the default salts them per process)
matplotlib.rcParams["svg.hashsalt"] = "figviz"

import matplotlib.pyplot as plt
import numpy as np

from .errors import SchemaError
from .loaders import Table, load_payload, load_table, require

CURVE_SCHEMA = "darwinium/curve/1"
PCURVE_SCHEMA = "darwinium/pcurve/1"
ENSEMBLE_SCHEMA = "darwinium/ensemble/1"
HISTOGRAM_SCHEMA = "darwinium/histogram/1"
CORRESPONDENCE_SCHEMA = "darwinium/correspondence/1"


def _series_split(table: Table, value_cols: tuple[str, ...]) -> dict[str, dict[str, np.ndarray]]:
    """Per-series column arrays, series in file order, rows sorted by sweep."""
    names = table.strings("series")
    sweep = table.column("sweep")
    cols = {c: table.column(c) for c in value_cols}
    out: dict[str, dict[str, np.ndarray]] = {}
    for name in dict.fromkeys(names):
        mask = np.array([s == name for s in names])
        order = np.argsort(sweep[mask], kind="stable")
        entry = {"sweep": sweep[mask][order]}
        for c in value_cols:
            entry[c] = cols[c][mask][order]
        out[name] = entry
    return out


# ---------------------------------------------------------------------------
# builders: artifact file -> plotted value arrays


def build_info_curve(path: str | Path) -> dict:
    table = require(
        load_table(path),
        CURVE_SCHEMA,
        ("sweep", "series", "I_mean", "I_std", "chi_mean", "chi_std", "D_mean", "D_std"),
    )
    return {
        "sweep_name": table.meta.get("sweep", "sweep"),
        "series": _series_split(
            table, ("I_mean", "I_std", "chi_mean", "chi_std", "D_mean", "D_std")
        ),
    }


def build_pcurve(path: str | Path) -> dict:
    table = require(load_table(path), PCURVE_SCHEMA, ("sweep", "series", "P_mean", "P_std"))
    return {
        "sweep_name": table.meta.get("sweep", "theta"),
        "series": _series_split(table, ("P_mean", "P_std")),
    }


def build_ensembles(path: str | Path) -> dict:
    payload = load_payload(path, ENSEMBLE_SCHEMA)
    try:
        m_grid = [int(m) for m in payload["m_grid"]]
        realizations = payload["realizations"]
        per_m: dict[int, dict[str, np.ndarray]] = {}
        for m in m_grid:
            xs, zs, weights = [], [], []
            for real in realizations:
                for entry in real["ensembles"][str(m)]["entries"]:
                    xs.append(float(entry["bloch"][0]))
                    zs.append(float(entry["bloch"][2]))
                    weights.append(float(entry["weight"]))
            per_m[m] = {
                "x": np.array(xs),
                "z": np.array(zs),
                "weight": np.array(weights) / max(len(realizations), 1),
            }
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: malformed ensemble payload: {exc!r}") from None
    return {"m_grid": m_grid, "per_m": per_m}


def build_histogram(path: str | Path) -> dict:
    table = require(load_table(path), HISTOGRAM_SCHEMA, ("sweep", "series", "A"))
    bin_width = float(table.config().get("bin_width", 0.02))
    return {
        "bin_width": bin_width,
        "series": _series_split(table, ("A",)),
    }


def build_correspondence(path: str | Path) -> dict:
    table = require(
        load_table(path),
        CORRESPONDENCE_SCHEMA,
        ("sweep", "witness_mean", "witness_std", "mi_mean", "mi_std"),
    )
    order = np.argsort(table.column("sweep"), kind="stable")
    return {
        col: table.column(col)[order]
        for col in ("sweep", "witness_mean", "witness_std", "mi_mean", "mi_std")
    }


# ---------------------------------------------------------------------------
# draw functions: arrays -> matplotlib figure


def _draw_info_curve(data: dict, xlabel: str) -> plt.Figure:
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for name, s in data["series"].items():
        ax.errorbar(s["sweep"], s["I_mean"], yerr=s["I_std"], marker="o", label=f"I ({name})")
        ax.errorbar(
            s["sweep"], s["D_mean"], yerr=s["D_std"], marker="s", linestyle="--",
            label=f"D ({name})",
        )
    ax.axhline(1.0, color="gray", linestyle=":", linewidth=1.0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("information (bits)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def draw_plateau_curve(data: dict) -> plt.Figure:
    return _draw_info_curve(data, "fragment size m")


def draw_redundancy_curve(data: dict) -> plt.Figure:
    return _draw_info_curve(data, "environment size N")


def draw_theta_curve(data: dict) -> plt.Figure:
    return _draw_info_curve(data, "conditional-gate angle theta (radians)")


def draw_pcurve(data: dict) -> plt.Figure:
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for name, s in data["series"].items():
        ax.errorbar(s["sweep"], s["P_mean"], yerr=s["P_std"], marker="o", label=name)
    ax.set_xlabel("polar angle theta (radians)")
    ax.set_ylabel("integrated probability P(theta)")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def draw_ensembles(data: dict) -> plt.Figure:
    ms = data["m_grid"]
    fig, axes = plt.subplots(1, len(ms), figsize=(3.0 * len(ms), 3.2), squeeze=False)
    for ax, m in zip(axes[0], ms):
        s = data["per_m"][m]
        circle = np.linspace(0.0, 2.0 * np.pi, 256)
        ax.plot(np.cos(circle), np.sin(circle), color="lightgray", linewidth=1.0)
        ax.scatter(s["x"], s["z"], s=4.0 + 400.0 * s["weight"], alpha=0.6, edgecolors="none")
        ax.set_xlim(-1.15, 1.15)
        ax.set_ylim(-1.15, 1.15)
        ax.set_aspect("equal")
        ax.set_title(f"m={m}", fontsize=9)
        ax.set_xlabel("Bloch x")
    axes[0][0].set_ylabel("Bloch z")
    fig.tight_layout()
    return fig


def draw_histogram(data: dict) -> plt.Figure:
    series = data["series"]
    fig, axes = plt.subplots(len(series), 1, figsize=(5.0, 1.8 * len(series)), squeeze=False)
    for ax, (name, s) in zip(axes[:, 0], series.items()):
        ax.bar(s["sweep"], s["A"], width=0.9 * data["bin_width"], label=name)
        ax.axhline(0.0, color="gray", linewidth=0.8)
        ax.set_ylabel("A(z)")
        ax.legend(fontsize=8, loc="upper left")
    axes[-1, 0].set_xlabel("Bloch z")
    fig.tight_layout()
    return fig


def draw_correspondence(data: dict) -> plt.Figure:
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.errorbar(
        data["sweep"], data["witness_mean"], yerr=data["witness_std"],
        marker="o", color="tab:blue", label="witness <O>",
    )
    ax.axhline(0.0, color="gray", linestyle=":", linewidth=1.0)
    ax.set_xlabel("conditional-gate angle theta (radians)")
    ax.set_ylabel("<O>", color="tab:blue")
    twin = ax.twinx()
    twin.errorbar(
        data["sweep"], data["mi_mean"], yerr=data["mi_std"],
        marker="s", color="tab:red", label="mean I, two-qubit fragments",
    )
    twin.set_ylabel("information (bits)", color="tab:red")
    fig.tight_layout()
    return fig


FIGURES: dict[str, tuple] = {
    "fig1b": (build_info_curve, draw_plateau_curve),
    "fig1c": (build_info_curve, draw_redundancy_curve),
    "fig2c": (build_pcurve, draw_pcurve),
    "fig2d": (build_ensembles, draw_ensembles),
    "fig2e": (build_histogram, draw_histogram),
    "fig3": (build_info_curve, draw_theta_curve),
    "fig4": (build_correspondence, draw_correspondence),
}


def figure_ids() -> tuple[str, ...]:
    return tuple(sorted(FIGURES))


def _savefig_metadata(out_path: Path) -> dict | None:
    # strip the writer's date/version stamps so identical inputs give
    # identical bytes where the format permits
    suffix = out_path.suffix.lower()
    if suffix == ".svg":
        return {"Date": None}
    if suffix == ".png":
        return {"Software": None}
    return None


def render(figure_id: str, input_path: str | Path, out_path: str | Path, dpi: int = 150) -> dict:
    """Build the plotted arrays for one figure and write the image.

    Returns the builder output so callers (and tests) can inspect exactly
    what was drawn.
    """
    if figure_id not in FIGURES:
        raise SchemaError(f"unknown figure id {figure_id!r}; expected one of {figure_ids()}")
    builder, drawer = FIGURES[figure_id]
    data = builder(input_path)
    fig = drawer(data)
    out = Path(out_path)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(out, dpi=dpi, metadata=_savefig_metadata(out))
    finally:
        plt.close(fig)
    return data
