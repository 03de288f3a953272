"""Experiment drivers with deterministic seeding and CSV/JSON artifact output.

Every driver resolves an ExperimentConfig, fans realizations out over
per-realization seed substreams (so results are independent of worker
count), folds the results in a fixed order and, when an output directory is
configured, writes one CSV (plot-ready summary) and one JSON (per-realization
raw values) per experiment. Output bytes are reproducible for a fixed config
and master seed; the only timestamp lives in the JSON metadata block.
"""
from __future__ import annotations

import dataclasses
import json
import math
import os
import subprocess
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .geometry import (
    GeometricEnsemble,
    PointerBasis,
    decode_accuracy,
    average_abs_z,
    fragment_ensemble,
    geometric_decomposition,
    integrated_probability,
    pooled_branch_signal,
)
from .info import FragmentPartition, HolevoOptions, InfoCurve, InfoCurvePoint, quantum_discord
from .models import (
    MODEL_LOGICAL_PAIR,
    MODEL_SCRAMBLED,
    MODEL_SINGLE,
    BranchingModelConfig,
    branch_angles,
    build_circuit,
)
from .noise import NINE_QUBIT_NOISE, NoiseParams, noisy_gate_wrapper, run_trajectory
from .density import DensityMatrix, partial_trace
from .info import holevo_bound, mutual_information, mutual_information_from_rho
from .oracle import closed_form_mi, record_overlap
from .rng import child_seed, substream
from .statevec import StateVector, run_circuit
from .witness import CorrespondenceReport, witness_vs_mi_correspondence

EXPERIMENTS = (
    "fig1b",
    "fig1c",
    "fig2c",
    "fig2d",
    "fig2e",
    "fig3",
    "fig4",
    "oracle-check",
)

CURVE_SCHEMA = "darwinium/curve/1"
PCURVE_SCHEMA = "darwinium/pcurve/1"
ENSEMBLE_SCHEMA = "darwinium/ensemble/1"
HISTOGRAM_SCHEMA = "darwinium/histogram/1"
REPORT_SCHEMA = "darwinium/report/1"
CORRESPONDENCE_SCHEMA = "darwinium/correspondence/1"

ORACLE_TOLERANCE = 1e-9

_DEFAULT_THETA_GRID = tuple(float(x) for x in np.linspace(0.0, math.pi, 33))

# experiment tag folded into every seed path, so different experiments
# sharing a master seed never reuse a substream
_TAGS = {
    "fig1b": 11,
    "fig1c": 12,
    "fig2c": 23,
    "fig2d": 24,
    "fig2e": 25,
    "fig3": 31,
    "fig4": 41,
    "oracle-check": 91,
}

@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved parameters of one driver invocation."""

    experiment: str
    n_env: int = 10
    n_env_grid: tuple[int, ...] = ()
    m_grid: tuple[int, ...] = ()
    theta_grid: tuple[float, ...] = ()
    runs: int = 20
    p0: float = 0.5
    noise: bool = False
    noise_params: NoiseParams = NINE_QUBIT_NOISE
    shots: int | None = None
    trajectories: int = 10_000
    bin_width: float = 0.02
    master_seed: int = 141
    out_dir: str | None = None
    workers: int = 1
    holevo: HolevoOptions = HolevoOptions()

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigurationError(
                f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENTS}"
            )
        if self.runs < 1:
            raise ConfigurationError("runs must be >= 1")
        if self.trajectories < 1:
            raise ConfigurationError("trajectories must be >= 1")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1")
        if self.shots is not None and self.shots < 1:
            raise ConfigurationError("shots must be >= 1 (or None for exact mode)")
        if self.bin_width <= 0:
            raise ConfigurationError("bin_width must be positive")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def default_config(experiment: str, **overrides) -> ExperimentConfig:
    """Per-experiment defaults, figure-caption shaped, override as needed."""
    valid = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = sorted(set(overrides) - valid)
    if unknown:
        raise ConfigurationError(f"unknown config fields: {unknown}")
    base: dict = {"experiment": experiment}
    if experiment == "fig1b":
        n_env = int(overrides.get("n_env", 10))
        base.update(n_env=n_env, m_grid=tuple(range(n_env + 1)), runs=20,
                    holevo=HolevoOptions(n_random_starts=2, maxfev=200))
    elif experiment == "fig1c":
        base.update(m_grid=(3,), n_env_grid=tuple(range(4, 11)), runs=20,
                    holevo=HolevoOptions(n_random_starts=2, maxfev=200))
    elif experiment == "fig2c":
        base.update(n_env_grid=(2, 6, 10), runs=10, theta_grid=_DEFAULT_THETA_GRID)
    elif experiment == "fig2d":
        base.update(n_env=10, m_grid=(2, 5, 8), runs=10)
    elif experiment == "fig2e":
        base.update(n_env=10, m_grid=(2, 4, 6, 8), runs=10)
    elif experiment == "fig3":
        base.update(n_env=4, theta_grid=_DEFAULT_THETA_GRID, m_grid=(1, 2, 3, 4), runs=1)
    elif experiment == "fig4":
        base.update(n_env=4, theta_grid=_DEFAULT_THETA_GRID, runs=1)
    elif experiment == "oracle-check":
        base.update(n_env=8, runs=100)
    base.update(overrides)
    return ExperimentConfig(**base)


# ---------------------------------------------------------------------------
# artifact plumbing


def build_identifier() -> str:
    """Short git commit of the working tree, or "unknown" outside a checkout."""
    try:
        out = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=10,
        )
        if out.returncode == 0:
            return out.stdout.strip()
    except OSError:
        pass
    return "unknown"


def _metadata(cfg: ExperimentConfig, schema: str) -> dict:
    return {
        "schema": schema,
        "experiment": cfg.experiment,
        "master_seed": cfg.master_seed,
        "build": build_identifier(),
        "config": cfg.to_dict(),
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _csv_comment_lines(cfg: ExperimentConfig, schema: str, sweep_name: str) -> list[str]:
    return [
        f"# schema={schema}",
        f"# experiment={cfg.experiment}",
        f"# sweep={sweep_name}",
        f"# seed={cfg.master_seed}",
        f"# build={build_identifier()}",
        f"# config={json.dumps(cfg.to_dict(), sort_keys=True)}",
    ]


def resolve_out_dir(cfg: ExperimentConfig) -> Path | None:
    target = cfg.out_dir or os.environ.get("DARWINIUM_OUTDIR")
    if target is None:
        return None
    path = Path(target)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write(path: Path, text: str) -> Path:
    path.write_text(text)
    return path


def write_curve_csv(
    path: Path, cfg: ExperimentConfig, sweep_name: str, curves: dict[str, InfoCurve]
) -> Path:
    lines = _csv_comment_lines(cfg, CURVE_SCHEMA, sweep_name)
    lines.append("sweep,series,I_mean,I_std,chi_mean,chi_std,D_mean,D_std,runs,seed")
    for series in sorted(curves):
        for row in curves[series].summary_rows():
            lines.append(
                ",".join(
                    [
                        _fmt(row["sweep"]),
                        series,
                        _fmt(row["I_mean"]),
                        _fmt(row["I_std"]),
                        _fmt(row["chi_mean"]),
                        _fmt(row["chi_std"]),
                        _fmt(row["D_mean"]),
                        _fmt(row["D_std"]),
                        str(row["runs"]),
                        str(cfg.master_seed),
                    ]
                )
            )
    return _write(path, "\n".join(lines) + "\n")


def write_curve_json(
    path: Path, cfg: ExperimentConfig, sweep_name: str, curves: dict[str, InfoCurve]
) -> Path:
    payload = {
        "metadata": _metadata(cfg, CURVE_SCHEMA),
        "sweep_name": sweep_name,
        "series": {
            series: {
                "points": [
                    {
                        "sweep": pt.sweep,
                        "I": list(pt.mutual_information),
                        "chi": list(pt.holevo),
                        "D": list(pt.discord),
                    }
                    for pt in curve.points
                ]
            }
            for series, curve in curves.items()
        },
    }
    return _write(path, json.dumps(payload, sort_keys=True, indent=1) + "\n")


# ---------------------------------------------------------------------------
# fig1 family: information versus fragment size / environment size


def _fig1_model(cfg: ExperimentConfig, n_env: int, index: int) -> BranchingModelConfig:
    seed = child_seed(cfg.master_seed, _TAGS[cfg.experiment], n_env, index)
    return BranchingModelConfig(
        MODEL_SINGLE, n_env, (cfg.p0, 1.0 - cfg.p0), rng_seed=seed
    )


def _fig1_point(args) -> list[tuple[float, float, float]]:
    """One random-gate realization: (I, chi, D) for every fragment size."""
    cfg, n_env, index = args
    model = _fig1_model(cfg, n_env, index)
    state = run_circuit(build_circuit(model))
    env = model.env_qubits
    out = []
    for j, m in enumerate(cfg.m_grid):
        if m > n_env:
            raise ConfigurationError(f"fragment size {m} exceeds environment {n_env}")
        part = FragmentPartition(model.system_qubits, env[:m], env[m:])
        opt = replace(
            cfg.holevo, seed=child_seed(cfg.master_seed, _TAGS[cfg.experiment], n_env, index, j)
        )
        res = quantum_discord(state, part, opt)
        out.append((res.mutual_information, res.holevo, res.discord))
    return out


def _parallel_map(fn, payloads: list, workers: int) -> list:
    if workers <= 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, payloads))


def _fold_curve(sweep_values, results_by_run) -> InfoCurve:
    """results_by_run[i][j] = (I, chi, D) for run i at sweep point j."""
    points = []
    for j, sv in enumerate(sweep_values):
        points.append(
            InfoCurvePoint(
                float(sv),
                tuple(r[j][0] for r in results_by_run),
                tuple(r[j][1] for r in results_by_run),
                tuple(r[j][2] for r in results_by_run),
            )
        )
    return InfoCurve("sweep", tuple(points))


def run_fig1b(cfg: ExperimentConfig) -> InfoCurve:
    """Mean information versus fragment size at fixed environment size."""
    if not cfg.m_grid:
        raise ConfigurationError("fig1b needs a fragment-size grid")
    payloads = [(cfg, cfg.n_env, i) for i in range(cfg.runs)]
    results = _parallel_map(_fig1_point, payloads, cfg.workers)
    curve = _fold_curve(cfg.m_grid, results)
    curve.validate()
    out = resolve_out_dir(cfg)
    if out is not None:
        series = {f"N={cfg.n_env}": curve}
        write_curve_csv(out / "fig1b.csv", cfg, "m", series)
        write_curve_json(out / "fig1b.json", cfg, "m", series)
    return curve


def run_fig1c(cfg: ExperimentConfig) -> InfoCurve:
    """Mean information versus environment size at fixed fragment size."""
    if len(cfg.m_grid) != 1:
        raise ConfigurationError("fig1c uses a single fragment size")
    if not cfg.n_env_grid:
        raise ConfigurationError("fig1c needs an environment-size grid")
    m = cfg.m_grid[0]
    if min(cfg.n_env_grid) < max(1, m):
        raise ConfigurationError("environment must hold the fragment")
    rows = _parallel_map(_fig1c_row, [(cfg, i) for i in range(cfg.runs)], cfg.workers)
    curve = _fold_curve(cfg.n_env_grid, rows)
    curve.validate()
    out = resolve_out_dir(cfg)
    if out is not None:
        series = {f"m={m}": curve}
        write_curve_csv(out / "fig1c.csv", cfg, "N", series)
        write_curve_json(out / "fig1c.json", cfg, "N", series)
    return curve


def _fig1c_row(args) -> list[tuple[float, float, float]]:
    """One run index across the environment-size grid (fresh draw per N)."""
    cfg, index = args
    m = cfg.m_grid[0]
    out = []
    for n_env in cfg.n_env_grid:
        model = _fig1_model(cfg, n_env, index)
        state = run_circuit(build_circuit(model))
        env = model.env_qubits
        part = FragmentPartition(model.system_qubits, env[:m], env[m:])
        opt = replace(
            cfg.holevo, seed=child_seed(cfg.master_seed, _TAGS[cfg.experiment], n_env, index, m)
        )
        res = quantum_discord(state, part, opt)
        out.append((res.mutual_information, res.holevo, res.discord))
    return out


# ---------------------------------------------------------------------------
# fig2 family: geometric clustering of conditional states


def _fig2_state(cfg: ExperimentConfig, n_env: int, index: int) -> StateVector:
    seed = child_seed(cfg.master_seed, _TAGS[cfg.experiment], n_env, index)
    model = BranchingModelConfig(
        MODEL_LOGICAL_PAIR, n_env, (cfg.p0, 1.0 - cfg.p0), rng_seed=seed
    )
    return run_circuit(build_circuit(model))


_FIG2_POINTER = PointerBasis("00", "11")


def _fig2c_row(args) -> list[np.ndarray]:
    cfg, index = args
    out = []
    for n_env in cfg.n_env_grid:
        state = _fig2_state(cfg, n_env, index)
        env = tuple(range(2, 2 + n_env))
        part = FragmentPartition((0, 1), env, ())
        ens = geometric_decomposition(state, part, _FIG2_POINTER)
        out.append(integrated_probability(ens, np.asarray(cfg.theta_grid)))
    return out


def run_fig2c(cfg: ExperimentConfig) -> dict[str, dict[str, np.ndarray]]:
    """Integrated polar-angle probability P(theta), one curve per N."""
    if not cfg.theta_grid or not cfg.n_env_grid:
        raise ConfigurationError("fig2c needs theta and environment-size grids")
    rows = _parallel_map(_fig2c_row, [(cfg, i) for i in range(cfg.runs)], cfg.workers)
    curves: dict[str, dict[str, np.ndarray]] = {}
    for k, n_env in enumerate(cfg.n_env_grid):
        stack = np.stack([rows[i][k] for i in range(cfg.runs)])
        curves[f"N={n_env}"] = {
            "mean": stack.mean(axis=0),
            "std": stack.std(axis=0),
            "raw": stack,
        }
    out = resolve_out_dir(cfg)
    if out is not None:
        lines = _csv_comment_lines(cfg, PCURVE_SCHEMA, "theta")
        lines.append("sweep,series,P_mean,P_std,runs")
        for series in sorted(curves):
            for j, th in enumerate(cfg.theta_grid):
                lines.append(
                    ",".join(
                        [
                            _fmt(th),
                            series,
                            _fmt(float(curves[series]["mean"][j])),
                            _fmt(float(curves[series]["std"][j])),
                            str(cfg.runs),
                        ]
                    )
                )
        _write(out / "fig2c.csv", "\n".join(lines) + "\n")
        payload = {
            "metadata": _metadata(cfg, PCURVE_SCHEMA),
            "sweep_name": "theta",
            "theta": list(cfg.theta_grid),
            "series": {
                series: {"P_mean": c["mean"].tolist(), "P_std": c["std"].tolist(),
                         "P_runs": c["raw"].tolist()}
                for series, c in curves.items()
            },
        }
        _write(out / "fig2c.json", json.dumps(payload, sort_keys=True, indent=1) + "\n")
    return curves


def fig2_ensembles(
    cfg: ExperimentConfig, index: int
) -> dict[int, GeometricEnsemble]:
    """Fragment ensembles for one realization, keyed by fragment size.

    With shots configured this follows the sampled-tomography path (logical
    rotations, post-selection, per-outcome Bloch reconstruction); otherwise
    the ensemble is read directly off the state vector.
    """
    state = _fig2_state(cfg, cfg.n_env, index)
    env = tuple(range(2, 2 + cfg.n_env))
    out: dict[int, GeometricEnsemble] = {}
    for m in cfg.m_grid:
        part = FragmentPartition((0, 1), env[:m], env[m:])
        if cfg.shots is None:
            out[m] = fragment_ensemble(state, part, _FIG2_POINTER)
        else:
            from .tomography import sampled_fragment_ensemble

            rng = substream(
                cfg.master_seed, _TAGS[cfg.experiment], cfg.n_env, index, m
            )
            noise = cfg.noise_params if cfg.noise else None
            out[m] = sampled_fragment_ensemble(
                state, part, _FIG2_POINTER, cfg.shots, rng, noise
            )
    return out


def _fig2_ensembles_star(args):
    cfg, index = args
    return fig2_ensembles(cfg, index)


def run_fig2d(cfg: ExperimentConfig) -> list[dict[int, GeometricEnsemble]]:
    """Per-realization fragment ensembles (the Bloch-scatter dataset)."""
    if not cfg.m_grid:
        raise ConfigurationError("fig2d needs a fragment-size grid")
    per_run = _parallel_map(
        _fig2_ensembles_star, [(cfg, i) for i in range(cfg.runs)], cfg.workers
    )
    out = resolve_out_dir(cfg)
    if out is not None:
        payload = {
            "metadata": _metadata(cfg, ENSEMBLE_SCHEMA),
            "m_grid": list(cfg.m_grid),
            "realizations": [
                {
                    "index": i,
                    "ensembles": {
                        str(m): {
                            "kind": ens.kind,
                            "discarded_fraction": ens.discarded_fraction,
                            "decode_accuracy": decode_accuracy(ens),
                            "mean_abs_z": average_abs_z(ens),
                            "entries": [
                                {
                                    "weight": e.weight,
                                    "f": e.f_label,
                                    "bloch": [e.bloch[0], e.bloch[1], e.bloch[2]],
                                }
                                for e in ens.entries
                            ],
                        }
                        for m, ens in per_run[i].items()
                    },
                }
                for i in range(cfg.runs)
            ],
        }
        _write(out / "fig2d.json", json.dumps(payload, sort_keys=True, indent=1) + "\n")
    return per_run


def run_fig2e(cfg: ExperimentConfig) -> dict[int, list[tuple[float, float]]]:
    """Record-count signal A(z) pooled over realizations, per fragment size."""
    if not cfg.m_grid:
        raise ConfigurationError("fig2e needs a fragment-size grid")
    per_run = _parallel_map(
        _fig2_ensembles_star, [(cfg, i) for i in range(cfg.runs)], cfg.workers
    )
    signals: dict[int, list[tuple[float, float]]] = {}
    for m in cfg.m_grid:
        signals[m] = pooled_branch_signal([r[m] for r in per_run], cfg.bin_width)
    out = resolve_out_dir(cfg)
    if out is not None:
        lines = _csv_comment_lines(cfg, HISTOGRAM_SCHEMA, "z")
        lines.append("sweep,series,A,runs")
        for m in cfg.m_grid:
            for z, a in signals[m]:
                lines.append(",".join([_fmt(z), f"m={m}", _fmt(a), str(cfg.runs)]))
        _write(out / "fig2e.csv", "\n".join(lines) + "\n")
        payload = {
            "metadata": _metadata(cfg, HISTOGRAM_SCHEMA),
            "bin_width": cfg.bin_width,
            "series": {
                f"m={m}": {"z": [z for z, _ in signals[m]], "A": [a for _, a in signals[m]]}
                for m in cfg.m_grid
            },
        }
        _write(out / "fig2e.json", json.dumps(payload, sort_keys=True, indent=1) + "\n")
    return signals


def run_fig2(cfg: ExperimentConfig):
    """Dispatch to the geometric-output driver matching cfg.experiment."""
    if cfg.experiment == "fig2c":
        return run_fig2c(cfg)
    if cfg.experiment == "fig2d":
        return run_fig2d(cfg)
    if cfg.experiment == "fig2e":
        return run_fig2e(cfg)
    raise ConfigurationError(f"{cfg.experiment!r} is not a fig2 experiment")


# ---------------------------------------------------------------------------
# fig3: information versus conditional-gate angle, noiseless and noisy


def _fig3_model(cfg: ExperimentConfig, theta: float) -> BranchingModelConfig:
    return BranchingModelConfig(
        MODEL_SCRAMBLED, 4, (cfg.p0, 1.0 - cfg.p0), theta=float(theta)
    )


def _fig3_noiseless_point(args) -> list[tuple[float, float, float]]:
    cfg, j = args
    theta = cfg.theta_grid[j]
    state = run_circuit(build_circuit(_fig3_model(cfg, theta)))
    env = (1, 2, 3, 4)
    out = []
    for m in cfg.m_grid:
        part = FragmentPartition((0,), env[:m], env[m:])
        opt = replace(cfg.holevo, seed=child_seed(cfg.master_seed, _TAGS["fig3"], j, m))
        res = quantum_discord(state, part, opt)
        out.append((res.mutual_information, res.holevo, res.discord))
    return out


def average_trajectory_state(
    cfg: ExperimentConfig, theta: float, theta_index: int
) -> DensityMatrix:
    """Trajectory-averaged system+environment density matrix under the
    configured gate noise.

    Readout misassignment is deliberately not folded in here: information
    metrics model a readout-corrected state reconstruction, so only gate and
    idle noise belong in the average. Each trajectory draws from its own seed
    substream, so the average is reproducible and independent of how sweep
    points are distributed over workers.
    """
    model = _fig3_model(cfg, theta)
    noisy = noisy_gate_wrapper(build_circuit(model), cfg.noise_params)
    keep = (0, 1, 2, 3, 4)
    total = np.zeros((2 ** len(keep), 2 ** len(keep)), dtype=complex)
    for t in range(cfg.trajectories):
        rng = substream(cfg.master_seed, _TAGS["fig3"], theta_index, t)
        state = run_trajectory(noisy, rng)
        total += partial_trace(state, keep).matrix
    return DensityMatrix(total / cfg.trajectories)


def _fig3_noisy_point(args) -> list[tuple[float, float, float]]:
    cfg, j = args
    theta = cfg.theta_grid[j]
    rho_se = average_trajectory_state(cfg, theta, j)
    out = []
    for m in cfg.m_grid:
        rho_sf = partial_trace(rho_se, tuple(range(m + 1)))
        i_val = mutual_information_from_rho(rho_sf, 1)
        opt = replace(cfg.holevo, seed=child_seed(cfg.master_seed, _TAGS["fig3"], j, m))
        res = holevo_bound(rho_sf, opt, n_system=1)
        out.append((i_val, res.chi, max(i_val - res.chi, -opt.tol_opt)))
    return out


def run_fig3(cfg: ExperimentConfig) -> dict[str, InfoCurve]:
    """I, chi, D versus theta for each fragment size (auxiliaries traced)."""
    if not cfg.theta_grid or not cfg.m_grid:
        raise ConfigurationError("fig3 needs theta and fragment-size grids")
    fn = _fig3_noisy_point if cfg.noise else _fig3_noiseless_point
    payloads = [(cfg, j) for j in range(len(cfg.theta_grid))]
    per_theta = _parallel_map(fn, payloads, cfg.workers)
    curves: dict[str, InfoCurve] = {}
    for k, m in enumerate(cfg.m_grid):
        points = tuple(
            InfoCurvePoint(
                float(cfg.theta_grid[j]),
                (per_theta[j][k][0],),
                (per_theta[j][k][1],),
                (per_theta[j][k][2],),
            )
            for j in range(len(cfg.theta_grid))
        )
        curve = InfoCurve("theta", points)
        curve.validate()
        curves[f"m={m}"] = curve
    out = resolve_out_dir(cfg)
    if out is not None:
        write_curve_csv(out / "fig3.csv", cfg, "theta", curves)
        write_curve_json(out / "fig3.json", cfg, "theta", curves)
    return curves


# ---------------------------------------------------------------------------
# fig4: witness sweep against the two-qubit-fragment information plateau


def run_fig4(cfg: ExperimentConfig) -> CorrespondenceReport:
    if not cfg.theta_grid:
        raise ConfigurationError("fig4 needs a theta grid")
    model = _fig3_model(cfg, cfg.theta_grid[0])
    report = witness_vs_mi_correspondence(model, cfg.theta_grid)
    out = resolve_out_dir(cfg)
    if out is not None:
        lines = _csv_comment_lines(cfg, CORRESPONDENCE_SCHEMA, "theta")
        lines.append("sweep,witness_mean,witness_std,mi_mean,mi_std")
        for row in report.rows():
            lines.append(
                ",".join(
                    [
                        _fmt(row["theta"]),
                        _fmt(row["witness"]),
                        _fmt(0.0),
                        _fmt(row["mi_m2"]),
                        _fmt(0.0),
                    ]
                )
            )
        _write(out / "fig4.csv", "\n".join(lines) + "\n")
        payload = {
            "metadata": _metadata(cfg, CORRESPONDENCE_SCHEMA),
            "rows": report.rows(),
            "zero_window": list(report.zero_window) if report.zero_window else None,
            "plateau_window": list(report.plateau_window) if report.plateau_window else None,
            "witness_tol": report.witness_tol,
            "mi_tol": report.mi_tol,
            "system_entropy": report.system_entropy,
        }
        _write(out / "fig4.json", json.dumps(payload, sort_keys=True, indent=1) + "\n")
    return report


# ---------------------------------------------------------------------------
# oracle check: simulator versus closed form


def run_oracle_check(cfg: ExperimentConfig) -> dict:
    """Compare simulated I(S:F) with the closed form over random draws of the
    single-qubit-system model, every fragment size, environments up to n_env."""
    max_env = min(cfg.n_env, 8)
    draws = []
    max_diff = 0.0
    rng = substream(cfg.master_seed, _TAGS["oracle-check"])
    for i in range(cfg.runs):
        n_env = 1 + (i % max_env)
        p = float(rng.uniform(0.1, 0.9))
        seed = child_seed(cfg.master_seed, _TAGS["oracle-check"], i)
        model = BranchingModelConfig(MODEL_SINGLE, n_env, (p, 1.0 - p), rng_seed=seed)
        circuit = build_circuit(model)
        state = run_circuit(circuit)
        overlaps = [record_overlap(b0, b1) for b0, b1 in branch_angles(circuit)]
        env = model.env_qubits
        worst = 0.0
        for m in range(n_env + 1):
            part = FragmentPartition((0,), env[:m], env[m:])
            i_sim = mutual_information(state, part)
            i_oracle = closed_form_mi(p, overlaps, m, n_env)
            worst = max(worst, abs(i_sim - i_oracle))
        draws.append({"n_env": n_env, "p": p, "max_abs_difference": worst})
        max_diff = max(max_diff, worst)
    report = {
        "metadata": _metadata(cfg, REPORT_SCHEMA),
        "draws": len(draws),
        "tolerance": ORACLE_TOLERANCE,
        "max_abs_difference": max_diff,
        "passed": bool(max_diff <= ORACLE_TOLERANCE),
        "per_draw": draws,
    }
    out = resolve_out_dir(cfg)
    if out is not None:
        _write(out / "oracle-check.json", json.dumps(report, sort_keys=True, indent=1) + "\n")
    return report


# ---------------------------------------------------------------------------
# dispatch


def run_experiment(cfg: ExperimentConfig):
    if cfg.experiment == "fig1b":
        return run_fig1b(cfg)
    if cfg.experiment == "fig1c":
        return run_fig1c(cfg)
    if cfg.experiment in ("fig2c", "fig2d", "fig2e"):
        return run_fig2(cfg)
    if cfg.experiment == "fig3":
        return run_fig3(cfg)
    if cfg.experiment == "fig4":
        return run_fig4(cfg)
    if cfg.experiment == "oracle-check":
        return run_oracle_check(cfg)
    raise ConfigurationError(f"no driver for {cfg.experiment!r}")
