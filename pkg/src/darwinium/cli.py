"""Command-line entry point for the experiment drivers.

Exit codes: 0 success, 2 configuration/validation failure, 3 when the
oracle self-check runs but does not meet its tolerance.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import DarwiniumError
from .experiments import EXPERIMENTS, default_config, run_experiment
from .info import HolevoOptions
from .noise import NoiseParams

_TUPLE_FIELDS = ("n_env_grid", "m_grid", "theta_grid")


def _load_overrides(path: str) -> dict:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise json.JSONDecodeError("config file must hold a JSON object", "", 0)
    for key in _TUPLE_FIELDS:
        if data.get(key) is not None:
            data[key] = tuple(data[key])
    if isinstance(data.get("noise_params"), dict):
        data["noise_params"] = NoiseParams(**data["noise_params"])
    if isinstance(data.get("holevo"), dict):
        data["holevo"] = HolevoOptions(**data["holevo"])
    return data


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="darwinium",
        description=(
            "Run a branching-state information experiment and write its "
            "CSV/JSON artifacts."
        ),
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="JSON file of config-field overrides")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument(
        "--out", help="output directory (default: $DARWINIUM_OUTDIR, else no files)"
    )
    parser.add_argument("--noise", choices=("on", "off"), help="toggle the gate-noise model")
    sampling = parser.add_mutually_exclusive_group()
    sampling.add_argument("--shots", type=int, help="shots per measurement setting")
    sampling.add_argument(
        "--exact", action="store_true", help="infinite-shot mode (exact probabilities)"
    )
    parser.add_argument("--workers", type=int, help="process-pool size for realizations")
    args = parser.parse_args(argv)

    try:
        overrides = _load_overrides(args.config) if args.config else {}
        if args.seed is not None:
            overrides["master_seed"] = args.seed
        if args.out is not None:
            overrides["out_dir"] = args.out
        if args.noise is not None:
            overrides["noise"] = args.noise == "on"
        if args.shots is not None:
            overrides["shots"] = args.shots
        if args.exact:
            overrides["shots"] = None
        if args.workers is not None:
            overrides["workers"] = args.workers
        cfg = default_config(args.experiment, **overrides)
        result = run_experiment(cfg)
    except DarwiniumError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if cfg.experiment == "oracle-check":
        print(
            "oracle check: max |I_sim - I_oracle| = "
            f"{result['max_abs_difference']:.3e} over {result['draws']} draws "
            f"(tolerance {result['tolerance']:.0e})"
        )
        if not result["passed"]:
            print("oracle check failed", file=sys.stderr)
            return 3
        return 0

    target = cfg.out_dir or os.environ.get("DARWINIUM_OUTDIR")
    if target:
        print(f"{cfg.experiment} complete; artifacts in {target}")
    else:
        print(f"{cfg.experiment} complete (no output directory configured)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
