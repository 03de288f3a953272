"""Inline artifact fixtures.

Every test input is written here as a literal matching the darwinium file
interface (comment lines + header for CSV, metadata.schema for JSON), so
this package is exercised without importing any simulation code.
"""
from __future__ import annotations

import json

import pytest

CURVE_HEADER = "sweep,series,I_mean,I_std,chi_mean,chi_std,D_mean,D_std,runs,seed"
PCURVE_HEADER = "sweep,series,P_mean,P_std,runs"
HISTOGRAM_HEADER = "sweep,series,A,runs"
CORRESPONDENCE_HEADER = "sweep,witness_mean,witness_std,mi_mean,mi_std"


def table_text(
    schema: str,
    experiment: str,
    sweep: str,
    header: str,
    rows: list[str],
    config: dict | None = None,
    drop_column: str | None = None,
) -> str:
    lines = [
        f"# schema={schema}",
        f"# experiment={experiment}",
        f"# sweep={sweep}",
        "# seed=7",
        "# build=abc1234",
    ]
    if config is not None:
        lines.append("# config=" + json.dumps(config, sort_keys=True))
    cols = header.split(",")
    if drop_column is not None:
        keep = [i for i, c in enumerate(cols) if c != drop_column]
        header = ",".join(cols[i] for i in keep)
        rows = [",".join(r.split(",")[i] for i in keep) for r in rows]
    return "\n".join(lines + [header] + rows) + "\n"


FIG1B_ROWS = [
    "0,N=10,0,0,0,0,0,0,20,7",
    "1,N=10,0.82,0.05,0.7,0.04,0.12,0.02,20,7",
    "2,N=10,0.97,0.03,0.91,0.03,0.06,0.01,20,7",
    "3,N=10,0.99,0.02,0.96,0.02,0.03,0.01,20,7",
    "10,N=10,2,0,1,0,1,0,20,7",
]

# deliberately shuffled: builders must sort by sweep within each series
FIG3_ROWS = [
    "1.5707963,m=1,1,0,1,0,0,0,1,7",
    "0,m=1,0,0,0,0,0,0,1,7",
    "0.7853981,m=1,0.6,0,0.55,0,0.05,0,1,7",
    "1.5707963,m=2,2,0,1,0,1,0,1,7",
    "0,m=2,0,0,0,0,0,0,1,7",
    "0.7853981,m=2,1.1,0,0.9,0,0.2,0,1,7",
]

FIG2C_ROWS = [
    "0,N=2,0,0,10",
    "1.5707963,N=2,0.4,0.05,10",
    "3.1415926,N=2,1,0,10",
    "0,N=10,0,0,10",
    "1.5707963,N=10,0.5,0.02,10",
    "3.1415926,N=10,1,0,10",
]

FIG2E_ROWS = [
    "-1,m=2,-0.87,10",
    "-0.5,m=2,-0.11,10",
    "0,m=2,0.002,10",
    "0.5,m=2,0.09,10",
    "1,m=2,0.91,10",
]

FIG4_ROWS = [
    "0,0.894427191,0,0,0",
    "0.7853981,0.31,0.01,0.62,0.02",
    "1.5707963,0.0003,0.0001,0.997,0.001",
]


def ensemble_payload() -> dict:
    def entry(weight, x, y, z, f):
        return {"weight": weight, "f": f, "bloch": [x, y, z]}

    def ensemble(entries):
        return {
            "kind": "fragment",
            "discarded_fraction": 0.0,
            "decode_accuracy": 0.8,
            "mean_abs_z": 0.6,
            "entries": entries,
        }

    return {
        "metadata": {
            "schema": "darwinium/ensemble/1",
            "experiment": "fig2d",
            "master_seed": 7,
            "build": "abc1234",
            "created_utc": "2026-08-26T00:00:00+00:00",
            "config": {"runs": 2},
        },
        "m_grid": [1, 2],
        "realizations": [
            {
                "index": 0,
                "ensembles": {
                    "1": ensemble(
                        [entry(0.6, 0.1, 0.0, 0.9, "0"), entry(0.4, -0.2, 0.1, -0.8, "1")]
                    ),
                    "2": ensemble(
                        [entry(0.5, 0.0, 0.0, 0.95, "00"), entry(0.5, 0.05, 0.0, -0.9, "11")]
                    ),
                },
            },
            {
                "index": 1,
                "ensembles": {
                    "1": ensemble(
                        [entry(0.7, 0.05, 0.0, 0.85, "0"), entry(0.3, -0.1, 0.0, -0.7, "1")]
                    ),
                    "2": ensemble(
                        [entry(0.45, 0.02, 0.0, 0.9, "00"), entry(0.55, 0.0, 0.0, -0.92, "11")]
                    ),
                },
            },
        ],
    }


@pytest.fixture
def fig1b_csv(tmp_path):
    path = tmp_path / "fig1b.csv"
    path.write_text(table_text("darwinium/curve/1", "fig1b", "m", CURVE_HEADER, FIG1B_ROWS))
    return path


@pytest.fixture
def fig1c_csv(tmp_path):
    rows = [r.replace("N=10", "m=3") for r in FIG1B_ROWS]
    path = tmp_path / "fig1c.csv"
    path.write_text(table_text("darwinium/curve/1", "fig1c", "N", CURVE_HEADER, rows))
    return path


@pytest.fixture
def fig3_csv(tmp_path):
    path = tmp_path / "fig3.csv"
    path.write_text(table_text("darwinium/curve/1", "fig3", "theta", CURVE_HEADER, FIG3_ROWS))
    return path


@pytest.fixture
def fig2c_csv(tmp_path):
    path = tmp_path / "fig2c.csv"
    path.write_text(
        table_text("darwinium/pcurve/1", "fig2c", "theta", PCURVE_HEADER, FIG2C_ROWS)
    )
    return path


@pytest.fixture
def fig2e_csv(tmp_path):
    path = tmp_path / "fig2e.csv"
    path.write_text(
        table_text(
            "darwinium/histogram/1",
            "fig2e",
            "z",
            HISTOGRAM_HEADER,
            FIG2E_ROWS,
            config={"bin_width": 0.5, "runs": 10},
        )
    )
    return path


@pytest.fixture
def fig4_csv(tmp_path):
    path = tmp_path / "fig4.csv"
    path.write_text(
        table_text(
            "darwinium/correspondence/1", "fig4", "theta", CORRESPONDENCE_HEADER, FIG4_ROWS
        )
    )
    return path


@pytest.fixture
def fig2d_json(tmp_path):
    path = tmp_path / "fig2d.json"
    path.write_text(json.dumps(ensemble_payload(), sort_keys=True, indent=1) + "\n")
    return path
