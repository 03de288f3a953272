"""End-to-end checks for the figure pipeline, one printed line per criterion."""

import numpy as np
import pytest

from figviz import SchemaError, render
from figviz.renderers import FIGURES

from conftest import CURVE_HEADER, FIG1B_ROWS, table_text


def _report(capsys, name, ok, detail):
    with capsys.disabled():
        print(f"acceptance {name}: {'PASS' if ok else 'FAIL'} ({detail})")


def _leaves(obj, path=""):
    if isinstance(obj, dict):
        for key in sorted(obj, key=str):
            yield from _leaves(obj[key], f"{path}/{key}")
    else:
        yield path, obj


def test_renderer_determinism(tmp_path, capsys, request):
    fixture_by_figure = {
        "fig1b": "fig1b_csv",
        "fig1c": "fig1c_csv",
        "fig2c": "fig2c_csv",
        "fig2d": "fig2d_json",
        "fig2e": "fig2e_csv",
        "fig3": "fig3_csv",
        "fig4": "fig4_csv",
    }
    mismatches = []
    svg_stable = 0
    for figure_id in sorted(FIGURES):
        src = request.getfixturevalue(fixture_by_figure[figure_id])
        out_a = tmp_path / f"{figure_id}_a.svg"
        out_b = tmp_path / f"{figure_id}_b.svg"
        data_a = render(figure_id, src, out_a)
        data_b = render(figure_id, src, out_b)

        leaves_a, leaves_b = list(_leaves(data_a)), list(_leaves(data_b))
        if [p for p, _ in leaves_a] != [p for p, _ in leaves_b]:
            mismatches.append(f"{figure_id}: structure")
        else:
            for (path, va), (_, vb) in zip(leaves_a, leaves_b):
                same = (np.array_equal(va, vb)
                        if isinstance(va, np.ndarray) else va == vb)
                if not same:
                    mismatches.append(f"{figure_id}: {path}")
        if out_a.read_bytes() == out_b.read_bytes():
            svg_stable += 1

    ok = not mismatches and svg_stable == len(FIGURES)
    _report(capsys, "renderer-determinism", ok,
            f"{len(FIGURES)} figures, rebuilt arrays identical, "
            f"{svg_stable}/{len(FIGURES)} byte-identical SVGs")
    assert not mismatches, mismatches
    assert svg_stable == len(FIGURES)


def test_schema_validation_rejects_missing_column(tmp_path, capsys):
    path = tmp_path / "missing.csv"
    path.write_text(
        table_text("darwinium/curve/1", "fig1b", "m", CURVE_HEADER, FIG1B_ROWS,
                   drop_column="chi_mean")
    )
    with pytest.raises(SchemaError, match="chi_mean") as excinfo:
        render("fig1b", path, tmp_path / "missing.svg")
    ok = not (tmp_path / "missing.svg").exists()
    _report(capsys, "schema-validation", ok,
            f"missing chi_mean rejected: {excinfo.value}")
    assert ok
