import json

import numpy as np
import pytest

from figviz import SchemaError, load_payload, load_table, require

from conftest import CURVE_HEADER, FIG1B_ROWS, ensemble_payload, table_text


class TestLoadTable:
    def test_parses_schema_and_meta(self, fig1b_csv):
        table = load_table(fig1b_csv)
        assert table.schema == "darwinium/curve/1"
        assert table.meta["experiment"] == "fig1b"
        assert table.meta["sweep"] == "m"
        assert table.meta["seed"] == "7"

    def test_header_and_rows(self, fig1b_csv):
        table = load_table(fig1b_csv)
        assert table.header == tuple(CURVE_HEADER.split(","))
        assert len(table.rows) == len(FIG1B_ROWS)
        assert table.rows[0][1] == "N=10"

    def test_numeric_column(self, fig1b_csv):
        table = load_table(fig1b_csv)
        np.testing.assert_allclose(table.column("sweep"), [0, 1, 2, 3, 10])
        np.testing.assert_allclose(table.column("I_mean"), [0, 0.82, 0.97, 0.99, 2])

    def test_string_column(self, fig1b_csv):
        assert load_table(fig1b_csv).strings("series") == ["N=10"] * 5

    def test_embedded_config(self, fig2e_csv):
        assert load_table(fig2e_csv).config() == {"bin_width": 0.5, "runs": 10}

    def test_config_defaults_empty(self, fig1b_csv):
        assert load_table(fig1b_csv).config() == {}

    def test_blank_lines_ignored(self, tmp_path):
        text = table_text("darwinium/curve/1", "fig1b", "m", CURVE_HEADER, FIG1B_ROWS)
        path = tmp_path / "gappy.csv"
        path.write_text(text.replace("\n# seed", "\n\n# seed") + "\n\n")
        assert len(load_table(path).rows) == len(FIG1B_ROWS)

    def test_missing_file(self, tmp_path):
        with pytest.raises(SchemaError, match="not found"):
            load_table(tmp_path / "absent.csv")

    def test_no_schema_comment(self, tmp_path):
        path = tmp_path / "bare.csv"
        path.write_text("sweep,series\n0,a\n")
        with pytest.raises(SchemaError, match="schema"):
            load_table(path)

    def test_no_header(self, tmp_path):
        path = tmp_path / "comments-only.csv"
        path.write_text("# schema=darwinium/curve/1\n")
        with pytest.raises(SchemaError, match="header"):
            load_table(path)

    def test_ragged_row(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("# schema=s\nsweep,series\n0,a,extra\n")
        with pytest.raises(SchemaError, match="cells"):
            load_table(path)

    def test_non_numeric_column(self, fig1b_csv):
        with pytest.raises(SchemaError, match="not numeric"):
            load_table(fig1b_csv).column("series")

    def test_unknown_column(self, fig1b_csv):
        with pytest.raises(SchemaError, match="missing column"):
            load_table(fig1b_csv).column("Q_mean")

    def test_bad_embedded_config(self, tmp_path):
        path = tmp_path / "badcfg.csv"
        path.write_text("# schema=s\n# config={not json\nsweep\n0\n")
        with pytest.raises(SchemaError, match="config"):
            load_table(path).config()


class TestRequire:
    def test_passes_and_returns(self, fig1b_csv):
        table = load_table(fig1b_csv)
        assert require(table, "darwinium/curve/1", ("sweep", "I_mean")) is table

    def test_wrong_schema_names_both(self, fig1b_csv):
        with pytest.raises(SchemaError, match="darwinium/curve/1.*darwinium/pcurve/1"):
            require(load_table(fig1b_csv), "darwinium/pcurve/1", ("sweep",))

    def test_missing_column_named(self, tmp_path):
        text = table_text(
            "darwinium/curve/1", "fig1b", "m", CURVE_HEADER, FIG1B_ROWS, drop_column="D_mean"
        )
        path = tmp_path / "short.csv"
        path.write_text(text)
        with pytest.raises(SchemaError, match="missing column.*D_mean"):
            require(load_table(path), "darwinium/curve/1", ("sweep", "I_mean", "D_mean"))


class TestLoadPayload:
    def test_accepts_matching_schema(self, fig2d_json):
        data = load_payload(fig2d_json, "darwinium/ensemble/1")
        assert data["m_grid"] == [1, 2]

    def test_rejects_other_schema(self, fig2d_json):
        with pytest.raises(SchemaError, match="does not match"):
            load_payload(fig2d_json, "darwinium/curve/1")

    def test_rejects_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(SchemaError, match="not valid JSON"):
            load_payload(path, "darwinium/ensemble/1")

    def test_rejects_non_object(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(SchemaError, match="not an object"):
            load_payload(path, "darwinium/ensemble/1")

    def test_rejects_missing_metadata(self, tmp_path):
        payload = ensemble_payload()
        del payload["metadata"]
        path = tmp_path / "nometa.json"
        path.write_text(json.dumps(payload))
        with pytest.raises(SchemaError, match="does not match"):
            load_payload(path, "darwinium/ensemble/1")
