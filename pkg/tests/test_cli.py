import json
import math

import pytest

from pmleak.cli import EXIT_OK, EXIT_TOLERANCE, EXIT_VALIDATION, main


def read_table(path):
    """Parse the CSV output: (meta dict, column names, rows of strings)."""
    meta, header, rows = {}, None, []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = value.strip()
        elif header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    return meta, header, rows


def write_spec(tmp_path, payload, name="mech.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


RR_QUARTER = {"kind": "randomized_response", "p": 0.25}


class TestAnalyze:
    def test_leakage_free_channel_gives_zero_rows(self, tmp_path):
        spec = write_spec(tmp_path, {
            "kind": "finite", "x_labels": [0, 1], "y_labels": ["a", "b"],
            "rows": [[0.3, 0.7], [0.3, 0.7]]})
        out = tmp_path / "out.csv"
        assert main(["analyze", "--mechanism", spec, "--out", str(out)]) == EXIT_OK
        _, header, rows = read_table(out)
        assert header == ["y", "pml_nats", "argmax_label", "eps_max"]
        assert len(rows) == 2
        for row in rows:
            assert float(row[1]) == pytest.approx(0.0, abs=1e-12)

    def test_randomized_response_uniform_prior(self, tmp_path):
        spec = write_spec(tmp_path, RR_QUARTER)
        out = tmp_path / "out.csv"
        assert main(["analyze", "--mechanism", spec, "--out", str(out)]) == EXIT_OK
        _, _, rows = read_table(out)
        for row in rows:
            assert float(row[1]) == pytest.approx(math.log(1.5), abs=1e-12)
            assert float(row[3]) == pytest.approx(math.log(2.0), abs=1e-12)

    def test_identity_with_skewed_prior_attains_eps_max(self, tmp_path):
        spec = write_spec(tmp_path, {
            "kind": "finite", "x_labels": [0, 1], "y_labels": [0, 1],
            "rows": [[1.0, 0.0], [0.0, 1.0]], "prior": [0.25, 0.75]})
        out = tmp_path / "out.csv"
        assert main(["analyze", "--mechanism", spec, "--out", str(out)]) == EXIT_OK
        _, _, rows = read_table(out)
        # outcome 0 reveals the probability-0.25 secret
        assert float(rows[0][1]) == pytest.approx(math.log(4.0), abs=1e-12)
        assert rows[0][2] == "0"
        assert float(rows[1][1]) == pytest.approx(math.log(4.0 / 3.0), abs=1e-12)

    def test_outcome_selection(self, tmp_path):
        spec = write_spec(tmp_path, RR_QUARTER)
        out = tmp_path / "out.csv"
        assert main(["analyze", "--mechanism", spec, "--y", "1",
                     "--out", str(out)]) == EXIT_OK
        _, _, rows = read_table(out)
        assert len(rows) == 1 and rows[0][0] == "1"

    def test_unknown_outcome_is_validation_error(self, tmp_path, capsys):
        spec = write_spec(tmp_path, RR_QUARTER)
        assert main(["analyze", "--mechanism", spec, "--y", "7"]) == EXIT_VALIDATION
        assert "error:" in capsys.readouterr().err

    def test_laplace_spec_with_y_grid(self, tmp_path):
        spec = write_spec(tmp_path, {
            "kind": "laplace", "scale": 10.0, "sensitivity": 1.0,
            "labels": [0, 1, 2, 3, 4], "centers": [0, 1, 2, 3, 4]})
        out = tmp_path / "out.csv"
        assert main(["analyze", "--mechanism", spec, "--y-grid", "0", "4", "9",
                     "--out", str(out)]) == EXIT_OK
        _, _, rows = read_table(out)
        assert len(rows) == 9
        for row in rows:
            assert 0.0 <= float(row[1]) <= math.log(5.0) + 1e-9

    def test_bad_row_mass_is_validation_error(self, tmp_path):
        spec = write_spec(tmp_path, {
            "kind": "finite", "x_labels": [0, 1], "y_labels": [0, 1],
            "rows": [[0.5, 0.4], [0.5, 0.5]]})
        assert main(["analyze", "--mechanism", spec]) == EXIT_VALIDATION


class TestThm3:
    def test_rows_are_sandwiched(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["thm3", "--n-range", "4", "256", "5",
                     "--out", str(out)]) == EXIT_OK
        _, header, rows = read_table(out)
        assert header == ["n", "lower_bound", "exact_pml", "enum_pml", "eps_max"]
        assert len(rows) == 5
        for row in rows:
            bound, exact, em = float(row[1]), float(row[2]), float(row[4])
            assert bound <= exact + 1e-12
            assert exact <= em + 1e-9
            assert em == pytest.approx(math.log(4.0), abs=1e-12)

    def test_single_n(self, tmp_path):
        out = tmp_path / "one.csv"
        assert main(["thm3", "--n", "16", "--epsilon", "1.0", "--y", "-0.3",
                     "--out", str(out)]) == EXIT_OK
        meta, _, rows = read_table(out)
        assert len(rows) == 1 and rows[0][0] == "16"
        assert meta["epsilon"] == "1"

    def test_svg_written(self, tmp_path):
        out = tmp_path / "sweep.csv"
        svg = tmp_path / "sweep.svg"
        assert main(["thm3", "--n-range", "4", "64", "4", "--out", str(out),
                     "--svg", str(svg)]) == EXIT_OK
        text = svg.read_text()
        assert text.startswith("<svg")
        assert "eps_max" in text

    def test_polynomial_eta(self, tmp_path):
        out = tmp_path / "poly.csv"
        assert main(["thm3", "--eta-poly", "1.0", "1.0", "--n-range", "16", "256", "3",
                     "--out", str(out)]) == EXIT_OK
        _, _, rows = read_table(out)
        for row in rows:
            assert float(row[1]) <= float(row[2]) + 1e-12


class TestBob:
    def test_default_run(self, tmp_path):
        out = tmp_path / "bob.csv"
        assert main(["bob", "--out", str(out)]) == EXIT_OK
        meta, header, rows = read_table(out)
        assert header == ["y", "pml_nats", "eps_max"]
        assert float(meta["dp-level"]) == pytest.approx(0.1)
        for row in rows:
            assert float(row[1]) <= math.log(5.0) + 1e-9

    def test_pml_at_center(self, tmp_path):
        out = tmp_path / "bob.csv"
        assert main(["bob", "--y-grid", "30000", "30000", "1",
                     "--out", str(out)]) == EXIT_OK
        _, _, rows = read_table(out)
        assert float(rows[0][1]) == pytest.approx(math.log(5.0), abs=1e-6)


class TestOracle:
    def test_small_run_passes(self, capsys):
        code = main(["oracle", "--seed", "7", "--achievability-trials", "20",
                     "--gain-trials", "50", "--kernel-trials", "50"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "PASS" in out

    def test_zero_trials_is_validation_error(self, capsys):
        assert main(["oracle", "--gain-trials", "0"]) == EXIT_VALIDATION
        assert "empty trial set" in capsys.readouterr().err

    def test_fixed_channel(self, tmp_path, capsys):
        spec = write_spec(tmp_path, RR_QUARTER)
        code = main(["oracle", "--mechanism", spec, "--seed", "1",
                     "--achievability-trials", "20", "--gain-trials", "50",
                     "--kernel-trials", "50"])
        assert code == EXIT_OK
        assert "PASS" in capsys.readouterr().out


class TestDpCheck:
    def test_randomized_response_level(self, tmp_path, capsys):
        spec = write_spec(tmp_path, RR_QUARTER)
        assert main(["dp-check", "--mechanism", spec]) == EXIT_OK
        assert f"{math.log(3.0):.12g}" in capsys.readouterr().out

    def test_target_met(self, tmp_path, capsys):
        spec = write_spec(tmp_path, RR_QUARTER)
        assert main(["dp-check", "--mechanism", spec, "--target", "1.2"]) == EXIT_OK
        assert "meets" in capsys.readouterr().out

    def test_target_exceeded(self, tmp_path, capsys):
        spec = write_spec(tmp_path, RR_QUARTER)
        assert main(["dp-check", "--mechanism", spec,
                     "--target", "1.0"]) == EXIT_TOLERANCE
        assert "exceeds" in capsys.readouterr().out

    def test_laplace_spec(self, tmp_path, capsys):
        spec = write_spec(tmp_path, {"kind": "laplace", "scale": 10.0,
                                     "sensitivity": 1.0, "labels": [0, 1],
                                     "centers": [0.0, 1.0]})
        assert main(["dp-check", "--mechanism", spec, "--target", "0.1"]) == EXIT_OK


class TestConfigAndReproducibility:
    def test_reproducible_output_is_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["thm3", "--n-range", "4", "64", "4", "--reproducible"]
        assert main(argv + ["--out", str(a)]) == EXIT_OK
        assert main(argv + ["--out", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        assert b"generated-at" not in a.read_bytes()

    def test_timestamp_present_without_flag(self, tmp_path):
        out = tmp_path / "t.csv"
        assert main(["thm3", "--n", "8", "--out", str(out)]) == EXIT_OK
        assert "generated-at" in out.read_text()

    def test_config_overridden_by_flag(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"n": 8, "epsilon": 0.5}))
        out = tmp_path / "out.csv"
        assert main(["thm3", "--config", str(cfg), "--n", "16",
                     "--out", str(out)]) == EXIT_OK
        meta, _, rows = read_table(out)
        assert rows[0][0] == "16"  # flag wins
        assert meta["epsilon"] == "0.5"  # config fills the gap

    def test_unknown_config_field_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert main(["thm3", "--config", str(cfg), "--n", "8"]) == EXIT_VALIDATION
        assert "unknown config field" in capsys.readouterr().err

    def test_malformed_config_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("[1, 2]")
        assert main(["thm3", "--config", str(cfg), "--n", "8"]) == EXIT_VALIDATION

    def test_missing_mechanism_file(self, tmp_path):
        assert main(["analyze", "--mechanism",
                     str(tmp_path / "nope.json")]) == EXIT_VALIDATION
