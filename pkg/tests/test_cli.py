import json
import math

import numpy as np
import pytest

from maglab import SpaceSpec, generate
from maglab.cli import run


@pytest.fixture
def two_point_csv(tmp_path):
    path = tmp_path / "two_points_d1.csv"
    np.savetxt(path, [[0.0, 1.0], [1.0, 0.0]], delimiter=",")
    return str(path)


@pytest.fixture
def k32_small_csv(tmp_path):
    space = generate(SpaceSpec("complete_bipartite", {"m": 3, "n": 2, "r": 0.3}))
    path = tmp_path / "k32_r0.3.csv"
    np.savetxt(path, space.dist, delimiter=",")
    return str(path)


@pytest.fixture
def k32_spec_json(tmp_path):
    spec = SpaceSpec("complete_bipartite", {"m": 3, "n": 2, "r": 1.0})
    path = tmp_path / "k32_r1.json"
    path.write_text(spec.to_json())
    return str(path)


class TestMagnitudeCommand:
    def test_two_point_value(self, two_point_csv, capsys):
        result = run(["magnitude", "--matrix", two_point_csv])
        assert result.exit_code == 0
        out = capsys.readouterr().out
        assert f"{2.0 / (1.0 + math.exp(-1.0)):.6f}"[:8] in out

    def test_indefinite_matrix_exits_one(self, k32_small_csv, capsys):
        result = run(["magnitude", "--matrix", k32_small_csv])
        assert result.exit_code == 1
        err = capsys.readouterr().err
        assert "NotPositiveDefinite" in err
        assert "lambda_min" in err

    def test_json_report_complete(self, two_point_csv, tmp_path, capsys):
        out = tmp_path / "report.json"
        result = run(["magnitude", "--matrix", two_point_csv, "--json", str(out)])
        assert result.exit_code == 0
        payload = json.loads(out.read_text())
        assert set(payload) >= {
            "magnitude", "weighting", "residual", "positively_weighted", "diagnostics",
        }
        assert payload["magnitude"] == pytest.approx(2.0 / (1.0 + math.exp(-1.0)))


class TestNegtypeCommand:
    def test_k32_spec(self, k32_spec_json, capsys):
        result = run(["negtype", "--spec", k32_spec_json])
        assert result.exit_code == 0
        out = capsys.readouterr().out
        assert "negative_type: false" in out
        assert "NotStablyPD" in out


class TestDiversityCommand:
    def test_two_point(self, two_point_csv, capsys):
        result = run(["diversity", "--matrix", two_point_csv])
        assert result.exit_code == 0
        assert "support 2" in capsys.readouterr().out


class TestSweepCommand:
    def test_log_grid_and_csv(self, k32_spec_json, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        result = run([
            "sweep", "--spec", k32_spec_json,
            "--scales", "0.25:1:3log", "--csv", str(out),
        ])
        assert result.exit_code == 0
        rows = out.read_text().strip().splitlines()
        assert len(rows) == 4
        assert "Indefinite" in rows[1]


class TestValidateCommand:
    def test_good_matrix(self, two_point_csv, capsys):
        assert run(["validate", two_point_csv]).exit_code == 0

    def test_bad_matrix(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        np.savetxt(path, [[0, 1, 3], [1, 0, 1], [3, 1, 0]], delimiter=",")
        assert run(["validate", str(path)]).exit_code == 1


class TestApproxCommand:
    def test_interval_study(self, tmp_path, capsys):
        out = tmp_path / "study.json"
        result = run([
            "approx", "--family", "interval", "--length", "2.0",
            "--levels", "11,51,201", "--json", str(out),
        ])
        assert result.exit_code == 0
        payload = json.loads(out.read_text())
        assert payload["extrapolated_limit"] == pytest.approx(2.0, abs=5e-3)


class TestFourierCommand:
    def test_gamma_hat(self, capsys):
        result = run(["fourier", "--p", "1.0"])
        assert result.exit_code == 0
        assert "positive True" in capsys.readouterr().out

    def test_upper_bound(self, capsys):
        result = run(["fourier", "--p", "2.0", "--upper-bound", "--ell", "2.0"])
        assert result.exit_code == 0
        assert "upper bound" in capsys.readouterr().out


class TestExperimentCommand:
    def test_product_counterexample(self, capsys):
        result = run(["experiment", "product-counterexample"])
        assert result.exit_code == 0
        assert "NotStablyPD" in capsys.readouterr().out

    def test_witness_search_zero_budget(self, capsys):
        result = run([
            "experiment", "witness-search", "--p", "inf", "--n", "3",
            "--budget", "0",
        ])
        assert result.exit_code == 0
        assert "no witness" in capsys.readouterr().out


class TestUsageErrors:
    def test_unknown_command(self, capsys):
        assert run(["frobnicate"]).exit_code == 2

    def test_missing_source(self, capsys):
        assert run(["magnitude"]).exit_code == 2

    def test_bad_scales(self, k32_spec_json, capsys):
        assert run(["sweep", "--spec", k32_spec_json, "--scales", "nope"]).exit_code == 2
