import json

import numpy as np
import pytest
from click.testing import CliRunner

from dfscreen.cli import load_csv, main
from dfscreen.exceptions import CsvError, DataError


@pytest.fixture
def runner():
    return CliRunner()


def write_csv(path, X, y, feature_names=None):
    p = X.shape[1]
    names = feature_names or [f"x{j + 1}" for j in range(p)]
    lines = [",".join(names + ["y"])]
    for row, yv in zip(X, y):
        lines.append(",".join(str(v) for v in row) + f",{yv}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def toy_dataset(seed=0, n=30, p=3):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    y = 2.0 * X[:, 1]
    return X, y


class TestLoadCsv:
    def test_round_trip(self, tmp_path):
        X, y = toy_dataset()
        path = tmp_path / "toy.csv"
        write_csv(path, X, y)
        data = load_csv(str(path), "y")
        assert data.feature_cols == ["x1", "x2", "x3"]
        assert np.allclose(data.X, X)
        assert np.allclose(data.y, y)

    def test_response_anywhere(self, tmp_path):
        path = tmp_path / "mid.csv"
        path.write_text("a,y,b\n1,2,3\n4,5,6\n", encoding="utf-8")
        data = load_csv(str(path), "y")
        assert data.feature_cols == ["a", "b"]
        assert np.allclose(data.X, [[1, 3], [4, 6]])
        assert np.allclose(data.y, [2, 5])

    def test_missing_cell_names_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,y\n1,2\n,3\n", encoding="utf-8")
        with pytest.raises(CsvError, match="row 3"):
            load_csv(str(path), "y")

    def test_short_row_names_row(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("a,b,y\n1,2,3\n4,5\n", encoding="utf-8")
        with pytest.raises(CsvError, match="row 3"):
            load_csv(str(path), "y")

    def test_non_numeric_cell(self, tmp_path):
        path = tmp_path / "text.csv"
        path.write_text("a,y\n1,2\nfoo,3\n", encoding="utf-8")
        with pytest.raises(CsvError, match="foo"):
            load_csv(str(path), "y")

    def test_unknown_response(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("a,b\n1,2\n3,4\n", encoding="utf-8")
        with pytest.raises(DataError, match="response"):
            load_csv(str(path), "z")


class TestCmdScreen:
    def test_exact_feature_selected(self, runner, tmp_path):
        X, y = toy_dataset()
        csv_path = tmp_path / "toy.csv"
        out_path = tmp_path / "report.json"
        write_csv(csv_path, X, y)
        result = runner.invoke(main, [
            "screen", "--input", str(csv_path), "--response", "y",
            "--link", "identity", "--c", "0.5", "--seed", "1",
            "--out", str(out_path),
        ])
        assert result.exit_code == 0, result.output
        report = json.loads(out_path.read_text())
        assert "x2" in report["selected"]["names"]
        assert report["c"] == 0.5

    def test_report_round_trip(self, runner, tmp_path):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((60, 10))
        y = 3.0 * X[:, 0] - 2.0 * X[:, 4] + rng.standard_normal(60)
        csv_path = tmp_path / "d.csv"
        out_path = tmp_path / "r.json"
        write_csv(csv_path, X, y)
        args = ["screen", "--input", str(csv_path), "--response", "y",
                "--seed", "5", "--out", str(out_path)]
        assert runner.invoke(main, args).exit_code == 0
        first = json.loads(out_path.read_text())
        assert runner.invoke(main, args).exit_code == 0
        second = json.loads(out_path.read_text())
        first.pop("elapsed_seconds")
        second.pop("elapsed_seconds")
        assert first == second
        assert first["selected"]["indices"] == first["path"]["order"][
            : len(first["selected"]["indices"])
        ]
        assert set(first["selected"]["names"]) >= {"x1", "x5"}

    def test_missing_cell_exits_2(self, runner, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,y\n1,2,3\n4,,6\n" + "7,8,9\n" * 28, encoding="utf-8")
        result = runner.invoke(main, [
            "screen", "--input", str(path), "--response", "y", "--c", "1.0",
        ])
        assert result.exit_code == 2
        assert "row 3" in result.output

    def test_nonexistent_file_exits_2(self, runner, tmp_path):
        result = runner.invoke(main, [
            "screen", "--input", str(tmp_path / "nope.csv"), "--response", "y",
        ])
        assert result.exit_code == 2

    def test_bad_link_exits_3(self, runner, tmp_path):
        X, y = toy_dataset()
        path = tmp_path / "toy.csv"
        write_csv(path, X, y)
        result = runner.invoke(main, [
            "screen", "--input", str(path), "--response", "y", "--link", "probit",
        ])
        assert result.exit_code == 3

    def test_invalid_logit_response_exits_3(self, runner, tmp_path):
        X, y = toy_dataset()  # continuous y, invalid for logit
        path = tmp_path / "toy.csv"
        write_csv(path, X, y)
        result = runner.invoke(main, [
            "screen", "--input", str(path), "--response", "y",
            "--link", "logit", "--c", "1.0",
        ])
        assert result.exit_code == 3


def simulate_config(tmp_path, **overrides):
    cfg = {
        "scenario": "ar1",
        "n": 60,
        "p": 30,
        "rho": 0.0,
        "link": "identity",
        "beta": [3.0, -3.0, 2.5],
        "replications": 2,
        "seed": 17,
        "methods": ["FBIC", "SIS_TOPK"],
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return path


class TestCmdSimulate:
    def test_writes_metrics_csv(self, runner, tmp_path):
        cfg = simulate_config(tmp_path)
        out = tmp_path / "metrics.csv"
        result = runner.invoke(main, [
            "simulate", "--config", str(cfg), "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "method,metric,mean,sd"
        assert len(lines) == 1 + 2 * 3  # two methods x three metrics

    def test_byte_identical_reruns(self, runner, tmp_path):
        cfg = simulate_config(tmp_path)
        out1, out2 = tmp_path / "m1.csv", tmp_path / "m2.csv"
        assert runner.invoke(main, ["simulate", "--config", str(cfg),
                                    "--out", str(out1)]).exit_code == 0
        assert runner.invoke(main, ["simulate", "--config", str(cfg),
                                    "--out", str(out2)]).exit_code == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_single_replication_sd_zero(self, runner, tmp_path):
        cfg = simulate_config(tmp_path, replications=1, methods=["FBIC"])
        out = tmp_path / "m.csv"
        assert runner.invoke(main, ["simulate", "--config", str(cfg),
                                    "--out", str(out)]).exit_code == 0
        for line in out.read_text().strip().splitlines()[1:]:
            assert line.endswith(",0.000000")

    def test_bad_config_json_exits_2(self, runner, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        result = runner.invoke(main, [
            "simulate", "--config", str(path), "--out", str(tmp_path / "m.csv"),
        ])
        assert result.exit_code == 2

    def test_missing_field_exits_3(self, runner, tmp_path):
        path = tmp_path / "incomplete.json"
        path.write_text(json.dumps({"scenario": "ar1"}), encoding="utf-8")
        result = runner.invoke(main, [
            "simulate", "--config", str(path), "--out", str(tmp_path / "m.csv"),
        ])
        assert result.exit_code == 3

    def test_replication_failure_exits_4(self, runner, tmp_path):
        # 22 rows cannot support 10-fold cross-validation inside TDF
        cfg = simulate_config(tmp_path, n=22, methods=["TDF"])
        result = runner.invoke(main, [
            "simulate", "--config", str(cfg), "--out", str(tmp_path / "m.csv"),
        ])
        assert result.exit_code == 4
        assert "seed" in result.output

    def test_dump_round_trip_through_screen(self, runner, tmp_path):
        cfg = simulate_config(tmp_path, replications=1, methods=["FBIC"], seed=23)
        dump_dir = tmp_path / "dumps"
        out = tmp_path / "m.csv"
        assert runner.invoke(main, [
            "simulate", "--config", str(cfg), "--out", str(out),
            "--dump", str(dump_dir),
        ]).exit_code == 0
        dumped = sorted(dump_dir.glob("rep*.csv"))
        assert len(dumped) == 1

        report_path = tmp_path / "report.json"
        result = runner.invoke(main, [
            "screen", "--input", str(dumped[0]), "--response", "y",
            "--standardize", "off", "--seed", "2", "--out", str(report_path),
        ])
        assert result.exit_code == 0, result.output
        report = json.loads(report_path.read_text())
        assert {"x1", "x2", "x3"} <= set(report["selected"]["names"])


class TestCmdPredictSplit:
    def test_noiseless_linear_fit(self, runner, tmp_path):
        rng = np.random.default_rng(7)
        X = rng.standard_normal((60, 5))
        y = 3.0 * X[:, 0] - 2.0 * X[:, 1]
        path = tmp_path / "clean.csv"
        write_csv(path, X, y)
        out = tmp_path / "summary.csv"
        result = runner.invoke(main, [
            "predict-split", "--input", str(path), "--response", "y",
            "--method", "tdf", "--c", "0.5", "--repeats", "5",
            "--seed", "3", "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        stats = dict(
            line.split(",") for line in out.read_text().strip().splitlines()[1:]
        )
        assert float(stats["error_mean"]) <= 1e-6

    def test_pure_noise_error_near_variance(self, runner, tmp_path):
        rng = np.random.default_rng(8)
        X = rng.standard_normal((100, 30))
        y = rng.standard_normal(100)
        path = tmp_path / "noise.csv"
        write_csv(path, X, y)
        out = tmp_path / "summary.csv"
        result = runner.invoke(main, [
            "predict-split", "--input", str(path), "--response", "y",
            "--method", "fbic", "--repeats", "100", "--seed", "4",
            "--out", str(out),
        ])
        assert result.exit_code == 0, result.output
        stats = dict(
            line.split(",") for line in out.read_text().strip().splitlines()[1:]
        )
        var_y = float(np.var(y, ddof=1))
        assert abs(float(stats["error_mean"]) - var_y) <= 0.15 * var_y

    def test_deterministic_given_seed(self, runner, tmp_path):
        rng = np.random.default_rng(9)
        X = rng.standard_normal((50, 8))
        y = X[:, 2] + rng.standard_normal(50)
        path = tmp_path / "d.csv"
        write_csv(path, X, y)
        outs = []
        for name in ("s1.csv", "s2.csv"):
            out = tmp_path / name
            assert runner.invoke(main, [
                "predict-split", "--input", str(path), "--response", "y",
                "--method", "sis", "--repeats", "10", "--seed", "11",
                "--out", str(out),
            ]).exit_code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_small_sample_exits_3(self, runner, tmp_path):
        rng = np.random.default_rng(10)
        X = rng.standard_normal((30, 4))
        y = rng.standard_normal(30)
        path = tmp_path / "small.csv"
        write_csv(path, X, y)
        result = runner.invoke(main, [
            "predict-split", "--input", str(path), "--response", "y",
        ])
        assert result.exit_code == 3
        assert "42" in result.output
