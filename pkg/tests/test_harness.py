import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from rpcqr.cli import main
from rpcqr.harness import (
    CSV_COLUMNS,
    ConfigError,
    ExperimentConfig,
    compare_cqr2,
    derive_seed,
    emit_csv,
    load_config,
    run_single,
    summarize_point,
    sweep_c,
    sweep_n,
)


def small_sweep_config(**overrides):
    base = dict(
        experiment="sweep_c", matrix_kind="worst_coherence", m=200, n=20,
        kappa=1e15, c_list=[40, 60], trials=3, master_seed=11,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfig:
    def test_validate_rejects_unknown_experiment(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(experiment="bogus").validate()

    def test_validate_rejects_c_below_n(self):
        with pytest.raises(ConfigError):
            small_sweep_config(c_list=[10]).validate()

    def test_validate_rejects_n_above_m(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(experiment="single", m=10, n=20).validate()

    def test_load_config_round_trip(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({
            "schema_version": 1, "experiment": "sweep_c", "m": 100, "n": 10,
            "c_list": [20, 30], "kappa": 1e6, "trials": 2, "master_seed": 5,
        }))
        cfg = load_config(path)
        assert cfg.m == 100 and cfg.c_list == [20, 30]

    def test_load_config_requires_schema_version(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"experiment": "single", "m": 10, "n": 2}))
        with pytest.raises(ConfigError):
            load_config(path)

    def test_load_config_rejects_unknown_keys(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"schema_version": 1,
                                    "experiment": "single", "n": 5,
                                    "samples": 3}))
        with pytest.raises(ConfigError):
            load_config(path)


class TestSeedDerivation:
    def test_stable(self):
        assert derive_seed(1, 2, 3, "rp") == derive_seed(1, 2, 3, "rp")

    def test_no_collisions_across_axes(self):
        seeds = {
            derive_seed(ms, p, t, meth)
            for ms in range(3) for p in range(4) for t in range(5)
            for meth in ("basic", "cqr2", "precond", "rp")
        }
        assert len(seeds) == 3 * 4 * 5 * 4


class TestRunSingle:
    def test_rp_on_singular_matrix(self):
        cfg = ExperimentConfig(experiment="single", m=500, n=50, kappa=1e15,
                               c=150, method="rp", master_seed=3)
        rec = run_single(cfg)
        assert not rec.breakdown
        assert rec.residual <= 1e-14
        assert rec.kappa_A1 is not None and rec.eta is not None

    def test_basic_on_orthonormal_input(self):
        cfg = ExperimentConfig(experiment="single", m=300, n=30, kappa=1.0,
                               matrix_kind="haar_rotated", method="basic",
                               master_seed=4)
        rec = run_single(cfg)
        assert rec.deviation <= 1e-14
        assert rec.c is None and rec.kappa_A1 is None and rec.eta is None

    def test_deterministic_modulo_wall_time(self):
        cfg = ExperimentConfig(experiment="single", m=200, n=20, kappa=1e10,
                               c=60, method="rp", master_seed=5)
        r1, r2 = run_single(cfg), run_single(cfg)
        assert r1.deviation == r2.deviation
        assert r1.residual == r2.residual
        assert r1.kappa_A1 == r2.kappa_A1
        assert r1.seed == r2.seed

    def test_basic_breakdown_recorded_not_raised(self):
        cfg = ExperimentConfig(experiment="single", m=400, n=40, kappa=1e15,
                               method="basic", master_seed=6)
        rec = run_single(cfg)
        assert rec.breakdown
        assert rec.deviation is None and rec.residual is None


class TestSweeps:
    def test_sweep_c_shapes(self):
        rows, summaries = sweep_c(small_sweep_config())
        assert len(rows) == 2 * 3
        assert len(summaries) == 2
        for s in summaries:
            t = s.stats["deviation"]
            assert t[0] <= t[2] <= t[1]  # min <= mean <= max

    def test_sweep_single_trial_min_equals_max(self):
        rows, summaries = sweep_c(small_sweep_config(trials=1))
        for s in summaries:
            t = s.stats["deviation"]
            assert t[0] == t[1] == t[2]

    def test_sweep_n_uses_3n_samples(self):
        cfg = ExperimentConfig(experiment="sweep_n", m=300, kappa=1e12,
                               n_list=[10, 20], trials=2, master_seed=7)
        rows, summaries = sweep_n(cfg)
        assert {r["c"] for r in rows} == {30, 60}
        est = [r["estimate_5_2"] for r in rows if not r["breakdown"]]
        kap = [r["kappa_A1"] for r in rows if not r["breakdown"]]
        u = 2.220446049250313e-16
        assert all(e == 4 * u * k for e, k in zip(est, kap))

    def test_compare_cqr2_pairs_methods(self):
        cfg = ExperimentConfig(experiment="compare_cqr2",
                               matrix_kind="haar_rotated", m=300, n=30,
                               kappa=1e5, c_list=[90], trials=2,
                               master_seed=8)
        rows, summaries = compare_cqr2(cfg)
        assert {r["method"] for r in rows} == {"rp", "cqr2"}
        assert len(rows) == 4
        assert {s.method for s in summaries} == {"rp", "cqr2"}

    def test_breakdowns_become_rows(self):
        cfg = ExperimentConfig(experiment="sweep_c", m=300, n=30,
                               kappa=1e15, c_list=[90], trials=2,
                               method="basic", master_seed=9)
        rows, summaries = sweep_c(cfg)
        assert len(rows) == 2
        assert all(r["breakdown"] for r in rows)
        assert all(r["deviation"] is None for r in rows)
        assert summaries[0].breakdown_count == 2


class TestEmitCsv:
    def test_schema_and_empty_cells(self, tmp_path):
        cfg = ExperimentConfig(experiment="single", m=100, n=10, kappa=1e15,
                               method="basic", master_seed=10)
        rec = run_single(cfg)
        from rpcqr.harness import single_rows

        path = tmp_path / "out.csv"
        emit_csv(single_rows(cfg, rec), path)
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        assert lines[0] == ",".join(CSV_COLUMNS)
        row = dict(zip(CSV_COLUMNS, lines[1].split(",")))
        assert row["method"] == "basic"
        assert row["c"] == "" and row["kappa_A1"] == "" and row["eta"] == ""
        assert row["breakdown"] in ("true", "false")

    def test_refuses_empty_table(self, tmp_path):
        with pytest.raises(ValueError):
            emit_csv([], tmp_path / "x.csv")

    def test_float_cells_round_trip(self, tmp_path):
        rows, _ = sweep_c(small_sweep_config(trials=1))
        path = tmp_path / "out.csv"
        emit_csv(rows, path)
        with open(path) as fh:
            parsed = list(csv.DictReader(fh))
        for raw, row in zip(parsed, rows):
            if row["deviation"] is not None:
                assert float(raw["deviation"]) == row["deviation"]


class TestCli:
    def test_single_runs(self, capsys):
        rc = main(["single", "--m", "200", "--n", "20", "--kappa", "1e10",
                   "--matrix", "worst", "--method", "rp", "--seed", "3"])
        assert rc == 0
        assert "deviation=" in capsys.readouterr().out

    def test_sweep_c_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        rc = main(["sweep-c", "--m", "200", "--n", "20", "--c", "40,60",
                   "--kappa", "1e12", "--trials", "2", "--seed", "1",
                   "--out", str(out)])
        assert rc == 0
        assert out.exists()
        with open(out) as fh:
            assert fh.readline().strip() == ",".join(CSV_COLUMNS)

    def test_config_error_exit_code(self, capsys):
        rc = main(["sweep-c", "--m", "100", "--n", "200", "--c", "300"])
        assert rc == 1

    def test_io_error_exit_code(self, tmp_path, capsys):
        rc = main(["sweep-c", "--m", "100", "--n", "10", "--c", "30",
                   "--trials", "1",
                   "--out", str(tmp_path / "no_dir" / "x.csv")])
        assert rc == 2

    def test_bounds_subcommand(self, capsys):
        rc = main(["bounds", "--eps", "1e-16", "--kappa-a1", "10",
                   "--eta", "2"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "ortho_bound=" in out and "assumption_ok=True" in out

    def test_breakdowns_do_not_affect_exit_code(self, tmp_path):
        out = tmp_path / "b.csv"
        rc = main(["sweep-c", "--m", "300", "--n", "30", "--c", "90",
                   "--kappa", "1e15", "--method", "basic", "--trials", "2",
                   "--seed", "2", "--out", str(out)])
        assert rc == 0

    def test_config_file_with_cli_override(self, tmp_path):
        cfgp = tmp_path / "cfg.json"
        cfgp.write_text(json.dumps({
            "schema_version": 1, "experiment": "sweep_c", "m": 150, "n": 15,
            "c_list": [30], "kappa": 1e8, "trials": 1, "master_seed": 4,
        }))
        out = tmp_path / "o.csv"
        rc = main(["sweep-c", "--config", str(cfgp), "--trials", "2",
                   "--out", str(out)])
        assert rc == 0
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 2  # CLI override wins


def _strip_wall_time(text):
    lines = text.splitlines()
    idx = lines[0].split(",").index("wall_time_s")
    return [",".join(v for i, v in enumerate(line.split(",")) if i != idx)
            for line in lines]


class TestDeterminism:
    def test_repeat_invocation_identical_modulo_wall_time(self, tmp_path):
        args = ["sweep-c", "--m", "300", "--n", "30", "--c", "60,90",
                "--kappa", "1e15", "--trials", "3", "--seed", "21"]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert _strip_wall_time(out1.read_text()) == \
            _strip_wall_time(out2.read_text())

    def test_subprocess_determinism(self, tmp_path):
        # Fresh interpreter each time, like a user at the shell.
        outs = []
        for name in ("x.csv", "y.csv"):
            out = tmp_path / name
            subprocess.run(
                [sys.executable, "-m", "rpcqr.cli", "single", "--m", "120",
                 "--n", "12", "--kappa", "1e10", "--seed", "9",
                 "--out", str(out)],
                check=True, capture_output=True,
            )
            outs.append(_strip_wall_time(out.read_text()))
        assert outs[0] == outs[1]
