"""Command-line surface: exit codes, CSV emission, and fallbacks."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math

import numpy as np
import pytest

from visco_impact.cli import (
    ANALYZE_HEADER,
    EXIT_DOMAIN,
    EXIT_IO,
    EXIT_OK,
    EXIT_PLASTIC,
    EXIT_VERIFY,
    SWEEP_ASYM_HEADER,
    SWEEP_HEADER,
    THREADS_ENV,
    VERIFY_HEADER,
    SweepSpec,
    cmd_verify,
    main,
    parse_sweep_arg,
    read_csv_rows,
)
from visco_impact.errors import DomainError, ParseError
from visco_impact.kelvin_voigt import kv_metrics
from visco_impact.models import KelvinVoigtParams, Trajectory
from visco_impact.standard_solid import (
    params_from_groups,
    params_near_maxwell,
    sls_metrics,
    sls_perturb_maxwell,
)

REFERENCE_LAYER = {
    "mu_s": 0.25e6,
    "lambda_s": 0.0,
    "kappa": 2e-15,
    "h": 1e-3,
    "a": 5e-3,
}


def _write_json(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def _parse_csv(text, expected_header):
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == expected_header
    return np.array([[float(v) for v in row] for row in rows[1:]])


class TestSweepSpec:
    def test_parse(self):
        spec = parse_sweep_arg("eta:0.1:0.9:5")
        assert spec == SweepSpec(param="eta", lo=0.1, hi=0.9, steps=5)
        assert np.array_equal(spec.grid(), np.linspace(0.1, 0.9, 5))

    def test_parse_errors(self):
        with pytest.raises(ParseError, match="param:lo:hi:steps"):
            parse_sweep_arg("eta:0.1:0.9")
        with pytest.raises(ParseError, match="malformed"):
            parse_sweep_arg("eta:lo:0.9:5")

    def test_domain_validation(self):
        with pytest.raises(DomainError, match="inside"):
            SweepSpec(param="eta", lo=0.0, hi=0.9, steps=5)
        with pytest.raises(DomainError, match="lo < hi"):
            SweepSpec(param="eta", lo=0.9, hi=0.1, steps=5)
        with pytest.raises(DomainError, match="at least 2"):
            SweepSpec(param="eta", lo=0.1, hi=0.9, steps=1)
        with pytest.raises(DomainError, match="unknown sweep parameter"):
            SweepSpec(param="xi", lo=0.1, hi=0.9, steps=5)
        with pytest.raises(DomainError, match="positive"):
            SweepSpec(param="Lambda", lo=-1.0, hi=1.0, steps=5)


class TestSimulate:
    def test_parallel_pair_trajectory(self, tmp_path, capsys):
        params = _write_json(tmp_path, "kv.json", {"m": 1.0, "k": 1.0, "b": 0.6, "v0": 1.0})
        out = tmp_path / "traj.csv"
        assert main(["simulate", "kv", "--params", params, "--out", str(out)]) == EXIT_OK
        err = capsys.readouterr().err
        assert "impact metrics" in err
        traj = Trajectory.from_csv(out)
        met = kv_metrics(KelvinVoigtParams(m=1.0, k=1.0, b=0.6, v0=1.0))
        assert traj.t_c == pytest.approx(met.t_c, rel=1e-15)
        assert abs(traj.F[-1]) < 1e-12 * met.F_M

    def test_dt_controls_sample_count(self, tmp_path):
        params = _write_json(tmp_path, "kv.json", {"m": 1.0, "k": 1.0, "b": 0.6, "v0": 1.0})
        out = tmp_path / "traj.csv"
        rc = main(["simulate", "kv", "--params", params, "--out", str(out), "--dt", "0.01"])
        assert rc == EXIT_OK
        met = kv_metrics(KelvinVoigtParams(m=1.0, k=1.0, b=0.6, v0=1.0))
        expected = math.ceil(met.t_c / 0.01) + 1
        assert Trajectory.from_csv(out).times.size == expected

    def test_weight_included_note(self, tmp_path, capsys):
        params = _write_json(
            tmp_path, "kv.json", {"m": 1.0, "k": 1.0, "b": 0.6, "v0": 1.0, "g": 0.01}
        )
        assert main(["simulate", "kv", "--params", params, "--gravity"]) == EXIT_OK
        assert "weight included" in capsys.readouterr().err

    def test_embedding_exits_plastic(self, tmp_path, capsys):
        """Unit parameters put the weight far beyond the rebound threshold."""
        params = _write_json(tmp_path, "mx.json", {"m": 1.0, "k": 1.0, "b": 1.0, "v0": 1.0})
        rc = main(["simulate", "maxwell", "--params", params, "--gravity"])
        assert rc == EXIT_PLASTIC
        assert "error:" in capsys.readouterr().err

    def test_three_element_fallback_note(self, tmp_path, capsys):
        """Inside the dead discriminant window the CLI integrates directly."""
        p = params_from_groups(0.316, 0.1)
        params = _write_json(
            tmp_path,
            "sls.json",
            {"m": p.m, "k1": p.k1, "k2": p.k2, "b": p.b, "v0": p.v0},
        )
        assert main(["simulate", "sls", "--params", params]) == EXIT_OK
        err = capsys.readouterr().err
        assert "closed form unavailable" in err
        assert "integrating directly" in err

    def test_missing_params_file(self, tmp_path, capsys):
        rc = main(["simulate", "kv", "--params", str(tmp_path / "absent.json")])
        assert rc == EXIT_IO
        assert "error:" in capsys.readouterr().err

    def test_unknown_key_rejected(self, tmp_path, capsys):
        params = _write_json(
            tmp_path, "kv.json", {"m": 1.0, "k": 1.0, "b": 0.6, "v0": 1.0, "c": 2.0}
        )
        assert main(["simulate", "kv", "--params", params]) == EXIT_IO
        assert "unknown keys" in capsys.readouterr().err


class TestSweep:
    def test_eta_sweep_stdout(self, capsys):
        assert main(["sweep", "--model", "kv", "--sweep", "eta:0.05:0.95:10"]) == EXIT_OK
        data = _parse_csv(capsys.readouterr().out, SWEEP_HEADER)
        assert data.shape == (10, len(SWEEP_HEADER))
        assert np.array_equal(data[:, 0], np.linspace(0.05, 0.95, 10))
        assert np.all(np.isfinite(data))

    def test_zeta_sweep_duration_formula(self, capsys):
        assert main(["sweep", "--model", "maxwell", "--sweep", "zeta:0.1:0.9:9"]) == EXIT_OK
        data = _parse_csv(capsys.readouterr().out, SWEEP_HEADER)
        zeta = data[:, 0]
        assert data[:, 1] == pytest.approx(math.pi / np.sqrt(1.0 - zeta**2), rel=1e-12)

    def test_lambda_sweep_dead_window(self, capsys):
        """Grid points with D <= 0 produce NaN rows and a domain exit."""
        rc = main(["sweep", "--model", "sls", "--sweep", "Lambda:0.30:0.33:7"])
        assert rc == EXIT_DOMAIN
        captured = capsys.readouterr()
        data = _parse_csv(captured.out, SWEEP_HEADER)
        dead = np.isnan(data[:, 1])
        assert dead.tolist() == [False, False, False, True, True, False, False]
        assert np.all(np.isfinite(data[~dead]))
        assert captured.err.count("skipped") == 2

    def test_rho_sweep_reports_expansion(self, capsys):
        assert main(["sweep", "--model", "sls", "--sweep", "rho:0.02:0.2:5"]) == EXIT_OK
        data = _parse_csv(capsys.readouterr().out, SWEEP_ASYM_HEADER)
        gap = np.abs(data[:, 1] - data[:, 7])
        assert np.all(np.isfinite(data))
        assert np.all(gap < 0.06)
        assert np.all(np.diff(gap) > 0.0)

    def test_rho_sweep_near_series_limit(self, tmp_path, capsys):
        """--params {"zeta": ...} switches the rho sweep to the series limit."""
        fixed = _write_json(tmp_path, "fixed.json", {"zeta": 0.3})
        rc = main(
            ["sweep", "--model", "sls", "--sweep", "rho:0.05:0.1:2", "--params", fixed]
        )
        assert rc == EXIT_OK
        data = _parse_csv(capsys.readouterr().out, SWEEP_ASYM_HEADER)
        for row in data:
            rho = row[0]
            met = sls_metrics(params_near_maxwell(0.3, rho))
            tc_asym, e_asym = sls_perturb_maxwell(0.3, rho)
            assert row[1] == pytest.approx(met.t_c, rel=1e-15)
            assert row[2] == pytest.approx(met.e_star, rel=1e-15)
            assert row[7] == pytest.approx(tc_asym, rel=1e-15)
            assert row[8] == pytest.approx(e_asym, rel=1e-15)

    def test_wrong_param_for_model(self, capsys):
        rc = main(["sweep", "--model", "kv", "--sweep", "zeta:0.1:0.9:5"])
        assert rc == EXIT_DOMAIN
        assert "sweeps one of" in capsys.readouterr().err

    def test_malformed_sweep_arg(self, capsys):
        assert main(["sweep", "--model", "kv", "--sweep", "eta:0.1:0.9"]) == EXIT_IO

    def test_out_file_matches_stdout(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        args = ["sweep", "--model", "kv", "--sweep", "eta:0.1:0.9:5"]
        assert main(args + ["--out", str(out)]) == EXIT_OK
        capsys.readouterr()
        assert main(args) == EXIT_OK
        stdout_rows = _parse_csv(capsys.readouterr().out, SWEEP_HEADER)
        file_rows = read_csv_rows(out, SWEEP_HEADER)
        assert np.array_equal(stdout_rows, file_rows)

    def test_read_csv_rows_header_check(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ParseError, match="expected header"):
            read_csv_rows(path, SWEEP_HEADER)


class TestVerify:
    def test_all_suites_pass(self, tmp_path, capsys):
        out = tmp_path / "verify.csv"
        assert main(["verify", "--out", str(out)]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 6
        assert all(": pass" in line for line in lines)
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == VERIFY_HEADER
        assert len(rows) == 7
        assert all(row[3] == "pass" for row in rows[1:])
        assert all(float(row[1]) <= float(row[2]) for row in rows[1:])

    def test_injected_failure_exits_4(self, capsys):
        suites = [("perturbed", lambda: (1.0, 1e-6))]
        rc = cmd_verify(argparse.Namespace(out=None), suites=suites)
        assert rc == EXIT_VERIFY
        assert "perturbed: FAIL" in capsys.readouterr().out


class TestBiphasic:
    def test_reduction_echo(self, tmp_path, capsys):
        params = _write_json(tmp_path, "layer.json", REFERENCE_LAYER)
        assert main(["biphasic", "--params", params, "--m", "0.1"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "k = 29296.9 N/m" in out
        assert "tau_R = 666.667 s" in out
        assert "tau_D = 1000 s" in out
        assert "usable window = 100 s" in out

    def test_trajectory_matches_series_pair_simulate(self, tmp_path, capsys):
        """Reducing then simulating equals simulating the reduced parameters."""
        from visco_impact.biphasic import BiphasicLayer, reduce_to_maxwell

        layer_path = _write_json(tmp_path, "layer.json", REFERENCE_LAYER)
        out_layer = tmp_path / "layer_traj.csv"
        rc = main(
            ["biphasic", "--params", layer_path, "--m", "0.1", "--v0", "1.2",
             "--out", str(out_layer)]
        )
        assert rc == EXIT_OK
        reduced = reduce_to_maxwell(BiphasicLayer(**REFERENCE_LAYER), m=0.1, v0=1.2)
        mx_path = _write_json(
            tmp_path, "mx.json",
            {"m": reduced.m, "k": reduced.k, "b": reduced.b, "v0": reduced.v0},
        )
        out_mx = tmp_path / "mx_traj.csv"
        assert main(["simulate", "maxwell", "--params", mx_path, "--out", str(out_mx)]) == EXIT_OK
        assert out_layer.read_text() == out_mx.read_text()

    def test_overdamped_layer_exits_plastic(self, tmp_path, capsys):
        """High permeability relaxes faster than the rebound can build."""
        layer = dict(REFERENCE_LAYER, kappa=1e-8)
        params = _write_json(tmp_path, "layer.json", layer)
        out = tmp_path / "traj.csv"
        rc = main(["biphasic", "--params", params, "--m", "0.1", "--out", str(out)])
        assert rc == EXIT_PLASTIC
        err = capsys.readouterr().err
        assert "no oscillatory rebound" in err
        assert "never returned to zero" in err

    def test_unknown_layer_key(self, tmp_path, capsys):
        params = _write_json(tmp_path, "layer.json", dict(REFERENCE_LAYER, phi=0.8))
        rc = main(["biphasic", "--params", params, "--m", "0.1"])
        assert rc == EXIT_IO
        assert "unknown keys" in capsys.readouterr().err


class TestAnalyze:
    def test_bundled_records(self, tmp_path, capsys):
        out = tmp_path / "records.csv"
        assert main(["analyze", "--out", str(out)]) == EXIT_OK
        stdout = capsys.readouterr().out
        assert "restitution-constant: FAIL" in stdout
        assert "strictly increasing" in stdout
        assert "energy lost" in stdout
        data = read_csv_rows(out, ANALYZE_HEADER)
        assert data.shape == (4, len(ANALYZE_HEADER))
        assert np.all(np.diff(data[:, 0]) > 0.0)
        assert np.all(data[:, 6] > 1.0)

    def test_explicit_table(self, tmp_path, capsys):
        from visco_impact.analysis import bundled_experiments_path

        copy = tmp_path / "table.csv"
        copy.write_text(bundled_experiments_path().read_text())
        assert main(["analyze", str(copy)]) == EXIT_OK

    def test_bad_table_exits_io(self, tmp_path, capsys):
        bad = tmp_path / "table.csv"
        bad.write_text("a,b\n1,2\n")
        assert main(["analyze", str(bad)]) == EXIT_IO
        assert "error:" in capsys.readouterr().err


class TestThreads:
    def test_env_honored(self, monkeypatch, capsys):
        monkeypatch.setenv(THREADS_ENV, "2")
        assert main(["sweep", "--model", "kv", "--sweep", "eta:0.1:0.9:5"]) == EXIT_OK
        data = _parse_csv(capsys.readouterr().out, SWEEP_HEADER)
        assert data.shape[0] == 5

    @pytest.mark.parametrize("value", ["abc", "0"])
    def test_env_invalid(self, monkeypatch, capsys, value):
        monkeypatch.setenv(THREADS_ENV, value)
        rc = main(["sweep", "--model", "kv", "--sweep", "eta:0.1:0.9:5"])
        assert rc == EXIT_IO
        assert "error:" in capsys.readouterr().err
