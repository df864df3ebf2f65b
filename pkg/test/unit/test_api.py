"""Tests for the experiment drivers behind the subcommands."""

import math
import os

import numpy as np
import pytest

from ns2d_bdf2 import api
from ns2d_bdf2.api.converge import observed_orders, steps_for
from ns2d_bdf2.api.scan import monotonicity_findings
from ns2d_bdf2.api.soak import stability_parameters
from ns2d_bdf2.api.stationary import ConvergenceReport
from ns2d_bdf2.api.util import BLOWUP, STABLE, read_csv
from ns2d_bdf2.api.wente_probe import relative_spread
from ns2d_bdf2.averaging import Estimate
from ns2d_bdf2.config import parse_config, parse_manifest
from ns2d_bdf2.exceptions import ConfigError, ParameterError
from ns2d_bdf2.norms import g_equivalence_constants, sobolev_norm
from ns2d_bdf2.snapshot import checkpoint_read


def config(tmp_path, name="run", **overrides):
    values = {"N": "16", "nu": "0.05", "k": "1e-2", "burn_in": "0", "batch_size": "5", "basis_modes": "1:1"}
    values.update({key: str(value) for key, value in overrides.items()})
    values["out_dir"] = str(tmp_path / name)
    return parse_config("", values)


def turbulent(tmp_path, name="run", **overrides):
    params = {"forcing": "kolmogorov", "forcing_kf": 2, "ic": "random", "seed": 3}
    params.update(overrides)
    return config(tmp_path, name, **params)


class TestRunExperiment(object):
    def test_outputs(self, tmp_path):
        rc = turbulent(tmp_path, steps=30, checkpoint_every=10, spectrum_every=10)
        report = api.run_experiment(rc)
        out = tmp_path / "run"
        assert report.final_step == 30
        rows = read_csv(str(out / "timeseries.csv"))
        assert [int(r["step"]) for r in rows] == list(range(1, 31))
        assert list(rows[0])[-2:] == ["cos_1_1", "sin_1_1"]
        assert {int(r["step"]) for r in read_csv(str(out / "spectrum.csv"))} == {10, 20, 30}
        assert sorted(p.name for p in out.glob("checkpoint_*.v2df")) == [
            "checkpoint_000000010.v2df", "checkpoint_000000020.v2df", "checkpoint_000000030.v2df",
        ]
        manifest = parse_manifest((out / "manifest.txt").read_text())
        assert manifest["N"] == "16"
        assert "wall_time" in manifest
        stats = parse_manifest((out / "stats.txt").read_text())
        assert stats["samples"] == "30"
        assert int(stats["apriori_l2_checked"]) == 29

    def test_resume_appends_and_reproduces(self, tmp_path):
        api.run_experiment(turbulent(tmp_path, "a", steps=20, checkpoint_every=10, spectrum_every=10))
        checkpoint = str(tmp_path / "a" / "checkpoint_000000010.v2df")
        assert checkpoint_read(checkpoint).step == 10
        resumed = api.run_experiment(
            turbulent(tmp_path, "a", steps=40, spectrum_every=10), resume_path=checkpoint
        )
        straight = api.run_experiment(turbulent(tmp_path, "b", steps=40))
        assert np.array_equal(resumed.final_omega.coeffs, straight.final_omega.coeffs)
        steps = [int(r["step"]) for r in read_csv(str(tmp_path / "a" / "timeseries.csv"))]
        assert steps == list(range(1, 41))
        spectrum = [int(r["step"]) for r in read_csv(str(tmp_path / "a" / "spectrum.csv"))]
        assert sorted(set(spectrum)) == [10, 20, 30, 40]
        assert len({spectrum.count(step) for step in (10, 20, 30, 40)}) == 1

    def test_bad_configuration(self, tmp_path):
        with pytest.raises(ConfigError):
            api.run_experiment(config(tmp_path, bootstrap="exact", ic="random"))


class TestSoak(object):
    def test_steady_state_keeps_every_invariant(self, tmp_path):
        rc = config(tmp_path, forcing="taylor_green", ic="taylor_green", nu=0.1, steps=50)
        report = api.soak(rc)
        stability = report.outputs["stability"]
        assert stability["findings"] == []
        assert stability["max_ball_ratio"] <= 1.0
        summary = parse_manifest((tmp_path / "run" / "soak.txt").read_text())
        assert float(summary["M0"]) > 0
        assert float(summary["k0"]) > 0
        assert float(summary["M0_l2"]) >= float(summary["M0"])
        assert float(summary["k0_l2"]) <= float(summary["k0"])

    def test_stability_parameters_for_both_radii(self, tmp_path):
        rc = turbulent(tmp_path, ic_amplitude=50.0)
        cfg = rc.solver_config()
        omega0 = rc.initial_field()
        params = stability_parameters(cfg, omega0, cw=2.0)
        c_l, c_u = g_equivalence_constants(cfg.mu)
        v0_l2 = math.sqrt(2.0) * sobolev_norm(omega0, 0)
        assert params.m0 == max(params.v0_gnorm, params.rho0)
        assert params.m0_alt == pytest.approx(max(v0_l2 / math.sqrt(c_l), params.rho0), rel=1e-14)
        assert params.m0_alt >= params.m0 * (1 - 1e-14)
        assert params.k0_alt == pytest.approx(cfg.nu / (50.0 * 4.0 * c_u * params.m0_alt ** 2), rel=1e-14)
        assert params.k0_alt <= params.k0 * (1 + 1e-14)

    def test_rejects_large_nu_k(self, tmp_path):
        with pytest.raises(ConfigError):
            api.soak(config(tmp_path, nu=2.0, k=1.0, steps=2))


class TestScan(object):
    def test_grid_and_files(self, tmp_path):
        rc = config(tmp_path, scan_nu="0.1,0.05", scan_k="1e-2,5e-3", steps=10)
        rows, findings = api.scan(rc)
        assert [(row["nu"], row["k"]) for row in rows] == [(0.1, 1e-2), (0.1, 5e-3), (0.05, 1e-2), (0.05, 5e-3)]
        assert all(row["status"] == STABLE for row in rows)
        assert findings == []
        assert len(read_csv(str(tmp_path / "run" / "scan.csv"))) == 4
        assert os.path.exists(str(tmp_path / "run" / "cell_nu0.1_k0.01.csv"))

    def test_monotonicity_findings(self):
        rows = [
            {"nu": 0.1, "k": 0.4, "status": STABLE},
            {"nu": 0.1, "k": 0.1, "status": BLOWUP},
            {"nu": 0.1, "k": 0.2, "status": STABLE},
            {"nu": 0.05, "k": 0.1, "status": STABLE},
            {"nu": 0.05, "k": 0.2, "status": BLOWUP},
        ]
        findings = monotonicity_findings(rows)
        assert len(findings) == 2
        assert all(finding.startswith("nu=0.1:") for finding in findings)


class TestConverge(object):
    def test_observed_orders(self):
        orders = observed_orders([0.2, 0.1, 0.05], [4e-4, 1e-4, 0.0])
        assert orders[0] is None
        assert orders[1] == pytest.approx(2.0)
        assert orders[2] is None

    @pytest.mark.parametrize("t_end, k", [(1.0, 0.3), (0.01, 0.01)])
    def test_steps_for(self, t_end, k):
        with pytest.raises(ConfigError):
            steps_for(t_end, k)

    def test_manufactured_order(self, tmp_path):
        rc = config(
            tmp_path, nu=0.1, ic="manufactured", forcing="manufactured",
            converge_k="2e-2,1e-2,5e-3", t_end=0.4,
        )
        rows = api.converge(rc, ["galerkin", "gear"])
        assert len(rows) == 6
        for row in rows:
            if row["order"] != "":
                assert row["order"] == pytest.approx(2.0, abs=0.2)
        assert len(read_csv(str(tmp_path / "run" / "converge.csv"))) == 6

    def test_reference_run_without_closed_form(self, tmp_path):
        rc = turbulent(tmp_path, converge_k="4e-2,2e-2,1e-2", t_end=0.4)
        rows = api.converge(rc)
        errors = [row["error"] for row in rows]
        assert errors[0] > errors[1] > errors[2] > 0


class TestWenteProbe(object):
    def test_fixed_band_is_grid_independent(self, tmp_path):
        rc = config(tmp_path, seed=1)
        rows = api.wente_probe(rc, grid_sizes=[32, 64], samples=3, variants=["L2_H1H2", "Hm1_H1H1"], kmax=8)
        assert [(row["variant"], row["N"]) for row in rows] == [
            ("L2_H1H2", 32), ("L2_H1H2", 64), ("Hm1_H1H1", 32), ("Hm1_H1H1", 64),
        ]
        assert all(row["kmax"] == 8 for row in rows)
        assert all(spread < 1e-10 for spread in relative_spread(rows).values())
        assert len(read_csv(str(tmp_path / "run" / "wente.csv"))) == 4

    def test_default_band_follows_the_grid(self, tmp_path):
        rc = config(tmp_path, seed=1)
        rows = api.wente_probe(rc, grid_sizes=[32, 64], samples=3, variants=["Hm1_H1H1"])
        assert [row["kmax"] for row in rows] == ["", ""]
        assert rows[0]["max_ratio"] != rows[1]["max_ratio"]
        assert all(row["max_ratio"] > 0 for row in rows)


def estimates(*means):
    return [Estimate(mean, mean - 0.01, mean + 0.01) for mean in means]


class TestStationary(object):
    def test_report_verdicts(self):
        report = ConvergenceReport(
            [0.04, 0.02, 0.01],
            {"energy": estimates(1.0, 1.5, 1.6), "enstrophy": estimates(1.0, 1.1, 1.5)},
            ["energy", "enstrophy"],
        )
        assert report.differences["energy"] == pytest.approx([0.5, 0.1])
        assert report.passed == {"energy": True, "enstrophy": False}
        assert not report.ok
        assert report.summary()["overall"] == "FAIL"
        assert [row["difference"] for row in report.rows()][:3] == ["", pytest.approx(0.5), pytest.approx(0.1)]

    def test_noise_inside_the_intervals_passes(self):
        report = ConvergenceReport([0.02, 0.01, 0.005], {"energy": estimates(1.0, 1.001, 1.0)}, ["energy"])
        assert report.ok

    def test_steady_state(self, tmp_path):
        rc = config(tmp_path, forcing="taylor_green", ic="taylor_green", nu=0.1, converge_k="2e-2,1e-2", t_end=0.4)
        report = api.stat_converge(rc)
        assert report.ok
        assert report.ks == [2e-2, 1e-2]
        summary = parse_manifest((tmp_path / "run" / "stat_converge.txt").read_text())
        assert summary["overall"] == "PASS"

    def test_taylor_green_decay_average(self, tmp_path):
        rc = config(tmp_path, ic="taylor_green", nu=0.1)
        horizon = 1.0
        configs = [rc.solver_config(k=k, steps=steps_for(horizon, k)) for k in (4e-2, 2e-2, 1e-2)]
        report = api.stationary_stat_convergence(
            configs, rc.initial_field(), names=["enstrophy"], batch_size=5
        )
        # (1/T) integral of pi^2/2 exp(-4 nu t) over [0, T]
        decay = 4 * rc.nu * horizon
        exact = np.pi ** 2 / 2 * (1 - np.exp(-decay)) / decay
        errors = [abs(est.mean - exact) for est in report.estimates["enstrophy"]]
        assert errors[0] > errors[1] > errors[2]
        assert all(math.log2(coarse / fine) >= 0.9 for coarse, fine in zip(errors, errors[1:]))
        assert errors[2] < 1e-2 * exact
        assert report.ok

    def test_family_must_share_the_horizon(self, tmp_path):
        rc = config(tmp_path)
        configs = [rc.solver_config(k=2e-2, steps=10), rc.solver_config(k=1e-2, steps=10)]
        with pytest.raises(ParameterError):
            api.stationary_stat_convergence(configs, rc.initial_field())


class TestAnalyze(object):
    def test_steady_run_passes(self, tmp_path):
        rc = config(tmp_path, forcing="taylor_green", ic="taylor_green", nu=0.1, steps=40)
        api.run_experiment(rc)
        summary = api.analyze(str(tmp_path / "run"))
        assert summary["balance_pass"] == "PASS"
        assert summary["envelope_pass"] == "PASS"
        assert summary["enstrophy_mean"] == pytest.approx(np.pi ** 2 / 2, rel=1e-12)
        assert summary["cos_1_1_mean"] == pytest.approx(-np.pi ** 2, rel=1e-12)
        assert len(read_csv(str(tmp_path / "run" / "envelope.csv"))) == 40

    def test_balance_residual_is_the_mean_integrand(self, tmp_path):
        api.run_experiment(turbulent(tmp_path, steps=30))
        summary = api.analyze(str(tmp_path / "run"))
        rows = read_csv(str(tmp_path / "run" / "timeseries.csv"))
        balance = [float(r["balance"]) for r in rows]
        dissipation = max(0.1 * float(r["palinstrophy"]) for r in rows)
        assert summary["balance_residual"] == pytest.approx(np.mean(balance), abs=1e-12 * dissipation)
        assert summary["balance_ci_low"] <= summary["balance_ci_high"]

    def test_compare(self, tmp_path):
        api.run_experiment(config(tmp_path, "a", forcing="taylor_green", ic="taylor_green", steps=20))
        api.run_experiment(config(tmp_path, "b", forcing="taylor_green", ic="taylor_green", steps=20))
        summary = api.analyze(str(tmp_path / "a"), compare=str(tmp_path / "b"))
        assert summary["compare_changes"] == 0
        assert (tmp_path / "a" / "analysis.txt").exists()

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(ConfigError):
            api.analyze(str(tmp_path))
