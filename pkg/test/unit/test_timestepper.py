"""Tests for the two-step update, its bootstrap and the step size bound."""

import math

import numpy as np
import pytest

from ns2d_bdf2.exceptions import GridMismatchError, NumericalBlowupError, ParameterError
from ns2d_bdf2.forcing import ForcingSpec, ManufacturedSolution, taylor_green_forcing
from ns2d_bdf2.initial import taylor_green_vorticity
from ns2d_bdf2.norms import StatePair, sobolev_norm
from ns2d_bdf2.solver import run
from ns2d_bdf2.spectral import Grid, SpectralField
from ns2d_bdf2.timestepper import (
    Bootstrap,
    Nonlinearity,
    SolverConfig,
    bdf2ab2_step,
    bootstrap_first_step,
    extrapolated_gear_step,
    max_stable_timestep,
    step_once,
)


def relative_error(field, reference):
    return sobolev_norm(field - reference, 0) / sobolev_norm(reference, 0)


class TestSolverConfig(object):
    @pytest.mark.parametrize("kwargs", [{"nu": 0.0}, {"k": -1e-3}, {"steps": -1}, {"cw_estimate": 0.0}])
    def test_rejects_bad_parameters(self, grid16, kwargs):
        params = {"nu": 0.1, "k": 1e-3, "grid": grid16}
        params.update(kwargs)
        with pytest.raises(ParameterError):
            SolverConfig(**params)

    def test_exact_bootstrap_needs_a_solution(self, grid16):
        with pytest.raises(ParameterError):
            SolverConfig(0.1, 1e-3, grid16, bootstrap=Bootstrap.EXACT)

    def test_forcing_on_another_grid(self, grid16, grid32):
        with pytest.raises(GridMismatchError):
            SolverConfig(0.1, 1e-3, grid16, forcing=ForcingSpec.zero(grid32))

    def test_stability_regime(self, grid16):
        with pytest.raises(ParameterError):
            SolverConfig(2.0, 1.0, grid16).check_stability_regime()
        SolverConfig(1.0, 1.0, grid16).check_stability_regime()

    def test_enum_values(self, grid16):
        cfg = SolverConfig(0.1, 1e-3, grid16, nonlinearity="gear", bootstrap="euler")
        assert cfg.nonlinearity is Nonlinearity.GEAR
        assert cfg.mu == pytest.approx(1e-4)


class TestSingleSteps(object):
    nu = 0.1
    k = 1e-2

    def test_euler_bootstrap_decay_factor(self, grid16):
        cfg = SolverConfig(self.nu, self.k, grid16)
        omega0 = taylor_green_vorticity(grid16)
        pair = bootstrap_first_step(omega0, cfg)
        factor = 1.0 / (1.0 + 2.0 * self.nu * self.k)
        assert pair.older is omega0
        assert np.allclose(pair.newer.coeffs, factor * omega0.coeffs, atol=1e-16)

    def test_bdf2_decay_factor_from_a_constant_pair(self, grid16):
        cfg = SolverConfig(self.nu, self.k, grid16)
        omega0 = taylor_green_vorticity(grid16)
        new = bdf2ab2_step(StatePair(omega0, omega0), SpectralField.zeros(grid16), cfg)
        factor = 3.0 / (3.0 + 4.0 * self.nu * self.k)
        assert np.allclose(new.coeffs, factor * omega0.coeffs, atol=1e-16)

    def test_gear_agrees_on_a_linear_solution(self, grid16):
        cfg = SolverConfig(self.nu, self.k, grid16)
        omega0 = taylor_green_vorticity(grid16)
        pair = bootstrap_first_step(omega0, cfg)
        zero = SpectralField.zeros(grid16)
        a = bdf2ab2_step(pair, zero, cfg)
        b = extrapolated_gear_step(pair, zero, cfg)
        assert np.allclose(a.coeffs, b.coeffs, atol=1e-16)

    def test_steady_taylor_green_is_a_fixed_point(self, grid16):
        forcing = taylor_green_forcing(grid16, self.nu)
        cfg = SolverConfig(self.nu, self.k, grid16, forcing=forcing, steps=50)
        omega0 = taylor_green_vorticity(grid16)
        report = run(cfg, omega0=omega0)
        assert np.abs(report.final_omega.coeffs - omega0.coeffs).max() < 1e-14

    def test_non_finite_right_hand_side(self, grid16):
        cfg = SolverConfig(self.nu, self.k, grid16)
        coeffs = np.zeros((16, 16), dtype=complex)
        coeffs[1, 1] = np.nan
        bad = SpectralField(grid16, coeffs)
        with pytest.raises(NumericalBlowupError) as err:
            step_once(StatePair(bad, bad), cfg, 7)
        assert err.value.step == 7

    def test_grid_mismatch(self, grid16, grid32):
        cfg = SolverConfig(self.nu, self.k, grid16)
        with pytest.raises(GridMismatchError):
            bootstrap_first_step(taylor_green_vorticity(grid32), cfg)


def test_max_stable_timestep():
    assert max_stable_timestep(0.1, 1.0, 2.0, 0.5) == pytest.approx(0.1 / (50 * 2.0 * 0.25))
    with pytest.raises(ParameterError):
        max_stable_timestep(0.1, 0.0, 2.0, 0.5)


class TestTaylorGreenDecay(object):
    """nu = 0.1, N = 32, T = 1 against exp(-2 nu t) sin x sin y."""

    def endpoint_error(self, k):
        grid = Grid(32)
        steps = int(round(1.0 / k))
        cfg = SolverConfig(0.1, k, grid, steps=steps)
        omega0 = taylor_green_vorticity(grid)
        report = run(cfg, omega0=omega0)
        return relative_error(report.final_omega, omega0 * math.exp(-2 * 0.1 * 1.0))

    def test_error_and_order(self):
        coarse = self.endpoint_error(1e-3)
        fine = self.endpoint_error(5e-4)
        assert coarse <= 5e-5
        assert 3.6 <= coarse / fine <= 4.4


class TestManufacturedOrder(object):
    nu = 0.1
    t_end = 0.4
    ks = (2e-2, 1e-2, 5e-3)

    def endpoint_error(self, k, nonlinearity):
        grid = Grid(16)
        solution = ManufacturedSolution(grid, self.nu)
        steps = int(round(self.t_end / k))
        cfg = SolverConfig(
            self.nu, k, grid, nonlinearity=nonlinearity,
            forcing=ForcingSpec.manufactured(solution), steps=steps,
        )
        report = run(cfg, omega0=solution.omega0)
        return relative_error(report.final_omega, solution.omega(self.t_end))

    @pytest.mark.parametrize("nonlinearity", ["galerkin", "collocation", "gear"])
    def test_second_order(self, nonlinearity):
        errors = [self.endpoint_error(k, nonlinearity) for k in self.ks]
        for coarse, fine in zip(errors, errors[1:]):
            assert math.log2(coarse / fine) == pytest.approx(2.0, abs=0.2)

    def test_manufactured_solution_needs_resolution(self):
        with pytest.raises(ParameterError):
            ManufacturedSolution(Grid(8), self.nu)
