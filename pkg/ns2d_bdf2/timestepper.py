# -*- coding: utf-8 -*-
# Licensed under the Apache License 2.0 License
# SPDX-License-Identifier: Apache-2.0

#
# The contents of this file are licensed under the Apache License, Version 2.0
# (the "License"); you may not use this file except in compliance with the
# License. You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations under
# the License.

"""
Two-step IMEX update of the vorticity equation

    (3 w^{n+1} - 4 w^n + w^{n-1}) / (2k)
        + grad_perp(2 psi^n - psi^{n-1}) . grad(2 w^n - w^{n-1})
        - nu lap w^{n+1} = f^{n+1}

with diffusion implicit and the advection evaluated at the extrapolated
state. The implicit part is diagonal in Fourier space.
"""
import enum
import logging

import numpy as np

from ns2d_bdf2.exceptions import GridMismatchError, NumericalBlowupError, ParameterError
from ns2d_bdf2.forcing import ForcingSpec
from ns2d_bdf2.nonlinear import advect_collocation_skew, advect_galerkin
from ns2d_bdf2.norms import StatePair
from ns2d_bdf2.spectral import SpectralField, check_same_grid, inverse_laplacian

log = logging.getLogger(__file__)


class Nonlinearity(enum.Enum):
    GALERKIN = "galerkin"
    COLLOCATION = "collocation"
    GEAR = "gear"


class Bootstrap(enum.Enum):
    EULER = "euler"
    EXACT = "exact"


class SolverConfig(object):
    """Physical and numerical parameters of one run."""

    def __init__(
        self,
        nu,
        k,
        grid,
        nonlinearity=Nonlinearity.GALERKIN,
        bootstrap=Bootstrap.EULER,
        forcing=None,
        steps=0,
        cw_estimate=1.0,
        exact_solution=None,
    ):
        if not nu > 0:
            raise ParameterError("nu must be > 0, got {!r}".format(nu))
        if not k > 0:
            raise ParameterError("k must be > 0, got {!r}".format(k))
        if steps < 0:
            raise ParameterError("steps must be >= 0, got {!r}".format(steps))
        if not cw_estimate > 0:
            raise ParameterError("cw_estimate must be > 0, got {!r}".format(cw_estimate))
        self.nu = float(nu)
        self.k = float(k)
        self.grid = grid
        self.nonlinearity = Nonlinearity(nonlinearity)
        self.bootstrap = Bootstrap(bootstrap)
        self.forcing = forcing if forcing is not None else ForcingSpec.zero(grid)
        if self.forcing.grid != grid:
            raise GridMismatchError("forcing on {} for a run on {}".format(self.forcing.grid, grid))
        self.steps = int(steps)
        self.cw_estimate = float(cw_estimate)
        self.exact_solution = exact_solution
        if self.bootstrap is Bootstrap.EXACT and exact_solution is None:
            raise ParameterError("exact bootstrap needs an exact_solution callable")
        # per-mode denominators of the implicit solves
        self.bdf2_denominator = 1.5 / self.k + self.nu * grid.ksq
        self.euler_denominator = 1.0 / self.k + self.nu * grid.ksq

    @property
    def mu(self):
        return self.nu * self.k

    def check_stability_regime(self):
        if self.mu > 1.0:
            raise ParameterError(
                "stability envelopes assume nu*k <= 1, got {!r}".format(self.mu)
            )

    def time(self, n):
        return n * self.k

    def forcing_at_step(self, n):
        return self.forcing.at(self.time(n))

    def __repr__(self):
        return "SolverConfig(nu={}, k={}, N={}, nonlinearity={}, steps={})".format(
            self.nu, self.k, self.grid.N, self.nonlinearity.value, self.steps
        )


def advect(psi, omega, cfg):
    if cfg.nonlinearity is Nonlinearity.COLLOCATION:
        return advect_collocation_skew(psi, omega)
    return advect_galerkin(psi, omega)


def _solve(rhs, denominator, grid, step):
    if not np.all(np.isfinite(rhs)):
        raise NumericalBlowupError(step, reason="non-finite right-hand side")
    return SpectralField(grid, rhs / denominator, copy=False)


def _bdf2_explicit_part(pair, f_next, cfg):
    grid = check_same_grid(pair.older, pair.newer, f_next)
    if grid != cfg.grid:
        raise GridMismatchError("state on {} for a run on {}".format(grid, cfg.grid))
    return (4.0 * pair.newer.coeffs - pair.older.coeffs) / (2.0 * cfg.k) + f_next.coeffs


def bdf2ab2_step(pair, f_next, cfg, step=None):
    """omega^{n+1} from (omega^{n-1}, omega^n) with the extrapolated advection."""
    rhs = _bdf2_explicit_part(pair, f_next, cfg)
    omega_ext = 2.0 * pair.newer - pair.older
    rhs = rhs - advect(inverse_laplacian(omega_ext), omega_ext, cfg).coeffs
    return _solve(rhs, cfg.bdf2_denominator, cfg.grid, step)


def extrapolated_gear_step(pair, f_next, cfg, step=None):
    """Same implicit part, advection 2 N(psi^n, w^n) - N(psi^{n-1}, w^{n-1})."""
    rhs = _bdf2_explicit_part(pair, f_next, cfg)
    nl_new = advect_galerkin(inverse_laplacian(pair.newer), pair.newer)
    nl_old = advect_galerkin(inverse_laplacian(pair.older), pair.older)
    rhs = rhs - (2.0 * nl_new.coeffs - nl_old.coeffs)
    return _solve(rhs, cfg.bdf2_denominator, cfg.grid, step)


def step_once(pair, cfg, step):
    """Advance a pair whose newer level is ``step - 1`` to level ``step``."""
    f_next = cfg.forcing_at_step(step)
    if cfg.nonlinearity is Nonlinearity.GEAR:
        new = extrapolated_gear_step(pair, f_next, cfg, step)
    else:
        new = bdf2ab2_step(pair, f_next, cfg, step)
    return pair.advance(new), f_next


def bootstrap_first_step(omega0, cfg):
    """
    (omega^0, omega^1). The Euler variant solves
    (1/k - nu lap) w^1 = w^0 / k - N(psi^0, w^0) + f^1.
    """
    if omega0.grid != cfg.grid:
        raise GridMismatchError("initial field on {} for a run on {}".format(omega0.grid, cfg.grid))
    if cfg.bootstrap is Bootstrap.EXACT:
        omega1 = cfg.exact_solution(cfg.time(1))
        return StatePair(omega0, SpectralField(cfg.grid, omega1.coeffs))
    f1 = cfg.forcing_at_step(1)
    nl = advect(inverse_laplacian(omega0), omega0, cfg)
    rhs = omega0.coeffs / cfg.k - nl.coeffs + f1.coeffs
    return StatePair(omega0, _solve(rhs, cfg.euler_denominator, cfg.grid, 1))


def bound_radius(v0_gnorm, rho0):
    """M_0 = max(||V_0||_G(nu k), rho_0)."""
    return max(v0_gnorm, rho0)


def bound_radius_alt(v0_l2, rho0, c_l):
    """max(||V_0|| / sqrt(C_l), rho_0)."""
    return max(v0_l2 / np.sqrt(c_l), rho0)


def max_stable_timestep(nu, cw, cu, M0):
    """k_0 = nu / (50 C_w^2 C_u M_0^2)."""
    for name, value in (("nu", nu), ("cw", cw), ("cu", cu), ("M0", M0)):
        if not value > 0:
            raise ParameterError("{} must be > 0, got {!r}".format(name, value))
    return nu / (50.0 * cw ** 2 * cu * M0 ** 2)
