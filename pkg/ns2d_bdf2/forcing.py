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

"""Body forcing for the vorticity equation, evaluated at t_{n+1} = (n+1) k."""
import enum
import logging
import math

import numpy as np

from ns2d_bdf2.exceptions import ParameterError
from ns2d_bdf2.initial import random_initial_field
from ns2d_bdf2.nonlinear import advect_galerkin
from ns2d_bdf2.norms import sobolev_norm
from ns2d_bdf2.spectral import SpectralField, inverse_laplacian, laplacian

log = logging.getLogger(__file__)


class ForcingMode(enum.Enum):
    ZERO = "zero"
    STEADY = "steady"
    TIME_DEPENDENT = "time_dependent"
    MANUFACTURED = "manufactured"


class ForcingSpec(object):
    """Where f^{n+1} comes from. Every produced field is mean-zero."""

    def __init__(self, mode, grid, field=None, callback=None, solution=None):
        self.mode = ForcingMode(mode)
        self.grid = grid
        self._field = field
        self._callback = callback
        self.solution = solution
        if self.mode is ForcingMode.STEADY and field is None:
            raise ParameterError("steady forcing needs a field")
        if self.mode is ForcingMode.TIME_DEPENDENT and callback is None:
            raise ParameterError("time dependent forcing needs a callback")
        if self.mode is ForcingMode.MANUFACTURED and solution is None:
            raise ParameterError("manufactured forcing needs a solution")
        if self.mode is ForcingMode.ZERO:
            self._field = SpectralField.zeros(grid)

    @classmethod
    def zero(cls, grid):
        return cls(ForcingMode.ZERO, grid)

    @classmethod
    def steady(cls, field):
        return cls(ForcingMode.STEADY, field.grid, field=SpectralField(field.grid, field.coeffs))

    @classmethod
    def time_dependent(cls, grid, callback):
        return cls(ForcingMode.TIME_DEPENDENT, grid, callback=callback)

    @classmethod
    def manufactured(cls, solution):
        return cls(ForcingMode.MANUFACTURED, solution.grid, solution=solution)

    @property
    def is_steady(self):
        return self.mode in (ForcingMode.ZERO, ForcingMode.STEADY)

    def at(self, t):
        if self.is_steady:
            return self._field
        if self.mode is ForcingMode.MANUFACTURED:
            return self.solution.forcing(t)
        field = self._callback(t)
        return SpectralField(field.grid, field.coeffs)

    def sup_norm(self, s=-1, times=None):
        """
        sup over time of ||f(t)||_{H^s}. Steady forcing is exact, otherwise
        the supremum is taken over ``times`` (defaults to t = 0).
        """
        if self.is_steady:
            return sobolev_norm(self._field, s)
        if self.mode is ForcingMode.MANUFACTURED and times is None:
            # both forcing terms decay in t
            return self.solution.forcing_bound(s)
        times = [0.0] if times is None else times
        return max(sobolev_norm(self.at(t), s) for t in times)

    def __repr__(self):
        return "ForcingSpec({}, {})".format(self.mode.value, self.grid)


class ManufacturedSolution(object):
    """
    omega_e = exp(-t) (sin x sin y + 1/2 sin 2x sin y) with the forcing that
    makes it an exact solution for viscosity nu. The Jacobian is computed by
    the dealiased product, exact on grids with N >= 10.
    """

    def __init__(self, grid, nu):
        if grid.N < 10:
            raise ParameterError("manufactured solution needs N >= 10, got {}".format(grid.N))
        self.grid = grid
        self.nu = nu
        self.omega0 = SpectralField.from_function(
            grid, lambda x, y: np.sin(x) * np.sin(y) + 0.5 * np.sin(2 * x) * np.sin(y)
        )
        self.psi0 = inverse_laplacian(self.omega0)
        self._linear = -self.omega0 - nu * laplacian(self.omega0)
        self._jacobian = advect_galerkin(self.psi0, self.omega0)

    def omega(self, t):
        return self.omega0 * math.exp(-t)

    def forcing(self, t):
        return self._linear * math.exp(-t) + self._jacobian * math.exp(-2.0 * t)

    def forcing_bound(self, s=-1):
        return sobolev_norm(self._linear, s) + sobolev_norm(self._jacobian, s)


def taylor_green_forcing(grid, nu, amplitude=1.0):
    """amplitude * 2 nu sin x sin y, which holds sin x sin y steady."""
    field = SpectralField.from_function(
        grid, lambda x, y: amplitude * 2.0 * nu * np.sin(x) * np.sin(y)
    )
    return ForcingSpec.steady(field)


def kolmogorov_forcing(grid, amplitude=1.0, kf=4):
    if kf < 1 or kf >= grid.N // 2:
        raise ParameterError("forcing wavenumber {} does not fit on {}".format(kf, grid))
    field = SpectralField.from_function(grid, lambda x, y: amplitude * np.cos(kf * y))
    return ForcingSpec.steady(field)


def random_band_forcing(grid, amplitude=1.0, kf=4, seed=0):
    """Steady random forcing in the shell kf-1 < kappa <= kf+1, L2 norm amplitude."""
    if kf < 2 or kf + 1 >= grid.N // 2:
        raise ParameterError("forcing band around {} does not fit on {}".format(kf, grid))
    full = random_initial_field(seed, grid, 0.0, 1.0, kmax=kf + 1)
    coeffs = np.array(full.coeffs)
    coeffs[np.sqrt(grid.ksq) <= kf - 1] = 0.0
    band = SpectralField(grid, coeffs, copy=False)
    norm = sobolev_norm(band, 0)
    if norm == 0.0:
        return ForcingSpec.zero(grid)
    return ForcingSpec.steady(band * (amplitude / norm))
