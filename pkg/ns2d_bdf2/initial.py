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

"""Deterministic initial vorticity fields."""
import logging

import numpy as np

from ns2d_bdf2.exceptions import ParameterError
from ns2d_bdf2.norms import sobolev_norm
from ns2d_bdf2.spectral import Grid, SpectralField

log = logging.getLogger(__file__)


def taylor_green_vorticity(grid, amplitude=1.0):
    """amplitude * sin(x) sin(y)."""
    return SpectralField.from_function(grid, lambda x, y: amplitude * np.sin(x) * np.sin(y))


def random_initial_field(seed, N, spectrum_slope=-1.0, amplitude=1.0, kmax=None):
    """
    Isotropic random field with |c(kappa)| ~ kappa^slope for 0 < kappa <= kmax
    and random phases, scaled to L2 norm ``amplitude``.

    Phases are drawn on the box [-kmax, kmax]^2 only, so one seed gives the
    same function on every grid that resolves kmax. kmax defaults to N/3.
    """
    grid = N if isinstance(N, Grid) else Grid(N)
    if amplitude < 0:
        raise ParameterError("amplitude must be >= 0, got {!r}".format(amplitude))
    if kmax is None:
        kmax = grid.N / 3.0
    K = int(np.floor(kmax))
    if K < 1 or K > grid.N // 2 - 1:
        raise ParameterError("kmax {!r} does not fit on {}".format(kmax, grid))

    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=(2 * K + 1, 2 * K + 1))
    # odd in kappa so that c(-kappa) = conj(c(kappa))
    theta = theta - theta[::-1, ::-1]
    k = np.arange(-K, K + 1, dtype=np.float64)
    kappa = np.sqrt(k.reshape(-1, 1) ** 2 + k.reshape(1, -1) ** 2)
    magnitude = np.zeros_like(kappa)
    inside = (kappa > 0) & (kappa <= kmax)
    magnitude[inside] = kappa[inside] ** spectrum_slope
    box = magnitude * np.exp(1j * theta)

    coeffs = np.zeros((grid.N, grid.N), dtype=np.complex128)
    idx = np.arange(-K, K + 1) % grid.N
    coeffs[np.ix_(idx, idx)] = box
    field = SpectralField(grid, coeffs, copy=False)

    if amplitude == 0:
        return SpectralField.zeros(grid)
    return field * (amplitude / sobolev_norm(field, 0))
