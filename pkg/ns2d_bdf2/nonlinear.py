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
Advection term grad_perp(psi) . grad(omega) in Galerkin (3/2-dealiased) and
collocation skew-symmetric form, the trilinear form b and Wente-type ratio
probes.
"""
import enum
import logging

import numpy as np

from ns2d_bdf2.exceptions import DegenerateInputError, ParameterError
from ns2d_bdf2.initial import random_initial_field
from ns2d_bdf2.norms import sobolev_norm
from ns2d_bdf2.spectral import (
    SpectralField,
    check_same_grid,
    dealiased_product,
    exact_product,
    inner_product,
    to_physical,
    to_spectral,
)

log = logging.getLogger(__file__)


def _velocity_and_gradient(psi, omega):
    grid = psi.grid
    keep = ~grid.nyquist
    ikx = 1j * grid.kx * keep
    iky = 1j * grid.ky * keep
    u = -iky * psi.coeffs
    v = ikx * psi.coeffs
    wx = ikx * omega.coeffs
    wy = iky * omega.coeffs
    return u, v, wx, wy


def advect_galerkin(psi, omega):
    """P_N(grad_perp(psi) . grad(omega)), products taken on a 3N/2 grid."""
    grid = check_same_grid(psi, omega)
    u, v, wx, wy = _velocity_and_gradient(psi, omega)
    coeffs = dealiased_product(u, wx) + dealiased_product(v, wy)
    return SpectralField(grid, coeffs, copy=False)


def advect_collocation_skew(psi, omega):
    """
    1/2 (u . grad_N omega + div_N(u omega)) with u = grad_perp_N psi, all
    products pointwise on the N grid.
    """
    grid = check_same_grid(psi, omega)
    keep = ~grid.nyquist
    u, v, wx, wy = _velocity_and_gradient(psi, omega)
    u_p = to_physical(u)
    v_p = to_physical(v)
    # both halves must see the same omega, without its Nyquist modes
    w_p = to_physical(omega.coeffs * keep)
    advective = to_spectral(u_p * to_physical(wx) + v_p * to_physical(wy))
    flux_x = to_spectral(u_p * w_p)
    flux_y = to_spectral(v_p * w_p)
    conservative = 1j * grid.kx * flux_x + 1j * grid.ky * flux_y
    coeffs = 0.5 * (advective + conservative) * keep
    return SpectralField(grid, coeffs, copy=False)


def trilinear_b(psi, phi, vphi):
    """b(psi, phi, vphi) = integral of (grad_perp(psi) . grad(phi)) vphi."""
    check_same_grid(psi, phi, vphi)
    return inner_product(advect_galerkin(psi, phi), vphi)


def jacobian_exact(psi, phi):
    """grad_perp(psi) . grad(phi) without truncation, on the doubled grid."""
    grid = check_same_grid(psi, phi)
    u, v, px, py = _velocity_and_gradient(psi, phi)
    ux = SpectralField(grid, u, zero_mean=False, copy=False)
    vy = SpectralField(grid, v, zero_mean=False, copy=False)
    dx = SpectralField(grid, px, zero_mean=False, copy=False)
    dy = SpectralField(grid, py, zero_mean=False, copy=False)
    return exact_product(ux, dx) + exact_product(vy, dy)


class WenteVariant(enum.Enum):
    """Sobolev exponents (jacobian, psi, phi) of the five bilinear estimates."""

    Hm1_H1H1 = "Hm1_H1H1"
    Hm1_H2L2 = "Hm1_H2L2"
    L2_H2H1 = "L2_H2H1"
    L2_H1H2 = "L2_H1H2"
    H1_H2H2 = "H1_H2H2"

    @property
    def exponents(self):
        return _WENTE_EXPONENTS[self]


_WENTE_EXPONENTS = {
    WenteVariant.Hm1_H1H1: (-1, 1, 1),
    WenteVariant.Hm1_H2L2: (-1, 2, 0),
    WenteVariant.L2_H2H1: (0, 2, 1),
    WenteVariant.L2_H1H2: (0, 1, 2),
    WenteVariant.H1_H2H2: (1, 2, 2),
}


def wente_ratio(psi, phi, variant):
    """||J(psi, phi)||_{H^a} / (||psi||_{H^b} ||phi||_{H^c}) for the variant."""
    variant = WenteVariant(variant)
    s_jac, s_psi, s_phi = variant.exponents
    denominator = sobolev_norm(psi, s_psi) * sobolev_norm(phi, s_phi)
    if denominator == 0.0:
        raise DegenerateInputError(
            "Zero denominator for Wente variant {}".format(variant.value)
        )
    return sobolev_norm(jacobian_exact(psi, phi), s_jac) / denominator


def estimate_wente_constant(variant, N, samples=1000, seed=0, slope=-1.0, kmax=None):
    """
    Sample supremum of wente_ratio over pairs of random fields.

    The sampled band follows the grid (|kappa| <= N/3) unless ``kmax`` is
    given; a fixed kmax produces the same functions at every N > 2 kmax.
    """
    if samples < 1:
        raise ParameterError("samples must be >= 1, got {!r}".format(samples))
    variant = WenteVariant(variant)
    seeds = np.random.SeedSequence(seed).generate_state(2 * samples)
    best = 0.0
    for i in range(samples):
        psi = random_initial_field(int(seeds[2 * i]), N, slope, 1.0, kmax=kmax)
        phi = random_initial_field(int(seeds[2 * i + 1]), N, slope, 1.0, kmax=kmax)
        best = max(best, wente_ratio(psi, phi, variant))
    log.info("Wente %s at N=%d over %d samples: %.6g", variant.value, N, samples, best)
    return best
