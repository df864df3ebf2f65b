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
Fourier representation of mean-zero periodic fields on (0, 2pi)^2.

Coefficients are kept as full N x N complex arrays in FFT order, axis 0 is
the x wavenumber and axis 1 the y wavenumber. The forward transform divides
by N^2, so a field reads f(x, y) = sum c[k, l] exp(i (k x + l y)).
"""
import logging

import numpy as np
from scipy import fft as sfft

from ns2d_bdf2.exceptions import (
    GridMismatchError,
    MeanZeroViolation,
    ParameterError,
    SizeError,
    SymmetryError,
)

log = logging.getLogger(__file__)

TWO_PI = 2.0 * np.pi
SYMMETRY_TOL = 1e-13
MEAN_TOL = 1e-12


class Grid(object):
    """Uniform N x N collocation grid on (0, 2pi)^2, N even."""

    def __init__(self, N):
        if int(N) != N or N < 4 or N % 2:
            raise SizeError("Grid size must be an even integer >= 4, got {!r}".format(N))
        self._N = int(N)
        k = np.rint(sfft.fftfreq(self._N, d=1.0 / self._N))
        self.wavenumbers = k.astype(np.int64)
        self.kx = k.reshape(-1, 1)
        self.ky = k.reshape(1, -1)
        self.ksq = self.kx ** 2 + self.ky ** 2
        half = self._N // 2
        self.nyquist = (np.abs(self.kx) == half) | (np.abs(self.ky) == half)
        inv = np.zeros_like(self.ksq)
        np.divide(1.0, self.ksq, out=inv, where=self.ksq > 0)
        self.inv_ksq = inv
        for arr in (self.kx, self.ky, self.ksq, self.nyquist, self.inv_ksq):
            arr.setflags(write=False)

    @property
    def N(self):
        return self._N

    @property
    def h(self):
        return TWO_PI / self._N

    def points(self):
        """Collocation points (x, y), each N x N, ``indexing="ij"``."""
        x = self.h * np.arange(self._N)
        return np.meshgrid(x, x, indexing="ij")

    def ksq_power(self, s):
        """|kappa|^(2s) with the (0,0) weight set to 1 for s == 0, else 0."""
        if s == 0:
            return np.ones_like(self.ksq)
        out = np.zeros_like(self.ksq)
        np.power(self.ksq, s, out=out, where=self.ksq > 0)
        return out

    def index_of(self, k1, l1):
        """Array index of wavenumber (k1, l1)."""
        return k1 % self._N, l1 % self._N

    def __eq__(self, other):
        return isinstance(other, Grid) and other._N == self._N

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(("Grid", self._N))

    def __repr__(self):
        return "Grid(N={})".format(self._N)


class SpectralField(object):
    """
    Real periodic field held by its Fourier coefficients.

    The coefficient array is read-only once the field exists. The (0,0)
    coefficient is zeroed unless ``zero_mean=False``.
    """

    __slots__ = ("grid", "coeffs")

    def __init__(self, grid, coeffs, zero_mean=True, copy=True):
        if copy:
            coeffs = np.array(coeffs, dtype=np.complex128)
        else:
            coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != (grid.N, grid.N):
            raise SizeError(
                "Coefficient array {} does not match {}".format(coeffs.shape, grid)
            )
        if zero_mean:
            if not coeffs.flags.writeable:
                coeffs = np.array(coeffs)
            coeffs[0, 0] = 0.0
        coeffs.setflags(write=False)
        self.grid = grid
        self.coeffs = coeffs

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros((grid.N, grid.N), dtype=np.complex128), copy=False)

    @classmethod
    def from_function(cls, grid, func):
        """Sample ``func(x, y)`` on the grid and transform, mean removed."""
        x, y = grid.points()
        return forward_transform(func(x, y), grid, zero_mean=True)

    def values(self):
        return inverse_transform(self)

    def mean(self):
        return self.coeffs[0, 0].real

    def _wrap(self, coeffs):
        return SpectralField(self.grid, coeffs, zero_mean=False, copy=False)

    def __add__(self, other):
        check_same_grid(self, other)
        return self._wrap(self.coeffs + other.coeffs)

    def __sub__(self, other):
        check_same_grid(self, other)
        return self._wrap(self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        return self._wrap(self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self._wrap(self.coeffs / scalar)

    def __neg__(self):
        return self._wrap(-self.coeffs)

    def __repr__(self):
        return "SpectralField({}, max|c|={:.3e})".format(
            self.grid, float(np.abs(self.coeffs).max())
        )


def check_same_grid(*fields):
    grid = fields[0].grid
    for field in fields[1:]:
        if field.grid != grid:
            raise GridMismatchError("{} combined with {}".format(grid, field.grid))
    return grid


def forward_transform(values, grid, zero_mean=False):
    """
    Grid samples to coefficients. The (0,0) coefficient carries the grid
    mean unless ``zero_mean`` is set.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (grid.N, grid.N):
        raise SizeError("Samples {} do not match {}".format(values.shape, grid))
    coeffs = sfft.fft2(values, norm="forward")
    return SpectralField(grid, coeffs, zero_mean=zero_mean, copy=False)


def inverse_transform(field, check=True):
    """Coefficients to real grid samples."""
    values = sfft.ifft2(field.coeffs, norm="forward")
    if check:
        scale = np.abs(values).max()
        residue = np.abs(values.imag).max()
        if scale > 0 and residue > SYMMETRY_TOL * scale:
            raise SymmetryError(
                "Imaginary residue {:.3e} exceeds tolerance at magnitude {:.3e}".format(
                    residue, scale
                )
            )
    return np.ascontiguousarray(values.real)


def to_physical(coeffs):
    """Unchecked inverse transform of a raw coefficient array, any size."""
    return sfft.ifft2(coeffs, norm="forward").real


def to_spectral(values):
    return sfft.fft2(values, norm="forward")


def _differentiate(field, multiplier):
    coeffs = field.coeffs * multiplier
    coeffs[field.grid.nyquist] = 0.0
    return SpectralField(field.grid, coeffs, copy=False)


def derivative_x(field):
    return _differentiate(field, 1j * field.grid.kx)


def derivative_y(field):
    return _differentiate(field, 1j * field.grid.ky)


def gradient(field):
    return derivative_x(field), derivative_y(field)


def divergence(fx, fy):
    check_same_grid(fx, fy)
    return derivative_x(fx) + derivative_y(fy)


def laplacian(field):
    return _differentiate(field, -field.grid.ksq)


def inverse_laplacian(field):
    """Solve -lap(psi) = omega for mean-zero omega."""
    scale = np.abs(field.coeffs).max()
    if abs(field.coeffs[0, 0]) > MEAN_TOL * max(scale, 1.0):
        raise MeanZeroViolation(
            "inverse_laplacian needs a mean-zero field, mean is {!r}".format(field.coeffs[0, 0])
        )
    return SpectralField(field.grid, field.coeffs * field.grid.inv_ksq, copy=False)


def perp_gradient(psi):
    """Velocity (-d psi/dy, d psi/dx)."""
    return -derivative_y(psi), derivative_x(psi)


def truncate(field, M):
    """Zero every coefficient with max(|k|, |l|) > M."""
    grid = field.grid
    if int(M) != M or M < 0 or M > grid.N // 2:
        raise ParameterError("Truncation M must be in [0, {}], got {!r}".format(grid.N // 2, M))
    coeffs = np.array(field.coeffs)
    coeffs[np.maximum(np.abs(grid.kx), np.abs(grid.ky)) > M] = 0.0
    return SpectralField(grid, coeffs, zero_mean=False, copy=False)


def inner_product(f, g):
    """Continuum L2 pairing, (2pi)^2 sum Re(f_k conj(g_k))."""
    check_same_grid(f, g)
    return TWO_PI ** 2 * float(np.sum((f.coeffs * np.conj(g.coeffs)).real))


def physical_inner_product(f_values, g_values, grid):
    """Quadrature pairing h^2 sum f g of grid samples."""
    return grid.h ** 2 * float(np.sum(np.asarray(f_values) * np.asarray(g_values)))


#
# Zero padding
#


def _pad_index(N, M):
    return np.rint(sfft.fftfreq(N, d=1.0 / N)).astype(np.int64) % M


def pad(coeffs, M):
    """Embed N x N coefficients into an M x M array, M >= N."""
    N = coeffs.shape[0]
    idx = _pad_index(N, M)
    out = np.zeros((M, M), dtype=np.complex128)
    out[np.ix_(idx, idx)] = coeffs
    return out


def unpad(coeffs, N):
    """Keep the N x N low-wavenumber block of an M x M array."""
    idx = _pad_index(N, coeffs.shape[0])
    return coeffs[np.ix_(idx, idx)]


def dealiased_size(N):
    return 3 * N // 2


def dealiased_product(a, b):
    """
    Coefficients of the product of two trigonometric polynomials on the
    N grid, computed on a 3N/2 grid. Nyquist and mean are zeroed.
    """
    N = a.shape[0]
    M = dealiased_size(N)
    prod = to_spectral(to_physical(pad(a, M)) * to_physical(pad(b, M)))
    out = np.array(unpad(prod, N))
    half = N // 2
    out[half, :] = 0.0
    out[:, half] = 0.0
    out[0, 0] = 0.0
    return out


def exact_product(f, g):
    """Full product f*g as a field on the doubled grid."""
    check_same_grid(f, g)
    big = Grid(2 * f.grid.N)
    prod = to_spectral(to_physical(pad(f.coeffs, big.N)) * to_physical(pad(g.coeffs, big.N)))
    return SpectralField(big, prod, zero_mean=False, copy=False)


def refine(field, N):
    """Same trigonometric polynomial on a finer grid."""
    if N < field.grid.N:
        raise SizeError("refine needs N >= {}, got {}".format(field.grid.N, N))
    coeffs = np.array(field.coeffs)
    coeffs[field.grid.nyquist] = 0.0
    return SpectralField(Grid(N), pad(coeffs, N), zero_mean=False, copy=False)
