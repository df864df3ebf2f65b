"""Tests for the Fourier core."""

import numpy as np
import pytest

from ns2d_bdf2.exceptions import (
    GridMismatchError,
    MeanZeroViolation,
    ParameterError,
    SizeError,
    SymmetryError,
)
from ns2d_bdf2.spectral import (
    Grid,
    SpectralField,
    dealiased_product,
    derivative_x,
    derivative_y,
    divergence,
    forward_transform,
    gradient,
    inner_product,
    inverse_laplacian,
    inverse_transform,
    laplacian,
    perp_gradient,
    physical_inner_product,
    refine,
    truncate,
)


class TestGrid(object):
    @pytest.mark.parametrize("N", [3, 2, 7, 0, 6.5])
    def test_rejects_bad_sizes(self, N):
        with pytest.raises(SizeError):
            Grid(N)

    def test_wavenumbers_in_fft_order(self):
        grid = Grid(8)
        assert list(grid.wavenumbers) == [0, 1, 2, 3, -4, -3, -2, -1]
        assert grid.nyquist[4, 0] and grid.nyquist[0, 4]
        assert not grid.nyquist[3, 3]

    def test_equality(self):
        assert Grid(16) == Grid(16)
        assert Grid(16) != Grid(32)
        assert len({Grid(16), Grid(16)}) == 1


class TestTransforms(object):
    def test_roundtrip(self, grid32, rng):
        values = rng.standard_normal((32, 32))
        field = forward_transform(values, grid32)
        assert np.allclose(inverse_transform(field), values, atol=1e-13)

    def test_shape_mismatch(self, grid32):
        with pytest.raises(SizeError):
            forward_transform(np.zeros((16, 16)), grid32)

    def test_sin_x_sin_y_coefficients(self, grid16):
        field = SpectralField.from_function(grid16, lambda x, y: np.sin(x) * np.sin(y))
        c = field.coeffs
        assert c[grid16.index_of(1, 1)] == pytest.approx(-0.25)
        assert c[grid16.index_of(1, -1)] == pytest.approx(0.25)
        assert np.sum(np.abs(c) > 1e-14) == 4

    def test_symmetry_error_on_non_hermitian(self, grid16):
        coeffs = np.zeros((16, 16), dtype=complex)
        coeffs[1, 0] = 1.0
        with pytest.raises(SymmetryError):
            inverse_transform(SpectralField(grid16, coeffs))

    def test_coefficients_are_read_only(self, grid16):
        field = SpectralField.zeros(grid16)
        with pytest.raises(ValueError):
            field.coeffs[1, 1] = 1.0


class TestCalculus(object):
    def test_derivatives_of_sin(self, grid16):
        field = SpectralField.from_function(grid16, lambda x, y: np.sin(2 * x) * np.cos(y))
        x, y = grid16.points()
        assert np.allclose(derivative_x(field).values(), 2 * np.cos(2 * x) * np.cos(y), atol=1e-13)
        assert np.allclose(derivative_y(field).values(), -np.sin(2 * x) * np.sin(y), atol=1e-13)

    def test_laplacian_and_inverse(self, grid32, random_field):
        omega = random_field(1, grid32)
        psi = inverse_laplacian(omega)
        back = -laplacian(psi)
        assert np.allclose(back.coeffs, omega.coeffs, atol=1e-15)

    def test_inverse_laplacian_needs_mean_zero(self, grid16):
        field = forward_transform(np.ones((16, 16)), grid16)
        with pytest.raises(MeanZeroViolation):
            inverse_laplacian(field)

    def test_velocity_is_divergence_free(self, grid32, random_field):
        u, v = perp_gradient(inverse_laplacian(random_field(2, grid32)))
        assert np.abs(divergence(u, v).coeffs).max() < 1e-14
        assert np.array_equal(divergence(u, v).coeffs, (derivative_x(u) + derivative_y(v)).coeffs)

    def test_divergence_of_gradient_is_laplacian(self, grid16, rng):
        field = forward_transform(rng.standard_normal((16, 16)), grid16, zero_mean=True)
        fx, fy = gradient(field)
        keep = ~grid16.nyquist
        assert np.allclose(divergence(fx, fy).coeffs[keep], laplacian(field).coeffs[keep], atol=1e-13)
        assert np.all(divergence(fx, fy).coeffs[grid16.nyquist] == 0)

    def test_divergence_needs_one_grid(self, grid16, grid32):
        with pytest.raises(GridMismatchError):
            divergence(SpectralField.zeros(grid16), SpectralField.zeros(grid32))

    def test_nyquist_zeroed_after_differentiation(self, grid16, rng):
        field = forward_transform(rng.standard_normal((16, 16)), grid16, zero_mean=True)
        assert np.all(derivative_x(field).coeffs[grid16.nyquist] == 0)
        assert np.all(laplacian(field).coeffs[grid16.nyquist] == 0)


class TestInnerProducts(object):
    def test_parseval(self, grid32, random_field):
        f = random_field(3, grid32)
        g = random_field(4, grid32)
        spectral = inner_product(f, g)
        physical = physical_inner_product(f.values(), g.values(), grid32)
        assert spectral == pytest.approx(physical, rel=1e-12)

    def test_l2_of_sin_x_sin_y(self, grid16):
        field = SpectralField.from_function(grid16, lambda x, y: np.sin(x) * np.sin(y))
        assert inner_product(field, field) == pytest.approx(np.pi ** 2, rel=1e-14)

    def test_grid_mismatch(self, grid16, grid32):
        with pytest.raises(GridMismatchError):
            inner_product(SpectralField.zeros(grid16), SpectralField.zeros(grid32))


class TestTruncationAndProducts(object):
    def test_truncate(self, grid32, random_field):
        field = random_field(5, grid32)
        cut = truncate(field, 3)
        kmax = np.maximum(np.abs(grid32.kx), np.abs(grid32.ky))
        assert np.all(cut.coeffs[kmax > 3] == 0)
        assert np.array_equal(cut.coeffs[kmax <= 3], field.coeffs[kmax <= 3])

    @pytest.mark.parametrize("M", [-1, 17, 2.5])
    def test_truncate_range(self, grid32, M):
        with pytest.raises(ParameterError):
            truncate(SpectralField.zeros(grid32), M)

    def test_dealiased_product_of_resolved_modes(self, grid16):
        a = SpectralField.from_function(grid16, lambda x, y: np.sin(3 * x))
        b = SpectralField.from_function(grid16, lambda x, y: np.cos(2 * y))
        prod = dealiased_product(a.coeffs, b.coeffs)
        expected = SpectralField.from_function(grid16, lambda x, y: np.sin(3 * x) * np.cos(2 * y))
        assert np.allclose(prod, expected.coeffs, atol=1e-15)

    def test_dealiased_product_drops_the_unresolved_part(self, grid16):
        a = SpectralField.from_function(grid16, lambda x, y: np.cos(5 * x))
        prod = dealiased_product(a.coeffs, a.coeffs)
        # cos^2(5x) = 1/2 + 1/2 cos(10x); the mean is removed and 10 > N/2
        assert np.abs(prod).max() < 1e-15

    def test_refine_keeps_the_function(self, grid16, random_field):
        field = random_field(6, grid16)
        fine = refine(field, 32)
        assert inner_product(fine, fine) == pytest.approx(inner_product(field, field), rel=1e-13)
