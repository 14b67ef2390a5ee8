"""Grid construction, Gaussian states, spectral transforms, translation."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from ngpmap import (
    ModelParams,
    WaveState,
    inner_product,
    make_gaussian,
    make_grid,
    momentum_moments,
    to_momentum,
    to_position,
    translate,
)

TWO_PI = 2.0 * math.pi


def gaussian_p2_oracle(sigma, hbar):
    """<p^2> of (sigma/pi)^(1/4) exp(-sigma theta^2/2) by direct quadrature.

    <p^2> = hbar^2 * int |psi'|^2 / int |psi|^2 with psi' = -sigma*theta*psi.
    """
    density = lambda th: math.exp(-sigma * th * th)
    num, _ = quad(lambda th: sigma**2 * th**2 * density(th), -math.pi, math.pi)
    den, _ = quad(density, -math.pi, math.pi)
    return hbar**2 * num / den


class TestMakeGrid:
    def test_small_grid_layout(self):
        grid = make_grid(8)
        assert grid.dtheta == pytest.approx(math.pi / 4, abs=0)
        assert grid.theta_values[0] == pytest.approx(-math.pi, abs=0)
        assert set(grid.momentum_indices.tolist()) == set(range(-4, 4))
        assert np.all(np.diff(grid.theta_values) > 0)
        assert grid.theta_values[-1] < math.pi

    def test_large_grid_spacing(self):
        grid = make_grid(4096)
        assert grid.dtheta == pytest.approx(TWO_PI / 4096, rel=1e-15)
        assert grid.n_points * grid.dtheta == pytest.approx(TWO_PI, rel=1e-15)

    @pytest.mark.parametrize("bad", [12, 4, 0, -8, 7, 100])
    def test_rejects_bad_sizes(self, bad):
        with pytest.raises(ValueError):
            make_grid(bad)

    def test_rejects_non_integer(self):
        with pytest.raises(ValueError):
            make_grid(16.0)


class TestModelParams:
    def test_rejects_nonpositive_hbar(self):
        with pytest.raises(ValueError):
            ModelParams(g=1.0, hbar_eff=0.0)

    def test_rejects_negative_eta(self):
        with pytest.raises(ValueError):
            ModelParams(g=1.0, eta=-0.1)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            ModelParams(g=float("nan"))


class TestGaussian:
    def test_normalised(self):
        grid = make_grid(4096)
        state = make_gaussian(grid, 10.0)
        norm = np.sum(np.abs(state.amplitudes) ** 2) * grid.dtheta
        assert abs(norm - 1.0) < 1e-12
        assert state.log_amplitude == 0.0

    def test_zero_mean_momentum(self):
        grid = make_grid(4096)
        state = make_gaussian(grid, 10.0)
        mean_p, _ = momentum_moments(state, ModelParams(g=1.0))
        assert abs(mean_p) < 1e-10

    def test_second_moment_matches_quadrature(self):
        grid = make_grid(4096)
        state = make_gaussian(grid, 10.0)
        _, mean_p2 = momentum_moments(state, ModelParams(g=1.0, hbar_eff=1.0))
        oracle = gaussian_p2_oracle(10.0, 1.0)
        assert oracle == pytest.approx(5.0, rel=1e-6)
        assert mean_p2 == pytest.approx(oracle, rel=1e-3)

    def test_peak_at_center(self):
        grid = make_grid(512)
        state = make_gaussian(grid, 10.0, center=1.0)
        peak = grid.theta_values[np.argmax(np.abs(state.amplitudes))]
        assert abs(peak - 1.0) <= grid.dtheta

    def test_parity_symmetry(self):
        grid = make_grid(256)
        state = make_gaussian(grid, 10.0, center=0.0)
        flipped = state.amplitudes[(-np.arange(grid.n_points)) % grid.n_points]
        np.testing.assert_allclose(flipped, state.amplitudes, atol=1e-15)

    def test_wide_packet_warns(self):
        grid = make_grid(256)
        with pytest.warns(UserWarning):
            make_gaussian(grid, 1.0)

    def test_rejects_bad_sigma(self):
        grid = make_grid(256)
        with pytest.raises(ValueError):
            make_gaussian(grid, 0.0)


class TestWaveState:
    def test_rejects_unnormalised(self):
        grid = make_grid(8)
        with pytest.raises(ValueError):
            WaveState(grid, np.ones(8, dtype=complex))

    def test_from_samples_folds_norm(self):
        grid = make_grid(64)
        values = 3.0 * np.exp(2j * grid.theta_values)
        state = WaveState.from_samples(grid, values)
        norm = np.sum(np.abs(state.amplitudes) ** 2) * grid.dtheta
        assert abs(norm - 1.0) < 1e-12
        # physical norm 9*2pi: log_amplitude = 0.5*ln(9*2pi)
        assert state.log_amplitude == pytest.approx(0.5 * math.log(9 * TWO_PI), rel=1e-12)

    def test_rejects_nan(self):
        grid = make_grid(8)
        values = np.ones(8, dtype=complex)
        values[3] = np.nan
        with pytest.raises(ValueError):
            WaveState.from_samples(grid, values)

    def test_amplitudes_read_only(self):
        grid = make_grid(8)
        state = make_gaussian(grid, 8.0)
        with pytest.raises(ValueError):
            state.amplitudes[0] = 1.0


class TestMomentumTransform:
    def test_plane_wave_single_mode(self):
        grid = make_grid(4096)
        state = WaveState.from_samples(grid, np.exp(3j * grid.theta_values))
        coeffs = to_momentum(state)
        weights = np.abs(coeffs) ** 2
        idx = np.nonzero(grid.momentum_indices == 3)[0][0]
        assert weights[idx] == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.delete(weights, idx)) < 1e-24

    def test_parseval(self):
        grid = make_grid(4096)
        state = make_gaussian(grid, 10.0)
        coeffs = to_momentum(state)
        position_norm = np.sum(np.abs(state.amplitudes) ** 2) * grid.dtheta
        assert np.sum(np.abs(coeffs) ** 2) == pytest.approx(position_norm, abs=1e-12)

    def test_round_trip(self):
        grid = make_grid(1024)
        rng = np.random.RandomState(7)
        state = WaveState.from_samples(grid, rng.randn(1024) + 1j * rng.randn(1024))
        back = to_position(grid, to_momentum(state), state.log_amplitude)
        np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-13)
        assert back.log_amplitude == pytest.approx(state.log_amplitude, abs=1e-13)

    def test_coefficients_are_true_projections(self):
        # c_n = sum psi_j conj(u_n(theta_j)) dtheta, computed by direct loop
        grid = make_grid(16)
        rng = np.random.RandomState(3)
        state = WaveState.from_samples(grid, rng.randn(16) + 1j * rng.randn(16))
        coeffs = to_momentum(state)
        for k, n in enumerate(grid.momentum_indices):
            direct = sum(
                state.amplitudes[j]
                * np.exp(-1j * n * grid.theta_values[j])
                / math.sqrt(TWO_PI)
                * grid.dtheta
                for j in range(16)
            )
            assert coeffs[k] == pytest.approx(direct, abs=1e-14)


class TestTranslate:
    def test_grid_step_is_cyclic_shift(self):
        grid = make_grid(1024)
        state = make_gaussian(grid, 10.0, center=0.5)
        shifted = translate(state, grid.dtheta)
        np.testing.assert_allclose(
            shifted.amplitudes, np.roll(state.amplitudes, 1), atol=1e-13
        )

    def test_inverse(self):
        grid = make_grid(512)
        state = make_gaussian(grid, 10.0)
        back = translate(translate(state, 0.37), -0.37)
        np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-13)

    def test_additivity(self):
        grid = make_grid(512)
        state = make_gaussian(grid, 10.0)
        one = translate(state, 0.11 + 0.23)
        two = translate(translate(state, 0.11), 0.23)
        np.testing.assert_allclose(one.amplitudes, two.amplitudes, atol=1e-13)

    def test_norm_and_log_amplitude_preserved(self):
        grid = make_grid(512)
        state = WaveState.from_samples(grid, np.exp(2j * grid.theta_values), 1.5)
        shifted = translate(state, 0.7)
        assert shifted.log_amplitude == state.log_amplitude
        norm = np.sum(np.abs(shifted.amplitudes) ** 2) * grid.dtheta
        assert abs(norm - 1.0) < 1e-12

    def test_small_shift_fidelity_deficit(self):
        # overlap of shifted Gaussians has the closed form exp(-sigma eps^2/2)
        grid = make_grid(4096)
        sigma, eps = 10.0, 1e-5
        state = make_gaussian(grid, sigma)
        shifted = translate(state, eps)
        overlap = inner_product(state, shifted)
        deficit = 1.0 - abs(overlap) ** 2
        exact = 1.0 - math.exp(-sigma * eps**2 / 2)
        assert deficit == pytest.approx(exact, rel=1e-2)
        assert deficit == pytest.approx(5e-10, rel=1e-2)


class TestInnerProduct:
    def test_self_overlap(self):
        grid = make_grid(512)
        state = make_gaussian(grid, 10.0)
        assert inner_product(state, state).real == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_plane_waves(self):
        grid = make_grid(512)
        a = WaveState.from_samples(grid, np.exp(2j * grid.theta_values))
        b = WaveState.from_samples(grid, np.exp(5j * grid.theta_values))
        assert abs(inner_product(a, b)) < 1e-12

    def test_hermitian_symmetry_exact(self):
        grid = make_grid(64)
        rng = np.random.RandomState(11)
        a = WaveState.from_samples(grid, rng.randn(64) + 1j * rng.randn(64))
        b = WaveState.from_samples(grid, rng.randn(64) + 1j * rng.randn(64))
        assert inner_product(a, b) == np.conj(inner_product(b, a))

    def test_grid_mismatch(self):
        a = make_gaussian(make_grid(64), 10.0)
        b = make_gaussian(make_grid(128), 10.0)
        with pytest.raises(ValueError):
            inner_product(a, b)
