"""Moments, fidelity, distance, translation correlator, pair and echo runs."""

import math

import numpy as np
import pytest

from ngpmap import (
    ModelParams,
    WaveState,
    distance,
    fidelity,
    floquet_step,
    fotoc,
    inner_product,
    make_gaussian,
    make_grid,
    mean_energy,
    mean_momentum,
    run_loschmidt_experiment,
    run_pair_experiment,
    translate,
)


class TestMoments:
    def test_plane_wave_eigenvalues(self):
        grid = make_grid(512)
        state = WaveState.from_samples(grid, np.exp(3j * grid.theta_values))
        params = ModelParams(g=1.0, hbar_eff=1.0)
        assert mean_momentum(state, params) == pytest.approx(3.0, abs=1e-12)
        assert mean_energy(state, params) == pytest.approx(9.0, abs=1e-12)

    def test_hbar_scaling(self):
        grid = make_grid(512)
        state = WaveState.from_samples(grid, np.exp(3j * grid.theta_values))
        params = ModelParams(g=1.0, hbar_eff=0.5)
        assert mean_momentum(state, params) == pytest.approx(1.5, abs=1e-12)

    def test_gaussian_moments(self):
        grid = make_grid(4096)
        state = make_gaussian(grid, 10.0)
        params = ModelParams(g=1.0, hbar_eff=1.0)
        assert abs(mean_momentum(state, params)) < 1e-10
        assert mean_energy(state, params) == pytest.approx(5.0, rel=1e-3)

    def test_scaling_invariance(self):
        grid = make_grid(256)
        base = make_gaussian(grid, 10.0)
        params = ModelParams(g=1.0)
        doubled = WaveState.from_samples(grid, 2.0 * base.amplitudes)
        assert mean_energy(doubled, params) == mean_energy(base, params)
        relabelled = WaveState(grid, base.amplitudes, 7.0)
        assert mean_energy(relabelled, params) == mean_energy(base, params)


class TestFidelityDistance:
    def test_self_fidelity(self):
        state = make_gaussian(make_grid(512), 10.0)
        assert fidelity(state, state) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_plane_waves(self):
        grid = make_grid(512)
        a = WaveState.from_samples(grid, np.exp(2j * grid.theta_values))
        b = WaveState.from_samples(grid, np.exp(5j * grid.theta_values))
        assert fidelity(a, b) < 1e-24
        assert distance(a, b) == pytest.approx(1.0, abs=1e-12)

    def test_log_amplitude_invariance(self):
        grid = make_grid(256)
        a = make_gaussian(grid, 10.0)
        b = translate(a, 0.3)
        b_big = WaveState(grid, b.amplitudes, 123.0)
        assert fidelity(a, b_big) == fidelity(a, b)

    def test_identical_states_distance_zero(self):
        state = make_gaussian(make_grid(256), 10.0)
        assert distance(state, state) == 0.0

    def test_small_shift_distance_matches_variance(self):
        grid = make_grid(4096)
        sigma, eps = 10.0, 1e-5
        state = make_gaussian(grid, sigma)
        d = distance(state, translate(state, eps))
        exact = 1.0 - math.exp(-sigma * eps**2 / 2)
        assert d == pytest.approx(exact, rel=1e-2)

    def test_grid_mismatch(self):
        with pytest.raises(ValueError):
            distance(make_gaussian(make_grid(64), 10.0), make_gaussian(make_grid(128), 10.0))


class TestFotoc:
    def test_zero_shift_is_exactly_one(self):
        state = make_gaussian(make_grid(256), 10.0)
        assert fotoc(state, 0.0) == 1.0

    def test_small_shift_deficit(self):
        grid = make_grid(4096)
        state = make_gaussian(grid, 10.0)
        assert 1.0 - fotoc(state, 1e-5) == pytest.approx(5e-10, rel=1e-2)

    def test_matches_distance_along_trajectory(self):
        # the distance and correlator routes must agree at grid-step shifts
        grid = make_grid(1024)
        state = make_gaussian(grid, 10.0)
        params = ModelParams(g=1.0, eta=0.01)
        traj = run_pair_experiment(state, params, grid.dtheta, 30)
        worst = max(abs(r.distance - r.one_minus_fotoc) for r in traj.records)
        assert worst < 1e-8


class TestPairExperiment:
    def test_rejects_zero_epsilon(self):
        state = make_gaussian(make_grid(256), 10.0)
        with pytest.raises(ValueError):
            run_pair_experiment(state, ModelParams(g=1.0), 0.0, 5)

    def test_linear_unitary_distance_constant(self):
        grid = make_grid(512)
        state = make_gaussian(grid, 10.0)
        traj = run_pair_experiment(state, ModelParams(g=0.0, eta=0.0), 1e-5, 100)
        d = [r.distance for r in traj.records]
        assert max(abs(v - d[0]) for v in d) < 1e-12

    def test_records_have_pair_fields(self):
        grid = make_grid(512)
        state = make_gaussian(grid, 10.0)
        traj = run_pair_experiment(state, ModelParams(g=1.0, eta=0.01), 1e-5, 10)
        assert len(traj.records) == 11
        for r in traj.records:
            assert 0.0 <= r.distance <= 1.0 + 1e-9
            assert 0.0 <= r.one_minus_fotoc <= 1.0 + 1e-9
            assert r.one_minus_le is None
        assert traj.partner_state is not None

    def test_fidelity_chain_identity(self):
        # pair overlap equals the translation expectation on the single state
        grid = make_grid(512)
        psi = make_gaussian(grid, 10.0)
        params = ModelParams(g=1.0, eta=0.02)
        eps = 3 * grid.dtheta
        phi = translate(psi, -eps)
        for _ in range(10):
            psi = floquet_step(psi, params)
            phi = floquet_step(phi, params)
        pair_overlap = inner_product(phi, psi)
        single_overlap = inner_product(psi, translate(psi, -eps))
        # symmetric initial state: the two coincide as complex numbers
        assert pair_overlap == pytest.approx(single_overlap, abs=1e-10)

    def test_guard_termination_recorded(self):
        grid = make_grid(256)
        state = make_gaussian(grid, 10.0)
        traj = run_pair_experiment(state, ModelParams(g=1.0, eta=0.05), 1e-5, 500)
        assert traj.terminated == "truncation"
        assert traj.records[-1].terminated == "truncation"
        assert traj.terminated_at == traj.records[-1].kick_index


class TestLoschmidtExperiment:
    def test_zero_perturbation_echo_stays_one(self):
        grid = make_grid(512)
        state = make_gaussian(grid, 10.0)
        traj = run_loschmidt_experiment(state, ModelParams(g=1.0, eta=0.0), 0.0, 50)
        assert max(r.one_minus_le for r in traj.records) < 1e-12

    def test_echo_decays_under_perturbation(self):
        grid = make_grid(2048)
        state = make_gaussian(grid, 10.0)
        traj = run_loschmidt_experiment(state, ModelParams(g=1.0, eta=0.0), 1e-5, 60)
        y = [r.one_minus_le for r in traj.records]
        assert y[0] == 0.0
        assert y[-1] > 100 * max(y[1], 1e-300)
        for r in traj.records:
            assert r.distance is None and r.one_minus_fotoc is None

    def test_small_distance_energy_relation(self):
        # while D is small it must track (eps/hbar)^2 * var(p)
        grid = make_grid(4096)
        state = make_gaussian(grid, 10.0)
        params = ModelParams(g=1.0, eta=0.01, hbar_eff=1.0)
        traj = run_pair_experiment(state, params, 1e-5, 50)
        checked = 0
        for r in traj.records:
            if r.terminated is None and 0.0 < r.distance < 1e-3:
                predicted = 1e-10 * r.variance_p
                assert abs(r.distance - predicted) / r.distance < 0.05
                checked += 1
        assert checked > 10
