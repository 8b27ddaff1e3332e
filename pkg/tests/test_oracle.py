import math

import numpy as np
import pytest

from ncphase import (
    GaussianState,
    GridResolutionError,
    InvalidArgumentError,
    TruncationError,
    UnsupportedStateError,
    coefficients,
    evolve_unitary,
    fidelity,
    make_initial_state,
    params_from_b0,
    propagator,
    reduce_to_mode,
    thermal_state,
)
from ncphase import oracle


def displaced_thermal(n_bar, d):
    return GaussianState(np.asarray(d, float), (2 * n_bar + 1) * np.eye(2))


def test_gridspec_validation():
    with pytest.raises(InvalidArgumentError):
        oracle.GridSpec(((-1, 1),), (32,))
    with pytest.raises(InvalidArgumentError):
        oracle.GridSpec(((1, -1),), (64,))
    assert oracle.GridSpec.uniform(2).points == (257, 257)


@pytest.mark.parametrize("state", [
    thermal_state(0),
    GaussianState([1.0, 1.0], np.eye(2)),
    thermal_state(2),
    GaussianState([-0.5, 0.8], [[2.0, 0.7], [0.7, 1.5]]),
])
def test_grid_moments_one_mode(state):
    d, sigma = oracle.grid_moments(state)
    np.testing.assert_allclose(d, state.d, atol=1e-6)
    np.testing.assert_allclose(sigma, state.sigma, atol=1e-6)


def test_grid_moments_converged():
    s = GaussianState([0.3, -0.2], [[3.0, 0.4], [0.4, 2.0]])
    d1, s1 = oracle.grid_moments(s, oracle.GridSpec.uniform(2, points=257))
    d2, s2 = oracle.grid_moments(s, oracle.GridSpec.uniform(2, points=513))
    assert np.max(np.abs(d1 - d2)) < 1e-7
    assert np.max(np.abs(s1 - s2)) < 1e-7


def test_grid_moments_two_mode_correlated():
    S = propagator(coefficients(params_from_b0(1.0)), 0.7)
    s = evolve_unitary(make_initial_state(1, 0, 1, 0), S)
    d, sigma = oracle.grid_moments(s)
    np.testing.assert_allclose(d, s.d, atol=1e-6)
    np.testing.assert_allclose(sigma, s.sigma, atol=1e-6)


def test_grid_resolution_error():
    with pytest.raises(GridResolutionError):
        oracle.grid_moments(thermal_state(2), oracle.GridSpec.uniform(2, bound=2.0))


def test_grid_marginal_vacuum():
    x, p = oracle.grid_marginal(thermal_state(0), 0)
    np.testing.assert_allclose(p, np.exp(-x**2) / math.sqrt(math.pi), atol=1e-12)
    assert np.all(p >= 0)


def test_grid_marginal_two_mode_matches_reduction():
    S = propagator(coefficients(params_from_b0(1.0)), 0.7)
    s = evolve_unitary(make_initial_state(0.5, -0.4, 1.0, 0.2), S)
    r = reduce_to_mode(s, 0)
    for axis in (0, 1):
        x, p = oracle.grid_marginal(s, axis)
        var = r.sigma[axis, axis]
        expected = np.exp(-(x - r.d[axis]) ** 2 / var) / math.sqrt(math.pi * var)
        np.testing.assert_allclose(p, expected, atol=1e-6)


@pytest.mark.parametrize("state", [thermal_state(3), GaussianState([1, 2], [[2.0, -0.5], [-0.5, 1.0]])])
def test_grid_marginal_normalized(state):
    for axis in (0, 1):
        x, p = oracle.grid_marginal(state, axis)
        assert np.trapezoid(p, x) == pytest.approx(1.0, abs=1e-6)


def test_grid_marginal_axis_range():
    with pytest.raises(InvalidArgumentError):
        oracle.grid_marginal(thermal_state(0), 2)


def test_overlap_values():
    vac = thermal_state(0)
    assert oracle.overlap(vac, vac) == pytest.approx(1.0, abs=1e-6)
    assert oracle.overlap(vac, thermal_state(2)) == pytest.approx(1 / 3, abs=1e-6)
    far = GaussianState([5.0, 0.0], np.eye(2))
    near = GaussianState([-5.0, 0.0], np.eye(2))
    assert oracle.overlap(far, near) < 1e-8


def test_overlap_symmetric_and_matches_pure_fidelity():
    coh = GaussianState([1.0, 1.0], np.eye(2))
    th = thermal_state(2)
    assert oracle.overlap(coh, th) == pytest.approx(oracle.overlap(th, coh), abs=1e-12)
    # for a pure state Tr[rho1 rho2] is the fidelity
    assert oracle.overlap(coh, th) == pytest.approx(fidelity(coh, th), abs=1e-6)


@pytest.mark.parametrize("n_bar, d", [(0, [0, 0]), (1.5, [0.5, -1.0]), (3, [2.0, 1.0])])
def test_overlap_purity_matches_fock(n_bar, d):
    s = displaced_thermal(n_bar, d)
    assert oracle.overlap(s, s) == pytest.approx(oracle.fock_purity(s), abs=1e-6)
    assert oracle.fock_purity(s) == pytest.approx(1 / (2 * n_bar + 1), abs=1e-8)


def test_displacement_matrix_is_unitary_on_low_block():
    D = oracle.displacement_matrix(0.8 - 0.6j, 120)
    block = (D @ D.conj().T)[:40, :40]
    np.testing.assert_allclose(block, np.eye(40), atol=1e-12)


def test_displacement_matrix_coherent_column():
    # D(alpha)|0> is the coherent state with Poisson amplitudes
    alpha = 1.1 + 0.4j
    col = oracle.displacement_matrix(alpha, 30)[:, 0]
    n = np.arange(30)
    expected = np.exp(-abs(alpha) ** 2 / 2) * alpha**n / np.sqrt([float(math.factorial(k)) for k in n])
    np.testing.assert_allclose(col, expected, atol=1e-14)


def test_fock_density_properties():
    rho = oracle.displaced_thermal_density(displaced_thermal(2, [1.0, -0.5]), 80)
    assert rho.trace_deficit < 1e-5
    np.testing.assert_allclose(rho.matrix, rho.matrix.conj().T, atol=1e-12)
    n = np.arange(80)
    mean_n = float(np.real(np.trace(rho.matrix * n)))
    # <n> = n_bar + |alpha|^2 with |alpha|^2 = |d|^2 / 2
    assert mean_n == pytest.approx(2 + 1.25 / 2, abs=1e-4)


def test_fock_vacuum_pair():
    assert oracle.fock_fidelity(thermal_state(0), thermal_state(0)) == pytest.approx(1.0, abs=1e-12)


def test_fock_thermal_pair():
    f = oracle.fock_fidelity(thermal_state(1), thermal_state(2), 80)
    assert f == pytest.approx(0.9330127, abs=1e-7)
    assert f == pytest.approx((math.sqrt(6) - math.sqrt(2)) ** -2, abs=1e-9)


def test_fock_coherent_vs_thermal():
    f = oracle.fock_fidelity(GaussianState([1.0, 1.0], np.eye(2)), thermal_state(2), 80)
    assert f == pytest.approx(math.exp(-1 / 3) / 3, abs=1e-7)


def test_fock_symmetric():
    a, b = displaced_thermal(1.2, [1.0, -2.0]), displaced_thermal(3.0, [0.0, 1.5])
    assert oracle.fock_fidelity(a, b) == pytest.approx(oracle.fock_fidelity(b, a), abs=1e-9)


def test_fock_rejects_squeezed():
    with pytest.raises(UnsupportedStateError):
        oracle.fock_fidelity(GaussianState([0, 0], np.diag([2.0, 0.5])), thermal_state(0))


def test_fock_truncation_error():
    with pytest.raises(TruncationError):
        oracle.displaced_thermal_density(thermal_state(4), 20)
