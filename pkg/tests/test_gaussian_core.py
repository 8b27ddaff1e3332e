import numpy as np
import pytest
from scipy.special import erf

from ncphase import (
    GaussianState,
    InvalidArgumentError,
    NumericalDegeneracyError,
    check_bona_fide,
    coefficients,
    evolve_unitary,
    make_initial_state,
    params_from_b0,
    propagator,
    reduce_to_mode,
    symplectic_form,
    thermal_state,
    wigner_eval,
)
from ncphase.gaussian_core import wigner_density
from ncphase.oracle import GridSpec, grid_moments


@pytest.mark.parametrize(
    "args, d",
    [
        ((0, 0, 0, 0), [0, 0, 0, 0]),
        ((1, 0, 1, 0), [1, 1, 0, 0]),
        ((2, -1, 0.5, 3), [2, 0.5, -1, 3]),
    ],
)
def test_make_initial_state(args, d):
    s = make_initial_state(*args)
    assert s.modes == 2
    np.testing.assert_array_equal(s.d, d)
    np.testing.assert_array_equal(s.sigma, np.eye(4))


def test_make_initial_state_rejects_nonfinite():
    with pytest.raises(InvalidArgumentError):
        make_initial_state(np.nan, 0, 0, 0)
    with pytest.raises(InvalidArgumentError):
        make_initial_state(0, 0, np.inf, 0)


@pytest.mark.parametrize("m_bar, diag", [(0, 1.0), (2, 5.0), (4, 9.0)])
def test_thermal_state(m_bar, diag):
    s = thermal_state(m_bar)
    np.testing.assert_array_equal(s.sigma, diag * np.eye(2))
    np.testing.assert_array_equal(s.d, [0, 0])


def test_thermal_state_rejects_negative():
    with pytest.raises(InvalidArgumentError):
        thermal_state(-0.1)


@pytest.mark.parametrize("m_bar", [0.0, 0.3, 1.0, 2.0, 7.25])
def test_thermal_symplectic_eigenvalue(m_bar):
    nus, ok = check_bona_fide(thermal_state(m_bar).sigma)
    assert ok
    assert nus[0] == pytest.approx(2 * m_bar + 1, rel=1e-15)


@pytest.mark.parametrize(
    "sigma, nu, valid",
    [(np.eye(2), 1.0, True), (0.5 * np.eye(2), 0.5, False), (5 * np.eye(2), 5.0, True)],
)
def test_check_bona_fide(sigma, nu, valid):
    nus, ok = check_bona_fide(sigma)
    np.testing.assert_allclose(nus, [nu])
    assert ok is valid


def test_check_bona_fide_two_mode():
    sigma = np.diag([3.0, 3.0, 1.0, 1.0])
    nus, ok = check_bona_fide(sigma)
    np.testing.assert_allclose(nus, [1.0, 3.0])
    assert ok


def test_check_bona_fide_rejects_asymmetric():
    with pytest.raises(InvalidArgumentError):
        check_bona_fide(np.array([[1.0, 0.1], [0.0, 1.0]]))


def test_state_rejects_unphysical_and_mismatched():
    with pytest.raises(InvalidArgumentError):
        GaussianState([0, 0], 0.5 * np.eye(2))
    with pytest.raises(InvalidArgumentError):
        GaussianState([0, 0, 0], np.eye(2))


def test_state_is_immutable():
    s = thermal_state(1)
    with pytest.raises(ValueError):
        s.sigma[0, 0] = 2.0


def test_symplectic_form():
    J = symplectic_form(2)
    np.testing.assert_array_equal(J, -J.T)
    np.testing.assert_array_equal(J @ J, -np.eye(4))


def test_reduce_product_state():
    sigma = np.diag([2.0, 3.0, 5.0, 0.2 + 5.0])
    sigma[0, 1] = sigma[1, 0] = 0.5
    s = GaussianState([1, 2, 3, 4], sigma)
    r0, r1 = reduce_to_mode(s, 0), reduce_to_mode(s, 1)
    np.testing.assert_array_equal(r0.sigma, sigma[:2, :2])
    np.testing.assert_array_equal(r1.sigma, sigma[2:, 2:])
    np.testing.assert_array_equal(r1.d, [3, 4])


def test_reduce_isotropic():
    s = GaussianState(np.zeros(4), 5 * np.eye(4))
    np.testing.assert_array_equal(reduce_to_mode(s, 0).sigma, 5 * np.eye(2))


def test_reduce_out_of_range():
    with pytest.raises(InvalidArgumentError):
        reduce_to_mode(make_initial_state(0, 0, 0, 0), 2)


def test_reduce_correlated_matches_grid_oracle():
    S = propagator(coefficients(params_from_b0(1.0)), 0.7)
    s = evolve_unitary(make_initial_state(0.4, -0.3, 0.2, 0.6), S)
    d_grid, sigma_grid = grid_moments(s)
    r = reduce_to_mode(s, 0)
    np.testing.assert_allclose(r.d, d_grid[:2], atol=1e-6)
    np.testing.assert_allclose(r.sigma, sigma_grid[:2, :2], atol=1e-6)


def test_wigner_vacuum_origin():
    assert wigner_eval(make_initial_state(0, 0, 0, 0), np.zeros(4)) == pytest.approx(1 / np.pi**2, rel=1e-15)


def test_wigner_thermal_origin():
    assert wigner_eval(thermal_state(2), [0, 0]) == pytest.approx(1 / (5 * np.pi), rel=1e-15)


def test_wigner_maximum_at_mean():
    sigma = np.array([[2.0, 0.3], [0.3, 1.5]])
    s = GaussianState([0.7, -1.1], sigma)
    peak = wigner_eval(s, s.d)
    assert peak == pytest.approx(1 / (np.pi * np.sqrt(np.linalg.det(sigma))))
    rng = np.random.default_rng(3)
    for R in s.d + rng.normal(size=(20, 2)):
        assert 0 < wigner_eval(s, R) < peak


@pytest.mark.parametrize(
    "d, sigma",
    [
        ([0, 0], np.eye(2)),
        ([1, -1], np.eye(2)),
        ([0, 0], 5 * np.eye(2)),
        ([0.5, 0.2], np.array([[4.0, 1.5], [1.5, 2.0]])),
        ([0, 0], np.diag([7.0, 7.0])),
    ],
)
def test_wigner_normalization(d, sigma):
    x = np.linspace(-10, 10, 801)
    Q, P = np.meshgrid(x, x, indexing="ij")
    W = wigner_density(d, sigma, np.stack([Q, P], axis=-1))
    assert np.trapezoid(np.trapezoid(W, x, axis=1), x) == pytest.approx(1.0, abs=1e-6)


def test_wigner_box_mass_wide_state():
    # variance nu/2 per axis: the [-10, 10]^2 box holds erf(10/sqrt(nu))^2 of the mass
    nu = 10.0
    x = np.linspace(-10, 10, 801)
    Q, P = np.meshgrid(x, x, indexing="ij")
    W = wigner_density([0, 0], nu * np.eye(2), np.stack([Q, P], axis=-1))
    mass = np.trapezoid(np.trapezoid(W, x, axis=1), x)
    assert mass == pytest.approx(erf(10 / np.sqrt(nu)) ** 2, abs=1e-8)


def test_wigner_dimension_and_singular():
    with pytest.raises(InvalidArgumentError):
        wigner_eval(thermal_state(0), [0, 0, 0])
    with pytest.raises(NumericalDegeneracyError):
        wigner_density([0, 0], np.zeros((2, 2)), [0, 0])


def test_purity_preserved_under_evolution():
    c = coefficients(params_from_b0(1.0))
    s0 = make_initial_state(1, 0.5, -0.2, 0.3)
    for t in np.linspace(0, 30, 31):
        s = evolve_unitary(s0, propagator(c, t))
        assert np.linalg.det(s.sigma) == pytest.approx(1.0, abs=1e-10)


def test_grid_default_is_fine_enough_for_reduction():
    # the default two-mode grid must satisfy the >= 64 point floor
    assert min(GridSpec.uniform(4).points) >= 64
