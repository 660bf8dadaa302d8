import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parafermion.errors import DegenerateSolutionError, DomainError, NoSolutionError
from parafermion.params import LoopParams, fugacity_from_lambda, spin, spectral_from_angle
from parafermion.weights import (CROSSING, LoopWeights, boltzmann_weights, compute_weights,
                                 holo_matrix, holo_residuals, nullity, reduced_system,
                                 solve_holo_system)

PI = math.pi


def mp_weights(lam, u):
    mpmath.mp.dps = 30
    lam, u = mpmath.mpf(lam), mpmath.mpf(u)
    s = mpmath.sin
    a, b = s(3 * lam - u), s(u)
    return [float(v) for v in (
        a * b + s(2 * lam) * s(3 * lam), a * s(2 * lam), a * s(2 * lam),
        b * s(2 * lam), b * s(2 * lam), a * b, a * b,
        a * s(2 * lam - u), -s(lam - u) * b)]


def cosine(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))


def test_isotropic_saw_point_values():
    w = compute_weights(LoopParams.from_lambda(PI / 8))
    assert w[0] == pytest.approx(0.961940, abs=1e-6)
    assert w[1] == pytest.approx(0.392847, abs=1e-6)
    assert w[5] == pytest.approx(0.308658, abs=1e-6)
    assert w[7] == pytest.approx(0.108386, abs=1e-6)


@pytest.mark.parametrize("lam, u", [(PI / 8, 3 * PI / 16), (0.3, 0.2), (PI / 5, 0.9), (PI / 12, 0.05)])
def test_weights_against_high_precision(lam, u):
    np.testing.assert_allclose(boltzmann_weights(lam, u).rho, mp_weights(lam, u), rtol=1e-13, atol=1e-15)


def test_spectral_limits():
    lam = PI / 8
    w0 = boltzmann_weights(lam, 0.0).rho
    assert w0[3] == w0[4] == w0[5] == 0.0
    assert w0[0] == pytest.approx(math.sin(2 * lam) * math.sin(3 * lam))
    w3 = boltzmann_weights(lam, 3 * lam).rho
    np.testing.assert_allclose(w3[[1, 2, 5, 6, 7]], 0.0, atol=1e-15)


def test_sign_choices():
    w = boltzmann_weights(PI / 8, 0.4, eps1=-1, eps2=-1).rho
    ref = boltzmann_weights(PI / 8, 0.4).rho
    np.testing.assert_allclose(w[1:5], -ref[1:5])
    np.testing.assert_allclose(w[[0, 5, 6, 7, 8]], ref[[0, 5, 6, 7, 8]])


def test_loop_weights_validation():
    with pytest.raises(DomainError):
        LoopWeights(np.ones(8))
    with pytest.raises(DomainError):
        LoopWeights(np.zeros(9))
    with pytest.raises(DomainError):
        LoopWeights(np.array([1, 2, 3, 1, 1, 1, 1, 1, 1.0]))
    with pytest.raises(DomainError):
        LoopWeights(np.array([np.nan] * 9))
    w = LoopWeights.from_reduced([1, 2, 3, 4, 5, 6])
    assert list(w.rho) == [1, 2, 2, 3, 3, 4, 4, 5, 6]
    assert list(w.reduced) == [1, 2, 3, 4, 5, 6]
    with pytest.raises(ValueError):
        w.rho[0] = 7.0


def test_parameter_range_check_is_upstream():
    with pytest.raises(DomainError):
        compute_weights(LoopParams(lam=PI / 8, u=2.0, n=0.0, sigma=5 / 8, theta=PI / 2))


def _critical_point(lam, theta):
    sigma = spin(lam)
    return fugacity_from_lambda(lam), theta, sigma, spectral_from_angle(sigma, theta)


@pytest.mark.parametrize("lam", [PI / 12, PI / 8, PI / 6, PI / 5, 0.25, 0.7])
@pytest.mark.parametrize("theta", [0.3, PI / 3, PI / 2, 2 * PI / 3, 2.8])
def test_residuals_vanish_on_critical_weights(lam, theta):
    n, theta, sigma, u = _critical_point(lam, theta)
    r = holo_residuals(boltzmann_weights(lam, u), n, theta, sigma)
    assert np.max(np.abs(r)) < 1e-12


def test_residuals_mismatched_point():
    # spectral angle not tied to the embedding angle
    r = holo_residuals(boltzmann_weights(PI / 8, 0.3), 0.0, PI / 2, 5 / 8)
    assert np.max(np.abs(r)) > 1e-3


def test_literal_labels_only_at_isotropic_point():
    n, theta, sigma, u = _critical_point(PI / 8, PI / 2)
    w = boltzmann_weights(PI / 8, u)
    assert np.max(np.abs(holo_residuals(w, n, theta, sigma, crossed=False))) < 1e-12
    n, theta, sigma, u = _critical_point(PI / 8, 0.4 * PI)
    w = boltzmann_weights(PI / 8, u)
    assert np.max(np.abs(holo_residuals(w, n, theta, sigma, crossed=False))) > 1e-3
    assert np.max(np.abs(holo_residuals(w, n, theta, sigma, crossed=True))) < 1e-12


def test_crossing_is_involution():
    assert list(CROSSING[CROSSING]) == list(range(9))
    A = holo_matrix(0.3, 0.7, 0.4, crossed=False)
    B = holo_matrix(0.3, 0.7, 0.4, crossed=True)
    np.testing.assert_array_equal(B[:, CROSSING], A)


vec9 = st.lists(st.floats(-10, 10), min_size=9, max_size=9).map(np.array)


@given(vec9, vec9, st.floats(-3, 3), st.floats(-1.9, 2), st.floats(0.01, 3.1), st.floats(0.01, 0.99))
def test_residuals_are_linear(a, b, c, n, theta, sigma):
    lhs = holo_residuals(a + c * b, n, theta, sigma)
    rhs = holo_residuals(a, n, theta, sigma) + c * holo_residuals(b, n, theta, sigma)
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_reduced_system_shape_and_folding():
    R = reduced_system(0.0, PI / 2, 5 / 8)
    assert R.shape == (8, 6)
    w = boltzmann_weights(PI / 8, 3 * PI / 16)
    r = holo_residuals(w, 0.0, PI / 2, 5 / 8)
    np.testing.assert_allclose(R @ w.reduced, np.concatenate([r.real, r.imag]), atol=1e-14)


@pytest.mark.parametrize("lam", np.linspace(0.12, 0.75, 5))
@pytest.mark.parametrize("theta", np.linspace(0.35, 2.8, 5))
def test_solve_recovers_closed_form(lam, theta):
    n, theta, sigma, u = _critical_point(lam, theta)
    w = solve_holo_system(n, theta, sigma)
    assert abs(cosine(w.rho, boltzmann_weights(lam, u).rho)) > 1 - 1e-10
    assert np.linalg.norm(w.rho) == pytest.approx(1.0)
    assert w[0] >= 0


def test_solve_reports_no_solution():
    with pytest.raises(NoSolutionError):
        solve_holo_system(0.0, PI / 2, 0.33)


@pytest.mark.parametrize("lam, n", [(PI / 12, -1.0), (PI / 6, 1.0)])
def test_degenerate_points(lam, n):
    sigma = spin(lam)
    assert nullity(n, PI / 2, sigma) >= 2
    with pytest.raises(DegenerateSolutionError):
        solve_holo_system(n, PI / 2, sigma, continuation=False)
    w = solve_holo_system(n, PI / 2, sigma)
    u = spectral_from_angle(sigma, PI / 2)
    assert abs(cosine(w.rho, boltzmann_weights(lam, u).rho)) > 1 - 1e-10


def test_generic_nullity_is_one():
    n, theta, sigma, _ = _critical_point(PI / 8, 1.1)
    assert nullity(n, theta, sigma) == 1


@settings(max_examples=40, deadline=None)
@given(st.floats(-1.9, 2.0), st.floats(0.2, 2.9), st.floats(0.05, 0.95))
def test_off_manifold_has_no_solution(n, theta, sigma):
    lam = (1 - sigma) * PI / 3
    if abs(n - fugacity_from_lambda(lam)) < 0.1:
        return
    with pytest.raises(NoSolutionError):
        solve_holo_system(n, theta, sigma)
