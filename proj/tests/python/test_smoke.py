import math

import numpy as np
import pytest

import fuzzyspec as fz


def test_interval_deficiency_indices():
    op = fz.build_interval_derivative(copies=2, n=64)
    rep = fz.deficiency_indices(op)
    assert rep["r_plus"] == 2
    assert rep["r_minus"] == 2
    assert rep["classification"] == "fuzzy-A"
    assert fz.check_symmetry(op) < 1e-10


def test_halfline_is_fuzzy_b():
    op = fz.build_halfline_derivative(n=256, length=12.0)
    rep = fz.deficiency_indices(op)
    assert {rep["r_plus"], rep["r_minus"]} == {0, 1}
    assert rep["classification"] == "fuzzy-B"


def test_boundary_extension_spectrum_matches_theta_plus_2pin():
    op = fz.build_interval_derivative(copies=1, n=64, backend="spectral")
    theta = math.pi / 3.0
    mu = np.asarray(fz.boundary_extension_spectrum(op, theta))
    resolved = mu[np.abs(mu) <= 16.0]
    n = np.round((resolved - theta) / (2.0 * math.pi))
    assert np.max(np.abs(resolved - (theta + 2.0 * math.pi * n))) < 1e-8


def test_min_uncertainty_interval_is_pi():
    op = fz.build_interval_derivative(copies=1, n=128, backend="finite-difference")
    dx, residual = fz.min_uncertainty(op, 0.5)
    assert abs(dx - math.pi) < 0.02 * math.pi
    assert residual < 1e-8


def test_min_uncertainty_infeasible_raises():
    m = np.diag([0.0, 1.0, 2.0, 3.0, 4.0, 5.0]).astype(complex)
    op = fz.build_matrix_model(m, domain_codim=0)
    with pytest.raises(fz.InfeasibleError):
        fz.min_uncertainty(op, 100.0)


def test_gup_sampler_clean():
    model = fz.build_beta_algebra(beta=1.0, cutoff=20.0, n=512)
    rep = fz.sample_gup(model, n_states=200, seed=3)
    assert rep["violations"] == 0
    assert rep["min_margin"] > 0.0
    assert fz.check_commutator(model) < 1e-2


def test_local_phase_errors():
    op = fz.build_interval_derivative(copies=1, n=256, backend="spectral")
    identity_error, phase_error = fz.local_phase_errors(
        op, theta=0.0, theta_prime=math.pi / 3.0, a=0.25
    )
    assert identity_error < 1e-8
    assert phase_error < 1e-8


def test_generated_algebra_dimension():
    m = np.diag([0.0, 0.3, 0.6, 0.9]).astype(complex)
    op = fz.build_matrix_model(m, domain_codim=1)
    assert fz.generated_algebra_dimension(op, 6, 3) == 16


def test_config_errors_surface_as_exceptions():
    with pytest.raises(fz.ConfigError):
        fz.build_interval_derivative(copies=1, n=4)
