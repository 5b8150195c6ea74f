import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crowent import evolution as ev
from crowent import oracle
from crowent.dispersion import CrowParams

from conftest import decompose


def test_zero_squeezing_is_vacuum():
    state = oracle.fock_build(0.0, 20).state
    assert abs(state[0]) == pytest.approx(1.0)
    assert np.allclose(state[1:], 0)


def test_cutoff_forty_at_unit_squeezing():
    mom = oracle.fock_expectations(oracle.fock_build(1.0, 40))
    assert mom.n_B == pytest.approx(math.sinh(1.0) ** 2, rel=1e-8)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 1.5))
def test_amplitudes_follow_tanh(r):
    tmsv = oracle.fock_build(r, oracle.fock_cutoff(r))
    # the top rungs feel the cutoff; the low ones must be exact
    low = tmsv.n_max // 2
    np.testing.assert_allclose(tmsv.state.real[:low], oracle.analytic_amplitudes(r, tmsv.n_max)[:low], atol=1e-10)
    assert np.abs(tmsv.state.imag).max() < 1e-12


@pytest.mark.parametrize("r", [0.1, 0.5, 1.0, 1.5])
def test_fock_moments(r):
    mom = oracle.fock_expectations(oracle.fock_build(r, oracle.fock_cutoff(r)))
    assert mom.n_B == pytest.approx(math.sinh(r) ** 2, rel=1e-10)
    assert mom.BC.real == pytest.approx(math.cosh(r) * math.sinh(r), rel=1e-10)
    assert mom.duan_min == pytest.approx(4 * math.exp(-2 * r), rel=1e-9)


def test_duan_minimum_at_half():
    mom = oracle.fock_expectations(oracle.fock_build(0.5, 60))
    assert mom.duan_min == pytest.approx(1.4715177646857693, rel=1e-10)


def test_leakage_detected():
    with pytest.raises(oracle.TruncationError):
        oracle.fock_build(1.5, 60)


def test_small_cutoff_rejected():
    with pytest.raises(ValueError):
        oracle.fock_build(0.5, 5)


def test_sign_calibration():
    assert oracle.calibrate_sign() == ev.ANOMALOUS_SIGN
    assert oracle.calibrate_sign(0.3, 60) == oracle.calibrate_sign(1.0, 80)


def test_wrong_sign_breaks_mode_duan():
    dec = oracle.single_mode_decomposition(0.5)
    good = oracle.mode_moments(dec, ev.build_correlators(dec, +1))
    bad = oracle.mode_moments(dec, ev.build_correlators(dec, -1))
    assert good.duan_theta0 == pytest.approx(4 * math.exp(-1.0), rel=1e-10)
    assert bad.duan_theta0 > 4


@pytest.mark.parametrize("config", ["A", "B", "C"])
@pytest.mark.parametrize("theta", [0.0, 0.9, math.pi])
def test_covariance_route_matches(params, config, theta):
    _, dec = decompose(params, 0.65, config, n_half=128)
    corr = ev.build_correlators(dec)
    t = [0.0, 20.0, 45.0]
    traj = ev.evolve(corr, params, 40, -40, t)
    for i, ti in enumerate(t):
        cov = oracle.covariance_route_delta2(dec, params, 40, -40, ti, theta=theta)
        assert cov == pytest.approx(traj.variance(theta)[i], abs=1e-8)


def test_covariance_is_physical(params):
    _, dec = decompose(params, 0.5, "B", n_half=96)
    normal, anomalous = oracle.cavity_moments(dec, params, [40, -40], 40.0, ev.ANOMALOUS_SIGN)
    cov = oracle.quadrature_covariance(normal, anomalous)
    np.testing.assert_allclose(cov, cov.T, atol=1e-12)
    # uncertainty principle: V + i Omega >= 0
    omega = np.kron(np.eye(2), np.array([[0, 1], [-1, 0]]))
    assert np.linalg.eigvalsh(cov + 1j * omega).min() > -1e-10


def test_vg_fd_band_bottom(params):
    assert oracle.vg_fd_check(params, 0.0, 1e-4) < 1e-9


def test_vg_fd_converges_quadratically(params):
    coarse = oracle.vg_fd_check(params, 1.0, 1e-2)
    fine = oracle.vg_fd_check(params, 1.0, 1e-3)
    assert coarse / fine == pytest.approx(100, rel=0.01)


def test_vg_fd_bad_step(params):
    with pytest.raises(ValueError):
        oracle.vg_fd_check(params, 1.0, 0.0)


def test_suite_passes(params):
    report = oracle.run_suite(params)
    assert report and all(row["pass"] for row in report)
