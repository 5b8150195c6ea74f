import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from crowent.biphoton import BiphotonMatrix, PumpConfig, biphoton_full, build_grid, separable_biphoton
from crowent.dispersion import CrowParams
from crowent.schmidt import reconstruct, schmidt_decompose, svd

from conftest import decompose

METHODS = ["lapack", "jacobi"]


def random_complex(seed, m, n):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))


@pytest.mark.parametrize("method", METHODS)
def test_rank_one(method):
    u = np.array([1.0, 2.0, -1.0j, 0.5])
    v = np.array([0.3, 1j, 2.0])
    res = svd(np.outer(u, v.conj()), method)
    assert res.d[0] == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v), rel=1e-13)
    assert np.all(res.d[1:] < 1e-14 * res.d[0])


@pytest.mark.parametrize("method", METHODS)
def test_identity(method):
    np.testing.assert_allclose(svd(np.eye(3), method).d, [1, 1, 1], atol=1e-15)


@pytest.mark.parametrize("method", METHODS)
@pytest.mark.parametrize("shape", [(32, 32), (40, 25), (25, 40)])
def test_random_reconstruction(method, shape):
    a = random_complex(1234, *shape)
    res = svd(a, method)
    assert np.linalg.norm(res.reconstruct() - a) < 1e-10 * np.linalg.norm(a)
    r = res.U.shape[1]
    np.testing.assert_allclose(res.U.conj().T @ res.U, np.eye(r), atol=1e-12)
    np.testing.assert_allclose(res.V.conj().T @ res.V, np.eye(r), atol=1e-12)
    assert np.all(np.diff(res.d) <= 0)


@pytest.mark.parametrize("method", METHODS)
def test_phase_convention(method):
    res = svd(random_complex(7, 20, 12), method)
    top = res.U[np.argmax(np.abs(res.U), axis=0), np.arange(res.U.shape[1])]
    np.testing.assert_allclose(top.imag, 0, atol=1e-15)
    assert np.all(top.real > 0)


def test_backends_agree_on_biphoton(params):
    phi = biphoton_full(build_grid(96), params, PumpConfig(sigma_plus_D=0.14, sigma_minus_D=0.28))
    a, b = svd(phi.values, "lapack"), svd(phi.values, "jacobi")
    np.testing.assert_allclose(a.d[:8], b.d[:8], rtol=1e-10)
    np.testing.assert_allclose(a.U[:, :8], b.U[:, :8], atol=1e-10)


def test_deterministic(params):
    phi = biphoton_full(build_grid(128), params, PumpConfig(sigma_plus_D=0.14, sigma_minus_D=0.28))
    a, b = svd(phi.values), svd(phi.values.copy())
    assert np.array_equal(a.d, b.d) and np.array_equal(a.U, b.U) and np.array_equal(a.V, b.V)


def test_degenerate_ties_are_ordered_deterministically():
    a = np.diag([2.0, 1.0, 1.0, 1.0]).astype(complex)
    res = svd(a)
    np.testing.assert_allclose(res.d, [2, 1, 1, 1])
    assert np.linalg.norm(res.reconstruct() - a) < 1e-14


def test_non_finite_rejected():
    with pytest.raises(FloatingPointError):
        svd(np.array([[1.0, np.nan]]))


@settings(max_examples=30, deadline=None)
@given(arrays(np.complex128, st.tuples(st.integers(1, 12), st.integers(1, 12)),
              elements=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)))
def test_svd_property(a):
    res = svd(a)
    scale = max(np.linalg.norm(a), 1e-300)
    assert np.linalg.norm(res.reconstruct() - a) <= 1e-10 * scale + 1e-300
    assert np.all(res.d >= 0) and np.all(np.diff(res.d) <= 1e-12 * (res.d[0] if res.d.size else 0))


def test_separable_has_single_mode():
    dec = schmidt_decompose(separable_biphoton(build_grid(128), 1.3, 0.2, 0.35), 2.2)
    assert dec.p[0] == pytest.approx(1.0, abs=1e-10)
    assert dec.rank == 1
    assert dec.r[0] == pytest.approx(2.2, abs=1e-9)


@pytest.mark.parametrize("config", ["A", "B", "C"])
def test_decomposition_invariants(params, config):
    phi, dec = decompose(params, 0.5, config)
    assert dec.p_total == pytest.approx(1.0, abs=1e-10)
    assert np.all(dec.p > 0) and np.all(np.diff(dec.p) <= 0)
    eye = np.eye(dec.rank)
    np.testing.assert_allclose(dec.mu.conj().T @ dec.mu * dec.dk, eye, atol=1e-10)
    np.testing.assert_allclose(dec.nu.conj().T @ dec.nu * dec.dk, eye, atol=1e-10)
    # kept modes span the range of phi
    q = dec.mu * math.sqrt(dec.dk)
    resid = phi.values - q @ (q.conj().T @ phi.values)
    # weight left outside the kept modes equals the truncated tail
    lost = np.sum(np.abs(resid) ** 2) * dec.dk**2
    assert lost < 1e-8
    assert lost == pytest.approx(dec.p_total - dec.p.sum(), abs=1e-13)
    assert 1.0 < dec.schmidt_number < np.inf


def test_reconstruction(params):
    phi, dec = decompose(params, 0.65, "B")
    full = schmidt_decompose(phi, 2.2, trunc_tol=0.0)
    assert np.linalg.norm(reconstruct(full) - phi.values) < 1e-10 * np.linalg.norm(phi.values)


def test_eckart_young(params):
    phi, dec = decompose(params, 0.5, "B", n_half=256)
    # drop the tail carrying ~1e-4 of the weight
    cum = np.cumsum(dec.p[::-1])[::-1]
    keep = int(np.argmax(cum < 1e-4))
    eps = dec.p[keep:].sum()
    resid = np.sum(np.abs(reconstruct(dec.truncated(keep)) - phi.values) ** 2) * dec.dk**2
    assert resid == pytest.approx(eps, rel=1e-6)


def test_rank_one_keep_one_is_exact():
    phi = separable_biphoton(build_grid(64), 1.0, 0.3, 0.3)
    dec = schmidt_decompose(phi, 1.0).truncated(1)
    np.testing.assert_allclose(reconstruct(dec), phi.values, atol=1e-12)


def test_unnormalized_rejected():
    g = build_grid(8)
    with pytest.raises(ValueError):
        schmidt_decompose(BiphotonMatrix(g, np.ones((8, 8), complex)), 1.0)


def test_grid_convergence(params):
    for config in ("A", "B"):
        p1 = [decompose(params, 0.5, config, n_half=n)[1].p[0] for n in (512, 1024)]
        assert abs(p1[0] - p1[1]) < 1e-6


def test_mode_mirror_symmetry(params):
    _, dec = decompose(params, 0.35, "B")
    gaps = np.abs(np.diff(dec.p)) / dec.p[:-1]
    for lam in range(6):
        if gaps[lam] > 1e-6 and (lam == 0 or gaps[lam - 1] > 1e-6):
            # k2[j] = -k1[j]
            np.testing.assert_allclose(np.abs(dec.mu[:, lam]), np.abs(dec.nu[:, lam]), atol=1e-8)


def test_rerun_bitwise(params):
    _, a = decompose(params, 0.65, "C", n_half=128)
    _, b = decompose(params, 0.65, "C", n_half=128)
    assert np.array_equal(a.p, b.p) and np.array_equal(a.mu, b.mu) and np.array_equal(a.nu, b.nu)
