"""Brute-force validators that share no code path with the production routes.

* a two-mode squeezed vacuum built by exponentiating the squeeze generator in a
  truncated pair-number basis,
* finite differences of the band frequency,
* the Duan sum assembled from a full 4x4 quadrature covariance matrix, with the
  cavity moments computed as explicit sums over Schmidt modes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import evolution
from .biphoton import BiphotonMatrix, build_grid
from .dispersion import CrowParams, complex_frequency, group_velocity
from .schmidt import SchmidtDecomposition, schmidt_decompose

LEAKAGE_TOL = 1e-8


class TruncationError(ValueError):
    """The Fock cutoff is too small for the requested squeezing."""


@dataclass(frozen=True)
class FockTmsv:
    """Amplitudes ``state[n]`` of |n, n> for a two-mode squeezed vacuum."""

    r: float
    n_max: int
    state: np.ndarray


def squeeze_generator(r: float, n_max: int) -> np.ndarray:
    """r (B^dag C^dag - B C) restricted to the pair states |n, n>, n = 0..n_max."""
    n = np.arange(1, n_max + 1, dtype=float)
    return r * (np.diag(n, -1) - np.diag(n, 1))


def fock_build(r: float, n_max: int = 60) -> FockTmsv:
    if n_max < 10:
        raise ValueError("n_max must be >= 10")
    if r < 0:
        raise ValueError("r must be non-negative")
    vac = np.zeros(n_max + 1, dtype=complex)
    vac[0] = 1.0
    state = expm(squeeze_generator(r, n_max)) @ vac
    # population that reaches the top rung has been reflected by the cutoff
    leak = float(np.sum(np.abs(state[-2:]) ** 2))
    if leak > LEAKAGE_TOL:
        raise TruncationError(f"truncation leakage {leak:.3e} at n_max={n_max} for r={r}")
    return FockTmsv(r, n_max, state)


def analytic_amplitudes(r: float, n_max: int) -> np.ndarray:
    return np.tanh(r) ** np.arange(n_max + 1) / np.cosh(r)


@dataclass(frozen=True)
class FockMoments:
    n_B: float
    n_C: float
    BC: complex

    @property
    def duan_min(self) -> float:
        return 4 + 4 * (self.n_B + self.n_C - 2 * abs(self.BC))

    @property
    def duan_theta0(self) -> float:
        return 4 + 4 * (self.n_B + self.n_C - 2 * self.BC.real)


def fock_expectations(tmsv: FockTmsv) -> FockMoments:
    c = tmsv.state
    n = np.arange(len(c))
    pop = np.abs(c) ** 2
    # B C |n, n> = n |n-1, n-1>
    bc = np.sum(c[:-1].conj() * c[1:] * n[1:])
    n_avg = float(np.sum(n * pop))
    return FockMoments(n_B=n_avg, n_C=n_avg, BC=complex(bc))


def vg_fd_check(params: CrowParams, kD: float, h: float) -> float:
    """Relative error of the analytic group velocity against a centred difference.

    Falls back to the absolute error where the group velocity vanishes.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    fd = (complex_frequency(params, kD + h).real - complex_frequency(params, kD - h).real) / (2 * h)
    vg = group_velocity(params, kD)
    err = abs(fd - vg)
    return err / abs(vg) if abs(vg) > 1e-14 else err


def _mode_amplitudes(modes: np.ndarray, kD: np.ndarray, omega: np.ndarray, p: int, t: float, dk: float) -> np.ndarray:
    """Weight of each Schmidt mode in a_p(t): sqrt(1/2pi) sum_k f(k) exp(ikp - i w_k t) dk."""
    wave = np.exp(1j * kD * p - 1j * omega * t)
    return wave @ modes * dk / math.sqrt(2 * math.pi)


def cavity_moments(dec: SchmidtDecomposition, params: CrowParams, cavities, t_tau: float, sign: int):
    """Normal and anomalous moment matrices of ``a_p(t)`` for the listed cavities.

    a_p = sum_l F_l(p) B_l + G_l(p) C_l (+ vacuum), and each (B_l, C_l) pair is
    an independent squeezed vacuum with <B^dag B> = sinh^2 r, <B C> = sign cosh r sinh r.
    """
    t = t_tau * params.tau
    g = dec.grid
    w1, w2 = complex_frequency(params, g.k1), complex_frequency(params, g.k2)
    F = np.array([_mode_amplitudes(dec.mu, g.k1, w1, p, t, g.dk) for p in cavities])
    G = np.array([_mode_amplitudes(dec.nu, g.k2, w2, p, t, g.dk) for p in cavities])
    occ = np.sinh(dec.r) ** 2
    pair = sign * np.cosh(dec.r) * np.sinh(dec.r)
    normal = (F.conj() * occ) @ F.T + (G.conj() * occ) @ G.T
    anomalous = (F * pair) @ G.T + (G * pair) @ F.T
    return normal, anomalous


def quadrature_covariance(normal: np.ndarray, anomalous: np.ndarray) -> np.ndarray:
    """Symmetrized covariance of (X_1, Y_1, X_2, Y_2, ...) for a zero-mean Gaussian state.

    X = a + a^dag, Y = -i (a - a^dag); vacuum contributes the identity.
    """
    m = normal.shape[0]
    # moments of xi = (a_1, a_1^dag, a_2, a_2^dag, ...), normally ordered
    mom = np.zeros((2 * m, 2 * m), dtype=complex)
    for i in range(m):
        for j in range(m):
            mom[2 * i, 2 * j] = anomalous[i, j]
            mom[2 * i + 1, 2 * j + 1] = np.conj(anomalous[i, j])
            mom[2 * i + 1, 2 * j] = normal[i, j]
            mom[2 * i, 2 * j + 1] = normal[j, i]
    T = np.zeros((2 * m, 2 * m), dtype=complex)
    for i in range(m):
        T[2 * i, 2 * i], T[2 * i, 2 * i + 1] = 1, 1
        T[2 * i + 1, 2 * i], T[2 * i + 1, 2 * i + 1] = -1j, 1j
    cov = T @ mom @ T.T
    if np.max(np.abs(cov.imag)) > 1e-9 * max(1.0, np.max(np.abs(cov.real))):
        raise ArithmeticError("quadrature covariance is not real")
    return cov.real + np.eye(2 * m)


def duan_from_covariance(cov: np.ndarray, theta: float = 0.0) -> float:
    """Var(X_1 - X_2) + Var(Y_1 + Y_2) with both modes' quadratures rotated by theta/2."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    rot = np.array([[c, -s], [s, c]])
    R = np.kron(np.eye(2), rot)
    cov = R @ cov @ R.T
    u = np.array([1.0, 0.0, -1.0, 0.0])
    v = np.array([0.0, 1.0, 0.0, 1.0])
    return float(u @ cov @ u + v @ cov @ v)


def covariance_route_delta2(
    dec: SchmidtDecomposition, params: CrowParams, p: int, p_prime: int, t_tau: float,
    sign: int = evolution.ANOMALOUS_SIGN, theta: float = 0.0,
) -> float:
    normal, anomalous = cavity_moments(dec, params, [p, p_prime], t_tau, sign)
    return duan_from_covariance(quadrature_covariance(normal, anomalous), theta)


def single_mode_decomposition(r: float, n_half: int = 4, i: int = 1, j: int = 2) -> SchmidtDecomposition:
    """One Schmidt pair occupying exactly grid cell ``i`` on the signal side and ``j`` on the idler side."""
    grid = build_grid(n_half)
    values = np.zeros((n_half, n_half), dtype=complex)
    values[i, j] = 1.0
    phi = BiphotonMatrix(grid, values, 1.0).normalize()
    return schmidt_decompose(phi, beta_squeeze=r)


def mode_moments(dec: SchmidtDecomposition, corr: evolution.CorrelatorSet, mode: int = 0) -> FockMoments:
    """Project Bloch-mode correlators back onto Schmidt pair ``mode``.

    B = sum_k mu*(k) b_k dk, C = sum_k nu*(k) b_k dk.
    """
    dk = dec.dk
    mu, nu = dec.mu[:, mode], dec.nu[:, mode]
    n_B = (mu @ corr.Nplus @ mu.conj()).real * dk**2
    n_C = (nu @ corr.Nminus @ nu.conj()).real * dk**2
    bc = mu.conj() @ corr.M @ nu.conj() * dk**2
    return FockMoments(float(n_B), float(n_C), complex(bc))


def calibrate_sign(r: float = 0.5, n_max: int = 80) -> int:
    """Sign of the anomalous correlator that reproduces the Fock-space <B C>.

    Builds correlators with sign +1 for a single Schmidt pair, projects them
    back onto the pair, and compares with the exponentiated-generator state.
    """
    fock = fock_expectations(fock_build(r, n_max))
    dec = single_mode_decomposition(r)
    probe = mode_moments(dec, evolution.build_correlators(dec, sign=+1))
    return 1 if probe.BC.real * fock.BC.real > 0 else -1


def _case(case: str, expected: float, got: float, tol: float) -> dict:
    rel = abs(got - expected) / abs(expected) if expected != 0 else abs(got)
    return {"case": case, "expected": expected, "got": got, "rel_err": rel, "pass": bool(rel <= tol)}


def fock_cutoff(r: float, tol: float = 1e-14) -> int:
    """Smallest pair-number cutoff whose analytic tail weight is below ``tol``."""
    if r == 0:
        return 10
    x = math.tanh(r) ** 2
    return max(10, int(math.ceil(math.log(tol * (1 - x)) / math.log(x))) + 10)


def run_suite(params: CrowParams | None = None, r_values=(0.1, 0.5, 1.0, 1.5)) -> list[dict]:
    """Oracle report rows: Fock versus analytic, sign calibration, group velocity."""
    params = params or CrowParams()
    rows = []
    for r in r_values:
        mom = fock_expectations(fock_build(r, fock_cutoff(r)))
        rows.append(_case(f"fock_n r={r}", math.sinh(r) ** 2, mom.n_B, 1e-6))
        rows.append(_case(f"fock_pair r={r}", math.cosh(r) * math.sinh(r), abs(mom.BC), 1e-6))
        rows.append(_case(f"fock_duan_min r={r}", 4 * math.exp(-2 * r), mom.duan_min, 1e-6))
    s = calibrate_sign()
    rows.append(_case("sign_calibration", float(evolution.ANOMALOUS_SIGN), float(s), 0.0))
    dec = single_mode_decomposition(0.5)
    mm = mode_moments(dec, evolution.build_correlators(dec, sign=s))
    rows.append(_case("mode_duan_theta0 r=0.5", 4 * math.exp(-1.0), mm.duan_theta0, 1e-10))
    err = vg_fd_check(params, math.pi / 2, 1e-6)
    rows.append({"case": "vg_fd kD=pi/2", "expected": 0.0, "got": err, "rel_err": err, "pass": bool(err < 1e-6)})
    return rows
