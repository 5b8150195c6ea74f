"""Lossy propagation of the generated state: cavity photon numbers and Duan variances.

The state is Gaussian, so everything follows from the Bloch-mode correlators
``<b_k^dag b_k'>`` and ``<b_k b_k'>`` at t = 0. Each Bloch operator evolves as
``b_k(t) = b_k exp(-i omega_k t)`` with the complex band frequency, and a
cavity operator is ``a_p = sqrt(D/2pi) sum_k b_k exp(i k p D) dk``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .biphoton import KGrid, PumpConfig, biphoton_full, build_grid
from .dispersion import CrowParams, complex_frequency
from .schmidt import SchmidtDecomposition, schmidt_decompose

# Sign of <B_l C_l> relative to cosh(r) sinh(r) for S = exp(sum r B^dag C^dag - h.c.).
# Fixed by the Fock-space calibration in ``crowent.oracle.calibrate_sign``.
ANOMALOUS_SIGN = +1

DEFAULT_T_MAX_TAU = 80.0
DEFAULT_N_STEPS = 2048
_CHUNK = 512


@dataclass(frozen=True)
class CorrelatorSet:
    """Normal blocks on the signal (k1 x k1) and idler (k2 x k2) grids, anomalous block on k1 x k2."""

    Nplus: np.ndarray = field(repr=False)
    Nminus: np.ndarray = field(repr=False)
    M: np.ndarray = field(repr=False)
    grid: KGrid = field(repr=False)
    sign: int = ANOMALOUS_SIGN

    @property
    def dk(self) -> float:
        return self.grid.dk


def normal_correlator(dec: SchmidtDecomposition) -> tuple[np.ndarray, np.ndarray]:
    """``(Nplus, Nminus)``; the cross normal blocks vanish identically."""
    occ = np.sinh(dec.r) ** 2
    n_plus = (dec.mu.conj() * occ) @ dec.mu.T
    n_minus = (dec.nu.conj() * occ) @ dec.nu.T
    return n_plus, n_minus


def anomalous_correlator(dec: SchmidtDecomposition, sign: int = ANOMALOUS_SIGN) -> np.ndarray:
    """``M[i, j] = <b_{k1[i]} b_{k2[j]}>``."""
    r = dec.r
    return sign * (dec.mu * (np.cosh(r) * np.sinh(r))) @ dec.nu.T


def build_correlators(dec: SchmidtDecomposition, sign: int = ANOMALOUS_SIGN) -> CorrelatorSet:
    n_plus, n_minus = normal_correlator(dec)
    return CorrelatorSet(n_plus, n_minus, anomalous_correlator(dec, sign), dec.grid, sign)


def _times(t_tau, params: CrowParams) -> tuple[np.ndarray, bool]:
    t = np.asarray(t_tau, dtype=float)
    if np.any(t < 0):
        raise ValueError("time must be non-negative")
    return np.atleast_1d(t) * params.tau, t.ndim == 0


def _waves(kD: np.ndarray, omega: np.ndarray, p: int, t: np.ndarray) -> np.ndarray:
    """``exp(i k p D - i omega_k t)``, shape (len(t), len(k))."""
    return np.exp(1j * kD[None, :] * p - 1j * omega[None, :] * t[:, None])


def _bilinear(left: np.ndarray, mat: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Row-wise ``left[t] @ mat @ right[t]``."""
    return np.einsum("tk,tk->t", left, right @ mat.T)


class _Propagator:
    """Caches band frequencies and evaluates cavity moments in time chunks."""

    def __init__(self, corr: CorrelatorSet, params: CrowParams):
        self.corr = corr
        self.w1 = complex_frequency(params, corr.grid.k1)
        self.w2 = complex_frequency(params, corr.grid.k2)
        self.weight = corr.dk**2 / (2 * math.pi)

    def normal(self, p: int, q: int, t: np.ndarray) -> np.ndarray:
        """<a_p^dag(t) a_q(t)> summed over the signal and idler blocks."""
        g, c = self.corr.grid, self.corr
        out = np.empty(len(t), dtype=complex)
        for s in range(0, len(t), _CHUNK):
            ts = t[s:s + _CHUNK]
            plus = _bilinear(_waves(g.k1, self.w1, p, ts).conj(), c.Nplus, _waves(g.k1, self.w1, q, ts))
            minus = _bilinear(_waves(g.k2, self.w2, p, ts).conj(), c.Nminus, _waves(g.k2, self.w2, q, ts))
            out[s:s + _CHUNK] = plus + minus
        return out * self.weight

    def anomalous(self, p: int, q: int, t: np.ndarray) -> np.ndarray:
        """<a_p(t) a_q(t)>: signal at p with idler at q plus the exchanged term."""
        g, c = self.corr.grid, self.corr
        out = np.empty(len(t), dtype=complex)
        for s in range(0, len(t), _CHUNK):
            ts = t[s:s + _CHUNK]
            direct = _bilinear(_waves(g.k1, self.w1, p, ts), c.M, _waves(g.k2, self.w2, q, ts))
            swapped = _bilinear(_waves(g.k1, self.w1, q, ts), c.M, _waves(g.k2, self.w2, p, ts))
            out[s:s + _CHUNK] = direct + swapped
        return out * self.weight


def _scalar(x: np.ndarray, scalar: bool):
    return x[0] if scalar else x


def normal_moment(corr: CorrelatorSet, params: CrowParams, p: int, q: int, t_tau):
    """Complex ``<a_p^dag a_q>`` at times ``t_tau`` (units of tau)."""
    t, scalar = _times(t_tau, params)
    return _scalar(_Propagator(corr, params).normal(p, q, t), scalar)


def photon_number(corr: CorrelatorSet, params: CrowParams, p: int, t_tau):
    t, scalar = _times(t_tau, params)
    return _scalar(_Propagator(corr, params).normal(p, p, t).real, scalar)


def pair_correlator(corr: CorrelatorSet, params: CrowParams, p: int, p_prime: int, t_tau):
    t, scalar = _times(t_tau, params)
    return _scalar(_Propagator(corr, params).anomalous(p, p_prime, t), scalar)


def duan_variance(n_p, n_q, pair, theta: float = 0.0):
    """Var(X_p - X_q) + Var(Y_p + Y_q) for quadratures rotated by ``theta``."""
    return 4 + 4 * (n_p + n_q - 2 * np.real(np.exp(1j * theta) * pair))


def duan_envelope(n_p, n_q, pair):
    """Minimum of :func:`duan_variance` over the quadrature phase."""
    return 4 + 4 * (n_p + n_q - 2 * np.abs(pair))


def correlation_variance(corr: CorrelatorSet, params: CrowParams, p: int, p_prime: int, t_tau, theta: float = 0.0):
    traj = evolve(corr, params, p, p_prime, t_tau)
    return _scalar(traj.variance(theta), np.ndim(t_tau) == 0)


def variance_envelope(corr: CorrelatorSet, params: CrowParams, p: int, p_prime: int, t_tau):
    traj = evolve(corr, params, p, p_prime, t_tau)
    return _scalar(traj.envelope, np.ndim(t_tau) == 0)


@dataclass(frozen=True)
class TimeSeries:
    t: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.t) != len(self.values):
            raise ValueError("t and values differ in length")
        if len(self.t) > 1 and np.any(np.diff(self.t) <= 0):
            raise ValueError("t must be strictly increasing")


@dataclass(frozen=True)
class Trajectory:
    """Photon numbers in cavities p and p' and their pair correlator, sampled in tau units."""

    t: np.ndarray
    n_p: np.ndarray
    n_q: np.ndarray
    pair: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def envelope(self) -> np.ndarray:
        return duan_envelope(self.n_p, self.n_q, self.pair)

    def variance(self, theta: float = 0.0) -> np.ndarray:
        return duan_variance(self.n_p, self.n_q, self.pair, theta)

    def photons(self) -> TimeSeries:
        return TimeSeries(self.t, self.n_p, self.meta)

    def envelope_series(self) -> TimeSeries:
        return TimeSeries(self.t, self.envelope, self.meta)


def time_grid(t_max_tau: float = DEFAULT_T_MAX_TAU, n_steps: int = DEFAULT_N_STEPS) -> np.ndarray:
    if not t_max_tau > 0 or n_steps < 2:
        raise ValueError("time grid needs t_max_tau > 0 and n_steps >= 2")
    return np.linspace(0.0, t_max_tau, n_steps)


def evolve(corr: CorrelatorSet, params: CrowParams, p: int, p_prime: int, t_tau=None, meta: dict | None = None) -> Trajectory:
    if t_tau is None:
        t_tau = time_grid()
    t, _ = _times(t_tau, params)
    prop = _Propagator(corr, params)
    n_p = prop.normal(p, p, t).real
    n_q = n_p if p_prime == p else prop.normal(p_prime, p_prime, t).real
    pair = prop.anomalous(p, p_prime, t)
    return Trajectory(np.atleast_1d(np.asarray(t_tau, float)), n_p, n_q, pair, dict(meta or {}, p=p, p_prime=p_prime))


def total_photons(corr: CorrelatorSet, params: CrowParams, t_tau) -> np.ndarray:
    """Sum of n_p over one full period of 2*n_half cavities."""
    t, scalar = _times(t_tau, params)
    prop = _Propagator(corr, params)
    occ1 = np.exp(2 * np.imag(prop.w1)[None, :] * t[:, None]) @ np.diag(corr.Nplus).real
    occ2 = np.exp(2 * np.imag(prop.w2)[None, :] * t[:, None]) @ np.diag(corr.Nminus).real
    return _scalar((occ1 + occ2) * corr.dk, scalar)


def total_photons_by_cavity(corr: CorrelatorSet, params: CrowParams, t_tau) -> np.ndarray:
    """Direct sum of n_p over p in [-n_half, n_half), one row per time."""
    t, _ = _times(t_tau, params)
    prop = _Propagator(corr, params)
    n = corr.grid.n_half
    return sum(prop.normal(p, p, t).real for p in range(-n, n))


@dataclass(frozen=True)
class EntanglementMetrics:
    n_max: float
    fwhm_tau: float
    dev: float
    t_peak: float

    def __post_init__(self):
        if not self.fwhm_tau > 0:
            raise ValueError("fwhm must be positive")


class NoPeakError(ValueError):
    pass


def _crossing(t0, t1, y0, y1, level):
    return t0 + (level - y0) * (t1 - t0) / (y1 - y0)


def fwhm(t: np.ndarray, y: np.ndarray) -> float:
    """Full width at half maximum, with linear interpolation of both half-max crossings."""
    t, y = np.asarray(t, float), np.asarray(y, float)
    i = int(np.argmax(y))
    half = y[i] / 2
    if not y[i] > 0 or np.ptp(y) == 0:
        raise NoPeakError("series has no peak")
    left = np.flatnonzero(y[:i] < half)
    right = np.flatnonzero(y[i:] < half)
    if not left.size or not right.size:
        raise NoPeakError("peak is not resolved inside the time window")
    a = left[-1]
    b = i + right[0]
    return _crossing(t[b - 1], t[b], y[b - 1], y[b], half) - _crossing(t[a], t[a + 1], y[a], y[a + 1], half)


def metrics(n_series: TimeSeries, env_series: TimeSeries) -> EntanglementMetrics:
    if not len(n_series.t) or not len(env_series.t):
        raise NoPeakError("empty series")
    i = int(np.argmax(n_series.values))
    return EntanglementMetrics(
        n_max=float(n_series.values[i]),
        fwhm_tau=float(fwhm(n_series.t, n_series.values)),
        dev=float(4 - np.min(env_series.values)),
        t_peak=float(n_series.t[i]),
    )


def entanglement_window(env_series: TimeSeries, threshold: float = 4.0) -> float:
    """Length of the unbroken stretch around the deepest point where the envelope stays below ``threshold``."""
    y = np.asarray(env_series.values, float)
    i = int(np.argmin(y))
    if not y[i] < threshold:
        return 0.0
    above = y >= threshold
    left = np.flatnonzero(above[:i])
    right = np.flatnonzero(above[i:])
    a = left[-1] + 1 if left.size else 0
    b = i + right[0] - 1 if right.size else len(y) - 1
    return float(env_series.t[b] - env_series.t[a])


# Reference pump configurations: (sigma_plus_D, sigma_minus_D).
PUMP_CONFIGS = {"A": (0.28, 0.28), "B": (0.14, 0.28), "C": (0.28, 0.14)}
SWEEP_K0 = (0.50, 0.65, 0.35)


@dataclass(frozen=True)
class SweepRow:
    config: str
    k0D_over_pi: float
    metrics: EntanglementMetrics


def table_sweep(
    params: CrowParams,
    configs=("A", "B", "C"),
    k0_list=SWEEP_K0,
    p: int = 40,
    p_prime: int | None = None,
    beta: float = 2.2,
    n_half: int = 512,
    t_tau=None,
    sign: int = ANOMALOUS_SIGN,
) -> list[SweepRow]:
    """Metrics for each (k0, config), k0-major."""
    p_prime = -p if p_prime is None else p_prime
    grid = build_grid(n_half)
    rows = []
    for k0 in k0_list:
        for name in configs:
            sp, sm = PUMP_CONFIGS[name]
            pump = PumpConfig(k0D=k0 * math.pi, sigma_plus_D=sp, sigma_minus_D=sm, beta_squeeze=beta)
            dec = schmidt_decompose(biphoton_full(grid, params, pump), beta)
            traj = evolve(build_correlators(dec, sign), params, p, p_prime, t_tau)
            rows.append(SweepRow(name, k0, metrics(traj.photons(), traj.envelope_series())))
    return rows
