"""Discretized biphoton wave function for a pump Gaussian in time and space."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT, epsilon_0, hbar

from .dispersion import CrowParams, DEFAULT_LAMBDA_P, k0_from_pump, omega_from_wavelength

_FWHM_PER_WIDTH = math.sqrt(2 * math.log(2))


@dataclass(frozen=True)
class PhysicalPump:
    """Material and pump data needed to turn a squeezing strength into pump photons."""

    lambda_P: float = DEFAULT_LAMBDA_P
    chi2_eff: float = 100e-12
    n_index: float = 3.4

    def __post_init__(self):
        for name in ("lambda_P", "chi2_eff", "n_index"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class PumpConfig:
    """Pump centre ``k0 D`` and the dimensionless spectral widths sigma_+ D and sigma_- D.

    ``beta_squeeze`` is the overall squeezing strength; each Schmidt mode is
    squeezed by ``beta_squeeze * sqrt(p_lambda)``.
    """

    k0D: float = math.pi / 2
    sigma_plus_D: float = 0.28
    sigma_minus_D: float = 0.28
    beta_squeeze: float = 2.2
    physical: PhysicalPump | None = None

    def __post_init__(self):
        if not (self.sigma_plus_D > 0 and self.sigma_minus_D > 0):
            raise ValueError("pump widths sigma_plus_D and sigma_minus_D must be positive")
        if not self.beta_squeeze > 0:
            raise ValueError("beta_squeeze must be positive")
        if not 0 < self.k0D < math.pi:
            raise ValueError(f"k0 D must lie in (0, pi), got {self.k0D}")

    @classmethod
    def from_pump_frequency(cls, params: CrowParams, omega_P: float, **kwargs) -> "PumpConfig":
        return cls(k0D=k0_from_pump(params, omega_P), **kwargs)

    @classmethod
    def from_pump_wavelength(cls, params: CrowParams, lambda_P: float, **kwargs) -> "PumpConfig":
        return cls.from_pump_frequency(params, omega_from_wavelength(params, lambda_P), **kwargs)

    def with_widths(self, sigma_plus_D: float, sigma_minus_D: float) -> "PumpConfig":
        return replace(self, sigma_plus_D=sigma_plus_D, sigma_minus_D=sigma_minus_D)


@dataclass(frozen=True)
class KGrid:
    """Midpoint samples of the signal half-zone (0, pi) and the idler half-zone (-pi, 0).

    All values are ``kD``. ``k2[j] == -k1[j]``, so index ``j`` on the idler side
    is the mirror image of index ``j`` on the signal side.
    """

    n_half: int
    dk: float = field(init=False)
    k1: np.ndarray = field(init=False, repr=False)
    k2: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_half < 2:
            raise ValueError(f"n_half must be >= 2, got {self.n_half}")
        dk = math.pi / self.n_half
        k1 = (np.arange(self.n_half) + 0.5) * dk
        object.__setattr__(self, "dk", dk)
        object.__setattr__(self, "k1", k1)
        object.__setattr__(self, "k2", -k1)


def build_grid(n_half: int) -> KGrid:
    return KGrid(int(n_half))


@dataclass(frozen=True)
class BiphotonMatrix:
    """Samples ``values[i, j] = Phi(k1[i], k2[j])`` with ``sum |Phi|^2 dk^2 = 1``."""

    grid: KGrid
    values: np.ndarray = field(repr=False)
    q0_raw: complex = 0.0

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dk**2)

    def normalize(self) -> "BiphotonMatrix":
        return replace(self, values=self.values / math.sqrt(self.norm))


@dataclass(frozen=True)
class PumpWidths:
    """Pump spot size ``W_S`` (m) and temporal width ``W_T`` (s).

    The pump intensity is ``exp(-2 x^2 / W_S^2) exp(-2 t^2 / W_T^2)``, so the
    intensity FWHMs are ``sqrt(2 ln 2)`` times the widths.
    """

    W_S: float
    W_T: float

    @property
    def spatial_fwhm(self) -> float:
        return _FWHM_PER_WIDTH * self.W_S

    @property
    def temporal_fwhm(self) -> float:
        return _FWHM_PER_WIDTH * self.W_T


def energy_widths(pump: PumpConfig) -> tuple[float, float]:
    """(E_+, E_-) entering the two Gaussians of the biphoton wave function."""
    s = math.sin(abs(pump.k0D))
    if s < 1e-12:
        raise ValueError("degenerate band edge: sin(k0 D) = 0")
    return pump.sigma_plus_D, pump.sigma_minus_D * s


def widths_from_sigma(params: CrowParams, pump: PumpConfig) -> PumpWidths:
    _, e_minus = energy_widths(pump)
    sigma_plus = pump.sigma_plus_D / params.D
    wF = params.omega_F.real * params.frequency_unit
    b1 = params.beta1.real
    return PumpWidths(W_S=math.sqrt(2) / sigma_plus, W_T=math.sqrt(2) / (b1 * wF * e_minus))


def q0_amplitude(params: CrowParams, pump: PumpConfig) -> float:
    """|Q0| = sqrt(2 / (pi sigma_- sigma_+)) in metres."""
    sp = pump.sigma_plus_D / params.D
    sm = pump.sigma_minus_D / params.D
    return math.sqrt(2 / (math.pi * sp * sm))


def amplitude(k1D, k2D, pump: PumpConfig, linearized: bool = False):
    """Unnormalized pair amplitude at signal ``k1D > 0`` and idler ``k2D < 0``; equals 1 at (k0, -k0).

    With ``linearized`` each cosine is expanded to first order about +k0 (signal)
    or -k0 (idler).
    """
    k1D, k2D = np.asarray(k1D, float), np.asarray(k2D, float)
    e_plus, e_minus = energy_widths(pump)
    k0 = pump.k0D
    c0, s0 = math.cos(k0), math.sin(k0)
    if linearized:
        cos1 = c0 - (k1D - k0) * s0
        cos2 = c0 + (k2D + k0) * s0
    else:
        cos1, cos2 = np.cos(k1D), np.cos(k2D)
    detuning = cos1 + cos2 - 2 * c0
    return np.exp(-((k1D + k2D) ** 2) / (2 * e_plus**2) - detuning**2 / (2 * e_minus**2))


def _sample(grid: KGrid, params: CrowParams, pump: PumpConfig, linearized: bool) -> BiphotonMatrix:
    values = amplitude(grid.k1[:, None], grid.k2[None, :], pump, linearized)
    return BiphotonMatrix(grid, values.astype(complex), q0_amplitude(params, pump)).normalize()


def biphoton_full(grid: KGrid, params: CrowParams, pump: PumpConfig) -> BiphotonMatrix:
    """Counterpropagating pair amplitude with the full cosine band."""
    return _sample(grid, params, pump, linearized=False)


def biphoton_linearized(grid: KGrid, params: CrowParams, pump: PumpConfig) -> BiphotonMatrix:
    return _sample(grid, params, pump, linearized=True)


def separable_biphoton(grid: KGrid, k0D: float, width1: float, width2: float) -> BiphotonMatrix:
    """Product of Gaussians in k1 and k2 alone (Schmidt rank one); used for checks."""
    g1 = np.exp(-((grid.k1 - k0D) ** 2) / (2 * width1**2))
    g2 = np.exp(-((grid.k2 + k0D) ** 2) / (2 * width2**2))
    return BiphotonMatrix(grid, np.outer(g1, g2).astype(complex), 1.0).normalize()


@dataclass(frozen=True)
class PumpPhotons:
    alpha_sq: float
    pulse_energy: float


def pump_photon_number(pump: PumpConfig, params: CrowParams) -> PumpPhotons:
    """Mean pump photon number needed for squeezing strength ``pump.beta_squeeze``.

    Inverts the relation between the biphoton prefactor Q0 and the coherent pump
    amplitude alpha. The length ``c * W_T`` is the temporal width that appears in
    the pump envelope.
    """
    if pump.physical is None:
        raise ValueError("pump.physical is required for pump photon bookkeeping")
    phys = pump.physical
    widths = widths_from_sigma(params, pump)
    q0 = q0_amplitude(params, pump)
    chi_bar = phys.chi2_eff / phys.n_index**2
    omega_F = params.omega_F.real * params.frequency_unit
    omega_P = 2 * math.pi * SPEED_OF_LIGHT / phys.lambda_P
    length_T = SPEED_OF_LIGHT * widths.W_T
    alpha_sq = (
        q0**2 * pump.beta_squeeze**2 * SPEED_OF_LIGHT**2 * epsilon_0 * (2 * math.pi) ** 1.5
        / (chi_bar**2 * hbar * omega_F**2 * omega_P * length_T)
    )
    return PumpPhotons(alpha_sq=alpha_sq, pulse_energy=alpha_sq * hbar * omega_P)
