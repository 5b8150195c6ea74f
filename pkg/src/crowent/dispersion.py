"""Nearest-neighbour tight-binding dispersion of a lossy CROW.

Units used throughout the package:

* wavevectors are given as ``kD`` (dimensionless, first zone is ``[-pi, pi]``),
* frequencies are in units of ``4*pi*c/D``,
* times are in units of ``D/(4*pi*c)`` unless a function says it takes ``tau`` units.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

# Tight-binding constants of the photonic-crystal CROW (FDTD-derived, taken as given).
DEFAULT_OMEGA_F = 0.305 - 7.71e-6j
DEFAULT_BETA1 = 9.87e-3 - 1.97e-5j
DEFAULT_LAMBDA_P = 775e-9


class OutOfBandError(ValueError):
    """Requested pump frequency puts the pair frequency outside the CROW band."""


@dataclass(frozen=True)
class CrowParams:
    """Complex cavity frequency, complex coupling and period of a CROW.

    ``tau_def`` is the time unit in units of ``D/(4 pi c)``; ``None`` selects the
    one-cavity transit time ``1/(Re beta1 * Re omega_F)``.
    """

    omega_F: complex = DEFAULT_OMEGA_F
    beta1: complex = DEFAULT_BETA1
    D: float = 4 * DEFAULT_OMEGA_F.real * DEFAULT_LAMBDA_P
    tau_def: float | None = None

    def __post_init__(self):
        if not self.omega_F.real > 0:
            raise ValueError(f"Re(omega_F) must be positive, got {self.omega_F}")
        if self.omega_F.imag > 0:
            raise ValueError(f"Im(omega_F) must be <= 0 (loss, never gain), got {self.omega_F}")
        if not abs(self.beta1) < 0.1:
            raise ValueError(f"|beta1| must be < 0.1 for nearest-neighbour coupling, got {self.beta1}")
        if not self.D > 0:
            raise ValueError(f"period D must be positive, got {self.D}")
        if self.tau_def is not None and not self.tau_def > 0:
            raise ValueError(f"tau_def must be positive, got {self.tau_def}")

    @property
    def tau(self) -> float:
        """Time unit in units of ``D/(4 pi c)``."""
        if self.tau_def is not None:
            return self.tau_def
        return 1.0 / (self.beta1.real * self.omega_F.real)

    @property
    def frequency_unit(self) -> float:
        """``4 pi c / D`` in rad/s."""
        return 4 * math.pi * SPEED_OF_LIGHT / self.D

    def lossless(self) -> "CrowParams":
        """Same band with all imaginary parts removed."""
        return replace(self, omega_F=complex(self.omega_F.real, 0.0), beta1=complex(self.beta1.real, 0.0))


def _check_zone(kD) -> np.ndarray:
    kD = np.asarray(kD, dtype=float)
    if np.any(np.abs(kD) > math.pi * (1 + 1e-12)) or not np.all(np.isfinite(kD)):
        raise ValueError("Bloch vector outside the first Brillouin zone |kD| <= pi")
    return kD


def complex_frequency(params: CrowParams, kD):
    """``omega_F (1 - beta1 cos kD)``; real part is the mode frequency, minus the imaginary part its loss rate."""
    kD = _check_zone(kD)
    return params.omega_F * (1 - params.beta1 * np.cos(kD))


def loss_rate(params: CrowParams, kD):
    return -np.imag(complex_frequency(params, kD))


def quality_factor(params: CrowParams, kD):
    """Q_k = omega_k / (2 gamma_k); ``inf`` for lossless modes."""
    w = complex_frequency(params, kD)
    omega, gamma = w.real, -w.imag
    with np.errstate(divide="ignore"):
        q = np.where(gamma > 0, omega / (2 * np.where(gamma > 0, gamma, 1.0)), np.inf)
    return q if q.ndim else float(q)


def group_velocity(params: CrowParams, kD):
    """d Re(omega_k)/dk, in units of ``(4 pi c/D) * D = 4 pi c``."""
    kD = _check_zone(kD)
    v = (params.omega_F * params.beta1).real * np.sin(kD)
    return v if v.ndim else float(v)


def k0_from_pump(params: CrowParams, omega_P: float) -> float:
    """Bloch vector ``k0 D`` in (0, pi) at which ``omega_P = 2 omega_{F k0}`` (real parts only)."""
    wF, b1 = params.omega_F.real, params.beta1.real
    cos_k0 = (2 * wF - omega_P) / (2 * b1 * wF)
    if abs(cos_k0) >= 1:
        raise OutOfBandError(f"omega_P/2 = {omega_P / 2} lies outside the band [{wF * (1 - b1)}, {wF * (1 + b1)}]")
    return math.acos(cos_k0)


def period_for_pump(omega_F: complex, beta1: complex, lambda_P: float, k0D: float) -> float:
    """Period D (m) placing the pair frequency at ``k0`` for a pump of vacuum wavelength ``lambda_P``.

    With ``omega_P = 2 omega_F (1 - beta1 cos k0D)`` and ``omega_F`` in units of
    ``4 pi c / D``, the period follows from the pump wavelength alone.
    """
    band = omega_F.real * (1 - beta1.real * math.cos(k0D))
    return 4 * band * lambda_P


def omega_from_wavelength(params: CrowParams, wavelength: float) -> float:
    """Vacuum wavelength (m) to angular frequency in units of ``4 pi c / D``."""
    return params.D / (2 * wavelength)
