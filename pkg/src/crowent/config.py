"""Flat ``key = value`` run configuration."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .biphoton import PhysicalPump, PumpConfig
from .dispersion import DEFAULT_BETA1, DEFAULT_OMEGA_F, CrowParams, k0_from_pump, omega_from_wavelength, period_for_pump
from .evolution import DEFAULT_N_STEPS, DEFAULT_T_MAX_TAU


class ConfigError(ValueError):
    """Invalid configuration; carries the offending key and, when known, its line."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.key = key
        self.line = line


def _float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("not finite")
    return value


def _int(text: str) -> int:
    return int(text)


def _tau(text: str):
    return None if text.strip().lower() == "transit" else _float(text)


# key -> (parser, default); a default of None means "optional, no value"
SCHEMA = {
    "crow.omega_F_re": (_float, DEFAULT_OMEGA_F.real),
    "crow.omega_F_im": (_float, DEFAULT_OMEGA_F.imag),
    "crow.beta1_re": (_float, DEFAULT_BETA1.real),
    "crow.beta1_im": (_float, DEFAULT_BETA1.imag),
    "crow.D_um": (_float, None),
    "crow.tau_def": (_tau, None),
    "pump.k0D_over_pi": (_float, None),
    "pump.lambda_P_nm": (_float, None),
    "pump.sigma_plus_D": (_float, 0.28),
    "pump.sigma_minus_D": (_float, 0.28),
    "pump.beta": (_float, 2.2),
    "physical.chi2_pm_per_V": (_float, None),
    "physical.n_index": (_float, None),
    "grid.n_half": (_int, 512),
    "time.t_max_tau": (_float, DEFAULT_T_MAX_TAU),
    "time.n_steps": (_int, DEFAULT_N_STEPS),
    "cavities.p": (_int, 40),
    "cavities.p_prime": (_int, None),
    "output.dir": (str, "out"),
}

DEFAULT_CONFIG = """\
# CROW tight-binding constants (FDTD-derived)
crow.omega_F_re = 0.305
crow.omega_F_im = -7.71e-6
crow.beta1_re = 9.87e-3
crow.beta1_im = -1.97e-5
crow.tau_def = transit
# pump: centred at the band middle, configuration A
pump.k0D_over_pi = 0.5
pump.lambda_P_nm = 775
pump.sigma_plus_D = 0.28
pump.sigma_minus_D = 0.28
pump.beta = 2.2
physical.chi2_pm_per_V = 100
physical.n_index = 3.4
grid.n_half = 512
time.t_max_tau = 80
time.n_steps = 2048
cavities.p = 40
cavities.p_prime = -40
"""


@dataclass(frozen=True)
class RunConfig:
    crow: CrowParams
    pump: PumpConfig
    n_half: int
    t_max_tau: float
    n_steps: int
    p: int
    p_prime: int
    output_dir: str
    values: dict = field(default_factory=dict)
    defaults_applied: tuple = ()

    def resolved(self) -> dict:
        """Every key with the value actually used, for manifests."""
        return {
            "crow.omega_F": [self.crow.omega_F.real, self.crow.omega_F.imag],
            "crow.beta1": [self.crow.beta1.real, self.crow.beta1.imag],
            "crow.D_m": self.crow.D,
            "crow.tau": self.crow.tau,
            "pump.k0D_over_pi": self.pump.k0D / math.pi,
            "pump.sigma_plus_D": self.pump.sigma_plus_D,
            "pump.sigma_minus_D": self.pump.sigma_minus_D,
            "pump.beta": self.pump.beta_squeeze,
            "physical": None if self.pump.physical is None else {
                "lambda_P_m": self.pump.physical.lambda_P,
                "chi2_m_per_V": self.pump.physical.chi2_eff,
                "n_index": self.pump.physical.n_index,
            },
            "grid.n_half": self.n_half,
            "time.t_max_tau": self.t_max_tau,
            "time.n_steps": self.n_steps,
            "cavities.p": self.p,
            "cavities.p_prime": self.p_prime,
            "output.dir": self.output_dir,
        }


def _read_pairs(text: str) -> tuple[dict, dict]:
    values, lines = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in SCHEMA:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        parser = SCHEMA[key][0]
        try:
            values[key] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"malformed value {value!r} ({exc})", key=key, line=lineno) from None
        lines[key] = lineno
    return values, lines


def parse_config(text: str) -> RunConfig:
    """Parse and validate; raises :class:`ConfigError` before anything is computed."""
    values, lines = _read_pairs(text)
    applied = tuple(sorted(k for k, (_, d) in SCHEMA.items() if k not in values and d is not None))
    get = lambda key: values.get(key, SCHEMA[key][1])  # noqa: E731

    def fail(key, msg):
        raise ConfigError(msg, key=key, line=lines.get(key))

    omega_F = complex(get("crow.omega_F_re"), get("crow.omega_F_im"))
    beta1 = complex(get("crow.beta1_re"), get("crow.beta1_im"))
    if not omega_F.real > 0:
        fail("crow.omega_F_re", "must be positive")
    if omega_F.imag > 0:
        fail("crow.omega_F_im", "must be <= 0 (loss, never gain)")
    if not abs(beta1) < 0.1:
        fail("crow.beta1_re", "|beta1| must be < 0.1")

    lam = values.get("pump.lambda_P_nm")
    if lam is not None and not lam > 0:
        fail("pump.lambda_P_nm", "must be positive")
    k0_frac = values.get("pump.k0D_over_pi")
    if k0_frac is None and lam is None:
        k0_frac = 0.5
        applied += ("pump.k0D_over_pi",)
    if k0_frac is not None and not 0 < k0_frac < 1:
        fail("pump.k0D_over_pi", "must lie in (0, 1)")

    d_um = values.get("crow.D_um")
    if d_um is None:
        if lam is not None and k0_frac is not None:
            D = period_for_pump(omega_F, beta1, lam * 1e-9, k0_frac * math.pi)
        else:
            D = CrowParams().D
        applied += ("crow.D_um",)
    elif not d_um > 0:
        fail("crow.D_um", "must be positive")
    else:
        D = d_um * 1e-6

    tau = values.get("crow.tau_def")
    if tau is not None and not tau > 0:
        fail("crow.tau_def", "must be positive or 'transit'")
    crow = CrowParams(omega_F=omega_F, beta1=beta1, D=D, tau_def=tau)

    if k0_frac is None:
        try:
            k0D = k0_from_pump(crow, omega_from_wavelength(crow, lam * 1e-9))
        except ValueError as exc:
            fail("pump.lambda_P_nm", str(exc))
    else:
        k0D = k0_frac * math.pi

    for key in ("pump.sigma_plus_D", "pump.sigma_minus_D", "pump.beta"):
        if not get(key) > 0:
            fail(key, "must be positive")

    phys_keys = ("physical.chi2_pm_per_V", "physical.n_index")
    physical = None
    if any(k in values for k in phys_keys):
        for key in phys_keys:
            if key not in values:
                fail(key, "required when any physical.* key is given")
            if not values[key] > 0:
                fail(key, "must be positive")
        if lam is None:
            fail("pump.lambda_P_nm", "required for physical pump bookkeeping")
        physical = PhysicalPump(lambda_P=lam * 1e-9, chi2_eff=values["physical.chi2_pm_per_V"] * 1e-12,
                                n_index=values["physical.n_index"])
    pump = PumpConfig(k0D=k0D, sigma_plus_D=get("pump.sigma_plus_D"), sigma_minus_D=get("pump.sigma_minus_D"),
                      beta_squeeze=get("pump.beta"), physical=physical)

    n_half = get("grid.n_half")
    if n_half < 2:
        fail("grid.n_half", "must be >= 2")
    if not get("time.t_max_tau") > 0:
        fail("time.t_max_tau", "must be positive")
    if get("time.n_steps") < 2:
        fail("time.n_steps", "must be >= 2")
    p = get("cavities.p")
    p_prime = values.get("cavities.p_prime", -p)
    if "cavities.p_prime" not in values:
        applied += ("cavities.p_prime",)

    return RunConfig(
        crow=crow, pump=pump, n_half=n_half, t_max_tau=get("time.t_max_tau"), n_steps=get("time.n_steps"),
        p=p, p_prime=p_prime, output_dir=get("output.dir"), values=values, defaults_applied=tuple(sorted(applied)),
    )
