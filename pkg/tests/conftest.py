import math

import pytest

from crowent import evolution
from crowent.biphoton import PumpConfig, biphoton_full, build_grid
from crowent.dispersion import CrowParams
from crowent.schmidt import schmidt_decompose

_ACCEPTANCE_LINES = []


def record_acceptance(name, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def params():
    return CrowParams()


def decompose(params, k0_over_pi=0.5, config="A", n_half=512, beta=2.2):
    sp, sm = evolution.PUMP_CONFIGS[config]
    pump = PumpConfig(k0D=k0_over_pi * math.pi, sigma_plus_D=sp, sigma_minus_D=sm, beta_squeeze=beta)
    phi = biphoton_full(build_grid(n_half), params, pump)
    return phi, schmidt_decompose(phi, beta)


@pytest.fixture(scope="session")
def config_a(params):
    """Configuration A at k0 = pi/2D on the default grid: (phi, dec, corr)."""
    phi, dec = decompose(params)
    return phi, dec, evolution.build_correlators(dec)


@pytest.fixture(scope="session")
def config_b(params):
    phi, dec = decompose(params, config="B")
    return phi, dec, evolution.build_correlators(dec)
