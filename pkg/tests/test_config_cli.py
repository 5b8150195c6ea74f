import csv
import json
import math

import pytest

from crowent import cli
from crowent.config import DEFAULT_CONFIG, ConfigError, parse_config


def test_builtin_defaults():
    cfg = parse_config(DEFAULT_CONFIG)
    assert cfg.crow.D == pytest.approx(4 * 0.305 * 775e-9 * (1 - 9.87e-3 * math.cos(math.pi / 2)))
    assert cfg.pump.k0D == pytest.approx(math.pi / 2)
    assert (cfg.p, cfg.p_prime, cfg.n_half) == (40, -40, 512)
    assert cfg.pump.physical is not None


def test_negative_width_names_key():
    with pytest.raises(ConfigError) as exc:
        parse_config("pump.sigma_plus_D = -1\n")
    assert exc.value.key == "pump.sigma_plus_D"
    assert exc.value.line == 1
    assert "pump.sigma_plus_D" in str(exc.value)


def test_unknown_key_has_line():
    with pytest.raises(ConfigError) as exc:
        parse_config("pump.beta = 2\n\npump.colour = red\n")
    assert exc.value.line == 3


@pytest.mark.parametrize("text", [
    "pump.beta = 1\npump.beta = 2\n",
    "pump.beta\n",
    "pump.beta = nan\n",
    "grid.n_half = 1.5\n",
    "crow.omega_F_im = 1e-6\n",
    "pump.k0D_over_pi = 1.2\n",
    "physical.n_index = 3.4\n",
])
def test_rejects(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_defaults_are_recorded():
    cfg = parse_config("pump.beta = 1.5\n")
    assert cfg.n_half == 512
    assert "grid.n_half" in cfg.defaults_applied
    assert "pump.beta" not in cfg.defaults_applied
    assert cfg.p_prime == -cfg.p


def test_wavelength_sets_k0_with_explicit_period():
    cfg = parse_config("crow.D_um = 0.9455\npump.lambda_P_nm = 775\n")
    assert cfg.pump.k0D == pytest.approx(math.pi / 2, abs=1e-3)


def run(tmp_path, *argv, config=None):
    args = list(argv) + ["--out", str(tmp_path)]
    if config is not None:
        path = tmp_path.parent / f"{tmp_path.name}.cfg"
        path.write_text(config)
        args += ["--config", str(path)]
    return cli.main(args)


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_dispersion_table(tmp_path):
    assert run(tmp_path, "dispersion", "--points", "9") == 0
    rows = read_csv(tmp_path / "dispersion.csv")
    assert rows[0] == ["kD_over_pi", "omega_re", "gamma", "Q", "vg"]
    assert len(rows) == 10
    assert float(rows[7][0]) == pytest.approx(0.5)
    assert float(rows[7][3]) == pytest.approx(1.98e4, rel=0.01)
    assert float(rows[5][4]) == 0.0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert set(manifest["files"]) == {"dispersion.csv"}


def test_decompose_outputs(tmp_path):
    cfg = "grid.n_half = 64\n"
    assert run(tmp_path, "decompose", "--modes", "--dump-phi", config=cfg) == 0
    rows = read_csv(tmp_path / "schmidt.csv")
    p = [float(r[1]) for r in rows[1:]]
    assert sum(p) == pytest.approx(1.0, abs=1e-10)
    for name in ("modes_mu.csv", "modes_nu.csv", "phi.csv", "phi.json", "manifest.json"):
        assert (tmp_path / name).exists()
    assert json.loads((tmp_path / "phi.json").read_text())["n_half"] == 64


def test_evolve_peak(tmp_path):
    assert run(tmp_path, "evolve", config="grid.n_half = 256\ntime.n_steps = 801\n") == 0
    rows = read_csv(tmp_path / "photons.csv")[1:]
    assert max(float(r[1]) for r in rows) == pytest.approx(1.80, rel=0.02)
    var = read_csv(tmp_path / "variance.csv")
    assert var[0] == ["t_tau", "delta2_env", "delta2_theta0"]
    summary = json.loads((tmp_path / "manifest.json").read_text())["summary"]
    assert summary["dev"] == pytest.approx(0.35, abs=0.05)


def test_rerun_is_bitwise_identical(tmp_path):
    cfg = "grid.n_half = 64\ntime.n_steps = 101\n"
    assert run(tmp_path / "a", "evolve", config=cfg) == 0
    assert run(tmp_path / "b", "evolve", config=cfg) == 0
    a = (tmp_path / "a" / "manifest.json").read_text()
    b = (tmp_path / "b" / "manifest.json").read_text()
    assert json.loads(a)["files"] == json.loads(b)["files"]


def test_bad_config_exits_cleanly(tmp_path, capsys):
    out = tmp_path / "out"
    assert run(out, "evolve", config="pump.sigma_plus_D = -1\n") == 2
    assert "pump.sigma_plus_D" in capsys.readouterr().err
    assert not out.exists()


def test_bad_sweep_option(tmp_path):
    assert run(tmp_path / "o", "sweep", "--configs", "A,Z") == 2


def test_oracle_command(tmp_path, capsys):
    assert run(tmp_path, "oracle") == 0
    report = json.loads(capsys.readouterr().out)
    assert all(row["pass"] for row in report)
    assert json.loads((tmp_path / "oracle.json").read_text()) == report


def test_sweep_small(tmp_path):
    cfg = "grid.n_half = 128\ntime.n_steps = 801\n"
    assert run(tmp_path, "sweep", "--configs", "A", "--k0", "0.5", config=cfg) == 0
    rows = read_csv(tmp_path / "sweep.csv")
    assert rows[0] == ["config", "k0D_over_pi", "n_max", "dev", "fwhm_tau"]
    assert rows[1][0] == "A"
