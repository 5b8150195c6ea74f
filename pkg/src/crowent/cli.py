"""Command line entry point: ``crowent {dispersion,decompose,evolve,sweep,oracle}``."""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, evolution, oracle
from .biphoton import biphoton_full, build_grid
from .config import DEFAULT_CONFIG, ConfigError, RunConfig, parse_config
from .dispersion import complex_frequency, group_velocity, quality_factor
from .schmidt import schmidt_decompose

log = logging.getLogger("crowent")


def fmt(x: float) -> str:
    return f"{x:.11e}"


class Outputs:
    """Collects emitted files so the manifest can hash them."""

    def __init__(self, out_dir: Path):
        self.dir = out_dir
        self.files: dict[str, str] = {}

    def write(self, name: str, text: str) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        data = text.encode()
        (self.dir / name).write_bytes(data)
        self.files[name] = hashlib.sha256(data).hexdigest()

    def csv(self, name: str, header: list[str], rows) -> None:
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
        self.write(name, "\n".join(lines) + "\n")

    def json(self, name: str, obj) -> None:
        self.write(name, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _decompose(cfg: RunConfig):
    grid = build_grid(cfg.n_half)
    phi = biphoton_full(grid, cfg.crow, cfg.pump)
    return phi, schmidt_decompose(phi, cfg.pump.beta_squeeze)


def cmd_dispersion(cfg: RunConfig, args, out: Outputs) -> dict:
    kD = np.linspace(-math.pi, math.pi, args.points)
    w = complex_frequency(cfg.crow, kD)
    q = quality_factor(cfg.crow, kD)
    vg = group_velocity(cfg.crow, kD) * 4 * math.pi
    rows = zip(kD / math.pi, w.real, -w.imag, q, vg)
    out.csv("dispersion.csv", ["kD_over_pi", "omega_re", "gamma", "Q", "vg"], rows)
    return {"points": args.points}


def cmd_decompose(cfg: RunConfig, args, out: Outputs) -> dict:
    phi, dec = _decompose(cfg)
    out.csv("schmidt.csv", ["lambda", "p", "r"], ((str(i + 1), p, r) for i, (p, r) in enumerate(zip(dec.p, dec.r))))
    g = dec.grid
    if args.modes:
        for name, modes, k in (("mu", dec.mu, g.k1), ("nu", dec.nu, g.k2)):
            header = ["kD_over_pi"] + [f"{name}{l + 1}_{part}" for l in range(dec.rank) for part in ("re", "im")]
            rows = ([kk / math.pi] + [x for v in row for x in (v.real, v.imag)] for kk, row in zip(k, modes))
            out.csv(f"modes_{name}.csv", header, rows)
    if args.dump_phi:
        header = ["kD1_over_pi"] + [fmt(k / math.pi) for k in g.k2]
        rows = ([k / math.pi] + list(np.abs(row)) for k, row in zip(g.k1, phi.values))
        out.csv("phi.csv", header, rows)
        out.json("phi.json", {
            "n_half": g.n_half, "dk": g.dk, "k0D": cfg.pump.k0D,
            "sigma_plus_D": cfg.pump.sigma_plus_D, "sigma_minus_D": cfg.pump.sigma_minus_D,
        })
    return {"rank": dec.rank, "p_total": dec.p_total, "schmidt_number": dec.schmidt_number}


def cmd_evolve(cfg: RunConfig, args, out: Outputs) -> dict:
    _, dec = _decompose(cfg)
    sign = oracle.calibrate_sign()
    corr = evolution.build_correlators(dec, sign)
    t = evolution.time_grid(cfg.t_max_tau, cfg.n_steps)
    traj = evolution.evolve(corr, cfg.crow, cfg.p, cfg.p_prime, t)
    out.csv("photons.csv", ["t_tau", "n_p"], zip(t, traj.n_p))
    out.csv("variance.csv", ["t_tau", "delta2_env", "delta2_theta0"], zip(t, traj.envelope, traj.variance(0.0)))
    summary = {"sign": sign, "rank": dec.rank}
    try:
        m = evolution.metrics(traj.photons(), traj.envelope_series())
        summary.update(n_max=m.n_max, fwhm_tau=m.fwhm_tau, dev=m.dev, t_peak=m.t_peak)
    except evolution.NoPeakError as exc:
        log.warning("no metrics: %s", exc)
    return summary


def _csv_list(text: str, conv):
    return tuple(conv(x) for x in text.split(",") if x.strip())


def cmd_sweep(cfg: RunConfig, args, out: Outputs) -> dict:
    configs = _csv_list(args.configs, str.strip)
    unknown = set(configs) - set(evolution.PUMP_CONFIGS)
    if unknown:
        raise ConfigError(f"unknown pump configuration(s) {sorted(unknown)}", key="--configs")
    k0_list = _csv_list(args.k0, float)
    if not all(0 < k < 1 for k in k0_list):
        raise ConfigError("k0 values must lie in (0, 1) in units of pi/D", key="--k0")
    sign = oracle.calibrate_sign()
    t = evolution.time_grid(cfg.t_max_tau, cfg.n_steps)
    rows = evolution.table_sweep(cfg.crow, configs, k0_list, cfg.p, cfg.p_prime, cfg.pump.beta_squeeze,
                                 cfg.n_half, t, sign)
    out.csv("sweep.csv", ["config", "k0D_over_pi", "n_max", "dev", "fwhm_tau"],
            ((r.config, r.k0D_over_pi, r.metrics.n_max, r.metrics.dev, r.metrics.fwhm_tau) for r in rows))
    for r in rows:
        log.info("%s k0=%.2f n_max=%.3f dev=%.3f fwhm=%.2f", r.config, r.k0D_over_pi, r.metrics.n_max,
                 r.metrics.dev, r.metrics.fwhm_tau)
    return {"sign": sign, "configs": list(configs), "k0D_over_pi": list(k0_list)}


def cmd_oracle(cfg: RunConfig, args, out: Outputs) -> dict:
    report = oracle.run_suite(cfg.crow)
    text = json.dumps(report, indent=2)
    print(text)
    out.write("oracle.json", text + "\n")
    return {"sign": oracle.calibrate_sign(), "all_pass": all(r["pass"] for r in report)}


COMMANDS = {
    "dispersion": cmd_dispersion,
    "decompose": cmd_decompose,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crowent", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value config file (built-in defaults if omitted)")
    common.add_argument("--out", type=Path, help="output directory (overrides output.dir)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("dispersion", parents=[common], help="band, loss, Q and group velocity table")
    p.add_argument("--points", type=int, default=201)
    p = sub.add_parser("decompose", parents=[common], help="Schmidt weights of the biphoton amplitude")
    p.add_argument("--dump-phi", action="store_true")
    p.add_argument("--modes", action="store_true")
    sub.add_parser("evolve", parents=[common], help="photon number and Duan variance versus time")
    p = sub.add_parser("sweep", parents=[common], help="peak metrics over pump configurations and k0")
    p.add_argument("--configs", default="A,B,C")
    p.add_argument("--k0", default="0.5,0.65,0.35")
    sub.add_parser("oracle", parents=[common], help="brute-force validation report")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        text = args.config.read_text() if args.config else DEFAULT_CONFIG
        cfg = parse_config(text)
        if args.command == "dispersion" and args.points < 2:
            raise ConfigError("must be >= 2", key="--points")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 1
    out = Outputs(args.out if args.out is not None else Path(cfg.output_dir))
    try:
        summary = COMMANDS[args.command](cfg, args, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ArithmeticError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    manifest = {
        "tool": "crowent",
        "version": __version__,
        "command": args.command,
        "config": cfg.resolved(),
        "defaults_applied": list(cfg.defaults_applied),
        "grid": {"n_half": cfg.n_half, "n_steps": cfg.n_steps},
        "anomalous_sign": summary.pop("sign", evolution.ANOMALOUS_SIGN),
        "summary": summary,
        "files": dict(sorted(out.files.items())),
    }
    out.json("manifest.json", manifest)
    return 0


if __name__ == "__main__":
    sys.exit(main())
