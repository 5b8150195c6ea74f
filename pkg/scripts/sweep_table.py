"""Print the n_max / dev / FWHM table for pump configurations A, B, C at three pump centres."""
import argparse
import time

from crowent import evolution, oracle
from crowent.dispersion import CrowParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-half", type=int, default=512)
    ap.add_argument("--p", type=int, default=40)
    args = ap.parse_args()

    start = time.perf_counter()
    rows = evolution.table_sweep(CrowParams(), p=args.p, n_half=args.n_half, sign=oracle.calibrate_sign())
    print(f"{'config':>6} {'k0D/pi':>7} {'n_max':>8} {'dev':>7} {'FWHM/tau':>9} {'t_peak/tau':>10}")
    for r in rows:
        m = r.metrics
        print(f"{r.config:>6} {r.k0D_over_pi:7.2f} {m.n_max:8.4f} {m.dev:7.4f} {m.fwhm_tau:9.3f} {m.t_peak:10.3f}")
    print(f"# {time.perf_counter() - start:.1f} s, n_half = {args.n_half}")


if __name__ == "__main__":
    main()
