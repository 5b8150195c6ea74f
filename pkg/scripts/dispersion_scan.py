"""Band frequency, loss rate, Q and group velocity across the zone, plus the pump-side numbers."""
import argparse
import math

import numpy as np

from crowent.biphoton import PhysicalPump, PumpConfig, pump_photon_number, widths_from_sigma
from crowent.dispersion import CrowParams, complex_frequency, group_velocity, quality_factor


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=9)
    ap.add_argument("--sigma", type=float, default=0.47, help="sigma_+ D = sigma_- D for the pump estimate")
    args = ap.parse_args()

    params = CrowParams()
    print(f"D = {params.D * 1e6:.4f} um, tau = {params.tau:.2f} D/(4 pi c) = {params.tau * 1e15 / params.frequency_unit:.2f} fs")
    print(f"{'kD/pi':>6} {'omega':>10} {'gamma':>11} {'Q':>11} {'v_g/c':>9}")
    for k in np.linspace(0, math.pi, args.points):
        w = complex_frequency(params, k)
        print(f"{k / math.pi:6.3f} {w.real:10.6f} {-w.imag:11.4e} {quality_factor(params, k):11.4e} "
              f"{4 * math.pi * group_velocity(params, k):9.5f}")

    pump = PumpConfig(sigma_plus_D=args.sigma, sigma_minus_D=args.sigma, physical=PhysicalPump())
    widths = widths_from_sigma(params, pump)
    photons = pump_photon_number(pump, params)
    print(f"pump FWHM: {widths.temporal_fwhm * 1e15:.1f} fs, {widths.spatial_fwhm * 1e6:.2f} um")
    print(f"|alpha|^2 = {photons.alpha_sq:.3e}, pulse energy = {photons.pulse_energy * 1e9:.2f} nJ")


if __name__ == "__main__":
    main()
