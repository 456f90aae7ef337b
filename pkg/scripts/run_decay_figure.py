#!/usr/bin/env python3
"""Impurity decay rate Gamma(omega_A) on both sides of the crossover.

Default parameters follow the potassium-in-lithium probe (mass ratio 40/6,
kappa = 0.18) with trap frequencies scanned through the pair gap. Passing
--e-fermi-khz adds lab-unit columns (omega_A in kHz, Gamma in 1/s).
"""

import argparse
import json
import sys
import tempfile

from dsfprobe import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/gamma", help="output directory")
    ap.add_argument("--points", default="-0.5,0.0,1.0",
                    help="comma-separated interaction strengths 1/kF a")
    ap.add_argument("--omega-min", type=float, default=0.2)
    ap.add_argument("--omega-max", type=float, default=2.0)
    ap.add_argument("--omega-points", type=int, default=46)
    ap.add_argument("--epsilon", type=float, default=0.01)
    ap.add_argument("--e-fermi-khz", type=float, default=None,
                    help="Fermi energy in kHz for lab-unit columns")
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()
    cfg = {
        "inv_kfa": sorted(float(x) for x in args.points.split(",")),
        "omega_a_min": args.omega_min,
        "omega_a_max": args.omega_max,
        "omega_a_points": args.omega_points,
        "epsilon": args.epsilon,
    }
    if args.e_fermi_khz is not None:
        cfg["e_fermi_khz"] = args.e_fermi_khz
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(cfg, fh)
        path = fh.name
    return cli.main([
        "gamma", "--config", path, "--out", args.out,
        "--threads", str(args.threads),
    ])


if __name__ == "__main__":
    sys.exit(main())
