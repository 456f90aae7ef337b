#!/usr/bin/env python3
"""Crossover scan of the mean-field background: Delta, mu, c, Theta0, zeta.

Writes eos.csv plus a monotonicity report, including the molecular-binding
and weak-coupling asymptote columns for direct overlay.
"""

import argparse
import sys

from dsfprobe import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/eos", help="output directory")
    ap.add_argument("--config", default=None, help="optional TOML/JSON config")
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()
    argv = ["eos", "--out", args.out, "--threads", str(args.threads)]
    if args.config:
        argv += ["--config", args.config]
    return cli.main(argv)


if __name__ == "__main__":
    sys.exit(main())
