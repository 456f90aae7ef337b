#!/usr/bin/env python3
"""Dynamic-structure-factor map S(q, nu) on a rectangular grid.

Produces the raw data for an intensity plot showing the collective-mode
ridge below the pair continuum and the broad pair-breaking background.
"""

import argparse
import json
import sys
import tempfile

from dsfprobe import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/dsf", help="output directory")
    ap.add_argument("--inv-kfa", type=float, default=0.0)
    ap.add_argument("--q-max", type=float, default=2.0)
    ap.add_argument("--nu-max", type=float, default=3.0)
    ap.add_argument("--q-points", type=int, default=40)
    ap.add_argument("--nu-points", type=int, default=60)
    ap.add_argument("--epsilon", type=float, default=0.01)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()
    cfg = {
        "inv_kfa": [args.inv_kfa],
        "q_min": 0.05, "q_max": args.q_max, "q_points": args.q_points,
        "nu_min": 0.02, "nu_max": args.nu_max, "nu_points": args.nu_points,
        "epsilon": args.epsilon,
    }
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(cfg, fh)
        path = fh.name
    return cli.main([
        "dsf-grid", "--config", path, "--out", args.out,
        "--threads", str(args.threads),
    ])


if __name__ == "__main__":
    sys.exit(main())
