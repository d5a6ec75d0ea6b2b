"""Sweep a channel family at a fixed input and write I_q, I_d, I_o as CSV.

Example: python3 scripts/run_sweep.py amplitude_damping --steps 11 --out ad.csv
"""
import argparse
import sys

import numpy as np

from qent import capacity as cap
from qent import channels, states
from qent.cli import sweep_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("family", choices=channels.FAMILIES)
    ap.add_argument("--steps", type=int, default=11)
    ap.add_argument("--input", choices=["mixed", "random"], default="mixed")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--restarts", type=int, default=4)
    ap.add_argument("--out", help="CSV path (stdout if omitted)")
    args = ap.parse_args()

    rho = (states.maximally_mixed(2) if args.input == "mixed"
           else states.random_density(2, seed=args.seed))
    cfg = cap.OptimizerConfig(restarts=args.restarts, seed=args.seed)
    params = np.linspace(0.0, 1.0, args.steps).tolist()
    text = sweep_csv(cap.sweep(args.family, params, rho, cfg))
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
