"""Print a table of the headline identities for a few random inputs.

Columns: dimension, S(rho), I at the standard compound minus 2S,
disentanglement minus tr rho ln rho, and the identity-channel I_d, I_o and
capacities against their exact values.
"""
import argparse
import math

import numpy as np

from qent import capacity as cap
from qent import channels, entangle, entropy, states


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = cap.OptimizerConfig(restarts=2, seed=args.seed)
    rng = np.random.default_rng(args.seed)

    print(f"{'d':>2} {'S':>10} {'I_std-2S':>10} {'D-trlnr':>10} {'I_d-S':>10} {'I_o-S':>10}")
    for d in (2, 3):
        ch = channels.identity_channel(d)
        for _ in range(args.samples):
            rho = states.random_density(d, seed=rng)
            s = entropy.von_neumann(rho)
            w = entangle.standard_compound(rho)
            lam = np.linalg.eigvalsh(rho.matrix)
            lam = lam[lam > 0]
            dis = entropy.conditional_and_disentanglement(w).disentanglement
            print(f"{d:>2} {s:10.6f} {entropy.mutual_entropy(w) - 2 * s:10.1e} "
                  f"{dis - float(np.sum(lam * np.log(lam))):10.1e} "
                  f"{cap.info_d(rho, ch, cfg).value - s:10.1e} "
                  f"{cap.info_o(rho, ch, cfg).value - s:10.1e}")

    print()
    for d in (2, 3):
        ch = channels.identity_channel(d)
        for kind, exact in (("q", 2 * math.log(d)), ("d", math.log(d)), ("o", math.log(d))):
            value = cap.capacity(ch, kind, cfg).value
            print(f"identity d={d} C_{kind} = {value:.6f} (exact {exact:.6f})")


if __name__ == "__main__":
    main()
