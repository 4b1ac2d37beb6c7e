"""Single-symbol versus joint-detection rates, and exhaustive C_n on a BSC."""

import argparse

import numpy as np

from cqrates.capacities import DiscreteChannel, c1_binary, holevo_binary, max_mutual_information
from cqrates.dmcsim import brute_force_cn


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.11, help="BSC crossover")
    ap.add_argument("--n-max", type=int, default=2, choices=(1, 2))
    args = ap.parse_args()

    print("gamma     C1        C         C - C1")
    for g in np.linspace(0.05, 0.95, 10):
        c1, c = c1_binary(g), holevo_binary(g)
        print(f"{g:.3f}  {c1:.6f}  {c:.6f}  {c - c1:.3e}")

    ch = DiscreteChannel.bsc(args.p)
    cap, _ = max_mutual_information(ch)
    print(f"\nBSC({args.p}) capacity {cap:.10f}")
    for n in range(1, args.n_max + 1):
        cn, code, dec = brute_force_cn(ch, n, 2)
        print(f"n={n}: C_n={cn:.10f}  C_n/n={cn / n:.10f}  code={code.codewords.tolist()}"
              f"  decoder={dec.tolist()}")


if __name__ == "__main__":
    main()
