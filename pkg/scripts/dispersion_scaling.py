"""Dispersion of BPSK at low photon number and the blocklength it implies.

For each energy prints V, V/C^2 (times E), and the blocklength at which the
leading-order dispersion bound reaches 90% of capacity.
"""

import argparse
import math

import numpy as np

from cqrates.bounds import thm3_required_n
from cqrates.exponents import quantum_dispersion
from cqrates.optical import c_bpsk
from cqrates.spectral import binary_spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fraction", type=float, default=0.9)
    args = ap.parse_args()
    print("E         V/(E L^2)  E*V/C^2   n(fraction*C)  n*E/L")
    for e in np.geomspace(1e-1, 1e-6, 11):
        L = math.log(1 / e)
        v = quantum_dispersion(binary_spectrum(0.5, math.exp(-2 * e)))
        c = c_bpsk(e)[0]
        n = thm3_required_n(c, v, args.fraction)
        print(f"{e:.2e}  {v / (e * L * L):.5f}    {e * v / c ** 2:.5f}   {n:.4e}     {n * e / L:.2f}")


if __name__ == "__main__":
    main()
