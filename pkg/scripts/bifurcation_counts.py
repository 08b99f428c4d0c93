"""Count positive 2T-periodic solutions across T and compare the Rayleigh
quotient of each nonconstant one with the constant's.

    python3 scripts/bifurcation_counts.py --q 4 --T-max 10 --steps 12
"""
import argparse
import math

import numpy as np

from sharpembed.embedding import constant_quotient
from sharpembed.solutions import count_periodic_solutions, nonconstant_solutions, rayleigh_quotient


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=float, default=4.0)
    ap.add_argument("--T-max", type=float, default=10.0)
    ap.add_argument("--steps", type=int, default=12)
    ap.add_argument("--grid", type=int, default=1024)
    args = ap.parse_args()

    edges = [k * math.pi / math.sqrt(args.q - 2) for k in range(1, 20)]
    print(f"q = {args.q}; new solutions appear past T = "
          + ", ".join(f"{e:.4f}" for e in edges if e < args.T_max))
    for T in np.linspace(0.5, args.T_max, args.steps):
        const = constant_quotient(args.q, T)
        quotients = {p.n: rayleigh_quotient(p, args.q, T)
                     for p in nonconstant_solutions(args.q, T, grid_size=args.grid)}
        shown = "  ".join(f"n={n}: {v:.6f}" for n, v in quotients.items())
        print(f"T={T:7.4f}  count={count_periodic_solutions(args.q, T)}  constant={const:.6f}  {shown}")


if __name__ == "__main__":
    main()
