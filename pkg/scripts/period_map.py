"""Tabulate I_q(alpha) and dI/dalpha against alpha/alpha* for several exponents.

    python3 scripts/period_map.py --q 2.5 3 4 6 --points 40 > period_map.csv
"""
import argparse
import csv
import sys

import numpy as np

from sharpembed.phase_plane import alpha_star
from sharpembed.quadrature import period_integral, period_integral_deriv, period_limit


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=float, nargs="+", default=[2.5, 3.0, 4.0, 6.0])
    ap.add_argument("--points", type=int, default=40)
    args = ap.parse_args()

    out = csv.writer(sys.stdout)
    out.writerow(["q", "alpha_fraction", "alpha", "I", "dI_dalpha", "I_minus_limit"])
    for q in args.q:
        astar = alpha_star(q)
        for frac in np.linspace(0.01, 0.999, args.points):
            a = frac * astar
            value = period_integral(q, a).value
            out.writerow([q, repr(float(frac)), repr(float(a)), repr(value),
                          repr(period_integral_deriv(q, a).value), repr(value - period_limit(q))])


if __name__ == "__main__":
    main()
