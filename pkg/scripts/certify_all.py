"""Run every grid certificate at one or more densities and print the margins.

    python3 scripts/certify_all.py --density 1 2 4
"""
import argparse
import sys
import time

from sharpembed.certify import SUITES, certify_all


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--density", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--suite", choices=SUITES, nargs="+", default=list(SUITES))
    args = ap.parse_args()

    ok = True
    for d in args.density:
        start = time.perf_counter()
        reports = certify_all(args.suite, density=d)
        print(f"density {d} ({time.perf_counter() - start:.1f}s)")
        for r in reports:
            ok &= r.passed
            worst = r.witnesses[0]
            print(f"  {r.name:12s} {'PASS' if r.passed else 'FAIL'}  margin={r.margin:.3e}  "
                  f"tightest: {worst['check']} at {worst['point']}")
            for key, value in r.diagnostics.items():
                print(f"    {key}: {value!r}")
    sys.exit(0 if ok else 2)


if __name__ == "__main__":
    main()
