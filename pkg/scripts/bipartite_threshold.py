"""Locate the scale at which the K_{3,2} similarity matrix loses definiteness.

Bisects the edge length r and compares the sign-change location with the
analytic threshold log(sqrt(2)).
"""

import argparse
import math

from maglab import SpaceSpec, generate, spectrum_diagnostics


def lambda_min(r: float) -> float:
    space = generate(SpaceSpec("complete_bipartite", {"m": 3, "n": 2, "r": r}))
    return spectrum_diagnostics(space).lambda_min


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lo", type=float, default=0.2)
    parser.add_argument("--hi", type=float, default=0.5)
    parser.add_argument("--tol", type=float, default=1e-8)
    args = parser.parse_args()

    lo, hi = args.lo, args.hi
    assert lambda_min(lo) < 0 < lambda_min(hi)
    while hi - lo > args.tol:
        mid = 0.5 * (lo + hi)
        if lambda_min(mid) < 0:
            lo = mid
        else:
            hi = mid
    threshold = 0.5 * (lo + hi)
    exact = math.log(2.0) / 2.0
    print(f"empirical threshold: {threshold:.9f}")
    print(f"log(sqrt(2)):        {exact:.9f}")
    print(f"difference:          {abs(threshold - exact):.3g}")


if __name__ == "__main__":
    main()
