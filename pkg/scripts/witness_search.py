"""Randomized search for finite subsets of l_p^n with indefinite similarity.

For p = 2 this should come up empty; for p = infinity small witnesses
exist and the seeded search finds one quickly.
"""

import argparse
import math

from maglab import witness_search


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=float, default=math.inf)
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--budget", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    result = witness_search(p=args.p, n=args.n, budget=args.budget, seed=args.seed)
    if result.found:
        print(
            f"witness found after {result.subsets_tested} subsets "
            f"at scale {result.witness_scale:g} "
            f"(lambda_min {result.witness_lambda_min:.3e})"
        )
        for pt in result.witness_points:
            print(f"  {pt}")
    else:
        print(f"no witness in {result.subsets_tested} subsets")


if __name__ == "__main__":
    main()
