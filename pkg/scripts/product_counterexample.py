"""Scale-stability scan of the 25-point l_2 product of two l_1 crosses.

The factors have negative type but the product does not: at small enough
scales the similarity matrix goes indefinite.
"""

import argparse

from maglab import product_counterexample_experiment


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--json")
    args = parser.parse_args()

    report = product_counterexample_experiment()
    print(f"classification: {report.classification}")
    for t, lam in report.records:
        marker = "  <-- indefinite" if t in report.failing_scales else ""
        print(f"  t={t:<12.6g} lambda_min={lam: .6e}{marker}")
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.to_json())


if __name__ == "__main__":
    main()
