"""Magnitude growth of a scaled l_1 unit-square grid.

Compares net magnitudes against the volume-ratio lower bound t^2 / 4 and
reports the log-log dimension slope over the largest scales.
"""

import argparse

from maglab import SpaceSpec, growth_bound_study


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=int, default=41, help="grid points per side")
    parser.add_argument(
        "--scales", default="4,8,16",
        type=lambda s: [float(x) for x in s.split(",")],
    )
    parser.add_argument("--json")
    args = parser.parse_args()

    template = SpaceSpec("grid_net", {"n": 2, "p": 1.0, "m": args.m})
    study = growth_bound_study(template, args.scales)
    for c in study.checks:
        print(
            f"t={c.t:<6g} |tA| >= {c.net_magnitude:.4f}  "
            f"lower bound {c.lower_bound:.4f}  satisfied={c.satisfied}"
        )
    if study.dimension_slope is not None:
        print(
            f"dimension slope {study.dimension_slope:.4f} "
            f"+/- {study.slope_stderr:.4f}"
        )
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(study.to_json())


if __name__ == "__main__":
    main()
