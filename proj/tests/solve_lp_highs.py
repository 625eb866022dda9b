#!/usr/bin/env python3
"""Solve an LP-format model with HiGHS and print the objective value."""
import argparse
import sys

import highspy


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("model", help="path to a .lp file")
    parser.add_argument("--time-limit", type=float, default=300.0)
    args = parser.parse_args()

    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", args.time_limit)
    h.setOptionValue("threads", 1)
    if h.readModel(args.model) != highspy.HighsStatus.kOk:
        print("error: cannot read model", file=sys.stderr)
        return 2
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        print(f"status {h.modelStatusToString(status)}", file=sys.stderr)
        return 1
    print(f"{h.getInfo().objective_function_value:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
