"""Write the closed-form depolarizing regression table used by the acceptance tests.

Uses only scalar formulas (no qent imports): at the maximally mixed qubit,
  I_q = 2 ln 2 - H(1 - 3p/4, p/4, p/4, p/4)
  I_d = ln 2 - h(p/2)
"""
import argparse
import csv
import math
from pathlib import Path

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "depolarizing_sweep.csv"
PARAMS = (0.0, 0.25, 0.5, 0.75, 1.0)


def shannon(p):
    return -sum(x * math.log(x) for x in p if x > 0)


def i_q(p):
    return 2 * math.log(2) - shannon([1 - 3 * p / 4] + [p / 4] * 3)


def i_d(p):
    return math.log(2) - shannon([p / 2, 1 - p / 2])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = ap.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["param", "I_q", "I_d"])
        for p in PARAMS:
            w.writerow([repr(p), repr(i_q(p)), repr(i_d(p))])
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
