"""Run the acceptance checks and print one line per criterion.

    python scripts/run_acceptance.py [--seed N] [--precision BITS] [--only 1,3]
"""
import argparse
import sys

from waring.acceptance import CHECKS, AcceptanceConfig


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--precision", type=int, default=256)
    ap.add_argument("--only", default="", help="comma separated criterion numbers")
    args = ap.parse_args()
    cfg = AcceptanceConfig(precision_bits=args.precision, seed=args.seed)
    wanted = {int(k) for k in args.only.split(",") if k}
    ok = True
    for k, check in enumerate(CHECKS, start=1):
        if wanted and k not in wanted:
            continue
        r = check(cfg)
        print(f"criterion {k} {r.line()}", flush=True)
        ok &= r.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
