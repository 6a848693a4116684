"""Decompose every ternary quintic monomial and tabulate the outcome."""
import argparse
import time

from waring.decompose import decompose
from waring.poly import Form, monomials
from waring.scalar import TolerancePolicy


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--precision", type=int, default=256)
    args = ap.parse_args()
    policy = TolerancePolicy(args.precision)
    print(f"{'exponents':>10} {'kind':>5} {'terms':>5} {'residual':>10} {'seconds':>8}")
    for e in monomials(3, 5):
        f = Form.monomial(e)
        t = time.perf_counter()
        dec, report = decompose(f, policy, seed=args.seed)
        dt = time.perf_counter() - t
        res = float(dec.residual(f))
        print(f"{''.join(map(str, e)):>10} {report.get('kind'):>5} {len(dec):>5} {res:>10.2e} {dt:>8.3f}")


if __name__ == "__main__":
    main()
