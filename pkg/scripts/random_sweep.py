"""Statistics over seeded random ternary quintics.

Reports the configuration kinds, term counts, outer restarts, the worst
residual and timing quantiles.
"""
import argparse
import random
import statistics
import time
from collections import Counter

from waring.decompose import decompose
from waring.scalar import TolerancePolicy
from waring.synthetic import random_quintic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--range", type=int, default=10, help="coefficients drawn from [-R, R]")
    ap.add_argument("--precision", type=int, default=256)
    args = ap.parse_args()
    policy = TolerancePolicy(args.precision)
    rng = random.Random(args.seed)
    kinds, terms, outer = Counter(), Counter(), Counter()
    times, worst = [], 0.0
    for i in range(args.n):
        f = random_quintic(rng, lo=-args.range, hi=args.range)
        t = time.perf_counter()
        dec, report = decompose(f, policy, seed=args.seed + i)
        times.append(time.perf_counter() - t)
        kinds[report.get("kind")] += 1
        terms[len(dec)] += 1
        outer[report.get("outer_attempts")] += 1
        worst = max(worst, float(dec.residual(f)))
    q = statistics.quantiles(times, n=20)
    print(f"forms            {args.n}")
    print(f"kinds            {dict(sorted(kinds.items()))}")
    print(f"terms            {dict(sorted(terms.items()))}")
    print(f"outer attempts   {dict(sorted(outer.items()))}")
    print(f"worst residual   {worst:.3e}")
    print(f"seconds          median {statistics.median(times):.3f}  p95 {q[-1]:.3f}  max {max(times):.3f}")


if __name__ == "__main__":
    main()
