"""Distribution of Waring ranks of random binary forms by degree."""
import argparse
import random
from collections import Counter

from waring.apolarity import binary_rank
from waring.poly import Form


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--range", type=int, default=10)
    ap.add_argument("--degrees", default="3,4,5,6,7")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    for d in (int(x) for x in args.degrees.split(",")):
        ranks = Counter()
        for _ in range(args.n):
            f = Form.from_coeffs(2, d, [rng.randint(-args.range, args.range) for _ in range(d + 1)])
            ranks[binary_rank(f)] += 1
        generic = (d + 2) // 2
        print(f"degree {d}: generic rank {generic}, observed {dict(sorted(ranks.items()))}")


if __name__ == "__main__":
    main()
