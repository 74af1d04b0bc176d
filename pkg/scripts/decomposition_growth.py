"""Entry growth of conjugation witnesses against word length.

    python scripts/decomposition_growth.py --n 3 --samples 200 --seed 1
"""
import argparse
import random
import statistics

from slnchar.conjdecomp import decompose, decompose_two_factor
from slnchar.exactmat import SLMatrix
from slnchar.subgroups import generator_keys


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--max-len", type=int, default=40)
    ap.add_argument("--seed", type=int, default=1)
    a = ap.parse_args()
    rng = random.Random(a.seed)
    gens = [SLMatrix.trusted(a.n, g) for g in generator_keys(a.n)]
    fn = decompose_two_factor if a.n >= 4 else decompose
    print(f"{'len':>4} {'input max':>12} {'witness max':>14} {'ratio':>8}")
    for L in range(0, a.max_len + 1, 5):
        ins, outs = [], []
        for _ in range(a.samples):
            g = SLMatrix.identity(a.n)
            for _ in range(L):
                g = g @ rng.choice(gens)
            w = fn(g)
            ins.append(g.max_abs())
            outs.append(w.max_entry())
        mi, mo = statistics.median(ins), statistics.median(outs)
        print(f"{L:>4} {mi:>12.4g} {mo:>14.4g} {mo / mi:>8.3g}")


if __name__ == "__main__":
    main()
