"""Classify every lifted irreducible of SL_n(Z/N) plus the trivial
extensions, printing one line per candidate.

    python scripts/classify_sweep.py --n 3 --levels 2 3 --radius 3
"""
import argparse
import time

from slnchar.charcheck import candidates_from_table, classify, trivial_extension
from slnchar.finquot import character_table, enumerate_group
from slnchar.subgroups import ball_enumerate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--levels", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--radius", type=int, default=3)
    ap.add_argument("--nmax", type=int, default=6)
    a = ap.parse_args()
    ball = ball_enumerate(a.n, a.radius, central=a.n % 2 == 0)
    print(f"ball n={a.n} r={a.radius}: {len(ball)} elements")
    cands = []
    for N in a.levels:
        t0 = time.time()
        table = character_table(enumerate_group(a.n, N))
        print(f"SL_{a.n}(Z/{N}): order {table.order}, degrees {table.degrees} ({time.time() - t0:.1f}s)")
        cands += candidates_from_table(table, ball)
    chis = [None] if a.n % 2 else [1, -1]
    cands += [trivial_extension(a.n, chi, ball) for chi in chis]
    for c in cands:
        r = classify(c, n_max=a.nmax)
        tinf = max(f.fit.t_inf for f in r.fits) if r.fits else float("nan")
        print(f"{c.provenance:<28} {r.verdict:<11} level={r.level} "
              f"central_dev={r.centrality.max_deviation:.1e} max_t_inf={tinf:.2e}")


if __name__ == "__main__":
    main()
