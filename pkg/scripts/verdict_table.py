"""Count verdicts by theorem over a PW grid."""

import argparse
from collections import Counter

from pstiefel.config import TableConfig
from pstiefel.grid import verdict_table
from pstiefel.plocal import odd_primes_upto


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--p-max", type=int, default=31)
    args = ap.parse_args()
    cfg = TableConfig("PW", tuple(range(2, args.n_max + 1)), None, tuple(odd_primes_upto(args.p_max)))
    rows = verdict_table(cfg.space, cfg.points())
    counts = Counter((r["theorem"], r["stable"]) for r in rows)
    for (thm, stable), c in sorted(counts.items()):
        print(f"{thm:16s} {'stable' if stable else 'unstable':8s} {c}")
    print(f"{len(rows)} rows")


if __name__ == "__main__":
    main()
