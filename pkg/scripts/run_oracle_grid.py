"""Spectral-sequence oracle over the PW grid; prints one line per mismatch and a summary."""

import argparse

from pstiefel.config import GridConfig
from pstiefel.grid import verify_grid


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--p-max", type=int, default=13)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    cfg = GridConfig(n_max=args.n_max, p_max=args.p_max, workers=args.workers)
    rows = verify_grid(cfg.points(), cfg.workers)
    bad = [r for r in rows if not r["ok"]]
    for r in bad:
        dim = 2 * r["n"] * r["k"] - r["k"] ** 2 - 1
        fm = r["first_mismatch"]
        where = "above dim" if fm and fm["degree"] > dim else "within dim"
        print(f"PW({r['n']},{r['k']}) p={r['p']}: first mismatch in degree {fm and fm['degree']} ({where})")
    checks = sum(r["dd_checks"] for r in rows)
    print(f"{len(rows)} points, {len(bad)} mismatches, {checks} d^2 checks")


if __name__ == "__main__":
    main()
