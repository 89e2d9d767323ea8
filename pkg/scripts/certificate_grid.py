"""Stable-splitting certificate over n <= N, all k, primes n < p < 2n + 10."""

import argparse

from pstiefel.chern import stable_split_certificate
from pstiefel.plocal import odd_primes_upto
from pstiefel.spaces import PW


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=12)
    args = ap.parse_args()
    total = failed = 0
    for n in range(1, args.n_max + 1):
        for k in range(1, n + 1):
            for p in [q for q in odd_primes_upto(2 * n + 9) if q > n]:
                total += 1
                cert = stable_split_certificate(PW(n, k), p)
                if not cert.verdict:
                    failed += 1
                    print(f"PW({n},{k}) p={p}: conditions {[c.passed for c in cert.conditions]}")
    print(f"{total} certificates, {failed} failed")


if __name__ == "__main__":
    main()
