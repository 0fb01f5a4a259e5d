#!/usr/bin/env python3
"""Certificate sweep over signatures and reflection axes.

For each signature of dimension n (n = 4 or 8) and each parity, draw random
non-null axes and theta-even/odd tensors and certify every top-degree alpha.
Prints a table of counts and the largest witness seen (always 0 if healthy).

    python scripts/certify_sweep.py --n 4 --per-signature 20
"""
import argparse
import random
import sys
from itertools import product

from curvcert.battery import random_reflection
from curvcert.errors import CertificateViolation
from curvcert.exterior import ScalarSpace
from curvcert.generators import random_parity
from curvcert.symmetry import EVEN, ODD, vanishing_certificate


def partitions(k: int, largest: int | None = None):
    largest = largest or k
    if k == 0:
        yield ()
        return
    for first in range(min(k, largest), 0, -1):
        for rest in partitions(k - first, first):
            yield (first,) + rest


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, choices=(4, 8), default=4)
    ap.add_argument("--per-signature", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    alphas = list(partitions(args.n // 4))
    # signatures up to permutation: q negative signs, q <= n/2
    sigs = [tuple([-1] * q + [1] * (args.n - q)) for q in range(args.n // 2 + 1)]
    failures = 0
    print(f"{'signature':>28}  {'parity':>6}  {'certs':>5}  max|witness|")
    for j, (signs, par) in enumerate(product(sigs, (EVEN, ODD))):
        space = ScalarSpace(signs)
        rng = random.Random(args.seed * 1000 + j)
        worst, count = 0, 0
        for i in range(args.per_signature):
            theta = random_reflection(space, rng)
            C = random_parity(space, theta, par, rng.randrange(10**9))
            for alpha in alphas:
                try:
                    cert = vanishing_certificate(C, theta, alpha)
                    w = cert.witness
                except CertificateViolation as exc:
                    w = exc.certificate.witness
                    failures += 1
                worst = max(worst, abs(w))
                count += 1
        print(f"{str(signs):>28}  {par:>6}  {count:>5}  {worst}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
