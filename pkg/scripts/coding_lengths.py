"""Exact average code lengths of both codecs on random k-CNFs with isolated solutions.

Each row is one isolated solution: the averages over all n! variable orders
next to the targets n - n/k and n - n/k' + 1, where k' = s + 2 is the width
used by the width-reduced codec.
"""

from __future__ import annotations

import argparse
import random
from dataclasses import dataclass
from fractions import Fraction

from depth3lab.acceptance import random_kcnf
from depth3lab.coding import average_code_length, isolated_solutions, width_parameters, width_reduce_encode


@dataclass
class Config:
    formulas: int = 10
    n: int = 6
    seed: int = 7


def main(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    print(f"{'k':>2} {'m':>3} {'ppz':>7} {'n-n/k':>7} {'wr':>7} {'target':>7}")
    done = 0
    while done < cfg.formulas:
        k = rng.choice((2, 3))
        phi = random_kcnf(rng, cfg.n, k, rng.randint(cfg.n, 2 ** (k - 1) * cfg.n))
        T = isolated_solutions(phi).assignments()
        if not T:
            continue
        done += 1
        _, kk = width_parameters(phi)
        for x in T:
            a = average_code_length(x, phi)
            w = average_code_length(x, phi, encoder=width_reduce_encode)
            print(f"{k:>2} {phi.size:>3} {float(a):>7.3f} {float(cfg.n - Fraction(cfg.n, k)):>7.3f} "
                  f"{float(w):>7.3f} {float(cfg.n - Fraction(cfg.n, kk) + 1):>7.3f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--formulas", type=int, default=10)
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--seed", type=int, default=7)
    a = ap.parse_args()
    main(Config(a.formulas, a.n, a.seed))
