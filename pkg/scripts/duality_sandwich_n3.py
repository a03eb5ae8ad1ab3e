"""Sandwich ceil(s*) <= L3(f) <= (1 + n ln 2) s* over every non-constant function on 3 variables.

Prints a histogram of (s*, L3) pairs and the worst ratio L3 / s*.
"""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from depth3lab.boolfn import TruthTable
from depth3lab.cnfmin import default_cache
from depth3lab.duality import LN2_UPPER, ceil_fraction, solve_duality


@dataclass
class Config:
    n: int = 3
    mode: str = "general"


def main(cfg: Config) -> None:
    cache = default_cache()
    hist: Counter[tuple[Fraction, int]] = Counter()
    worst = Fraction(0)
    upper = 1 + cfg.n * LN2_UPPER
    bad = 0
    for bits in range(1, (1 << (1 << cfg.n)) - 1):
        f = TruthTable(cfg.n, bits)
        rep = solve_duality(f, cfg.mode, exact=True, cache=cache)
        L = rep.exact.size
        hist[(rep.s_star, L)] += 1
        worst = max(worst, L / rep.s_star)
        bad += not (ceil_fraction(rep.s_star) <= L <= upper * rep.s_star)
    print(f"{'s*':>8} {'L3':>4} {'count':>6}")
    for (s, L), c in sorted(hist.items()):
        print(f"{str(s):>8} {L:>4} {c:>6}")
    print(f"worst L3/s* = {worst} ({float(worst):.4f}); allowed factor {float(upper):.4f}; violations {bad}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    a = ap.parse_args()
    main(Config(a.n))
