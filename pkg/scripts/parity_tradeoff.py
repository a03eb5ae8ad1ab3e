"""Size against advantage for the block approximators of parity.

For each n and k' the block CNF has advantage 2^(1-k'); the table compares it
with the ceiling 2^(2 - n/(log2|phi| + 3)) that every one-sided approximator obeys.
"""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass

from depth3lab.coding import one_sided_parity_tradeoff
from depth3lab.constructions import parity_block_approximator


@dataclass
class Config:
    n_max: int = 16
    k_max: int = 4


def main(cfg: Config) -> None:
    print(f"{'n':>3} {'k':>2} {'size':>6} {'adv':>8} {'ceiling':>9} ok")
    for n in range(2, cfg.n_max + 1):
        for k in range(1, min(cfg.k_max, n) + 1):
            phi = parity_block_approximator(n, k)
            r = one_sided_parity_tradeoff(n, phi)
            ceiling = 2 ** (2 - n / (math.log2(phi.size) + 3))
            print(f"{n:>3} {k:>2} {phi.size:>6} {str(r.advantage):>8} {ceiling:>9.4f} {'yes' if r.ok else 'NO'}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=16)
    ap.add_argument("--k-max", type=int, default=4)
    a = ap.parse_args()
    main(Config(a.n_max, a.k_max))
