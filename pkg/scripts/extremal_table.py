"""Exact T(n, tau) for hypergraphs (n <= 5) and graphs (n <= 7)."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from depth3lab.extremal import extremal_T


@dataclass
class Config:
    family: str = "hypergraphs"
    n_max: int = 5


def main(cfg: Config) -> None:
    print(f"family={cfg.family}")
    print(f"{'n':>3} {'tau':>4} {'T':>8} {'t':>5} witness")
    for n in range(1, cfg.n_max + 1):
        for t in range(1, n + 1):
            r = extremal_T(n, t, cfg.family)
            if r.ratio is None:
                continue
            print(f"{n:>3} {t:>4} {str(r.ratio):>8} {r.t:>5} {r.witness.edge_list()}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--family", choices=["graphs", "hypergraphs"], default="hypergraphs")
    ap.add_argument("--n-max", type=int)
    a = ap.parse_args()
    n_max = a.n_max if a.n_max is not None else (5 if a.family == "hypergraphs" else 6)
    main(Config(a.family, n_max))
