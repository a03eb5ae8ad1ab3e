"""Run the acceptance criteria and print one line per criterion.

    python scripts/run_acceptance.py [--only NAME ...] [--seed S] [--json out.jsonl]
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from depth3lab.acceptance import CRITERIA, DEFAULT_SEED, run_criterion
from depth3lab.cli import jsonable
from depth3lab.cnfmin import default_cache


@dataclass
class Config:
    only: list[str] = field(default_factory=list)
    seed: int = DEFAULT_SEED
    json: Path | None = None


def main(cfg: Config) -> int:
    cache = default_cache()
    names = cfg.only or list(CRITERIA)
    failed = 0
    sink = open(cfg.json, "w") if cfg.json else None
    for name in names:
        res = run_criterion(name, cache, cfg.seed)
        print(res.line(), flush=True)
        failed += not res.ok
        if sink:
            sink.write(json.dumps(jsonable({"name": name, "ok": res.ok, "detail": res.detail}), sort_keys=True) + "\n")
    if sink:
        sink.close()
    print(f"{len(names) - failed}/{len(names)} criteria pass")
    return 1 if failed else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--only", nargs="*", default=[], choices=list(CRITERIA))
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--json", type=Path)
    a = ap.parse_args()
    sys.exit(main(Config(a.only, a.seed, a.json)))
