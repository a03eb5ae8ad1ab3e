"""Exact minimum CNF size, prime implicates, and a persistent cost cache.

A clause ``C`` is an implicate of ``g`` (``g <= C``) iff the cube on which
``C`` is false lies inside ``g^{-1}(0)``.  Prime implicates are therefore the
maximal subcubes of the zero set, and a minimum CNF is a minimum cover of the
zero set by such cubes.  Cubes are pairs ``(care, val)`` of index masks: the
cube holds every index ``i`` with ``i & care == val``.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from filelock import FileLock

from .boolfn import (
    CapExceeded,
    TruthTable,
    check_cap,
    full_mask,
    iter_ones,
    popcount,
    var_bit,
    var_mask,
)
from .formula import Clause, CnfFormula, literal_key

log = logging.getLogger(__name__)

PRIME_CAP = 14
MIN_CNF_CAP = 10
CACHE_ENV = "DEPTH3LAB_CACHE"


class NotMonotone(ValueError):
    pass


class NotUpwardClosed(ValueError):
    pass


@dataclass(frozen=True)
class PrimeImplicateSet:
    n: int
    clauses: tuple[Clause, ...]
    masks: tuple[int, ...]  # falsifying point set of each clause


# -- cubes -------------------------------------------------------------------

def cube_points(n: int, care: int, val: int) -> int:
    m = full_mask(n)
    for j in range(1, n + 1):
        b = 1 << var_bit(n, j)
        if care & b:
            vm = var_mask(n, j)
            m &= vm if val & b else vm ^ full_mask(n)
    return m


def cube_clause(n: int, care: int, val: int) -> Clause:
    """Clause false exactly on the cube."""
    lits = []
    for j in range(1, n + 1):
        b = 1 << var_bit(n, j)
        if care & b:
            lits.append(-j if val & b else j)
    return Clause(lits)


def cube_key(n: int, care: int, val: int) -> tuple[tuple[int, bool], ...]:
    """Lexicographic key of ``cube_clause(n, care, val)`` without building it."""
    return tuple(
        (j, bool(val >> (n - j) & 1)) for j in range(1, n + 1) if care >> (n - j) & 1
    )


@lru_cache(maxsize=None)
def _cube_table(n: int) -> tuple[tuple[int, int, int, tuple[int, ...]], ...]:
    """All 3^n cubes as ``(care, val, points, parent_indices)``, in clause-key order."""
    cubes = []
    for care in range(1 << n):
        sub = care
        while True:
            cubes.append((care, sub))
            if sub == 0:
                break
            sub = (sub - 1) & care
    cubes.sort(key=lambda c: cube_key(n, *c))
    index = {c: i for i, c in enumerate(cubes)}
    table = []
    for care, val in cubes:
        parents = tuple(index[(care ^ (1 << b), val & ~(1 << b))] for b in iter_ones(care))
        table.append((care, val, cube_points(n, care, val), parents))
    return tuple(table)


SMALL_N = 6


def _prime_cubes_small(n: int, zeros: int) -> list[tuple[int, int, int]]:
    table = _cube_table(n)
    inside = [not (pts & ~zeros) for (_, _, pts, _) in table]
    return [
        (care, val, pts)
        for ok, (care, val, pts, parents) in zip(inside, table)
        if ok and not any(inside[p] for p in parents)
    ]


def _prime_cubes_qm(n: int, zeros: int) -> list[tuple[int, int, int]]:
    full = (1 << n) - 1
    level = {(full, z) for z in iter_ones(zeros)}
    primes = []
    while level:
        merged = set()
        nxt = set()
        for care, val in level:
            for b in iter_ones(care & ~val):
                bb = 1 << b
                partner = (care, val | bb)
                if partner in level:
                    nxt.add((care ^ bb, val))
                    merged.add((care, val))
                    merged.add(partner)
        primes.extend(c for c in level if c not in merged)
        level = nxt
    return [(care, val, cube_points(n, care, val)) for care, val in primes]


def prime_cubes(n: int, zeros: int) -> list[tuple[int, int, int]]:
    """Maximal subcubes of the zero set, sorted by their clause's lexicographic key."""
    if n <= SMALL_N:
        return _prime_cubes_small(n, zeros)
    cubes = _prime_cubes_qm(n, zeros)
    cubes.sort(key=lambda c: cube_key(n, c[0], c[1]))
    return cubes


def prime_implicates(g: TruthTable) -> PrimeImplicateSet:
    check_cap("n", g.n, PRIME_CAP)
    zeros = g.bits ^ full_mask(g.n)
    cubes = prime_cubes(g.n, zeros)
    return PrimeImplicateSet(
        g.n,
        tuple(cube_clause(g.n, c, v) for c, v, _ in cubes),
        tuple(p for _, _, p in cubes),
    )


# -- exact cover ---------------------------------------------------------------

def min_cover(universe: int, sets: list[int]) -> list[int]:
    """Indices of a minimum-cardinality subfamily of ``sets`` covering ``universe``.

    Branch and bound: branch on the uncovered element with the fewest
    covering sets, bound by a greedy packing of elements no two of which share
    a set.  Ties follow list order, so the result is deterministic.
    """
    if universe == 0:
        return []
    covers: dict[int, list[int]] = {}
    for e in iter_ones(universe):
        covers[e] = [i for i, s in enumerate(sets) if (s >> e) & 1]
        if not covers[e]:
            raise ValueError(f"element {e} is not covered by any set")
    cover_bits = {e: sum(1 << i for i in idx) for e, idx in covers.items()}
    order = sorted(covers, key=lambda e: (len(covers[e]), e))

    best = _greedy_cover(universe, sets)
    best_len = [len(best)]
    best_sol = [best]

    def lower_bound(uncovered: int) -> int:
        used = 0
        count = 0
        for e in order:
            if (uncovered >> e) & 1 and not cover_bits[e] & used:
                used |= cover_bits[e]
                count += 1
        return count

    def search(uncovered: int, chosen: list[int]) -> None:
        if uncovered == 0:
            if len(chosen) < best_len[0]:
                best_len[0] = len(chosen)
                best_sol[0] = list(chosen)
            return
        if len(chosen) + lower_bound(uncovered) >= best_len[0]:
            return
        pivot = min((e for e in iter_ones(uncovered)), key=lambda e: (len(covers[e]), e))
        cands = sorted(covers[pivot], key=lambda i: -popcount(sets[i] & uncovered))
        for i in cands:
            chosen.append(i)
            search(uncovered & ~sets[i], chosen)
            chosen.pop()

    search(universe, [])
    return sorted(best_sol[0])


def _greedy_cover(universe: int, sets: list[int]) -> list[int]:
    chosen = []
    left = universe
    while left:
        best_i, best_gain = -1, 0
        for i, s in enumerate(sets):
            gain = popcount(s & left)
            if gain > best_gain:
                best_i, best_gain = i, gain
        if best_i < 0:
            raise ValueError("universe cannot be covered")
        chosen.append(best_i)
        left &= ~sets[best_i]
    return chosen


# -- minimum CNF ---------------------------------------------------------------

def _min_cnf_cost(n: int, ones: int) -> int:
    zeros = ones ^ full_mask(n)
    if zeros == 0:
        return 0
    return len(min_cover(zeros, [p for _, _, p in prime_cubes(n, zeros)]))


def _min_cnf(n: int, ones: int) -> tuple[int, CnfFormula]:
    zeros = ones ^ full_mask(n)
    if zeros == 0:
        return 0, CnfFormula(n, ())
    cubes = prime_cubes(n, zeros)
    pick = min_cover(zeros, [p for _, _, p in cubes])
    phi = CnfFormula(n, tuple(cube_clause(n, cubes[i][0], cubes[i][1]) for i in pick))
    return len(pick), phi


def min_cnf_size(g: TruthTable) -> tuple[int, CnfFormula]:
    """Exact minimum clause count of a CNF computing ``g`` and a witness."""
    check_cap("n", g.n, MIN_CNF_CAP)
    size, phi = _min_cnf(g.n, g.bits)
    if phi.table_bits() != g.bits:
        raise AssertionError("minimum CNF witness does not compute the target")
    return size, phi


def min_monotone_cnf(g: TruthTable) -> tuple[int, CnfFormula]:
    """The unique irredundant monotone CNF of a monotone ``g``: all its prime implicates."""
    if not g.is_monotone():
        raise NotMonotone(f"{g!r} is not monotone")
    check_cap("n", g.n, PRIME_CAP)
    pis = prime_implicates(g)
    phi = CnfFormula(g.n, pis.clauses)
    assert all(lit > 0 for c in phi.clauses for lit in c)
    return phi.size, phi


def is_upward_closed(n: int, mask: int) -> bool:
    return TruthTable(n, mask).is_monotone()


# -- persistent cache ----------------------------------------------------------

class CostCache:
    """Append-only record file ``n subset-hex mode size`` with an in-memory index.

    A trailing record that is incomplete or unparsable is truncated on open.
    Appends are serialized through a lock file; readers need no lock.
    """

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else None
        self._mem: dict[tuple[int, int, str], int] = {}
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self._lock = FileLock(str(self.path) + ".lock")
            self._load()

    def _load(self) -> None:
        assert self.path is not None
        if not self.path.exists():
            return
        with self._lock:
            data = self.path.read_bytes()
            good = 0
            pos = 0
            while pos < len(data):
                end = data.find(b"\n", pos)
                if end < 0:
                    break
                rec = self._parse(data[pos:end])
                if rec is None:
                    break
                key, size = rec
                self._mem[key] = size
                pos = end + 1
                good = pos
            if good < len(data):
                log.warning("truncating corrupt cache tail of %s at byte %d", self.path, good)
                with open(self.path, "r+b") as fh:
                    fh.truncate(good)

    @staticmethod
    def _parse(line: bytes):
        try:
            n_s, hex_s, mode, size_s = line.decode("ascii").split()
            if mode not in ("general", "monotone"):
                return None
            return (int(n_s), int(hex_s, 16), mode), int(size_s)
        except (ValueError, UnicodeDecodeError):
            return None

    def get(self, n: int, mask: int, mode: str) -> int | None:
        return self._mem.get((n, mask, mode))

    def put(self, n: int, mask: int, mode: str, size: int) -> None:
        key = (n, mask, mode)
        if self._mem.get(key) == size:
            return
        self._mem[key] = size
        if self.path is not None:
            with self._lock, open(self.path, "a", encoding="ascii") as fh:
                fh.write(f"{n} {mask:x} {mode} {size}\n")

    def __len__(self) -> int:
        return len(self._mem)


_default_cache: CostCache | None = None


def default_cache() -> CostCache:
    global _default_cache
    if _default_cache is None:
        d = os.environ.get(CACHE_ENV)
        _default_cache = CostCache(Path(d) / "cnfmin.cache" if d else None)
    return _default_cache


def set_default_cache(cache: CostCache | None) -> None:
    global _default_cache
    _default_cache = cache


def subset_cost(n: int, mask: int, mode: str = "general", cache: CostCache | None = None) -> int:
    """Minimum (monotone) CNF size of the indicator of ``mask`` on ``{0,1}^n``."""
    cache = cache if cache is not None else default_cache()
    hit = cache.get(n, mask, mode)
    if hit is not None:
        return hit
    if mode == "general":
        check_cap("n", n, MIN_CNF_CAP)
        size = _min_cnf_cost(n, mask)
    elif mode == "monotone":
        g = TruthTable(n, mask)
        if not g.is_monotone():
            raise NotUpwardClosed("subset is not upward-closed")
        size = len(prime_cubes(n, mask ^ full_mask(n)))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    cache.put(n, mask, mode, size)
    return size


def subset_witness(n: int, mask: int, mode: str = "general") -> CnfFormula:
    if mode == "general":
        return _min_cnf(n, mask)[1]
    return min_monotone_cnf(TruthTable(n, mask))[1]


def cost_of_subset(f: TruthTable, subset: int, mode: str = "general", cache: CostCache | None = None) -> int:
    """Cost of the set-cover column ``subset`` (a full-cube mask inside ``f^{-1}(1)``)."""
    if subset & ~f.bits:
        raise ValueError("subset is not contained in f^{-1}(1)")
    if mode == "monotone" and not is_upward_closed(f.n, subset):
        raise NotUpwardClosed("subset is not upward-closed")
    return subset_cost(f.n, subset, mode, cache)


__all__ = [
    "CapExceeded",
    "CostCache",
    "NotMonotone",
    "NotUpwardClosed",
    "PrimeImplicateSet",
    "cost_of_subset",
    "cube_clause",
    "literal_key",
    "min_cnf_size",
    "min_cover",
    "min_monotone_cnf",
    "prime_cubes",
    "prime_implicates",
    "subset_cost",
    "subset_witness",
]
