"""Minimum hitting sets and the extremal ratio T(n, tau) = max t(F)/|F|."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .boolfn import check_cap, make_majority, majority_threshold, popcount
from .cnfmin import CostCache
from .duality import LN2_UPPER, build_cover_instance, solve_duality
from .formula import Clause, CnfFormula

HITTING_CAP = 20
HYPERGRAPH_CAP = 5
GRAPH_CAP = 7
CORRESPONDENCE_CAP = 4


class EmptyEdge(ValueError):
    pass


def _vmask(edge) -> int:
    m = 0
    for v in edge:
        m |= 1 << (v - 1)
    return m


@dataclass(frozen=True)
class Hypergraph:
    """Vertices ``1..n``; each edge is a bitmask with vertex ``v`` at bit ``v-1``."""

    n: int
    edges: tuple[int, ...]

    def __post_init__(self) -> None:
        es = tuple(sorted(set(self.edges), key=lambda e: (popcount(e), self.edge_tuple(e))))
        for e in es:
            if e >> self.n:
                raise ValueError(f"edge {self.edge_tuple(e)} mentions a vertex above n={self.n}")
        object.__setattr__(self, "edges", es)

    @classmethod
    def of(cls, n: int, *edges) -> "Hypergraph":
        return cls(n, tuple(_vmask(e) for e in edges))

    @staticmethod
    def edge_tuple(e: int) -> tuple[int, ...]:
        return tuple(v + 1 for v in range(e.bit_length()) if e >> v & 1)

    def edge_list(self) -> list[tuple[int, ...]]:
        return sorted(self.edge_tuple(e) for e in self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def hits(self, x: int) -> bool:
        return all(x & e for e in self.edges)

    def antichain(self) -> "Hypergraph":
        keep = [e for e in self.edges if not any(f != e and f & e == f for f in self.edges)]
        return Hypergraph(self.n, tuple(keep))

    def is_perfect_matching(self) -> bool:
        cover = 0
        for e in self.edges:
            if popcount(e) != 2 or cover & e:
                return False
            cover |= e
        return cover == (1 << self.n) - 1


def _check_edges(F: Hypergraph) -> None:
    if any(e == 0 for e in F.edges):
        raise EmptyEdge("an empty edge cannot be hit")


def tau(F: Hypergraph) -> int:
    """Minimum hitting-set size by branching on the smallest unhit edge."""
    _check_edges(F)
    best = [popcount(_union(F.edges))]

    def go(chosen: int, size: int) -> None:
        if size >= best[0]:
            return
        unhit = [e for e in F.edges if not e & chosen]
        if not unhit:
            best[0] = size
            return
        e = min(unhit, key=popcount)
        for v in range(F.n):
            if e >> v & 1:
                go(chosen | 1 << v, size + 1)

    go(0, 0)
    return best[0]


def _union(edges) -> int:
    m = 0
    for e in edges:
        m |= e
    return m


def count_min_hitting_sets(F: Hypergraph) -> int:
    check_cap("n", F.n, HITTING_CAP)
    t = tau(F)
    count = 0
    for combo in combinations(range(F.n), t):
        x = 0
        for v in combo:
            x |= 1 << v
        count += F.hits(x)
    return count


def vertex_set_of_point(n: int, i: int) -> int:
    """Vertex mask of the input with table index ``i`` (``x_1`` is the top index bit)."""
    return sum(1 << (v - 1) for v in range(1, n + 1) if i >> (n - v) & 1)


def cnf_of_hypergraph(F: Hypergraph) -> CnfFormula:
    return CnfFormula(F.n, tuple(Clause(F.edge_tuple(e)) for e in F.edges))


def hypergraph_of_cnf(phi: CnfFormula) -> Hypergraph:
    if any(lit < 0 for c in phi.clauses for lit in c):
        raise ValueError("only monotone CNFs correspond to hypergraphs")
    return Hypergraph(phi.n, tuple(_vmask(c) for c in phi.clauses))


# -- exhaustive search --------------------------------------------------------------------

@dataclass(frozen=True)
class ExtremalReport:
    n: int
    tau: int
    family: str
    ratio: Fraction | None  # None when no family has this tau
    t: int | None
    witness: Hypergraph | None
    searched: int


def antichains(n: int):
    """All nonempty antichains of nonempty subsets of ``[n]``, as sorted tuples of masks."""
    sets = sorted(range(1, 1 << n), key=lambda s: (popcount(s), s))

    def go(i: int, chosen: list[int]):
        if i == len(sets):
            if chosen:
                yield tuple(chosen)
            return
        s = sets[i]
        if all(c & s != c for c in chosen):  # no chosen subset of s; later sets are never smaller
            chosen.append(s)
            yield from go(i + 1, chosen)
            chosen.pop()
        yield from go(i + 1, chosen)

    yield from go(0, [])


def _better(ratio: Fraction, key, best) -> bool:
    return best is None or ratio > best[0] or (ratio == best[0] and key < best[1])


def _hitting_profile(n: int, edges) -> tuple[int, int] | None:
    by_size = [0] * (n + 1)
    for x in range(1 << n):
        if all(x & e for e in edges):
            by_size[popcount(x)] += 1
    for s, c in enumerate(by_size):
        if c:
            return s, c
    return None


def _extremal_hypergraphs(n: int, target: int) -> ExtremalReport:
    check_cap("n", n, HYPERGRAPH_CAP)
    best = None
    searched = 0
    for fam in antichains(n):
        searched += 1
        prof = _hitting_profile(n, fam)
        if prof is None or prof[0] != target:
            continue
        ratio = Fraction(prof[1], len(fam))
        key = Hypergraph(n, fam).edge_list()
        if _better(ratio, key, best):
            best = (ratio, key, prof[1])
    if best is None:
        return ExtremalReport(n, target, "hypergraphs", None, None, None, searched)
    ratio, key, t = best
    return ExtremalReport(n, target, "hypergraphs", ratio, t, Hypergraph.of(n, *key), searched)


def _graph_edges(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def _extremal_graphs(n: int, target: int) -> ExtremalReport:
    check_cap("n", n, GRAPH_CAP)
    pairs = _graph_edges(n)
    m = len(pairs)
    G = np.arange(1, 1 << m, dtype=np.int64)
    # miss[X]: edges with no endpoint in X
    miss = np.zeros(1 << n, dtype=np.int64)
    for X in range(1 << n):
        mm = 0
        for k, (i, j) in enumerate(pairs):
            if not (X >> i & 1 or X >> j & 1):
                mm |= 1 << k
        miss[X] = mm
    tau_arr = np.full(G.shape, -1, dtype=np.int64)
    t_arr = np.zeros(G.shape, dtype=np.int64)
    for s in range(n + 1):
        cnt = np.zeros(G.shape, dtype=np.int64)
        for X in range(1 << n):
            if popcount(X) == s:
                cnt += (G & miss[X]) == 0
        fresh = (tau_arr < 0) & (cnt > 0)
        tau_arr[fresh] = s
        t_arr[fresh] = cnt[fresh]
    sel = np.nonzero(tau_arr == target)[0]
    searched = int(G.size)
    if sel.size == 0:
        return ExtremalReport(n, target, "graphs", None, None, None, searched)
    sizes = np.array([int(g).bit_count() for g in G[sel]], dtype=np.int64)
    ts = t_arr[sel]
    approx = ts / sizes
    cand = np.nonzero(approx >= approx.max() * (1 - 1e-12))[0]
    best = None
    for c in cand:
        g = int(G[sel[c]])
        edges = [tuple(v + 1 for v in pairs[k]) for k in range(m) if g >> k & 1]
        ratio = Fraction(int(ts[c]), int(sizes[c]))
        if _better(ratio, sorted(edges), best):
            best = (ratio, sorted(edges), int(ts[c]))
    ratio, key, t = best
    return ExtremalReport(n, target, "graphs", ratio, t, Hypergraph.of(n, *key), searched)


def extremal_T(n: int, target_tau: int, family: str = "hypergraphs") -> ExtremalReport:
    if family == "hypergraphs":
        return _extremal_hypergraphs(n, target_tau)
    if family == "graphs":
        return _extremal_graphs(n, target_tau)
    raise ValueError(f"unknown family {family!r}")


def brute_extremal_graphs(n: int, target: int) -> Fraction | None:
    """Reference value by a plain loop over all graphs (slow; for tests)."""
    pairs = _graph_edges(n)
    best = None
    for g in range(1, 1 << len(pairs)):
        F = Hypergraph(n, tuple((1 << i) | (1 << j) for k, (i, j) in enumerate(pairs) if g >> k & 1))
        if tau(F) == target:
            r = Fraction(count_min_hitting_sets(F), len(F))
            best = r if best is None or r > best else best
    return best


# -- majority ----------------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrespondenceReport:
    n: int
    T: Fraction
    binom: int
    cor_plus: Fraction
    L3_plus: int
    identity_ok: bool  # T == C(n, ceil(n/2)) * cor_plus
    lower: Fraction  # C / T
    upper: Fraction  # (1 + n ln 2) C / T, with ln 2 rounded up
    sandwich_ok: bool

    @property
    def ok(self) -> bool:
        return self.identity_ok and self.sandwich_ok


def majority_correspondence(n: int, cache: CostCache | None = None) -> CorrespondenceReport:
    check_cap("n", n, CORRESPONDENCE_CAP)
    h = majority_threshold(n)
    rep = extremal_T(n, h, "hypergraphs")
    f = make_majority(n)
    dual = solve_duality(f, "monotone", exact=True, instance=build_cover_instance(f, "monotone", cache))
    C = comb(n, h)
    T = rep.ratio
    L = dual.exact.size
    lower = Fraction(C) / T
    upper = (1 + n * LN2_UPPER) * C / T
    return CorrespondenceReport(
        n=n,
        T=T,
        binom=C,
        cor_plus=dual.cor,
        L3_plus=L,
        identity_ok=T == C * dual.cor,
        lower=lower,
        upper=upper,
        sandwich_ok=lower <= L <= upper,
    )


@dataclass(frozen=True)
class TuranReport:
    extremal: ExtremalReport
    matching_ratio: Fraction
    matching_attains: bool
    witness_is_matching: bool

    @property
    def ok(self) -> bool:
        return self.matching_attains and self.extremal.ratio == self.matching_ratio


def turan_bottom_fanin2(n: int) -> TuranReport:
    if n % 2:
        raise ValueError("n must be even")
    rep = extremal_T(n, n // 2, "graphs")
    matching = Hypergraph.of(n, *[(2 * i + 1, 2 * i + 2) for i in range(n // 2)])
    mr = Fraction(2 ** (n // 2), n // 2)
    attains = tau(matching) == n // 2 and Fraction(count_min_hitting_sets(matching), len(matching)) == rep.ratio
    return TuranReport(rep, mr, attains, rep.witness is not None and rep.witness.is_perfect_matching())


__all__ = [
    "CorrespondenceReport",
    "EmptyEdge",
    "ExtremalReport",
    "Hypergraph",
    "TuranReport",
    "antichains",
    "brute_extremal_graphs",
    "cnf_of_hypergraph",
    "count_min_hitting_sets",
    "extremal_T",
    "hypergraph_of_cnf",
    "majority_correspondence",
    "tau",
    "turan_bottom_fanin2",
    "vertex_set_of_point",
]
