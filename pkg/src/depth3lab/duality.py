"""Depth-3 size as a set-cover LP over ``f^{-1}(1)``, its dual and hard distributions.

Columns are subsets ``S`` of the universe ``U = f^{-1}(1)`` priced at the
minimum size of a CNF whose satisfying set is exactly ``S``.  Any one-sided CNF
``phi`` is dominated by the column ``phi^{-1}(1)``, and every column is realized
by a CNF, so the LP over these columns has the same optimum as the LP over all
one-sided CNFs.  Inside this module subsets are written in *universe
coordinates*: bit ``k`` stands for the k-th smallest element of ``U``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .boolfn import (
    InputPermutation,
    TruthTable,
    apply_permutation,
    check_cap,
    full_mask,
    popcount,
)
from .cnfmin import CostCache, subset_cost, subset_witness
from .formula import CnfFormula, DepthThreeFormula
from .ratlp import LpProblem, LpSolution, OPTIMAL, solve

GENERAL_UNIVERSE_CAP = 16
EXACT_UNIVERSE_CAP = 12
MONOTONE_N_CAP = 5
LN2_UPPER = Fraction(6932, 10000)
MODES = ("general", "monotone")


class ConstantFunction(ValueError):
    pass


class GroupDoesNotPreserve(ValueError):
    pass


# -- distributions ---------------------------------------------------------------

@dataclass(frozen=True)
class Distribution:
    """A probability distribution on points of ``{0,1}^n`` with exact weights."""

    n: int
    weights: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        w = tuple(sorted((int(x), Fraction(p)) for x, p in self.weights if p != 0))
        if any(p < 0 for _, p in w):
            raise ValueError("negative probability")
        if sum(p for _, p in w) != 1:
            raise ValueError("weights do not sum to 1")
        if len({x for x, _ in w}) != len(w):
            raise ValueError("repeated support point")
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_mapping(cls, n: int, m: Mapping[int, Fraction]) -> "Distribution":
        return cls(n, tuple(m.items()))

    @classmethod
    def uniform(cls, n: int, points: Iterable[int]) -> "Distribution":
        pts = sorted(set(points))
        if not pts:
            raise ValueError("uniform distribution on an empty set")
        return cls(n, tuple((x, Fraction(1, len(pts))) for x in pts))

    @classmethod
    def point_mass(cls, n: int, x: int) -> "Distribution":
        return cls(n, ((x, Fraction(1)),))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.weights)

    @property
    def support(self) -> int:
        m = 0
        for x, _ in self.weights:
            m |= 1 << x
        return m

    def prob(self, mask: int) -> Fraction:
        return sum((p for x, p in self.weights if (mask >> x) & 1), Fraction(0))


# -- cover instances -------------------------------------------------------------------

@dataclass(frozen=True)
class CoverInstance:
    f: TruthTable
    mode: str
    universe: tuple[int, ...]
    columns: tuple[tuple[int, int], ...]  # (subset in universe coordinates, cost)

    @property
    def size(self) -> int:
        return len(self.universe)

    def cube_mask(self, sub: int) -> int:
        """Full-cube mask of a subset given in universe coordinates."""
        m = 0
        k = 0
        while sub:
            if sub & 1:
                m |= 1 << self.universe[k]
            sub >>= 1
            k += 1
        return m

    def universe_mask(self, cube: int) -> int:
        m = 0
        for k, x in enumerate(self.universe):
            if (cube >> x) & 1:
                m |= 1 << k
        return m

    def witness(self, sub: int) -> CnfFormula:
        return subset_witness(self.f.n, self.cube_mask(sub), self.mode)


def _monotone_functions(n: int) -> list[int]:
    """Tables of all monotone functions on n variables (x_1 is the top index bit)."""
    if n == 0:
        return [0, 1]
    lower = _monotone_functions(n - 1)
    half = 1 << (n - 1)
    out = []
    for lo in lower:
        for hi in lower:
            if lo & ~hi == 0:
                out.append(lo | (hi << half))
    return out


def _subsets(universe_size: int) -> Iterator[int]:
    return iter(range(1, 1 << universe_size))


def build_cover_instance(
    f: TruthTable, mode: str = "general", cache: CostCache | None = None
) -> CoverInstance:
    """One column per nonempty (upward-closed, in monotone mode) subset of ``f^{-1}(1)``."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if f.is_constant():
        raise ConstantFunction("constant functions have no meaningful cover instance")
    universe = tuple(f.ones())
    if mode == "general":
        check_cap("|f^-1(1)|", len(universe), GENERAL_UNIVERSE_CAP)
        inst = CoverInstance(f, mode, universe, ())
        cols = tuple((sub, subset_cost(f.n, inst.cube_mask(sub), mode, cache)) for sub in _subsets(len(universe)))
    else:
        if not f.is_monotone():
            raise ValueError("monotone mode requires a monotone function")
        check_cap("n", f.n, MONOTONE_N_CAP)
        inst = CoverInstance(f, mode, universe, ())
        cols = []
        for g in _monotone_functions(f.n):
            if g and not g & ~f.bits:
                cols.append((inst.universe_mask(g), subset_cost(f.n, g, mode, cache)))
        cols = tuple(sorted(cols))
    return CoverInstance(f, mode, universe, cols)


def nondominated_columns(inst: CoverInstance) -> list[tuple[int, int]]:
    """Columns not beaten by a strict superset column of no larger cost."""
    u = inst.size
    inf = math.inf
    best = [inf] * (1 << u)
    for sub, c in inst.columns:
        best[sub] = c
    # best_sup[M] = min cost over columns containing M (including M itself)
    best_sup = best[:]
    for b in range(u):
        bit = 1 << b
        for m in range((1 << u) - 1, -1, -1):
            if not m & bit:
                v = best_sup[m | bit]
                if v < best_sup[m]:
                    best_sup[m] = v
    out = []
    for sub, c in inst.columns:
        strict = min((best_sup[sub | (1 << b)] for b in range(u) if not sub >> b & 1), default=inf)
        if c < strict:
            out.append((sub, c))
    return out


def cover_lp(inst: CoverInstance, columns: Sequence[tuple[int, int]]) -> LpProblem:
    rows = []
    for k in range(inst.size):
        rows.append([1 if (sub >> k) & 1 else 0 for sub, _ in columns])
    return LpProblem("min", [c for _, c in columns], rows, [">="] * inst.size, [1] * inst.size)


# -- correlation per size ----------------------------------------------------------------

def correlation_per_size(
    f: TruthTable,
    mu: Distribution,
    mode: str = "general",
    instance: CoverInstance | None = None,
    cache: CostCache | None = None,
) -> tuple[Fraction, int]:
    """``max_S mu(S) / cost(S)`` over the canonical columns; returns value and argmax (cube mask)."""
    if mu.n != f.n:
        raise ValueError("distribution dimension mismatch")
    if mu.support & ~f.bits:
        raise ValueError("distribution support is not inside f^{-1}(1)")
    inst = instance if instance is not None else build_cover_instance(f, mode, cache)
    weights = [Fraction(0)] * inst.size
    for x, p in mu.weights:
        weights[inst.universe.index(x)] = p
    sums = _subset_sums(weights)
    best = None
    best_key = (0, 0)
    for sub, c in inst.columns:
        v = sums[sub] / c
        if best is None or v > best or (v == best and (c, sub) < best_key):
            best, best_key = v, (c, sub)
    assert best is not None
    return best, inst.cube_mask(best_key[1])


def _subset_sums(weights: Sequence[Fraction]) -> list[Fraction]:
    sums = [Fraction(0)] * (1 << len(weights))
    for m in range(1, len(sums)):
        low = m & -m
        sums[m] = sums[m ^ low] + weights[low.bit_length() - 1]
    return sums


# -- synthesis -----------------------------------------------------------------------------

def harmonic(m: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, m + 1)), Fraction(0))


def synthesize_greedy(inst: CoverInstance) -> DepthThreeFormula:
    """Greedy cover by cost per newly covered element; ties: lower cost, then lower mask."""
    left = (1 << inst.size) - 1
    chosen = []
    while left:
        best = None
        for sub, c in inst.columns:
            gain = popcount(sub & left)
            if not gain:
                continue
            if best is None:
                best = (sub, c, gain)
                continue
            _, bc, bg = best
            lhs, rhs = c * bg, bc * gain
            if lhs < rhs or (lhs == rhs and (c, sub) < (bc, best[0])):
                best = (sub, c, gain)
        assert best is not None
        chosen.append(best[0])
        left &= ~best[0]
    return _assemble(inst, chosen)


def _assemble(inst: CoverInstance, subs: Sequence[int]) -> DepthThreeFormula:
    phi = DepthThreeFormula(inst.f.n, tuple(inst.witness(s) for s in subs))
    if phi.table_bits() != inst.f.bits:
        raise AssertionError("synthesized formula does not compute f")
    return phi


def synthesize_exact(inst: CoverInstance) -> DepthThreeFormula:
    """Minimum-cost integral cover, i.e. a minimum depth-3 formula for ``f``."""
    check_cap("|f^-1(1)|", inst.size, EXACT_UNIVERSE_CAP)
    cols = nondominated_columns(inst)
    by_elem: list[list[tuple[int, int]]] = [[] for _ in range(inst.size)]
    for sub, c in sorted(cols, key=lambda t: (t[1], t[0])):
        for k in range(inst.size):
            if (sub >> k) & 1:
                by_elem[k].append((sub, c))
    memo: dict[int, tuple[int, int]] = {0: (0, 0)}

    def best(left: int) -> int:
        hit = memo.get(left)
        if hit is not None:
            return hit[0]
        k = (left & -left).bit_length() - 1
        top = math.inf
        arg = 0
        for sub, c in by_elem[k]:
            if c >= top:
                break
            v = c + best(left & ~sub)
            if v < top:
                top, arg = v, sub
        memo[left] = (top, arg)
        return top

    left = (1 << inst.size) - 1
    best(left)
    chosen = []
    while left:
        sub = memo[left][1]
        chosen.append(sub)
        left &= ~sub
    return _assemble(inst, chosen)


# -- symmetrization -------------------------------------------------------------------------

def orbits(n: int, generators: Sequence[InputPermutation]) -> list[list[int]]:
    seen = [False] * (1 << n)
    out = []
    for start in range(1 << n):
        if seen[start]:
            continue
        seen[start] = True
        orbit = [start]
        q = deque([start])
        while q:
            x = q.popleft()
            for g in generators:
                y = g.apply_index(x)
                if not seen[y]:
                    seen[y] = True
                    orbit.append(y)
                    q.append(y)
        out.append(sorted(orbit))
    return out


def symmetrize(
    mu_star: Distribution, generators: Sequence[InputPermutation], f: TruthTable
) -> Distribution:
    """Average ``mu_star`` over the group generated by ``generators``."""
    for g in generators:
        if g.n != f.n:
            raise ValueError("generator dimension mismatch")
        if apply_permutation(f, g) != f:
            raise GroupDoesNotPreserve(f"{g} does not preserve f")
    if mu_star.support & ~f.bits:
        raise ValueError("distribution support is not inside f^{-1}(1)")
    w = mu_star.as_dict()
    out: dict[int, Fraction] = {}
    for orb in orbits(f.n, generators):
        mass = sum((w.get(x, Fraction(0)) for x in orb), Fraction(0))
        if mass:
            share = mass / len(orb)
            for x in orb:
                out[x] = share
    return Distribution.from_mapping(f.n, out)


def automorphism_generators(f: TruthTable, mode: str = "general") -> list[InputPermutation]:
    """Transpositions (and, in general mode, one- and two-coordinate negations) preserving ``f``."""
    n = f.n
    cands = [InputPermutation.swap(n, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    if mode == "general":
        cands += [InputPermutation.negate(n, [i]) for i in range(1, n + 1)]
        cands += [InputPermutation.negate(n, [i, j]) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return [g for g in cands if apply_permutation(f, g) == f]


# -- the duality pipeline ------------------------------------------------------------------

def ceil_fraction(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True)
class DualityReport:
    f: TruthTable
    mode: str
    universe: tuple[int, ...]
    num_columns: int
    num_lp_columns: int
    s_star: Fraction
    cor: Fraction
    dual: tuple[Fraction, ...]
    mu: Distribution  # normalized dual
    mu_symmetric: Distribution  # mu averaged over the automorphisms found
    cor_mu: Fraction
    greedy: DepthThreeFormula
    exact: DepthThreeFormula | None
    lp: LpSolution = field(repr=False)

    @property
    def greedy_bound(self) -> Fraction:
        return harmonic(len(self.universe)) * self.s_star

    @property
    def upper_factor(self) -> Fraction:
        return 1 + self.f.n * LN2_UPPER

    def checks(self) -> dict[str, dict]:
        out = {
            "cor_equals_inverse_s_star": {"lhs": self.cor, "rhs": 1 / self.s_star, "ok": self.cor * self.s_star == 1},
            "dual_distribution_is_hard": {"lhs": self.cor_mu, "rhs": self.cor, "ok": self.cor_mu == self.cor},
            "greedy_within_harmonic_bound": {
                "lhs": self.greedy.size,
                "rhs": self.greedy_bound,
                "ok": self.greedy.size <= self.greedy_bound,
            },
        }
        if self.exact is not None:
            L = self.exact.size
            out["sandwich_lower"] = {"lhs": ceil_fraction(self.s_star), "rhs": L, "ok": ceil_fraction(self.s_star) <= L}
            out["sandwich_upper"] = {
                "lhs": L,
                "rhs": self.upper_factor * self.s_star,
                "ok": L <= self.upper_factor * self.s_star,
            }
        return out

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks().values())


def solve_duality(
    f: TruthTable,
    mode: str = "general",
    exact: bool | None = None,
    cache: CostCache | None = None,
    instance: CoverInstance | None = None,
) -> DualityReport:
    """LP optimum ``s*``, ``cor = 1/s*``, and the hard distribution from the dual."""
    inst = instance if instance is not None else build_cover_instance(f, mode, cache)
    cols = nondominated_columns(inst)
    lp = cover_lp(inst, cols)
    sol = solve(lp)
    if sol.status != OPTIMAL:
        raise AssertionError(f"cover LP not optimal: {sol.status}")
    s_star = sol.value
    assert s_star is not None and s_star > 0
    y = sol.y
    v = sum(y, Fraction(0))
    mu = Distribution(f.n, tuple((x, yi / v) for x, yi in zip(inst.universe, y)))
    _check_dual_all_columns(inst, y)
    cor = 1 / s_star
    mu_sym = symmetrize(mu, automorphism_generators(f, mode), f)
    cor_mu, _ = correlation_per_size(f, mu, mode, inst)
    if exact is None:
        exact = inst.size <= EXACT_UNIVERSE_CAP
    return DualityReport(
        f=f,
        mode=mode,
        universe=inst.universe,
        num_columns=len(inst.columns),
        num_lp_columns=len(cols),
        s_star=s_star,
        cor=cor,
        dual=tuple(y),
        mu=mu,
        mu_symmetric=mu_sym,
        cor_mu=cor_mu,
        greedy=synthesize_greedy(inst),
        exact=synthesize_exact(inst) if exact else None,
        lp=sol,
    )


def _check_dual_all_columns(inst: CoverInstance, y: Sequence[Fraction]) -> None:
    sums = _subset_sums(y)
    for sub, c in inst.columns:
        if sums[sub] > c:
            raise AssertionError("dual solution violates a dominated column")


def verify_hard_distribution(
    f: TruthTable,
    mu: Distribution,
    mode: str = "general",
    report: DualityReport | None = None,
    cache: CostCache | None = None,
) -> bool:
    """True iff ``mu`` attains ``cor(f)`` exactly (``cor_mu(f) = cor(f)``)."""
    inst = build_cover_instance(f, mode, cache)
    rep = report if report is not None else solve_duality(f, mode, exact=False, instance=inst)
    value, _ = correlation_per_size(f, mu, mode, inst)
    return value == rep.cor


def upward_closure(n: int, points: Iterable[int]) -> int:
    m = 0
    full = (1 << n) - 1
    for p in points:
        comp = full & ~p
        sub = comp
        while True:
            m |= 1 << (p | sub)
            if sub == 0:
                break
            sub = (sub - 1) & comp
    return m


__all__ = [
    "ConstantFunction",
    "CoverInstance",
    "Distribution",
    "DualityReport",
    "GroupDoesNotPreserve",
    "LN2_UPPER",
    "automorphism_generators",
    "build_cover_instance",
    "ceil_fraction",
    "correlation_per_size",
    "full_mask",
    "harmonic",
    "nondominated_columns",
    "orbits",
    "solve_duality",
    "symmetrize",
    "synthesize_exact",
    "synthesize_greedy",
    "upward_closure",
    "verify_hard_distribution",
]
