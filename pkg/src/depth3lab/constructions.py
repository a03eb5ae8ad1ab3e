"""Explicit formula builders: parity CNFs, block approximators, block depth-3
parity, and the sphere-cover universal depth-3 construction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .boolfn import TruthTable, check_cap, iter_ones, make_parity, popcount
from .cnfmin import CostCache, subset_witness
from .duality import ConstantFunction, Distribution, build_cover_instance, correlation_per_size
from .formula import Clause, CnfFormula, DepthThreeFormula, is_one_sided_under

PARITY_CNF_CAP = 20
BLOCK_CAP = 24
SPHERE_D_CAP = 4
LUPANOV_MIN_N = 4
LUPANOV_MAX_N = 12
APPROX_N_CAP = 5


@dataclass(frozen=True)
class ConstructionReport:
    kind: str
    n: int
    formula: CnfFormula | DepthThreeFormula
    size: int
    bound: Fraction
    semantic_ok: bool  # equivalence, or one-sidedness for approximators
    satisfying: int | None = None
    advantage: Fraction | None = None

    @property
    def size_ok(self) -> bool:
        return self.size <= self.bound

    @property
    def ok(self) -> bool:
        return self.semantic_ok and self.size_ok


def block_parity_clauses(variables: Sequence[int], parity: int) -> list[Clause]:
    """Clauses forcing the XOR of ``variables`` to equal ``parity``."""
    out = []
    for bits in product((0, 1), repeat=len(variables)):
        if sum(bits) % 2 != parity:
            out.append(Clause(-v if b else v for v, b in zip(variables, bits)))
    return out


def canonical_parity_cnf(n: int) -> CnfFormula:
    check_cap("n", n, PARITY_CNF_CAP)
    if n < 1:
        raise ValueError("n must be positive")
    return CnfFormula(n, tuple(block_parity_clauses(range(1, n + 1), 1)))


def block_sizes(n: int, k: int) -> list[int]:
    """First ``n mod k`` blocks get ``ceil(n/k)`` variables, the rest ``floor(n/k)``."""
    q, r = divmod(n, k)
    return [q + 1] * r + [q] * (k - r)


def _blocks(n: int, sizes: Sequence[int]) -> list[list[int]]:
    out, start = [], 1
    for s in sizes:
        out.append(list(range(start, start + s)))
        start += s
    assert start == n + 1
    return out


def parity_block_approximator(n: int, k: int) -> CnfFormula:
    """Block 1 must have odd parity and every other block even parity."""
    check_cap("n", n, BLOCK_CAP)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k' <= n, got k'={k}, n={n}")
    clauses = []
    for i, block in enumerate(_blocks(n, block_sizes(n, k))):
        clauses += block_parity_clauses(block, 1 if i == 0 else 0)
    return CnfFormula(n, tuple(clauses))


def parity_block_report(n: int, k: int) -> ConstructionReport:
    phi = parity_block_approximator(n, k)
    sat = popcount(phi.table_bits())
    ceil_block = -(-n // k)
    return ConstructionReport(
        kind="parity-blocks",
        n=n,
        formula=phi,
        size=phi.size,
        bound=Fraction(k * 2 ** (ceil_block - 1)),
        semantic_ok=is_one_sided_under(phi, make_parity(n)) and sat == 2 ** (n - k),
        satisfying=sat,
        advantage=Fraction(sat, 2 ** (n - 1)),
    )


def parity_depth3(n: int, k: int) -> DepthThreeFormula:
    """One CNF per odd-parity pattern of block parities over ``n/k`` blocks of ``k`` variables."""
    check_cap("n", n, BLOCK_CAP)
    if k < 1 or n % k:
        raise ValueError(f"k={k} does not divide n={n}")
    m = n // k
    blocks = _blocks(n, [k] * m)
    per_block = [[block_parity_clauses(b, p) for p in (0, 1)] for b in blocks]
    disjuncts = []
    for z in product((0, 1), repeat=m):
        if sum(z) % 2 == 1:
            clauses = [c for i, zi in enumerate(z) for c in per_block[i][zi]]
            disjuncts.append(CnfFormula(n, tuple(clauses)))
    return DepthThreeFormula(n, tuple(disjuncts))


def parity_depth3_report(n: int, k: int) -> ConstructionReport:
    phi = parity_depth3(n, k)
    return ConstructionReport(
        kind="parity-d3",
        n=n,
        formula=phi,
        size=phi.size,
        bound=Fraction(n, k) * 2 ** (k + n // k - 1),
        semantic_ok=phi.table_bits() == make_parity(n).bits,
    )


# -- sphere cover ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SphereCover:
    d: int
    centers: tuple[int, ...]  # points of {0,1}^D, y_1 as the top bit
    sphere_cnfs: tuple[CnfFormula, ...]  # over variables 1..D, true exactly on the sphere

    @property
    def D(self) -> int:
        return 1 << self.d

    def sphere(self, a: int) -> list[int]:
        return [a ^ (1 << (self.D - i)) for i in range(1, self.D + 1)]


def syndrome(d: int, y: int) -> int:
    """``H y`` where column ``i`` (0-based, counted from y_1) of ``H`` is ``i`` in binary."""
    D = 1 << d
    s = 0
    for i in range(D):
        if (y >> (D - 1 - i)) & 1:
            s ^= i
    return s


def sphere_cnf(D: int, a: int) -> CnfFormula:
    """Some coordinate differs from ``a`` and no two coordinates do."""
    bit = [(a >> (D - i)) & 1 for i in range(1, D + 1)]
    differs = [(-(i + 1) if bit[i] else i + 1) for i in range(D)]
    clauses = [Clause(differs)]
    for i, j in combinations(range(D), 2):
        clauses.append(Clause([-differs[i], -differs[j]]))
    return CnfFormula(D, tuple(clauses))


def sphere_cover(d: int) -> SphereCover:
    check_cap("d", d, SPHERE_D_CAP)
    if d < 1:
        raise ValueError("d must be at least 1")
    D = 1 << d
    centers = tuple(a for a in range(1 << D) if syndrome(d, a) == 0)
    sc = SphereCover(d, centers, tuple(sphere_cnf(D, a) for a in centers))
    seen = 0
    for a, phi in zip(sc.centers, sc.sphere_cnfs):
        shell = 0
        for y in sc.sphere(a):
            shell |= 1 << y
        if shell & seen or phi.table_bits() != shell:
            raise AssertionError(f"sphere around {a} overlaps or its CNF is wrong")
        seen |= shell
    if seen != (1 << (1 << D)) - 1:
        raise AssertionError("spheres do not cover the cube")
    return sc


def critical_clause(g: TruthTable, a: int) -> Clause:
    """The clause that agrees with ``g`` on the sphere around ``a``."""
    D = g.n
    lits = []
    for i in range(1, D + 1):
        if g.bits >> (a ^ (1 << (D - i))) & 1:
            lits.append(-i if (a >> (D - i)) & 1 else i)
    c = Clause(lits)
    for i in range(1, D + 1):
        y = a ^ (1 << (D - i))
        assert c.table(D) >> y & 1 == g.bits >> y & 1
    return c


def lupanov_params(n: int) -> tuple[int, int]:
    if n < LUPANOV_MIN_N:
        raise ValueError(f"the sphere-cover construction needs n >= {LUPANOV_MIN_N}")
    check_cap("n", n, LUPANOV_MAX_N)
    d = (n // 2).bit_length() - 1  # floor(log2(n/2))
    return d, 1 << d


def lupanov_depth3(f: TruthTable, prune: bool = False) -> ConstructionReport:
    """Split x into y = x_1..x_D and z = the rest; one CNF per sphere centre."""
    n = f.n
    d, D = lupanov_params(n)
    sc = sphere_cover(d)
    r = n - D
    # g_w(y) = f(y, w): column w of the table viewed as 2^D x 2^r
    slices = []
    for w in range(1 << r):
        bits = 0
        for y in range(1 << D):
            if f.bits >> ((y << r) | w) & 1:
                bits |= 1 << y
        slices.append(TruthTable(D, bits))
    z_clause = [Clause(-(D + j) if (w >> (r - j)) & 1 else D + j for j in range(1, r + 1)) for w in range(1 << r)]
    disjuncts = []
    for a, phi_a in zip(sc.centers, sc.sphere_cnfs):
        clauses = list(phi_a.clauses)
        for w in range(1 << r):
            clauses.append(Clause(tuple(critical_clause(slices[w], a)) + tuple(z_clause[w])))
        disjuncts.append(CnfFormula(n, tuple(clauses)))
    if prune:
        disjuncts = [c for c in disjuncts if c.table_bits()]
    phi = DepthThreeFormula(n, tuple(disjuncts))
    return ConstructionReport(
        kind="lupanov",
        n=n,
        formula=phi,
        size=phi.size,
        bound=Fraction(2 ** (n + 3), n),
        semantic_ok=phi.table_bits() == f.bits,
    )


# -- universal approximator -----------------------------------------------------------------

@dataclass(frozen=True)
class ApproximatorReport:
    formula: CnfFormula
    epsilon: Fraction
    bound: Fraction  # epsilon * 2^(n+3) / n
    one_sided: bool

    @property
    def ok(self) -> bool:
        return self.one_sided and self.formula.size <= self.bound


def universal_approximator(f: TruthTable, cache: CostCache | None = None) -> ApproximatorReport:
    """Best one-sided CNF per clause under the uniform distribution on ``f^{-1}(1)``."""
    check_cap("n", f.n, APPROX_N_CAP)
    if f.is_constant():
        raise ConstantFunction("constant functions have no approximator")
    inst = build_cover_instance(f, "general", cache)
    ones = list(iter_ones(f.bits))
    mu = Distribution.uniform(f.n, ones)
    _, cube = correlation_per_size(f, mu, "general", inst)
    phi = subset_witness(f.n, cube, "general")
    eps = Fraction(popcount(cube), len(ones))
    return ApproximatorReport(phi, eps, eps * Fraction(2 ** (f.n + 3), f.n), is_one_sided_under(phi, f))


__all__ = [
    "ApproximatorReport",
    "ConstructionReport",
    "SphereCover",
    "block_parity_clauses",
    "block_sizes",
    "canonical_parity_cnf",
    "critical_clause",
    "lupanov_depth3",
    "lupanov_params",
    "parity_block_approximator",
    "parity_block_report",
    "parity_depth3",
    "parity_depth3_report",
    "sphere_cover",
    "sphere_cnf",
    "syndrome",
    "universal_approximator",
]
