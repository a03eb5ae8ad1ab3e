"""Exact two-phase simplex over rationals with Bland's rule.

Problems have nonnegative variables and rows ``a.x (<=|>=|=) b``.  The solver
returns a primal vector and the dual vector read off the final basis, in the
sign convention of the problem's own direction:

* ``min c.x``: dual ``max b.y`` with ``A^T y <= c``, ``y_i >= 0`` on ``>=`` rows,
  ``y_i <= 0`` on ``<=`` rows, free on ``=`` rows.
* ``max c.x``: dual ``min b.y`` with ``A^T y >= c``, ``y_i >= 0`` on ``<=`` rows,
  ``y_i <= 0`` on ``>=`` rows, free on ``=`` rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

SENSES = ("<=", ">=", "=")


def _q(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class LpProblem:
    direction: str  # "min" or "max"
    c: tuple[Fraction, ...]
    A: tuple[tuple[Fraction, ...], ...]
    senses: tuple[str, ...]
    b: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.direction not in ("min", "max"):
            raise ValueError(f"direction must be 'min' or 'max', got {self.direction!r}")
        object.__setattr__(self, "c", tuple(_q(v) for v in self.c))
        object.__setattr__(self, "A", tuple(tuple(_q(v) for v in row) for row in self.A))
        object.__setattr__(self, "b", tuple(_q(v) for v in self.b))
        object.__setattr__(self, "senses", tuple(self.senses))
        m, nv = len(self.A), len(self.c)
        if len(self.b) != m or len(self.senses) != m:
            raise ValueError(f"dimension mismatch: {m} rows, {len(self.b)} rhs, {len(self.senses)} senses")
        for i, row in enumerate(self.A):
            if len(row) != nv:
                raise ValueError(f"dimension mismatch: row {i} has {len(row)} entries, expected {nv}")
        for s in self.senses:
            if s not in SENSES:
                raise ValueError(f"bad row sense {s!r}")

    @property
    def num_vars(self) -> int:
        return len(self.c)

    @property
    def num_rows(self) -> int:
        return len(self.A)


@dataclass(frozen=True)
class LpSolution:
    status: str
    x: tuple[Fraction, ...] = ()
    y: tuple[Fraction, ...] = ()
    value: Fraction | None = None
    pivots: int = 0
    trace: tuple[str, ...] = field(default=(), compare=False, repr=False)


def _pivot(T: list[list[Fraction]], r: int, col: int) -> None:
    prow = T[r]
    p = prow[col]
    if p != 1:
        inv = 1 / p
        T[r] = prow = [v * inv for v in prow]
    nz = [(j, v) for j, v in enumerate(prow) if v]
    for i, row in enumerate(T):
        if i != r:
            f = row[col]
            if f:
                for j, v in nz:
                    row[j] -= f * v


def tableau_text(T: list[list[Fraction]], basis: list[int]) -> str:
    lines = []
    for i, row in enumerate(T):
        tag = "obj" if i == len(T) - 1 else f"b{basis[i]}"
        lines.append(tag.ljust(6) + " ".join(str(v).rjust(8) for v in row))
    return "\n".join(lines)


def _simplex(
    T: list[list[Fraction]],
    basis: list[int],
    allowed: Sequence[bool],
    trace: list[str] | None,
) -> tuple[str, int]:
    """Minimize with the objective row ``T[-1]`` holding reduced costs and ``-z`` in the last column."""
    m = len(T) - 1
    last = len(T[0]) - 1
    pivots = 0
    while True:
        obj = T[-1]
        col = next((j for j in range(last) if allowed[j] and obj[j] < 0), None)
        if col is None:
            return OPTIMAL, pivots
        best = None
        for i in range(m):
            a = T[i][col]
            if a > 0:
                ratio = T[i][last] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED, pivots
        r = best[1]
        _pivot(T, r, col)
        basis[r] = col
        pivots += 1
        if trace is not None:
            trace.append(f"pivot {pivots}: enter {col}, leave row {r}\n" + tableau_text(T, basis))


def solve(p: LpProblem, debug: bool = False) -> LpSolution:
    """Exact optimum with a primal/dual pair, or the infeasible/unbounded status."""
    m, nv = p.num_rows, p.num_vars
    cost = [(-v if p.direction == "max" else v) for v in p.c]
    flip = [1] * m
    rows = []
    senses = []
    rhs = []
    for i in range(m):
        row, s, bi = list(p.A[i]), p.senses[i], p.b[i]
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
            s = {"<=": ">=", ">=": "<=", "=": "="}[s]
            flip[i] = -1
        rows.append(row)
        senses.append(s)
        rhs.append(bi)

    slack_rows = [i for i in range(m) if senses[i] != "="]
    ns = len(slack_rows)
    art0 = nv + ns
    width = art0 + m
    T: list[list[Fraction]] = []
    for i in range(m):
        row = rows[i] + [Fraction(0)] * (ns + m) + [rhs[i]]
        if senses[i] != "=":
            row[nv + slack_rows.index(i)] = Fraction(1 if senses[i] == "<=" else -1)
        row[art0 + i] = Fraction(1)
        T.append(row)
    basis = [art0 + i for i in range(m)]
    trace: list[str] | None = [] if debug else None

    # phase 1: minimize the sum of artificials
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            if j < art0 or j == width:
                obj[j] -= T[i][j]
    T.append(obj)
    allowed = [True] * width
    status, piv1 = _simplex(T, basis, allowed, trace)
    assert status == OPTIMAL
    if T[-1][width] != 0:
        return LpSolution(INFEASIBLE, pivots=piv1, trace=tuple(trace or ()))

    # drive artificials at level zero out of the basis where possible
    for r in range(m):
        if basis[r] >= art0:
            col = next((j for j in range(art0) if T[r][j] != 0), None)
            if col is not None:
                _pivot(T, r, col)
                basis[r] = col

    # phase 2
    full_cost = cost + [Fraction(0)] * (ns + m)
    obj = [Fraction(0)] * (width + 1)
    for j in range(width):
        obj[j] = full_cost[j]
    for r in range(m):
        cb = full_cost[basis[r]]
        if cb:
            for j in range(width + 1):
                obj[j] -= cb * T[r][j]
    T[-1] = obj
    allowed = [j < art0 for j in range(width)]
    status, piv2 = _simplex(T, basis, allowed, trace)
    pivots = piv1 + piv2
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, pivots=pivots, trace=tuple(trace or ()))

    x = [Fraction(0)] * width
    for r in range(m):
        x[basis[r]] = T[r][width]
    # y^T = c_B^T B^{-1}; B^{-1} sits in the artificial columns
    y = []
    for i in range(m):
        yi = sum((full_cost[basis[r]] * T[r][art0 + i] for r in range(m)), Fraction(0))
        yi *= flip[i]
        if p.direction == "max":
            yi = -yi
        y.append(yi)
    value = sum((cj * xj for cj, xj in zip(p.c, x[:nv])), Fraction(0))
    sol = LpSolution(OPTIMAL, tuple(x[:nv]), tuple(y), value, pivots, tuple(trace or ()))
    if not verify_certificate(p, sol):
        raise AssertionError("simplex produced an uncertified optimum")
    return sol


def dual_value(p: LpProblem, y: Sequence[Fraction]) -> Fraction:
    return sum((bi * yi for bi, yi in zip(p.b, y)), Fraction(0))


def primal_feasible(p: LpProblem, x: Sequence[Fraction]) -> bool:
    if len(x) != p.num_vars or any(v < 0 for v in x):
        return False
    for row, s, bi in zip(p.A, p.senses, p.b):
        lhs = sum((a * v for a, v in zip(row, x) if a), Fraction(0))
        if (s == "<=" and lhs > bi) or (s == ">=" and lhs < bi) or (s == "=" and lhs != bi):
            return False
    return True


def dual_feasible(p: LpProblem, y: Sequence[Fraction]) -> bool:
    if len(y) != p.num_rows:
        return False
    sign_pos = ">=" if p.direction == "min" else "<="
    for yi, s in zip(y, p.senses):
        if s == sign_pos and yi < 0:
            return False
        if s not in ("=", sign_pos) and yi > 0:
            return False
    for j in range(p.num_vars):
        col = sum((p.A[i][j] * y[i] for i in range(p.num_rows) if p.A[i][j]), Fraction(0))
        if p.direction == "min" and col > p.c[j]:
            return False
        if p.direction == "max" and col < p.c[j]:
            return False
    return True


def verify_certificate(p: LpProblem, s: LpSolution) -> bool:
    """Primal feasible, dual feasible and equal objectives, all exact."""
    if s.status != OPTIMAL:
        return False
    if not primal_feasible(p, s.x) or not dual_feasible(p, s.y):
        return False
    primal = sum((cj * xj for cj, xj in zip(p.c, s.x)), Fraction(0))
    return primal == dual_value(p, s.y) and (s.value is None or s.value == primal)
