"""Prefix-free encodings of isolated solutions of CNF formulas.

``ppz_encode`` walks the variables in a given order.  When the formula,
restricted by the variables fixed so far, has a unit clause on the current
variable, the value is implied and nothing is written; otherwise the bit of
the assignment is written.  ``width_reduce_encode`` cuts clauses to their
first ``k = s + 2`` literals; if the assignment falsifies a cut clause it
writes ``1``, the clause index in ``s`` bits, fixes that clause's variables and
recurses, else it writes ``0`` followed by the plain code for the cut formula.
Both codecs take one global variable order; deeper levels use the order
induced on the variables still free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping, Sequence

from mpmath import iv

from .boolfn import check_cap, full_mask, iter_ones, make_parity, popcount, var_bit, var_mask
from .formula import Clause, CnfFormula, is_one_sided_under, restrict_formula

ISOLATED_CAP = 24
AUDIT_CAP = 20


class MalformedCode(ValueError):
    pass


class NotASolution(ValueError):
    pass


@dataclass(frozen=True)
class CodeWord:
    bits: str
    perm: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class IsolatedSolutionSet:
    n: int
    mask: int  # table of the isolated solutions

    def __len__(self) -> int:
        return popcount(self.mask)

    def __iter__(self):
        return iter_ones(self.mask)

    def assignments(self) -> list[tuple[int, ...]]:
        return [tuple((i >> (self.n - j)) & 1 for j in range(1, self.n + 1)) for i in self]


# -- isolated solutions ------------------------------------------------------------

def isolated_mask(n: int, sat: int) -> int:
    """Points of ``sat`` none of whose Hamming neighbours lie in ``sat``."""
    full = full_mask(n)
    nb = 0
    for j in range(1, n + 1):
        w = 1 << var_bit(n, j)
        m = var_mask(n, j)
        nb |= ((sat & m) >> w) | ((sat & ~m & full) << w)
    return sat & ~nb


def isolated_solutions(phi: CnfFormula) -> IsolatedSolutionSet:
    check_cap("n", phi.n, ISOLATED_CAP)
    return IsolatedSolutionSet(phi.n, isolated_mask(phi.n, phi.table_bits()))


# -- the plain codec -------------------------------------------------------------------

def _check_perm(perm: Sequence[int], variables: Iterable[int]) -> tuple[int, ...]:
    perm = tuple(perm)
    if sorted(perm) != sorted(variables):
        raise ValueError(f"{perm} is not an ordering of the variables {sorted(variables)}")
    return perm


class _Walker:
    """Incremental unit-clause bookkeeping shared by encoder and decoder."""

    def __init__(self, clauses: Sequence[Clause]):
        self.clauses = clauses
        self.occ: dict[int, list[tuple[int, bool]]] = {}
        for ci, c in enumerate(clauses):
            for lit in c:
                self.occ.setdefault(abs(lit), []).append((ci, lit > 0))
        self.width = [len(c) for c in clauses]
        self.false_count = [0] * len(clauses)
        self.satisfied = [False] * len(clauses)

    def implied(self, v: int) -> int | None:
        """Value forced on unassigned ``v`` by a unit clause of the restricted formula, if any."""
        forced = None
        for ci, positive in self.occ.get(v, ()):
            if not self.satisfied[ci] and self.false_count[ci] == self.width[ci] - 1:
                want = 1 if positive else 0
                if forced is not None and forced != want:
                    raise MalformedCode(f"variable {v} is forced both ways")
                forced = want
        return forced

    def assign(self, v: int, value: int) -> bool:
        """Fix ``v``; returns False if some clause becomes falsified."""
        ok = True
        for ci, positive in self.occ.get(v, ()):
            if positive == bool(value):
                self.satisfied[ci] = True
            else:
                self.false_count[ci] += 1
                if not self.satisfied[ci] and self.false_count[ci] == self.width[ci]:
                    ok = False
        return ok


def _ppz_encode_bits(x: Sequence[int], clauses: Sequence[Clause], order: Sequence[int]) -> str:
    w = _Walker(clauses)
    out = []
    for v in order:
        f = w.implied(v)
        if f is None:
            out.append("1" if x[v - 1] else "0")
        else:
            assert f == x[v - 1]
        w.assign(v, x[v - 1])
    return "".join(out)


def _ppz_decode_bits(code: str, pos: int, clauses: Sequence[Clause], order: Sequence[int]) -> tuple[dict[int, int], int]:
    if any(len(c) == 0 for c in clauses):
        raise MalformedCode("formula has an empty clause")
    w = _Walker(clauses)
    val: dict[int, int] = {}
    for v in order:
        f = w.implied(v)
        if f is None:
            if pos >= len(code):
                raise MalformedCode("code exhausted before all variables were decoded")
            f = 1 if code[pos] == "1" else 0
            pos += 1
        val[v] = f
        if not w.assign(v, f):
            raise MalformedCode(f"assigning x{v}={f} falsifies a clause")
    return val, pos


def _require_solution(x: Sequence[int], phi: CnfFormula) -> tuple[int, ...]:
    x = tuple(int(b) for b in x)
    if len(x) != phi.n:
        raise ValueError(f"assignment has {len(x)} bits, formula has n={phi.n}")
    if not phi.evaluate(x):
        raise NotASolution("assignment does not satisfy the formula")
    return x


def ppz_encode(x: Sequence[int], phi: CnfFormula, perm: Sequence[int]) -> CodeWord:
    x = _require_solution(x, phi)
    perm = _check_perm(perm, range(1, phi.n + 1))
    return CodeWord(_ppz_encode_bits(x, phi.clauses, perm), perm)


def ppz_decode(code: str | CodeWord, phi: CnfFormula, perm: Sequence[int] | None = None) -> tuple[int, ...]:
    if isinstance(code, CodeWord):
        perm = code.perm if perm is None else perm
        code = code.bits
    if perm is None:
        raise ValueError("a variable order is required")
    perm = _check_perm(perm, range(1, phi.n + 1))
    val, used = _ppz_decode_bits(code, 0, phi.clauses, perm)
    if used != len(code):
        raise MalformedCode(f"{len(code) - used} trailing bits after decoding")
    return tuple(val[v] for v in range(1, phi.n + 1))


# -- width reduction -------------------------------------------------------------------

def width_parameters(phi: CnfFormula) -> tuple[int, int]:
    """``(s, k)`` with ``s = ceil(log2 max(|phi|, 1))`` and ``k = s + 2``."""
    s = max(phi.size - 1, 0).bit_length()
    return s, s + 2


def _truncated(clauses: Sequence[Clause], k: int) -> list[Clause]:
    return [c.truncate(k) for c in clauses]


def width_reduce_encode(x: Sequence[int], phi: CnfFormula, perm: Sequence[int]) -> CodeWord:
    x = _require_solution(x, phi)
    perm = _check_perm(perm, range(1, phi.n + 1))
    if not isolated_solutions(phi).mask >> _index(x) & 1:
        raise NotASolution("assignment is not an isolated solution")
    s, k = width_parameters(phi)
    out = []
    current = phi
    fixed: dict[int, int] = {}
    while True:
        cut = _truncated(current.clauses, k)
        falsified = [i for i, c in enumerate(cut) if not c.evaluate(x)]
        if not falsified:
            order = [v for v in perm if v not in fixed]
            out.append("0" + _ppz_encode_bits(x, cut, order))
            break
        i = min(falsified, key=lambda i: (cut[i].key, i))
        assert cut[i].width == k
        out.append("1" + (format(i, f"0{s}b") if s else ""))
        assign = {abs(lit): x[abs(lit) - 1] for lit in cut[i]}
        fixed.update(assign)
        current = restrict_formula(current, assign)
    return CodeWord("".join(out), perm)


def _width_reduce_decode_bits(code: str, phi: CnfFormula, perm: Sequence[int]) -> tuple[tuple[int, ...], int]:
    s, k = width_parameters(phi)
    pos = 0
    current = phi
    fixed: dict[int, int] = {}
    while True:
        if pos >= len(code):
            raise MalformedCode("code exhausted while reading a marker")
        marker = code[pos]
        pos += 1
        cut = _truncated(current.clauses, k)
        if marker == "0":
            order = [v for v in perm if v not in fixed]
            val, pos = _ppz_decode_bits(code, pos, cut, order)
            val.update(fixed)
            return tuple(val[v] for v in range(1, phi.n + 1)), pos
        if pos + s > len(code):
            raise MalformedCode("code exhausted while reading a clause index")
        i = int(code[pos : pos + s], 2) if s else 0
        pos += s
        if i >= len(cut) or cut[i].width != k:
            raise MalformedCode(f"clause index {i} does not name a cut clause")
        assign = {abs(lit): 0 if lit > 0 else 1 for lit in cut[i]}
        fixed.update(assign)
        current = restrict_formula(current, assign)


def width_reduce_decode(code: str | CodeWord, phi: CnfFormula, perm: Sequence[int] | None = None) -> tuple[int, ...]:
    if isinstance(code, CodeWord):
        perm = code.perm if perm is None else perm
        code = code.bits
    if perm is None:
        raise ValueError("a variable order is required")
    perm = _check_perm(perm, range(1, phi.n + 1))
    x, used = _width_reduce_decode_bits(code, phi, perm)
    if used != len(code):
        raise MalformedCode(f"{len(code) - used} trailing bits after decoding")
    return x


def _index(x: Sequence[int]) -> int:
    i = 0
    for b in x:
        i = (i << 1) | b
    return i


# -- audits ------------------------------------------------------------------------------

def is_prefix_free(codes: Iterable[str]) -> bool:
    ordered = sorted(codes)
    return all(not b.startswith(a) for a, b in zip(ordered, ordered[1:]))


def kraft_sum(codes: Iterable[str]) -> Fraction:
    return sum((Fraction(1, 2 ** len(c)) for c in codes), Fraction(0))


def all_orders(n: int) -> Iterable[tuple[int, ...]]:
    return permutations(range(1, n + 1))


def average_code_length(
    x: Sequence[int], phi: CnfFormula, encoder=ppz_encode, orders: Iterable[Sequence[int]] | None = None
) -> Fraction:
    """Exact mean code length over the given orders (default: all ``n!``)."""
    orders = list(all_orders(phi.n) if orders is None else orders)
    total = sum(len(encoder(x, phi, p)) for p in orders)
    return Fraction(total, len(orders))


def pow2_at_least(count: int, n: int, K: int, extra: int = 1) -> bool:
    """``count <= 2^(n - n/K + extra)`` decided with integers: ``count^K <= 2^((n + extra) K - n)``."""
    if count == 0:
        return True
    e = (n + extra) * K - n
    if e < 0:
        return False
    return count**K <= 1 << e


@dataclass(frozen=True)
class CountBoundReport:
    n: int
    size: int
    s: int
    count: int
    exponent: Fraction  # the bound is 2^exponent
    ok: bool

    @property
    def bound_float(self) -> float:
        return 2.0 ** float(self.exponent)


def count_bound_check(phi: CnfFormula) -> CountBoundReport:
    """Isolated-solution count against ``2^(n - n/(s+2) + 1)``."""
    check_cap("n", phi.n, AUDIT_CAP)
    s, k = width_parameters(phi)
    count = len(isolated_solutions(phi))
    n = phi.n
    return CountBoundReport(n, phi.size, s, count, Fraction(n) - Fraction(n, k) + 1, pow2_at_least(count, n, k))


def _certified_le(lhs_log2_factors, rhs: int) -> bool:
    """Decide ``prod(log2 q) >= rhs`` for positive rationals with interval arithmetic."""
    for dps in (30, 60, 120, 240):
        iv.dps = dps
        prod = iv.mpf(1)
        for q in lhs_log2_factors:
            prod *= iv.log(iv.mpf(q.numerator) / iv.mpf(q.denominator)) / iv.log(iv.mpf(2))
        if prod.a >= rhs:
            return True
        if prod.b < rhs:
            return False
    raise ArithmeticError("could not certify the comparison")


@dataclass(frozen=True)
class TradeoffReport:
    n: int
    size: int
    satisfying: int
    advantage: Fraction
    ok: bool  # advantage <= 2^(2 - n/(log2|phi| + 3))
    ok_integer_form: bool  # advantage <= 2^(2 - n/(ceil(log2|phi|) + 2)), implies ok


def one_sided_parity_tradeoff(n: int, phi: CnfFormula) -> TradeoffReport:
    """Acceptance probability on odd inputs of a one-sided parity approximator vs its size."""
    if phi.n != n:
        raise ValueError("dimension mismatch")
    if not is_one_sided_under(phi, make_parity(n)):
        raise ValueError("formula accepts an even-parity input")
    sat = popcount(phi.table_bits())
    adv = Fraction(sat, 2 ** (n - 1))
    size = phi.size
    assert size >= 1  # the empty CNF accepts even inputs
    if sat == 0:
        return TradeoffReport(n, size, 0, adv, True, True)
    # advantage <= 2^(2 - n/(L+3))  <=>  log2(8|phi|) * log2(4/adv) >= n
    ok = _certified_le([Fraction(8 * size), 4 / adv], n)
    K = max(size - 1, 0).bit_length() + 2
    # adv^K <= 2^(2K - n)  <=>  sat^K <= 2^((n+1)K - n)
    ok_int = pow2_at_least(sat, n, K, extra=1)
    return TradeoffReport(n, size, sat, adv, ok, ok_int)


__all__ = [
    "CodeWord",
    "CountBoundReport",
    "IsolatedSolutionSet",
    "MalformedCode",
    "NotASolution",
    "TradeoffReport",
    "average_code_length",
    "count_bound_check",
    "is_prefix_free",
    "isolated_solutions",
    "kraft_sum",
    "one_sided_parity_tradeoff",
    "ppz_decode",
    "ppz_encode",
    "width_parameters",
    "width_reduce_decode",
    "width_reduce_encode",
]
