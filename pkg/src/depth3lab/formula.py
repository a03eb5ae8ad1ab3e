"""Clauses, CNF formulas and OR-of-CNF (depth-3) formulas.

Literals are DIMACS integers: ``+v`` is ``x_v`` and ``-v`` is ``not x_v``
(variables are 1-based).  Clauses are stored canonically, sorted by variable,
so clause equality and the lexicographic clause order used by the coding
module are well defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .boolfn import (
    TruthTable,
    check_cap,
    full_mask,
    index_of,
    var_bit,
    var_mask,
)

TABLE_CAP = 24


def literal_key(lit: int) -> tuple[int, bool]:
    return (abs(lit), lit < 0)


class Clause(tuple):
    """An OR of literals, canonical: sorted by variable, no repeats, no tautology."""

    def __new__(cls, lits: Iterable[int] = ()):
        uniq = set()
        for lit in lits:
            if not isinstance(lit, int) or lit == 0:
                raise ValueError(f"bad literal {lit!r}")
            uniq.add(lit)
        for lit in uniq:
            if -lit in uniq:
                raise ValueError(f"tautological clause: contains both {abs(lit)} and -{abs(lit)}")
        return super().__new__(cls, sorted(uniq, key=literal_key))

    @property
    def width(self) -> int:
        return len(self)

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(abs(lit) for lit in self)

    @property
    def key(self) -> tuple[tuple[int, bool], ...]:
        return tuple(literal_key(lit) for lit in self)

    def truncate(self, k: int) -> "Clause":
        return self if len(self) <= k else Clause(self[:k])

    def evaluate(self, x: Sequence[int]) -> int:
        for lit in self:
            if x[abs(lit) - 1] == (lit > 0):
                return 1
        return 0

    def table(self, n: int) -> int:
        m = 0
        for lit in self:
            v = abs(lit)
            lm = var_mask(n, v)
            m |= lm if lit > 0 else lm ^ full_mask(n)
        return m

    def __repr__(self) -> str:
        if not self:
            return "()"
        return "(" + " | ".join(("x" if lit > 0 else "~x") + str(abs(lit)) for lit in self) + ")"


def _max_var(clauses: Iterable[Clause]) -> int:
    return max((abs(lit) for c in clauses for lit in c), default=0)


@dataclass(frozen=True)
class CnfFormula:
    """AND of clauses.  Size is the clause count; the empty CNF is constant 1."""

    n: int
    clauses: tuple[Clause, ...] = field(default=())

    def __post_init__(self) -> None:
        canon = tuple(sorted({Clause(c) for c in self.clauses}, key=lambda c: c.key))
        object.__setattr__(self, "clauses", canon)
        if _max_var(canon) > self.n:
            raise ValueError(f"clause mentions variable {_max_var(canon)} > n={self.n}")

    @classmethod
    def of(cls, n: int, *clauses: Iterable[int]) -> "CnfFormula":
        return cls(n, tuple(Clause(c) for c in clauses))

    @property
    def size(self) -> int:
        return len(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    @property
    def width(self) -> int:
        return max((c.width for c in self.clauses), default=0)

    def evaluate(self, x: Sequence[int] | int) -> int:
        if isinstance(x, int):
            x = _bits(x, self.n)
        if len(x) != self.n:
            raise ValueError(f"assignment has {len(x)} bits, formula has n={self.n}")
        return int(all(c.evaluate(x) for c in self.clauses))

    def table_bits(self) -> int:
        check_cap("n", self.n, TABLE_CAP)
        m = full_mask(self.n)
        for c in self.clauses:
            m &= c.table(self.n)
            if not m:
                break
        return m

    def __repr__(self) -> str:
        return f"CnfFormula(n={self.n}, " + (" & ".join(map(repr, self.clauses)) or "1") + ")"


@dataclass(frozen=True)
class DepthThreeFormula:
    """OR of CNF formulas; size is the sum of the disjuncts' sizes."""

    n: int
    disjuncts: tuple[CnfFormula, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "disjuncts", tuple(self.disjuncts))
        for d in self.disjuncts:
            if d.n != self.n:
                raise ValueError("disjunct dimension mismatch")

    @property
    def size(self) -> int:
        return sum(d.size for d in self.disjuncts)

    def evaluate(self, x: Sequence[int] | int) -> int:
        if isinstance(x, int):
            x = _bits(x, self.n)
        return int(any(d.evaluate(x) for d in self.disjuncts))

    def table_bits(self) -> int:
        m = 0
        for d in self.disjuncts:
            m |= d.table_bits()
        return m


def _bits(i: int, n: int) -> tuple[int, ...]:
    return tuple((i >> (n - j)) & 1 for j in range(1, n + 1))


def evaluate(phi: CnfFormula | DepthThreeFormula, x: Sequence[int] | int) -> int:
    return phi.evaluate(x)


def to_truth_table(phi: CnfFormula | DepthThreeFormula) -> TruthTable:
    check_cap("n", phi.n, TABLE_CAP)
    return TruthTable(phi.n, phi.table_bits())


def is_one_sided_under(phi: CnfFormula, f: TruthTable) -> bool:
    """True iff every satisfying assignment of ``phi`` is a 1-input of ``f``."""
    if phi.n != f.n:
        raise ValueError(f"dimension mismatch: formula n={phi.n}, function n={f.n}")
    return phi.table_bits() & ~f.bits == 0


def restrict_formula(phi: CnfFormula, assignment: Mapping[int, int]) -> CnfFormula:
    """Plug in values for some variables; numbering of the other variables is kept."""
    for v in assignment:
        if not 1 <= v <= phi.n:
            raise ValueError(f"variable {v} out of range for n={phi.n}")
    out = []
    for c in phi.clauses:
        lits = []
        satisfied = False
        for lit in c:
            v = abs(lit)
            if v in assignment:
                if bool(assignment[v]) == (lit > 0):
                    satisfied = True
                    break
            else:
                lits.append(lit)
        if not satisfied:
            out.append(Clause(lits))
    return CnfFormula(phi.n, tuple(out))


def is_monotone_cnf(phi: CnfFormula) -> bool:
    return all(lit > 0 for c in phi.clauses for lit in c)


def clause_excluding(n: int, point: int, variables: Sequence[int] | None = None) -> Clause:
    """The clause false exactly on ``point`` (restricted to ``variables`` if given)."""
    vs = range(1, n + 1) if variables is None else variables
    return Clause(-v if (point >> var_bit(n, v)) & 1 else v for v in vs)


def point_conjunction(n: int, point: int) -> CnfFormula:
    """Unit clauses pinning every variable to ``point``."""
    return CnfFormula(n, tuple(Clause([v if (point >> var_bit(n, v)) & 1 else -v]) for v in range(1, n + 1)))


# -- text formats ------------------------------------------------------------

def dumps_cnf(phi: CnfFormula) -> str:
    lines = [f"p cnf {phi.n} {phi.size}"]
    lines += [" ".join(map(str, c)) + (" 0" if c else "0") for c in phi.clauses]
    return "\n".join(lines) + "\n"


def _parse_cnf_lines(lines: list[str]) -> CnfFormula:
    header = None
    clauses: list[Clause] = []
    pending: list[int] = []
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad header {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise ValueError("clause before 'p cnf' header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(Clause(pending))
                pending = []
            else:
                pending.append(lit)
    if header is None:
        raise ValueError("missing 'p cnf' header")
    if pending:
        raise ValueError("last clause is not 0-terminated")
    n, m = header
    if len(clauses) != m:
        raise ValueError(f"header declares {m} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(clauses))


def loads_cnf(text: str) -> CnfFormula:
    return _parse_cnf_lines(text.splitlines())


def dumps_d3f(phi: DepthThreeFormula) -> str:
    out = [f"p d3f {phi.n} {len(phi.disjuncts)}"]
    for i, d in enumerate(phi.disjuncts):
        if i:
            out.append("%")
        out.append(dumps_cnf(d).rstrip("\n"))
    return "\n".join(out) + "\n"


def loads_d3f(text: str) -> DepthThreeFormula:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("c")]
    if not lines:
        raise ValueError("empty depth-3 file")
    parts = lines[0].split()
    if len(parts) != 4 or parts[:2] != ["p", "d3f"]:
        raise ValueError(f"bad header {lines[0]!r}")
    n, k = int(parts[2]), int(parts[3])
    blocks: list[list[str]] = [[]]
    for ln in lines[1:]:
        if ln.strip() == "%":
            blocks.append([])
        else:
            blocks[-1].append(ln)
    if k == 0:
        if any(blocks[0]):
            raise ValueError("header declares 0 disjuncts")
        return DepthThreeFormula(n, ())
    if len(blocks) != k:
        raise ValueError(f"header declares {k} disjuncts, found {len(blocks)}")
    ds = tuple(_parse_cnf_lines(b) for b in blocks)
    if any(d.n != n for d in ds):
        raise ValueError("disjunct dimension disagrees with header")
    return DepthThreeFormula(n, ds)


__all__ = [
    "Clause",
    "CnfFormula",
    "DepthThreeFormula",
    "clause_excluding",
    "dumps_cnf",
    "dumps_d3f",
    "evaluate",
    "index_of",
    "is_monotone_cnf",
    "is_one_sided_under",
    "literal_key",
    "loads_cnf",
    "loads_d3f",
    "point_conjunction",
    "restrict_formula",
    "to_truth_table",
]
