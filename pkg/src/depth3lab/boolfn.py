"""Truth tables, named function families, slices and input permutations.

Bit convention: the table index ``i`` encodes the input ``x`` with ``x_1`` as
the most significant bit, so for ``n = 3`` index 4 is ``x = 100``.  A table is
stored as a Python int whose bit ``i`` is ``f(x)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

MAX_N = 24


class CapExceeded(ValueError):
    """Raised when an exponential operation is asked for more than its cap."""

    def __init__(self, what: str, value: int, cap: int):
        super().__init__(f"{what}={value} exceeds cap {cap}")
        self.what = what
        self.value = value
        self.cap = cap


def check_cap(what: str, value: int, cap: int) -> None:
    if value > cap:
        raise CapExceeded(what, value, cap)


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    check_cap("n", n, MAX_N)


# -- index helpers ---------------------------------------------------------

def var_bit(n: int, j: int) -> int:
    """Bit position inside an index that holds variable ``x_j`` (1-based)."""
    return n - j


def index_of(bits: Sequence[int]) -> int:
    """Index of an input given as a sequence ``(x_1, ..., x_n)``."""
    i = 0
    for b in bits:
        i = (i << 1) | (1 if b else 0)
    return i


def bits_of(i: int, n: int) -> tuple[int, ...]:
    return tuple((i >> (n - j)) & 1 for j in range(1, n + 1))


def parse_bits(s: str) -> tuple[int, ...]:
    if any(c not in "01" for c in s):
        raise ValueError(f"not a bit string: {s!r}")
    return tuple(int(c) for c in s)


def format_bits(i: int, n: int) -> str:
    return format(i, f"0{n}b") if n else ""


@lru_cache(maxsize=None)
def var_mask(n: int, j: int) -> int:
    """Table (as int) of the projection ``x_j`` on ``n`` variables."""
    w = 1 << var_bit(n, j)
    block = ((1 << w) - 1) << w  # w zeros followed by w ones, read from bit 0
    period = 2 * w
    m = 0
    for start in range(0, 1 << n, period):
        m |= block << start
    return m


@lru_cache(maxsize=None)
def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


def iter_ones(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(x: int) -> int:
    return x.bit_count()


# -- truth tables ------------------------------------------------------------

@dataclass(frozen=True)
class TruthTable:
    n: int
    bits: int

    def __post_init__(self) -> None:
        _check_n(self.n)
        if self.bits < 0 or self.bits >> (1 << self.n):
            raise ValueError("table has more than 2^n entries")

    @classmethod
    def from_function(cls, n: int, fn) -> "TruthTable":
        _check_n(n)
        bits = 0
        for i in range(1 << n):
            if fn(bits_of(i, n)):
                bits |= 1 << i
        return cls(n, bits)

    @classmethod
    def from_ones(cls, n: int, ones: Iterable[int]) -> "TruthTable":
        bits = 0
        for i in ones:
            bits |= 1 << i
        return cls(n, bits)

    @classmethod
    def constant(cls, n: int, value: int) -> "TruthTable":
        return cls(n, full_mask(n) if value else 0)

    def __call__(self, x: Sequence[int] | int) -> int:
        i = x if isinstance(x, int) else index_of(x)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return 1 << self.n

    def __invert__(self) -> "TruthTable":
        return TruthTable(self.n, self.bits ^ full_mask(self.n))

    def __and__(self, other: "TruthTable") -> "TruthTable":
        _same_n(self, other)
        return TruthTable(self.n, self.bits & other.bits)

    def __or__(self, other: "TruthTable") -> "TruthTable":
        _same_n(self, other)
        return TruthTable(self.n, self.bits | other.bits)

    @property
    def ones_count(self) -> int:
        return popcount(self.bits)

    def ones(self) -> list[int]:
        return list(iter_ones(self.bits))

    def zeros(self) -> list[int]:
        return list(iter_ones(self.bits ^ full_mask(self.n)))

    def is_constant(self) -> bool:
        return self.bits == 0 or self.bits == full_mask(self.n)

    def is_monotone(self) -> bool:
        # f monotone iff f|x_j=0 <= f|x_j=1 for every j
        for j in range(1, self.n + 1):
            m = var_mask(self.n, j)
            w = 1 << var_bit(self.n, j)
            lo = self.bits & ~m & full_mask(self.n)
            hi = (self.bits & m) >> w
            if lo & ~hi:
                return False
        return True

    def to_string(self) -> str:
        return "".join(str(self(i)) for i in range(1 << self.n))

    def __repr__(self) -> str:
        body = self.to_string() if self.n <= 6 else f"0x{self.bits:x}"
        return f"TruthTable(n={self.n}, {body})"


def _same_n(a: TruthTable, b: TruthTable) -> None:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")


def make_parity(n: int) -> TruthTable:
    _check_n(n)
    return TruthTable(n, sum(1 << i for i in range(1 << n) if popcount(i) & 1))


def majority_threshold(n: int) -> int:
    # "at least n/2" read literally
    return (n + 1) // 2


def make_majority(n: int) -> TruthTable:
    _check_n(n)
    t = majority_threshold(n)
    return TruthTable(n, sum(1 << i for i in range(1 << n) if popcount(i) >= t))


def make_threshold(n: int, t: int) -> TruthTable:
    _check_n(n)
    return TruthTable(n, sum(1 << i for i in range(1 << n) if popcount(i) >= t))


def make_point(n: int, x: Sequence[int] | int) -> TruthTable:
    i = x if isinstance(x, int) else index_of(x)
    return TruthTable(n, 1 << i)


FAMILIES = {
    "parity": make_parity,
    "majority": make_majority,
    "and": lambda n: TruthTable(n, 1 << ((1 << n) - 1)),
    "or": lambda n: TruthTable(n, full_mask(n) ^ 1),
}


def make_family(name: str, n: int) -> TruthTable:
    try:
        return FAMILIES[name](n)
    except KeyError:
        raise ValueError(f"unknown function family {name!r}; known: {sorted(FAMILIES)}") from None


# -- slices ------------------------------------------------------------------

@dataclass(frozen=True)
class Slice:
    n: int
    k: int

    def points(self) -> list[int]:
        return [i for i in range(1 << self.n) if popcount(i) == self.k]

    def mask(self) -> int:
        return sum(1 << i for i in self.points())

    def __len__(self) -> int:
        return math.comb(self.n, self.k)


def slice_fraction(f: TruthTable, k: int) -> Fraction:
    """Exact ``Pr_{x in S^n_k}[f(x) = 1]``."""
    s = Slice(f.n, k)
    return Fraction(popcount(f.bits & s.mask()), len(s))


# -- input permutations ------------------------------------------------------

@dataclass(frozen=True)
class InputPermutation:
    """``x -> y`` with ``y_{sigma[j]} = x_j XOR neg[j]`` (all 0-based internally).

    ``sigma`` is a tuple permutation of ``range(n)``; ``neg`` a tuple of bits.
    Applying to ``x`` first XORs the negation mask and then moves coordinate
    ``j`` to position ``sigma[j]``.
    """

    sigma: tuple[int, ...]
    neg: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ValueError(f"not a permutation: {self.sigma}")
        if len(self.neg) != len(self.sigma) or any(b not in (0, 1) for b in self.neg):
            raise ValueError("negation mask must be n bits")

    @property
    def n(self) -> int:
        return len(self.sigma)

    @classmethod
    def identity(cls, n: int) -> "InputPermutation":
        return cls(tuple(range(n)), (0,) * n)

    @classmethod
    def swap(cls, n: int, i: int, j: int) -> "InputPermutation":
        """Transposition of variables ``x_i`` and ``x_j`` (1-based)."""
        s = list(range(n))
        s[i - 1], s[j - 1] = s[j - 1], s[i - 1]
        return cls(tuple(s), (0,) * n)

    @classmethod
    def negate(cls, n: int, variables: Iterable[int]) -> "InputPermutation":
        """Negation of the given 1-based variables."""
        neg = [0] * n
        for v in variables:
            neg[v - 1] ^= 1
        return cls(tuple(range(n)), tuple(neg))

    def apply_bits(self, x: Sequence[int]) -> tuple[int, ...]:
        y = [0] * self.n
        for j, b in enumerate(x):
            y[self.sigma[j]] = b ^ self.neg[j]
        return tuple(y)

    def apply_index(self, i: int) -> int:
        return index_of(self.apply_bits(bits_of(i, self.n)))

    def compose(self, other: "InputPermutation") -> "InputPermutation":
        """``self . other``: apply ``other`` first."""
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        # other: y_{o[j]} = x_j ^ on[j];  self: z_{s[k]} = y_k ^ sn[k]
        sigma = tuple(self.sigma[other.sigma[j]] for j in range(self.n))
        neg = tuple(other.neg[j] ^ self.neg[other.sigma[j]] for j in range(self.n))
        return InputPermutation(sigma, neg)

    def inverse(self) -> "InputPermutation":
        inv = [0] * self.n
        neg = [0] * self.n
        for j, k in enumerate(self.sigma):
            inv[k] = j
            neg[k] = self.neg[j]
        return InputPermutation(tuple(inv), tuple(neg))


def apply_permutation(f: TruthTable, pi: InputPermutation) -> TruthTable:
    """The table of ``x -> f(pi(x))``."""
    if pi.n != f.n:
        raise ValueError(f"dimension mismatch: f has n={f.n}, permutation has n={pi.n}")
    bits = 0
    for i in range(1 << f.n):
        if (f.bits >> pi.apply_index(i)) & 1:
            bits |= 1 << i
    return TruthTable(f.n, bits)


def coordinate_permutation_generators(n: int) -> list[InputPermutation]:
    if n == 1:
        return [InputPermutation.identity(1)]
    gens = [InputPermutation.swap(n, 1, 2)]
    if n > 2:
        gens.append(InputPermutation(tuple(list(range(1, n)) + [0]), (0,) * n))
    return gens


def even_negation_generators(n: int) -> list[InputPermutation]:
    """Generators of the group of maps negating an even number of coordinates."""
    if n == 1:
        return [InputPermutation.identity(1)]
    return [InputPermutation.negate(n, (1, j)) for j in range(2, n + 1)]


# -- restriction -------------------------------------------------------------

def restrict(f: TruthTable, assignment: Mapping[int, int]) -> TruthTable:
    """Restrict 1-based variables; the result lives on the remaining variables in order.

    Restricting every variable yields a constant on a single dummy variable,
    since tables need ``n >= 1``.
    """
    for v in assignment:
        if not 1 <= v <= f.n:
            raise ValueError(f"variable {v} out of range for n={f.n}")
    free = [j for j in range(1, f.n + 1) if j not in assignment]
    base = 0
    for v, b in assignment.items():
        if b:
            base |= 1 << var_bit(f.n, v)
    m = len(free)
    if m == 0:
        return TruthTable.constant(1, f(base))
    bits = 0
    for i in range(1 << m):
        idx = base
        for pos, j in enumerate(free, start=1):
            if (i >> (m - pos)) & 1:
                idx |= 1 << var_bit(f.n, j)
        if (f.bits >> idx) & 1:
            bits |= 1 << i
    return TruthTable(m, bits)


# -- text format -------------------------------------------------------------

def dumps_table(f: TruthTable) -> str:
    return f"n={f.n}\n{f.to_string()}\n"


def loads_table(text: str) -> TruthTable:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("truth table must start with a line 'n=<k>'")
    n = int(lines[0][2:])
    _check_n(n)
    body = "".join(lines[1:])
    size = 1 << n
    if body.startswith(("0x", "0X")):
        body = body[2:]
        value = int(body, 16)
        if value >> size:
            raise ValueError("hex table longer than 2^n bits")
        s = format(value, f"0{size}b")
    elif len(body) == size and set(body) <= {"0", "1"}:
        s = body
    else:
        try:
            value = int(body, 16)
        except ValueError:
            raise ValueError(f"table body is neither {size} bits nor hex") from None
        if value >> size:
            raise ValueError("hex table longer than 2^n bits")
        s = format(value, f"0{size}b")
    bits = 0
    for i, c in enumerate(s):
        if c == "1":
            bits |= 1 << i
    return TruthTable(n, bits)
