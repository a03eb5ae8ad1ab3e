import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depth3lab.boolfn import CapExceeded, TruthTable, make_majority, make_parity, make_point, popcount
from depth3lab.cnfmin import min_cnf_size
from depth3lab.constructions import (
    block_parity_clauses,
    block_sizes,
    canonical_parity_cnf,
    critical_clause,
    lupanov_depth3,
    lupanov_params,
    parity_block_approximator,
    parity_block_report,
    parity_depth3,
    parity_depth3_report,
    sphere_cnf,
    sphere_cover,
    syndrome,
    universal_approximator,
)
from depth3lab.duality import ConstantFunction
from depth3lab.formula import Clause, CnfFormula, is_one_sided_under, point_conjunction


def odd(i):
    return popcount(i) % 2


# -- parity -----------------------------------------------------------------------------------

def test_canonical_parity_cnf_examples():
    assert canonical_parity_cnf(2) == CnfFormula.of(2, [1, 2], [-1, -2])
    for n in range(1, 9):
        phi = canonical_parity_cnf(n)
        assert phi.size == 2 ** (n - 1)
        assert phi.table_bits() == make_parity(n).bits
    with pytest.raises(CapExceeded):
        canonical_parity_cnf(21)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_canonical_parity_is_optimal(n):
    assert min_cnf_size(make_parity(n))[0] == 2 ** (n - 1)


def test_block_parity_clauses():
    for p in (0, 1):
        phi = CnfFormula(3, tuple(block_parity_clauses([1, 2, 3], p)))
        assert all(phi.evaluate(i) == (odd(i) == p) for i in range(8))


def test_block_sizes():
    assert block_sizes(9, 3) == [3, 3, 3]
    assert block_sizes(10, 3) == [4, 3, 3]
    assert block_sizes(5, 5) == [1] * 5
    for n in range(1, 20):
        for k in range(1, n + 1):
            b = block_sizes(n, k)
            assert sum(b) == n and max(b) == -(-n // k)


def test_block_approximator_examples():
    r = parity_block_report(4, 2)
    assert r.size == 4 and r.advantage == Fraction(1, 2) and r.ok
    odd_points = 8
    assert Fraction(odd_points - r.satisfying, 16) == Fraction(1, 4)
    assert parity_block_approximator(5, 1) == canonical_parity_cnf(5)
    r = parity_block_report(9, 3)
    assert r.size <= 12 and r.satisfying == 2 ** 6 and r.ok
    with pytest.raises(ValueError):
        parity_block_approximator(3, 4)
    with pytest.raises(ValueError):
        parity_block_approximator(3, 0)


@pytest.mark.parametrize("n", range(1, 17))
def test_block_approximator_counts(n):
    for k in range(1, min(n, 4) + 1):
        r = parity_block_report(n, k)
        assert r.ok, (n, k)
        assert r.satisfying == 2 ** (n - k)
        assert r.size <= k * 2 ** (-(-n // k) - 1)


def test_block_approximator_accepts_exactly_the_block_pattern():
    phi = parity_block_approximator(6, 3)
    for i in range(64):
        blocks = [(i >> 4) & 3, (i >> 2) & 3, i & 3]
        want = odd(blocks[0]) == 1 and odd(blocks[1]) == 0 and odd(blocks[2]) == 0
        assert phi.evaluate(i) == want
    assert is_one_sided_under(phi, make_parity(6))


def test_parity_depth3_examples():
    phi = parity_depth3(4, 2)
    assert len(phi.disjuncts) == 2 and all(d.size == 4 for d in phi.disjuncts)
    assert phi.size == 8 and phi.table_bits() == make_parity(4).bits
    assert parity_depth3(5, 5).disjuncts == (canonical_parity_cnf(5),)
    r = parity_depth3_report(9, 3)
    assert r.ok and r.size <= 3 * 2 ** 5
    with pytest.raises(ValueError):
        parity_depth3(5, 2)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 13) for k in range(1, n + 1) if n % k == 0])
def test_parity_depth3_all(n, k):
    r = parity_depth3_report(n, k)
    assert r.semantic_ok and r.size_ok


# -- sphere cover --------------------------------------------------------------------------

def test_sphere_cover_d1():
    sc = sphere_cover(1)
    assert sc.D == 2 and sc.centers == (0b00, 0b10)
    assert sorted(sc.sphere(0b00)) == [0b01, 0b10]
    assert sorted(sc.sphere(0b10)) == [0b00, 0b11]


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_sphere_cover_sizes(d):
    sc = sphere_cover(d)
    D = sc.D
    assert len(sc.centers) * D == 2 ** D
    assert all(phi.size == 1 + D * (D - 1) // 2 <= D * D for phi in sc.sphere_cnfs)
    assert all(syndrome(d, a) == 0 for a in sc.centers)


def test_sphere_cover_caps():
    with pytest.raises(CapExceeded):
        sphere_cover(5)
    with pytest.raises(ValueError):
        sphere_cover(0)


def test_syndrome_is_linear():
    rng = random.Random(0)
    for _ in range(200):
        a, b = rng.getrandbits(8), rng.getrandbits(8)
        assert syndrome(3, a ^ b) == syndrome(3, a) ^ syndrome(3, b)
    # flipping coordinate i changes the syndrome by i (0-based from y_1)
    for i in range(8):
        assert syndrome(3, 1 << (7 - i)) == i


def test_sphere_cnf_table():
    for a in range(16):
        shell = sum(1 << (a ^ (1 << j)) for j in range(4))
        assert sphere_cnf(4, a).table_bits() == shell


def test_critical_clause_examples():
    assert critical_clause(TruthTable.constant(2, 0), 0) == Clause()
    assert critical_clause(TruthTable.constant(2, 1), 0b10) == Clause([-1, 2])
    assert critical_clause(make_parity(2), 0b00) == Clause([1, 2])


@settings(max_examples=60)
@given(st.integers(0, 2 ** 16 - 1), st.integers(0, 15))
def test_critical_clause_agrees_on_sphere(bits, a):
    g = TruthTable(4, bits)
    c = critical_clause(g, a)
    for j in range(4):
        y = a ^ (1 << j)
        assert c.table(4) >> y & 1 == g.bits >> y & 1


# -- Lupanov ---------------------------------------------------------------------------------

def test_lupanov_params():
    assert lupanov_params(4) == (1, 2)
    assert lupanov_params(7) == (1, 2)
    assert lupanov_params(8) == (2, 4)
    assert lupanov_params(12) == (2, 4)
    with pytest.raises(ValueError):
        lupanov_params(3)


def test_lupanov_examples():
    r = lupanov_depth3(make_parity(4))
    assert r.ok and r.size <= 16 and r.bound == 32
    zero = lupanov_depth3(TruthTable.constant(5, 0))
    assert zero.ok and all(d.table_bits() == 0 for d in zero.formula.disjuncts)
    pruned = lupanov_depth3(TruthTable.constant(5, 0), prune=True)
    assert pruned.formula.disjuncts == () and pruned.ok


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_lupanov_random(n):
    rng = random.Random(n)
    d, D = lupanov_params(n)
    for _ in range(10 if n < 8 else 2):
        r = lupanov_depth3(TruthTable(n, rng.getrandbits(1 << n)))
        assert r.ok
        assert r.size == len(sphere_cover(d).centers) * (1 + D * (D - 1) // 2 + 2 ** (n - D))
        assert all(c.size <= D * D + 2 ** (n - D) for c in r.formula.disjuncts)


# -- universal approximator -------------------------------------------------------------------

def test_approximator_point_function(cost_cache):
    f = make_point(4, 0b1010)
    r = universal_approximator(f, cost_cache)
    assert r.epsilon == 1 and r.formula == point_conjunction(4, 0b1010)
    assert r.ok and r.formula.size == 4 <= r.bound


def test_approximator_parity4(cost_cache):
    r = universal_approximator(make_parity(4), cost_cache)
    assert r.ok and r.one_sided and r.formula.size <= 32 * r.epsilon


def test_approximator_small_random(cost_cache):
    rng = random.Random(4)
    for _ in range(4):
        bits = 0
        while popcount(bits) in (0, 16):
            bits = rng.getrandbits(16)
        f = TruthTable(4, bits)
        r = universal_approximator(f, cost_cache)
        assert r.ok
        assert r.epsilon == Fraction(popcount(r.formula.table_bits()), f.ones_count)


def test_approximator_errors():
    with pytest.raises(ConstantFunction):
        universal_approximator(TruthTable.constant(3, 1))
    with pytest.raises(CapExceeded):
        universal_approximator(make_majority(6))
