import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depth3lab.acceptance import planted_isolated_cnf, random_kcnf
from depth3lab.boolfn import CapExceeded
from depth3lab.coding import (
    MalformedCode,
    NotASolution,
    average_code_length,
    count_bound_check,
    is_prefix_free,
    isolated_solutions,
    kraft_sum,
    one_sided_parity_tradeoff,
    pow2_at_least,
    ppz_decode,
    ppz_encode,
    width_parameters,
    width_reduce_decode,
    width_reduce_encode,
)
from depth3lab.constructions import canonical_parity_cnf, parity_block_approximator
from depth3lab.formula import Clause, CnfFormula

XOR = CnfFormula.of(2, [1, 2], [-1, -2])


def brute_isolated(phi):
    n = phi.n
    sat = [phi.evaluate(i) for i in range(1 << n)]
    return {i for i in range(1 << n) if sat[i] and not any(sat[i ^ (1 << j)] for j in range(n))}


# -- isolated solutions -----------------------------------------------------------------

def test_isolated_examples():
    assert sorted(isolated_solutions(canonical_parity_cnf(3))) == [1, 2, 4, 7]
    assert len(isolated_solutions(CnfFormula(1, ()))) == 0
    assert isolated_solutions(XOR).assignments() == [(0, 1), (1, 0)]
    with pytest.raises(CapExceeded):
        isolated_solutions(CnfFormula(25, ()))


def test_isolated_random_3cnf_n10():
    rng = random.Random(3)
    for _ in range(5):
        phi = random_kcnf(rng, 10, 3, 40)
        count = len(isolated_solutions(phi))
        assert pow2_at_least(count, 10, 3, extra=0)


@st.composite
def small_cnfs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, 10))
    clauses = []
    for _ in range(m):
        vs = draw(st.lists(st.integers(1, n), min_size=1, max_size=n, unique=True))
        clauses.append(Clause(v if draw(st.booleans()) else -v for v in vs))
    return CnfFormula(n, tuple(clauses))


@settings(max_examples=80)
@given(small_cnfs())
def test_isolated_matches_brute_force(phi):
    assert set(isolated_solutions(phi)) == brute_isolated(phi)


# -- plain codec ----------------------------------------------------------------------------

def test_ppz_examples():
    c = ppz_encode((0, 1), XOR, (1, 2))
    assert c.bits == "0" and c.perm == (1, 2)
    assert ppz_decode("0", XOR, (1, 2)) == (0, 1)
    assert ppz_decode(c, XOR) == (0, 1)
    empty = CnfFormula(3, ())
    assert ppz_encode((1, 0, 1), empty, (3, 1, 2)).bits == "110"
    units = CnfFormula.of(3, [1], [2], [3])
    for p in permutations((1, 2, 3)):
        assert ppz_encode((1, 1, 1), units, p).bits == ""
        assert ppz_decode("", units, p) == (1, 1, 1)


def test_ppz_parity3_all_orders():
    phi = canonical_parity_cnf(3)
    T = isolated_solutions(phi).assignments()
    for p in permutations((1, 2, 3)):
        codes = [ppz_encode(x, phi, p).bits for x in T]
        assert is_prefix_free(codes) and kraft_sum(codes) <= 1
        assert [ppz_decode(c, phi, p) for c in codes] == T


def test_ppz_errors():
    with pytest.raises(NotASolution):
        ppz_encode((1, 1), XOR, (1, 2))
    with pytest.raises(ValueError):
        ppz_encode((0, 1), XOR, (1, 1))
    with pytest.raises(MalformedCode):
        ppz_decode("", XOR, (1, 2))
    with pytest.raises(MalformedCode):
        ppz_decode("00", XOR, (1, 2))
    clash = CnfFormula.of(2, [1], [-1, 2], [-2])
    with pytest.raises(MalformedCode):
        ppz_decode("", clash, (1, 2))
    with pytest.raises(ValueError):
        ppz_decode("0", XOR)


def test_only_current_variable_units_are_used():
    # x2 is a unit from the start but is not read until its turn
    phi = CnfFormula.of(2, [2])
    assert ppz_encode((1, 1), phi, (1, 2)).bits == "1"
    assert ppz_encode((0, 1), phi, (2, 1)).bits == "0"


def _audit(phi, encoder, decoder, orders):
    T = isolated_solutions(phi).assignments()
    for p in orders:
        codes = [encoder(x, phi, p).bits for x in T]
        assert is_prefix_free(codes)
        assert kraft_sum(codes) <= 1
        assert [decoder(c, phi, p) for c in codes] == T


@settings(max_examples=60)
@given(small_cnfs(), st.randoms(use_true_random=False))
def test_codecs_prefix_free_and_invertible(phi, rnd):
    orders = [tuple(rnd.sample(range(1, phi.n + 1), phi.n)) for _ in range(3)]
    _audit(phi, ppz_encode, ppz_decode, orders)
    _audit(phi, width_reduce_encode, width_reduce_decode, orders)


def test_prefix_free_all_orders_parity6():
    phi = canonical_parity_cnf(6)
    _audit(phi, ppz_encode, ppz_decode, list(permutations(range(1, 7)))[::7])


def test_kraft_and_prefix_helpers():
    assert kraft_sum(["0", "10", "11"]) == 1
    assert kraft_sum([]) == 0
    assert is_prefix_free(["0", "10", "11"])
    assert not is_prefix_free(["0", "01"])


# -- expected length ------------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(6))
def test_ppz_average_length(seed):
    rng = random.Random(seed)
    k = rng.choice((2, 3))
    n = rng.randint(k + 1, 6)
    while True:
        phi = random_kcnf(rng, n, k, rng.randint(n, 2 ** (k - 1) * n))
        T = isolated_solutions(phi).assignments()
        if T:
            break
    for x in T:
        assert average_code_length(x, phi) <= n - Fraction(n, k)


@pytest.mark.parametrize("seed", range(4))
def test_width_reduced_average_length(seed):
    rng = random.Random(100 + seed)
    phi = planted_isolated_cnf(rng, 6, 2, 4)
    s, k = width_parameters(phi)
    for x in isolated_solutions(phi).assignments():
        avg = average_code_length(x, phi, encoder=width_reduce_encode)
        assert avg <= 6 - Fraction(6, k) + 1


# -- width reduction ------------------------------------------------------------------------

def test_width_parameters():
    assert width_parameters(CnfFormula(3, ())) == (0, 2)
    assert width_parameters(CnfFormula.of(3, [1])) == (0, 2)
    assert width_parameters(XOR) == (1, 3)
    assert width_parameters(canonical_parity_cnf(4)) == (3, 5)


def test_width_reduce_narrow_formula_is_marker_then_ppz():
    phi = canonical_parity_cnf(3)
    for x in isolated_solutions(phi).assignments():
        for p in permutations((1, 2, 3)):
            assert width_reduce_encode(x, phi, p).bits == "0" + ppz_encode(x, phi, p).bits


def test_width_reduce_hand_built():
    # eight clauses: s = 3, k = 5; the width-7 clause is cut to x1..x5, which x falsifies
    wide = Clause([1, 2, 3, 4, 5, 6, 8])
    phi = CnfFormula(8, (wide,) + tuple(Clause([-v]) for v in range(1, 8)))
    x = (0, 0, 0, 0, 0, 0, 0, 1)
    assert len(isolated_solutions(phi)) == 1
    s, k = width_parameters(phi)
    assert (s, k) == (3, 5)
    p = tuple(range(1, 9))
    code = width_reduce_encode(x, phi, p)
    assert code.bits.startswith("1" + format(phi.clauses.index(wide), "03b"))
    assert width_reduce_decode(code, phi) == x


def test_width_reduce_errors():
    phi = CnfFormula.of(2, [1, 2])
    with pytest.raises(NotASolution):
        width_reduce_encode((1, 1), phi, (1, 2))
    with pytest.raises(NotASolution):
        width_reduce_encode((0, 0), phi, (1, 2))
    with pytest.raises(MalformedCode):
        width_reduce_decode("", XOR, (1, 2))
    with pytest.raises(MalformedCode):
        width_reduce_decode("1", XOR, (1, 2))
    with pytest.raises(MalformedCode):
        width_reduce_decode("000", XOR, (1, 2))


@pytest.mark.parametrize("seed", range(8))
def test_width_reduce_roundtrip_planted(seed):
    rng = random.Random(seed)
    phi = planted_isolated_cnf(rng, 10, rng.randint(1, 3), rng.randint(0, 10))
    T = isolated_solutions(phi).assignments()
    assert T
    for _ in range(3):
        p = tuple(rng.sample(range(1, 11), 10))
        codes = [width_reduce_encode(x, phi, p) for x in T]
        assert is_prefix_free(c.bits for c in codes)
        assert [width_reduce_decode(c, phi) for c in codes] == T


# -- counts and tradeoffs ------------------------------------------------------------------

def test_count_bound_parity4():
    r = count_bound_check(canonical_parity_cnf(4))
    assert (r.count, r.s) == (8, 3)
    assert r.exponent == Fraction(21, 5)
    assert abs(r.bound_float - 18.379) < 1e-2
    assert r.ok


@pytest.mark.parametrize("n", range(1, 7))
def test_count_bound_single_clause(n):
    phi = CnfFormula(n, (Clause(range(1, n + 1)),))
    r = count_bound_check(phi)
    assert r.count == (1 if n == 1 else 0)
    assert pow2_at_least(r.count, n, n, extra=0)


def test_count_bound_random_n12():
    rng = random.Random(12)
    for _ in range(10):
        assert count_bound_check(planted_isolated_cnf(rng, 12, rng.randint(1, 3), rng.randint(0, 16))).ok


def test_pow2_at_least():
    assert pow2_at_least(8, 4, 5)  # 8 <= 2^4.2
    assert not pow2_at_least(19, 4, 5)
    assert pow2_at_least(0, 3, 1)
    for count in range(1, 40):
        for n in range(1, 6):
            for K in range(1, 5):
                exact = count ** K <= 2 ** ((n + 1) * K - n) if (n + 1) * K >= n else False
                assert pow2_at_least(count, n, K) == exact


@pytest.mark.parametrize("n", range(2, 8))
def test_tradeoff_canonical(n):
    r = one_sided_parity_tradeoff(n, canonical_parity_cnf(n))
    assert r.advantage == 1 and r.ok and r.ok_integer_form


def test_tradeoff_examples():
    r = one_sided_parity_tradeoff(4, parity_block_approximator(4, 2))
    assert r.advantage == Fraction(1, 2) and r.satisfying == 4 and r.ok
    r = one_sided_parity_tradeoff(2, CnfFormula.of(2, [1], [-1]))
    assert r.advantage == 0 and r.ok
    with pytest.raises(ValueError):
        one_sided_parity_tradeoff(2, CnfFormula.of(2, [1]))
    with pytest.raises(ValueError):
        one_sided_parity_tradeoff(3, XOR)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 13) for k in range(1, 5) if k <= n])
def test_tradeoff_blocks(n, k):
    r = one_sided_parity_tradeoff(n, parity_block_approximator(n, k))
    assert r.ok and r.ok_integer_form
    assert r.satisfying == 2 ** (n - k)
