import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depth3lab.boolfn import (
    CapExceeded,
    InputPermutation,
    TruthTable,
    coordinate_permutation_generators,
    even_negation_generators,
    make_majority,
    make_parity,
    make_point,
    popcount,
)
from depth3lab.duality import (
    LN2_UPPER,
    ConstantFunction,
    Distribution,
    GroupDoesNotPreserve,
    build_cover_instance,
    ceil_fraction,
    correlation_per_size,
    harmonic,
    solve_duality,
    symmetrize,
    synthesize_exact,
    synthesize_greedy,
    upward_closure,
    verify_hard_distribution,
)
from depth3lab.formula import Clause, CnfFormula, is_one_sided_under


def test_ln2_upper_is_an_upper_bound():
    assert float(LN2_UPPER) > math.log(2)


def test_parity2_instance(cost_cache):
    inst = build_cover_instance(make_parity(2), "general", cost_cache)
    assert inst.universe == (1, 2)
    assert sorted(inst.columns) == [(1, 2), (2, 2), (3, 2)]


def test_or2_monotone_instance(cost_cache):
    f = make_majority(2)
    inst = build_cover_instance(f, "monotone", cost_cache)
    by_cube = {inst.cube_mask(s): c for s, c in inst.columns}
    assert by_cube == {1 << 3: 2, (1 << 1) | (1 << 3): 1, (1 << 2) | (1 << 3): 1, f.bits: 1}


def test_general_column_count(cost_cache):
    f = TruthTable(3, 0b10110100)
    inst = build_cover_instance(f, "general", cost_cache)
    assert len(inst.columns) == 2 ** f.ones_count - 1


def test_constant_and_caps(cost_cache):
    with pytest.raises(ConstantFunction):
        build_cover_instance(TruthTable.constant(2, 1))
    with pytest.raises(ConstantFunction):
        build_cover_instance(TruthTable.constant(2, 0))
    with pytest.raises(CapExceeded):
        build_cover_instance(make_parity(6))
    with pytest.raises(ValueError):
        build_cover_instance(make_parity(2), "monotone")


def test_parity2_duality(cost_cache):
    rep = solve_duality(make_parity(2), cache=cost_cache)
    assert rep.s_star == 2 and rep.cor == Fraction(1, 2)
    assert rep.mu_symmetric == Distribution.uniform(2, [1, 2])
    assert rep.exact.size == 2 and rep.greedy.size == 2
    assert len(rep.exact.disjuncts) == 1
    assert rep.ok


def test_or2_monotone_duality(cost_cache):
    rep = solve_duality(make_majority(2), "monotone", cache=cost_cache)
    assert rep.s_star == 1
    assert rep.exact.disjuncts == (CnfFormula.of(2, [1, 2]),)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_parity_uniform_is_hard(cost_cache, n):
    f = make_parity(n)
    rep = solve_duality(f, cache=cost_cache)
    mu = Distribution.uniform(n, f.ones())
    value, _ = correlation_per_size(f, mu, cache=cost_cache)
    assert value == rep.cor == 1 / rep.s_star
    assert verify_hard_distribution(f, mu, "general", rep, cost_cache)
    assert rep.mu_symmetric == mu


def test_correlation_examples(cost_cache):
    f = make_parity(2)
    value, arg = correlation_per_size(f, Distribution.uniform(2, [1, 2]), cache=cost_cache)
    assert value == Fraction(1, 2) and arg == f.bits
    g = TruthTable(3, 0b11010110)
    for e in g.ones():
        value, _ = correlation_per_size(g, Distribution.point_mass(3, e), cache=cost_cache)
        assert value >= Fraction(1, 3)
    m3 = make_majority(3)
    mid = Distribution.uniform(3, [x for x in range(8) if popcount(x) == 2])
    rep = solve_duality(m3, "monotone", cache=cost_cache)
    assert correlation_per_size(m3, mid, "monotone", cache=cost_cache)[0] == rep.cor


def test_hard_distribution_examples(cost_cache):
    p3 = make_parity(3)
    assert verify_hard_distribution(p3, Distribution.uniform(3, p3.ones()), cache=cost_cache)
    assert not verify_hard_distribution(p3, Distribution.point_mass(3, 4), cache=cost_cache)
    m4 = make_majority(4)
    s2 = Distribution.uniform(4, [x for x in range(16) if popcount(x) == 2])
    assert verify_hard_distribution(m4, s2, "monotone", cache=cost_cache)


def test_synthesis_examples(cost_cache):
    p3 = make_parity(3)
    inst = build_cover_instance(p3, cache=cost_cache)
    rep = solve_duality(p3, instance=inst)
    assert synthesize_greedy(inst).size <= (1 + math.log(4)) * float(rep.s_star)
    pt = make_point(3, 5)
    assert synthesize_exact(build_cover_instance(pt, cache=cost_cache)).size == 3
    p4 = make_parity(4)
    inst4 = build_cover_instance(p4, cache=cost_cache)
    rep4 = solve_duality(p4, instance=inst4)
    L = synthesize_exact(inst4).size
    assert ceil_fraction(rep4.s_star) <= L <= (1 + 4 * LN2_UPPER) * rep4.s_star


def test_single_column_greedy(cost_cache):
    # one column covers U and is the cheapest per element
    f = make_point(2, 3)
    inst = build_cover_instance(f, cache=cost_cache)
    assert synthesize_greedy(inst).size == 2


def test_symmetrize_examples():
    p3 = make_parity(3)
    uni = Distribution.uniform(3, p3.ones())
    gens = even_negation_generators(3)
    assert symmetrize(uni, gens, p3) == uni
    assert symmetrize(Distribution.point_mass(3, 0b100), gens, p3) == uni
    m3 = make_majority(3)
    rng = random.Random(2)
    raw = {x: Fraction(rng.randint(1, 9)) for x in m3.ones()}
    tot = sum(raw.values())
    mu = Distribution.from_mapping(3, {x: w / tot for x, w in raw.items()})
    sym = symmetrize(mu, coordinate_permutation_generators(3), m3).as_dict()
    for x in m3.ones():
        for y in m3.ones():
            if popcount(x) == popcount(y):
                assert sym[x] == sym[y]
    with pytest.raises(GroupDoesNotPreserve):
        symmetrize(Distribution.point_mass(3, 7), [InputPermutation.negate(3, [1])], m3)


def test_greedy_harmonic_implies_log_bound():
    for m in range(1, 40):
        assert float(harmonic(m)) <= 1 + math.log(m) + 1e-12


@pytest.mark.parametrize("bits", [0b0110100110010110, 0b0001011101111111, 0b1000000000000110, 0b0000000111111110])
def test_sandwich_n4(cost_cache, bits):
    f = TruthTable(4, bits)
    rep = solve_duality(f, cache=cost_cache, exact=True)
    assert rep.ok
    L = rep.exact.size
    assert ceil_fraction(rep.s_star) <= L <= (1 + 4 * LN2_UPPER) * rep.s_star


@st.composite
def distributions_on(draw, f):
    pts = f.ones()
    w = [draw(st.integers(0, 5)) for _ in pts]
    if not any(w):
        w[0] = 1
    tot = sum(w)
    return Distribution(f.n, tuple((x, Fraction(v, tot)) for x, v in zip(pts, w)))


F3 = TruthTable(3, 0b11101001)


@settings(max_examples=40)
@given(st.data())
def test_column_dominance(data):
    f = F3
    mu = data.draw(distributions_on(f))
    best, _ = correlation_per_size(f, mu)
    rng = random.Random(data.draw(st.integers(0, 2 ** 32)))
    tried = 0
    while tried < 25:
        m = rng.randint(1, 4)
        clauses = [Clause(v if rng.random() < 0.5 else -v for v in rng.sample(range(1, 4), rng.randint(1, 3))) for _ in range(m)]
        phi = CnfFormula(3, tuple(clauses))
        if not is_one_sided_under(phi, f):
            continue
        tried += 1
        assert mu.prob(phi.table_bits()) / phi.size <= best


@settings(max_examples=30)
@given(st.data())
def test_symmetrize_never_increases_correlation(data):
    f = make_parity(3)
    mu = data.draw(distributions_on(f))
    gens = even_negation_generators(3) + coordinate_permutation_generators(3)
    sym = symmetrize(mu, gens, f)
    assert correlation_per_size(f, sym)[0] <= correlation_per_size(f, mu)[0]
    assert symmetrize(sym, gens, f) == sym


def test_upward_closure():
    assert upward_closure(3, [0b110]) == (1 << 6) | (1 << 7)
    assert upward_closure(2, [0]) == 0b1111
