import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depth3lab.boolfn import CapExceeded, TruthTable, popcount
from depth3lab.cnfmin import min_monotone_cnf
from depth3lab.extremal import (
    EmptyEdge,
    Hypergraph,
    antichains,
    brute_extremal_graphs,
    cnf_of_hypergraph,
    count_min_hitting_sets,
    extremal_T,
    hypergraph_of_cnf,
    majority_correspondence,
    tau,
    turan_bottom_fanin2,
    vertex_set_of_point,
)
from depth3lab.formula import CnfFormula


def brute_tau(F):
    for size in range(F.n + 1):
        hits = [x for x in range(1 << F.n) if popcount(x) == size and F.hits(x)]
        if hits:
            return size, len(hits)
    return None


@st.composite
def hypergraphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    edges = draw(st.lists(st.integers(1, (1 << n) - 1), min_size=1, max_size=8))
    return Hypergraph(n, tuple(edges))


# -- hitting sets ------------------------------------------------------------------------------

def test_tau_examples():
    assert tau(Hypergraph.of(2, (1, 2))) == 1
    matching = Hypergraph.of(4, (1, 2), (3, 4))
    assert tau(matching) == 2 and count_min_hitting_sets(matching) == 4
    assert tau(Hypergraph.of(4, *combinations(range(1, 5), 2))) == 3
    assert count_min_hitting_sets(Hypergraph.of(2, (1, 2))) == 2
    assert count_min_hitting_sets(Hypergraph.of(2, (1,), (2,))) == 1
    with pytest.raises(EmptyEdge):
        tau(Hypergraph(2, (0,)))


@settings(max_examples=120)
@given(hypergraphs())
def test_tau_matches_brute_force(F):
    t, c = brute_tau(F)
    assert tau(F) == t
    assert count_min_hitting_sets(F) == c


def test_hypergraph_validation():
    with pytest.raises(ValueError):
        Hypergraph.of(2, (1, 3))
    F = Hypergraph.of(3, (1, 2), (1, 2, 3), (3,))
    assert F.antichain().edge_list() == [(1, 2), (3,)]
    assert Hypergraph.of(4, (1, 2), (3, 4)).is_perfect_matching()
    assert not Hypergraph.of(4, (1, 2), (2, 3)).is_perfect_matching()


# -- the hypergraph / monotone CNF dictionary --------------------------------------------------

@settings(max_examples=80)
@given(hypergraphs(max_n=5))
def test_cnf_dictionary(F):
    phi = cnf_of_hypergraph(F)
    assert hypergraph_of_cnf(phi) == F
    table = phi.table_bits()
    for i in range(1 << F.n):
        assert (table >> i & 1) == F.hits(vertex_set_of_point(F.n, i))


def test_vertex_set_of_point():
    # x_1 is the top index bit, vertex 1 is bit 0
    assert vertex_set_of_point(3, 0b100) == 0b001
    assert vertex_set_of_point(3, 0b011) == 0b110
    with pytest.raises(ValueError):
        hypergraph_of_cnf(CnfFormula.of(2, [-1]))


def test_min_monotone_cnf_is_antichain():
    # a minimum monotone CNF of an upward-closed set is the antichain of its minimal transversal family
    rng = random.Random(1)
    for _ in range(20):
        F = Hypergraph(4, tuple(rng.randint(1, 15) for _ in range(rng.randint(1, 5)))).antichain()
        f = TruthTable(4, cnf_of_hypergraph(F).table_bits())
        size, phi = min_monotone_cnf(f)
        assert size == len(F)
        assert hypergraph_of_cnf(phi) == F


# -- exhaustive search ------------------------------------------------------------------------

def test_antichain_counts():
    # Dedekind numbers minus the two constant functions
    assert [sum(1 for _ in antichains(n)) for n in range(1, 6)] == [1, 4, 18, 166, 7579]


def test_extremal_examples():
    r = extremal_T(2, 1)
    assert r.ratio == 2 and r.witness.edge_list() == [(1, 2)]
    r = extremal_T(4, 2, "graphs")
    assert r.ratio == 2 and r.witness.is_perfect_matching()
    assert extremal_T(3, 2).ratio == 1
    assert extremal_T(4, 2).ratio == 2
    assert extremal_T(5, 3).ratio == Fraction(3, 2)
    assert extremal_T(3, 4).ratio is None
    with pytest.raises(CapExceeded):
        extremal_T(6, 2)
    with pytest.raises(CapExceeded):
        extremal_T(8, 2, "graphs")
    with pytest.raises(ValueError):
        extremal_T(3, 1, "digraphs")


def _brute_hypergraph_T(n, target):
    best = None
    for fam in antichains(n):
        F = Hypergraph(n, fam)
        if tau(F) == target:
            r = Fraction(count_min_hitting_sets(F), len(F))
            best = r if best is None or r > best else best
    return best


@pytest.mark.parametrize("n,target", [(n, t) for n in range(1, 5) for t in range(1, n + 1)])
def test_hypergraph_T_matches_plain_loop(n, target):
    assert extremal_T(n, target).ratio == _brute_hypergraph_T(n, target)


@pytest.mark.parametrize("n,target", [(n, t) for n in range(2, 6) for t in range(1, n)])
def test_graph_T_matches_plain_loop(n, target):
    r = extremal_T(n, target, "graphs")
    assert r.ratio == brute_extremal_graphs(n, target)
    if r.witness is not None:
        assert Fraction(count_min_hitting_sets(r.witness), len(r.witness)) == r.ratio
        assert tau(r.witness) == target


def test_antichain_restriction_is_lossless():
    # adding a superset of an edge leaves t unchanged and grows |F|, so the max is over antichains
    rng = random.Random(5)
    for _ in range(50):
        F = Hypergraph(4, tuple(rng.randint(1, 15) for _ in range(rng.randint(1, 4)))).antichain()
        e = rng.choice(F.edges)
        sup = e | (1 << rng.randrange(4))
        if sup == e or sup in F.edges:
            continue
        G = Hypergraph(4, F.edges + (sup,))
        assert tau(G) == tau(F) and count_min_hitting_sets(G) == count_min_hitting_sets(F)
        assert Fraction(count_min_hitting_sets(G), len(G)) < Fraction(count_min_hitting_sets(F), len(F))


# -- majority and Turan ---------------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4])
def test_majority_correspondence(n, cost_cache):
    r = majority_correspondence(n, cost_cache)
    assert r.identity_ok and r.sandwich_ok
    if n == 2:
        assert r.T == 2 and r.cor_plus == 1 and r.binom == 2


@pytest.mark.parametrize("n,t,size", [(2, 2, 1), (4, 4, 2), (6, 8, 3)])
def test_turan(n, t, size):
    r = turan_bottom_fanin2(n)
    assert r.ok and r.witness_is_matching
    assert r.extremal.t == t and len(r.extremal.witness) == size
    assert r.extremal.ratio == Fraction(2 ** (n // 2), n // 2)


def test_turan_odd():
    with pytest.raises(ValueError):
        turan_bottom_fanin2(5)
