"""The acceptance suite: thirteen exact finite checks, shared by the CLI and tests."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Callable

from .boolfn import TruthTable, make_majority, make_parity, majority_threshold, popcount
from .cnfmin import CostCache, min_cnf_size, min_monotone_cnf
from .coding import (
    isolated_solutions,
    is_prefix_free,
    kraft_sum,
    count_bound_check,
    one_sided_parity_tradeoff,
    ppz_decode,
    ppz_encode,
    width_reduce_decode,
    width_reduce_encode,
)
from .constructions import (
    canonical_parity_cnf,
    lupanov_depth3,
    parity_block_report,
    parity_depth3_report,
    universal_approximator,
)
from .duality import (
    LN2_UPPER,
    DualityReport,
    Distribution,
    _monotone_functions,
    build_cover_instance,
    ceil_fraction,
    solve_duality,
    synthesize_exact,
    verify_hard_distribution,
)
from .extremal import majority_correspondence, turan_bottom_fanin2
from .formula import Clause, CnfFormula

DEFAULT_SEED = 20240601


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.number:2d} {self.name} ({self.seconds:.1f}s)"


# -- random instances --------------------------------------------------------------------

def random_kcnf(rng: random.Random, n: int, k: int, m: int) -> CnfFormula:
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), k)
        clauses.append(Clause(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(n, tuple(clauses))


def random_mixed_cnf(rng: random.Random, n: int, m: int, wmin: int = 2, wmax: int | None = None) -> CnfFormula:
    wmax = n if wmax is None else wmax
    clauses = []
    for _ in range(m):
        w = rng.randint(wmin, wmax)
        vs = rng.sample(range(1, n + 1), w)
        clauses.append(Clause(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(n, tuple(clauses))


def planted_isolated_cnf(rng: random.Random, n: int, points: int = 2, extra: int = 8, wmax: int | None = None) -> CnfFormula:
    """Random CNF with ``points`` planted isolated solutions.

    For each planted point and each variable there is a clause that the point
    satisfies only through that variable; all clauses hold at every planted point.
    """
    wmax = n if wmax is None else wmax
    pts = []
    while len(pts) < points:
        x = tuple(rng.randint(0, 1) for _ in range(n))
        if all(sum(a != b for a, b in zip(x, y)) >= 2 for y in pts):
            pts.append(x)

    def lit(v: int, x, true: bool) -> int:
        return v if bool(x[v - 1]) == true else -v

    clauses = []
    for x in pts:
        for i in range(1, n + 1):
            while True:
                w = rng.randint(2, wmax)
                others = rng.sample([v for v in range(1, n + 1) if v != i], w - 1)
                c = Clause([lit(i, x, True)] + [lit(v, x, False) for v in others])
                if all(c.evaluate(y) for y in pts):
                    clauses.append(c)
                    break
    while extra > 0:
        w = rng.randint(2, wmax)
        c = Clause(v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), w))
        if all(c.evaluate(y) for y in pts):
            clauses.append(c)
            extra -= 1
    return CnfFormula(n, tuple(clauses))


def random_function(rng: random.Random, n: int, max_ones: int | None = None) -> TruthTable:
    """Uniform non-constant function, optionally conditioned on ``|f^-1(1)| <= max_ones``."""
    while True:
        f = TruthTable(n, rng.getrandbits(1 << n))
        if f.is_constant():
            continue
        if max_ones is None or f.ones_count <= max_ones:
            return f


def _with_isolated(rng: random.Random, make: Callable[[], CnfFormula]) -> CnfFormula:
    while True:
        phi = make()
        if len(isolated_solutions(phi)):
            return phi


# -- shared duality runs --------------------------------------------------------------------

_runs: dict[str, list[DualityReport]] = {}


def _record(tag: str, rep: DualityReport) -> None:
    _runs.setdefault(tag, []).append(rep)


def _greedy_check(rep: DualityReport) -> dict:
    # H(|U|) <= 1 + ln|U|, so the exact harmonic bound implies the stated one
    return {"greedy": rep.greedy.size, "harmonic_bound": rep.greedy_bound, "ok": rep.greedy.size <= rep.greedy_bound}


# -- criteria ----------------------------------------------------------------------------------

def c1_duality_sandwich(cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    _runs.pop("c1", None)
    n = 3
    factor = 1 + n * LN2_UPPER
    failures = []
    count = 0
    for bits in range(1, (1 << (1 << n)) - 1):
        f = TruthTable(n, bits)
        rep = solve_duality(f, "general", exact=True, cache=cache)
        _record("c1", rep)
        L = rep.exact.size
        lo, hi = ceil_fraction(rep.s_star), factor * rep.s_star
        count += 1
        if not (lo <= L <= hi and rep.cor_mu == rep.cor):
            failures.append({"f": f.to_string(), "s_star": rep.s_star, "L3": L})
    return CriterionResult(1, "duality sandwich (n=3, all non-constant f)", not failures,
                           {"functions": count, "failures": failures})


def c2_parity_cnf(cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    rows = []
    for n in (2, 3, 4):
        size, _ = min_cnf_size(make_parity(n))
        rows.append({"n": n, "min_cnf": size, "expected": 2 ** (n - 1), "ok": size == 2 ** (n - 1)
                     and canonical_parity_cnf(n).size == size})
    return CriterionResult(2, "parity CNF tightness", all(r["ok"] for r in rows), {"rows": rows})


def c3_parity_hard_distribution(cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    _runs.pop("c3", None)
    rows = []
    for n in (2, 3, 4):
        f = make_parity(n)
        inst = build_cover_instance(f, "general", cache)
        rep = solve_duality(f, "general", exact=False, instance=inst)
        _record("c3", rep)
        mu = Distribution.uniform(n, f.ones())
        ok = verify_hard_distribution(f, mu, "general", rep, cache)
        rows.append({"n": n, "s_star": rep.s_star, "cor": rep.cor, "ok": ok})
    return CriterionResult(3, "parity hard distribution (uniform on odd inputs)", all(r["ok"] for r in rows),
                           {"rows": rows})


def c4_majority_hard_distribution(cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    _runs.pop("c4", None)
    rows = []
    for n in (2, 3, 4):
        f = make_majority(n)
        h = majority_threshold(n)
        inst = build_cover_instance(f, "monotone", cache)
        rep = solve_duality(f, "monotone", exact=False, instance=inst)
        _record("c4", rep)
        mu = Distribution.uniform(n, [x for x in range(1 << n) if popcount(x) == h])
        ok = verify_hard_distribution(f, mu, "monotone", rep, cache)
        rows.append({"n": n, "slice": h, "cor_plus": rep.cor, "ok": ok})
    return CriterionResult(4, "majority hard distribution (middle slice, monotone)", all(r["ok"] for r in rows),
                           {"rows": rows})


def c5_hypergraph_correspondence(cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    rows = []
    for n in (2, 3, 4):
        r = majority_correspondence(n, cache)
        rows.append({"n": n, "T": r.T, "binom": r.binom, "cor_plus": r.cor_plus, "L3_plus": r.L3_plus,
                     "lower": r.lower, "upper": r.upper, "identity_ok": r.identity_ok, "sandwich_ok": r.sandwich_ok})
    return CriterionResult(5, "hypergraph correspondence for majority",
                           all(r["identity_ok"] and r["sandwich_ok"] for r in rows), {"rows": rows})


def c6_turan(cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    rows = []
    for n in (2, 4, 6):
        r = turan_bottom_fanin2(n)
        rows.append({"n": n, "ratio": r.extremal.ratio, "matching_ratio": r.matching_ratio,
                     "witness": r.extremal.witness.edge_list(), "witness_is_matching": r.witness_is_matching,
                     "ok": r.ok})
    return CriterionResult(6, "Turan extremal graphs at tau=n/2", all(r["ok"] for r in rows), {"rows": rows})


def _coding_audit_all_orders(phi: CnfFormula, k: int) -> dict:
    n = phi.n
    T = isolated_solutions(phi).assignments()
    totals = {x: 0 for x in T}
    kraft_ok = prefix_ok = roundtrip_ok = True
    orders = 0
    for perm in permutations(range(1, n + 1)):
        orders += 1
        codes = []
        for x in T:
            c = ppz_encode(x, phi, perm)
            totals[x] += len(c)
            codes.append(c.bits)
            if ppz_decode(c, phi) != x:
                roundtrip_ok = False
        if kraft_sum(codes) > 1:
            kraft_ok = False
        if not is_prefix_free(codes):
            prefix_ok = False
    bound = Fraction(n) - Fraction(n, k)
    worst = max(Fraction(t, orders) for t in totals.values())
    return {"n": n, "k": k, "m": phi.size, "isolated": len(T), "max_avg_len": worst, "bound": bound,
            "length_ok": worst <= bound, "kraft_ok": kraft_ok, "prefix_free": prefix_ok, "roundtrip_ok": roundtrip_ok}


def c7_coding_lemma(cache: CostCache | None = None, seed: int = DEFAULT_SEED, count: int = 50) -> CriterionResult:
    rng = random.Random(seed + 7)
    rows = []
    for _ in range(count):
        k = rng.choice((2, 3))
        n = rng.randint(k + 1, 8)
        m = rng.randint(n, 2 ** k * n // 2)
        phi = _with_isolated(rng, lambda: random_kcnf(rng, n, k, m))
        rows.append(_coding_audit_all_orders(phi, k))
    ok = all(r["length_ok"] and r["kraft_ok"] and r["prefix_free"] and r["roundtrip_ok"] for r in rows)
    return CriterionResult(7, "coding lemma over all permutations", ok, {"formulas": len(rows), "rows": rows})


def c8_width_reduction(cache: CostCache | None = None, seed: int = DEFAULT_SEED, count: int = 100,
                       roundtrips: int = 20, orders_per_formula: int = 3) -> CriterionResult:
    rng = random.Random(seed + 8)
    n = 12
    rows = []
    formulas = []
    for _ in range(count):
        phi = planted_isolated_cnf(rng, n, rng.randint(1, 3), rng.randint(0, 16))
        r = count_bound_check(phi)
        rows.append({"m": phi.size, "s": r.s, "count": r.count, "exponent": r.exponent, "ok": r.ok})
        formulas.append(phi)
    rt_ok = True
    truncated_codes = 0
    checked = 0
    for phi in formulas[:roundtrips]:
        T = isolated_solutions(phi).assignments()
        for _ in range(orders_per_formula):
            perm = list(range(1, n + 1))
            rng.shuffle(perm)
            codes = []
            for x in T:
                c = width_reduce_encode(x, phi, perm)
                codes.append(c.bits)
                truncated_codes += c.bits.startswith("1")
                checked += 1
                if width_reduce_decode(c, phi) != x:
                    rt_ok = False
            if kraft_sum(codes) > 1 or not is_prefix_free(codes):
                rt_ok = False
    ok = all(r["ok"] for r in rows) and rt_ok
    return CriterionResult(8, "width reduction count bound and roundtrip", ok,
                           {"formulas": count, "max_count": max(r["count"] for r in rows),
                            "bound_failures": [r for r in rows if not r["ok"]],
                            "roundtrip_codes": checked, "codes_with_truncation_marker": truncated_codes,
                            "roundtrip_ok": rt_ok})


def c9_one_sided_parity(cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    rows = []
    for n in range(1, 17):
        for k in range(1, 5):
            if k > n:
                continue
            rep = parity_block_report(n, k)
            trade = one_sided_parity_tradeoff(n, rep.formula)
            rows.append({"n": n, "k": k, "size": rep.size, "size_bound": rep.bound, "satisfying": rep.satisfying,
                         "advantage": trade.advantage, "construction_ok": rep.ok, "tradeoff_ok": trade.ok})
    ok = all(r["construction_ok"] and r["tradeoff_ok"] for r in rows)
    return CriterionResult(9, "one-sided parity block approximators", ok, {"cases": len(rows),
                           "failures": [r for r in rows if not (r["construction_ok"] and r["tradeoff_ok"])]})


def c10_parity_depth3(cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    rows = []
    for n, k in ((4, 2), (9, 3), (16, 4)):
        r = parity_depth3_report(n, k)
        rows.append({"n": n, "k": k, "size": r.size, "bound": r.bound, "ok": r.ok})
    f = make_parity(4)
    inst = build_cover_instance(f, "general", cache)
    rep = solve_duality(f, "general", exact=False, instance=inst)
    L3 = synthesize_exact(inst).size
    construction = parity_depth3_report(4, 2).size
    exact_ok = ceil_fraction(rep.s_star) <= L3 <= construction
    return CriterionResult(10, "depth-3 parity construction", all(r["ok"] for r in rows) and exact_ok,
                           {"rows": rows, "s_star": rep.s_star, "L3": L3, "construction": construction,
                            "exact_ok": exact_ok})


def c11_lupanov(cache: CostCache | None = None, seed: int = DEFAULT_SEED, count: int = 50,
                approx_count: int = 20) -> CriterionResult:
    rng = random.Random(seed + 11)
    lup = []
    for n in (4, 5, 6):
        worst = None
        bad = 0
        for _ in range(count):
            f = TruthTable(n, rng.getrandbits(1 << n))
            r = lupanov_depth3(f)
            bad += not r.ok
            worst = r.size if worst is None else max(worst, r.size)
        lup.append({"n": n, "functions": count, "max_size": worst, "bound": Fraction(2 ** (n + 3), n), "failures": bad})
    approx = []
    targets = [("parity4", make_parity(4)), ("maj5", make_majority(5))]
    targets += [(f"random5_{i}", random_function(rng, 5, 16)) for i in range(approx_count)]
    for name, f in targets:
        r = universal_approximator(f, cache)
        approx.append({"f": name, "size": r.formula.size, "epsilon": r.epsilon, "bound": r.bound, "ok": r.ok})
    ok = all(x["failures"] == 0 for x in lup) and all(a["ok"] for a in approx)
    return CriterionResult(11, "sphere-cover upper bound and universal approximator", ok,
                           {"lupanov": lup, "approximator": approx})


def c12_quine(cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    bad = []
    total = 0
    for n in range(1, 5):
        for bits in _monotone_functions(n):
            f = TruthTable(n, bits)
            total += 1
            a, _ = min_cnf_size(f)
            b, _ = min_monotone_cnf(f)
            if a != b:
                bad.append({"f": f.to_string(), "min_cnf": a, "monotone": b})
    return CriterionResult(12, "Quine: monotone functions need no negations", not bad,
                           {"functions": total, "failures": bad})


def c13_greedy(cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    for tag, fn in (("c1", c1_duality_sandwich), ("c3", c3_parity_hard_distribution), ("c4", c4_majority_hard_distribution)):
        if tag not in _runs:
            fn(cache, seed)
    checks = [_greedy_check(r) for tag in ("c1", "c3", "c4") for r in _runs[tag]]
    return CriterionResult(13, "greedy within (1 + ln|U|) s*", all(c["ok"] for c in checks),
                           {"instances": len(checks), "failures": [c for c in checks if not c["ok"]]})


CRITERIA: dict[str, Callable[..., CriterionResult]] = {
    "duality-sandwich": c1_duality_sandwich,
    "parity-cnf": c2_parity_cnf,
    "parity-hard-distribution": c3_parity_hard_distribution,
    "majority-hard-distribution": c4_majority_hard_distribution,
    "hypergraph-correspondence": c5_hypergraph_correspondence,
    "turan": c6_turan,
    "coding-lemma": c7_coding_lemma,
    "width-reduction": c8_width_reduction,
    "one-sided-parity": c9_one_sided_parity,
    "parity-depth3": c10_parity_depth3,
    "lupanov": c11_lupanov,
    "quine": c12_quine,
    "greedy": c13_greedy,
}


def run_criterion(name: str, cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> CriterionResult:
    if name not in CRITERIA:
        raise KeyError(f"unknown criterion {name!r}; choose from {', '.join(CRITERIA)}")
    t = time.perf_counter()
    res = CRITERIA[name](cache, seed)
    res.seconds = time.perf_counter() - t
    return res


def run_all(cache: CostCache | None = None, seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    _runs.clear()
    return [run_criterion(name, cache, seed) for name in CRITERIA]
