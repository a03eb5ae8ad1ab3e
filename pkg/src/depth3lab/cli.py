"""Command-line entry point.  Every command prints one JSON object per report."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import acceptance, coding, constructions, extremal
from .boolfn import CapExceeded, TruthTable, check_cap, dumps_table, loads_table, make_family, parse_bits
from .cnfmin import CostCache, default_cache, min_cnf_size, min_monotone_cnf
from .duality import solve_duality, synthesize_exact, synthesize_greedy, build_cover_instance
from .formula import CnfFormula, DepthThreeFormula, dumps_cnf, dumps_d3f, loads_cnf

DEFAULT_MAX_N = 24


@dataclass
class ExperimentConfig:
    command: list[str]
    max_n: int = DEFAULT_MAX_N
    seed: int = acceptance.DEFAULT_SEED
    out: Path | None = None
    timing: bool = False
    options: dict[str, Any] = field(default_factory=dict)


@dataclass
class Report:
    command: list[str]
    results: dict[str, Any]
    ok: bool | None = None
    artifacts: list[str] = field(default_factory=list)
    wall_time: float | None = None


def jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str, float)):
        return obj
    if isinstance(obj, TruthTable):
        return obj.to_string()
    if isinstance(obj, extremal.Hypergraph):
        return [list(e) for e in obj.edge_list()]
    if isinstance(obj, (CnfFormula, DepthThreeFormula)):
        return {"n": obj.n, "size": obj.size}
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if is_dataclass(obj):
        return jsonable({k: getattr(obj, k) for k in obj.__dataclass_fields__})
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit(report: Report, cfg: ExperimentConfig) -> None:
    d = jsonable(report)
    if not cfg.timing:
        d.pop("wall_time")
    text = json.dumps(d, sort_keys=True)
    print(text)
    if cfg.out is not None:
        path = cfg.out.with_suffix(".json") if cfg.out.suffix != ".json" else cfg.out
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _artifact(cfg: ExperimentConfig, suffix: str, text: str, report: Report) -> None:
    if cfg.out is None:
        return
    path = cfg.out.with_suffix(suffix)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    report.artifacts.append(str(path))


def _check_n(cfg: ExperimentConfig, n: int) -> None:
    check_cap("n (--max-n)", n, cfg.max_n)


def _function(args, cfg: ExperimentConfig) -> TruthTable:
    if getattr(args, "table", None):
        f = loads_table(Path(args.table).read_text())
    elif getattr(args, "family", None):
        if args.n is None:
            raise SystemExit("--n is required with --family")
        _check_n(cfg, args.n)
        f = make_family(args.family, args.n)
    elif getattr(args, "random", False):
        if args.n is None:
            raise SystemExit("--n is required with --random")
        _check_n(cfg, args.n)
        f = TruthTable(args.n, random.Random(cfg.seed).getrandbits(1 << args.n))
    else:
        raise SystemExit("give --family, --table or --random")
    _check_n(cfg, f.n)
    return f


def _cache() -> CostCache:
    return default_cache()


# -- commands ------------------------------------------------------------------------------------

def cmd_fn(args, cfg) -> list[Report]:
    f = _function(args, cfg)
    r = Report(cfg.command, {"n": f.n, "table": f, "ones": f.ones_count, "monotone": f.is_monotone()})
    if args.action == "make":
        _artifact(cfg, ".tt", dumps_table(f), r)
    return [r]


def cmd_cnfmin(args, cfg) -> list[Report]:
    f = _function(args, cfg)
    size, phi = min_monotone_cnf(f) if args.monotone else min_cnf_size(f)
    r = Report(cfg.command, {"n": f.n, "mode": "monotone" if args.monotone else "general", "size": size,
                             "clauses": [list(c) for c in phi.clauses]})
    _artifact(cfg, ".cnf", dumps_cnf(phi), r)
    return [r]


def cmd_duality(args, cfg) -> list[Report]:
    f = _function(args, cfg)
    inst = build_cover_instance(f, args.mode, _cache())
    if args.action == "solve":
        rep = solve_duality(f, args.mode, exact=args.exact, instance=inst)
        res = {
            "f": f,
            "mode": args.mode,
            "universe": len(rep.universe),
            "columns": rep.num_columns,
            "lp_columns": rep.num_lp_columns,
            "s_star": rep.s_star,
            "cor": rep.cor,
            "mu": {str(x): p for x, p in rep.mu.weights},
            "mu_symmetric": {str(x): p for x, p in rep.mu_symmetric.weights},
            "greedy_size": rep.greedy.size,
            "exact_size": rep.exact.size if rep.exact is not None else None,
            "checks": rep.checks(),
        }
        r = Report(cfg.command, res, rep.ok)
        _artifact(cfg, ".d3f", dumps_d3f(rep.exact or rep.greedy), r)
        return [r]
    phi = synthesize_exact(inst) if args.exact else synthesize_greedy(inst)
    r = Report(cfg.command, {"f": f, "method": "exact" if args.exact else "greedy", "size": phi.size},
               phi.table_bits() == f.bits)
    _artifact(cfg, ".d3f", dumps_d3f(phi), r)
    return [r]


def _perm(text: str | None, n: int) -> list[int]:
    if not text:
        return list(range(1, n + 1))
    return [int(t) for t in text.replace(",", " ").split()]


def cmd_coding(args, cfg) -> list[Report]:
    phi = loads_cnf(Path(args.cnf).read_text())
    _check_n(cfg, phi.n)
    perm = _perm(args.perm, phi.n)
    if args.action == "encode":
        x = parse_bits(args.assignment)
        enc = coding.width_reduce_encode if args.width_reduce else coding.ppz_encode
        c = enc(x, phi, perm)
        return [Report(cfg.command, {"code": c.bits, "length": len(c), "perm": list(c.perm)})]
    if args.action == "decode":
        dec = coding.width_reduce_decode if args.width_reduce else coding.ppz_decode
        x = dec(args.code, phi, perm)
        return [Report(cfg.command, {"assignment": "".join(map(str, x)), "perm": perm})]
    T = coding.isolated_solutions(phi)
    codes = [coding.ppz_encode(x, phi, perm).bits for x in T.assignments()]
    wcodes = [coding.width_reduce_encode(x, phi, perm).bits for x in T.assignments()]
    cb = coding.count_bound_check(phi)
    res = {
        "n": phi.n,
        "size": phi.size,
        "isolated": len(T),
        "count_bound": {"lhs": cb.count, "rhs": f"2^({cb.exponent})", "ok": cb.ok},
        "ppz": {"kraft": coding.kraft_sum(codes), "prefix_free": coding.is_prefix_free(codes)},
        "width_reduced": {"kraft": coding.kraft_sum(wcodes), "prefix_free": coding.is_prefix_free(wcodes)},
    }
    ok = cb.ok and res["ppz"]["kraft"] <= 1 and res["width_reduced"]["kraft"] <= 1
    ok = ok and res["ppz"]["prefix_free"] and res["width_reduced"]["prefix_free"]
    return [Report(cfg.command, res, ok)]


def _construction_report(cfg, rep: constructions.ConstructionReport, extra: dict | None = None) -> Report:
    res = {"kind": rep.kind, "n": rep.n, "size": rep.size, "bound": rep.bound,
           "size_ok": rep.size_ok, "semantic_ok": rep.semantic_ok}
    if rep.satisfying is not None:
        res["satisfying"] = rep.satisfying
        res["advantage"] = rep.advantage
    res.update(extra or {})
    r = Report(cfg.command, res, rep.ok)
    phi = rep.formula
    if isinstance(phi, CnfFormula):
        _artifact(cfg, ".cnf", dumps_cnf(phi), r)
    else:
        _artifact(cfg, ".d3f", dumps_d3f(phi), r)
    return r


def cmd_build(args, cfg) -> list[Report]:
    if args.what == "lupanov":
        f = _function(args, cfg)
        return [_construction_report(cfg, constructions.lupanov_depth3(f, prune=args.prune), {"f": f})]
    if args.n is None:
        raise SystemExit("--n is required")
    _check_n(cfg, args.n)
    if args.what == "parity-cnf":
        phi = constructions.canonical_parity_cnf(args.n)
        rep = constructions.ConstructionReport("parity-cnf", args.n, phi, phi.size, Fraction(2 ** (args.n - 1)),
                                               phi.table_bits() == make_family("parity", args.n).bits)
        return [_construction_report(cfg, rep)]
    if args.k is None:
        raise SystemExit("--k is required")
    if args.what == "parity-blocks":
        return [_construction_report(cfg, constructions.parity_block_report(args.n, args.k), {"k": args.k})]
    return [_construction_report(cfg, constructions.parity_depth3_report(args.n, args.k), {"k": args.k})]


def _extremal_report(cfg, rep: extremal.ExtremalReport) -> Report:
    res = {"n": rep.n, "tau": rep.tau, "family": rep.family, "ratio": rep.ratio, "t": rep.t,
           "edges": len(rep.witness) if rep.witness else None, "witness": rep.witness, "searched": rep.searched}
    r = Report(cfg.command, res, rep.ratio is not None)
    if rep.witness is not None:
        _artifact(cfg, ".edges", "".join(" ".join(map(str, e)) + "\n" for e in rep.witness.edge_list()), r)
    return r


def cmd_extremal(args, cfg) -> list[Report]:
    _check_n(cfg, args.n)
    return [_extremal_report(cfg, extremal.extremal_T(args.n, args.tau, args.family))]


def cmd_acceptance(args, cfg) -> list[Report]:
    cache = _cache()
    if args.name == "all":
        results = acceptance.run_all(cache, cfg.seed)
    else:
        results = [acceptance.run_criterion(args.name, cache, cfg.seed)]
    out = []
    for res in results:
        print(res.line(), file=sys.stderr)
        out.append(Report(cfg.command, {"criterion": res.number, "name": res.name, "detail": res.detail}, res.ok,
                          wall_time=res.seconds))
    return out


def _range(text: str) -> list[int]:
    if not text:
        return []
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(t) for t in text.split(",") if t]


def cmd_sweep(args, cfg) -> list[Report]:
    out = []
    ns = _range(args.n_range)
    for n in ns:
        _check_n(cfg, n)
    if args.what == "parity-blocks":
        for n in ns:
            for k in _range(args.k_range):
                if 1 <= k <= n:
                    out.append(_construction_report(cfg, constructions.parity_block_report(n, k), {"k": k}))
    elif args.what == "extremal":
        for n in ns:
            tau = args.tau if args.tau is not None else -(-n // 2)
            out.append(_extremal_report(cfg, extremal.extremal_T(n, tau, args.family)))
    elif args.what == "lupanov":
        rng = random.Random(cfg.seed)
        for n in ns:
            for _ in range(args.count):
                f = TruthTable(n, rng.getrandbits(1 << n))
                out.append(_construction_report(cfg, constructions.lupanov_depth3(f), {"f": f}))
    return out


# -- parser ----------------------------------------------------------------------------------------

def _add_function_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["parity", "majority", "and", "or"])
    p.add_argument("--n", type=int)
    p.add_argument("--table", "--function", dest="table", help="truth-table file")
    p.add_argument("--random", action="store_true", help="uniform random function from --seed")


def _add_global_args(p: argparse.ArgumentParser, seed, out, max_n, timing) -> None:
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--out", type=Path, default=out, help="stem for the report (.json) and artifact files")
    p.add_argument("--max-n", type=int, default=max_n)
    p.add_argument("--timing", action="store_true", default=timing, help="include wall time in reports")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="depth3lab", description=__doc__)
    _add_global_args(ap, acceptance.DEFAULT_SEED, None, DEFAULT_MAX_N, False)
    # the same flags after the command; SUPPRESS keeps values given before it
    common = argparse.ArgumentParser(add_help=False)
    _add_global_args(common, *[argparse.SUPPRESS] * 4)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help, parents=[common])

    p = command("fn", "make or show a truth table")
    p.add_argument("action", choices=["make", "show"])
    _add_function_args(p)
    p.set_defaults(run=cmd_fn)

    p = command("cnfmin", "exact minimum CNF")
    _add_function_args(p)
    p.add_argument("--monotone", action="store_true")
    p.set_defaults(run=cmd_cnfmin)

    p = command("duality", "cover LP, hard distribution and synthesis")
    p.add_argument("action", choices=["solve", "synth"])
    _add_function_args(p)
    p.add_argument("--mode", choices=["general", "monotone"], default="general")
    p.add_argument("--exact", action=argparse.BooleanOptionalAction, default=None)
    p.set_defaults(run=cmd_duality)

    p = command("coding", "PPZ and width-reduced codecs")
    p.add_argument("action", choices=["encode", "decode", "audit"])
    p.add_argument("--cnf", required=True)
    p.add_argument("--assignment")
    p.add_argument("--code", default="")
    p.add_argument("--perm")
    p.add_argument("--width-reduce", action="store_true")
    p.set_defaults(run=cmd_coding)

    p = command("build", "explicit constructions")
    p.add_argument("what", choices=["parity-cnf", "parity-blocks", "parity-d3", "lupanov"])
    _add_function_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--prune", action="store_true")
    p.set_defaults(run=cmd_build)

    p = command("extremal", "T(n, tau) by exhaustive search")
    p.add_argument("what", choices=["T"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--family", choices=["graphs", "hypergraphs"], default="hypergraphs")
    p.set_defaults(run=cmd_extremal)

    p = command("acceptance", "run the acceptance suite")
    p.add_argument("name", choices=["all", *acceptance.CRITERIA])
    p.set_defaults(run=cmd_acceptance)

    p = command("sweep", "cartesian parameter sweeps")
    p.add_argument("what", choices=["parity-blocks", "extremal", "lupanov"])
    p.add_argument("--n-range", default="")
    p.add_argument("--k-range", default="1..4")
    p.add_argument("--tau", type=int)
    p.add_argument("--family", choices=["graphs", "hypergraphs"], default="hypergraphs")
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(run=cmd_sweep)
    return ap


def run(cfg: ExperimentConfig, args: argparse.Namespace) -> list[Report]:
    t = time.perf_counter()
    reports = args.run(args, cfg)
    if cfg.timing and args.cmd != "acceptance":
        for r in reports:
            r.wall_time = time.perf_counter() - t
    return reports


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    cfg = ExperimentConfig(argv, args.max_n, args.seed, args.out, args.timing)
    if cfg.out is not None:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        cfg.out.with_suffix(".json").unlink(missing_ok=True)
    try:
        reports = run(cfg, args)
    except (CapExceeded, ValueError, OSError) as e:
        print(json.dumps({"command": argv, "error": f"{type(e).__name__}: {e}"}), file=sys.stderr)
        return 2
    for r in reports:
        emit(r, cfg)
    return 0 if all(r.ok is not False for r in reports) else 1


if __name__ == "__main__":
    raise SystemExit(main())
