"""Exact finite experiments on depth-3 formula size: CNF minimization, the
set-cover LP and its hard distributions, satisfiability coding, explicit
constructions and hitting-set extremal problems."""

from .boolfn import TruthTable, make_family, make_majority, make_parity
from .formula import Clause, CnfFormula, DepthThreeFormula

__version__ = "0.1.0"

__all__ = [
    "Clause",
    "CnfFormula",
    "DepthThreeFormula",
    "TruthTable",
    "make_family",
    "make_majority",
    "make_parity",
]
