"""Order-theoretic counterexamples made executable.

The modified Johnstone lattice, its Scott opens, their product, and
replayable certificates showing that binary sup is not continuous for the
product topology and that a space of continuous functions into a complete
lattice can fail to be bounded complete.
"""

from .modjohnstone import BOT, OMEGA, TOP, Pair, inf_set, leq1, sup_set
from .opens import EMPTY, FULL, V_ZERO, ZERO, FnRep, VSet, gi_chain, subset, vf_contains
from .product import ElemZ, PointwiseOpenX2, ProductOpenZ, e_contains, refute_e_box, refute_sup2_box, sup2

__version__ = "0.1.0"

__all__ = [
    "BOT",
    "EMPTY",
    "FULL",
    "OMEGA",
    "TOP",
    "V_ZERO",
    "ZERO",
    "ElemZ",
    "FnRep",
    "Pair",
    "PointwiseOpenX2",
    "ProductOpenZ",
    "VSet",
    "e_contains",
    "gi_chain",
    "inf_set",
    "leq1",
    "refute_e_box",
    "refute_sup2_box",
    "subset",
    "sup2",
    "sup_set",
    "vf_contains",
]
