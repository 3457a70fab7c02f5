"""Spaces of Scott-continuous functions.

Two layers:

* finite: ``C(x, z)`` for finite posets, where continuity for the upper-set
  topology coincides with monotonicity, so everything is enumerable;
* symbolic: the handful of maps ``Z x Z -> Z`` (projections, binary sup,
  constants, step functions) needed to show that the projections have no
  supremum once ``Z x Z`` carries the product topology.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from . import core_order
from .core_order import FiniteMap, FinitePoset, SizeBoundError
from .modjohnstone import BOT, OMEGA, TOP, ElemJ, Pair
from .opens import EMPTY, FULL, V_ZERO, FnRep, OpenJ, VSet
from .product import (
    BOT_Z,
    DEFAULT_D1,
    DEFAULT_D2,
    TOP_Z,
    ElemZ,
    Evaluation,
    PointwiseOpenX2,
    ProductOpenZ,
    RefutationCertificate,
    leqZ,
    product_open_contains,
    refute_sup2_box,
    sup2,
)

#: Largest number of functions whose subsets are enumerated one by one.
SUBSET_ENUM_BOUND = 14
#: Largest ``|z| ** |x|`` accepted by :func:`enumerate_continuous_finite`.
FN_ENUM_BOUND = 4096


class InputError(ValueError):
    pass


class ContinuousFnFinite(FiniteMap):
    """A monotone map between finite posets."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not core_order.is_monotone(self):
            raise InputError("map is not monotone, hence not Scott continuous")

    __hash__ = FiniteMap.__hash__

    def __repr__(self) -> str:
        return f"ContinuousFnFinite({self.values()})"


def _same_spaces(f: FiniteMap, g: FiniteMap) -> None:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise InputError("functions live on different spaces")


def leqC(f: FiniteMap, g: FiniteMap) -> bool:
    _same_spaces(f, g)
    return all(f.codomain.leq(f(x), g(x)) for x in f.domain)


def enumerate_continuous_finite(x: FinitePoset, z: FinitePoset) -> list[ContinuousFnFinite]:
    if len(z) ** len(x) > FN_ENUM_BOUND:
        raise SizeBoundError(f"{len(z)}^{len(x)} maps exceed the bound {FN_ENUM_BOUND}")
    out = []
    for values in itertools.product(z.elements, repeat=len(x)):
        table = dict(zip(x.elements, values))
        if all(z.leq(table[a], table[b]) for a, b in x.pairs()):
            out.append(ContinuousFnFinite(x, z, table))
    return out


def constant_fn(x: FinitePoset, z: FinitePoset, value: str) -> ContinuousFnFinite:
    return ContinuousFnFinite(x, z, {a: value for a in x})


def pointwise_sup(fs: Sequence[FiniteMap]) -> FiniteMap | None:
    """Pointwise least upper bound, or None where some ``F(x)`` has no sup."""
    if not fs:
        raise InputError("pointwise sup of an empty family needs explicit spaces")
    x, z = fs[0].domain, fs[0].codomain
    table = {}
    for a in x:
        s = core_order.brute_sup(z.subset(f(a) for f in fs))
        if s is None:
            return None
        table[a] = s
    return FiniteMap(x, z, table)


def _is_directed_family(fs: Sequence[FiniteMap]) -> bool:
    if not fs:
        return False
    for f, g in itertools.combinations(fs, 2):
        if not any(leqC(f, h) and leqC(g, h) for h in fs):
            return False
    return True


def directed_sup_fn(fs: Sequence[FiniteMap]) -> ContinuousFnFinite:
    """Supremum of a directed family, taken pointwise."""
    for f in fs[1:]:
        _same_spaces(fs[0], f)
    if not _is_directed_family(fs):
        raise InputError("family is not directed")
    g = pointwise_sup(fs)
    if g is None:
        raise InputError("codomain lacks a pointwise supremum")
    return ContinuousFnFinite(g.domain, g.codomain, g.table)


def least_upper_bound_in(fs: Sequence[FiniteMap], space: Sequence[FiniteMap]) -> FiniteMap | None:
    """Brute-force least upper bound of ``fs`` among the maps in ``space``."""
    ubs = [h for h in space if all(leqC(f, h) for f in fs)]
    for h in ubs:
        if all(leqC(h, k) for k in ubs):
            return h
    return None


@dataclass(frozen=True)
class BoundedCompleteReport:
    passed: bool
    functions: int
    subsets_checked: int
    mode: str
    # values of the first offending family, if any
    counterexample: tuple | None = None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "functions": self.functions,
            "subsets_checked": self.subsets_checked,
            "mode": self.mode,
            "counterexample": None if self.counterexample is None else [list(v) for v in self.counterexample],
        }


def check_bounded_complete_finite(x: FinitePoset, z: FinitePoset) -> BoundedCompleteReport:
    """Every bounded family in ``C(x, z)`` has its pointwise sup as least upper bound.

    Families are enumerated one by one when ``C(x, z)`` has at most
    :data:`SUBSET_ENUM_BOUND` members.  Past that, only the empty family and
    bounded pairs are checked: in a finite poset with a least element where
    bounded pairs have suprema, a bounded family ``F + {f}`` has supremum
    ``sup(sup(F), f)``, so nothing is lost.
    """
    if not core_order.is_bounded_complete(z):
        raise InputError("codomain is not bounded complete")
    space = enumerate_continuous_finite(x, z)
    n = len(space)
    if n <= SUBSET_ENUM_BOUND:
        mode = "all-subsets"
        families: Iterable[tuple] = itertools.chain.from_iterable(
            itertools.combinations(range(n), r) for r in range(n + 1)
        )
    else:
        mode = "empty-and-pairs"
        families = itertools.chain([()], itertools.combinations_with_replacement(range(n), 2))
    le = np.array([[leqC(f, g) for g in space] for f in space], dtype=bool).reshape(n, n)
    values = [f.values() for f in space]
    sup_cache: dict[frozenset, str | None] = {}

    def sup_of(ids: frozenset) -> str | None:
        if ids not in sup_cache:
            sup_cache[ids] = core_order.brute_sup(z.subset(ids))
        return sup_cache[ids]

    checked = 0
    for fam in families:
        ubs = np.all(le[list(fam)], axis=0) if fam else np.ones(n, dtype=bool)
        if not ubs.any():
            continue
        checked += 1
        candidates = np.flatnonzero(ubs)
        least = [h for h in candidates if le[h, candidates].all()]
        pointwise = tuple(sup_of(frozenset(values[k][pos] for k in fam)) for pos in range(len(x)))
        if not least or values[least[0]] != pointwise:
            return BoundedCompleteReport(False, n, checked, mode, tuple(values[k] for k in fam))
    return BoundedCompleteReport(True, n, checked, mode)


def pair_sup_matches_pointwise(f: FiniteMap, g: FiniteMap, space: Sequence[FiniteMap]) -> bool:
    """The two-function criterion on one pair, decided by brute force.

    ``{f, g}`` has a supremum in ``space`` iff the pointwise sup is
    continuous, and then they coincide.
    """
    lub = least_upper_bound_in((f, g), space)
    h = pointwise_sup((f, g))
    h_cont = h is not None and core_order.is_monotone(h)
    if (lub is not None) != h_cont:
        return False
    return lub is None or lub.values() == h.values()


# -- symbolic functions Z x Z -> Z -------------------------------------------

XPoint = tuple  # (ElemZ, ElemZ)


@dataclass(frozen=True)
class Proj1:
    pass


@dataclass(frozen=True)
class Proj2:
    pass


@dataclass(frozen=True)
class Sup2:
    pass


@dataclass(frozen=True)
class ConstFn:
    value: ElemZ


@dataclass(frozen=True)
class StepAt:
    """``value`` on the closure of ``{x0}`` (its down-set), ``top`` elsewhere."""

    x0: tuple[ElemZ, ElemZ]
    value: ElemZ
    top: ElemZ = TOP_Z


SymbolicFnZ = Union[Proj1, Proj2, Sup2, ConstFn, StepAt]


def leqX(a: XPoint, b: XPoint) -> bool:
    """Specialization order of ``Z x Z``: componentwise."""
    return leqZ(a[0], b[0]) and leqZ(a[1], b[1])


def eval_symbolic(f: SymbolicFnZ, x: XPoint) -> ElemZ:
    z1, z2 = x
    if isinstance(f, Proj1):
        return z1
    if isinstance(f, Proj2):
        return z2
    if isinstance(f, Sup2):
        return sup2(z1, z2)
    if isinstance(f, ConstFn):
        return f.value
    if isinstance(f, StepAt):
        return f.value if leqX(x, f.x0) else f.top
    raise TypeError(f"not a symbolic function: {f!r}")


def step_function(f: SymbolicFnZ, g: SymbolicFnZ, x0: XPoint) -> StepAt:
    return StepAt(x0, sup2(eval_symbolic(f, x0), eval_symbolic(g, x0)), TOP_Z)


# -- sampling ---------------------------------------------------------------


def sample_fnrep(rng: random.Random, start: int | None = None, max_len: int = 4, max_val: int = 4) -> FnRep:
    s = rng.randint(0, 3) if start is None else start
    prefix = [rng.randint(0, max_val) for _ in range(rng.randint(0, max_len))]
    return FnRep(s, tuple(prefix), rng.randint(0, max_val))


def sample_elemj(rng: random.Random, max_col: int = 6) -> ElemJ:
    r = rng.random()
    if r < 0.05:
        return BOT
    if r < 0.1:
        return TOP
    j = OMEGA if rng.random() < 0.2 else rng.randint(0, 6)
    return Pair(rng.randint(0, max_col), j)


def sample_openj(rng: random.Random) -> OpenJ:
    r = rng.random()
    if r < 0.05:
        return EMPTY
    if r < 0.1:
        return FULL
    return VSet(sample_fnrep(rng))


def sample_elemz(rng: random.Random) -> ElemZ:
    return ElemZ(sample_elemj(rng), sample_openj(rng))


def sample_pointwise(rng: random.Random, max_gens: int = 3) -> PointwiseOpenX2:
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        gens.append([sample_elemj(rng) for _ in range(rng.randint(0, 3))])
    return PointwiseOpenX2.of(*gens)


def sample_product_open(rng: random.Random, max_boxes: int = 3) -> ProductOpenZ:
    return ProductOpenZ.of(*((sample_openj(rng), sample_pointwise(rng)) for _ in range(rng.randint(1, max_boxes))))


# -- the bounded-completeness failure ---------------------------------------


@dataclass
class ReportItem:
    id: int
    claim: str
    status: str
    evidence: dict = field(default_factory=dict)
    evaluations: list[Evaluation] = field(default_factory=list)


@dataclass
class BCFailureReport:
    items: list[ReportItem]
    certificate: RefutationCertificate

    @property
    def passed(self) -> bool:
        return all(item.status == "pass" for item in self.items)


SPOT_POINT: XPoint = (ElemZ(Pair(1, 2), EMPTY), ElemZ(BOT, V_ZERO))


def _sample_points(rng: random.Random, n: int) -> list[XPoint]:
    return [(sample_elemz(rng), sample_elemz(rng)) for _ in range(n)]


def bc_failure_certificate(
    d1: ProductOpenZ | None = None,
    d2: ProductOpenZ | None = None,
    samples: int = 40,
    seed: int = 0,
) -> BCFailureReport:
    """Assemble the argument that the projections lack a supremum in ``C(Z x Z, Z)``.

    Items 1-3 are computed; item 4 is the concluding inference and only
    records which items it rests on; item 5 checks the constant functions
    bounding the function space.
    """
    from .certificates import validate_certificate

    rng = random.Random(seed)
    points = [SPOT_POINT, *_sample_points(rng, samples)]
    items = []

    # 1. projections are continuous: preimage of an open W is a product box
    evals: list[Evaluation] = []
    opens = [DEFAULT_D1, DEFAULT_D2, *(sample_product_open(rng) for _ in range(8))]
    whole = ProductOpenZ.of((FULL, PointwiseOpenX2.of(())))
    ok = True
    for w in opens:
        for x in points[:10]:
            for proj, box in ((Proj1(), (w, whole)), (Proj2(), (whole, w))):
                lhs = product_open_contains(w, eval_symbolic(proj, x))
                rhs = product_open_contains(box[0], x[0]) and product_open_contains(box[1], x[1])
                ok &= lhs == rhs
                evals.append(Evaluation("product_open_contains", (w, eval_symbolic(proj, x)), lhs))
    items.append(
        ReportItem(
            1,
            "the projections Z x Z -> Z are continuous for the product topology",
            "pass" if ok else "fail",
            {"opens_sampled": len(opens), "points_sampled": 10, "preimage_shape": "W x Z and Z x W"},
            evals,
        )
    )

    # 2. binary sup is the pointwise sup of the projections
    evals = []
    ok = True
    for x in points:
        p1, p2 = eval_symbolic(Proj1(), x), eval_symbolic(Proj2(), x)
        s = eval_symbolic(Sup2(), x)
        agrees = s == sup2(p1, p2) and leqZ(p1, s) and leqZ(p2, s)
        ok &= agrees
        evals.append(Evaluation("eval_agreement", (Sup2(), x, sup2(p1, p2)), s == sup2(p1, p2)))
    spot = eval_symbolic(Sup2(), SPOT_POINT)
    ok &= spot == ElemZ(Pair(1, 2), V_ZERO)
    items.append(
        ReportItem(
            2,
            "binary sup is the pointwise supremum of the two projections",
            "pass" if ok else "fail",
            {"points_sampled": len(points), "spot_check": "sup2 at ((1,2),EMPTY),(BOT,V_0) is ((1,2),V_0)"},
            evals,
        )
    )

    # 3. binary sup is not continuous: a refuted candidate box
    cert = refute_sup2_box(d1 or DEFAULT_D1, d2 or DEFAULT_D2)
    verdict = validate_certificate(cert)
    items.append(
        ReportItem(
            3,
            "binary sup is not continuous from the product topology on Z x Z",
            "pass" if verdict.ok else "fail",
            {"certificate_valid": verdict.ok, "chain_index": cert.chain_index},
        )
    )

    # 4. concluding inference
    premises_ok = all(item.status == "pass" for item in items)
    items.append(
        ReportItem(
            4,
            "the projections have no supremum in C(Z x Z, Z); that function space is not bounded complete",
            "pass" if premises_ok else "fail",
            {
                "kind": "inference",
                "rule": "two maps into a complete lattice have a supremum iff their pointwise supremum is continuous",
                "from_items": [1, 2, 3],
            },
        )
    )

    # 5. the constants bound C(X, Z) and give it a least element
    evals = []
    ok = True
    for x in points:
        lo, hi = eval_symbolic(ConstFn(BOT_Z), x), eval_symbolic(ConstFn(TOP_Z), x)
        for f in (Proj1(), Proj2()):
            v = eval_symbolic(f, x)
            ok &= leqZ(lo, v) and leqZ(v, hi)
        evals.append(Evaluation("leqZ", (lo, x[0]), leqZ(lo, x[0])))
        evals.append(Evaluation("leqZ", (x[1], hi), leqZ(x[1], hi)))
    items.append(
        ReportItem(
            5,
            "C(Z x Z, Z) is bounded and has a least element (the constant maps)",
            "pass" if ok else "fail",
            {"points_sampled": len(points)},
            evals,
        )
    )
    return BCFailureReport(items, cert)


def step_function_bounds_hold(x0: XPoint, points: Iterable[XPoint]) -> bool:
    """The step function at ``x0`` dominates both projections and meets their sup at ``x0``."""
    s = step_function(Proj1(), Proj2(), x0)
    if eval_symbolic(s, x0) != sup2(*x0):
        return False
    for x in points:
        v = eval_symbolic(s, x)
        if not (leqZ(eval_symbolic(Proj1(), x), v) and leqZ(eval_symbolic(Proj2(), x), v)):
            return False
    return True


def closure_contains_down_set(x0: XPoint, x: XPoint, opens: Iterable[tuple[ProductOpenZ, ProductOpenZ]]) -> bool:
    """For ``x <= x0``: every sampled open box around ``x`` also holds ``x0``."""
    for d1, d2 in opens:
        if product_open_contains(d1, x[0]) and product_open_contains(d2, x[1]):
            if not (product_open_contains(d1, x0[0]) and product_open_contains(d2, x0[1])):
                return False
    return True
