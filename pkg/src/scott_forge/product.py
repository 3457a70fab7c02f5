"""The product lattice ``Z = X1 x X2`` and the refutations built on it.

``X1`` is the modified Johnstone lattice and ``X2`` its lattice of Scott
opens under inclusion.  ``E`` is the membership relation
``{(x, O) : x in O}``: Scott open in ``Z`` but not a union of open boxes.
:func:`refute_e_box` turns any candidate box around ``((0,0), V_0)`` into
a concrete point of the box outside ``E``; :func:`refute_sup2_box` lifts
this to boxes in ``Z x Z`` and the preimage of ``E`` under binary sup.

Scott opens of ``X2`` are represented by :class:`PointwiseOpenX2`: finite
unions of families ``{O : F subset of O}`` for finite ``F``.  Such a family is
Scott open because a directed union containing the finite set ``F``
already has a single member containing ``F``.  Arbitrary opens can still
be probed through :func:`find_absorbing_index_oracle`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable

from . import core_order
from .core_order import FinitePoset
from .modjohnstone import BOT, TOP, ElemJ, Pair, elem_from_id, elem_id, leq1, sup_set, truncate
from .opens import (
    EMPTY,
    FULL,
    V_ZERO,
    ZERO,
    FnRep,
    Full,
    OpenJ,
    VSet,
    fn_eval,
    gi_chain,
    subset,
    union,
    vf_contains,
)

#: Default number of chain steps searched in oracle mode.
SEARCH_BOUND = 64


class InputError(ValueError):
    """Arguments violate an operation's precondition."""


class NotFoundError(LookupError):
    """No absorbing chain member within the search bound."""


@dataclass(frozen=True)
class ElemZ:
    first: ElemJ
    second: OpenJ


BOT_Z = ElemZ(BOT, EMPTY)
TOP_Z = ElemZ(TOP, FULL)
#: The distinguished point ``((0,0), V_0)`` of ``E``.
X1_POINT = Pair(0, 0)
X2_POINT = V_ZERO


def leqZ(a: ElemZ, b: ElemZ) -> bool:
    return leq1(a.first, b.first) and subset(a.second, b.second)


def sup2(a: ElemZ, b: ElemZ) -> ElemZ:
    return ElemZ(sup_set((a.first, b.first)), union(a.second, b.second))


def e_contains(z: ElemZ) -> bool:
    return vf_contains(z.second, z.first)


def _generator(members: Iterable[ElemJ]) -> frozenset:
    return frozenset(members)


@dataclass(frozen=True)
class PointwiseOpenX2:
    """Union over generators ``F`` of ``{O in X2 : F subset of O}``."""

    generators: tuple[frozenset, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(_generator(g) for g in self.generators))

    @classmethod
    def of(cls, *generators: Iterable[ElemJ]) -> "PointwiseOpenX2":
        return cls(tuple(_generator(g) for g in generators))

    def __add__(self, other: "PointwiseOpenX2") -> "PointwiseOpenX2":
        return PointwiseOpenX2(self.generators + other.generators)

    def has_vacuous_generator(self) -> bool:
        return any(not g for g in self.generators)


NOWHERE_X2 = PointwiseOpenX2()
EVERYWHERE_X2 = PointwiseOpenX2.of(())


def pointwise_contains(v: PointwiseOpenX2, o: OpenJ) -> bool:
    return any(all(vf_contains(o, x) for x in gen) for gen in v.generators)


@dataclass(frozen=True)
class Box:
    u: OpenJ
    v: PointwiseOpenX2


@dataclass(frozen=True)
class ProductOpenZ:
    """A finite union of boxes ``u x v``; open in the product topology on ``Z``."""

    boxes: tuple[Box, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "boxes", tuple(self.boxes))

    @classmethod
    def of(cls, *boxes: tuple[OpenJ, PointwiseOpenX2] | Box) -> "ProductOpenZ":
        return cls(tuple(b if isinstance(b, Box) else Box(*b) for b in boxes))


def product_open_contains(d: ProductOpenZ, z: ElemZ) -> bool:
    return any(vf_contains(b.u, z.first) and pointwise_contains(b.v, z.second) for b in d.boxes)


# -- chain absorption -------------------------------------------------------


def find_absorbing_index(f: FnRep, v: PointwiseOpenX2, bound: int = SEARCH_BOUND) -> int:
    """Least ``i <= bound`` with ``V_{g_i}`` in ``v``.

    ``v`` must contain ``V_0``, the union of the chain.  A generator ``F``
    without bottom is met by ``V_{g_i}`` once ``i`` exceeds every column used
    in ``F``, so the search is total for bounds past that column.
    """
    if f.start != 0:
        raise InputError("chain function must start at column 0")
    if not pointwise_contains(v, V_ZERO):
        raise InputError("v does not contain V_0, the union of the chain")
    for i in range(bound + 1):
        if pointwise_contains(v, gi_chain(f, i)):
            return i
    raise NotFoundError(f"no chain member within {bound} steps lies in v")


def absorbing_index_upper_bound(v: PointwiseOpenX2) -> int | None:
    """Index guaranteed to succeed, from the cheapest bottom-free generator."""
    best = None
    for gen in v.generators:
        if BOT in gen:
            continue
        cols = [x.i for x in gen if isinstance(x, Pair)]
        need = max(cols) + 1 if cols else 0
        best = need if best is None else min(best, need)
    return best


class OracleOutcome(enum.Enum):
    FOUND = "found"
    NOT_ABSORBED = "not-absorbed"
    BOUND_EXCEEDED = "bound-exceeded"


@dataclass(frozen=True)
class OracleResult:
    outcome: OracleOutcome
    index: int | None = None
    steps: int = 0


def find_absorbing_index_oracle(
    f: FnRep, member: Callable[[OpenJ], bool], bound: int = SEARCH_BOUND
) -> OracleResult:
    """Chain search against a caller-supplied family of opens.

    ``NOT_ABSORBED`` means ``member`` rejects ``V_0``, so nothing is owed.
    ``BOUND_EXCEEDED`` means ``V_0`` is accepted but no ``V_{g_i}`` with
    ``i <= bound`` is; a Scott-open family would eventually accept one.
    """
    if f.start != 0:
        raise InputError("chain function must start at column 0")
    if not member(V_ZERO):
        return OracleResult(OracleOutcome.NOT_ABSORBED)
    for i in range(bound + 1):
        if member(gi_chain(f, i)):
            return OracleResult(OracleOutcome.FOUND, i, i + 1)
    return OracleResult(OracleOutcome.BOUND_EXCEEDED, None, bound + 1)


# -- certificates -----------------------------------------------------------


class Target(str, enum.Enum):
    E_NOT_PRODUCT_OPEN = "E-not-product-open"
    SUP_DISCONTINUOUS = "sup-discontinuous"
    BC_FAILURE = "bc-failure"


@dataclass(frozen=True)
class Evaluation:
    """One recorded call of a whitelisted primitive and its outcome."""

    check: str
    args: tuple
    result: bool


@dataclass(frozen=True)
class RefutationCertificate:
    target: Target
    box: Any
    fn: FnRep
    chain_index: int
    chain_member: OpenJ
    witness: ElemZ
    evaluations: tuple[Evaluation, ...]
    # sup-discontinuity only: the point of d1 x d2 and the slices it came from
    witness_pair: tuple[ElemZ, ElemZ] | None = None
    slices: tuple[OpenJ, PointwiseOpenX2] | None = None


def witness_fn(u: OpenJ) -> FnRep:
    """Threshold function used to pick the escaping point of ``u``.

    ``FULL`` is treated like ``V_0``: only a point of ``u`` outside
    ``V_{g_i}`` is needed, and ``(i, 0)`` is one.
    """
    if isinstance(u, Full):
        return ZERO
    if isinstance(u, VSet) and u.f.start == 0:
        return u.f
    raise InputError(f"u must be FULL or a V_f with f.start == 0, got {u!r}")


def e_box_evaluations(u: OpenJ, v: PointwiseOpenX2, witness: ElemZ) -> tuple[Evaluation, ...]:
    """Checks recorded in an E-box certificate, in canonical order.

    The first three are the refutation proper; the last two record whether
    the box sits around the distinguished point.
    """
    x, member = witness.first, witness.second
    return (
        Evaluation("e_contains", (witness,), e_contains(witness)),
        Evaluation("vf_contains", (u, x), vf_contains(u, x)),
        Evaluation("pointwise_contains", (v, member), pointwise_contains(v, member)),
        Evaluation("vf_contains", (u, X1_POINT), vf_contains(u, X1_POINT)),
        Evaluation("pointwise_contains", (v, X2_POINT), pointwise_contains(v, X2_POINT)),
    )


def refute_e_box(
    u: OpenJ, v: PointwiseOpenX2, bound: int = SEARCH_BOUND, require_anchor: bool = True
) -> RefutationCertificate:
    """A point of ``u x v`` outside ``E``, for a box around ``((0,0), V_0)``.

    Chain search gives ``V_{g_i}`` in ``v``; ``(i, f(i))`` lies in ``u`` but
    below the threshold ``g_i(i) = f(i) + 1``.  With ``require_anchor=False``
    the box need not contain ``(0,0)`` in its first factor, only a threshold
    function starting at column 0.
    """
    if require_anchor and not vf_contains(u, X1_POINT):
        raise InputError("u must contain (0,0)")
    if not pointwise_contains(v, X2_POINT):
        raise InputError("v must contain V_0")
    f = witness_fn(u)
    i = find_absorbing_index(f, v, bound)
    member = gi_chain(f, i)
    witness = ElemZ(Pair(i, fn_eval(f, i)), member)
    return RefutationCertificate(
        target=Target.E_NOT_PRODUCT_OPEN,
        box=Box(u, v),
        fn=f,
        chain_index=i,
        chain_member=member,
        witness=witness,
        evaluations=e_box_evaluations(u, v, witness),
    )


def slice_opens(d1: ProductOpenZ, d2: ProductOpenZ) -> tuple[OpenJ, PointwiseOpenX2]:
    """``E1 = {x : (x, EMPTY) in d1}`` and ``E2 = {y : (BOT, y) in d2}``.

    Exact: ``EMPTY`` lies in ``v`` iff ``v`` has a vacuous generator, and
    ``BOT`` lies in ``u`` iff ``u`` is ``FULL``.
    """
    if not product_open_contains(d1, ElemZ(X1_POINT, EMPTY)):
        raise InputError("d1 must contain ((0,0), EMPTY)")
    if not product_open_contains(d2, ElemZ(BOT, X2_POINT)):
        raise InputError("d2 must contain (BOT, V_0)")
    e1: OpenJ = EMPTY
    for b in d1.boxes:
        if b.v.has_vacuous_generator():
            e1 = union(e1, b.u)
    e2 = NOWHERE_X2
    for b in d2.boxes:
        if isinstance(b.u, Full):
            e2 = e2 + b.v
    return e1, e2


def sup2_box_evaluations(
    d1: ProductOpenZ, d2: ProductOpenZ, z1: ElemZ, z2: ElemZ, image: ElemZ
) -> tuple[Evaluation, ...]:
    return (
        Evaluation("e_contains", (image,), e_contains(image)),
        Evaluation("product_open_contains", (d1, z1), product_open_contains(d1, z1)),
        Evaluation("product_open_contains", (d2, z2), product_open_contains(d2, z2)),
        Evaluation("sup2_eq", (z1, z2, image), sup2(z1, z2) == image),
        Evaluation("product_open_contains", (d1, ElemZ(X1_POINT, EMPTY)), product_open_contains(d1, ElemZ(X1_POINT, EMPTY))),
        Evaluation("product_open_contains", (d2, ElemZ(BOT, X2_POINT)), product_open_contains(d2, ElemZ(BOT, X2_POINT))),
    )


def refute_sup2_box(d1: ProductOpenZ, d2: ProductOpenZ, bound: int = SEARCH_BOUND) -> RefutationCertificate:
    """A pair in ``d1 x d2`` whose binary sup leaves ``E``."""
    e1, e2 = slice_opens(d1, d2)
    inner = refute_e_box(e1, e2, bound)
    x = inner.witness.first
    member = inner.chain_member
    z1, z2 = ElemZ(x, EMPTY), ElemZ(BOT, member)
    image = sup2(z1, z2)
    evaluations = sup2_box_evaluations(d1, d2, z1, z2, image)
    return RefutationCertificate(
        target=Target.SUP_DISCONTINUOUS,
        box=(d1, d2),
        fn=inner.fn,
        chain_index=inner.chain_index,
        chain_member=member,
        witness=image,
        evaluations=evaluations,
        witness_pair=(z1, z2),
        slices=(e1, e2),
    )


DEFAULT_D1 = ProductOpenZ.of((V_ZERO, EVERYWHERE_X2))
DEFAULT_D2 = ProductOpenZ.of((FULL, PointwiseOpenX2.of([X1_POINT])))


# -- finite-scale checks ----------------------------------------------------


@dataclass(frozen=True)
class FiniteCheckReport:
    name: str
    passed: bool
    size: int
    detail: dict = field(default_factory=dict)


def open_set_poset(p: FinitePoset, bound: int = core_order.OPEN_ENUM_BOUND) -> tuple[FinitePoset, dict[str, frozenset]]:
    """Upper sets of ``p`` ordered by inclusion, ids ``{a|b|...}``."""
    opens = core_order.scott_opens_finite(p, bound)
    ids = {"{" + "|".join(o.sorted()) + "}": o.members for o in opens}
    poset = FinitePoset.from_relation(ids, lambda a, b: ids[a] <= ids[b])
    return poset, ids


def check_e_scott_open_finite(n: int, bound: int = core_order.OPEN_ENUM_BOUND) -> FiniteCheckReport:
    """On ``truncate(n)`` times its open-set lattice, ``E`` is an upper set."""
    x1 = truncate(n)
    x2, members = open_set_poset(x1, bound)
    z = core_order.product_poset(x1, x2)
    comps = core_order.product_components(x1, x2)
    e = {zid for zid, (a, o) in comps.items() if a in members[o]}
    passed = core_order.is_upper_set(z.subset(e))
    return FiniteCheckReport(
        "E is Scott open (finite)",
        passed,
        len(z),
        {"x1": len(x1), "x2": len(x2), "e": len(e)},
    )


def sup_map_finite(n: int) -> core_order.FiniteMap:
    t = truncate(n)
    sq = core_order.product_poset(t, t)
    comps = core_order.product_components(t, t)
    table = {zid: elem_id(sup_set((elem_from_id(a), elem_from_id(b)))) for zid, (a, b) in comps.items()}
    return core_order.FiniteMap(sq, t, table)


def check_sup_scott_continuous_finite(n: int, bound: int = 16) -> FiniteCheckReport:
    """Binary sup on ``truncate(n)^2`` pulls every upper set back to an upper set."""
    f = sup_map_finite(n)
    passed = core_order.is_scott_continuous_finite(f, bound)
    return FiniteCheckReport(
        "binary sup is Scott continuous (finite)",
        passed,
        len(f.domain),
        {"opens_checked": len(core_order.upper_set_masks(f.codomain, bound))},
    )
