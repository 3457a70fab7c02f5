"""The modified Johnstone complete lattice.

Carrier: a bottom, a top, and pairs ``(i, j)`` with ``i`` a natural number
and ``j`` a natural number or :data:`OMEGA`.  Inside column ``i`` the pairs
form the chain ``(i,0) < (i,1) < ... < (i,omega)``; additionally every
pair of column ``i`` lies below ``(k, omega)`` whenever ``i <= k``.

The original Johnstone order is available as :func:`leq_johnstone` for
comparison only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .core_order import FinitePoset, SizeBoundError

#: Largest ``n`` accepted by :func:`truncate`.
TRUNCATE_BOUND = 6


class _Omega:
    """The point at infinity above every natural number."""

    _instance: "_Omega | None" = None

    def __new__(cls) -> "_Omega":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OMEGA"

    def __reduce__(self):
        return (_Omega, ())

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("omega")

    def __lt__(self, other: object) -> bool:
        if other is self or _is_nat(other):
            return False
        return NotImplemented

    def __le__(self, other: object) -> bool:
        if other is self:
            return True
        if _is_nat(other):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if other is self:
            return False
        if _is_nat(other):
            return True
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if other is self or _is_nat(other):
            return True
        return NotImplemented


OMEGA = _Omega()
NatOrOmega = Union[int, _Omega]


def _is_nat(v: object) -> bool:
    return isinstance(v, int) and not isinstance(v, bool) and v >= 0


def check_nat_or_omega(v: object) -> NatOrOmega:
    if v is OMEGA or _is_nat(v):
        return v  # type: ignore[return-value]
    raise ValueError(f"expected a natural number or OMEGA, got {v!r}")


@dataclass(frozen=True)
class Bot:
    def __repr__(self) -> str:
        return "BOT"


@dataclass(frozen=True)
class Top:
    def __repr__(self) -> str:
        return "TOP"


@dataclass(frozen=True)
class Pair:
    i: int
    j: NatOrOmega

    def __post_init__(self) -> None:
        if not _is_nat(self.i):
            raise ValueError(f"column index must be a natural number, got {self.i!r}")
        check_nat_or_omega(self.j)

    def __repr__(self) -> str:
        return f"Pair({self.i}, {self.j!r})"


BOT = Bot()
TOP = Top()
ElemJ = Union[Bot, Pair, Top]


def elem_key(x: ElemJ) -> tuple:
    """Deterministic sort key: bottom, pairs by column then height, top."""
    if isinstance(x, Bot):
        return (0,)
    if isinstance(x, Top):
        return (2,)
    return (1, x.i, (1, 0) if x.j is OMEGA else (0, x.j))


def leq1(x: ElemJ, y: ElemJ) -> bool:
    if isinstance(x, Bot) or isinstance(y, Top):
        return True
    if isinstance(x, Top) or isinstance(y, Bot):
        return False
    return (x.i == y.i and x.j <= y.j) or (x.i <= y.i and y.j is OMEGA)


def sup_set(s: Iterable[ElemJ]) -> ElemJ:
    """Least upper bound of a finite set.

    Finite inputs reach the top only by containing it; an unbounded
    family of columns needs :func:`chain_sup` with :class:`OmegaRow`.
    """
    pairs = []
    for x in s:
        if isinstance(x, Top):
            return TOP
        if isinstance(x, Pair):
            pairs.append(x)
    if not pairs:
        return BOT
    columns = {p.i for p in pairs}
    if len(columns) == 1:
        return Pair(pairs[0].i, max(p.j for p in pairs))
    return Pair(max(columns), OMEGA)


def inf_set(s: Iterable[ElemJ]) -> ElemJ:
    finite: list[Pair] = []
    omega_cols: list[int] = []
    for x in s:
        if isinstance(x, Bot):
            return BOT
        if isinstance(x, Pair):
            if x.j is OMEGA:
                omega_cols.append(x.i)
            else:
                finite.append(x)
    if not finite and not omega_cols:
        return TOP
    if not finite:
        return Pair(min(omega_cols), OMEGA)
    cols = {p.i for p in finite}
    if len(cols) > 1:
        return BOT
    (c,) = cols
    # the down-set of (w, omega) meets column c only when c <= w
    if omega_cols and c > min(omega_cols):
        return BOT
    return Pair(c, min(p.j for p in finite))


def join(x: ElemJ, y: ElemJ) -> ElemJ:
    return sup_set((x, y))


def meet(x: ElemJ, y: ElemJ) -> ElemJ:
    return inf_set((x, y))


@dataclass(frozen=True)
class Column:
    """The directed chain ``{(i, 0), (i, 1), ...}``."""

    i: int

    def prefix(self, k: int) -> list[Pair]:
        return [Pair(self.i, j) for j in range(k)]


@dataclass(frozen=True)
class OmegaRow:
    """The directed chain ``{(0, omega), (1, omega), ...}``."""

    def prefix(self, k: int) -> list[Pair]:
        return [Pair(i, OMEGA) for i in range(k)]


@dataclass(frozen=True)
class FiniteFamily:
    members: frozenset

    def __init__(self, members: Iterable[ElemJ]):
        object.__setattr__(self, "members", frozenset(members))

    def prefix(self, k: int) -> list[ElemJ]:
        return sorted(self.members, key=elem_key)[:k]


ChainFamily = Union[Column, OmegaRow, FiniteFamily]


class RepresentationError(TypeError):
    """A value outside the symbolically supported families."""


def chain_sup(c: ChainFamily) -> ElemJ:
    if isinstance(c, Column):
        return Pair(c.i, OMEGA)
    if isinstance(c, OmegaRow):
        return TOP
    if isinstance(c, FiniteFamily):
        return sup_set(c.members)
    raise RepresentationError(f"unsupported chain family {c!r}")


@dataclass(frozen=True)
class JPoint:
    """A point of the original Johnstone space ``N x (N + {omega})``."""

    i: int
    j: NatOrOmega

    def __post_init__(self) -> None:
        if not _is_nat(self.i):
            raise ValueError(f"first coordinate must be a natural number, got {self.i!r}")
        check_nat_or_omega(self.j)


def leq_johnstone(x: JPoint, y: JPoint) -> bool:
    return (x.i == y.i and x.j <= y.j) or (y.j is OMEGA and x.j <= y.i)


def elem_id(x: ElemJ) -> str:
    if isinstance(x, Bot):
        return "bot"
    if isinstance(x, Top):
        return "top"
    return f"{x.i}:{'w' if x.j is OMEGA else x.j}"


def elem_from_id(s: str) -> ElemJ:
    if s == "bot":
        return BOT
    if s == "top":
        return TOP
    i, _, j = s.partition(":")
    return Pair(int(i), OMEGA if j == "w" else int(j))


def truncation_elements(n: int) -> list[ElemJ]:
    heights: list[NatOrOmega] = [*range(n + 1), OMEGA]
    return [BOT, *(Pair(i, j) for i in range(n + 1) for j in heights), TOP]


def truncate(n: int, bound: int = TRUNCATE_BOUND) -> FinitePoset:
    """Finite sub-lattice on columns and heights ``0..n`` plus omega, bottom and top.

    Ids come from :func:`elem_id`; decode with :func:`elem_from_id`.
    """
    if n < 0:
        raise ValueError("n must be a natural number")
    if n > bound:
        raise SizeBoundError(f"truncate({n}) exceeds bound {bound}")
    ids = {elem_id(x): x for x in truncation_elements(n)}
    return FinitePoset.from_relation(ids, lambda a, b: leq1(ids[a], ids[b]))


@dataclass(frozen=True)
class OracleReport:
    n: int
    subsets: int
    sup_mismatches: tuple = ()
    inf_mismatches: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.sup_mismatches and not self.inf_mismatches


def lattice_oracle(n: int, max_size: int = 3) -> OracleReport:
    """Compare :func:`sup_set`/:func:`inf_set` with brute force on ``truncate(n)``.

    Every subset with at most ``max_size`` members is checked, including
    the empty one.
    """
    from itertools import combinations

    from . import core_order

    p = truncate(n)
    sup_bad, inf_bad = [], []
    count = 0
    for r in range(max_size + 1):
        for ids in combinations(p.elements, r):
            count += 1
            elems = [elem_from_id(s) for s in ids]
            sub = p.subset(ids)
            if elem_id(sup_set(elems)) != core_order.brute_sup(sub):
                sup_bad.append(ids)
            if elem_id(inf_set(elems)) != core_order.brute_inf(sub):
                inf_bad.append(ids)
    return OracleReport(n, count, tuple(sup_bad), tuple(inf_bad))


@dataclass(frozen=True)
class LawReport:
    n: int
    elements: int
    results: dict

    @property
    def passed(self) -> bool:
        return all(self.results.values())


def truncation_law_suite(n: int) -> LawReport:
    """Order axioms and lattice laws of ``leq1``/``join``/``meet`` on ``truncate(n)``, exhaustively."""
    from itertools import product

    from . import core_order

    p = truncate(n)
    els = truncation_elements(n)
    axioms = core_order.check_poset_axioms(p)
    results = {
        "reflexive": axioms.reflexive,
        "transitive": axioms.transitive,
        "antisymmetric": axioms.antisymmetric,
        "complete_lattice": core_order.is_complete_lattice(p),
        "join_commutative": True,
        "join_idempotent": True,
        "meet_commutative": True,
        "absorption": True,
        "join_associative": True,
        "meet_associative": True,
        "join_is_lub": True,
    }
    for a, b in product(els, repeat=2):
        results["join_commutative"] &= join(a, b) == join(b, a)
        results["meet_commutative"] &= meet(a, b) == meet(b, a)
        results["absorption"] &= join(a, meet(a, b)) == a and meet(a, join(a, b)) == a
        ab = join(a, b)
        results["join_is_lub"] &= leq1(a, ab) and leq1(b, ab) and all(
            leq1(ab, c) for c in els if leq1(a, c) and leq1(b, c)
        )
    for a in els:
        results["join_idempotent"] &= join(a, a) == a
    for a, b, c in product(els, repeat=3):
        results["join_associative"] &= join(join(a, b), c) == join(a, join(b, c))
        results["meet_associative"] &= meet(meet(a, b), c) == meet(a, meet(b, c))
    return LawReport(n, len(els), results)
