"""Representable Scott-open subsets of the modified Johnstone lattice.

Apart from the empty and the full set, every Scott open is ``V_f`` for a
threshold function ``f`` defined on the columns ``>= n``::

    V_f = {(i, j) : i >= n, j >= f(i)} + {top}

Only eventually constant ``f`` are represented (:class:`FnRep`).  That class
is closed under union, intersection and the shifted chain construction
:func:`gi_chain`, so all predicates below are decidable exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .modjohnstone import BOT, OMEGA, TOP, Bot, ElemJ, Pair, Top, _is_nat


class DomainError(ValueError):
    """Function evaluated outside its domain."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class FnRep:
    """``f(start + k) = prefix[k]`` inside the prefix and ``tail`` beyond it.

    Trailing prefix entries equal to ``tail`` are trimmed on construction, so
    two reps are equal exactly when they denote the same function.
    """

    start: int
    prefix: tuple[int, ...] = ()
    tail: int = 0

    def __post_init__(self) -> None:
        prefix = tuple(self.prefix)
        for v in (self.start, self.tail, *prefix):
            if not _is_nat(v):
                raise ValueError(f"FnRep fields must be natural numbers, got {v!r}")
        while prefix and prefix[-1] == self.tail:
            prefix = prefix[:-1]
        object.__setattr__(self, "prefix", prefix)

    @property
    def end(self) -> int:
        """First index served by the tail."""
        return self.start + len(self.prefix)

    def __call__(self, i: int) -> int:
        return fn_eval(self, i)


ZERO = FnRep(0, (), 0)


def fn_eval(f: FnRep, i: int) -> int:
    if i < f.start:
        raise DomainError(f"{i} is below the domain start {f.start}")
    k = i - f.start
    return f.prefix[k] if k < len(f.prefix) else f.tail


def fn_from_values(start: int, values: Iterable[int], tail: int) -> FnRep:
    return FnRep(start, tuple(values), tail)


@dataclass(frozen=True)
class Empty:
    def __repr__(self) -> str:
        return "EMPTY"


@dataclass(frozen=True)
class Full:
    def __repr__(self) -> str:
        return "FULL"


@dataclass(frozen=True)
class VSet:
    f: FnRep

    def __repr__(self) -> str:
        return f"VSet({self.f.start}, {list(self.f.prefix)}, {self.f.tail})"


EMPTY = Empty()
FULL = Full()
OpenJ = Union[Empty, Full, VSet]

V_ZERO = VSet(ZERO)


def vf_contains(o: OpenJ, x: ElemJ) -> bool:
    if isinstance(o, Empty):
        return False
    if isinstance(o, Full):
        return True
    if isinstance(x, Top):
        return True
    if isinstance(x, Bot):
        return False
    f = o.f
    return x.i >= f.start and x.j >= fn_eval(f, x.i)


def subset(a: OpenJ, b: OpenJ) -> bool:
    if isinstance(a, Empty) or isinstance(b, Full):
        return True
    if isinstance(b, Empty) or isinstance(a, Full):
        return False
    f, g = a.f, b.f
    if g.start > f.start:
        return False
    stop = max(f.end, g.end)
    return all(fn_eval(g, i) <= fn_eval(f, i) for i in range(f.start, stop + 1))


def union(a: OpenJ, b: OpenJ) -> OpenJ:
    if isinstance(a, Empty):
        return b
    if isinstance(b, Empty):
        return a
    if isinstance(a, Full) or isinstance(b, Full):
        return FULL
    f, g = a.f, b.f
    lo = min(f.start, g.start)
    stop = max(f.end, g.end)
    values = []
    for i in range(lo, stop):
        defined = [fn_eval(h, i) for h in (f, g) if i >= h.start]
        values.append(min(defined))
    return VSet(FnRep(lo, tuple(values), min(f.tail, g.tail)))


def intersect(a: OpenJ, b: OpenJ) -> OpenJ:
    if isinstance(a, Full):
        return b
    if isinstance(b, Full):
        return a
    if isinstance(a, Empty) or isinstance(b, Empty):
        return EMPTY
    f, g = a.f, b.f
    hi = max(f.start, g.start)
    stop = max(f.end, g.end, hi)
    values = [max(fn_eval(f, i), fn_eval(g, i)) for i in range(hi, stop)]
    return VSet(FnRep(hi, tuple(values), max(f.tail, g.tail)))


def union_all(opens: Iterable[OpenJ]) -> OpenJ:
    acc: OpenJ = EMPTY
    for o in opens:
        acc = union(acc, o)
    return acc


def gi_fn(f: FnRep, i: int) -> FnRep:
    if f.start != 0:
        raise PreconditionError(f"the chain needs a function on all of N, got start {f.start}")
    if not _is_nat(i):
        raise ValueError(f"chain index must be a natural number, got {i!r}")
    stop = max(i, f.end)
    values = [0 if m < i else fn_eval(f, m) + 1 for m in range(stop)]
    return FnRep(0, tuple(values), f.tail + 1)


def gi_chain(f: FnRep, i: int) -> VSet:
    """``V_g`` for ``g(m) = 0`` below ``i`` and ``f(m) + 1`` from ``i`` on."""
    return VSet(gi_fn(f, i))


@dataclass(frozen=True)
class ChainUnionReport:
    fn: FnRep
    steps: int
    increasing: bool
    below_v_zero: bool
    # i -> (i, f(i)), a point of V_0 missing from V_{g_i}
    escapes: dict[int, Pair] = field(default_factory=dict)
    strict: bool = True
    # column k -> chain index covering the whole column
    witness_map: dict[int, int] = field(default_factory=dict)
    covers: bool = True
    partial_union: OpenJ = EMPTY

    @property
    def verified(self) -> bool:
        return self.increasing and self.below_v_zero and self.strict and self.covers

    def witness_index(self, column: int) -> int:
        return column + 1


def chain_union_check(f: FnRep, steps: int = 16) -> ChainUnionReport:
    """Check that the ``g_i`` chain increases to exactly ``V_0``.

    Inclusion into ``V_0`` and monotonicity are decided for ``i < steps``.
    Coverage uses the witness ``k -> k + 1``: ``g_{k+1}(k) = 0``, so the
    whole column ``k`` lies in ``V_{g_{k+1}}``; this is checked for every
    column ``k < steps`` and holds for all ``k`` by the same computation.
    """
    if f.start != 0:
        raise PreconditionError("chain_union_check needs f.start == 0")
    chain = [gi_chain(f, i) for i in range(steps + 1)]
    increasing = all(subset(chain[i], chain[i + 1]) for i in range(steps))
    below = all(subset(c, V_ZERO) for c in chain)
    escapes = {}
    strict = True
    for i in range(steps):
        point = Pair(i, fn_eval(f, i))
        escapes[i] = point
        strict &= vf_contains(V_ZERO, point) and not vf_contains(chain[i], point)
    witness_map = {}
    covers = True
    for k in range(steps):
        idx = k + 1
        witness_map[k] = idx
        member = chain[idx] if idx < len(chain) else gi_chain(f, idx)
        covers &= vf_contains(member, Pair(k, 0)) and vf_contains(member, TOP)
    partial = union_all(chain)
    # the union of g_0..g_steps has threshold 0 on columns < steps
    covers &= all(vf_contains(partial, Pair(k, 0)) for k in range(steps))
    covers &= not vf_contains(partial, BOT)
    return ChainUnionReport(
        fn=f,
        steps=steps,
        increasing=increasing,
        below_v_zero=below,
        escapes=escapes,
        strict=strict,
        witness_map=witness_map,
        covers=covers,
        partial_union=partial,
    )


def column_absorber(o: OpenJ, i: int) -> Pair | None:
    """A member of the column chain ``{i} x N`` lying in ``o``, if its sup ``(i, omega)`` does."""
    if not vf_contains(o, Pair(i, OMEGA)):
        return None
    if isinstance(o, Full):
        return Pair(i, 0)
    return Pair(i, fn_eval(o.f, i))


def omega_row_absorber(o: OpenJ) -> Pair | None:
    """A member of ``N x {omega}`` lying in ``o``, if the row's sup (top) does."""
    if not vf_contains(o, TOP):
        return None
    if isinstance(o, Full):
        return Pair(0, OMEGA)
    return Pair(o.f.start, OMEGA)


def reconstruct(o: OpenJ, column_limit: int | None = None) -> OpenJ:
    """Rebuild the normal form of ``o`` from membership queries alone.

    The start is the least column reaching ``(n, omega)``; ``f(i)`` is the
    least ``j`` with ``(i, j)`` inside.  Columns are probed up to the prefix
    end and heights up to ``max(prefix) + tail + 1``.
    """
    if not vf_contains(o, TOP):
        return EMPTY
    if vf_contains(o, BOT):
        return FULL
    assert isinstance(o, VSet)
    f = o.f
    limit = column_limit if column_limit is not None else f.end + 1
    height = max(f.prefix, default=0) + f.tail + 1
    start = next(i for i in range(limit + 1) if vf_contains(o, Pair(i, OMEGA)))

    def least(i: int) -> int:
        return next(j for j in range(height + 1) if vf_contains(o, Pair(i, j)))

    values = [least(i) for i in range(start, max(limit, start))]
    return VSet(FnRep(start, tuple(values), least(max(limit, start))))


__all__ = [
    "BOT",
    "TOP",
    "ChainUnionReport",
    "DomainError",
    "EMPTY",
    "Empty",
    "FULL",
    "FnRep",
    "Full",
    "OpenJ",
    "PreconditionError",
    "VSet",
    "V_ZERO",
    "ZERO",
    "chain_union_check",
    "column_absorber",
    "fn_eval",
    "gi_chain",
    "gi_fn",
    "intersect",
    "omega_row_absorber",
    "reconstruct",
    "subset",
    "union",
    "union_all",
    "vf_contains",
]
