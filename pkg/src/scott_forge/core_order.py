"""Finite posets and brute-force order oracles.

Everything here works on explicitly enumerated carriers and serves as the
exhaustive reference against which the symbolic lattices are checked.
Element ids are opaque strings; enumeration output is ordered
lexicographically by id.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import InitVar, dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

#: Largest carrier for which upper sets are enumerated.
OPEN_ENUM_BOUND = 12
#: Largest carrier for exhaustive enumeration of maps.
MAP_ENUM_BOUND = 5


class PosetAxiomError(ValueError):
    """Raised when a relation fails to be a partial order."""

    def __init__(self, report: "AxiomReport"):
        self.report = report
        super().__init__(report.describe())


class SizeBoundError(ValueError):
    """Raised when an exhaustive enumeration would exceed its configured bound."""


@dataclass(frozen=True)
class AxiomReport:
    reflexive: bool
    transitive: bool
    antisymmetric: bool
    # axiom name -> offending element ids
    witnesses: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.reflexive and self.transitive and self.antisymmetric

    def describe(self) -> str:
        if self.ok:
            return "partial order: all axioms hold"
        parts = [f"{axiom} violated by {wit!r}" for axiom, wit in self.witnesses.items()]
        return "; ".join(parts)


def _matrix_axioms(elements: Sequence[str], m: np.ndarray) -> AxiomReport:
    witnesses: dict[str, tuple[str, ...]] = {}
    diag = np.diag(m)
    reflexive = bool(diag.all())
    if not reflexive:
        a = int(np.flatnonzero(~diag)[0])
        witnesses["reflexivity"] = (elements[a],)

    # x <= y and y <= x with x != y
    sym = m & m.T
    np.fill_diagonal(sym, False)
    antisymmetric = not sym.any()
    if not antisymmetric:
        a, b = (int(v) for v in np.argwhere(sym)[0])
        witnesses["antisymmetry"] = (elements[a], elements[b])

    composed = (m.astype(np.int64) @ m.astype(np.int64)) > 0
    broken = composed & ~m
    transitive = not broken.any()
    if not transitive:
        a, c = (int(v) for v in np.argwhere(broken)[0])
        b = int(np.flatnonzero(m[a] & m[:, c])[0])
        witnesses["transitivity"] = (elements[a], elements[b], elements[c])
    return AxiomReport(reflexive, transitive, antisymmetric, witnesses)


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """A finite carrier with a dense boolean order matrix.

    ``matrix[a, b]`` is true iff ``elements[a] <= elements[b]``.  The
    relation is validated on construction and never repaired: a
    non-transitive input raises :class:`PosetAxiomError` instead of being
    closed.
    """

    elements: tuple[str, ...]
    matrix: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check: bool) -> None:
        elements = tuple(self.elements)
        if len(set(elements)) != len(elements):
            raise ValueError("duplicate element ids")
        m = np.array(self.matrix, dtype=bool)
        n = len(elements)
        if m.shape != (n, n):
            raise ValueError(f"order matrix must be {n}x{n}, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "matrix", m)
        if check:
            report = _matrix_axioms(elements, m)
            if not report.ok:
                raise PosetAxiomError(report)

    # -- construction ---------------------------------------------------

    @classmethod
    def from_relation(cls, elements: Iterable[str], leq: Callable[[Any, Any], bool]) -> "FinitePoset":
        els = sorted(elements)
        m = np.array([[bool(leq(a, b)) for b in els] for a in els], dtype=bool).reshape(len(els), len(els))
        return cls(tuple(els), m)

    @classmethod
    def from_pairs(cls, elements: Iterable[str], pairs: Iterable[Sequence[str]], check: bool = True) -> "FinitePoset":
        els = sorted(elements)
        idx = {e: k for k, e in enumerate(els)}
        m = np.zeros((len(els), len(els)), dtype=bool)
        for pair in pairs:
            if len(pair) != 2:
                raise ValueError(f"leq entry must be a pair, got {pair!r}")
            a, b = pair
            if a not in idx or b not in idx:
                raise ValueError(f"leq entry {pair!r} mentions an unknown element")
            m[idx[a], idx[b]] = True
        return cls(tuple(els), m, check)

    @classmethod
    def chain(cls, *elements: str) -> "FinitePoset":
        rank = {e: k for k, e in enumerate(elements)}
        return cls.from_relation(elements, lambda a, b: rank[a] <= rank[b])

    @classmethod
    def antichain(cls, *elements: str) -> "FinitePoset":
        return cls.from_relation(elements, lambda a, b: a == b)

    # -- queries --------------------------------------------------------

    @cached_property
    def index(self) -> dict[str, int]:
        return {e: k for k, e in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash((self.elements, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"FinitePoset({len(self)} elements)"

    def leq(self, a: str, b: str) -> bool:
        return bool(self.matrix[self.index[a], self.index[b]])

    def up(self, a: str) -> list[str]:
        return [self.elements[k] for k in np.flatnonzero(self.matrix[self.index[a]])]

    def down(self, a: str) -> list[str]:
        return [self.elements[k] for k in np.flatnonzero(self.matrix[:, self.index[a]])]

    def mask(self, members: Iterable[str]) -> np.ndarray:
        v = np.zeros(len(self), dtype=bool)
        for x in members:
            v[self.index[x]] = True
        return v

    def subset(self, members: Iterable[str]) -> "FiniteSubset":
        return FiniteSubset(self, frozenset(members))

    def pairs(self) -> list[tuple[str, str]]:
        return [(self.elements[a], self.elements[b]) for a, b in np.argwhere(self.matrix)]

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "leq": [list(p) for p in self.pairs()]}


@dataclass(frozen=True)
class FiniteSubset:
    poset: FinitePoset
    members: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        stray = self.members - set(self.poset.elements)
        if stray:
            raise ValueError(f"not elements of the poset: {sorted(stray)}")

    def sorted(self) -> tuple[str, ...]:
        return tuple(sorted(self.members))


def load_poset(doc: Mapping[str, Any] | str) -> FinitePoset:
    """Build a poset from ``{"elements": [...], "leq": [[a, b], ...]}``.

    The relation must already be reflexive and transitive; failures raise
    :class:`PosetAxiomError` naming the axiom and its witnesses.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, Mapping) or "elements" not in doc or "leq" not in doc:
        raise ValueError('poset document needs "elements" and "leq"')
    elements = [str(e) for e in doc["elements"]]
    if not elements:
        raise ValueError("a poset needs at least one element")
    return FinitePoset.from_pairs(elements, [tuple(map(str, p)) for p in doc["leq"]])


def check_poset_axioms(p: FinitePoset) -> AxiomReport:
    return _matrix_axioms(p.elements, p.matrix)


def is_upper_set(s: FiniteSubset) -> bool:
    m = s.poset.mask(s.members)
    return not s.poset.matrix[m][:, ~m].any()


def is_lower_set(s: FiniteSubset) -> bool:
    m = s.poset.mask(s.members)
    return not s.poset.matrix[~m][:, m].any()


def is_directed(s: FiniteSubset) -> bool:
    if not s.members:
        return False
    p = s.poset
    members = s.sorted()
    for a, b in itertools.combinations(members, 2):
        if not any(p.leq(a, c) and p.leq(b, c) for c in members):
            return False
    return True


def upper_bounds(p: FinitePoset, members: Iterable[str]) -> list[str]:
    m = p.mask(members)
    ok = p.matrix[m].all(axis=0)
    return [p.elements[k] for k in np.flatnonzero(ok)]


def lower_bounds(p: FinitePoset, members: Iterable[str]) -> list[str]:
    m = p.mask(members)
    ok = p.matrix[:, m].all(axis=1)
    return [p.elements[k] for k in np.flatnonzero(ok)]


def _least(p: FinitePoset, candidates: list[str]) -> str | None:
    for c in candidates:
        if all(p.leq(c, d) for d in candidates):
            return c
    return None


def _greatest(p: FinitePoset, candidates: list[str]) -> str | None:
    for c in candidates:
        if all(p.leq(d, c) for d in candidates):
            return c
    return None


def brute_sup(s: FiniteSubset) -> str | None:
    return _least(s.poset, upper_bounds(s.poset, s.members))


def brute_inf(s: FiniteSubset) -> str | None:
    return _greatest(s.poset, lower_bounds(s.poset, s.members))


def brute_inf_via_sup(s: FiniteSubset) -> str | None:
    """Infimum computed as the supremum of all lower bounds."""
    lows = lower_bounds(s.poset, s.members)
    return brute_sup(s.poset.subset(lows))


def is_lattice(p: FinitePoset) -> bool:
    for a, b in itertools.combinations_with_replacement(p.elements, 2):
        s = p.subset((a, b))
        if brute_sup(s) is None or brute_inf(s) is None:
            return False
    return True


def is_complete_lattice(p: FinitePoset) -> bool:
    # finite and nonempty: binary joins/meets plus a bottom suffice
    return is_lattice(p) and brute_sup(p.subset(())) is not None


def is_bounded_complete(p: FinitePoset) -> bool:
    """Every subset with an upper bound has a supremum (exhaustive over subsets)."""
    for s in _powerset(p.elements):
        sub = p.subset(s)
        if upper_bounds(p, s) and brute_sup(sub) is None:
            return False
    return True


def _powerset(items: Sequence[str]) -> Iterator[tuple[str, ...]]:
    return itertools.chain.from_iterable(itertools.combinations(items, r) for r in range(len(items) + 1))


def upper_set_masks(p: FinitePoset, bound: int = OPEN_ENUM_BOUND) -> list[np.ndarray]:
    """All upper sets as boolean masks over ``p.elements``."""
    if len(p) > bound:
        raise SizeBoundError(f"{len(p)} elements exceeds open-set enumeration bound {bound}")
    # decide elements from the top down: x may join only once all of up(x) has
    n = len(p)
    counts = p.matrix.sum(axis=1)
    order = sorted(range(n), key=lambda k: counts[k])
    strict_up = [np.flatnonzero(p.matrix[k] & (np.arange(n) != k)) for k in range(n)]
    out: list[np.ndarray] = []
    chosen = np.zeros(n, dtype=bool)

    def go(pos: int) -> None:
        if pos == n:
            out.append(chosen.copy())
            return
        k = order[pos]
        go(pos + 1)
        if chosen[strict_up[k]].all():
            chosen[k] = True
            go(pos + 1)
            chosen[k] = False

    go(0)
    return out


def scott_opens_finite(p: FinitePoset, bound: int = OPEN_ENUM_BOUND) -> list[FiniteSubset]:
    """The Scott topology of a finite poset, which is exactly its upper sets.

    A finite directed set contains its own supremum, so inaccessibility by
    directed suprema holds for every upper set.
    """
    subsets = [tuple(p.elements[k] for k in np.flatnonzero(m)) for m in upper_set_masks(p, bound)]
    return [p.subset(s) for s in sorted(subsets)]


def directed_sets_contain_sup(p: FinitePoset, bound: int = OPEN_ENUM_BOUND) -> bool:
    """Exhaustive check that each directed subset owns its supremum."""
    if len(p) > bound:
        raise SizeBoundError(f"{len(p)} elements exceeds bound {bound}")
    for s in _powerset(p.elements):
        sub = p.subset(s)
        if is_directed(sub):
            top = brute_sup(sub)
            if top is None or top not in sub.members:
                return False
    return True


def pair_id(a: str, b: str) -> str:
    return f"({a},{b})"


def product_poset(p: FinitePoset, q: FinitePoset) -> FinitePoset:
    """Cartesian product with the componentwise order; ids via :func:`pair_id`."""
    ids = [pair_id(a, b) for a in p.elements for b in q.elements]
    m = np.kron(p.matrix.astype(np.uint8), q.matrix.astype(np.uint8)).astype(bool)
    order = sorted(range(len(ids)), key=ids.__getitem__)
    if len(set(ids)) != len(ids):
        raise ValueError("product ids collide; choose element ids without ambiguous separators")
    return FinitePoset(tuple(ids[k] for k in order), m[np.ix_(order, order)])


def product_components(p: FinitePoset, q: FinitePoset) -> dict[str, tuple[str, str]]:
    return {pair_id(a, b): (a, b) for a in p.elements for b in q.elements}


@dataclass(frozen=True)
class FiniteMap:
    domain: FinitePoset
    codomain: FinitePoset
    table: Mapping[str, str]

    def __post_init__(self) -> None:
        table = dict(self.table)
        if set(table) != set(self.domain.elements):
            raise ValueError("map must be total on its domain")
        for v in table.values():
            if v not in self.codomain:
                raise ValueError(f"value {v!r} is not in the codomain")
        object.__setattr__(self, "table", table)

    def __call__(self, x: str) -> str:
        return self.table[x]

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, tuple(self.table[x] for x in self.domain)))

    def values(self) -> tuple[str, ...]:
        return tuple(self.table[x] for x in self.domain.elements)


def is_monotone(f: FiniteMap) -> bool:
    d, c = f.domain, f.codomain
    for a, b in d.pairs():
        if not c.leq(f(a), f(b)):
            return False
    return True


def preimage_mask(f: FiniteMap, target: np.ndarray) -> np.ndarray:
    cidx = f.codomain.index
    return np.array([target[cidx[f(x)]] for x in f.domain.elements], dtype=bool)


def is_scott_continuous_finite(f: FiniteMap, bound: int = OPEN_ENUM_BOUND) -> bool:
    """Preimage of every upper set of the codomain is an upper set of the domain."""
    dm = f.domain.matrix
    for target in upper_set_masks(f.codomain, bound):
        pre = preimage_mask(f, target)
        if dm[pre][:, ~pre].any():
            return False
    return True


def enumerate_maps(x: FinitePoset, z: FinitePoset, bound: int = MAP_ENUM_BOUND) -> Iterator[FiniteMap]:
    """Every total map x -> z, lexicographic in the value tuple."""
    if len(x) > bound or len(z) > bound:
        raise SizeBoundError(f"map enumeration limited to carriers of size <= {bound}")
    for values in itertools.product(z.elements, repeat=len(x)):
        yield FiniteMap(x, z, dict(zip(x.elements, values)))


def poset_catalog(max_size: int = 3) -> list[FinitePoset]:
    """All posets with 1..max_size elements up to isomorphism, deterministic order.

    Generated by filtering every relation on ``{"a", "b", ...}`` for the
    partial-order axioms and keeping the first representative of each
    isomorphism class.
    """
    if max_size > 4:
        raise SizeBoundError("catalog generation is exhaustive over relations; keep max_size <= 4")
    out: list[FinitePoset] = []
    for n in range(1, max_size + 1):
        names = [chr(ord("a") + k) for k in range(n)]
        off = [(a, b) for a in range(n) for b in range(n) if a != b]
        seen: set[bytes] = set()
        for bits in itertools.product((False, True), repeat=len(off)):
            m = np.eye(n, dtype=bool)
            for (a, b), on in zip(off, bits):
                m[a, b] = on
            if not _matrix_axioms(names, m).ok:
                continue
            key = min(m[np.ix_(perm, perm)].tobytes() for perm in itertools.permutations(range(n)))
            if key in seen:
                continue
            seen.add(key)
            out.append(FinitePoset(tuple(names), m))
    return out


def specialization_closure(p: FinitePoset, y: str, bound: int = OPEN_ENUM_BOUND) -> set[str]:
    """Topological closure of ``{y}`` under the upper-set topology, by scanning opens."""
    opens = upper_set_masks(p, bound)
    iy = p.index[y]
    return {x for ix, x in enumerate(p.elements) if all(o[iy] for o in opens if o[ix])}
