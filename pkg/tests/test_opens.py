import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scott_forge.modjohnstone import BOT, OMEGA, TOP, Column, OmegaRow, Pair, chain_sup, leq1
from scott_forge.opens import (
    EMPTY,
    FULL,
    V_ZERO,
    ZERO,
    DomainError,
    FnRep,
    PreconditionError,
    VSet,
    chain_union_check,
    column_absorber,
    fn_eval,
    gi_chain,
    intersect,
    omega_row_absorber,
    reconstruct,
    subset,
    union,
    vf_contains,
)

from strategies import elems, fnreps, fnreps0, opens_j


def _scale(*opens):
    """Columns and heights beyond which every representable open is constant."""
    cols, vals = [0], [0]
    for o in opens:
        if isinstance(o, VSet):
            cols += [o.f.start, o.f.end]
            vals += [*o.f.prefix, o.f.tail]
    return max(cols) + 2, max(vals) + 2


def grid(*opens):
    cols, height = _scale(*opens)
    yield BOT
    yield TOP
    for i in range(cols + 1):
        for j in [*range(height + 1), OMEGA]:
            yield Pair(i, j)


def brute_subset(a, b):
    return all(vf_contains(b, x) for x in grid(a, b) if vf_contains(a, x))


# -- representation -------------------------------------------------------------


def test_fn_eval_examples():
    assert fn_eval(ZERO, 7) == 0
    f = FnRep(0, (0, 0), 1)
    assert fn_eval(f, 1) == 0 and fn_eval(f, 5) == 1
    with pytest.raises(DomainError):
        fn_eval(FnRep(3, (), 0), 2)


def test_canonical_trimming():
    assert FnRep(0, (4, 1, 1), 1) == FnRep(0, (4,), 1)
    assert FnRep(0, (0, 0), 0).prefix == ()
    with pytest.raises(ValueError):
        FnRep(0, (-1,), 0)


def test_membership_examples():
    assert vf_contains(V_ZERO, Pair(0, 0))
    assert not vf_contains(V_ZERO, BOT)
    assert vf_contains(VSet(FnRep(5, (9,), 9)), TOP)
    assert not vf_contains(VSet(FnRep(2, (), 0)), Pair(1, 5))
    assert not vf_contains(EMPTY, TOP) and vf_contains(FULL, BOT)


@given(fnreps)
def test_every_vset_contains_top_not_bottom(f):
    assert vf_contains(VSet(f), TOP)
    assert not vf_contains(VSet(f), BOT)


# -- inclusion and lattice operations ---------------------------------------------


def test_subset_examples():
    g1 = gi_chain(ZERO, 1)
    assert subset(EMPTY, g1) and subset(g1, FULL)
    assert subset(g1, V_ZERO)
    assert not subset(V_ZERO, g1)
    assert brute_subset(g1, V_ZERO) and not brute_subset(V_ZERO, g1)


def test_subset_agrees_with_membership_on_random_pairs():
    rng = random.Random(1234)

    def rand_open():
        r = rng.random()
        if r < 0.05:
            return EMPTY
        if r < 0.1:
            return FULL
        prefix = tuple(rng.randint(0, 4) for _ in range(rng.randint(0, 4)))
        return VSet(FnRep(rng.randint(0, 3), prefix, rng.randint(0, 4)))

    for _ in range(200):
        a, b = rand_open(), rand_open()
        assert subset(a, b) == brute_subset(a, b)


@settings(max_examples=300)
@given(opens_j, opens_j)
def test_union_and_intersection_are_exact(a, b):
    u, n = union(a, b), intersect(a, b)
    for x in grid(a, b):
        assert vf_contains(u, x) == (vf_contains(a, x) or vf_contains(b, x))
        assert vf_contains(n, x) == (vf_contains(a, x) and vf_contains(b, x))


def test_union_intersection_examples():
    g2 = gi_chain(ZERO, 2)
    assert union(g2, EMPTY) == g2
    assert union(V_ZERO, g2) == V_ZERO
    assert intersect(g2, FULL) == g2
    assert intersect(V_ZERO, g2) == g2


def test_union_membership_on_sampled_points():
    rng = random.Random(7)
    a, b = VSet(FnRep(1, (3, 0, 2), 1)), VSet(FnRep(0, (5, 5), 0))
    u = union(a, b)
    for _ in range(500):
        x = Pair(rng.randint(0, 8), OMEGA if rng.random() < 0.1 else rng.randint(0, 7))
        assert vf_contains(u, x) == (vf_contains(a, x) or vf_contains(b, x))


@given(opens_j, opens_j, opens_j)
def test_lattice_laws(a, b, c):
    assert union(a, b) == union(b, a) and intersect(a, b) == intersect(b, a)
    assert union(a, a) == a and intersect(a, a) == a
    assert union(union(a, b), c) == union(a, union(b, c))
    assert intersect(intersect(a, b), c) == intersect(a, intersect(b, c))
    assert union(a, intersect(a, b)) == a and intersect(a, union(a, b)) == a
    assert subset(a, b) == (union(a, b) == b)


@given(opens_j, opens_j)
def test_inclusion_is_antisymmetric(a, b):
    if subset(a, b) and subset(b, a):
        assert a == b


# -- Scott openness ---------------------------------------------------------------


@given(opens_j, elems, st.lists(elems, max_size=20))
def test_upward_closure(o, x, candidates):
    if vf_contains(o, x):
        for y in candidates:
            if leq1(x, y):
                assert vf_contains(o, y)


def test_upward_closure_exhaustive_on_grid():
    samples = [V_ZERO, VSet(FnRep(2, (3, 1), 2)), VSet(FnRep(0, (4, 0, 6), 1)), FULL, EMPTY]
    for o in samples:
        pts = list(grid(o))
        for x, y in itertools.product(pts, repeat=2):
            if vf_contains(o, x) and leq1(x, y):
                assert vf_contains(o, y)


@given(fnreps)
def test_chain_families_are_absorbed(f):
    o = VSet(f)
    for i in range(f.end + 3):
        sup_in = vf_contains(o, chain_sup(Column(i)))
        member = column_absorber(o, i)
        assert (member is not None) == sup_in
        if member is not None:
            assert vf_contains(o, member) and member in Column(i).prefix(member.j + 1)
    row = omega_row_absorber(o)
    assert vf_contains(o, chain_sup(OmegaRow()))
    assert row == Pair(f.start, OMEGA) and vf_contains(o, row)


@given(opens_j)
def test_normal_form_reconstruction(o):
    assert reconstruct(o) == o


# -- the g_i chain ----------------------------------------------------------------


def test_gi_chain_examples():
    g2 = gi_chain(ZERO, 2)
    assert g2 == VSet(FnRep(0, (0, 0), 1))
    assert vf_contains(g2, Pair(1, 0))
    assert not vf_contains(g2, Pair(2, 0))
    assert vf_contains(g2, Pair(2, 1))


def test_gi_chain_needs_start_zero():
    with pytest.raises(PreconditionError):
        gi_chain(FnRep(1, (), 0), 0)


@given(fnreps0)
def test_gi_chain_increases(f):
    for i in range(11):
        assert subset(gi_chain(f, i), gi_chain(f, i + 1))
        assert brute_subset(gi_chain(f, i), gi_chain(f, i + 1))


def test_chain_union_for_zero():
    report = chain_union_check(ZERO)
    assert report.verified
    assert report.witness_map[7] == 8
    # g_8(7) = 0 so the whole of column 7 is covered
    assert fn_eval(gi_chain(ZERO, 8).f, 7) == 0


def test_chain_union_for_another_function():
    f = FnRep(0, (3, 1), 2)
    report = chain_union_check(f)
    assert report.verified
    assert report.witness_map == {k: k + 1 for k in range(16)}
    for i, point in report.escapes.items():
        assert point == Pair(i, fn_eval(f, i))
        assert vf_contains(V_ZERO, point) and not vf_contains(gi_chain(f, i), point)


@given(fnreps0)
def test_chain_union_property(f):
    assert chain_union_check(f, steps=10).verified
