import itertools
import random

import pytest
from hypothesis import given, settings

from scott_forge import core_order as co
from scott_forge.core_order import FiniteMap, FinitePoset
from scott_forge.funcspace import (
    SPOT_POINT,
    ConstFn,
    ContinuousFnFinite,
    InputError,
    Proj1,
    Proj2,
    StepAt,
    Sup2,
    bc_failure_certificate,
    check_bounded_complete_finite,
    closure_contains_down_set,
    constant_fn,
    directed_sup_fn,
    enumerate_continuous_finite,
    eval_symbolic,
    leqC,
    leqX,
    least_upper_bound_in,
    pair_sup_matches_pointwise,
    pointwise_sup,
    sample_elemz,
    sample_product_open,
    step_function,
    step_function_bounds_hold,
)
from scott_forge.modjohnstone import BOT, Pair
from scott_forge.opens import EMPTY, V_ZERO
from scott_forge.product import BOT_Z, TOP_Z, ElemZ, leqZ, sup2

from strategies import elems_z

CATALOG = co.poset_catalog(3)


def _diamond():
    order = {("0", "l"), ("0", "r"), ("0", "1"), ("l", "1"), ("r", "1")}
    return FinitePoset.from_relation(["0", "l", "r", "1"], lambda a, b: a == b or (a, b) in order)


@pytest.fixture
def chain2():
    return FinitePoset.chain("a", "b")


def _directed(fam):
    return all(any(leqC(f, h) and leqC(g, h) for h in fam) for f, g in itertools.combinations(fam, 2))


# -- the function order ----------------------------------------------------------


def test_leqC_examples(chain2):
    maps = enumerate_continuous_finite(chain2, chain2)
    bottom = constant_fn(chain2, chain2, "a")
    assert all(leqC(f, f) for f in maps)
    assert all(leqC(bottom, f) for f in maps)
    anti = FinitePoset.antichain("p", "q")
    f = ContinuousFnFinite(anti, chain2, {"p": "a", "q": "b"})
    g = ContinuousFnFinite(anti, chain2, {"p": "b", "q": "a"})
    assert not leqC(f, g) and not leqC(g, f)


def test_self_maps_of_a_chain_form_a_chain(chain2):
    maps = enumerate_continuous_finite(chain2, chain2)
    assert all(leqC(f, g) or leqC(g, f) for f, g in itertools.combinations(maps, 2))


def test_leqC_rejects_mismatched_spaces(chain2):
    f = constant_fn(chain2, chain2, "a")
    g = constant_fn(FinitePoset.chain("x"), chain2, "a")
    with pytest.raises(InputError):
        leqC(f, g)


def test_continuous_maps_must_be_monotone(chain2):
    with pytest.raises(ValueError):
        ContinuousFnFinite(chain2, chain2, {"a": "b", "b": "a"})


def test_enumeration_counts(chain2):
    assert len(enumerate_continuous_finite(chain2, chain2)) == 3
    point = FinitePoset.chain("*")
    for z in CATALOG:
        assert len(enumerate_continuous_finite(point, z)) == len(z)
    assert len(enumerate_continuous_finite(FinitePoset.antichain("p", "q"), chain2)) == 4


def test_enumeration_matches_monotone_filter():
    for x, z in itertools.product(CATALOG, repeat=2):
        expected = sum(co.is_monotone(m) for m in co.enumerate_maps(x, z))
        assert len(enumerate_continuous_finite(x, z)) == expected


# -- suprema ---------------------------------------------------------------------


def test_directed_sup_examples(chain2):
    f = ContinuousFnFinite(chain2, chain2, {"a": "a", "b": "b"})
    bottom = constant_fn(chain2, chain2, "a")
    assert directed_sup_fn([f]).values() == f.values()
    assert directed_sup_fn([bottom, f]).values() == f.values()


def test_directed_sup_rejects_non_directed():
    x = FinitePoset.chain("*")
    z = _diamond()
    with pytest.raises(InputError):
        directed_sup_fn([constant_fn(x, z, "l"), constant_fn(x, z, "r")])


def test_directed_sups_exhaustive():
    lattices = [z for z in CATALOG if co.is_complete_lattice(z)]
    checked = 0
    for x in CATALOG:
        for z in lattices:
            space = enumerate_continuous_finite(x, z)
            for r in (1, 2, 3):
                for fam in itertools.combinations(space, r):
                    if not _directed(fam):
                        continue
                    g = directed_sup_fn(list(fam))
                    assert co.is_monotone(g)
                    assert g.values() == least_upper_bound_in(fam, space).values()
                    checked += 1
    assert checked > 100


def test_pointwise_sup_can_be_missing():
    anti = FinitePoset.antichain("p", "q")
    x = FinitePoset.chain("*")
    f, g = constant_fn(x, anti, "p"), constant_fn(x, anti, "q")
    assert pointwise_sup([f, g]) is None


@pytest.mark.parametrize(
    "x,z",
    [
        (FinitePoset.chain("a", "b"), _diamond()),
        (FinitePoset.chain("*"), _diamond()),
        (FinitePoset.antichain("p", "q"), FinitePoset.chain("a", "b")),
    ],
)
def test_bounded_complete_examples(x, z):
    report = check_bounded_complete_finite(x, z)
    assert report.passed and report.mode == "all-subsets"


def test_bounded_complete_requires_bounded_complete_codomain():
    with pytest.raises(InputError):
        check_bounded_complete_finite(FinitePoset.chain("*"), FinitePoset.antichain("p", "q"))


def test_bounded_complete_catalog():
    runs = 0
    for x, z in itertools.product(CATALOG, repeat=2):
        if not co.is_bounded_complete(z):
            continue
        report = check_bounded_complete_finite(x, z)
        assert report.passed, (x.elements, z.elements, report)
        runs += 1
    assert runs > 0


def test_reduced_mode_agrees_with_full_enumeration():
    # 15 monotone maps from a 4-chain to a 3-chain: past the enumeration bound
    report = check_bounded_complete_finite(FinitePoset.chain("a", "b", "c", "d"), FinitePoset.chain("0", "1", "2"))
    assert report.functions == 15 and report.mode == "empty-and-pairs" and report.passed
    small = check_bounded_complete_finite(FinitePoset.antichain("p", "q", "r"), FinitePoset.chain("0", "1"))
    assert small.functions == 8 and small.mode == "all-subsets"


def test_report_json_shape():
    doc = check_bounded_complete_finite(FinitePoset.chain("*"), FinitePoset.chain("a", "b")).to_json()
    assert doc["passed"] is True and doc["counterexample"] is None


def test_pair_criterion_exhaustive():
    pairs = 0
    for x in CATALOG:
        for z in (z for z in CATALOG if co.is_complete_lattice(z)):
            space = enumerate_continuous_finite(x, z)
            for f, g in itertools.combinations_with_replacement(space, 2):
                assert pair_sup_matches_pointwise(f, g, space)
                pairs += 1
    assert pairs > 0


def test_pair_criterion_on_a_non_lattice_codomain():
    # two maxima: the pointwise sup of incomparable constants does not exist
    x = FinitePoset.chain("*")
    z = FinitePoset.antichain("p", "q")
    space = enumerate_continuous_finite(x, z)
    f, g = space
    assert least_upper_bound_in((f, g), space) is None
    assert pair_sup_matches_pointwise(f, g, space)


# -- symbolic functions on Z x Z -------------------------------------------------


@given(elems_z, elems_z)
def test_eval_symbolic(a, b):
    assert eval_symbolic(Proj1(), (a, b)) == a
    assert eval_symbolic(Proj2(), (a, b)) == b
    assert eval_symbolic(Sup2(), (a, b)) == sup2(a, b)
    assert eval_symbolic(ConstFn(BOT_Z), (a, b)) == BOT_Z


def test_sup2_of_slices():
    x = Pair(3, 1)
    assert eval_symbolic(Sup2(), (ElemZ(x, EMPTY), ElemZ(BOT, V_ZERO))) == ElemZ(x, V_ZERO)


def test_step_function_example():
    x0 = (ElemZ(Pair(0, 0), EMPTY), ElemZ(BOT, V_ZERO))
    s = step_function(Proj1(), Proj2(), x0)
    assert s == StepAt(x0, ElemZ(Pair(0, 0), V_ZERO), TOP_Z)
    assert eval_symbolic(s, x0) == ElemZ(Pair(0, 0), V_ZERO)
    below = (BOT_Z, ElemZ(BOT, EMPTY))
    assert eval_symbolic(s, below) == ElemZ(Pair(0, 0), V_ZERO)
    assert leqZ(eval_symbolic(Proj1(), below), eval_symbolic(s, below))
    assert eval_symbolic(s, (ElemZ(Pair(1, 0), EMPTY), BOT_Z)) == TOP_Z


def test_step_function_bounds_on_samples():
    rng = random.Random(11)
    for _ in range(60):
        x0 = (sample_elemz(rng), sample_elemz(rng))
        pts = [(sample_elemz(rng), sample_elemz(rng)) for _ in range(30)]
        assert step_function_bounds_hold(x0, pts)


@settings(max_examples=100)
@given(elems_z, elems_z, elems_z, elems_z)
def test_closure_of_a_point_is_its_down_set(a, b, c, d):
    x0, x = (a, b), (c, d)
    if not leqX(x, x0):
        x, x0 = x0, x
    if leqX(x, x0):
        rng = random.Random(hash((a, b, c, d)) & 0xFFFF)
        opens = [(sample_product_open(rng), sample_product_open(rng)) for _ in range(10)]
        assert closure_contains_down_set(x0, x, opens)


# -- the bounded-completeness failure --------------------------------------------


def test_bc_failure_default():
    report = bc_failure_certificate()
    assert report.passed
    assert [item.id for item in report.items] == [1, 2, 3, 4, 5]
    assert report.items[3].evidence["kind"] == "inference"
    assert report.items[3].evidence["from_items"] == [1, 2, 3]
    assert report.certificate.chain_index == 1
    assert report.certificate.witness == ElemZ(Pair(1, 0), report.certificate.chain_member)


def test_bc_failure_spot_check():
    assert eval_symbolic(Sup2(), SPOT_POINT) == ElemZ(Pair(1, 2), V_ZERO)


def test_bc_failure_evaluations_replay():
    from scott_forge.certificates import replay

    report = bc_failure_certificate(samples=10, seed=3)
    for item in report.items:
        for e in item.evaluations:
            assert replay(e) == e.result


def test_constant_maps_bound_the_space():
    x = FinitePoset.chain("a", "b")
    z = FinitePoset.chain("0", "1", "2")
    space = enumerate_continuous_finite(x, z)
    lo, hi = constant_fn(x, z, "0"), constant_fn(x, z, "2")
    assert all(leqC(lo, f) and leqC(f, hi) for f in space)


def test_finite_map_table_must_be_total():
    x = FinitePoset.chain("a", "b")
    with pytest.raises(ValueError):
        FiniteMap(x, x, {"a": "a"})
