"""Shared builders for certificate tests."""

import copy
import random

from scott_forge.certificates import SchemaError, SecurityError, validate
from scott_forge.funcspace import sample_fnrep, sample_pointwise, sample_product_open
from scott_forge.modjohnstone import OMEGA, TOP, Pair
from scott_forge.opens import FULL, FnRep, VSet
from scott_forge.product import EVERYWHERE_X2, Box, PointwiseOpenX2, ProductOpenZ, refute_e_box, refute_sup2_box


def leaf_paths(node, path=()):
    if isinstance(node, dict):
        for k, v in node.items():
            yield from leaf_paths(v, path + (k,))
    elif isinstance(node, list):
        for k, v in enumerate(node):
            yield from leaf_paths(v, path + (k,))
    else:
        yield path


def mutations(value):
    if isinstance(value, bool):
        return [not value]
    if isinstance(value, int):
        return [value + 1] + ([value - 1] if value > 0 else [])
    if value == "omega":
        return [0]
    return [value + "x"]


def get_path(doc, path):
    for k in path:
        doc = doc[k]
    return doc


def rejects(doc):
    try:
        return not validate(doc).ok
    except (SchemaError, SecurityError):
        return True


def surviving_mutations(doc):
    """Single-leaf edits of ``doc`` that still validate."""
    out = []
    for path in leaf_paths(doc):
        for new in mutations(get_path(doc, path)):
            bad = copy.deepcopy(doc)
            get_path(bad, path[:-1])[path[-1]] = new
            if not rejects(bad):
                out.append((path, new))
    return out


def anchored_open(rng):
    """FULL or a V_f with f(0) = 0, so (0,0) is a member."""
    if rng.random() < 0.15:
        return FULL
    f = sample_fnrep(rng, start=0)
    return VSet(FnRep(0, (0, *f.prefix), f.tail))


def anchored_pointwise(rng):
    """A pointwise open holding V_0: one generator avoids BOT."""
    anchor = [Pair(rng.randint(0, 5), rng.choice([0, 1, 2, 3, OMEGA])) for _ in range(rng.randint(0, 2))]
    if rng.random() < 0.3:
        anchor.append(TOP)
    noise = sample_pointwise(rng)
    if rng.random() < 0.5:
        return PointwiseOpenX2.of(anchor) + noise
    return noise + PointwiseOpenX2.of(anchor)


def anchored_product_opens(rng):
    """``d1`` holding ((0,0), EMPTY) and ``d2`` holding (BOT, V_0), plus noise boxes."""
    d1 = (Box(anchored_open(rng), EVERYWHERE_X2), *sample_product_open(rng).boxes)
    d2 = (*sample_product_open(rng).boxes, Box(FULL, anchored_pointwise(rng)))
    return ProductOpenZ(d1), ProductOpenZ(d2)


def sampled_certificates(n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        if rng.random() < 0.5:
            out.append(refute_e_box(anchored_open(rng), anchored_pointwise(rng)))
        else:
            out.append(refute_sup2_box(*anchored_product_opens(rng)))
    return out
