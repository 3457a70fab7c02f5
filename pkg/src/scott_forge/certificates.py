"""JSON encoding of library values and independent replay of certificates.

Certificates are untrusted input.  The validator never evaluates anything
but the primitives in :data:`PRIMITIVES`, and it accepts a document only
if

* it matches the shipped JSON schema and is in canonical form,
* its recorded evaluations are exactly the ones its own fields call for,
* every recorded evaluation replays to the recorded outcome,
* the outcomes are the ones a refutation needs, and
* the chain member is re-derivable from the stored function and index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any, Callable

import jsonschema

from .core_order import FinitePoset
from .funcspace import (
    BCFailureReport,
    ConstFn,
    Proj1,
    Proj2,
    ReportItem,
    StepAt,
    Sup2,
    eval_symbolic,
)
from .modjohnstone import BOT, OMEGA, TOP, Bot, Pair, Top, elem_key, leq1
from .opens import EMPTY, FULL, Empty, FnRep, Full, VSet, fn_eval, gi_chain, subset, vf_contains
from .product import (
    Box,
    ElemZ,
    Evaluation,
    PointwiseOpenX2,
    ProductOpenZ,
    RefutationCertificate,
    Target,
    e_box_evaluations,
    e_contains,
    leqZ,
    pointwise_contains,
    product_open_contains,
    slice_opens,
    sup2,
    sup2_box_evaluations,
    witness_fn,
)

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Document does not parse as a certificate."""


class SecurityError(ValueError):
    """Document names a primitive outside the whitelist."""


# -- encoding ---------------------------------------------------------------


def to_json(value: Any) -> Any:
    """Plain JSON data for any library value (dicts, lists, numbers, strings)."""
    if isinstance(value, Bot):
        return {"tag": "bot"}
    if isinstance(value, Top):
        return {"tag": "top"}
    if isinstance(value, Pair):
        return {"tag": "pair", "i": value.i, "j": "omega" if value.j is OMEGA else value.j}
    if isinstance(value, FnRep):
        return {"start": value.start, "prefix": list(value.prefix), "tail": value.tail}
    if isinstance(value, Empty):
        return {"tag": "empty"}
    if isinstance(value, Full):
        return {"tag": "full"}
    if isinstance(value, VSet):
        return {"tag": "vset", **to_json(value.f)}
    if isinstance(value, ElemZ):
        return {"first": to_json(value.first), "second": to_json(value.second)}
    if isinstance(value, PointwiseOpenX2):
        return {"generators": [[to_json(x) for x in sorted(g, key=elem_key)] for g in value.generators]}
    if isinstance(value, Box):
        return {"u": to_json(value.u), "v": to_json(value.v)}
    if isinstance(value, ProductOpenZ):
        return {"boxes": [to_json(b) for b in value.boxes]}
    if isinstance(value, (Proj1, Proj2, Sup2)):
        return {"tag": type(value).__name__.lower()}
    if isinstance(value, ConstFn):
        return {"tag": "const", "value": to_json(value.value)}
    if isinstance(value, StepAt):
        return {"tag": "step", "x0": to_json(value.x0), "value": to_json(value.value), "top": to_json(value.top)}
    if isinstance(value, Evaluation):
        return {"check": value.check, "args": [to_json(a) for a in value.args], "result": value.result}
    if isinstance(value, RefutationCertificate):
        return certificate_to_json(value)
    if isinstance(value, BCFailureReport):
        return report_to_json(value)
    if isinstance(value, FinitePoset):
        return value.to_json()
    if isinstance(value, Target):
        return value.value
    if isinstance(value, (list, tuple)):
        return [to_json(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_json(v) for k, v in value.items()}
    if value is None or isinstance(value, (bool, int, str, float)):
        return value
    raise TypeError(f"cannot encode {type(value).__name__}")


def canonical_json(value: Any) -> bytes:
    """Sorted keys, no insignificant whitespace; equal values give equal bytes."""
    return json.dumps(to_json(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


def certificate_to_json(cert: RefutationCertificate) -> dict:
    if cert.target is Target.E_NOT_PRODUCT_OPEN:
        box = to_json(cert.box)
    else:
        d1, d2 = cert.box
        box = {"d1": to_json(d1), "d2": to_json(d2)}
    doc = {
        "version": SCHEMA_VERSION,
        "target": cert.target.value,
        "box": box,
        "fn": to_json(cert.fn),
        "chain_index": cert.chain_index,
        "chain_member": to_json(cert.chain_member),
        "witness": to_json(cert.witness),
        "evaluations": [to_json(e) for e in cert.evaluations],
    }
    if cert.witness_pair is not None:
        doc["witness_pair"] = to_json(cert.witness_pair)
    if cert.slices is not None:
        e1, e2 = cert.slices
        doc["slices"] = {"e1": to_json(e1), "e2": to_json(e2)}
    return doc


def report_to_json(report: BCFailureReport) -> dict:
    items = []
    for item in report.items:
        evidence = dict(item.evidence)
        if item.evaluations:
            evidence["evaluations"] = [to_json(e) for e in item.evaluations]
        items.append({"id": item.id, "claim": item.claim, "status": item.status, "evidence": to_json(evidence)})
    return {
        "version": SCHEMA_VERSION,
        "target": Target.BC_FAILURE.value,
        "items": items,
        "certificate": certificate_to_json(report.certificate),
    }


# -- decoding ---------------------------------------------------------------


def _nat(v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise SchemaError(f"expected a natural number, got {v!r}")
    return v


_SYMBOLIC = {"proj1": Proj1, "proj2": Proj2, "sup2": Sup2}


def from_json(obj: Any) -> Any:
    """Inverse of :func:`to_json`, dispatching on tags and key sets."""
    try:
        return _decode(obj)
    except SchemaError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise SchemaError(str(exc)) from exc


def _keys(obj: dict, *expected: str) -> None:
    if set(obj) != set(expected):
        raise SchemaError(f"expected keys {sorted(expected)}, got {sorted(obj)}")


def _decode(obj: Any) -> Any:
    if isinstance(obj, list):
        return tuple(_decode(v) for v in obj)
    if not isinstance(obj, dict):
        return obj
    tag = obj.get("tag")
    if tag == "bot":
        _keys(obj, "tag")
        return BOT
    if tag == "top":
        _keys(obj, "tag")
        return TOP
    if tag == "pair":
        _keys(obj, "tag", "i", "j")
        j = obj["j"]
        return Pair(_nat(obj["i"]), OMEGA if j == "omega" else _nat(j))
    if tag == "empty":
        _keys(obj, "tag")
        return EMPTY
    if tag == "full":
        _keys(obj, "tag")
        return FULL
    if tag == "vset":
        _keys(obj, "tag", "start", "prefix", "tail")
        return VSet(_decode_fn(obj))
    if tag in _SYMBOLIC:
        _keys(obj, "tag")
        return _SYMBOLIC[tag]()
    if tag == "const":
        _keys(obj, "tag", "value")
        return ConstFn(_decode(obj["value"]))
    if tag == "step":
        _keys(obj, "tag", "x0", "value", "top")
        return StepAt(_decode(obj["x0"]), _decode(obj["value"]), _decode(obj["top"]))
    if tag is not None:
        raise SchemaError(f"unknown tag {tag!r}")
    keys = set(obj)
    if keys == {"first", "second"}:
        return ElemZ(_decode(obj["first"]), _decode(obj["second"]))
    if keys == {"start", "prefix", "tail"}:
        return _decode_fn(obj)
    if keys == {"generators"}:
        return PointwiseOpenX2(tuple(frozenset(_decode(x) for x in g) for g in obj["generators"]))
    if keys == {"u", "v"}:
        return Box(_decode(obj["u"]), _decode(obj["v"]))
    if keys == {"boxes"}:
        return ProductOpenZ(tuple(_decode(b) for b in obj["boxes"]))
    if keys == {"check", "args", "result"}:
        return Evaluation(obj["check"], tuple(_decode(a) for a in obj["args"]), obj["result"])
    raise SchemaError(f"unrecognised object with keys {sorted(keys)}")


def _decode_fn(obj: dict) -> FnRep:
    prefix = obj["prefix"]
    if not isinstance(prefix, list):
        raise SchemaError("prefix must be a list")
    return FnRep(_nat(obj["start"]), tuple(_nat(v) for v in prefix), _nat(obj["tail"]))


@lru_cache(maxsize=1)
@lru_cache(maxsize=None)
def _schema_text() -> str:
    return resources.files("scott_forge").joinpath("schemas/certificate.schema.json").read_text()


def certificate_schema() -> dict:
    return json.loads(_schema_text())


@lru_cache(maxsize=None)
def _validator() -> Any:
    schema = certificate_schema()
    cls = jsonschema.validators.validator_for(schema)
    cls.check_schema(schema)
    return cls(schema)


def _load(doc: Any) -> dict:
    if isinstance(doc, (bytes, bytearray)):
        doc = doc.decode("utf-8")
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not JSON: {exc}") from exc
    error = jsonschema.exceptions.best_match(_validator().iter_errors(doc))
    if error is not None:
        raise SchemaError(f"schema violation at {list(error.absolute_path)}: {error.message}")
    return doc


def parse_certificate(doc: Any) -> RefutationCertificate:
    doc = _load(doc)
    target = Target(doc["target"])
    if target is Target.BC_FAILURE:
        raise SchemaError("a bc-failure document is a report; use parse_report")
    if target is Target.E_NOT_PRODUCT_OPEN:
        box = from_json(doc["box"])
        witness_pair = slices = None
    else:
        box = (from_json(doc["box"]["d1"]), from_json(doc["box"]["d2"]))
        witness_pair = from_json(doc["witness_pair"])
        slices = (from_json(doc["slices"]["e1"]), from_json(doc["slices"]["e2"]))
    return RefutationCertificate(
        target=target,
        box=box,
        fn=from_json(doc["fn"]),
        chain_index=doc["chain_index"],
        chain_member=from_json(doc["chain_member"]),
        witness=from_json(doc["witness"]),
        evaluations=tuple(from_json(e) for e in doc["evaluations"]),
        witness_pair=witness_pair,
        slices=slices,
    )


# -- replay -----------------------------------------------------------------

_J = (Bot, Pair, Top)
_O = (Empty, Full, VSet)
_SYM = (Proj1, Proj2, Sup2, ConstFn, StepAt)


def _is_xpoint(v: Any) -> bool:
    return isinstance(v, tuple) and len(v) == 2 and all(isinstance(z, ElemZ) for z in v)


#: name -> (primitive, argument type checks)
PRIMITIVES: dict[str, tuple[Callable[..., bool], tuple]] = {
    "leq1": (leq1, (_J, _J)),
    "vf_contains": (vf_contains, (_O, _J)),
    "subset": (subset, (_O, _O)),
    "e_contains": (e_contains, (ElemZ,)),
    "leqZ": (leqZ, (ElemZ, ElemZ)),
    "pointwise_contains": (pointwise_contains, (PointwiseOpenX2, _O)),
    "product_open_contains": (product_open_contains, (ProductOpenZ, ElemZ)),
    "sup2_eq": (lambda a, b, c: sup2(a, b) == c, (ElemZ, ElemZ, ElemZ)),
    "eval_agreement": (lambda f, x, expected: eval_symbolic(f, x) == expected, (_SYM, _is_xpoint, ElemZ)),
}


def _well_typed(args: tuple, types: tuple) -> bool:
    if len(args) != len(types):
        return False
    for a, t in zip(args, types):
        ok = t(a) if callable(t) and not isinstance(t, type) and not isinstance(t, tuple) else isinstance(a, t)
        if not ok:
            return False
    return True


def replay(e: Evaluation) -> bool:
    """Re-run one evaluation; raises :class:`SecurityError` for unknown checks."""
    if e.check not in PRIMITIVES:
        raise SecurityError(f"primitive {e.check!r} is not whitelisted")
    fn, types = PRIMITIVES[e.check]
    if not _well_typed(e.args, types):
        raise SchemaError(f"ill-typed arguments for {e.check}")
    return bool(fn(*e.args))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failure: str | None = None
    failed_check: str | None = None
    checked: int = 0
    # whether the box also contains the distinguished point
    anchored: bool = False

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "failure": self.failure,
            "failed_check": self.failed_check,
            "checked": self.checked,
            "anchored": self.anchored,
        }


def _fail(msg: str, check: str | None = None, checked: int = 0) -> ValidationReport:
    return ValidationReport(False, msg, check, checked)


def validate_certificate(cert: RefutationCertificate) -> ValidationReport:
    """Check a parsed certificate; see the module docstring for the steps."""
    for e in cert.evaluations:
        if e.check not in PRIMITIVES:
            raise SecurityError(f"primitive {e.check!r} is not whitelisted")

    if cert.target is Target.E_NOT_PRODUCT_OPEN:
        if not isinstance(cert.box, Box):
            return _fail("box must be a (u, v) pair")
        expected = e_box_evaluations(cert.box.u, cert.box.v, cert.witness)
        core = (False, True, True)
        anchors = slice(3, 5)
    elif cert.target is Target.SUP_DISCONTINUOUS:
        if cert.witness_pair is None or cert.slices is None:
            return _fail("sup-discontinuity certificate lacks witness_pair or slices")
        d1, d2 = cert.box
        z1, z2 = cert.witness_pair
        expected = sup2_box_evaluations(d1, d2, z1, z2, cert.witness)
        core = (False, True, True, True)
        anchors = slice(4, 6)
    else:
        return _fail(f"target {cert.target.value} carries no certificate")

    recorded = cert.evaluations
    if len(recorded) < len(core):
        return _fail(f"certificate records {len(recorded)} evaluations; the core checks need {len(core)}")
    if len(recorded) != len(expected):
        return _fail(f"expected {len(expected)} evaluations, found {len(recorded)}")
    for k, (want, got) in enumerate(zip(expected, recorded)):
        if (want.check, want.args) != (got.check, got.args):
            return _fail(f"evaluation {k} ({want.check}) does not match the certificate fields", want.check, k)

    for k, e in enumerate(recorded):
        try:
            actual = replay(e)
        except SchemaError as exc:
            return _fail(f"evaluation {k} ({e.check}): {exc}", e.check, k)
        if actual != e.result:
            return _fail(f"evaluation {k} ({e.check}) replays to {actual}, recorded {e.result}", e.check, k)

    for k, want in enumerate(core):
        if recorded[k].result != want:
            return _fail(f"evaluation {k} ({recorded[k].check}) has outcome {recorded[k].result}; refutation needs {want}", recorded[k].check, k)

    anchored = all(e.result for e in recorded[anchors])
    n = len(recorded)

    x, member = cert.witness.first, cert.witness.second
    if member != cert.chain_member:
        return _fail("witness does not sit on the chain member", None, n)
    try:
        derived = gi_chain(cert.fn, cert.chain_index)
    except ValueError as exc:
        return _fail(f"chain member not derivable: {exc}", None, n)
    if derived != cert.chain_member:
        return _fail("chain member differs from the one derived from fn and chain_index", None, n)
    if x != Pair(cert.chain_index, fn_eval(cert.fn, cert.chain_index)):
        return _fail("witness point is not (i, f(i))", None, n)

    if cert.target is Target.E_NOT_PRODUCT_OPEN:
        try:
            fn = witness_fn(cert.box.u)
        except ValueError as exc:
            return _fail(str(exc), None, n)
    else:
        if not anchored:
            return _fail("sup-discontinuity boxes must contain the distinguished points", None, n)
        if (z1, z2) != (ElemZ(x, EMPTY), ElemZ(BOT, member)):
            return _fail("witness pair is not ((x, EMPTY), (BOT, chain member))", None, n)
        if slice_opens(d1, d2) != cert.slices:
            return _fail("recorded slices differ from the recomputed slices", None, n)
        fn = witness_fn(cert.slices[0])
    if fn != cert.fn:
        return _fail("fn is not the threshold function of the box", None, n)
    return ValidationReport(True, None, None, n, anchored)


def validate(doc: Any) -> ValidationReport:
    """Validate a serialized certificate or failure report.

    Raises :class:`SchemaError` for malformed documents and
    :class:`SecurityError` for non-whitelisted primitives; every other
    problem is reported in the returned :class:`ValidationReport`.
    """
    doc = _load(doc)
    if doc["target"] == Target.BC_FAILURE.value:
        return validate_report(doc)
    cert = parse_certificate(doc)
    if canonical_json(cert) != canonical_json(doc):
        return _fail("document is not in canonical form")
    return validate_certificate(cert)


def validate_report(doc: Any) -> ValidationReport:
    doc = _load(doc)
    inner = validate(doc["certificate"])
    if not inner.ok:
        return _fail(f"embedded certificate: {inner.failure}", inner.failed_check)
    if doc["certificate"]["target"] != Target.SUP_DISCONTINUOUS.value:
        return _fail("embedded certificate must refute continuity of binary sup")
    checked = inner.checked
    statuses = {}
    for item in doc["items"]:
        statuses[item["id"]] = item["status"]
        for raw in item["evidence"].get("evaluations", []):
            e = from_json(raw)
            try:
                actual = replay(e)
            except SchemaError as exc:
                return _fail(f"item {item['id']}: {exc}", e.check, checked)
            checked += 1
            if actual != e.result:
                return _fail(f"item {item['id']}: {e.check} replays to {actual}, recorded {e.result}", e.check, checked)
    for required in (1, 2, 3, 4):
        if statuses.get(required) != "pass":
            return _fail(f"item {required} is not passing", None, checked)
    return ValidationReport(True, None, None, checked, True)


def parse_report_items(doc: Any) -> list[ReportItem]:
    doc = _load(doc)
    out = []
    for item in doc["items"]:
        evidence = dict(item["evidence"])
        evals = [from_json(e) for e in evidence.pop("evaluations", [])]
        out.append(ReportItem(item["id"], item["claim"], item["status"], evidence, evals))
    return out
