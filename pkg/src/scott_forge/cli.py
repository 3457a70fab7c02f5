"""Command-line front end.

Exit codes: 0 completed (certificate produced or check passed), 2 check
failed, 3 search bound exceeded, 4 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import certificates as certs
from . import core_order, funcspace, modjohnstone, opens, product
from .certificates import SchemaError, SecurityError, canonical_json, from_json, to_json
from .modjohnstone import OMEGA, Bot, Pair, Top, elem_key
from .opens import Empty, Full, VSet

EXIT_OK = 0
EXIT_FAILED = 2
EXIT_UNKNOWN = 3
EXIT_INVALID = 4

BOUND_ENV = "SCOTT_FORGE_BOUND"


class UsageError(Exception):
    pass


class InvalidInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _fmt(v: Any) -> str:
    if isinstance(v, Bot):
        return "bot"
    if isinstance(v, Top):
        return "top"
    if isinstance(v, Pair):
        return f"({v.i},{'omega' if v.j is OMEGA else v.j})"
    if isinstance(v, Empty):
        return "EMPTY"
    if isinstance(v, Full):
        return "FULL"
    if isinstance(v, VSet):
        f = v.f
        return f"V[start={f.start}, prefix={list(f.prefix)}, tail={f.tail}]"
    if isinstance(v, product.ElemZ):
        return f"<{_fmt(v.first)}, {_fmt(v.second)}>"
    if isinstance(v, product.PointwiseOpenX2):
        gens = ["{" + ", ".join(_fmt(x) for x in sorted(g, key=elem_key)) + "}" for g in v.generators]
        return "up[" + " | ".join(gens) + "]"
    if isinstance(v, product.Box):
        return f"{_fmt(v.u)} x {_fmt(v.v)}"
    if isinstance(v, product.ProductOpenZ):
        return " + ".join(_fmt(b) for b in v.boxes) or "nothing"
    if isinstance(v, tuple):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    return str(v)


def _json_arg(text: str) -> Any:
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise InvalidInput(f"cannot read {text[1:]}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"not valid JSON: {exc}") from exc


def _typed_arg(text: str, kind: type | tuple, what: str) -> Any:
    try:
        value = from_json(_json_arg(text))
    except SchemaError as exc:
        raise InvalidInput(f"{what}: {exc}") from exc
    if not isinstance(value, kind):
        raise InvalidInput(f"{what}: expected {getattr(kind, '__name__', kind)}")
    return value


def _bound(args: argparse.Namespace) -> int:
    if args.bound is not None:
        return args.bound
    env = os.environ.get(BOUND_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InvalidInput(f"{BOUND_ENV} must be an integer") from exc
    return product.SEARCH_BOUND


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def emit(self, payload: dict) -> None:
        if self.as_json:
            sys.stdout.write(canonical_json(payload).decode() + "\n")
        else:
            sys.stdout.write("\n".join(self.lines) + "\n")


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


# -- subcommands ------------------------------------------------------------


def cmd_axioms(args, out: Output) -> int:
    reports = [modjohnstone.truncation_law_suite(n) for n in range(args.n + 1)]
    ok = all(r.passed for r in reports)
    for r in reports:
        out.line(f"truncate({r.n}): {r.elements} elements")
        for law, good in r.results.items():
            out.line(f"  {law:<18} {_verdict(good)}")
    out.line(f"verdict: {_verdict(ok)}")
    out.emit({"verdict": _verdict(ok), "truncations": [{"n": r.n, "elements": r.elements, "laws": r.results} for r in reports]})
    return EXIT_OK if ok else EXIT_FAILED


DEFAULT_NORMAL_FORMS = [
    opens.FnRep(0, (0, 0, 1, 1), 1),
    opens.FnRep(2, (3, 1), 2),
    opens.FnRep(0, (), 0),
]


def cmd_normal_form(args, out: Output) -> int:
    if args.open is not None:
        samples = [_typed_arg(args.open, (Empty, Full, VSet, opens.FnRep), "--open")]
    else:
        samples = [VSet(f) for f in DEFAULT_NORMAL_FORMS] + [opens.EMPTY, opens.FULL]
    rows = []
    ok = True
    for o in samples:
        if isinstance(o, opens.FnRep):
            o = VSet(o)
        rebuilt = opens.reconstruct(o)
        good = rebuilt == o
        ok &= good
        rows.append({"open": to_json(o), "reconstructed": to_json(rebuilt), "match": good})
        out.line(f"{_fmt(o)} -> reconstructed {_fmt(rebuilt)}: {_verdict(good)}")
    out.line(f"verdict: {_verdict(ok)}")
    out.emit({"verdict": _verdict(ok), "normal_forms": rows})
    return EXIT_OK if ok else EXIT_FAILED


def cmd_chain_demo(args, out: Output) -> int:
    f = _typed_arg(args.f, opens.FnRep, "--f") if args.f else opens.ZERO
    if f.start != 0:
        raise InvalidInput("--f must start at column 0")
    report = opens.chain_union_check(f, args.steps)
    chain = [opens.gi_chain(f, i) for i in range(args.steps + 1)]
    out.line(f"f = {_fmt(VSet(f))}")
    for i, member in enumerate(chain):
        esc = report.escapes.get(i)
        extra = f"  escape point {_fmt(esc)}" if esc is not None else ""
        out.line(f"g_{i}: {_fmt(member)}{extra}")
    out.line(f"increasing: {report.increasing}")
    out.line(f"inside V_0: {report.below_v_zero}")
    out.line(f"strict: {report.strict}")
    out.line(f"union covers V_0 (column k via g_(k+1)): {report.covers}")
    out.line(f"verdict: {_verdict(report.verified)}")
    out.emit(
        {
            "verdict": _verdict(report.verified),
            "fn": to_json(f),
            "chain": to_json(chain),
            "increasing": report.increasing,
            "below_v_zero": report.below_v_zero,
            "strict": report.strict,
            "covers": report.covers,
            "escapes": {str(k): to_json(v) for k, v in report.escapes.items()},
            "witness_map": {str(k): v for k, v in report.witness_map.items()},
        }
    )
    return EXIT_OK if report.verified else EXIT_FAILED


def _certificate_lines(out: Output, cert: product.RefutationCertificate) -> None:
    out.line(f"target: {cert.target.value}")
    out.line(f"chain_index: {cert.chain_index}")
    out.line(f"chain_member: {_fmt(cert.chain_member)}")
    if cert.witness_pair is not None:
        out.line(f"witness pair: {_fmt(cert.witness_pair)}")
        out.line(f"sup of the pair: {_fmt(cert.witness)}")
    out.line(f"witness: {_fmt(cert.witness.first)}")
    for e in cert.evaluations:
        out.line(f"  {e.check}({', '.join(_fmt(a) for a in e.args)}) = {e.result}")


def _refute(args, out: Output, build) -> int:
    try:
        cert = build()
    except product.NotFoundError as exc:
        out.line(f"unknown: {exc}")
        out.emit({"verdict": "unknown", "reason": str(exc)})
        return EXIT_UNKNOWN
    except (product.InputError, opens.PreconditionError) as exc:
        raise InvalidInput(str(exc)) from exc
    verdict = certs.validate_certificate(cert)
    _certificate_lines(out, cert)
    out.line(f"certificate replay: {_verdict(verdict.ok)}")
    out.emit({"verdict": _verdict(verdict.ok), "certificate": certs.certificate_to_json(cert)})
    return EXIT_OK if verdict.ok else EXIT_FAILED


def cmd_refute_box(args, out: Output) -> int:
    u = _typed_arg(args.u, (Empty, Full, VSet), "--u") if args.u else opens.V_ZERO
    v = _typed_arg(args.v, product.PointwiseOpenX2, "--v") if args.v else product.PointwiseOpenX2.of([product.X1_POINT])
    bound = _bound(args)
    return _refute(args, out, lambda: product.refute_e_box(u, v, bound, require_anchor=not args.unanchored))


def cmd_sup_discontinuity(args, out: Output) -> int:
    d1 = _typed_arg(args.d1, product.ProductOpenZ, "--d1") if args.d1 else product.DEFAULT_D1
    d2 = _typed_arg(args.d2, product.ProductOpenZ, "--d2") if args.d2 else product.DEFAULT_D2
    bound = _bound(args)
    return _refute(args, out, lambda: product.refute_sup2_box(d1, d2, bound))


def cmd_bc_failure(args, out: Output) -> int:
    try:
        report = funcspace.bc_failure_certificate(samples=args.samples, seed=args.seed)
    except product.NotFoundError as exc:
        out.line(f"unknown: {exc}")
        out.emit({"verdict": "unknown", "reason": str(exc)})
        return EXIT_UNKNOWN
    for item in report.items:
        out.line(f"[{item.status}] {item.id}. {item.claim}")
    _certificate_lines(out, report.certificate)
    out.line(f"verdict: {_verdict(report.passed)}")
    doc = certs.report_to_json(report)
    out.emit({"verdict": _verdict(report.passed), "report": doc})
    return EXIT_OK if report.passed else EXIT_FAILED


def _load_poset(text: str, what: str) -> core_order.FinitePoset:
    try:
        return core_order.load_poset(_json_arg(text))
    except (ValueError, TypeError) as exc:
        raise InvalidInput(f"{what}: {exc}") from exc


def cmd_finite_bc(args, out: Output) -> int:
    x = _load_poset(args.x, "--x")
    z = _load_poset(args.z, "--z")
    try:
        report = funcspace.check_bounded_complete_finite(x, z)
    except (funcspace.InputError, core_order.SizeBoundError) as exc:
        raise InvalidInput(str(exc)) from exc
    out.line(f"C(x, z) has {report.functions} continuous maps")
    out.line(f"bounded families checked ({report.mode}): {report.subsets_checked}")
    out.line(f"verdict: {_verdict(report.passed)}")
    out.emit({"verdict": _verdict(report.passed), **report.to_json()})
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_oracle(args, out: Output) -> int:
    try:
        reports = [modjohnstone.lattice_oracle(n, args.size) for n in range(args.n + 1)]
    except core_order.SizeBoundError as exc:
        raise InvalidInput(str(exc)) from exc
    ok = all(r.passed for r in reports)
    for r in reports:
        out.line(
            f"truncate({r.n}): {r.subsets} subsets checked, "
            f"{len(r.sup_mismatches)} sup mismatches, {len(r.inf_mismatches)} inf mismatches"
        )
    out.line("all subsets checked equal" if ok else "mismatches found")
    out.line(f"verdict: {_verdict(ok)}")
    out.emit(
        {
            "verdict": _verdict(ok),
            "truncations": [
                {
                    "n": r.n,
                    "subsets": r.subsets,
                    "sup_mismatches": [list(m) for m in r.sup_mismatches],
                    "inf_mismatches": [list(m) for m in r.inf_mismatches],
                }
                for r in reports
            ],
        }
    )
    return EXIT_OK if ok else EXIT_FAILED


def cmd_validate(args, out: Output) -> int:
    try:
        text = Path(args.certificate).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {args.certificate}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{args.certificate} is not JSON: {exc}") from exc
    # accept this tool's own --json output as well as bare documents
    if isinstance(doc, dict) and "verdict" in doc and "target" not in doc:
        doc = doc.get("certificate", doc.get("report", doc))
    try:
        report = certs.validate(doc)
    except (SchemaError, SecurityError) as exc:
        raise InvalidInput(f"{type(exc).__name__}: {exc}") from exc
    if report.ok:
        out.line(f"valid: {report.checked} checks replayed")
    else:
        out.line(f"invalid: {report.failure}")
        if report.failed_check:
            out.line(f"first failing evaluation: {report.failed_check}")
    out.emit({"verdict": _verdict(report.ok), **report.to_json()})
    return EXIT_OK if report.ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit canonical JSON")
    common.add_argument("--bound", type=int, default=None, help=f"search bound (fallback: ${BOUND_ENV})")

    parser = _Parser(prog="scott-forge", description="Order-theory counterexample toolkit", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("axioms", parents=[common], help="order and lattice laws on truncations")
    p.add_argument("--n", type=int, default=3)
    p.set_defaults(run=cmd_axioms)

    p = sub.add_parser("normal-form", parents=[common], help="normal form of representable opens")
    p.add_argument("--open", default=None, help="OpenJ or FnRep as JSON or @file")
    p.set_defaults(run=cmd_normal_form)

    p = sub.add_parser("chain-demo", parents=[common], help="the g_i chain and its union")
    p.add_argument("--f", default=None, help="FnRep with start 0 (default: constant 0)")
    p.add_argument("--steps", type=int, default=8)
    p.set_defaults(run=cmd_chain_demo)

    p = sub.add_parser("refute-box", parents=[common], help="refute a product box inside E")
    p.add_argument("--u", default=None, help="OpenJ (default V_0)")
    p.add_argument("--v", default=None, help="PointwiseOpenX2 (default {(0,0)})")
    p.add_argument("--unanchored", action="store_true", help="allow u without (0,0)")
    p.set_defaults(run=cmd_refute_box)

    p = sub.add_parser("sup-discontinuity", parents=[common], help="refute continuity of binary sup")
    p.add_argument("--d1", default=None, help="ProductOpenZ")
    p.add_argument("--d2", default=None, help="ProductOpenZ")
    p.set_defaults(run=cmd_sup_discontinuity)

    p = sub.add_parser("bc-failure", parents=[common], help="function space that is not bounded complete")
    p.add_argument("--samples", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_bc_failure)

    p = sub.add_parser("finite-bc", parents=[common], help="bounded completeness of C(x, z) for finite posets")
    p.add_argument("--x", required=True, help="poset JSON or @file")
    p.add_argument("--z", required=True, help="poset JSON or @file")
    p.set_defaults(run=cmd_finite_bc)

    p = sub.add_parser("oracle", parents=[common], help="symbolic sup/inf against brute force")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--size", type=int, default=3, help="largest subset size")
    p.set_defaults(run=cmd_oracle)

    p = sub.add_parser("validate", parents=[common], help="replay a certificate or report")
    p.add_argument("certificate")
    p.set_defaults(run=cmd_validate)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INVALID
    out = Output(args.json)
    try:
        return args.run(args, out)
    except InvalidInput as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        if args.json:
            sys.stdout.write(canonical_json({"verdict": "invalid", "reason": str(exc)}).decode() + "\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
