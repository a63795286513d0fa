"""Batch front-end: JSON request in, deterministic report out.

Exit codes: 0 for definite verdicts, 2 for honest partiality (an Unknown or
NeedsOracle outcome), 1 for input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import amseg, decide, jacquet, jsonio, unitary
from .jsonio import SCHEMA_VERSION, SchemaError
from .repdata import HalfInt, validate_datum
from .results import NeedsOracle, Vanishes

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_PARTIAL = 2


def _load_payload(args) -> dict:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise SchemaError("top-level payload must be a JSON object")
    return obj


def _emit(args, report: dict) -> None:
    report["schema_version"] = SCHEMA_VERSION
    if args.format == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for line in _text_lines(report):
            print(line)


def _text_lines(report: dict):
    yield f"command: {report.get('command')}"
    status = report.get("status")
    if status is not None:
        yield f"status: {status}"
    basis = report.get("basis")
    if basis:
        yield f"basis: {basis}"
    for key in ("violations", "entries", "groups", "chain"):
        if key in report:
            yield f"{key}:"
            for item in report[key]:
                yield f"  - {json.dumps(item, sort_keys=True)}"
    for key in ("datum", "witness", "parameter", "reason"):
        if key in report and report[key] is not None:
            yield f"{key}: {json.dumps(report[key], sort_keys=True)}"


def _cmd_validate(args) -> int:
    payload = _load_payload(args)
    if "blocks" in payload:
        blocks, group = jsonio.decode_ext_multisegment(payload, ordered=True)
        problems = amseg.validate_blocks(blocks, group)
        kind = "extended-multisegment"
    else:
        d = jsonio.decode_datum(payload)
        problems = validate_datum(d)
        kind = "langlands-datum"
    _emit(
        args,
        {
            "command": "validate",
            "kind": kind,
            "status": "pass" if not problems else "fail",
            "violations": problems,
        },
    )
    return EXIT_OK


def _cmd_eval(args) -> int:
    payload = _load_payload(args)
    E = jsonio.decode_ext_multisegment(payload)
    res = amseg.eval_extended(E)
    report = {"command": "eval", "input": jsonio.encode_ext_multisegment(E)}
    if isinstance(res, Vanishes):
        report.update(status="vanishes", reason=res.reason)
        _emit(args, report)
        return EXIT_OK
    if isinstance(res, NeedsOracle):
        report.update(status="needs-oracle", reason=res.reason)
        _emit(args, report)
        return EXIT_PARTIAL
    report.update(status="ok", datum=jsonio.encode_datum(res))
    _emit(args, report)
    return EXIT_OK


def _cmd_packet(args) -> int:
    payload = _load_payload(args)
    psi = jsonio.decode_parameter(payload)
    entries = amseg.enumerate_packet(psi, dim_bound=args.dim_bound)
    rows = []
    partial = False
    for e in entries:
        row = {
            "certificate": jsonio.encode_ext_multisegment(e.E),
            "status": e.status,
        }
        if e.datum is not None:
            row["datum"] = jsonio.encode_datum(e.datum)
        if e.reason:
            row["reason"] = e.reason
        if e.status == "needs-oracle":
            partial = True
        rows.append(row)
    _emit(
        args,
        {
            "command": "packet",
            "parameter": jsonio.encode_parameter(psi),
            "status": "ok",
            "entries": rows,
        },
    )
    return EXIT_PARTIAL if partial else EXIT_OK


def _cmd_derive(args) -> int:
    payload = _load_payload(args)
    d = jsonio.decode_datum(jsonio._need(payload, "datum", "derive request"))
    rho = jsonio.decode_cusp(jsonio._need(payload, "rho", "derive request"))
    x = jsonio.decode_halfint(jsonio._need(payload, "x", "derive request"))
    verdict = jacquet.vanishing_test(d, rho, x)
    report = {
        "command": "derive",
        "status": verdict,
        "basis": "sound support/leading-term tests on the standard module",
    }
    _emit(args, report)
    return EXIT_PARTIAL if verdict == "Unknown" else EXIT_OK


def _cmd_sz(args) -> int:
    payload = _load_payload(args)
    d = jsonio.decode_datum(payload)
    res = decide.sz_decompose(d, dim_bound=args.dim_bound)
    if isinstance(res, NeedsOracle):
        _emit(
            args,
            {"command": "sz", "status": "needs-oracle", "reason": res.reason},
        )
        return EXIT_PARTIAL
    report = {
        "command": "sz",
        "status": "ok",
        "tau_bad": [jsonio.encode_segment(s) for s in res.tau_bad],
        "tau_minus": [
            {"segment": jsonio.encode_segment(s), "k": k} for s, k in res.tau_minus
        ],
        "tau_plus": [
            {"segment": jsonio.encode_segment(s), "k": k} for s, k in res.tau_plus
        ],
        "pi0": jsonio.encode_datum(res.pi0),
        "chain": list(res.chain),
    }
    _emit(args, report)
    return EXIT_OK


def _cmd_is_arthur(args) -> int:
    payload = _load_payload(args)
    d = jsonio.decode_datum(payload)
    verdict = decide.is_arthur(d, dim_bound=args.dim_bound)
    report = {"command": "is-arthur", "status": verdict.status}
    if verdict.witness is not None:
        report["witness"] = jsonio.encode_ext_multisegment(verdict.witness)
    if verdict.reason:
        report["reason"] = verdict.reason
    _emit(args, report)
    return EXIT_PARTIAL if verdict.status == "unknown" else EXIT_OK


def _cmd_is_unitary(args) -> int:
    payload = _load_payload(args)
    d = jsonio.decode_datum(payload)
    g = unitary.good_part(d)
    if g == d:
        verdict = unitary.is_unitary_good_parity(d, dim_bound=args.dim_bound)
        basis = "good parity: unitary iff of Arthur type"
    else:
        verdict = unitary.unitary_necessary(d, dim_bound=args.dim_bound)
        basis = "necessary condition: the good part of a unitary representation is of Arthur type"
    report = {"command": "is-unitary", "status": verdict.status, "basis": basis}
    if verdict.witness is not None:
        report["witness"] = jsonio.encode_ext_multisegment(verdict.witness)
    if verdict.reason:
        report["reason"] = verdict.reason
    _emit(args, report)
    return EXIT_PARTIAL if verdict.status == "unknown" else EXIT_OK


def _cmd_weak_check(args) -> int:
    from fractions import Fraction

    payload = _load_payload(args)
    pi0_obj = jsonio._need(payload, "pi0", "weak-check request")
    if "blocks" in pi0_obj:
        pi0 = jsonio.decode_ext_multisegment(pi0_obj)
    else:
        pi0 = jsonio.decode_datum(pi0_obj)
    factors = tuple(
        unitary.BeyondFactor(
            jsonio.decode_cusp(jsonio._need(f, "rho", "factor")),
            int(jsonio._need(f, "c", "factor")),
            int(jsonio._need(f, "d", "factor")),
            jsonio.decode_fraction(jsonio._need(f, "x", "factor")),
        )
        for f in payload.get("factors", [])
    )
    b = unitary.BeyondDatum(
        pi0, factors, payload.get("irreducible_input", "asserted")
    )
    oracle = None
    if args.oracle:
        oracle = unitary.SubprocessOracle(args.oracle.split())
    elif "oracle_frp" in payload:
        table = unitary.TableOracle()
        for entry in payload["oracle_frp"]:
            table.frp[
                (
                    entry["rho"]["id"],
                    entry["rho"].get("dim", 1),
                    entry["c"],
                    entry["d"],
                    entry.get("pi0", "*"),
                )
            ] = jsonio.decode_halfint(entry["frp"])
        # wildcard core: answer irreducibility from the point alone
        class _Wild(unitary.IrreducibilityOracle):
            def irreducible(self, rho, c, d, pi0):
                for (rid, rdim, cc, dd, _), frp in table.frp.items():
                    if (rid, rdim, cc, dd) == (rho.id, rho.dim, c, d):
                        return (
                            unitary.IRREDUCIBLE
                            if frp > HalfInt(0)
                            else unitary.REDUCIBLE
                        )
                return unitary.UNKNOWN

        oracle = _Wild()
    try:
        report_obj = unitary.weak_check(b, oracle)
    finally:
        if isinstance(oracle, unitary.SubprocessOracle):
            oracle.close()
    groups = [
        {
            "rho": g.rho_id,
            "dual": g.dual_id,
            "c": g.c,
            "d": g.d,
            "condition": g.condition,
            "status": g.status,
            "detail": g.detail,
        }
        for g in report_obj.groups
    ]
    report = {
        "command": "weak-check",
        "status": report_obj.status,
        "groups": groups,
        "basis": "pairing of twists across dual lines; odd-multiplicity factors need irreducible untwisted induction",
    }
    _emit(args, report)
    return EXIT_PARTIAL if report_obj.status == "unknown" else EXIT_OK


COMMANDS = {
    "validate": _cmd_validate,
    "eval": _cmd_eval,
    "packet": _cmd_packet,
    "derive": _cmd_derive,
    "sz": _cmd_sz,
    "is-arthur": _cmd_is_arthur,
    "is-unitary": _cmd_is_unitary,
    "weak-check": _cmd_weak_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="arthurtype",
        description="Exact decision procedures for good-parity representations",
    )
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("input", help="JSON request file, or - for stdin")
        sp.add_argument("--group", choices=["Sp", "SOodd"], default=None)
        sp.add_argument("--dim-bound", type=int, default=40)
        sp.add_argument("--oracle", default=None, help="oracle subprocess command")
        sp.add_argument("--format", choices=["json", "text"], default="json")
        sp.add_argument("--seed", type=int, default=0)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (SchemaError, ValueError, json.JSONDecodeError, OSError) as exc:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "error": str(exc)}))
        return EXIT_INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
