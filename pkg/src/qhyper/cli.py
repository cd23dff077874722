"""Command-line front end.

Exit codes: 0 when every check behaves as expected, 1 when an expected
identity mismatches (or an expected non-identity verifies), 2 for usage
errors and unknown ids, 3 when a truncation order is too small.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import catalog as cat
from . import engine, theorems
from .series import InsufficientTruncation, Monomial, serialize

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _pairs(values: Sequence[str] | None, what: str) -> dict[str, int]:
    out = {}
    for item in values or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageError(f"{what} expects name=value, got {item!r}")
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise UsageError(f"{what} {name}: {value!r} is not an integer") from None
    return out


def _unknown(kind: str, name: str, valid: Sequence[str]) -> UsageError:
    return UsageError(f"unknown {kind} {name!r}; valid ids:\n  " + "\n  ".join(valid))


def _verification_ids() -> list[str]:
    return [*cat.ids(), *(c.name for c in engine.CHAINS), *(f"{a}->{b}" for a, b in engine.LIMITS)]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--qmax", type=int, default=20, metavar="N",
                        help="truncation order for infinite identities (default: 20)")
    common.add_argument("--cap", action="append", metavar="VAR=N",
                        help="cap the exponent of a parameter (repeatable)")
    common.add_argument("--set", action="append", dest="assign", metavar="NAME=VALUE",
                        help="integer assignment such as L=4 or r=2 (repeatable)")
    common.add_argument("--json", action="store_true", help="emit JSON lines instead of a table")
    common.add_argument("--jobs", type=int, default=1, metavar="K", help="worker processes (default: 1)")
    common.add_argument("--nmax", type=int, default=30, metavar="N",
                        help="largest n for theorem checks and cross-checks (default: 30)")
    common.add_argument("--timing", action="store_true", help="record elapsed_ms in reports")

    p = argparse.ArgumentParser(prog="qhyper", description="Verify q-series identities and partition theorems.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("catalog", parents=[common], help="list identities, chains, limits and theorems")
    v = sub.add_parser("verify", parents=[common], help="verify one identity, chain or limit (finite->infinite)")
    v.add_argument("id")
    va = sub.add_parser("verify-all", parents=[common], help="verify the whole catalog, limits and chains")
    va.add_argument("--sweep-default", action="store_true",
                    help="sweep exact identities over their default bound tuples")
    va.add_argument("--only", action="append", metavar="ID", help="restrict to these ids (repeatable)")
    s = sub.add_parser("series", parents=[common], help="print one side of an identity")
    s.add_argument("id")
    s.add_argument("--side", choices=("lhs", "rhs"), default="lhs")
    s.add_argument("--coeff", type=int, metavar="E", help="print only the coefficients of q^E")
    c = sub.add_parser("count", parents=[common], help="values of each side of a partition theorem at n")
    c.add_argument("theorem")
    c.add_argument("--n", type=int, required=True)
    ch = sub.add_parser("check", parents=[common], help="check a partition theorem for n <= nmax")
    for q in (c, ch):
        q.add_argument("--m", type=int, help="thm-H modulus")
        q.add_argument("--residues", metavar="J1,J2,...", help="thm-H residues")
        q.add_argument("--floor", choices=theorems.FLOORS, help="thm-H floor reading (default: try both)")
    ch.add_argument("theorem")
    x = sub.add_parser("crosscheck", parents=[common], help="generating function versus enumeration")
    x.add_argument("id")
    return p


def _residues(args) -> tuple[int, ...] | None:
    if args.residues is None:
        return None
    try:
        return tuple(int(t) for t in args.residues.split(","))
    except ValueError:
        raise UsageError(f"--residues expects comma-separated integers, got {args.residues!r}") from None


def _emit_reports(reports, as_json: bool, out) -> int:
    bad = 0
    for r in reports:
        if as_json:
            print(r.to_json(), file=out)
        else:
            mark = "ok  " if r.passed else "FAIL"
            where = ""
            if r.first_mismatch:
                fm = r.first_mismatch
                where = f"  first mismatch {fm['monomial']}: lhs {fm['lhs']}, rhs {fm['rhs']}"
            extra = f"  ({r.message})" if r.message else ""
            assign = ",".join(f"{k}={v}" for k, v in r.assignment.items())
            print(f"{mark} {r.id:<32} {assign:<24} {r.status}{where}{extra}", file=out)
        bad += not r.passed
    if not as_json:
        print(f"{len(reports) - bad}/{len(reports)} as expected", file=out)
    return EXIT_OK if bad == 0 else EXIT_MISMATCH


def _cmd_catalog(args, out) -> int:
    if args.json:
        for e in cat.catalog():
            print(json.dumps({"id": e.id, "kind": "identity", "mode": e.mode, "expected": e.expected,
                              "symbols": list(e.symbols), "anchor": e.anchor}), file=out)
        for c in engine.CHAINS:
            print(json.dumps({"id": c.name, "kind": "chain", "expected": c.expected}), file=out)
        for a, b in engine.LIMITS:
            print(json.dumps({"id": f"{a}->{b}", "kind": "limit"}), file=out)
        for t in theorems.theorem_ids():
            print(json.dumps({"id": t, "kind": "theorem"}), file=out)
        return EXIT_OK
    for e in cat.catalog():
        tag = "" if e.expected == cat.IDENTITY else "  [non-identity]"
        print(f"{e.id:<32} {e.mode:<9} {e.anchor}{tag}", file=out)
    print("\nchains:", file=out)
    for c in engine.CHAINS:
        print(f"  {c.name}", file=out)
    print("\nlimits:", file=out)
    for a, b in engine.LIMITS:
        print(f"  {a}->{b}", file=out)
    print("\ntheorems:", file=out)
    for t in theorems.theorem_ids():
        print(f"  {t}", file=out)
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    A, caps = _pairs(args.assign, "--set"), _pairs(args.cap, "--cap")
    name = args.id
    if name in cat.ids():
        rep = engine.verify(name, A, args.qmax, caps, timing=args.timing)
    elif name in {c.name for c in engine.CHAINS}:
        rep = engine.run_chain(engine.chain(name), args.qmax, timing=args.timing)
    elif "->" in name and tuple(name.split("->", 1)) in engine.LIMITS:
        fin, inf = name.split("->", 1)
        rep = engine.verify_limit(fin, inf, args.qmax, timing=args.timing)
    else:
        raise _unknown("id", name, _verification_ids())
    return _emit_reports([rep], args.json, out)


def _cmd_verify_all(args, out) -> int:
    items = engine.work_items(args.qmax, args.sweep_default)
    if args.only:
        wanted = set(args.only)
        unknown = wanted - set(_verification_ids())
        if unknown:
            raise _unknown("id", sorted(unknown)[0], _verification_ids())
        items = [it for it in items if _item_id(it) in wanted]
    reports = engine.verify_all(args.qmax, args.sweep_default, args.jobs, args.timing, items)
    return _emit_reports(reports, args.json, out)


def _item_id(item) -> str:
    kind, a, b, _ = item
    return f"{a}->{b}" if kind == "limit" else a


def _cmd_series(args, out) -> int:
    if args.id not in cat.ids():
        raise _unknown("identity", args.id, cat.ids())
    s = cat.build_side(args.id, args.side, _pairs(args.assign, "--set"), args.qmax, _pairs(args.cap, "--cap"))
    if args.coeff is None:
        print(serialize(s), file=out)
        return EXIT_OK
    if s.q_cap is not None and args.coeff > s.q_cap:
        raise InsufficientTruncation(f"q^{args.coeff} is beyond the order q^{s.q_cap}", required=args.coeff)
    terms = {str(Monomial(0, m.params)): c for m, c in s.items() if m.q_exp == args.coeff}
    if args.json:
        print(json.dumps({"id": args.id, "side": args.side, "q_exp": args.coeff, "coefficients": terms}), file=out)
    else:
        print(" + ".join(f"{c}*{m}" if m != "1" else str(c) for m, c in terms.items()) or "0", file=out)
    return EXIT_OK


def _theorem_id(name: str) -> str:
    if name not in theorems.theorem_ids():
        raise _unknown("theorem", name, theorems.theorem_ids())
    return name


def _cmd_count(args, out) -> int:
    values = theorems.count(_theorem_id(args.theorem), args.n, args.m, _residues(args), args.floor or "parts")
    if args.json:
        print(json.dumps({"id": args.theorem, "n": args.n, "sides": values}), file=out)
    else:
        for side, v in values.items():
            print(f"{side}: {v}", file=out)
    return EXIT_OK


def _cmd_check(args, out) -> int:
    rep = theorems.theorem_check(_theorem_id(args.theorem), args.nmax, args.m, _residues(args), args.floor)
    if args.json:
        print(rep.to_json(), file=out)
    else:
        print(f"{rep.id} n<={rep.n_max}: {rep.status}", file=out)
        if rep.first_failure:
            print(f"  first failure: {rep.first_failure}", file=out)
        for inst, readings in rep.detail.items():
            print(f"  {inst}: " + ", ".join(f"floor={k} {v}" for k, v in readings.items()), file=out)
    return EXIT_OK if rep.passed else EXIT_MISMATCH


def _cmd_crosscheck(args, out) -> int:
    checks = theorems.crosschecks_for(args.id)
    if not checks:
        raise _unknown("identity with cross-checks", args.id,
                       sorted({c.identity for c in theorems.CROSSCHECKS}))
    bad = 0
    for c in checks:
        rep = theorems.run_crosscheck(c, min(args.nmax, c.n_max))
        bad += not rep.passed
        if args.json:
            print(rep.to_json(), file=out)
        else:
            tail = f"  at n={rep.first_failure['n']}: {rep.first_failure}" if rep.first_failure else ""
            print(f"{'ok  ' if rep.passed else 'FAIL'} {rep.id:<28} n<={rep.n_max} {rep.status}{tail}", file=out)
    return EXIT_OK if bad == 0 else EXIT_MISMATCH


COMMANDS = {
    "catalog": _cmd_catalog, "verify": _cmd_verify, "verify-all": _cmd_verify_all, "series": _cmd_series,
    "count": _cmd_count, "check": _cmd_check, "crosscheck": _cmd_crosscheck,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except InsufficientTruncation as exc:
        need = f"; required minimum: {exc.required}" if exc.required is not None else ""
        print(f"insufficient truncation: {exc}{need}", file=err)
        return EXIT_CAP
    except cat.DomainError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
