"""Command-line interface.

JSON results go to ``--out`` (or stdout); one-line human summaries go to
stderr.  Exit codes:

    0  success / state inside / all checks passed
    1  state outside (``member``) or a verification check failed
    2  usage or parse error
    3  double-description size cap exceeded (see PSLAT_DD_CAP)
    4  input is not a GHZ-diagonal state (negative entry, a != b)
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .classify import NegativeEntry, NotGHZDiagonal, XState, default_classifier, p_from_spectrum, spectrum_from_x
from .cone import member
from .dd import ResourceExceeded
from .exact import format_vec, parse_vec, rat, vec_to_json
from .lattice import Evaluator, ExprSyntaxError, parse
from .paper import replay, verify_chain_small

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP, EXIT_DOMAIN = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def dumps(obj, indent: int = 0) -> str:
    """JSON with arrays of scalars kept on one line (vectors stay readable)."""
    pad = "  " * (indent + 1)
    if isinstance(obj, dict) and obj:
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list) and obj and any(isinstance(x, (list, dict)) for x in obj):
        items = [pad + dumps(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj)


def _emit(data: dict, out: str | None):
    text = dumps(data) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _say(msg: str):
    print(msg, file=sys.stderr)


def _state(text: str):
    try:
        return parse_vec(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --state {text!r}: {exc}") from exc


def _quad(text: str, flag: str):
    try:
        v = tuple(rat(s) for s in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad {flag} {text!r}: {exc}") from exc
    if len(v) != 4:
        raise UsageError(f"{flag} needs 4 entries")
    return v


def cmd_eval(args) -> int:
    cone = Evaluator()(parse(args.expr))
    _emit(cone.to_json(), args.out)
    _say(f"{args.expr}: {len(cone.vrep)} rays, {len(cone.hrep)} facets, dimension {cone.dim_hint}")
    return EXIT_OK


def cmd_member(args) -> int:
    p = _state(args.state)
    cone = Evaluator()(parse(args.expr))
    cert = member(p, cone)
    verdict = "Inside" if cert.inside else "Outside"
    _emit({"state": vec_to_json(p), "expr": args.expr, **cert.to_json()}, args.out)
    _say(verdict + ("" if cert.inside else f": witness {format_vec(cert.witness)} pairs to {cert.value}"))
    return EXIT_OK if cert.inside else EXIT_FAIL


def cmd_classify(args) -> int:
    prof = default_classifier().profile(_state(args.state))
    _emit(prof.to_json(certificates=args.certificates), args.out)
    _say(f"class {prof.class_bits}")
    return EXIT_OK


def cmd_convert(args) -> int:
    if args.state is not None:
        x = p_from_spectrum(_state(args.state))
        _emit(x.to_json(), args.out)
        _say(f"a=b={format_vec(x.a)} c={format_vec(x.c)}")
        return EXIT_OK
    if None in (args.a, args.b, args.c):
        raise UsageError("convert needs --state or all of --a, --b, --c")
    x = XState(_quad(args.a, "--a"), _quad(args.b, "--b"), _quad(args.c, "--c"))
    p = spectrum_from_x(x)
    _emit({"state": vec_to_json(p)}, args.out)
    _say(f"p={format_vec(p)}")
    return EXIT_OK


def cmd_chain(args) -> int:
    if args.max_n < 1:
        raise UsageError("--max-n must be >= 1")
    if args.mode == "replay":
        rep = replay(args.max_n)
        for n in range(1, args.max_n + 1):
            good = rep.state_membership_ok[n] and rep.witness_membership_ok[n - 1]
            _say(f"n={n}: {'strict' if good and rep.pairing_values[n - 1] == -2 else 'FAILED'}"
                 f" (pairing {rep.pairing_values[n - 1]})")
        _emit({"mode": "replay", "ok": rep.ok, "max_n": args.max_n,
               "pairing_values": [str(v) for v in rep.pairing_values]}, args.out)
        return EXIT_OK if rep.ok else EXIT_FAIL

    links = []

    def progress(link, cone):
        links.append(link)
        _say(f"n={link.n}: {'strict' if link.ok else 'FAILED'} ({len(cone.vrep)} rays, {len(cone.hrep)} facets)")

    try:
        verify_chain_small(args.max_n, progress=progress)
    except ResourceExceeded as exc:
        _emit({"mode": "full", "ok": False, "error": str(exc),
               "links": [l.to_json() for l in links]}, args.out)
        _say(f"stopped after n={len(links)}: {exc}")
        return EXIT_CAP
    ok = all(l.ok for l in links)
    _emit({"mode": "full", "ok": ok, "links": [l.to_json() for l in links]}, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_paper_verify(args) -> int:
    if args.max_n < 0:
        raise UsageError("--max-n must be >= 0")
    rep = replay(args.max_n)
    data = rep.to_json()
    if args.summary:
        data.pop("steps")
    _emit(data, args.out)
    _say(f"replay to n={args.max_n}: {'all checks passed' if rep.ok else 'FAILED'}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pslat", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a lattice expression to an explicit cone")
    p.add_argument("expr")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("member", help="decide membership with a certificate")
    p.add_argument("--state", required=True)
    p.add_argument("--expr", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("classify", help="membership profile over the 18 named cones")
    p.add_argument("--state", required=True)
    p.add_argument("--certificates", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("chain", help="check the strict chain A < f(A) < f^2(A) < ...")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--mode", choices=["full", "replay"], default="replay")
    p.add_argument("--out")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("paper-verify", help="replay both inductions; JSON report")
    p.add_argument("--max-n", type=int, default=100)
    p.add_argument("--summary", action="store_true", help="omit per-step records")
    p.add_argument("--out")
    p.set_defaults(func=cmd_paper_verify)

    p = sub.add_parser("convert", help="spectrum <-> X-matrix form")
    p.add_argument("--state")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--c")
    p.add_argument("--out")
    p.set_defaults(func=cmd_convert)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ExprSyntaxError as exc:
        _say(f"syntax error: {exc}")
        return EXIT_USAGE
    except UsageError as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE
    except ResourceExceeded as exc:
        _say(f"error: {exc}")
        return EXIT_CAP
    except (NotGHZDiagonal, NegativeEntry) as exc:
        _say(f"error: {exc}")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
