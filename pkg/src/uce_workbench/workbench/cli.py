"""Command line client.

Runs in process by default; with --server the same operations go through
a running HTTP service.  Exit codes: 0 all checks pass, 1 some check
failed, 2 bad input or transport trouble.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..superalg import SuperAlgebraError
from .parser import AlgebraParseError, parse_algebra


class ClientError(Exception):
    """Transport or usage failure reported with exit code 2."""


def _read_algebra(path: str) -> tuple[str, str]:
    p = Path(path)
    return p.read_text(encoding="utf-8"), p.stem


def _fmt_part(part: dict) -> str:
    bits = []
    if part.get("free"):
        f = part["free"]
        bits.append(f"free^{f}" if f > 1 else "free")
    bits.extend(f"Z/{d}" for d in part.get("torsion", ()))
    return " + ".join(bits) if bits else "0"


def _fmt_inv(inv: dict | None) -> str:
    if inv is None:
        return "-"
    return f"[even: {_fmt_part(inv['even'])}, odd: {_fmt_part(inv['odd'])}]"


def _print_report(data: dict) -> bool:
    print(f"report v{data['version']}: {data['algebra']} over {data['domain']}")
    ok = True
    for r in data["results"]:
        ok = ok and r["pass"]
        line = f"{'PASS' if r['pass'] else 'FAIL'} {r['check']} ({r['m']},{r['n']}) {r['millis']}ms"
        if r.get("expected") is not None or r.get("computed") is not None:
            line += f" expected={_fmt_inv(r.get('expected'))} computed={_fmt_inv(r.get('computed'))}"
        if r.get("error"):
            line += f" error: {r['error']}"
        print(line)
    print("all checks pass" if ok else "SOME CHECKS FAILED")
    return ok


def _finish_report(data: dict, report_path: str | None) -> int:
    ok = _print_report(data)
    if report_path:
        Path(report_path).write_text(json.dumps(data, indent=2) + "\n",
                                     encoding="utf-8")
        print(f"report written to {report_path}")
    return 0 if ok else 1


def _post(server: str, route: str, payload: dict) -> dict:
    import httpx
    resp = httpx.post(server.rstrip("/") + route, json=payload, timeout=600.0)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail")
        except ValueError:
            detail = resp.text
        raise ClientError(f"server error {resp.status_code}: {detail}")
    return resp.json()


def cmd_parse(args) -> int:
    text, label = _read_algebra(args.file)
    if args.server:
        data = _post(args.server, "/parse", {"text": text, "label": label})
        ring, rank, names, parity, unit = (data["ring"], data["rank"],
                                           data["names"], data["parity"],
                                           data["unit"])
    else:
        A = parse_algebra(text, label)
        ring, rank, names, parity, unit = (str(A.domain), A.rank, A.names,
                                           list(A.parity), A.names[A.unit])
    shown = " ".join(f"{nm}'" if p else nm for nm, p in zip(names, parity))
    print(f"ok: {label}: rank {rank} over {ring}; unit {unit}; "
          f"basis {shown} (' marks odd)")
    return 0


def cmd_h2(args) -> int:
    text, label = _read_algebra(args.algebra)
    if args.server:
        data = _post(args.server, "/h2", {"text": text, "label": label,
                                          "m": args.m, "n": args.n,
                                          "target": args.target})
    else:
        from .suite import run_single
        A = parse_algebra(text, label)
        rep = run_single(A, f"h2-{args.target}", args.m, args.n)
        data = rep.model_dump(by_alias=True)
    return _finish_report(data, args.report)


def cmd_verify(args) -> int:
    text, label = _read_algebra(args.algebra)
    if args.server:
        data = _post(args.server, "/verify", {"text": text, "label": label,
                                              "suite": args.suite})
    else:
        if args.suite != "small-rank":
            raise ClientError(f"unknown suite {args.suite!r}; only small-rank exists")
        from .suite import run_suite
        A = parse_algebra(text, label)
        rep = run_suite(A)
        data = rep.model_dump(by_alias=True)
    return _finish_report(data, args.report)


def cmd_cocycle(args) -> int:
    text, label = _read_algebra(args.algebra)
    if args.server:
        data = _post(args.server, "/cocycle-check",
                     {"text": text, "label": label, "variant": args.variant})
    else:
        from ..steinberg import build_st
        from ..cocycle import build_psi, check_super_2cocycle
        m, n = (3, 1) if args.variant == "3,1" else (2, 2)
        A = parse_algebra(text, label)
        st = build_st(m, n, A)
        psi = build_psi(st)
        rep = check_super_2cocycle(st.lie, psi.values, psi.w_parities,
                                   psi.w_moduli)
        data = {"variant": args.variant, "passed": rep.passed,
                "verdicts": dict(rep.verdicts),
                "first_failure": rep.first_failure}
    print(f"cocycle variant {data['variant']} on {label}:")
    for axiom, good in data["verdicts"].items():
        print(f"  {'ok  ' if good else 'FAIL'} {axiom}")
    if data.get("first_failure"):
        print(f"  first failure: {data['first_failure']}")
    print("cocycle axioms hold" if data["passed"] else "COCYCLE CHECK FAILED")
    return 0 if data["passed"] else 1


def cmd_serve(args) -> int:
    import uvicorn
    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="uce-workbench",
        description="universal central extensions of matrix Lie superalgebras")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and validate an algebra file")
    p.add_argument("file")
    p.add_argument("--server", default=None, metavar="URL")
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("h2", help="second homology of sl, st or st-sharp")
    p.add_argument("--algebra", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", choices=("sl", "st", "st-sharp"), default="sl")
    p.add_argument("--report", default=None, metavar="OUT.json")
    p.add_argument("--server", default=None, metavar="URL")
    p.set_defaults(fn=cmd_h2)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--algebra", required=True)
    p.add_argument("--suite", default="small-rank")
    p.add_argument("--report", default=None, metavar="OUT.json")
    p.add_argument("--server", default=None, metavar="URL")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("cocycle-check", help="check the explicit 2-cocycle")
    p.add_argument("--algebra", required=True)
    p.add_argument("--variant", choices=("3,1", "2,2"), required=True)
    p.add_argument("--server", default=None, metavar="URL")
    p.set_defaults(fn=cmd_cocycle)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return top


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except AlgebraParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except SuperAlgebraError as exc:
        print(f"algebra rejected: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"cannot read {exc.filename}", file=sys.stderr)
        return 2
    except ClientError as exc:
        print(str(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
