"""Batch command-line front end.

Each invocation runs one command through the service layer, prints the
JSON report to stdout (machine-readable, byte-stable for a fixed
invocation), writes a one-line human summary to stderr, and exits 0 on
pass/accept, 1 on refuted/reject, 2 on inconclusive, 3 on usage or
premise errors.  ``RANKKIT_BUDGET`` supplies the default step budget.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import client
from .api import BUDGET_ENV


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=int, default=None,
                   help=f"step budget (default: ${BUDGET_ENV} or 100000)")
    p.add_argument("--server", default=None,
                   help="URL of a running service; default runs in-process")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankkit",
        description="verify rank/compression constructions over budgeted computation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-rank", help="check a function as a ranker of a set")
    p.add_argument("--fn", required=True)
    p.add_argument("--set", dest="set_expr", required=True)
    p.add_argument("--max-len", type=int, default=10)
    p.add_argument("--recheck", action="store_true")
    _add_common(p)

    p = sub.add_parser("verify-compress", help="check a function as a compressor of a set")
    p.add_argument("--fn", required=True)
    p.add_argument("--set", dest="set_expr", required=True)
    p.add_argument("--max-len", type=int, default=10)
    p.add_argument("--cover-count", type=int, default=0)
    p.add_argument("--recheck", action="store_true")
    _add_common(p)

    p = sub.add_parser("verify-1tt", help="check a one-query reduction between two sets")
    p.add_argument("--reduction", required=True)
    p.add_argument("--set", dest="set_expr", required=True)
    p.add_argument("--set2", dest="set2_expr", required=True)
    p.add_argument("--max-len", type=int, default=8)
    _add_common(p)

    p = sub.add_parser("construct", help="build a named construction and run its checks")
    p.add_argument("--tag", required=True,
                   help="thm103 | thm123 | prop106 | beta1 | thm169 | retrace | separator")
    p.add_argument("--set", dest="set_expr", default=None)
    p.add_argument("--max-len", type=int, default=8)
    _add_common(p)

    p = sub.add_parser("decide", help="run a decision procedure on one string")
    p.add_argument("--proc", required=True, help="thm25 | thm167 | appendix-a")
    p.add_argument("--set", dest="set_expr", required=True)
    p.add_argument("--x", required=True, help="query string ('eps' for the empty string)")
    _add_common(p)

    p = sub.add_parser("diagonalize", help="run the anti-compression stage construction")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--stage-budget", type=int, default=10_000)
    p.add_argument("--horizon", type=int, default=1_000)
    p.add_argument("--no-audit", action="store_true")
    _add_common(p)

    p = sub.add_parser("isomorphism", help="merge two one-one maps into a bijection table")
    p.add_argument("--f", required=True, help="identity | swap01 | pad-eps")
    p.add_argument("--g", required=True)
    p.add_argument("--set", dest="set_expr", required=True)
    p.add_argument("--set2", dest="set2_expr", required=True)
    p.add_argument("--n", type=int, default=64)
    _add_common(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


_ROUTES = {
    "verify-rank": "/verify/rank",
    "verify-compress": "/verify/compress",
    "verify-1tt": "/verify/1tt",
    "construct": "/construct",
    "decide": "/decide",
    "diagonalize": "/diagonalize",
    "isomorphism": "/isomorphism",
}


def _payload(args: argparse.Namespace) -> dict:
    skip = {"command", "server", "no_audit"}
    payload = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    if args.command == "diagonalize":
        payload["audit"] = not args.no_audit
    if "set_expr" in payload:
        payload["set"] = payload.pop("set_expr")
    if "set2_expr" in payload:
        payload["set2"] = payload.pop("set2_expr")
    return payload


def _summary(command: str, status: int, report: dict) -> str:
    label = {0: "pass", 1: "refuted", 2: "inconclusive", 3: "error"}[status]
    if "answer" in report:
        label = report["answer"]
    if "error" in report:
        return f"{command}: error: {report['error'].get('message', '')}"
    return f"{command}: {label}"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0
    body = client.call(_ROUTES[args.command], _payload(args), server=args.server)
    status = body.get("status", 3)
    report = body.get("report", {})
    sys.stdout.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")
    sys.stderr.write(_summary(args.command, status, report) + "\n")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
