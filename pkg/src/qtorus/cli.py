"""Command-line interface.

Three subcommands:

``qtorus verify``
    Run catalog items and emit one canonical JSON report per line followed
    by a summary line (``--format json`` for a single object, ``--format
    text`` for a plain-text rendering).  Exit status: 0 when every selected
    item passes, 1 when any item reports FAIL, 2 on configuration or
    certificate errors.

``qtorus list``
    Print the catalog with descriptions and default parameters.

``qtorus replay <file>``
    Parse a derivation-script file, re-apply every step, and report the
    outcome.  Exit status 0 when the replay succeeds, 1 when it does not,
    2 when the file cannot be parsed.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

from .catalog import (
    SCHEMA_VERSION,
    identity_names,
    list_identities,
    verify_identity,
)
from .errors import InvalidParams, KernelError
from .words import parse_script, render_word, replay

__all__ = ["main"]


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _selected_names(raw: Optional[list[str]]) -> list[str]:
    chunks: list[str] = []
    for item in raw or ["all"]:
        chunks.extend(x.strip() for x in item.split(",") if x.strip())
    if not chunks or "all" in chunks:
        return identity_names()
    known = set(identity_names())
    out: list[str] = []
    for name in chunks:
        if name not in known:
            raise InvalidParams(f"unknown identity {name!r}")
        if name not in out:
            out.append(name)
    # keep catalog order regardless of request order
    order = {name: i for i, name in enumerate(identity_names())}
    out.sort(key=order.__getitem__)
    return out


def _cmd_verify(args: argparse.Namespace) -> int:
    try:
        names = _selected_names(args.identity)

        def run(name: str):
            return verify_identity(
                name,
                sites=args.sites,
                window=args.window,
                precision=args.precision,
                seed=args.seed,
            )

        if args.jobs > 1:
            with ThreadPoolExecutor(max_workers=args.jobs) as pool:
                reports = list(pool.map(run, names))
        else:
            reports = [run(name) for name in names]
    except KernelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    dicts = [r.to_dict() for r in reports]
    passed = sum(r.status == "PASS" for r in reports)
    failed = len(reports) - passed
    overall = "PASS" if failed == 0 else "FAIL"
    summary = {
        "schema_version": SCHEMA_VERSION,
        "summary": {
            "total": len(reports),
            "passed": passed,
            "failed": failed,
            "status": overall,
        },
    }
    if args.format == "jsonl":
        lines = [_canonical(d) for d in dicts] + [_canonical(summary)]
        text = "\n".join(lines) + "\n"
    elif args.format == "json":
        text = _canonical({"reports": dicts, **summary}) + "\n"
    else:
        blocks = [r.to_text() for r in reports]
        blocks.append(
            f"summary: total={len(reports)} passed={passed} failed={failed} {overall}"
        )
        text = "\n\n".join(blocks) + "\n"
    _emit(text, args.output)
    return 0 if failed == 0 else 1


def _cmd_list(args: argparse.Namespace) -> int:
    lines = [_canonical(entry) for entry in list_identities()]
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            script = parse_script(fh.read())
    except (OSError, KernelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    result = replay(script)
    out = {
        "name": script.name,
        "ok": result.ok,
        "steps": len(script.steps),
        "steps_applied": result.steps_applied,
        "final": render_word(result.final),
        "error": result.error,
    }
    _emit(_canonical(out) + "\n", args.output)
    return 0 if result.ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtorus",
        description="exact verification of q-exponential identities on a chain",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="verify catalog identities")
    verify.add_argument(
        "--identity",
        action="append",
        metavar="NAME[,NAME...]",
        help="identities to verify (repeatable, comma-separated, or 'all')",
    )
    verify.add_argument("--sites", type=int, help="number of chain sites")
    verify.add_argument("--window", type=int, help="monomial window half-width")
    verify.add_argument("--precision", type=int, help="q-adic precision")
    verify.add_argument("--seed", type=int, help="seed for the rewrite walk")
    verify.add_argument("--jobs", type=int, default=1, help="parallel workers")
    verify.add_argument("--output", help="write the report here instead of stdout")
    verify.add_argument(
        "--format",
        choices=("jsonl", "json", "text"),
        default="jsonl",
        help="report layout",
    )
    verify.set_defaults(func=_cmd_verify)

    lister = sub.add_parser("list", help="list catalog identities")
    lister.add_argument("--output", help="write the listing here instead of stdout")
    lister.set_defaults(func=_cmd_list)

    rep = sub.add_parser("replay", help="replay a derivation-script file")
    rep.add_argument("file", help="script file to replay")
    rep.add_argument("--output", help="write the outcome here instead of stdout")
    rep.set_defaults(func=_cmd_replay)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
