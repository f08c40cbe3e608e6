"""``hpcalc <command-file> [--seed N] [--samples N] [--json PATH] [--strict]``.

Exit status: 0 when every check passes, 1 when a check fails, 2 on input errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from .lang import ParseError, parse
from .session import SessionError, elaborate, run

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hpcalc", description="Run a periodic cyclic homology command file.")
    p.add_argument("file", help="command file, or - for stdin")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default 0)")
    p.add_argument("--samples", type=int, default=100, help="samples per property check (default 100)")
    p.add_argument("--json", metavar="PATH", help="write the check report as JSON")
    p.add_argument("--strict", action="store_true", help="require cycles where the theory does")
    p.add_argument("-q", "--quiet", action="store_true", help="only print failures and the summary")
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    name = "<stdin>" if args.file == "-" else args.file
    try:
        text = _read(args.file)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"{name}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        env = elaborate(parse(text))
    except (ParseError, SessionError) as exc:
        print(f"{name}:{exc.line}:{exc.col}: error: {exc.message}", file=sys.stderr)
        return EXIT_INPUT

    result = run(env, seed=args.seed, samples=args.samples, strict=args.strict)
    for line in result.lines:
        print(line)
    for c in result.checks:
        if args.quiet and c.passed:
            continue
        tail = f": {c.witness}" if c.witness and not c.passed else ""
        print(f"{c.status.upper():5} {c.name} [{c.anchor}] {c.millis:.1f}ms{tail}")
    n_fail = sum(not c.passed for c in result.checks)
    print(f"{len(result.checks) - n_fail}/{len(result.checks)} checks passed")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump([c.as_dict() for c in result.checks], fh, indent=2)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
