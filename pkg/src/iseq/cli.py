"""Command line front end.

Subcommands: analyze (formula files -> instruction script), replay (script ->
per-step report against a backend), verify (script against the original
files), stats (script size statistics).

Exit codes are part of the interface:
  0   success
  1   verify found a mismatch
  2   unreadable input (DIMACS/QDIMACS/script parse error, missing file)
  3   analyze hit prefixes that are not update-compatible
  4   replay finished but some step returned UNKNOWN
  5   backend problem (load failure, missing symbol, capability mismatch)
  64  usage error
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .analyzer import NotUpdateCompatibleError, analyze_sequence
from .dimacs import DimacsParseError, parse_dimacs, parse_qdimacs
from .formula import (
    FormulaKind,
    FormulaSequence,
    SequenceTooShortError,
    occurring_variables,
    restrict_prefix,
)
from .ipasir import LoadFailureError, MissingSymbolError, load_solver
from .replay import (
    BackendFailureError,
    CapabilityMismatchError,
    SolveStatus,
    format_report,
    reconstruct,
    replay,
)
from .script import MalformedScriptError, parse_script, script_stats, serialize_script
from .solvers import DEFAULT_QBF_VAR_CAP, ReferenceQbfSession, ReferenceSatSession

__all__ = ["main"]

# colon-separated directories searched for ipasir:<name> backend libraries
SOLVER_PATH_ENV = "ISEQ_SOLVER_PATH"

_STATS_ORDER = (
    "steps",
    "script_clauses",
    "script_distinct_clauses",
    "script_literals",
    "script_distinct_literals",
    "prefix_instructions",
    "concat_clauses",
    "concat_literals",
    "compression_ratio",
)


class _UsageError(Exception):
    pass


class _InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 64 instead of argparse's default 2
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="iseq", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="compile formula files into a script")
    p_analyze.add_argument("inputs", nargs="+", help="two or more DIMACS/QDIMACS files, in order")
    p_analyze.add_argument("--kind", choices=("auto", "sat", "qbf"), default="auto")
    p_analyze.add_argument("-o", "--output", default=None, help="script file (default stdout)")

    p_replay = sub.add_parser("replay", help="run a script against a backend")
    p_replay.add_argument("script")
    p_replay.add_argument(
        "--backend",
        default="reference-sat",
        help="reference-sat, reference-qbf, or ipasir:<library path>",
    )
    p_replay.add_argument("--timeout-ms", type=float, default=None)
    p_replay.add_argument("--qbf-var-cap", type=int, default=DEFAULT_QBF_VAR_CAP)
    p_replay.add_argument("-o", "--output", default=None, help="report file (default stdout)")

    p_verify = sub.add_parser("verify", help="check a script against the original files")
    p_verify.add_argument("script")
    p_verify.add_argument("originals", nargs="+", help="the formula files the script was built from")

    p_stats = sub.add_parser("stats", help="print script size statistics")
    p_stats.add_argument("script")

    return parser


def _sniff_kind(path: str) -> FormulaKind:
    # QDIMACS shows its hand with an e/a line between the header and clauses
    with open(path, "rb") as handle:
        for raw in handle:
            stripped = raw.strip()
            if not stripped or stripped.startswith(b"c") or stripped.startswith(b"p"):
                continue
            if stripped.split()[0] in (b"e", b"a"):
                return FormulaKind.QBF
            return FormulaKind.SAT
    return FormulaKind.SAT


def _parse_formula_files(paths: Sequence[str], kind: FormulaKind):
    parse = parse_qdimacs if kind is FormulaKind.QBF else parse_dimacs
    formulas = []
    for path in paths:
        with open(path, "rb") as handle:
            try:
                formulas.append(parse(handle))
            except DimacsParseError as exc:
                raise _InputError(f"{path}: {exc}") from None
    return formulas


def _write_bytes(data: bytes, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(output).write_bytes(data)


def _write_text(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="\n") as handle:
            handle.write(text)


def _cmd_analyze(args) -> int:
    if len(args.inputs) < 2:
        raise _UsageError("analyze needs at least 2 input files")
    try:
        kind = FormulaKind(args.kind) if args.kind != "auto" else _sniff_kind(args.inputs[0])
        formulas = _parse_formula_files(args.inputs, kind)
        sequence = FormulaSequence(tuple(formulas), kind)
    except (_InputError, OSError, SequenceTooShortError, ValueError) as exc:
        print(f"iseq: error: {exc}", file=sys.stderr)
        return 2
    try:
        script = analyze_sequence(sequence)
    except NotUpdateCompatibleError as exc:
        print(f"iseq: error: {exc}", file=sys.stderr)
        for violation in exc.report.violations:
            print(f"iseq:   condition ({violation.condition}): {violation.detail}", file=sys.stderr)
        return 3
    _write_bytes(serialize_script(script), args.output)
    return 0


def _resolve_library(spec: str) -> str:
    path = Path(spec)
    if path.is_absolute() or path.exists():
        return str(path)
    for directory in os.environ.get(SOLVER_PATH_ENV, "").split(os.pathsep):
        if directory:
            candidate = Path(directory) / spec
            if candidate.exists():
                return str(candidate)
    return spec


def _make_backend(spec: str, var_cap: int):
    if spec == "reference-sat":
        return ReferenceSatSession()
    if spec == "reference-qbf":
        return ReferenceQbfSession(var_cap)
    if spec.startswith("ipasir:"):
        library = spec[len("ipasir:"):]
        if not library:
            raise _UsageError("ipasir backend needs a library path: ipasir:<path>")
        return load_solver(_resolve_library(library)).session()
    raise _UsageError(f"unknown backend {spec!r}")


def _cmd_replay(args) -> int:
    try:
        with open(args.script, "rb") as handle:
            script = parse_script(handle)
    except (MalformedScriptError, OSError) as exc:
        print(f"iseq: error: {exc}", file=sys.stderr)
        return 2
    try:
        backend = _make_backend(args.backend, args.qbf_var_cap)
    except (LoadFailureError, MissingSymbolError) as exc:
        print(f"iseq: error: {exc}", file=sys.stderr)
        return 5
    try:
        results = replay(script, backend, timeout_ms=args.timeout_ms)
    except (CapabilityMismatchError, BackendFailureError) as exc:
        print(f"iseq: error: {exc}", file=sys.stderr)
        return 5
    finally:
        backend.close()
    _write_text(format_report(results), args.output)
    if any(r.status is SolveStatus.UNKNOWN for r in results):
        return 4
    return 0


def _cmd_verify(args) -> int:
    try:
        with open(args.script, "rb") as handle:
            script = parse_script(handle)
        originals = _parse_formula_files(args.originals, script.kind)
    except (MalformedScriptError, _InputError, OSError) as exc:
        print(f"iseq: error: {exc}", file=sys.stderr)
        return 2
    try:
        rebuilt = reconstruct(script)
    except ValueError as exc:
        print(f"verify: reconstruction failed: {exc}", file=sys.stderr)
        return 1
    if len(rebuilt) != len(originals):
        print(
            f"verify: script solves {len(rebuilt)} steps but {len(originals)} originals given",
            file=sys.stderr,
        )
        return 1
    for index, (got, expected) in enumerate(zip(rebuilt, originals), start=1):
        missing = sorted(expected.clauses - got.clauses)
        extra = sorted(got.clauses - expected.clauses)
        if missing or extra:
            print(f"verify: step {index}: clause mismatch", file=sys.stderr)
            for clause in missing[:10]:
                print(f"verify:   missing {' '.join(map(str, clause))} 0", file=sys.stderr)
            for clause in extra[:10]:
                print(f"verify:   extra   {' '.join(map(str, clause))} 0", file=sys.stderr)
            return 1
        # unused quantified variables may lawfully differ; compare what matters
        scope = occurring_variables(expected.clauses)
        got_prefix = restrict_prefix(got.prefix, scope)
        want_prefix = restrict_prefix(expected.prefix, scope)
        if got_prefix != want_prefix:
            print(f"verify: step {index}: prefix mismatch", file=sys.stderr)
            print(f"verify:   script   {_prefix_text(got_prefix)}", file=sys.stderr)
            print(f"verify:   original {_prefix_text(want_prefix)}", file=sys.stderr)
            return 1
    print(f"verify: ok ({len(rebuilt)} steps)")
    return 0


def _prefix_text(prefix) -> str:
    if not prefix.sets:
        return "(no prefix)"
    return " ".join(
        f"{qs.quantifier.value}{{{','.join(map(str, sorted(qs.variables)))}}}" for qs in prefix.sets
    )


def _cmd_stats(args) -> int:
    try:
        with open(args.script, "rb") as handle:
            script = parse_script(handle)
    except (MalformedScriptError, OSError) as exc:
        print(f"iseq: error: {exc}", file=sys.stderr)
        return 2
    stats = script_stats(script)
    for key in _STATS_ORDER:
        value = stats[key]
        if isinstance(value, float):
            value = round(value, 6)
        print(f"{key}={value}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="iseq: warning: %(message)s", stream=sys.stderr)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "replay":
            return _cmd_replay(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_stats(args)
    except _UsageError as exc:
        print(f"iseq: usage error: {exc}", file=sys.stderr)
        return 64


if __name__ == "__main__":
    sys.exit(main())
