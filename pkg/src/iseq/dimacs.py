"""Streaming DIMACS CNF / QDIMACS PCNF reader and canonical writer.

The parsers are total over byte streams: any input either yields a formula or
raises a DimacsParseError carrying a 1-based line number.  Encoding is ASCII;
bytes >= 0x80 are only tolerated inside comment lines.  Declared header counts
are cross-checked and mismatches surface as warnings, not errors.
"""

from __future__ import annotations

import io
import logging
import re
from dataclasses import dataclass
from typing import BinaryIO, Iterator, Optional, Union

from .formula import (
    Clause,
    PcnfFormula,
    Prefix,
    QuantifiedSet,
    Quantifier,
    clause_order,
    normalize_clause,
    occurring_variables,
)

__all__ = [
    "DimacsParseError",
    "MalformedHeaderError",
    "UnterminatedClauseError",
    "NonIntegerTokenError",
    "FreeVariableError",
    "QuantifierAfterClauseError",
    "DuplicateQuantificationError",
    "ParseDiagnostic",
    "parse_dimacs",
    "parse_qdimacs",
    "write_qdimacs",
]

log = logging.getLogger(__name__)

_INT_RE = re.compile(r"^-?\d+$")
_UINT_RE = re.compile(r"^\d+$")


class DimacsParseError(ValueError):
    """Base diagnostic for unreadable DIMACS/QDIMACS input."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class MalformedHeaderError(DimacsParseError):
    pass


class UnterminatedClauseError(DimacsParseError):
    pass


class NonIntegerTokenError(DimacsParseError):
    pass


class FreeVariableError(DimacsParseError):
    pass


class QuantifierAfterClauseError(DimacsParseError):
    pass


class DuplicateQuantificationError(DimacsParseError):
    pass


@dataclass(frozen=True)
class ParseDiagnostic:
    """A non-fatal observation about the input (header count drift etc.)."""

    line: int
    message: str


def _iter_lines(data: Union[bytes, BinaryIO]) -> Iterator[tuple[int, bytes]]:
    if isinstance(data, (bytes, bytearray)):
        stream: BinaryIO = io.BytesIO(bytes(data))
    else:
        stream = data
    for number, raw in enumerate(stream, start=1):
        yield number, raw


def _parse(
    data: Union[bytes, BinaryIO],
    *,
    quantifiers_allowed: bool,
    require_closed: bool,
    diagnostics: Optional[list[ParseDiagnostic]],
) -> PcnfFormula:
    declared_vars: Optional[int] = None
    declared_clauses: Optional[int] = None
    prefix_sets: list[QuantifiedSet] = []
    quantified: set[int] = set()
    clauses: list[Clause] = []
    clause_count = 0
    current: Optional[list[int]] = None
    pending_quant: Optional[Quantifier] = None
    pending_vars: list[int] = []
    saw_clause_token = False
    first_var_line: dict[int, int] = {}
    last_line = 0

    def warn(line: int, message: str) -> None:
        log.warning("line %d: %s", line, message)
        if diagnostics is not None:
            diagnostics.append(ParseDiagnostic(line, message))

    for line_no, raw in _iter_lines(data):
        last_line = line_no
        stripped = raw.strip()
        if not stripped or stripped.startswith(b"c"):
            continue
        for byte in stripped:
            if byte >= 0x80:
                raise DimacsParseError(line_no, f"non-ASCII byte 0x{byte:02x} outside a comment")
        tokens = stripped.decode("ascii").split()

        if declared_vars is None:
            if (
                len(tokens) != 4
                or tokens[0] != "p"
                or tokens[1] != "cnf"
                or not _UINT_RE.match(tokens[2])
                or not _UINT_RE.match(tokens[3])
            ):
                raise MalformedHeaderError(line_no, "expected header 'p cnf <vars> <clauses>'")
            declared_vars = int(tokens[2])
            declared_clauses = int(tokens[3])
            continue

        for token in tokens:
            if token in ("e", "a"):
                if current is not None or pending_quant is not None:
                    raise NonIntegerTokenError(line_no, f"unexpected {token!r} before a terminating 0")
                if not quantifiers_allowed:
                    raise NonIntegerTokenError(line_no, f"unexpected token {token!r} in a CNF file")
                if saw_clause_token:
                    raise QuantifierAfterClauseError(line_no, "quantifier line after the first clause")
                pending_quant = Quantifier(token)
                pending_vars = []
                continue
            if not _INT_RE.match(token):
                if token == "p" and current is None and pending_quant is None:
                    raise MalformedHeaderError(line_no, "duplicate 'p cnf' header")
                raise NonIntegerTokenError(line_no, f"expected an integer, got {token!r}")
            value = int(token)

            if pending_quant is not None:
                if value == 0:
                    if pending_vars:
                        new_vars = frozenset(pending_vars)
                        if prefix_sets and prefix_sets[-1].quantifier is pending_quant:
                            merged = prefix_sets[-1].variables | new_vars
                            prefix_sets[-1] = QuantifiedSet(pending_quant, merged)
                        else:
                            prefix_sets.append(QuantifiedSet(pending_quant, new_vars))
                    pending_quant = None
                    pending_vars = []
                elif value < 0:
                    raise DimacsParseError(line_no, f"negative variable {value} in a quantifier line")
                else:
                    if value in quantified:
                        raise DuplicateQuantificationError(line_no, f"variable {value} quantified twice")
                    quantified.add(value)
                    pending_vars.append(value)
                continue

            saw_clause_token = True
            if current is None:
                current = []
            if value == 0:
                if not current:
                    raise DimacsParseError(line_no, "empty clause (lone 0) is not accepted")
                clauses.append(normalize_clause(current))
                clause_count += 1
                current = None
            else:
                var = abs(value)
                if var not in first_var_line:
                    first_var_line[var] = line_no
                current.append(value)

    if declared_vars is None:
        raise MalformedHeaderError(max(last_line, 1), "missing 'p cnf' header")
    if pending_quant is not None:
        raise UnterminatedClauseError(last_line, "quantifier line not terminated by 0 at end of input")
    if current is not None:
        raise UnterminatedClauseError(last_line, "clause not terminated by 0 at end of input")

    clause_set = frozenset(clauses)
    used = occurring_variables(clause_set)
    if require_closed:
        free = used - quantified
        if free:
            var = min(free)
            raise FreeVariableError(first_var_line.get(var, last_line), f"variable {var} is not quantified")

    max_used = max(used | quantified, default=0)
    if max_used > declared_vars:
        warn(last_line, f"header declares {declared_vars} variables but {max_used} occurs")
    if clause_count != declared_clauses:
        warn(last_line, f"header declares {declared_clauses} clauses but {clause_count} were read")
    if len(clause_set) != clause_count:
        warn(last_line, f"{clause_count - len(clause_set)} duplicate clause(s) collapsed")

    return PcnfFormula(Prefix(tuple(prefix_sets)), clause_set)


def parse_dimacs(
    data: Union[bytes, BinaryIO],
    diagnostics: Optional[list[ParseDiagnostic]] = None,
) -> PcnfFormula:
    """Parse plain DIMACS CNF.  Quantifier lines are not part of the grammar."""
    return _parse(data, quantifiers_allowed=False, require_closed=False, diagnostics=diagnostics)


def parse_qdimacs(
    data: Union[bytes, BinaryIO],
    diagnostics: Optional[list[ParseDiagnostic]] = None,
) -> PcnfFormula:
    """Parse QDIMACS.  The result must be closed; free variables are an error."""
    return _parse(data, quantifiers_allowed=True, require_closed=True, diagnostics=diagnostics)


def write_qdimacs(formula: PcnfFormula) -> bytes:
    """Serialize canonically: exact counts, sorted sets, sorted clause lines.

    Formulas with an empty prefix come out as plain DIMACS CNF, so this is
    also the CNF writer.
    """
    lines = [f"p cnf {formula.max_variable} {len(formula.clauses)}"]
    for qs in formula.prefix.sets:
        vars_part = " ".join(str(v) for v in sorted(qs.variables))
        lines.append(f"{qs.quantifier.value} {vars_part} 0")
    for clause in sorted(formula.clauses, key=clause_order):
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return ("\n".join(lines) + "\n").encode("ascii")
