"""The iseq on-disk format: incremental instructions for one formula sequence.

Text format, ASCII, LF line endings.  Header ``p iseq <sat|qbf> <steps>
<max-var>`` followed by one block per step::

    step <i>
    pop                       (steps >= 2 only; forbidden in step 1)
    add                       (omitted when there is nothing to add)
    <clause> 0
    0
    push                      (omitted when the volatile frame is empty)
    <clause> 0
    0
    a-set <level> <e|a> <vars...> 0
    a-vars <level> <vars...> 0
    solve
    end

Section order inside a step is fixed.  An omitted push section still means
"push an empty frame" at replay time; every step owns exactly one frame.
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass
from typing import BinaryIO, Iterator, Union

from .formula import (
    AddSet,
    AddVars,
    Clause,
    FormulaKind,
    PrefixInstruction,
    Quantifier,
    clause_order,
    normalize_clause,
)

__all__ = [
    "MalformedScriptError",
    "KindMismatchError",
    "ScriptStep",
    "InstructionScript",
    "serialize_script",
    "parse_script",
    "script_stats",
]


class MalformedScriptError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class KindMismatchError(MalformedScriptError):
    """A construct not allowed for the script's declared kind (sat vs qbf)."""


def _canonical_section(clauses) -> tuple[Clause, ...]:
    out = set()
    for clause in clauses:
        c = normalize_clause(clause)
        if not c:
            raise ValueError("the empty clause is not representable in a script")
        out.add(c)
    return tuple(sorted(out, key=clause_order))


@dataclass(frozen=True)
class ScriptStep:
    """One step: optional pop, permanent adds, one pushed frame, prefix edits, solve."""

    pop: bool
    add: tuple[Clause, ...] = ()
    push: tuple[Clause, ...] = ()
    prefix_ops: tuple[PrefixInstruction, ...] = ()
    solve: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "add", _canonical_section(self.add))
        object.__setattr__(self, "push", _canonical_section(self.push))
        if not isinstance(self.prefix_ops, tuple):
            object.__setattr__(self, "prefix_ops", tuple(self.prefix_ops))
        for op in self.prefix_ops:
            if not isinstance(op, (AddSet, AddVars)):
                raise TypeError(f"not a prefix instruction: {op!r}")


def _step_max_var(step: ScriptStep) -> int:
    literals = itertools.chain.from_iterable(itertools.chain(step.add, step.push))
    m = max(map(abs, literals), default=0)
    for op in step.prefix_ops:
        m = max(m, max(op.variables))
    return m


@dataclass(frozen=True)
class InstructionScript:
    """A whole script.  max_var is the declared bound backends may preallocate;
    selector numbering for emulated push/pop starts right above it."""

    kind: FormulaKind
    steps: tuple[ScriptStep, ...]
    max_var: int

    def __post_init__(self) -> None:
        if not isinstance(self.steps, tuple):
            object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise ValueError("a script needs at least one step")
        if self.steps[0].pop:
            raise ValueError("step 1 must not pop")
        for i, step in enumerate(self.steps[1:], start=2):
            if not step.pop:
                raise ValueError(f"step {i} must pop the previous frame")
        if self.kind is FormulaKind.SAT:
            for i, step in enumerate(self.steps, start=1):
                if step.prefix_ops:
                    raise ValueError(f"step {i}: prefix instructions in a sat script")
        content_max = max((_step_max_var(s) for s in self.steps), default=0)
        if self.max_var < content_max:
            raise ValueError(
                f"declared max variable {self.max_var} below occurring {content_max}"
            )
        if self.max_var < 0:
            raise ValueError("max variable must be >= 0")


def serialize_script(script: InstructionScript) -> bytes:
    """Deterministic text form; value-equal scripts produce identical bytes."""
    lines = [f"p iseq {script.kind.value} {len(script.steps)} {script.max_var}"]
    for index, step in enumerate(script.steps, start=1):
        lines.append(f"step {index}")
        if step.pop:
            lines.append("pop")
        for keyword, section in (("add", step.add), ("push", step.push)):
            if section:
                lines.append(keyword)
                for clause in section:
                    lines.append(" ".join(str(lit) for lit in clause) + " 0")
                lines.append("0")
        for op in step.prefix_ops:
            vars_part = " ".join(str(v) for v in sorted(op.variables))
            if isinstance(op, AddSet):
                lines.append(f"a-set {op.level} {op.quantifier.value} {vars_part} 0")
            else:
                lines.append(f"a-vars {op.level} {vars_part} 0")
        if step.solve:
            lines.append("solve")
        lines.append("end")
    return ("\n".join(lines) + "\n").encode("ascii")


def _script_lines(data: Union[bytes, BinaryIO]) -> Iterator[tuple[int, str]]:
    if isinstance(data, (bytes, bytearray)):
        stream: BinaryIO = io.BytesIO(bytes(data))
    else:
        stream = data
    for number, raw in enumerate(stream, start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        for byte in stripped:
            if byte >= 0x80:
                raise MalformedScriptError(number, f"non-ASCII byte 0x{byte:02x}")
        yield number, stripped.decode("ascii")


def _parse_clause_tokens(line_no: int, tokens: list[str]) -> Clause:
    lits = []
    for tok in tokens:
        try:
            lits.append(int(tok))
        except ValueError:
            raise MalformedScriptError(line_no, f"expected an integer, got {tok!r}") from None
    if lits[-1] != 0:
        raise MalformedScriptError(line_no, "clause line must end with 0")
    body = lits[:-1]
    if not body:
        raise MalformedScriptError(line_no, "empty clause line (lone 0 ends the section)")
    if 0 in body:
        raise MalformedScriptError(line_no, "one clause per line; stray 0 inside the line")
    return normalize_clause(body)


def _parse_op_vars(line_no: int, tokens: list[str]) -> frozenset[int]:
    if not tokens or tokens[-1] != "0":
        raise MalformedScriptError(line_no, "instruction line must end with 0")
    vars_: list[int] = []
    for tok in tokens[:-1]:
        if not tok.isdigit() or int(tok) < 1:
            raise MalformedScriptError(line_no, f"expected a positive variable, got {tok!r}")
        vars_.append(int(tok))
    if not vars_:
        raise MalformedScriptError(line_no, "instruction carries no variables")
    return frozenset(vars_)


# section ranks enforce the fixed order inside a step block
_RANK = {"pop": 0, "add": 1, "push": 2, "a-set": 3, "a-vars": 3, "solve": 4}


def parse_script(data: Union[bytes, BinaryIO]) -> InstructionScript:
    lines = _script_lines(data)

    try:
        line_no, header = next(lines)
    except StopIteration:
        raise MalformedScriptError(1, "empty input") from None
    fields = header.split()
    if len(fields) != 5 or fields[0] != "p" or fields[1] != "iseq":
        raise MalformedScriptError(line_no, "expected header 'p iseq <sat|qbf> <steps> <max-var>'")
    if fields[2] not in ("sat", "qbf"):
        raise MalformedScriptError(line_no, f"unknown kind {fields[2]!r}")
    if not fields[3].isdigit() or not fields[4].isdigit():
        raise MalformedScriptError(line_no, "step count and max-var must be nonnegative integers")
    kind = FormulaKind(fields[2])
    declared_steps = int(fields[3])
    declared_max = int(fields[4])

    steps: list[ScriptStep] = []
    step_index = 0

    while True:
        try:
            line_no, text = next(lines)
        except StopIteration:
            break
        tokens = text.split()
        if tokens[0] != "step":
            raise MalformedScriptError(line_no, f"expected 'step {step_index + 1}', got {tokens[0]!r}")
        if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) != step_index + 1:
            raise MalformedScriptError(line_no, f"expected 'step {step_index + 1}'")
        step_index += 1

        pop = False
        add: list[Clause] = []
        push: list[Clause] = []
        ops: list[PrefixInstruction] = []
        solve = False
        rank = -1
        closed = False
        while not closed:
            try:
                line_no, text = next(lines)
            except StopIteration:
                raise MalformedScriptError(line_no, f"step {step_index} not closed by 'end'") from None
            tokens = text.split()
            keyword = tokens[0]
            if keyword == "end":
                if len(tokens) != 1:
                    raise MalformedScriptError(line_no, "junk after 'end'")
                closed = True
                continue
            if keyword not in _RANK:
                raise MalformedScriptError(line_no, f"unknown keyword {keyword!r}")
            new_rank = _RANK[keyword]
            if new_rank < rank or (new_rank == rank and new_rank != 3):
                raise MalformedScriptError(line_no, f"{keyword!r} out of order or repeated")
            rank = new_rank

            if keyword == "pop":
                if len(tokens) != 1:
                    raise MalformedScriptError(line_no, "junk after 'pop'")
                if step_index == 1:
                    raise MalformedScriptError(line_no, "step 1 must not pop")
                pop = True
            elif keyword in ("add", "push"):
                if len(tokens) != 1:
                    raise MalformedScriptError(line_no, f"junk after {keyword!r}")
                target = add if keyword == "add" else push
                while True:
                    try:
                        line_no, text = next(lines)
                    except StopIteration:
                        raise MalformedScriptError(
                            line_no, f"{keyword} section not closed by a lone 0"
                        ) from None
                    ctokens = text.split()
                    if ctokens == ["0"]:
                        break
                    target.append(_parse_clause_tokens(line_no, ctokens))
                if not target:
                    raise MalformedScriptError(line_no, f"empty {keyword} sections are omitted entirely")
            elif keyword == "a-set":
                if kind is FormulaKind.SAT:
                    raise KindMismatchError(line_no, "prefix instruction in a sat script")
                if len(tokens) < 4 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                    raise MalformedScriptError(line_no, "expected 'a-set <level> <e|a> <vars...> 0'")
                if tokens[2] not in ("e", "a"):
                    raise MalformedScriptError(line_no, f"unknown quantifier {tokens[2]!r}")
                ops.append(
                    AddSet(int(tokens[1]), Quantifier(tokens[2]), _parse_op_vars(line_no, tokens[3:]))
                )
            elif keyword == "a-vars":
                if kind is FormulaKind.SAT:
                    raise KindMismatchError(line_no, "prefix instruction in a sat script")
                if len(tokens) < 3 or not tokens[1].isdigit() or int(tokens[1]) < 1:
                    raise MalformedScriptError(line_no, "expected 'a-vars <level> <vars...> 0'")
                ops.append(AddVars(int(tokens[1]), _parse_op_vars(line_no, tokens[2:])))
            else:  # solve
                if len(tokens) != 1:
                    raise MalformedScriptError(line_no, "junk after 'solve'")
                solve = True

        if step_index > 1 and not pop:
            raise MalformedScriptError(line_no, f"step {step_index} must pop the previous frame")
        try:
            steps.append(ScriptStep(pop, tuple(add), tuple(push), tuple(ops), solve))
        except (ValueError, TypeError) as exc:
            raise MalformedScriptError(line_no, str(exc)) from None

    if step_index != declared_steps:
        raise MalformedScriptError(line_no if steps else 1,
                                   f"header declares {declared_steps} steps but {step_index} present")
    try:
        return InstructionScript(kind, tuple(steps), declared_max)
    except ValueError as exc:
        raise MalformedScriptError(1, str(exc)) from None


def script_stats(script: InstructionScript) -> dict:
    """Size statistics for a script versus naive re-sending of every formula.

    The compression ratio divides the clause occurrences a non-incremental
    consumer would transmit (one copy per formula per step) by the distinct
    clauses the script holds.  Occurrence and literal totals for both sides
    are reported as well, since either unit is defensible.
    """
    retained: set[Clause] = set()
    retained_lits = 0
    distinct: set[Clause] = set()
    script_clauses = 0
    script_literals = 0
    prefix_instructions = 0
    concat_clauses = 0
    concat_literals = 0
    for step in script.steps:
        script_clauses += len(step.add) + len(step.push)
        script_literals += sum(len(c) for c in step.add + step.push)
        prefix_instructions += len(step.prefix_ops)
        distinct.update(step.add)
        distinct.update(step.push)
        for c in step.add:
            if c not in retained:
                retained.add(c)
                retained_lits += len(c)
        # the formula visible at this step: retained adds plus the pushed frame
        extra = [c for c in step.push if c not in retained]
        concat_clauses += len(retained) + len(extra)
        concat_literals += retained_lits + sum(len(c) for c in extra)

    distinct_literals = sum(len(c) for c in distinct)
    ratio = (concat_clauses / len(distinct)) if distinct else 1.0
    assert ratio >= 1.0, "script cannot hold more distinct clauses than occur overall"
    assert script_clauses <= concat_clauses or not distinct
    return {
        "steps": len(script.steps),
        "script_clauses": script_clauses,
        "script_distinct_clauses": len(distinct),
        "script_literals": script_literals,
        "script_distinct_literals": distinct_literals,
        "prefix_instructions": prefix_instructions,
        "concat_clauses": concat_clauses,
        "concat_literals": concat_literals,
        "compression_ratio": ratio,
    }
