"""Turning a formula sequence into incremental instructions.

Two jobs live here.  First, splitting each formula's clauses into the part
that can be asserted permanently (cumulative: the clause stays for the rest
of the sequence) and the part that must sit in a disposable stack frame
(volatile: some later formula drops it).  Second, diffing consecutive
quantifier prefixes into add-set / add-variables instructions, which is only
possible when the retained prefix is update-compatible with the next one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Optional, Sequence

from .formula import (
    AddSet,
    AddVars,
    Clause,
    EMPTY_PREFIX,
    FormulaKind,
    FormulaSequence,
    Prefix,
    PrefixInstruction,
    SequenceTooShortError,
    occurring_variables,
    restrict_prefix,
)
from .script import InstructionScript, ScriptStep

__all__ = [
    "ClassifiedStep",
    "classify_clauses",
    "CompatibilityViolation",
    "CompatibilityReport",
    "NotUpdateCompatibleError",
    "check_update_compatible",
    "prefix_update_instructions",
    "analyze_sequence",
]


@dataclass(frozen=True)
class ClassifiedStep:
    """Cumulative and volatile clauses of one formula in the sequence."""

    index: int  # 1-based
    cumulative: frozenset[Clause]
    volatile: frozenset[Clause]

    def __post_init__(self) -> None:
        if self.cumulative & self.volatile:
            raise ValueError("a clause cannot be cumulative and volatile in the same step")


def classify_clauses(clause_sets: Sequence[AbstractSet[Clause]]) -> list[ClassifiedStep]:
    """Split every formula into cumulative and volatile parts.

    Single left-to-right pass.  A clause first classified as cumulative that a
    later formula drops gets reclassified: removed from the cumulative slot it
    occupied and added to every volatile frame between that slot and the drop.
    The final step never has volatile clauses.
    """
    n = len(clause_sets)
    if n < 2:
        raise SequenceTooShortError(f"need at least 2 formulas, got {n}")
    # copies are kept proportional to the per-step deltas, not the formulas,
    # so hundred-thousand-clause steps stay cheap
    fs = [f if isinstance(f, (set, frozenset)) else frozenset(f) for f in clause_sets]
    cumulative: list[set[Clause]] = [set() for _ in range(n)]
    volatile: list[set[Clause]] = [set() for _ in range(n)]

    volatile[0] = set(fs[0] - fs[1])
    cumulative[0] = set(fs[0] - volatile[0])
    # which cumulative slot currently holds a clause; slots are disjoint
    slot = {c: 0 for c in cumulative[0]}

    for i in range(1, n - 1):
        volatile[i] = set(fs[i] - fs[i + 1])
        cumulative[i] = set(fs[i] - fs[i - 1]) - volatile[i]
        for c in cumulative[i]:
            slot[c] = i
        for c in volatile[i] & fs[i - 1]:
            j = slot.pop(c)
            cumulative[j].discard(c)
            for k in range(j, i):
                volatile[k].add(c)

    cumulative[n - 1] = set(fs[n - 1] - fs[n - 2])
    volatile[n - 1] = set()

    return [
        ClassifiedStep(i + 1, frozenset(cumulative[i]), frozenset(volatile[i]))
        for i in range(n)
    ]


@dataclass(frozen=True)
class CompatibilityViolation:
    condition: str  # "i", "ii" or "iii"
    detail: str


@dataclass(frozen=True)
class CompatibilityReport:
    compatible: bool
    violations: tuple[CompatibilityViolation, ...]


class NotUpdateCompatibleError(Exception):
    """The retained prefix cannot be edited into the target prefix."""

    def __init__(self, report: CompatibilityReport, step_index: Optional[int] = None):
        self.report = report
        self.step_index = step_index
        where = f" at step {step_index}" if step_index is not None else ""
        conditions = ", ".join(sorted({v.condition for v in report.violations}))
        super().__init__(f"prefixes not update-compatible{where} (condition {conditions})")


def check_update_compatible(retained: Prefix, target: Prefix) -> CompatibilityReport:
    """Check the three update-compatibility conditions, reporting every violation.

    Sets match when they share a variable.  (i) each retained set matches at
    most one target set; (ii) matching sets agree on the quantifier; (iii) the
    matching preserves the relative order of the sets.
    """
    violations: list[CompatibilityViolation] = []
    # matches[j] = target levels matched by retained set at level j+1
    matches: list[list[int]] = []
    for j, r_set in enumerate(retained.sets):
        matched = [k for k, t_set in enumerate(target.sets) if r_set.variables & t_set.variables]
        matches.append(matched)
        if len(matched) > 1:
            levels = ", ".join(str(k + 1) for k in matched)
            violations.append(
                CompatibilityViolation(
                    "i", f"retained set at level {j + 1} matches target sets at levels {levels}"
                )
            )
        for k in matched:
            if target.sets[k].quantifier is not r_set.quantifier:
                violations.append(
                    CompatibilityViolation(
                        "ii",
                        f"retained set at level {j + 1} and target set at level {k + 1} "
                        "disagree on the quantifier",
                    )
                )

    # matchers[k] = retained levels matching target set at level k+1
    matchers: list[list[int]] = [[] for _ in target.sets]
    for j, matched in enumerate(matches):
        for k in matched:
            matchers[k].append(j)
    for k1 in range(len(target.sets)):
        for k2 in range(k1 + 1, len(target.sets)):
            for j1 in matchers[k1]:
                for j2 in matchers[k2]:
                    if not j1 < j2:
                        violations.append(
                            CompatibilityViolation(
                                "iii",
                                f"target sets at levels {k1 + 1} < {k2 + 1} match retained sets "
                                f"at levels {j1 + 1} >= {j2 + 1}",
                            )
                        )

    return CompatibilityReport(not violations, tuple(violations))


def prefix_update_instructions(retained: Prefix, target: Prefix) -> tuple[PrefixInstruction, ...]:
    """Emit the edits that turn the retained prefix into the target prefix.

    Walks the target left to right keeping two counters: n counts new sets
    inserted so far, m is the level the previous instruction touched.  A
    matched set keeps its retained position shifted by the insertions before
    it; an unmatched set is inserted right after the last touched level.
    Edits that would add no variables are suppressed (the counters still
    advance).
    """
    report = check_update_compatible(retained, target)
    if not report.compatible:
        raise NotUpdateCompatibleError(report)

    instructions: list[PrefixInstruction] = []
    new_sets = 0
    level = 0
    for t_set in target.sets:
        match = None
        for j, r_set in enumerate(retained.sets):
            if r_set.variables & t_set.variables:
                match = j
                break
        if match is not None:
            level = new_sets + match + 1
            fresh = t_set.variables - retained.sets[match].variables
            if fresh:
                instructions.append(AddVars(level, fresh))
        else:
            new_sets += 1
            level += 1
            instructions.append(AddSet(level, t_set.quantifier, t_set.variables))
    return tuple(instructions)


def analyze_sequence(sequence: FormulaSequence) -> InstructionScript:
    """Compile a formula sequence into an instruction script.

    Clause handling follows the stack discipline: each step pops the previous
    volatile frame, permanently adds this step's cumulative clauses, then
    pushes this step's volatile clauses as a fresh frame.  For QBF the prefix
    the solver still holds after the pop is the previous target restricted to
    the variables of the retained (cumulative) clauses, because backends drop
    variables that no longer occur; instructions are generated against that
    restricted prefix.  Raises NotUpdateCompatibleError (with the step index)
    when a prefix cannot be edited into its successor.
    """
    classified = classify_clauses([f.clauses for f in sequence.formulas])
    steps: list[ScriptStep] = []
    retained: set[Clause] = set()
    previous_prefix = EMPTY_PREFIX
    for cs in classified:
        index = cs.index
        if sequence.kind is FormulaKind.QBF:
            target = sequence.formulas[index - 1].prefix
            if index == 1:
                effective = EMPTY_PREFIX
            else:
                effective = restrict_prefix(previous_prefix, occurring_variables(retained))
            try:
                ops = prefix_update_instructions(effective, target)
            except NotUpdateCompatibleError as exc:
                raise NotUpdateCompatibleError(exc.report, step_index=index) from None
            previous_prefix = target
        else:
            ops = ()
        retained |= cs.cumulative
        steps.append(
            ScriptStep(
                pop=index > 1,
                add=tuple(cs.cumulative),
                push=tuple(cs.volatile),
                prefix_ops=ops,
                solve=True,
            )
        )
    max_var = max((f.max_variable for f in sequence.formulas), default=0)
    return InstructionScript(sequence.kind, tuple(steps), max_var)
