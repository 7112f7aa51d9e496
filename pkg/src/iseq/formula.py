"""Value types for CNF/PCNF formulas, quantifier prefixes, and prefix edits.

Clauses are plain tuples of nonzero ints in a canonical order; prefixes are
immutable sequences of quantified sets.  Everything here is a value: equal
content compares equal and nothing mutates after construction.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

__all__ = [
    "Clause",
    "ZeroLiteralError",
    "SequenceTooShortError",
    "normalize_clause",
    "clause_order",
    "occurring_variables",
    "Quantifier",
    "QuantifiedSet",
    "Prefix",
    "EMPTY_PREFIX",
    "PcnfFormula",
    "FormulaKind",
    "FormulaSequence",
    "AddSet",
    "AddVars",
    "PrefixInstruction",
    "restrict_prefix",
    "apply_prefix_instruction",
    "apply_prefix_instructions",
]

Clause = tuple  # tuple[int, ...] in canonical literal order


class ZeroLiteralError(ValueError):
    """A literal was 0, which DIMACS reserves as the clause terminator."""


class SequenceTooShortError(ValueError):
    """A formula sequence needs at least two members to be worth analyzing."""


def _literal_order(lit: int) -> tuple[int, bool]:
    # ascending variable id; positive literal before negative for the same id
    return (abs(lit), lit < 0)


def normalize_clause(raw: Iterable[int]) -> Clause:
    """Return the canonical form of a clause.

    Duplicate literals are dropped, literals are sorted by variable id with
    the positive polarity first.  Tautologies (x and -x together) are kept
    verbatim; simplification is not this function's job.
    """
    if type(raw) is tuple:
        # fast path: return already-canonical tuples unchanged
        prev_var = 0
        prev_lit = 0
        for lit in raw:
            if lit == 0:
                raise ZeroLiteralError("literal 0 is reserved as the clause terminator")
            var = lit if lit > 0 else -lit
            if var < prev_var or (var == prev_var and not (prev_lit > 0 > lit)):
                break
            prev_var = var
            prev_lit = lit
        else:
            return raw
    seen = set()
    lits = []
    for lit in raw:
        if lit == 0:
            raise ZeroLiteralError("literal 0 is reserved as the clause terminator")
        if lit not in seen:
            seen.add(lit)
            lits.append(lit)
    return tuple(sorted(lits, key=_literal_order))


def clause_order(clause: Clause) -> tuple:
    """Sort key giving the deterministic clause ordering used everywhere."""
    key = []
    for lit in clause:
        key.append(lit if lit > 0 else -lit)
        key.append(lit < 0)
    return tuple(key)


def occurring_variables(clauses: Iterable[Clause]) -> frozenset[int]:
    """The set of variable ids occurring in any of the given clauses."""
    return frozenset({abs(lit) for clause in clauses for lit in clause})


class Quantifier(enum.Enum):
    EXISTS = "e"
    FORALL = "a"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class QuantifiedSet:
    """One block of identically quantified variables."""

    quantifier: Quantifier
    variables: frozenset[int]

    def __post_init__(self) -> None:
        if not isinstance(self.variables, frozenset):
            object.__setattr__(self, "variables", frozenset(self.variables))
        if not self.variables:
            raise ValueError("empty quantified sets are deleted, never stored")
        for v in self.variables:
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"quantified variable must be a positive int, got {v!r}")


@dataclass(frozen=True)
class Prefix:
    """A quantifier prefix: alternating quantified sets, outermost first.

    Nesting levels are 1-based positions in ``sets``.
    """

    sets: tuple[QuantifiedSet, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.sets, tuple):
            object.__setattr__(self, "sets", tuple(self.sets))
        seen: set[int] = set()
        previous = None
        for qs in self.sets:
            if previous is not None and qs.quantifier is previous:
                raise ValueError("adjacent quantified sets must alternate quantifiers")
            previous = qs.quantifier
            overlap = seen & qs.variables
            if overlap:
                raise ValueError(f"variable {min(overlap)} quantified twice")
            seen |= qs.variables

    def variables(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for qs in self.sets:
            out |= qs.variables
        return out

    def __len__(self) -> int:
        return len(self.sets)


EMPTY_PREFIX = Prefix(())


@dataclass(frozen=True)
class PcnfFormula:
    """A prenex-CNF formula; plain CNF is the degenerate case with an empty prefix.

    With a nonempty prefix the formula must be closed: every variable in the
    clauses is quantified.  (The prefix may quantify extra, unused variables.)
    """

    prefix: Prefix
    clauses: frozenset[Clause]

    def __post_init__(self) -> None:
        if not isinstance(self.clauses, frozenset):
            object.__setattr__(self, "clauses", frozenset(self.clauses))
        for clause in self.clauses:
            if not clause:
                raise ValueError("the empty clause is not representable here")
            if clause != normalize_clause(clause):
                raise ValueError(f"clause {clause!r} is not in canonical form")
        if self.prefix.sets:
            free = occurring_variables(self.clauses) - self.prefix.variables()
            if free:
                raise ValueError(f"free variable {min(free)} under a nonempty prefix")

    @property
    def variables(self) -> frozenset[int]:
        return occurring_variables(self.clauses) | self.prefix.variables()

    @property
    def max_variable(self) -> int:
        m = max(map(abs, itertools.chain.from_iterable(self.clauses)), default=0)
        bound = self.prefix.variables()
        return max(m, max(bound)) if bound else m

    @property
    def is_closed(self) -> bool:
        return not (occurring_variables(self.clauses) - self.prefix.variables())


class FormulaKind(enum.Enum):
    SAT = "sat"
    QBF = "qbf"


@dataclass(frozen=True)
class FormulaSequence:
    """An ordered sequence of related formulas to be solved one after another."""

    formulas: tuple[PcnfFormula, ...]
    kind: FormulaKind

    def __post_init__(self) -> None:
        if not isinstance(self.formulas, tuple):
            object.__setattr__(self, "formulas", tuple(self.formulas))
        if len(self.formulas) < 2:
            raise SequenceTooShortError(
                f"need at least 2 formulas, got {len(self.formulas)}"
            )
        if self.kind is FormulaKind.SAT:
            for i, f in enumerate(self.formulas, start=1):
                if f.prefix.sets:
                    raise ValueError(f"formula {i}: sat sequences must have empty prefixes")
        else:
            for i, f in enumerate(self.formulas, start=1):
                if not f.is_closed:
                    raise ValueError(f"formula {i}: qbf sequences must be closed")

    def __len__(self) -> int:
        return len(self.formulas)


@dataclass(frozen=True)
class AddSet:
    """Insert a whole new quantified set at a 1-based nesting level."""

    level: int
    quantifier: Quantifier
    variables: frozenset[int]

    def __post_init__(self) -> None:
        if not isinstance(self.variables, frozenset):
            object.__setattr__(self, "variables", frozenset(self.variables))
        _check_instruction(self.level, self.variables)


@dataclass(frozen=True)
class AddVars:
    """Add variables to the existing quantified set at a nesting level."""

    level: int
    variables: frozenset[int]

    def __post_init__(self) -> None:
        if not isinstance(self.variables, frozenset):
            object.__setattr__(self, "variables", frozenset(self.variables))
        _check_instruction(self.level, self.variables)


PrefixInstruction = Union[AddSet, AddVars]


def _check_instruction(level: int, variables: frozenset[int]) -> None:
    if level < 1:
        raise ValueError(f"nesting level must be >= 1, got {level}")
    if not variables:
        raise ValueError("prefix instructions with no variables are suppressed")
    for v in variables:
        if not isinstance(v, int) or v < 1:
            raise ValueError(f"variable must be a positive int, got {v!r}")


def _restrict_sets(sets: Iterable[QuantifiedSet], keep: frozenset[int]) -> list[QuantifiedSet]:
    # Drop variables outside `keep`, delete emptied sets, and merge runs of
    # same-quantifier sets that become adjacent (into the earlier position).
    out: list[QuantifiedSet] = []
    for qs in sets:
        kept = qs.variables & keep
        if not kept:
            continue
        if out and out[-1].quantifier is qs.quantifier:
            out[-1] = QuantifiedSet(qs.quantifier, out[-1].variables | kept)
        else:
            out.append(QuantifiedSet(qs.quantifier, kept))
    return out


def restrict_prefix(prefix: Prefix, keep: frozenset[int]) -> Prefix:
    """Model a solver deleting all variables outside `keep` from the prefix."""
    return Prefix(tuple(_restrict_sets(prefix.sets, frozenset(keep))))


def apply_prefix_instruction(sets: list[QuantifiedSet], op: PrefixInstruction) -> None:
    """Apply one instruction to a mutable prefix (as a list of sets).

    Intermediate states may violate alternation; that is deliberate, since a
    later instruction in the same step can restore it.  Callers validate by
    building a Prefix when they need a well-formed value.
    """
    present: set[int] = set()
    for qs in sets:
        present |= qs.variables
    overlap = present & op.variables
    if overlap:
        raise ValueError(f"variable {min(overlap)} is already quantified")
    if isinstance(op, AddSet):
        if not 1 <= op.level <= len(sets) + 1:
            raise ValueError(f"cannot insert a set at level {op.level} of {len(sets)}")
        sets.insert(op.level - 1, QuantifiedSet(op.quantifier, op.variables))
    elif isinstance(op, AddVars):
        if not 1 <= op.level <= len(sets):
            raise ValueError(f"no quantified set at level {op.level} of {len(sets)}")
        target = sets[op.level - 1]
        sets[op.level - 1] = QuantifiedSet(target.quantifier, target.variables | op.variables)
    else:
        raise TypeError(f"not a prefix instruction: {op!r}")


def apply_prefix_instructions(prefix: Prefix, ops: Sequence[PrefixInstruction]) -> Prefix:
    """Apply a whole step's instructions and validate the resulting prefix."""
    sets = list(prefix.sets)
    for op in ops:
        apply_prefix_instruction(sets, op)
    return Prefix(tuple(sets))
