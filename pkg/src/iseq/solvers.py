"""Reference solvers: teaching-grade, deterministic, correct over fast.

solve_sat is DPLL with unit propagation; branching always picks the lowest
unassigned variable and tries false first.  solve_qbf expands the prefix
recursively (or over existential branches, and over universal ones) with
clause simplification along the way, guarded by a hard variable cap.  Both
honor a time.monotonic() deadline by raising SolveTimeoutError.

The session classes at the bottom wrap these solvers behind the incremental
SolverSession interface with three capability shapes: assumption-only,
native push/pop, and native push/pop plus prefix operations.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import AbstractSet, Iterable, Optional, Sequence

from .analyzer import ClassifiedStep
from .formula import (
    AddSet,
    AddVars,
    Clause,
    PcnfFormula,
    Prefix,
    QuantifiedSet,
    Quantifier,
    _restrict_sets,
    apply_prefix_instruction,
    normalize_clause,
    occurring_variables,
)
from .replay import SolveStatus, SolverSession

__all__ = [
    "ConflictingAssumptionsError",
    "NotClosedError",
    "VariableCapExceededError",
    "SolveTimeoutError",
    "DEFAULT_QBF_VAR_CAP",
    "solve_sat",
    "solve_qbf",
    "brute_force_classify",
    "ReferenceSatSession",
    "NativeStackSatSession",
    "ReferenceQbfSession",
]

DEFAULT_QBF_VAR_CAP = 24


class ConflictingAssumptionsError(ValueError):
    """The assumption set contains a literal and its negation."""


class NotClosedError(ValueError):
    """A QBF evaluation needs every clause variable quantified."""


class VariableCapExceededError(ValueError):
    """The QBF expansion would branch over more variables than the cap allows."""


class SolveTimeoutError(Exception):
    """The deadline passed before the search finished."""


def _assign(clauses: list[Clause], literal: int) -> Optional[list[Clause]]:
    # None signals a conflict (some clause became empty)
    out: list[Clause] = []
    neg = -literal
    for clause in clauses:
        if literal in clause:
            continue
        if neg in clause:
            reduced = tuple(l for l in clause if l != neg)
            if not reduced:
                return None
            out.append(reduced)
        else:
            out.append(clause)
    return out


def _propagate(clauses: list[Clause], deadline: Optional[float]) -> Optional[list[Clause]]:
    while True:
        if deadline is not None and time.monotonic() >= deadline:
            raise SolveTimeoutError()
        unit = None
        for clause in clauses:
            if len(clause) == 1:
                unit = clause[0]
                break
        if unit is None:
            return clauses
        clauses = _assign(clauses, unit)
        if clauses is None:
            return None


def _dpll(clauses: list[Clause], deadline: Optional[float]) -> bool:
    clauses = _propagate(clauses, deadline)
    if clauses is None:
        return False
    if not clauses:
        return True
    variable = min(abs(l) for clause in clauses for l in clause)
    for literal in (-variable, variable):  # false first
        branch = _assign(clauses, literal)
        if branch is not None and _dpll(branch, deadline):
            return True
    return False


def solve_sat(
    clauses: Iterable[Clause],
    assumptions: Sequence[int] = (),
    *,
    deadline: Optional[float] = None,
) -> bool:
    """Decide satisfiability of a CNF under assumptions (forced root literals)."""
    assumed = set(assumptions)
    for literal in assumed:
        if -literal in assumed:
            raise ConflictingAssumptionsError(
                f"assumptions contain both {abs(literal)} and {-abs(literal)}"
            )
    work = [normalize_clause(c) for c in clauses]
    for literal in assumptions:
        result = _assign(work, literal)
        if result is None:
            return False
        work = result
    return _dpll(work, deadline)


def _occurs(variable: int, clauses: list[Clause]) -> bool:
    for clause in clauses:
        for lit in clause:
            if abs(lit) == variable:
                return True
    return False


def _expand(flat: list[tuple[Quantifier, int]], index: int, clauses: list[Clause],
            deadline: Optional[float]) -> bool:
    if deadline is not None and time.monotonic() >= deadline:
        raise SolveTimeoutError()
    if not clauses:
        return True
    if index == len(flat):
        # closedness means every literal got decided along the way
        raise AssertionError("undecided clauses after the full prefix")
    quantifier, variable = flat[index]
    if not _occurs(variable, clauses):
        return _expand(flat, index + 1, clauses, deadline)
    low = _assign(clauses, -variable)
    low_value = False if low is None else _expand(flat, index + 1, low, deadline)
    if quantifier is Quantifier.EXISTS and low_value:
        return True
    if quantifier is Quantifier.FORALL and not low_value:
        return False
    high = _assign(clauses, variable)
    return False if high is None else _expand(flat, index + 1, high, deadline)


def solve_qbf(
    formula: PcnfFormula,
    *,
    var_cap: int = DEFAULT_QBF_VAR_CAP,
    allow_free: bool = False,
    deadline: Optional[float] = None,
) -> bool:
    """Evaluate a prenex-CNF formula by recursive expansion.

    Closed input is the contract; with allow_free=True, unquantified clause
    variables are treated as an outermost existential block (which makes a
    plain CNF equivalent to satisfiability).
    """
    used = occurring_variables(formula.clauses)
    free = used - formula.prefix.variables()
    if free and not allow_free:
        raise NotClosedError(f"variable {min(free)} is not quantified")
    flat: list[tuple[Quantifier, int]] = []
    for variable in sorted(free):
        flat.append((Quantifier.EXISTS, variable))
    for qs in formula.prefix.sets:
        for variable in sorted(qs.variables):
            flat.append((qs.quantifier, variable))
    if len(flat) > var_cap:
        raise VariableCapExceededError(
            f"{len(flat)} variables exceed the expansion cap of {var_cap}"
        )
    return _expand(flat, 0, list(formula.clauses), deadline)


def brute_force_classify(clause_sets: Sequence[AbstractSet[Clause]]) -> list[ClassifiedStep]:
    """Classify straight from the definitions, as an oracle for the fast pass.

    A clause is volatile in step i when some later formula lacks it, and
    cumulative in step i when it just (re)appeared and every later formula
    keeps it.
    """
    fs = [set(f) for f in clause_sets]
    n = len(fs)
    out: list[ClassifiedStep] = []
    for i in range(n):
        volatile = {c for c in fs[i] if any(c not in fs[j] for j in range(i + 1, n))}
        cumulative = {
            c
            for c in fs[i]
            if (i == 0 or c not in fs[i - 1])
            and all(c in fs[j] for j in range(i + 1, n))
        }
        out.append(ClassifiedStep(i + 1, frozenset(cumulative), frozenset(volatile)))
    return out


class _DeadlineMixin:
    _deadline: Optional[float] = None

    def set_deadline(self, deadline: Optional[float]) -> None:
        self._deadline = deadline


class ReferenceSatSession(_DeadlineMixin, SolverSession):
    """Assumption-only incremental SAT backend (the IPASIR shape)."""

    native_push_pop = False
    prefix_ops = False

    def __init__(self) -> None:
        self._clauses: list[Clause] = []
        self._assumptions: list[int] = []

    def add_clause(self, clause: Clause) -> None:
        self._clauses.append(normalize_clause(clause))

    def assume(self, literal: int) -> None:
        if literal == 0:
            raise ValueError("0 is not a literal")
        self._assumptions.append(literal)

    def solve(self) -> SolveStatus:
        assumptions = self._assumptions
        self._assumptions = []
        try:
            sat = solve_sat(self._clauses, assumptions, deadline=self._deadline)
        except SolveTimeoutError:
            return SolveStatus.UNKNOWN
        finally:
            self._deadline = None
        return SolveStatus.SAT if sat else SolveStatus.UNSAT


class NativeStackSatSession(_DeadlineMixin, SolverSession):
    """SAT backend with real push/pop frames, for emulation cross-checks."""

    native_push_pop = True
    prefix_ops = False

    def __init__(self) -> None:
        self._permanent: list[Clause] = []
        self._frames: list[list[Clause]] = []
        self._assumptions: list[int] = []

    def add_clause(self, clause: Clause) -> None:
        target = self._frames[-1] if self._frames else self._permanent
        target.append(normalize_clause(clause))

    def push_frame(self) -> None:
        self._frames.append([])

    def pop_frame(self) -> None:
        if not self._frames:
            raise ValueError("pop with no open frame")
        self._frames.pop()

    def assume(self, literal: int) -> None:
        if literal == 0:
            raise ValueError("0 is not a literal")
        self._assumptions.append(literal)

    def _visible(self) -> list[Clause]:
        out = list(self._permanent)
        for frame in self._frames:
            out.extend(frame)
        return out

    def solve(self) -> SolveStatus:
        assumptions = self._assumptions
        self._assumptions = []
        try:
            sat = solve_sat(self._visible(), assumptions, deadline=self._deadline)
        except SolveTimeoutError:
            return SolveStatus.UNKNOWN
        finally:
            self._deadline = None
        return SolveStatus.SAT if sat else SolveStatus.UNSAT


class ReferenceQbfSession(_DeadlineMixin, SolverSession):
    """QBF backend with native push/pop and prefix editing.

    Popping a frame also deletes prefix variables that no longer occur in any
    remaining clause and merges the quantified sets left adjacent, the way
    the instruction generator assumes.  Propositional leftovers (free
    variables with an empty prefix) count as outermost existentials, so sat
    scripts replay here too.
    """

    native_push_pop = True
    prefix_ops = True

    def __init__(self, var_cap: int = DEFAULT_QBF_VAR_CAP) -> None:
        self._var_cap = var_cap
        self._prefix_sets: list[QuantifiedSet] = []
        self._permanent: list[Clause] = []
        self._frames: list[list[Clause]] = []

    def add_clause(self, clause: Clause) -> None:
        target = self._frames[-1] if self._frames else self._permanent
        target.append(normalize_clause(clause))

    def push_frame(self) -> None:
        self._frames.append([])

    def pop_frame(self) -> None:
        if not self._frames:
            raise ValueError("pop with no open frame")
        self._frames.pop()
        keep = occurring_variables(self._visible())
        self._prefix_sets = _restrict_sets(self._prefix_sets, keep)

    def add_quantified_set(self, level: int, quantifier: Quantifier, variables: frozenset[int]) -> None:
        apply_prefix_instruction(self._prefix_sets, AddSet(level, quantifier, frozenset(variables)))

    def add_vars_to_set(self, level: int, variables: frozenset[int]) -> None:
        apply_prefix_instruction(self._prefix_sets, AddVars(level, frozenset(variables)))

    def assume(self, literal: int) -> None:
        raise ValueError("the reference QBF backend does not take assumptions")

    def _visible(self) -> list[Clause]:
        out = list(self._permanent)
        for frame in self._frames:
            out.extend(frame)
        return out

    def solve(self) -> SolveStatus:
        try:
            formula = PcnfFormula(Prefix(tuple(self._prefix_sets)), frozenset(self._visible()))
            value = solve_qbf(
                formula,
                var_cap=self._var_cap,
                allow_free=not self._prefix_sets,
                deadline=self._deadline,
            )
        except SolveTimeoutError:
            return SolveStatus.UNKNOWN
        finally:
            self._deadline = None
        return SolveStatus.SAT if value else SolveStatus.UNSAT
