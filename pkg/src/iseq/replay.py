"""Replaying instruction scripts against incremental solver backends.

A backend is a SolverSession.  Backends with native push/pop get the stack
operations verbatim; assumption-only backends get the selector-variable
emulation: a pushed frame's clauses are extended with a fresh selector s and
kept disabled-able, every solve assumes -s for each open frame, and popping
adds the unit {s} which permanently satisfies (retires) the frame's clauses.
Selector ids start right above the script's declared max variable and are
never reused.
"""

from __future__ import annotations

import enum
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .formula import (
    AddSet,
    Clause,
    FormulaKind,
    PcnfFormula,
    Prefix,
    QuantifiedSet,
    Quantifier,
    _restrict_sets,
    apply_prefix_instruction,
    normalize_clause,
    occurring_variables,
)
from .script import InstructionScript, ScriptStep

__all__ = [
    "SolveStatus",
    "SolveResult",
    "CapabilityMismatchError",
    "BackendFailureError",
    "SolverSession",
    "SelectorState",
    "emulate_push_pop",
    "replay",
    "format_report",
    "reconstruct",
]


class SolveStatus(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"  # only produced by timeouts or backend failure


@dataclass(frozen=True)
class SolveResult:
    step_index: int
    status: SolveStatus
    elapsed_ms: float

    def __post_init__(self) -> None:
        if self.elapsed_ms < 0:
            raise ValueError("elapsed time cannot be negative")


class CapabilityMismatchError(Exception):
    """The script needs an operation the backend does not offer."""


class BackendFailureError(Exception):
    def __init__(self, step_index: int, message: str):
        self.step_index = step_index
        super().__init__(f"step {step_index}: {message}")


class SolverSession(ABC):
    """One incremental solving session; a replay owns it exclusively.

    Capability flags say which operations are real: without native_push_pop
    the stack methods must not be called (the replayer emulates them), and
    without prefix_ops the prefix methods must not be called.
    """

    native_push_pop: bool = False
    prefix_ops: bool = False

    @abstractmethod
    def add_clause(self, clause: Clause) -> None: ...

    @abstractmethod
    def assume(self, literal: int) -> None: ...

    @abstractmethod
    def solve(self) -> SolveStatus: ...

    def push_frame(self) -> None:
        raise CapabilityMismatchError("backend has no native push")

    def pop_frame(self) -> None:
        raise CapabilityMismatchError("backend has no native pop")

    def add_quantified_set(self, level: int, quantifier: Quantifier, variables: frozenset[int]) -> None:
        raise CapabilityMismatchError("backend has no prefix operations")

    def add_vars_to_set(self, level: int, variables: frozenset[int]) -> None:
        raise CapabilityMismatchError("backend has no prefix operations")

    def set_deadline(self, deadline: Optional[float]) -> None:
        """Give the backend a time.monotonic() deadline for the next solve.

        Backends that cannot interrupt themselves may ignore it.
        """

    def close(self) -> None:
        """Release backend resources; safe to call more than once."""


@dataclass
class SelectorState:
    """Bookkeeping for emulated push/pop over an assumption-only backend."""

    next_selector: int
    open_frames: list[int] = field(default_factory=list)
    retired: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.next_selector < 1:
            raise ValueError("selectors must be positive variable ids")


def emulate_push_pop(state: SelectorState, step: ScriptStep) -> list[tuple]:
    """Compile one step into raw backend calls, advancing the selector state.

    Returned calls are ("add_clause", clause), ("assume", literal) and
    ("solve",) tuples, in issue order.  Every step allocates a selector for
    its frame even when the frame is empty, mirroring native push.
    """
    calls: list[tuple] = []
    if step.pop:
        if not state.open_frames:
            raise ValueError("pop with no open frame")
        selector = state.open_frames.pop()
        state.retired.append(selector)
        calls.append(("add_clause", (selector,)))
    for clause in step.add:
        calls.append(("add_clause", clause))
    selector = state.next_selector
    state.next_selector += 1
    state.open_frames.append(selector)
    for clause in step.push:
        calls.append(("add_clause", normalize_clause(clause + (selector,))))
    if step.solve:
        for open_selector in state.open_frames:
            calls.append(("assume", -open_selector))
        calls.append(("solve",))
    return calls


def _timed_solve(backend: SolverSession, step_index: int,
                 deadline: Optional[float]) -> SolveResult:
    backend.set_deadline(deadline)
    start = time.perf_counter()
    try:
        status = backend.solve()
    except (CapabilityMismatchError, BackendFailureError):
        raise
    except Exception as exc:
        raise BackendFailureError(step_index, f"backend raised {exc!r}") from exc
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    if not isinstance(status, SolveStatus):
        raise BackendFailureError(step_index, f"backend returned {status!r}")
    return SolveResult(step_index, status, elapsed_ms)


def replay(
    script: InstructionScript,
    backend: SolverSession,
    *,
    timeout_ms: Optional[float] = None,
) -> list[SolveResult]:
    """Drive a backend through the whole script; one result per solved step.

    Capability requirements are checked before the backend sees a single
    call.  Backend exceptions come back as BackendFailureError with the step
    index.  A timeout budget applies to each solve separately; an expired
    solve reports UNKNOWN.
    """
    if script.kind is FormulaKind.QBF and not backend.prefix_ops:
        raise CapabilityMismatchError("qbf script needs a backend with prefix operations")
    needs_prefix_ops = any(step.prefix_ops for step in script.steps)
    if needs_prefix_ops and not backend.prefix_ops:
        raise CapabilityMismatchError("script needs a backend with prefix operations")

    results: list[SolveResult] = []
    state = None
    if not backend.native_push_pop:
        state = SelectorState(next_selector=script.max_var + 1)

    for index, step in enumerate(script.steps, start=1):
        deadline = None
        if timeout_ms is not None:
            deadline = time.monotonic() + timeout_ms / 1000.0
        try:
            if backend.native_push_pop:
                if step.pop:
                    backend.pop_frame()
                for clause in step.add:
                    backend.add_clause(clause)
                backend.push_frame()
                for clause in step.push:
                    backend.add_clause(clause)
                for op in step.prefix_ops:
                    if isinstance(op, AddSet):
                        backend.add_quantified_set(op.level, op.quantifier, op.variables)
                    else:
                        backend.add_vars_to_set(op.level, op.variables)
                if step.solve:
                    results.append(_timed_solve(backend, index, deadline))
            else:
                for call in emulate_push_pop(state, step):
                    if call[0] == "add_clause":
                        backend.add_clause(call[1])
                    elif call[0] == "assume":
                        backend.assume(call[1])
                    else:
                        results.append(_timed_solve(backend, index, deadline))
        except (CapabilityMismatchError, BackendFailureError):
            raise
        except Exception as exc:
            raise BackendFailureError(index, f"backend raised {exc!r}") from exc
    return results


def format_report(results: Sequence[SolveResult]) -> str:
    """The textual replay report: one line per step plus a summary line."""
    lines = [
        f"step {r.step_index} {r.status.value} {int(round(r.elapsed_ms))}"
        for r in results
    ]
    counts = {status: 0 for status in SolveStatus}
    for r in results:
        counts[r.status] += 1
    total = int(round(sum(r.elapsed_ms for r in results)))
    lines.append(
        f"summary steps={len(results)} sat={counts[SolveStatus.SAT]} "
        f"unsat={counts[SolveStatus.UNSAT]} unknown={counts[SolveStatus.UNKNOWN]} "
        f"total-ms={total}"
    )
    return "\n".join(lines) + "\n"


def reconstruct(script: InstructionScript) -> list[PcnfFormula]:
    """Symbolically run the stack and return the formula at each solve point.

    Models exactly what a native backend holds: popping discards the last
    frame and drops prefix variables that no longer occur in any remaining
    clause (merging the quantified sets that become adjacent), then adds,
    the pushed frame, and the prefix edits apply.  No selector variables
    exist on this path, so none can leak into the result.
    """
    retained: set[Clause] = set()
    prefix_sets: list[QuantifiedSet] = []
    formulas: list[PcnfFormula] = []
    for step in script.steps:
        if step.pop:
            prefix_sets = _restrict_sets(prefix_sets, occurring_variables(retained))
        retained.update(step.add)
        for op in step.prefix_ops:
            apply_prefix_instruction(prefix_sets, op)
        if step.solve:
            visible = frozenset(retained) | frozenset(step.push)
            formulas.append(PcnfFormula(Prefix(tuple(prefix_sets)), visible))
    return formulas
