"""Incremental instruction sequences for related SAT and QBF formulas.

The package turns a sequence of CNF/PCNF formulas into a compact script of
incremental solver instructions (add, push, pop, prefix updates) and replays
such scripts against incremental backends, including IPASIR shared libraries.
"""

from .analyzer import (
    ClassifiedStep,
    CompatibilityReport,
    CompatibilityViolation,
    NotUpdateCompatibleError,
    analyze_sequence,
    check_update_compatible,
    classify_clauses,
    prefix_update_instructions,
)
from .dimacs import (
    DimacsParseError,
    DuplicateQuantificationError,
    FreeVariableError,
    MalformedHeaderError,
    NonIntegerTokenError,
    ParseDiagnostic,
    QuantifierAfterClauseError,
    UnterminatedClauseError,
    parse_dimacs,
    parse_qdimacs,
    write_qdimacs,
)
from .formula import (
    EMPTY_PREFIX,
    AddSet,
    AddVars,
    Clause,
    FormulaKind,
    FormulaSequence,
    PcnfFormula,
    Prefix,
    PrefixInstruction,
    QuantifiedSet,
    Quantifier,
    SequenceTooShortError,
    ZeroLiteralError,
    apply_prefix_instruction,
    apply_prefix_instructions,
    clause_order,
    normalize_clause,
    occurring_variables,
    restrict_prefix,
)
from .ipasir import (
    REQUIRED_SYMBOLS,
    IpasirSession,
    LoadedSolver,
    LoadFailureError,
    MissingSymbolError,
    load_solver,
)
from .replay import (
    BackendFailureError,
    CapabilityMismatchError,
    SelectorState,
    SolveResult,
    SolverSession,
    SolveStatus,
    emulate_push_pop,
    format_report,
    reconstruct,
    replay,
)
from .script import (
    InstructionScript,
    KindMismatchError,
    MalformedScriptError,
    ScriptStep,
    parse_script,
    script_stats,
    serialize_script,
)
from .solvers import (
    DEFAULT_QBF_VAR_CAP,
    ConflictingAssumptionsError,
    NativeStackSatSession,
    NotClosedError,
    ReferenceQbfSession,
    ReferenceSatSession,
    SolveTimeoutError,
    VariableCapExceededError,
    brute_force_classify,
    solve_qbf,
    solve_sat,
)

__version__ = "0.1.0"

__all__ = [
    "AddSet",
    "AddVars",
    "BackendFailureError",
    "CapabilityMismatchError",
    "Clause",
    "ClassifiedStep",
    "CompatibilityReport",
    "CompatibilityViolation",
    "ConflictingAssumptionsError",
    "DEFAULT_QBF_VAR_CAP",
    "DimacsParseError",
    "DuplicateQuantificationError",
    "EMPTY_PREFIX",
    "FormulaKind",
    "FormulaSequence",
    "FreeVariableError",
    "InstructionScript",
    "IpasirSession",
    "KindMismatchError",
    "LoadedSolver",
    "LoadFailureError",
    "MalformedHeaderError",
    "MalformedScriptError",
    "MissingSymbolError",
    "NativeStackSatSession",
    "NonIntegerTokenError",
    "NotClosedError",
    "NotUpdateCompatibleError",
    "ParseDiagnostic",
    "PcnfFormula",
    "Prefix",
    "PrefixInstruction",
    "QuantifiedSet",
    "Quantifier",
    "QuantifierAfterClauseError",
    "REQUIRED_SYMBOLS",
    "ReferenceQbfSession",
    "ReferenceSatSession",
    "ScriptStep",
    "SelectorState",
    "SequenceTooShortError",
    "SolveResult",
    "SolveStatus",
    "SolveTimeoutError",
    "SolverSession",
    "UnterminatedClauseError",
    "VariableCapExceededError",
    "ZeroLiteralError",
    "analyze_sequence",
    "apply_prefix_instruction",
    "apply_prefix_instructions",
    "brute_force_classify",
    "check_update_compatible",
    "classify_clauses",
    "clause_order",
    "emulate_push_pop",
    "format_report",
    "load_solver",
    "normalize_clause",
    "occurring_variables",
    "parse_dimacs",
    "parse_qdimacs",
    "parse_script",
    "prefix_update_instructions",
    "reconstruct",
    "replay",
    "restrict_prefix",
    "script_stats",
    "serialize_script",
    "solve_qbf",
    "solve_sat",
    "write_qdimacs",
]
