"""Independent oracles the tests compare the package against.

Nothing here shares code with the package: satisfiability is decided by
exhaustive truth tables (all 2^n assignments, evaluated as bitsets), quantified
formulas by plain full expansion without any simplification, and clause
classification straight from the cumulative/volatile definitions.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence


@lru_cache(maxsize=None)
def _var_patterns(count: int) -> tuple[int, ...]:
    """pattern[p] has assignment-bit m set iff variable p is true in m."""
    total_bits = 1 << count
    all_ones = (1 << total_bits) - 1
    patterns = []
    for p in range(count):
        stride = 1 << (p + 1)
        half = 1 << p
        unit = ((1 << half) - 1) << half
        repeat = all_ones // ((1 << stride) - 1)
        patterns.append(unit * repeat)
    return tuple(patterns)


def truth_table_sat(clauses: Iterable[Sequence[int]], assumptions: Sequence[int] = ()) -> bool:
    """Exhaustive satisfiability over every assignment of the occurring variables."""
    clauses = list(clauses)
    variables = sorted(
        {abs(lit) for clause in clauses for lit in clause} | {abs(lit) for lit in assumptions}
    )
    index = {v: p for p, v in enumerate(variables)}
    patterns = _var_patterns(len(variables))
    full = (1 << (1 << len(variables))) - 1

    def literal_bits(lit: int) -> int:
        bits = patterns[index[abs(lit)]]
        return bits if lit > 0 else full ^ bits

    satisfying = full
    for clause in clauses:
        clause_bits = 0
        for lit in clause:
            clause_bits |= literal_bits(lit)
        satisfying &= clause_bits
    for lit in assumptions:
        satisfying &= literal_bits(lit)
    return satisfying != 0


def qbf_eval(flat_prefix: Sequence[tuple[str, int]], clauses: Iterable[Sequence[int]]) -> bool:
    """Full quantifier expansion; flat_prefix is (('e'|'a', var), ...) outermost first.

    The prefix must bind every variable occurring in the matrix.
    """
    clauses = list(clauses)
    bound = {var for _, var in flat_prefix}
    for clause in clauses:
        for lit in clause:
            if abs(lit) not in bound:
                raise ValueError(f"variable {abs(lit)} is not bound by the prefix")

    assignment: dict[int, bool] = {}

    def matrix_value() -> bool:
        return all(
            any((lit > 0) == assignment[abs(lit)] for lit in clause) for clause in clauses
        )

    def level(i: int) -> bool:
        if i == len(flat_prefix):
            return matrix_value()
        quantifier, var = flat_prefix[i]
        assignment[var] = False
        low = level(i + 1)
        assignment[var] = True
        high = level(i + 1)
        del assignment[var]
        return (low or high) if quantifier == "e" else (low and high)

    return level(0)


def flatten_prefix(formula) -> tuple[tuple[str, int], ...]:
    """PcnfFormula prefix -> flat (quantifier, var) pairs for qbf_eval."""
    flat = []
    for qset in formula.prefix.sets:
        for var in sorted(qset.variables):
            flat.append((qset.quantifier.value, var))
    return tuple(flat)


def naive_classify(clause_sets: Sequence[frozenset]) -> list[tuple[frozenset, frozenset]]:
    """(cumulative, volatile) per step, straight from the definitions.

    Volatile in F_i: in F_i and absent from some later F_j.  Cumulative in
    F_i: in F_i, not in F_{i-1}, and present in every later F_j.
    """
    n = len(clause_sets)
    out = []
    for i in range(n):
        volatile = frozenset(
            c
            for c in clause_sets[i]
            if any(c not in clause_sets[j] for j in range(i + 1, n))
        )
        cumulative = frozenset(
            c
            for c in clause_sets[i]
            if (i == 0 or c not in clause_sets[i - 1])
            and all(c in clause_sets[j] for j in range(i + 1, n))
        )
        out.append((cumulative, volatile))
    return out
