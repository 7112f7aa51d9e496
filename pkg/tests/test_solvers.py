"""Reference SAT/QBF solving and the bundled solver sessions."""

import random
import time

import pytest

from iseq import (
    ConflictingAssumptionsError,
    NativeStackSatSession,
    NotClosedError,
    PcnfFormula,
    Prefix,
    QuantifiedSet,
    Quantifier,
    ReferenceQbfSession,
    ReferenceSatSession,
    SolveStatus,
    VariableCapExceededError,
    solve_qbf,
    solve_sat,
)

from generators import clause_pool, qbf_sequence
from oracles import flatten_prefix, qbf_eval, truth_table_sat

E = Quantifier.EXISTS
A = Quantifier.FORALL


def test_solve_sat_basics():
    assert solve_sat([]) is True
    assert solve_sat([(1, 2), (-1, 2), (1, -2)]) is True
    assert solve_sat([(1, 2), (-1, 2), (1, -2), (-1, -2)]) is False
    assert solve_sat([(1, -1)]) is True


def test_solve_sat_assumptions():
    assert solve_sat([(1, 2)], assumptions=(-1,)) is True
    assert solve_sat([(1, 2)], assumptions=(-1, -2)) is False
    with pytest.raises(ConflictingAssumptionsError):
        solve_sat([(1,)], assumptions=(2, -2))


def test_solve_sat_matches_truth_table():
    rng = random.Random(11)
    for _ in range(400):
        clauses = clause_pool(rng, rng.randint(1, 12), rng.randint(1, 8))
        assert solve_sat(clauses) is truth_table_sat(clauses)


def test_solve_qbf_hand_cases():
    matrix = frozenset({(1, -2), (-1, 2)})
    forall_exists = PcnfFormula(
        Prefix((QuantifiedSet(A, frozenset({1})), QuantifiedSet(E, frozenset({2})))),
        matrix,
    )
    assert solve_qbf(forall_exists) is True
    exists_forall = PcnfFormula(
        Prefix((QuantifiedSet(E, frozenset({2})), QuantifiedSet(A, frozenset({1})))),
        matrix,
    )
    assert solve_qbf(exists_forall) is False


def test_solve_qbf_free_variables():
    # a nonempty prefix must bind everything, so open formulas have no prefix
    open_formula = PcnfFormula(Prefix(()), frozenset({(1,), (-1, 2)}))
    with pytest.raises(NotClosedError):
        solve_qbf(open_formula)
    # free variables become an outermost existential block when allowed
    assert solve_qbf(open_formula, allow_free=True) is True


def test_solve_qbf_variable_cap():
    big = PcnfFormula(
        Prefix((QuantifiedSet(E, frozenset(range(1, 30))),)),
        frozenset({tuple(range(1, 30))}),
    )
    with pytest.raises(VariableCapExceededError):
        solve_qbf(big)
    assert solve_qbf(big, var_cap=30) is True


def test_solve_qbf_matches_expansion_oracle():
    rng = random.Random(23)
    checked = 0
    for _ in range(40):
        for formula in qbf_sequence(rng, max_vars=10).formulas:
            assert solve_qbf(formula) is qbf_eval(flatten_prefix(formula), formula.clauses)
            checked += 1
    assert checked > 80


def test_reference_sat_session_assumptions_reset():
    session = ReferenceSatSession()
    session.add_clause((1, 2))
    session.assume(-1)
    session.assume(-2)
    assert session.solve() is SolveStatus.UNSAT
    # assumptions do not persist past the call
    assert session.solve() is SolveStatus.SAT
    session.close()


def test_reference_sat_session_deadline_unknown():
    session = ReferenceSatSession()
    session.add_clause((1, 2))
    session.set_deadline(time.monotonic() - 1.0)
    assert session.solve() is SolveStatus.UNKNOWN
    session.close()


def test_native_stack_session_push_pop():
    session = NativeStackSatSession()
    session.add_clause((1,))
    session.push_frame()
    session.add_clause((-1,))
    assert session.solve() is SolveStatus.UNSAT
    session.pop_frame()
    assert session.solve() is SolveStatus.SAT
    with pytest.raises(ValueError):
        session.pop_frame()
    session.close()


def test_native_stack_session_capabilities():
    assert NativeStackSatSession.native_push_pop is True
    assert ReferenceSatSession.native_push_pop is False
    assert ReferenceQbfSession.native_push_pop is True
    assert ReferenceQbfSession.prefix_ops is True


def test_reference_qbf_session_prefix_lifecycle():
    session = ReferenceQbfSession()
    session.add_quantified_set(1, E, frozenset({1}))
    session.add_clause((1,))
    session.push_frame()
    session.add_quantified_set(2, A, frozenset({2}))
    session.add_clause((2,))
    assert session.solve() is SolveStatus.UNSAT  # forall 2 . 2 fails
    session.pop_frame()
    # the popped frame was the only user of variable 2; its set must be gone
    assert session.solve() is SolveStatus.SAT
    with pytest.raises(ValueError):
        session.assume(1)
    session.close()
