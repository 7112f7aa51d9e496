"""Frozen hand-computed cases pinning the oracles themselves."""

from oracles import naive_classify, qbf_eval, truth_table_sat


def test_truth_table_basics():
    assert truth_table_sat([]) is True
    assert truth_table_sat([(1,)]) is True
    assert truth_table_sat([(1,), (-1,)]) is False
    # all four sign combinations over two variables: unsatisfiable
    assert truth_table_sat([(1, 2), (-1, 2), (1, -2), (-1, -2)]) is False
    assert truth_table_sat([(1, 2), (-1, -2)]) is True
    # tautological clause constrains nothing
    assert truth_table_sat([(1, -1)]) is True


def test_truth_table_assumptions():
    assert truth_table_sat([(1,)], assumptions=(-1,)) is False
    assert truth_table_sat([(1, 2)], assumptions=(-1,)) is True
    assert truth_table_sat([(1, 2)], assumptions=(-1, -2)) is False
    # complementary assumptions admit no assignment at all
    assert truth_table_sat([], assumptions=(1, -1)) is False
    # assumption over a variable absent from the clauses
    assert truth_table_sat([(1,)], assumptions=(5,)) is True


def test_truth_table_brute_loop_agreement():
    # cross-check the bitset evaluation against a literal triple loop
    cases = [
        [(1, 2), (-2, 3)],
        [(1,), (-1, 2), (-2,)],
        [(1, 2, 3), (-1, -2, -3), (1, -2)],
        [(2, -3)],
    ]
    for clauses in cases:
        variables = sorted({abs(l) for c in clauses for l in c})
        expected = False
        for mask in range(1 << len(variables)):
            assign = {v: bool(mask >> i & 1) for i, v in enumerate(variables)}
            if all(any(assign[abs(l)] == (l > 0) for l in c) for c in clauses):
                expected = True
                break
        assert truth_table_sat(clauses) is expected


def test_qbf_eval_hand_cases():
    # forall x exists y: (x ∨ ¬y) ∧ (¬x ∨ y) — y copies x
    matrix = [(1, -2), (-1, 2)]
    assert qbf_eval((("a", 1), ("e", 2)), matrix) is True
    # exists y forall x of the same matrix: no constant y works
    assert qbf_eval((("e", 2), ("a", 1)), matrix) is False
    assert qbf_eval((("e", 1),), [(1,)]) is True
    assert qbf_eval((("a", 1),), [(1,)]) is False
    # unused quantified variable changes nothing
    assert qbf_eval((("a", 7), ("e", 1)), [(1,)]) is True


def test_qbf_eval_rejects_free_variables():
    try:
        qbf_eval((("e", 1),), [(1, 2)])
    except ValueError as exc:
        assert "2" in str(exc)
    else:
        raise AssertionError("free variable accepted")


def test_naive_classify_four_step_sequence():
    c1, c2, c3, c4, c5 = (1,), (2,), (3,), (4,), (5,)
    v1, v2, v3 = (6,), (7,), (8,)
    sets = [
        frozenset({c1, c2, v1}),
        frozenset({c1, c2, c3, v1, v2}),
        frozenset({c1, c2, c3, c4, v1, v3}),
        frozenset({c1, c2, c3, c4, c5}),
    ]
    expected = [
        (frozenset({c1, c2}), frozenset({v1})),
        (frozenset({c3}), frozenset({v1, v2})),
        (frozenset({c4}), frozenset({v1, v3})),
        (frozenset({c5}), frozenset()),
    ]
    assert naive_classify(sets) == expected


def test_naive_classify_drop_and_readd():
    a = (1,)
    sets = [frozenset({a}), frozenset(), frozenset({a})]
    assert naive_classify(sets) == [
        (frozenset(), frozenset({a})),
        (frozenset(), frozenset()),
        (frozenset({a}), frozenset()),
    ]
