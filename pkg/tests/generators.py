"""Seeded random corpora shared by the unit and acceptance tests.

Every generator takes an explicit random.Random so failures reproduce from the
seed alone.
"""

from __future__ import annotations

import random
from typing import Sequence

from iseq import (
    EMPTY_PREFIX,
    Clause,
    FormulaKind,
    FormulaSequence,
    PcnfFormula,
    Prefix,
    QuantifiedSet,
    Quantifier,
    clause_order,
    normalize_clause,
)


def random_clause(rng: random.Random, max_vars: int, max_len: int = 3) -> Clause:
    width = rng.randint(1, min(max_len, max_vars))
    variables = rng.sample(range(1, max_vars + 1), width)
    return normalize_clause(
        tuple(v if rng.random() < 0.5 else -v for v in variables)
    )


def clause_pool(rng: random.Random, size: int, max_vars: int) -> list[Clause]:
    pool: set[Clause] = set()
    attempts = 0
    while len(pool) < size and attempts < size * 40:
        pool.add(random_clause(rng, max_vars))
        attempts += 1
    return sorted(pool, key=clause_order)


def sat_clause_sets(
    rng: random.Random,
    *,
    max_steps: int = 8,
    max_clauses: int = 30,
    max_vars: int = 10,
) -> list[frozenset[Clause]]:
    """Churning clause sets with a bias toward re-adding dropped clauses."""
    steps = rng.randint(2, max_steps)
    pool = clause_pool(rng, max_clauses, max_vars)
    current: set[Clause] = set(rng.sample(pool, rng.randint(1, max(1, len(pool) // 2))))
    dropped: list[Clause] = []
    sets = []
    for i in range(steps):
        if i:
            ordered = sorted(current, key=clause_order)
            for clause in rng.sample(ordered, min(len(ordered), rng.randint(0, 3))):
                current.discard(clause)
                dropped.append(clause)
            for _ in range(rng.randint(0, 4)):
                if len(current) >= max_clauses:
                    break
                if dropped and rng.random() < 0.4:
                    current.add(rng.choice(dropped))
                else:
                    current.add(rng.choice(pool))
        sets.append(frozenset(current))
    return sets


def sat_sequence(rng: random.Random, **kwargs) -> FormulaSequence:
    sets = sat_clause_sets(rng, **kwargs)
    return FormulaSequence(
        tuple(PcnfFormula(EMPTY_PREFIX, clauses) for clauses in sets), FormulaKind.SAT
    )


def _alternating(first: Quantifier, count: int) -> list[Quantifier]:
    other = Quantifier.FORALL if first is Quantifier.EXISTS else Quantifier.EXISTS
    return [first if i % 2 == 0 else other for i in range(count)]


def qbf_sequence(
    rng: random.Random,
    *,
    max_steps: int = 5,
    max_vars: int = 12,
    max_clauses: int = 24,
) -> FormulaSequence:
    """Closed PCNF sequences that stay update-compatible by construction.

    A fixed alternating skeleton of variable blocks is revealed left to right
    and block-prefix by block-prefix; each active block keeps a tautology over
    its first variable in every later formula, so no quantified set ever loses
    all occurring variables.
    """
    total_vars = rng.randint(4, max_vars)
    variables = list(range(1, total_vars + 1))
    blocks: list[list[int]] = []
    i = 0
    while i < len(variables):
        width = rng.randint(1, 3)
        blocks.append(variables[i : i + width])
        i += width
    quantifiers = _alternating(rng.choice((Quantifier.EXISTS, Quantifier.FORALL)), len(blocks))

    steps = rng.randint(2, max_steps)
    active_counts = sorted(rng.randint(1, len(blocks)) for _ in range(steps))
    exposed = [0] * len(blocks)

    formulas = []
    anchors: set[Clause] = set()
    churn: set[Clause] = set()
    dropped: list[Clause] = []
    for step in range(steps):
        active = active_counts[step]
        for b in range(active):
            if exposed[b] == 0:
                exposed[b] = 1
                anchors.add(normalize_clause((blocks[b][0], -blocks[b][0])))
            elif exposed[b] < len(blocks[b]) and rng.random() < 0.5:
                exposed[b] += rng.randint(1, len(blocks[b]) - exposed[b])
        visible = [v for b in range(active) for v in blocks[b][: exposed[b]]]

        if step:
            ordered = sorted(churn, key=clause_order)
            for clause in rng.sample(ordered, min(len(ordered), rng.randint(0, 2))):
                churn.discard(clause)
                dropped.append(clause)
        for _ in range(rng.randint(0, 3)):
            if len(churn) + len(anchors) >= max_clauses:
                break
            readd = [c for c in dropped if all(abs(l) in set(visible) for l in c)]
            if readd and rng.random() < 0.4:
                churn.add(rng.choice(readd))
            else:
                width = rng.randint(1, min(3, len(visible)))
                chosen = rng.sample(visible, width)
                churn.add(normalize_clause(tuple(v if rng.random() < 0.5 else -v for v in chosen)))

        sets = tuple(
            QuantifiedSet(quantifiers[b], frozenset(blocks[b][: exposed[b]]))
            for b in range(active)
        )
        formulas.append(PcnfFormula(Prefix(sets), frozenset(anchors | churn)))
    return FormulaSequence(tuple(formulas), FormulaKind.QBF)


def random_target_prefix(rng: random.Random, *, max_sets: int = 8, max_vars: int = 20) -> Prefix:
    set_count = rng.randint(1, max_sets)
    pool = list(range(1, max_vars + 1))
    rng.shuffle(pool)
    sets = []
    for quantifier in _alternating(rng.choice((Quantifier.EXISTS, Quantifier.FORALL)), set_count):
        if not pool:
            break
        width = rng.randint(1, min(3, len(pool)))
        sets.append(QuantifiedSet(quantifier, frozenset(pool[:width])))
        pool = pool[width:]
    return Prefix(tuple(sets))


def compatible_pair(rng: random.Random, **kwargs) -> tuple[Prefix, Prefix]:
    """(retained, target) built so conditions (i)-(iii) hold by construction."""
    target = random_target_prefix(rng, **kwargs)
    chosen: list[QuantifiedSet] = []
    last_parity = None
    for position, qset in enumerate(target.sets):
        parity = position % 2
        if (last_parity is None or parity != last_parity) and rng.random() < 0.7:
            width = rng.randint(1, len(qset.variables))
            subset = frozenset(rng.sample(sorted(qset.variables), width))
            chosen.append(QuantifiedSet(qset.quantifier, subset))
            last_parity = parity
    return Prefix(tuple(chosen)), target


def violated_pair(rng: random.Random) -> tuple[Prefix, Prefix, str]:
    """(retained, target, condition) violating exactly the named condition."""
    a, b, c = rng.sample(range(1, 21), 3)
    q = rng.choice((Quantifier.EXISTS, Quantifier.FORALL))
    other = Quantifier.FORALL if q is Quantifier.EXISTS else Quantifier.EXISTS
    condition = rng.choice(("i", "ii", "iii"))
    if condition == "i":
        target = Prefix(
            (
                QuantifiedSet(q, frozenset({a})),
                QuantifiedSet(other, frozenset({b})),
                QuantifiedSet(q, frozenset({c})),
            )
        )
        retained = Prefix((QuantifiedSet(q, frozenset({a, c})),))
    elif condition == "ii":
        target = Prefix(
            (QuantifiedSet(q, frozenset({a})), QuantifiedSet(other, frozenset({b})))
        )
        retained = Prefix((QuantifiedSet(other, frozenset({a})),))
    else:
        target = Prefix(
            (QuantifiedSet(q, frozenset({a})), QuantifiedSet(other, frozenset({b})))
        )
        retained = Prefix(
            (QuantifiedSet(other, frozenset({b})), QuantifiedSet(q, frozenset({a})))
        )
    return retained, target, condition


def bmc_sequence(rng: random.Random, steps: int, *, frame: int = 20) -> FormulaSequence:
    """Growing unrolling: per step a fresh frame whose 10% tail is volatile."""
    tail_width = max(1, frame // 10)
    persistent: list[Clause] = []
    formulas = []
    next_var = 1
    for _ in range(steps):
        fresh = []
        for _ in range(frame):
            fresh.append(normalize_clause((next_var, -(next_var + 1))))
            next_var += 2
        persistent.extend(fresh[: frame - tail_width])
        tail = fresh[frame - tail_width :]
        formulas.append(PcnfFormula(EMPTY_PREFIX, frozenset(persistent + tail)))
    return FormulaSequence(tuple(formulas), FormulaKind.SAT)


def fourstep_clause_sets() -> list[frozenset[Clause]]:
    c1, c2, c3, c4, c5 = (1,), (2,), (3,), (4,), (5,)
    v1, v2, v3 = (6,), (7,), (8,)
    return [
        frozenset({c1, c2, v1}),
        frozenset({c1, c2, c3, v1, v2}),
        frozenset({c1, c2, c3, c4, v1, v3}),
        frozenset({c1, c2, c3, c4, c5}),
    ]


def fourstep_sequence() -> FormulaSequence:
    return FormulaSequence(
        tuple(PcnfFormula(EMPTY_PREFIX, clauses) for clauses in fourstep_clause_sets()),
        FormulaKind.SAT,
    )
