"""Flatten a puzzle into the integer node table both kernels execute.

Node row layout (int64): ``op, a, b, role, pred_kind, pred_val, child1, child2``.
Scopes live in a parallel uint64 bitmask array.  Constraint ``j`` requires
``eval(roots[j])`` to equal the truth bit of player ``expect[j]``, or to be
true when ``expect[j] == -1`` (hints).  ``ready[j]`` is the highest player
index the constraint depends on; constraints are sorted by it so a
depth-first search can check each one as soon as it becomes decidable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..statements import (
    ROLES,
    CountLiars,
    CountRole,
    Exactly,
    ExactlyOneOf,
    Parity,
    Polarity,
    Puzzle,
    RoleClaim,
    SameRole,
    Statement,
    TruthClaim,
    referenced_players,
)

OP_ROLE, OP_TRUTH, OP_SAME, OP_COUNT_ROLE, OP_COUNT_LIARS, OP_XOR = range(6)
PRED_EXACT, PRED_PARITY = 0, 1
ROLE_INDEX = {r: i for i, r in enumerate(ROLES)}


@dataclass(frozen=True)
class Program:
    n: int
    nodes: np.ndarray
    masks: np.ndarray
    roots: np.ndarray
    expect: np.ndarray
    ready: np.ndarray


def compile_puzzle(puzzle: Puzzle) -> Program:
    index = {p: i for i, p in enumerate(puzzle.players)}
    all_mask = (1 << len(puzzle.players)) - 1
    rows: list[list[int]] = []
    masks: list[int] = []

    def pred(p) -> tuple[int, int]:
        if isinstance(p, Exactly):
            return PRED_EXACT, p.k
        return PRED_PARITY, int(p is Parity.ODD)

    def scope_mask(scope) -> int:
        if scope is None:
            return all_mask
        m = 0
        for name in scope:
            m |= 1 << index[name]
        return m

    def emit(stmt: Statement) -> int:
        row = [0] * 8
        mask = 0
        if isinstance(stmt, RoleClaim):
            row[0], row[1], row[3] = OP_ROLE, index[stmt.subject], ROLE_INDEX[stmt.role]
        elif isinstance(stmt, TruthClaim):
            row[0], row[1] = OP_TRUTH, index[stmt.subject]
            row[5] = int(stmt.polarity is Polarity.TRUTHFUL)
        elif isinstance(stmt, SameRole):
            row[0], row[1], row[2] = OP_SAME, index[stmt.a], index[stmt.b]
        elif isinstance(stmt, CountRole):
            row[0], row[3] = OP_COUNT_ROLE, ROLE_INDEX[stmt.role]
            row[4], row[5] = pred(stmt.predicate)
            mask = scope_mask(stmt.scope)
        elif isinstance(stmt, CountLiars):
            row[0] = OP_COUNT_LIARS
            row[4], row[5] = pred(stmt.predicate)
            mask = scope_mask(stmt.scope)
        elif isinstance(stmt, ExactlyOneOf):
            row[0] = OP_XOR
            row[6] = emit(stmt.parts[0])
            row[7] = emit(stmt.parts[1])
        else:
            raise TypeError(f"not a statement: {stmt!r}")
        rows.append(row)
        masks.append(mask)
        return len(rows) - 1

    def last_player(stmt: Statement) -> int:
        refs = referenced_players(stmt)
        if isinstance(stmt, CountRole) and stmt.scope is None:
            return len(puzzle.players) - 1
        if isinstance(stmt, ExactlyOneOf):
            return max(last_player(p) for p in stmt.parts)
        return max(index[p] for p in refs)

    cons = []
    for hint in puzzle.hints:
        cons.append((last_player(hint), emit(hint), -1))
    for name in puzzle.players:
        stmt = puzzle.statements[name]
        cons.append((max(last_player(stmt), index[name]), emit(stmt), index[name]))
    # stable sort keeps hints ahead of statements at equal readiness
    cons.sort(key=lambda c: c[0])
    return Program(
        n=len(puzzle.players),
        nodes=np.asarray(rows, dtype=np.int64).reshape(-1, 8),
        masks=np.asarray(masks, dtype=np.uint64),
        roots=np.asarray([c[1] for c in cons], dtype=np.int64),
        expect=np.asarray([c[2] for c in cons], dtype=np.int64),
        ready=np.asarray([c[0] for c in cons], dtype=np.int64),
    )
