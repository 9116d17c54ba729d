"""Independent reference implementations used as test oracles.

They deliberately share no code with the package beyond the AST classes and
role enum, so a bug in the package cannot hide behind the same bug here.
"""

from __future__ import annotations

import math
from fractions import Fraction

from kkdebate.statements import (
    CountLiars, CountRole, Exactly, ExactlyOneOf, Parity, Polarity, Role, RoleClaim, SameRole, TruthClaim,
)

ROLE_ORDER = (Role.KNIGHT, Role.KNAVE, Role.SPY)


def _pred(pred, count):
    if isinstance(pred, Exactly):
        return count == pred.k
    return count % 2 == (1 if pred == Parity.ODD else 0)


def truth_of(stmt, roles, bits):
    if isinstance(stmt, RoleClaim):
        return roles[stmt.subject] == stmt.role
    if isinstance(stmt, TruthClaim):
        return bits[stmt.subject] == (stmt.polarity == Polarity.TRUTHFUL)
    if isinstance(stmt, SameRole):
        return roles[stmt.a] == roles[stmt.b]
    if isinstance(stmt, CountRole):
        scope = list(roles) if stmt.scope is None else stmt.scope
        return _pred(stmt.predicate, len([p for p in scope if roles[p] == stmt.role]))
    if isinstance(stmt, CountLiars):
        return _pred(stmt.predicate, len([p for p in stmt.scope if not bits[p]]))
    if isinstance(stmt, ExactlyOneOf):
        a, b = (truth_of(s, roles, bits) for s in stmt.parts)
        return (a and not b) or (b and not a)
    raise TypeError(stmt)


def naive_solutions(puzzle):
    """Recursive enumeration: assign (role, bit) player by player, check only at the leaves."""
    players = list(puzzle.players)
    found = set()

    def rec(i, roles, bits):
        if i == len(players):
            ok = all(truth_of(puzzle.statements[p], roles, bits) == bits[p] for p in players)
            ok = ok and all(truth_of(h, roles, bits) for h in puzzle.hints)
            if ok:
                found.add(tuple(roles[p] for p in players))
            return
        p = players[i]
        for role in ROLE_ORDER:
            for bit in ((True,) if role == Role.KNIGHT else (False,) if role == Role.KNAVE else (False, True)):
                roles[p], bits[p] = role, bit
                rec(i + 1, roles, bits)
        roles.pop(p, None)
        bits.pop(p, None)

    rec(0, {}, {})
    return {tuple(t) for t in found}


def strict_winner(labels):
    labels = list(labels)
    for role in ROLE_ORDER:
        if 2 * labels.count(role) > len(labels):
            return role
    return None


def brute_auc(snapshots, players, agents, truth):
    """Exact rational recomputation of the four AUCs from raw snapshot tables (rounds 1..T)."""
    rounds = snapshots[1:]
    T = len(rounds)
    strict = smooth = agree_all = agree_major = Fraction(0)
    need = math.ceil(Fraction(len(agents), 2))
    for snap in rounds:
        correct = 0
        all_n = major_n = 0
        for p in players:
            labels = [snap[a][p] for a in agents]
            w = strict_winner(labels)
            correct += w is not None and w == truth[p]
            top = max(labels.count(r) for r in ROLE_ORDER)
            all_n += top == len(agents)
            major_n += top >= need
        strict += 1 if correct == len(players) else 0
        smooth += Fraction(correct, len(players))
        agree_all += Fraction(all_n, len(players))
        agree_major += Fraction(major_n, len(players))
    return {k: float(v / T) for k, v in
            dict(auc_strict=strict, auc_smooth=smooth, auc_agree_all=agree_all, auc_agree_major=agree_major).items()}


def replay_transitions(record):
    """Count transitions straight from a transcript record (plain dicts, string roles)."""
    counts = {}
    agents = record["agents"]
    prev = {a: dict(record["initial"][a]["assignment"]) for a in agents}
    truth = record["solution"]
    A = len(agents)
    need = (A + 2) // 2  # ceil((A + 1) / 2)
    for rnd in record["rounds"]:
        f = rnd["focus_player"]
        labels = [prev[a][f] for a in agents]
        top = max(labels.count(r) for r in set(labels))
        for a in agents:
            own = prev[a][f]
            mark = "C" if own == truth[f] else "W"
            if top < need:
                start = "C" + mark
            elif labels.count(own) >= need:
                start = "Ma" + mark
            else:
                start = "Mi" + mark
            end = "C" if rnd["adjustments"][a]["assignment"][f] == truth[f] else "W"
            counts[f"{start}->{end}"] = counts.get(f"{start}->{end}", 0) + 1
        prev = {a: dict(rnd["adjustments"][a]["assignment"]) for a in agents}
    return counts
