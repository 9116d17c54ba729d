"""Roles, the statement AST, and truth semantics for Knight-Knave-Spy puzzles.

A player's statement is evaluated against a :class:`World`, which fixes both
the role of every player and a truth bit per player saying whether that
player's own statement is true.  Knights force their bit to true, knaves to
false, spies are free.  A world is consistent with a puzzle when every
player's statement evaluates to that player's bit and every hint holds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union


class Role(str, enum.Enum):
    KNIGHT = "knight"
    KNAVE = "knave"
    SPY = "spy"

    def __str__(self) -> str:
        return self.value


ROLES: tuple[Role, ...] = (Role.KNIGHT, Role.KNAVE, Role.SPY)


class Polarity(str, enum.Enum):
    TRUTHFUL = "truthful"
    LYING = "lying"

    def __str__(self) -> str:
        return self.value


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Exactly:
    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError(f"count must be nonnegative, got {self.k}")


Predicate = Union[Exactly, Parity]


def holds(predicate: Predicate, count: int) -> bool:
    if isinstance(predicate, Exactly):
        return count == predicate.k
    return (count % 2 == 1) == (predicate is Parity.ODD)


class MalformedStatement(ValueError):
    """A statement references unknown players or breaks an AST invariant."""


@dataclass(frozen=True)
class RoleClaim:
    subject: str
    role: Role


@dataclass(frozen=True)
class TruthClaim:
    subject: str
    polarity: Polarity


@dataclass(frozen=True)
class SameRole:
    a: str
    b: str

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise MalformedStatement("same-role needs two distinct players")


@dataclass(frozen=True)
class CountRole:
    """Count players holding ``role`` within ``scope`` (``None`` means all players)."""

    scope: tuple[str, ...] | None
    role: Role
    predicate: Predicate

    def __post_init__(self) -> None:
        _check_scope(self.scope, allow_all=True)


@dataclass(frozen=True)
class CountLiars:
    """Count players in ``scope`` whose truth bit is false."""

    scope: tuple[str, ...]
    predicate: Predicate

    def __post_init__(self) -> None:
        _check_scope(self.scope, allow_all=False)


@dataclass(frozen=True)
class ExactlyOneOf:
    parts: tuple["Statement", "Statement"]

    def __post_init__(self) -> None:
        if len(self.parts) != 2:
            raise MalformedStatement("exactly-one-of takes exactly two parts")
        if any(isinstance(p, ExactlyOneOf) for p in self.parts):
            raise MalformedStatement("exactly-one-of parts cannot nest")


Statement = Union[RoleClaim, TruthClaim, SameRole, CountRole, CountLiars, ExactlyOneOf]
ATOMIC_FORMS = (RoleClaim, TruthClaim, SameRole, CountRole, CountLiars)


def _check_scope(scope: tuple[str, ...] | None, *, allow_all: bool) -> None:
    if scope is None:
        if not allow_all:
            raise MalformedStatement("scope must list players")
        return
    if not isinstance(scope, tuple):
        raise MalformedStatement("scope must be a tuple of player names")
    if not scope:
        raise MalformedStatement("scope must not be empty")
    if len(set(scope)) != len(scope):
        raise MalformedStatement(f"duplicate player in scope {scope}")


def referenced_players(stmt: Statement) -> set[str]:
    if isinstance(stmt, (RoleClaim, TruthClaim)):
        return {stmt.subject}
    if isinstance(stmt, SameRole):
        return {stmt.a, stmt.b}
    if isinstance(stmt, (CountRole, CountLiars)):
        return set(stmt.scope or ())
    if isinstance(stmt, ExactlyOneOf):
        return referenced_players(stmt.parts[0]) | referenced_players(stmt.parts[1])
    raise TypeError(f"not a statement: {stmt!r}")


def check_statement(stmt: Statement, players: Iterable[str]) -> None:
    """Raise :class:`MalformedStatement` if ``stmt`` names a player outside ``players``."""
    unknown = referenced_players(stmt) - set(players)
    if unknown:
        raise MalformedStatement(f"unknown player(s): {', '.join(sorted(unknown))}")


@dataclass(frozen=True)
class World:
    roles: Mapping[str, Role]
    truth: Mapping[str, bool]

    @classmethod
    def from_roles(cls, roles: Mapping[str, Role], spy_bits: Mapping[str, bool] | None = None) -> World:
        """Build the world whose knight/knave bits are forced by role.

        Spies take their bit from ``spy_bits`` (default true).
        """
        spy_bits = spy_bits or {}
        truth = {}
        for name, role in roles.items():
            if role is Role.KNIGHT:
                truth[name] = True
            elif role is Role.KNAVE:
                truth[name] = False
            else:
                truth[name] = bool(spy_bits.get(name, True))
        return cls(dict(roles), truth)

    def coupled(self) -> bool:
        for name, role in self.roles.items():
            if role is Role.KNIGHT and not self.truth[name]:
                return False
            if role is Role.KNAVE and self.truth[name]:
                return False
        return True


def evaluate(stmt: Statement, world: World) -> bool:
    try:
        if isinstance(stmt, RoleClaim):
            return world.roles[stmt.subject] is stmt.role
        if isinstance(stmt, TruthClaim):
            bit = world.truth[stmt.subject]
            return bit if stmt.polarity is Polarity.TRUTHFUL else not bit
        if isinstance(stmt, SameRole):
            return world.roles[stmt.a] is world.roles[stmt.b]
        if isinstance(stmt, CountRole):
            scope = world.roles.keys() if stmt.scope is None else stmt.scope
            return holds(stmt.predicate, sum(world.roles[p] is stmt.role for p in scope))
        if isinstance(stmt, CountLiars):
            return holds(stmt.predicate, sum(not world.truth[p] for p in stmt.scope))
        if isinstance(stmt, ExactlyOneOf):
            return evaluate(stmt.parts[0], world) != evaluate(stmt.parts[1], world)
    except KeyError as exc:
        raise MalformedStatement(f"unknown player {exc.args[0]!r}") from None
    raise TypeError(f"not a statement: {stmt!r}")


RoleAssignment = Mapping[str, Role]


@dataclass(frozen=True)
class Puzzle:
    id: str
    players: tuple[str, ...]
    statements: Mapping[str, Statement]
    hints: tuple[Statement, ...] = ()
    solution: Mapping[str, Role] | None = field(default=None, compare=True)

    def __post_init__(self) -> None:
        if not self.players:
            raise MalformedStatement("a puzzle needs at least one player")
        if len(set(self.players)) != len(self.players):
            raise MalformedStatement("player names must be unique")
        if any(not p for p in self.players):
            raise MalformedStatement("player names must be non-empty")
        if set(self.statements) != set(self.players):
            raise MalformedStatement("exactly one statement per player is required")
        for stmt in (*self.statements.values(), *self.hints):
            check_statement(stmt, self.players)
        if self.solution is not None and set(self.solution) != set(self.players):
            raise MalformedStatement("solution must cover every player")

    @property
    def size(self) -> int:
        return len(self.players)


def is_consistent(world: World, puzzle: Puzzle) -> bool:
    missing = set(puzzle.players) - set(world.roles)
    if missing or set(puzzle.players) - set(world.truth):
        raise MalformedStatement(f"world does not cover players {sorted(missing)}")
    if not world.coupled():
        return False
    for name in puzzle.players:
        if evaluate(puzzle.statements[name], world) != world.truth[name]:
            return False
    return all(evaluate(h, world) for h in puzzle.hints)
