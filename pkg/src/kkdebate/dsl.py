"""Canonical text form of statements, and their English rendering.

Grammar::

    stmt  := "role_claim" "(" NAME "," ROLE ")"
           | "truth_claim" "(" NAME "," ("truthful" | "lying") ")"
           | "same_role" "(" NAME "," NAME ")"
           | "count" "(" scope "," ROLE "," pred ")"
           | "liars" "(" set "," pred ")"
           | "xor" "(" stmt "," stmt ")"
    scope := "all" | set
    set   := "{" NAME ("," NAME)* "}"
    pred  := "even" | "odd" | INT
    ROLE  := "knight" | "knave" | "spy"

Whitespace between tokens is insignificant.  ``to_text`` emits the canonical
spacing (one space after each comma), so ``to_text(parse(x))`` normalizes ``x``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .statements import (
    CountLiars,
    CountRole,
    Exactly,
    ExactlyOneOf,
    MalformedStatement,
    Parity,
    Polarity,
    Predicate,
    Puzzle,
    Role,
    RoleClaim,
    SameRole,
    Statement,
    TruthClaim,
    check_statement,
)

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_'\-]*)|(?P<punct>[(),{}]))")


class DslSyntaxError(ValueError):
    def __init__(self, message: str, position: int, expected: Sequence[str] = ()):
        self.position = position
        self.expected = tuple(expected)
        detail = f" (expected {' or '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at position {position}{detail}")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise DslSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, text: str | None = None, expected: Sequence[str] = ()) -> _Tok:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = expected or ([repr(text)] if text else [kind])
            got = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise DslSyntaxError(f"unexpected {got}", tok.pos, want)
        self.i += 1
        return tok

    def punct(self, ch: str) -> None:
        self.take("punct", ch)

    def name(self) -> str:
        return self.take("name", expected=["player name"]).text

    def keyword(self, options: Sequence[str]) -> str:
        tok = self.peek()
        if tok.kind != "name" or tok.text not in options:
            got = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise DslSyntaxError(f"unexpected {got}", tok.pos, [repr(o) for o in options])
        self.i += 1
        return tok.text

    def statement(self, depth: int = 0) -> Statement:
        head = self.keyword(_HEADS if depth == 0 else _ATOMIC_HEADS)
        self.punct("(")
        if head == "role_claim":
            subject = self.name()
            self.punct(",")
            stmt: Statement = RoleClaim(subject, Role(self.keyword(_ROLE_WORDS)))
        elif head == "truth_claim":
            subject = self.name()
            self.punct(",")
            stmt = TruthClaim(subject, Polarity(self.keyword(("truthful", "lying"))))
        elif head == "same_role":
            a = self.name()
            self.punct(",")
            stmt = SameRole(a, self.name())
        elif head == "count":
            scope = self.scope(allow_all=True)
            self.punct(",")
            role = Role(self.keyword(_ROLE_WORDS))
            self.punct(",")
            stmt = CountRole(scope, role, self.predicate())
        elif head == "liars":
            scope = self.scope(allow_all=False)
            self.punct(",")
            stmt = CountLiars(scope, self.predicate())
        else:
            first = self.statement(depth + 1)
            self.punct(",")
            stmt = ExactlyOneOf((first, self.statement(depth + 1)))
        self.punct(")")
        return stmt

    def scope(self, *, allow_all: bool) -> tuple[str, ...] | None:
        tok = self.peek()
        if allow_all and tok.kind == "name" and tok.text == "all":
            self.i += 1
            return None
        if not (tok.kind == "punct" and tok.text == "{"):
            raise DslSyntaxError(
                "unexpected " + (repr(tok.text) if tok.kind != "eof" else "end of input"),
                tok.pos,
                ["'all'", "'{'"] if allow_all else ["'{'"],
            )
        self.i += 1
        names = [self.name()]
        while self.peek().text == ",":
            self.i += 1
            names.append(self.name())
        start = tok.pos
        self.punct("}")
        if len(set(names)) != len(names):
            raise DslSyntaxError("duplicate player in set", start)
        return tuple(names)

    def predicate(self) -> Predicate:
        tok = self.peek()
        if tok.kind == "int":
            self.i += 1
            return Exactly(int(tok.text))
        return Parity(self.keyword(("even", "odd")))


_ROLE_WORDS = tuple(r.value for r in Role)
_ATOMIC_HEADS = ("role_claim", "truth_claim", "same_role", "count", "liars")
_HEADS = _ATOMIC_HEADS + ("xor",)


def parse(text: str, roster: Iterable[str] | None = None) -> Statement:
    """Parse canonical DSL text into a statement.

    With ``roster`` given, names outside it raise :class:`MalformedStatement`.
    """
    p = _Parser(text)
    try:
        stmt = p.statement()
    except MalformedStatement as exc:
        raise DslSyntaxError(str(exc), p.peek().pos) from None
    tok = p.peek()
    if tok.kind != "eof":
        raise DslSyntaxError(f"trailing input {tok.text!r}", tok.pos, ["end of input"])
    if roster is not None:
        check_statement(stmt, roster)
    return stmt


def _pred_text(pred: Predicate) -> str:
    return str(pred.k) if isinstance(pred, Exactly) else pred.value


def _set_text(scope: tuple[str, ...]) -> str:
    return "{" + ", ".join(scope) + "}"


def to_text(stmt: Statement) -> str:
    if isinstance(stmt, RoleClaim):
        return f"role_claim({stmt.subject}, {stmt.role.value})"
    if isinstance(stmt, TruthClaim):
        return f"truth_claim({stmt.subject}, {stmt.polarity.value})"
    if isinstance(stmt, SameRole):
        return f"same_role({stmt.a}, {stmt.b})"
    if isinstance(stmt, CountRole):
        scope = "all" if stmt.scope is None else _set_text(stmt.scope)
        return f"count({scope}, {stmt.role.value}, {_pred_text(stmt.predicate)})"
    if isinstance(stmt, CountLiars):
        return f"liars({_set_text(stmt.scope)}, {_pred_text(stmt.predicate)})"
    if isinstance(stmt, ExactlyOneOf):
        return f"xor({to_text(stmt.parts[0])}, {to_text(stmt.parts[1])})"
    raise TypeError(f"not a statement: {stmt!r}")


# -- natural language -------------------------------------------------------

_NUMBER_WORDS = (
    "zero", "one", "two", "three", "four", "five", "six",
    "seven", "eight", "nine", "ten", "eleven", "twelve",
)
_PLURAL = {Role.KNIGHT: "knights", Role.KNAVE: "knaves", Role.SPY: "spies"}


def _number(k: int) -> str:
    return _NUMBER_WORDS[k] if k < len(_NUMBER_WORDS) else str(k)


def _who(name: str, speaker: str | None) -> str:
    return "I" if name == speaker else name


def _listing(names: Sequence[str], speaker: str | None) -> str:
    words = [_who(n, speaker) for n in names]
    if len(words) == 1:
        return words[0]
    if len(words) == 2:
        return f"{words[0]} and {words[1]}"
    return ", ".join(words[:-1]) + ", and " + words[-1]


def _among(scope: tuple[str, ...] | None, speaker: str | None) -> str:
    return "Among all players" if scope is None else f"Among {_listing(scope, speaker)}"


def render_natural(stmt: Statement, speaker: str | None = None) -> str:
    """English sentence for ``stmt`` as said by ``speaker`` (``None`` for hints)."""
    if isinstance(stmt, RoleClaim):
        if stmt.subject == speaker:
            return f"I am a {stmt.role.value}."
        return f"{stmt.subject} is a {stmt.role.value}."
    if isinstance(stmt, TruthClaim):
        verb = "telling the truth" if stmt.polarity is Polarity.TRUTHFUL else "lying"
        if stmt.subject == speaker:
            return f"I am {verb}."
        return f"{stmt.subject} is {verb}."
    if isinstance(stmt, SameRole):
        if stmt.a == speaker:
            pair = f"{_who(stmt.b, speaker)} and I"
        elif stmt.b == speaker:
            # speaker-second keeps the "I first" form distinct from speaker-first
            pair = f"I and {stmt.a}"
        else:
            pair = f"{stmt.a} and {stmt.b}"
        return f"{pair} have the same role."
    if isinstance(stmt, CountRole):
        among = _among(stmt.scope, speaker)
        noun = _PLURAL[stmt.role]
        pred = stmt.predicate
        if isinstance(pred, Parity):
            return f"{among}, the number of {noun} is {pred.value}."
        if pred.k == 0:
            return f"{among}, there are no {noun}."
        if pred.k == 1:
            return f"{among}, there is exactly one {stmt.role.value}."
        return f"{among}, there are exactly {_number(pred.k)} {noun}."
    if isinstance(stmt, CountLiars):
        among = _among(stmt.scope, speaker)
        pred = stmt.predicate
        if isinstance(pred, Parity):
            return f"{among}, the number of people who are lying is {pred.value}."
        if pred.k == 0:
            return f"{among}, nobody is lying."
        if pred.k == 1:
            return f"{among}, exactly one person is lying."
        return f"{among}, exactly {_number(pred.k)} people are lying."
    if isinstance(stmt, ExactlyOneOf):
        first, second = (render_natural(p, speaker) for p in stmt.parts)
        return f"Among the following two statements, exactly one is true: (1) {first} (2) {second}"
    raise TypeError(f"not a statement: {stmt!r}")


HINT_PREFIX = "I am the game manager and here is a hint for you: "


def render_game_text(puzzle: Puzzle) -> str:
    """The game-info block used inside every prompt."""
    lines = []
    for name in puzzle.players:
        lines += ["---", f"Player name: {name}", f"Player statement: {render_natural(puzzle.statements[name], name)}"]
    lines.append("---")
    if puzzle.hints:
        hint = " ".join(render_natural(h) for h in puzzle.hints)
        lines.append(f"Message from the game manager: {HINT_PREFIX}{hint}")
    else:
        lines.append("Message from the game manager: I am the game manager and I have no hint for you.")
    return "\n".join(lines)


def render_assignment(assignment, players: Sequence[str]) -> str:
    """``Rachel = knight; Violet = knight; ...`` in roster order."""
    return "; ".join(f"{p} = {Role(assignment[p]).value}" for p in players)
