"""Data carried through a debate: proposals, turns, rounds, and the transcript."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Mapping

from .statements import Puzzle, Role

TRANSCRIPT_SCHEMA = 1


def majority_vote(labels: Mapping[str, Role]) -> Role | None:
    """Label held by strictly more than half the agents, else ``None`` (a tie)."""
    if len(labels) < 2:
        raise ValueError("majority vote needs at least two labels")
    role, count = Counter(labels.values()).most_common(1)[0]
    return role if 2 * count > len(labels) else None


@dataclass(frozen=True)
class Proposal:
    assignment: Mapping[str, Role]
    explanation: str = ""
    confidence: Mapping[str, int] | None = None
    fallback: bool = False

    def __post_init__(self) -> None:
        if self.confidence is not None:
            bad = {p: c for p, c in self.confidence.items() if not 1 <= c <= 10}
            if bad:
                raise ValueError(f"confidence must be in [1, 10]: {bad}")

    def covers(self, players) -> bool:
        return set(self.assignment) == set(players)

    def to_record(self) -> dict[str, Any]:
        return {
            "assignment": {p: Role(r).value for p, r in self.assignment.items()},
            "explanation": self.explanation,
            "confidence": None if self.confidence is None else dict(self.confidence),
            "fallback": self.fallback,
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> Proposal:
        return cls(
            {p: Role(r) for p, r in rec["assignment"].items()},
            rec.get("explanation", ""),
            rec.get("confidence"),
            rec.get("fallback", False),
        )


@dataclass(frozen=True)
class DebateTurn:
    agent: str
    focus_player: str
    role: Role
    agree_with: tuple[str, ...] = ()
    disagree_with: tuple[str, ...] = ()
    agree_reasoning: str = ""
    disagree_reasoning: str = ""
    fallback: bool = False

    def __post_init__(self) -> None:
        if set(self.agree_with) & set(self.disagree_with):
            raise ValueError("an agent cannot both agree and disagree with the same peer")
        if self.agent in self.agree_with or self.agent in self.disagree_with:
            raise ValueError("agree/disagree sets must not include the speaking agent")

    def to_record(self) -> dict[str, Any]:
        return {
            "agent": self.agent,
            "focus_player": self.focus_player,
            "role": self.role.value,
            "agree_with": list(self.agree_with),
            "disagree_with": list(self.disagree_with),
            "agree_reasoning": self.agree_reasoning,
            "disagree_reasoning": self.disagree_reasoning,
            "fallback": self.fallback,
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> DebateTurn:
        return cls(
            rec["agent"], rec["focus_player"], Role(rec["role"]),
            tuple(rec["agree_with"]), tuple(rec["disagree_with"]),
            rec["agree_reasoning"], rec["disagree_reasoning"], rec.get("fallback", False),
        )


@dataclass(frozen=True)
class Round:
    index: int
    focus_player: str
    turns: tuple[DebateTurn, ...]
    adjustments: Mapping[str, Proposal]
    consensus: Role | None

    def to_record(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "focus_player": self.focus_player,
            "turns": [t.to_record() for t in self.turns],
            "adjustments": {a: p.to_record() for a, p in self.adjustments.items()},
            "consensus": None if self.consensus is None else self.consensus.value,
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> Round:
        return cls(
            rec["index"], rec["focus_player"],
            tuple(DebateTurn.from_record(t) for t in rec["turns"]),
            {a: Proposal.from_record(p) for a, p in rec["adjustments"].items()},
            None if rec["consensus"] is None else Role(rec["consensus"]),
        )


@dataclass(frozen=True)
class DebateContext:
    """What an agent is shown during one round of the player-by-player loop."""

    puzzle: Puzzle
    agents: tuple[str, ...]
    focus_player: str
    round_index: int
    initial: Mapping[str, Proposal]
    positions: Mapping[str, Proposal]
    turns: tuple[DebateTurn, ...] = ()
    rounds: tuple[Round, ...] = ()
    confidence_visible: bool = False

    def current_labels(self) -> dict[str, Role]:
        """Each agent's label on the focus player, updated by turns already taken."""
        labels = {a: self.positions[a].assignment[self.focus_player] for a in self.agents}
        for t in self.turns:
            labels[t.agent] = t.role
        return labels

    def turn_of(self, agent: str) -> DebateTurn | None:
        for t in self.turns:
            if t.agent == agent:
                return t
        return None


@dataclass
class DebateTranscript:
    puzzle_id: str
    players: tuple[str, ...]
    solution: Mapping[str, Role] | None
    agents: tuple[str, ...]
    config: Mapping[str, Any]
    initial: Mapping[str, Proposal]
    order: tuple[str, ...]
    rounds: list[Round] = field(default_factory=list)
    final_per_agent: Mapping[str, Proposal] = field(default_factory=dict)
    final_decision: Mapping[str, Role] = field(default_factory=dict)
    supervisor_invocations: list[tuple[str, str]] = field(default_factory=list)
    valid: bool = True
    error: str | None = None
    elapsed: float | None = None

    def snapshots(self) -> list[dict[str, dict[str, Role]]]:
        """Per-agent full assignments: index 0 is the initial proposals, t after round t."""
        snaps = [{a: dict(self.initial[a].assignment) for a in self.agents}]
        for rnd in self.rounds:
            snaps.append({a: dict(rnd.adjustments[a].assignment) for a in self.agents})
        return snaps

    @property
    def fallback_count(self) -> int:
        n = sum(p.fallback for p in self.initial.values())
        for rnd in self.rounds:
            n += sum(t.fallback for t in rnd.turns)
            n += sum(p.fallback for p in rnd.adjustments.values())
        return n + sum(p.fallback for p in self.final_per_agent.values())

    def to_record(self) -> dict[str, Any]:
        return {
            "schema": TRANSCRIPT_SCHEMA,
            "puzzle_id": self.puzzle_id,
            "players": list(self.players),
            "solution": None if self.solution is None else {p: Role(r).value for p, r in self.solution.items()},
            "agents": list(self.agents),
            "config": dict(self.config),
            "initial": {a: p.to_record() for a, p in self.initial.items()},
            "order": list(self.order),
            "rounds": [r.to_record() for r in self.rounds],
            "final_per_agent": {a: p.to_record() for a, p in self.final_per_agent.items()},
            "final_decision": {p: Role(r).value for p, r in self.final_decision.items()},
            "supervisor_invocations": [list(s) for s in self.supervisor_invocations],
            "fallbacks": self.fallback_count,
            "valid": self.valid,
            "error": self.error,
            "elapsed": self.elapsed,
        }

    @classmethod
    def from_record(cls, rec: Mapping[str, Any]) -> DebateTranscript:
        if rec.get("schema") != TRANSCRIPT_SCHEMA:
            raise ValueError(f"unsupported transcript schema {rec.get('schema')!r}")
        sol = rec["solution"]
        return cls(
            puzzle_id=rec["puzzle_id"],
            players=tuple(rec["players"]),
            solution=None if sol is None else {p: Role(r) for p, r in sol.items()},
            agents=tuple(rec["agents"]),
            config=rec["config"],
            initial={a: Proposal.from_record(p) for a, p in rec["initial"].items()},
            order=tuple(rec["order"]),
            rounds=[Round.from_record(r) for r in rec["rounds"]],
            final_per_agent={a: Proposal.from_record(p) for a, p in rec["final_per_agent"].items()},
            final_decision={p: Role(r) for p, r in rec["final_decision"].items()},
            supervisor_invocations=[tuple(s) for s in rec["supervisor_invocations"]],
            valid=rec["valid"],
            error=rec["error"],
            elapsed=rec.get("elapsed"),
        )
