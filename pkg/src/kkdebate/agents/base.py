from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from ..protocol import DebateContext, DebateTranscript, DebateTurn, Proposal
from ..statements import Puzzle


class Tier(str, enum.Enum):
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"


TIER_RANK = {Tier.HIGH: 2, Tier.MEDIUM: 1, Tier.LOW: 0}


@dataclass(frozen=True)
class AgentSpec:
    """A team slot. ``model`` is an endpoint model id (remote) or a profile string (scripted)."""

    name: str
    kind: str
    model: str
    perf_tier: Tier | None = None
    conf_tier: Tier | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("remote", "scripted"):
            raise ValueError(f"agent kind must be remote or scripted, got {self.kind!r}")
        if not self.name:
            raise ValueError("agent name must be non-empty")
        for attr in ("perf_tier", "conf_tier"):
            value = getattr(self, attr)
            if value is not None:
                object.__setattr__(self, attr, Tier(value))

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "model": self.model,
            "perf_tier": self.perf_tier.value if self.perf_tier else None,
            "conf_tier": self.conf_tier.value if self.conf_tier else None,
        }

    @classmethod
    def from_record(cls, rec: dict) -> AgentSpec:
        return cls(rec["name"], rec["kind"], rec["model"], rec.get("perf_tier"), rec.get("conf_tier"))


class SupervisorError(RuntimeError):
    """The supervisor could not produce a usable assignment."""


class Agent:
    """Per-game agent instance; holds whatever history the agent keeps."""

    def __init__(self, spec: AgentSpec):
        self.spec = spec
        self.name = spec.name

    def propose(self, puzzle: Puzzle) -> Proposal:
        raise NotImplementedError

    def debate_turn(self, ctx: DebateContext) -> DebateTurn:
        raise NotImplementedError

    def self_adjust(self, ctx: DebateContext) -> Proposal:
        raise NotImplementedError

    def final_decision(self, transcript: DebateTranscript, puzzle: Puzzle, confidence_visible: bool) -> Proposal | None:
        """A fresh full answer for the final phase, or ``None`` to reuse the last adjustment."""
        return None

    def preferred_order(self, puzzle: Puzzle, proposals) -> Sequence[str] | None:
        return None

    def supervise(self, puzzle: Puzzle, transcript: DebateTranscript, tied: Sequence[str]) -> Proposal:
        raise NotImplementedError
