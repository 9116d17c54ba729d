"""Deterministic stand-in agents for offline runs.

Profiles are written ``kind[:epsilon][@seed][/base]``:

* ``oracle:0.1`` - knows the solution; each label it produces is flipped to a
  uniformly chosen wrong role with probability epsilon.  When a player is
  debated it re-derives that player's role (fresh noise draw).
* ``conformist/random`` - starts from its base profile's proposal, then adopts
  the plurality label on every player (ties keep its own label).
* ``stubborn/oracle:1.0@3`` - starts from its base proposal and never revises.
* ``random@7`` - uniformly random labels, redrawn for the debated player.

Without ``@seed`` the agent's randomness is keyed on the game seed and the
agent name; an explicit seed makes two agents draw identically.
"""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..protocol import DebateContext, DebateTranscript, DebateTurn, Proposal
from ..seeding import derive_seed
from ..statements import ROLES, Puzzle, Role
from .base import Agent, AgentSpec

KINDS = ("oracle", "conformist", "stubborn", "random")
_HEAD = re.compile(r"^(?P<kind>[a-z]+)(?::(?P<eps>[0-9.]+))?(?:@(?P<seed>\d+))?$")


@dataclass(frozen=True)
class ScriptedProfile:
    kind: str
    epsilon: float = 0.0
    seed: int | None = None
    base: ScriptedProfile | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown scripted profile {self.kind!r}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in [0, 1], got {self.epsilon}")

    @classmethod
    def parse(cls, text: str) -> ScriptedProfile:
        head, _, rest = text.strip().partition("/")
        m = _HEAD.match(head)
        if m is None:
            raise ValueError(f"cannot parse scripted profile {text!r}")
        base = cls.parse(rest) if rest else None
        if base is not None and m["kind"] not in ("conformist", "stubborn"):
            raise ValueError(f"only conformist and stubborn take a base profile: {text!r}")
        return cls(
            kind=m["kind"],
            epsilon=float(m["eps"]) if m["eps"] else 0.0,
            seed=int(m["seed"]) if m["seed"] else None,
            base=base,
        )

    def __str__(self) -> str:
        s = self.kind
        if self.kind == "oracle":
            s += f":{self.epsilon:g}"
        if self.seed is not None:
            s += f"@{self.seed}"
        if self.base is not None:
            s += f"/{self.base}"
        return s


def _plurality(labels: Sequence[Role], own: Role) -> Role:
    counts = Counter(labels)
    top = max(counts.values())
    leaders = [r for r, c in counts.items() if c == top]
    return leaders[0] if len(leaders) == 1 else own


class ScriptedAgent(Agent):
    def __init__(self, spec: AgentSpec, profile: ScriptedProfile, game_seed: int):
        super().__init__(spec)
        self.profile = profile
        self._root = profile.seed if profile.seed is not None else derive_seed(game_seed, spec.name)
        self._game_seed = game_seed
        self._confidence = 0

    def _rng(self, puzzle: Puzzle, *keys: object) -> random.Random:
        return random.Random(derive_seed(self._root, puzzle.id, *keys))

    @staticmethod
    def _truth(puzzle: Puzzle) -> Mapping[str, Role]:
        if puzzle.solution is None:
            raise ValueError(f"oracle agents need a certified solution ({puzzle.id})")
        return puzzle.solution

    def _noisy(self, puzzle: Puzzle, player: str, rng: random.Random, epsilon: float | None = None) -> Role:
        truth = self._truth(puzzle)[player]
        if rng.random() < (self.profile.epsilon if epsilon is None else epsilon):
            return rng.choice([r for r in ROLES if r is not truth])
        return truth

    def _base_proposal(self, puzzle: Puzzle, profile: ScriptedProfile, phase: str) -> Proposal:
        rng = self._rng(puzzle, phase)
        if profile is not self.profile and profile.seed is not None:
            rng = random.Random(derive_seed(profile.seed, puzzle.id, phase))
        if profile.kind == "oracle":
            assignment = {p: self._noisy(puzzle, p, rng, profile.epsilon) for p in puzzle.players}
            truth = self._truth(puzzle)
            conf = {p: 9 if assignment[p] is truth[p] else 5 for p in puzzle.players}
            return Proposal(assignment, "Derived from the statements and the hint.", conf)
        if profile.kind == "random":
            assignment = {p: rng.choice(ROLES) for p in puzzle.players}
            conf = {p: rng.randint(1, 10) for p in puzzle.players}
            return Proposal(assignment, "Guessed.", conf)
        base = profile.base or ScriptedProfile("random", seed=profile.seed)
        inner = self._base_proposal(puzzle, base, phase)
        level = 10 if profile.kind == "stubborn" else 4
        return Proposal(inner.assignment, inner.explanation, dict.fromkeys(puzzle.players, level))

    def propose(self, puzzle: Puzzle) -> Proposal:
        return self._base_proposal(puzzle, self.profile, "propose")

    def _turn_role(self, ctx: DebateContext, own: Role) -> Role:
        kind = self.profile.kind
        if kind == "oracle":
            return self._noisy(ctx.puzzle, ctx.focus_player, self._rng(ctx.puzzle, "debate", ctx.round_index))
        if kind == "random":
            return self._rng(ctx.puzzle, "debate", ctx.round_index).choice(ROLES)
        if kind == "conformist":
            return _plurality(list(ctx.current_labels().values()), own)
        return own

    def debate_turn(self, ctx: DebateContext) -> DebateTurn:
        labels = ctx.current_labels()
        role = self._turn_role(ctx, labels[self.name])
        agree = tuple(a for a in ctx.agents if a != self.name and labels[a] is role)
        disagree = tuple(a for a in ctx.agents if a != self.name and labels[a] is not role)
        return DebateTurn(
            agent=self.name,
            focus_player=ctx.focus_player,
            role=role,
            agree_with=agree,
            disagree_with=disagree,
            agree_reasoning=f"{', '.join(agree)} also hold {role.value}." if agree else "",
            disagree_reasoning=f"{', '.join(disagree)} differ from {role.value}." if disagree else "",
        )

    def self_adjust(self, ctx: DebateContext) -> Proposal:
        own = ctx.positions[self.name]
        kind = self.profile.kind
        if kind == "stubborn":
            return own
        assignment = dict(own.assignment)
        if kind == "conformist":
            turn_roles = {t.agent: t.role for t in ctx.turns}
            for p in ctx.puzzle.players:
                labels = [
                    turn_roles[a] if p == ctx.focus_player and a in turn_roles else ctx.positions[a].assignment[p]
                    for a in ctx.agents
                ]
                assignment[p] = _plurality(labels, own.assignment[p])
            return Proposal(assignment, "Went with the group.", own.confidence)
        turn = ctx.turn_of(self.name)
        if turn is not None:
            assignment[ctx.focus_player] = turn.role
        return Proposal(assignment, own.explanation, own.confidence)

    def preferred_order(self, puzzle: Puzzle, proposals) -> Sequence[str]:
        if self.profile.kind == "random":
            order = list(puzzle.players)
            self._rng(puzzle, "order").shuffle(order)
            return order
        conf = proposals[self.name].confidence or {}
        return sorted(puzzle.players, key=lambda p: -conf.get(p, 0))

    def supervise(self, puzzle: Puzzle, transcript: DebateTranscript, tied: Sequence[str]) -> Proposal:
        if self.profile.kind == "conformist" and transcript.final_per_agent:
            assignment = {}
            first = transcript.agents[0]
            for p in puzzle.players:
                labels = [transcript.final_per_agent[a].assignment[p] for a in transcript.agents]
                assignment[p] = _plurality(labels, transcript.final_per_agent[first].assignment[p])
            return Proposal(assignment, "Plurality of the final answers.")
        profile = self.profile if self.profile.kind in ("oracle", "random") else (
            self.profile.base or ScriptedProfile("random", seed=self.profile.seed))
        return self._base_proposal(puzzle, profile, "supervise")
