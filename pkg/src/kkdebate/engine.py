"""The debate state machine: proposals, player-by-player rounds, final vote."""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass, replace
from typing import Any, Mapping, Sequence

from .agents import Agent, AgentSpec, SupervisorError, make_agent
from .protocol import DebateContext, DebateTranscript, Proposal, Round, majority_vote
from .seeding import derive_seed
from .statements import Puzzle, Role

ORDER_POLICIES = ("fixed", "agreed")
DEFAULT_SUPERVISOR = AgentSpec("Supervisor", "scripted", "oracle:0")


@dataclass(frozen=True)
class DebateConfig:
    team: tuple[AgentSpec, ...]
    confidence_visible: bool = False
    order_policy: str = "fixed"
    depth: int = 1
    supervisor: AgentSpec = DEFAULT_SUPERVISOR
    seed: int = 0
    record_timing: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "team", tuple(self.team))
        if len(self.team) < 2:
            raise ValueError("a debate needs at least two agents")
        names = [s.name for s in self.team]
        if len(set(names)) != len(names):
            raise ValueError(f"agent names must be unique within a team: {names}")
        if self.supervisor.name in names:
            raise ValueError("the supervisor must not share a name with a team member")
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        if self.order_policy not in ORDER_POLICIES:
            raise ValueError(f"order policy must be one of {ORDER_POLICIES}")

    @property
    def uses_remote(self) -> bool:
        return any(s.kind == "remote" for s in (*self.team, self.supervisor))

    def summary(self) -> dict[str, Any]:
        return {
            "team": [s.to_record() for s in self.team],
            "supervisor": self.supervisor.to_record(),
            "confidence_visible": self.confidence_visible,
            "order_policy": self.order_policy,
            "depth": self.depth,
            "seed": self.seed,
        }


def _is_permutation(order: Sequence[str] | None, players: Sequence[str]) -> bool:
    return order is not None and len(order) == len(players) and set(order) == set(players)


def decide_order(cfg: DebateConfig, puzzle: Puzzle, proposals: Mapping[str, Proposal],
                 agents: Sequence[Agent] = ()) -> tuple[str, ...]:
    """Fixed: listed order.  Agreed: plurality over the agents' valid proposed orders."""
    if cfg.order_policy == "fixed":
        return tuple(puzzle.players)
    votes = Counter()
    for agent in agents:
        order = agent.preferred_order(puzzle, proposals)
        if _is_permutation(order, puzzle.players):
            votes[tuple(order)] += 1
    if not votes:
        return tuple(puzzle.players)
    top = max(votes.values())
    leaders = [o for o, c in votes.items() if c == top]
    if len(leaders) == 1:
        return leaders[0]
    return random.Random(derive_seed(cfg.seed, puzzle.id, "order")).choice(leaders)


def _full(prop: Proposal, puzzle: Puzzle, who: str) -> Proposal:
    if not prop.covers(puzzle.players):
        raise ValueError(f"{who} returned an assignment that does not cover every player")
    return prop


def run_debate(puzzle: Puzzle, cfg: DebateConfig, client=None) -> DebateTranscript:
    started = time.perf_counter()
    game_seed = derive_seed(cfg.seed, puzzle.id)
    agents = [make_agent(spec, game_seed, client) for spec in cfg.team]
    names = tuple(a.name for a in agents)

    initial = {a.name: _full(a.propose(puzzle), puzzle, a.name) for a in agents}
    order = decide_order(cfg, puzzle, initial, agents)
    tr = DebateTranscript(
        puzzle_id=puzzle.id,
        players=tuple(puzzle.players),
        solution=puzzle.solution,
        agents=names,
        config=cfg.summary(),
        initial=initial,
        order=order,
    )

    positions = dict(initial)
    index = 0
    for _ in range(cfg.depth):
        for focus in order:
            index += 1
            ctx = DebateContext(puzzle, names, focus, index, initial, dict(positions),
                                rounds=tuple(tr.rounds), confidence_visible=cfg.confidence_visible)
            turns = []
            for agent in agents:
                ctx_now = replace(ctx, turns=tuple(turns))
                turns.append(agent.debate_turn(ctx_now))
            ctx_all = replace(ctx, turns=tuple(turns))
            adjustments = {a.name: _full(a.self_adjust(ctx_all), puzzle, a.name) for a in agents}
            consensus = majority_vote({a: p.assignment[focus] for a, p in adjustments.items()})
            tr.rounds.append(Round(index, focus, tuple(turns), adjustments, consensus))
            positions.update(adjustments)

    finals = {}
    for agent in agents:
        prop = agent.final_decision(tr, puzzle, cfg.confidence_visible)
        finals[agent.name] = positions[agent.name] if prop is None else _full(prop, puzzle, agent.name)
    tr.final_per_agent = finals

    decision: dict[str, Role] = {}
    tied = []
    for p in puzzle.players:
        vote = majority_vote({a: finals[a].assignment[p] for a in names})
        if vote is None:
            tied.append(p)
        else:
            decision[p] = vote
    if tied:
        tr.supervisor_invocations = [(p, "tie") for p in tied]
        supervisor = make_agent(cfg.supervisor, game_seed, client)
        try:
            verdict = _full(supervisor.supervise(puzzle, tr, tied), puzzle, supervisor.name)
        except (SupervisorError, ValueError) as exc:
            tr.valid = False
            tr.error = f"supervisor: {exc}"
        else:
            for p in tied:
                decision[p] = verdict.assignment[p]
    tr.final_decision = {p: decision[p] for p in puzzle.players if p in decision}
    if cfg.record_timing:
        tr.elapsed = time.perf_counter() - started
    return tr
