"""Agents backed by a chat-completions endpoint."""

from __future__ import annotations

import json
import logging
import random
import re
from typing import Any, Callable, Sequence

from ..protocol import DebateContext, DebateTranscript, DebateTurn, Proposal
from ..seeding import derive_seed
from ..statements import ROLES, Puzzle, Role
from . import prompts
from .base import Agent, AgentSpec, SupervisorError

log = logging.getLogger(__name__)

REPAIR_MESSAGE = (
    "Your previous response could not be used: {error}. "
    "Please follow strictly the format of the return."
)
_FENCE = re.compile(r"```(?:json)?\s*(.*?)```", re.S)


class MalformedResponse(ValueError):
    pass


def extract_json(text: str) -> dict[str, Any]:
    """First JSON object in ``text``: a fenced block if present, else the outermost braces."""
    candidates = [m.group(1) for m in _FENCE.finditer(text)]
    start, end = text.find("{"), text.rfind("}")
    if start != -1 and end > start:
        candidates.append(text[start:end + 1])
    decoder = json.JSONDecoder()
    for cand in candidates:
        cand = cand.strip()
        i = cand.find("{")
        if i == -1:
            continue
        try:
            obj, _ = decoder.raw_decode(cand[i:])
        except json.JSONDecodeError:
            continue
        if isinstance(obj, dict):
            return obj
    raise MalformedResponse("no JSON object found")


def _role(value: Any, what: str) -> Role:
    if not isinstance(value, str):
        raise MalformedResponse(f"{what} must be a role string")
    try:
        return Role(value.strip().lower())
    except ValueError:
        raise MalformedResponse(f"{what} has invalid role {value!r}; use knight, knave or spy") from None


def parse_assignment(obj: dict[str, Any], players: Sequence[str]) -> Proposal:
    entries = obj.get("players")
    if not isinstance(entries, list):
        raise MalformedResponse('missing "players" array')
    assignment: dict[str, Role] = {}
    confidence: dict[str, int] = {}
    for e in entries:
        if not isinstance(e, dict) or not isinstance(e.get("name"), str):
            raise MalformedResponse('each "players" entry needs a "name" and a "role"')
        name = e["name"].strip()
        if name not in players:
            raise MalformedResponse(f"unknown player {name!r}")
        if name in assignment:
            raise MalformedResponse(f"player {name!r} listed twice")
        assignment[name] = _role(e.get("role"), f"role of {name}")
        if "confidence" in e:
            c = e["confidence"]
            if isinstance(c, bool) or not isinstance(c, int) or not 1 <= c <= 10:
                raise MalformedResponse(f"confidence of {name} must be an integer from 1 to 10")
            confidence[name] = c
    missing = [p for p in players if p not in assignment]
    if missing:
        raise MalformedResponse(f"missing players {missing}")
    explanation = obj.get("explanation", "")
    if not isinstance(explanation, str):
        raise MalformedResponse('"explanation" must be a string')
    return Proposal({p: assignment[p] for p in players}, explanation, confidence or None)


def parse_turn(obj: dict[str, Any], ctx: DebateContext, me: str) -> DebateTurn:
    role = _role(obj.get("role"), '"role"')
    others = [a for a in ctx.agents if a != me]
    sets = []
    for key in ("agree_with", "disagree_with"):
        names = obj.get(key, [])
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise MalformedResponse(f'"{key}" must be a list of agent names')
        bad = [n for n in names if n not in others]
        if bad:
            raise MalformedResponse(f'"{key}" may only name other agents, got {bad}')
        sets.append(tuple(dict.fromkeys(names)))
    if set(sets[0]) & set(sets[1]):
        raise MalformedResponse("an agent appears in both agree_with and disagree_with")
    reasons = []
    for key in ("agree_reasoning", "disagree_reasoning"):
        value = obj.get(key, "")
        if not isinstance(value, str):
            raise MalformedResponse(f'"{key}" must be a string')
        reasons.append(value)
    return DebateTurn(me, ctx.focus_player, role, sets[0], sets[1], reasons[0], reasons[1])


def parse_order(obj: dict[str, Any], players: Sequence[str]) -> list[str]:
    order = obj.get("order")
    if not isinstance(order, list) or sorted(map(str, order)) != sorted(players) or len(set(order)) != len(order):
        raise MalformedResponse('"order" must list every player exactly once')
    return list(order)


class RemoteAgent(Agent):
    """One model behind an endpoint, with its own message history for the game."""

    def __init__(self, spec: AgentSpec, client, game_seed: int = 0, repair_retries: int = 3):
        super().__init__(spec)
        self.client = client
        self.repair_retries = repair_retries
        self._seed = derive_seed(game_seed, spec.name)
        self.history: list[dict[str, str]] = []

    def _ask(self, prompt: str, parse: Callable[[dict[str, Any]], Any]):
        """Send ``prompt``; returns (parsed value or None, number of repair rounds)."""
        messages = self.history + [{"role": "user", "content": prompt}]
        reply = ""
        for attempt in range(self.repair_retries + 1):
            reply = self.client.complete(self.spec.model, messages)
            try:
                value = parse(extract_json(reply))
            except (MalformedResponse, ValueError) as exc:
                log.info("%s: malformed response (%s), attempt %d", self.name, exc, attempt + 1)
                messages = messages + [
                    {"role": "assistant", "content": reply},
                    {"role": "user", "content": REPAIR_MESSAGE.format(error=exc)},
                ]
                continue
            self.history += [{"role": "user", "content": prompt}, {"role": "assistant", "content": reply}]
            return value
        self.history += [{"role": "user", "content": prompt}, {"role": "assistant", "content": reply}]
        return None

    def propose(self, puzzle: Puzzle) -> Proposal:
        self.history = [{"role": "system", "content": prompts.initial_prompt(puzzle)}]
        prop = self._ask(prompts.game_info_message(puzzle), lambda o: parse_assignment(o, puzzle.players))
        if prop is not None:
            return prop
        rng = random.Random(derive_seed(self._seed, puzzle.id, "fallback"))
        return Proposal({p: rng.choice(ROLES) for p in puzzle.players}, "", None, fallback=True)

    def debate_turn(self, ctx: DebateContext) -> DebateTurn:
        turn = self._ask(prompts.debate_prompt(ctx, self.name), lambda o: parse_turn(o, ctx, self.name))
        if turn is not None:
            return turn
        own = ctx.positions[self.name].assignment[ctx.focus_player]
        return DebateTurn(self.name, ctx.focus_player, own, fallback=True)

    def self_adjust(self, ctx: DebateContext) -> Proposal:
        prop = self._ask(prompts.adjust_prompt(ctx, self.name), lambda o: parse_assignment(o, ctx.puzzle.players))
        if prop is not None:
            return prop
        prev = ctx.positions[self.name]
        return Proposal(prev.assignment, prev.explanation, prev.confidence, fallback=True)

    def final_decision(self, transcript: DebateTranscript, puzzle: Puzzle, confidence_visible: bool) -> Proposal:
        text = prompts.final_prompt(puzzle, transcript.agents, transcript.initial, transcript.rounds,
                                    confidence_visible)
        prop = self._ask(text, lambda o: parse_assignment(o, puzzle.players))
        if prop is not None:
            return prop
        last = transcript.rounds[-1].adjustments[self.name] if transcript.rounds else transcript.initial[self.name]
        return Proposal(last.assignment, last.explanation, last.confidence, fallback=True)

    def preferred_order(self, puzzle: Puzzle, proposals) -> Sequence[str] | None:
        return self._ask(prompts.order_prompt(puzzle, self.name), lambda o: parse_order(o, puzzle.players))

    def supervise(self, puzzle: Puzzle, transcript: DebateTranscript, tied: Sequence[str]) -> Proposal:
        self.history = []
        prop = self._ask(prompts.supervisor_prompt(puzzle, transcript), lambda o: parse_assignment(o, puzzle.players))
        if prop is None:
            raise SupervisorError(f"supervisor {self.name} gave no usable assignment for {puzzle.id}")
        return prop
