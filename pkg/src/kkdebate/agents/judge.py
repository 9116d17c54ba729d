"""Soundness rating of agree/disagree reasoning by a judge model."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Sequence

from ..protocol import DebateTranscript, DebateTurn, Proposal
from ..statements import Puzzle
from . import prompts
from .remote import REPAIR_MESSAGE, MalformedResponse, extract_json

log = logging.getLogger(__name__)

RATING_KEYS = ("agree_reasoning_soundness", "disagree_reasoning_soundness")


@dataclass(frozen=True)
class Rating:
    """Ratings 0-4; ``None`` marks a rating the judge never produced in usable form."""

    agree: int | None
    disagree: int | None
    called: bool = True

    @property
    def missing(self) -> bool:
        return self.agree is None or self.disagree is None


def parse_rating(obj: dict[str, Any]) -> tuple[int, int]:
    out = []
    for key in RATING_KEYS:
        v = obj.get(key)
        if isinstance(v, bool) or not isinstance(v, int):
            raise MalformedResponse(f'"{key}" must be an integer')
        if not 0 <= v <= 4:
            raise MalformedResponse(f'"{key}" must be between 0 and 4, got {v}')
        out.append(v)
    return out[0], out[1]


def judge_rationality(client, model: str, puzzle: Puzzle, agents: Sequence[str],
                      initial: dict[str, Proposal], turn: DebateTurn, repair_retries: int = 3) -> Rating:
    if not turn.agree_with and not turn.disagree_with:
        return Rating(0, 0, called=False)
    if puzzle.solution is None:
        raise ValueError("the judge needs the puzzle's solution")
    messages = [
        {"role": "system", "content": prompts.judge_prompt(puzzle, len(agents), turn.focus_player, turn.agent)},
        {"role": "user", "content": prompts.judge_input(agents, initial, turn)},
    ]
    for attempt in range(repair_retries + 1):
        reply = client.complete(model, messages)
        try:
            agree, disagree = parse_rating(extract_json(reply))
        except MalformedResponse as exc:
            log.info("judge: malformed rating (%s), attempt %d", exc, attempt + 1)
            messages = messages + [
                {"role": "assistant", "content": reply},
                {"role": "user", "content": REPAIR_MESSAGE.format(error=exc)},
            ]
            continue
        return Rating(agree, disagree)
    return Rating(None, None)


def judge_transcript(client, model: str, puzzle: Puzzle, transcript: DebateTranscript) -> list[dict[str, Any]]:
    """One rating row per debate turn."""
    rows = []
    for rnd in transcript.rounds:
        for turn in rnd.turns:
            r = judge_rationality(client, model, puzzle, transcript.agents, transcript.initial, turn)
            rows.append({
                "puzzle_id": puzzle.id,
                "round": rnd.index,
                "focus_player": rnd.focus_player,
                "agent": turn.agent,
                "agree_soundness": r.agree,
                "disagree_soundness": r.disagree,
                "judge_called": r.called,
            })
    return rows
