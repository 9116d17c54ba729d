"""Where an agent stands before each round and whether it ends the round right.

Start states combine the agent's standing with its own correctness:
Ma (it holds the clear-majority label), Mi (a clear majority exists and it is
not in it) or C (no label reaches a clear majority), followed by C or W.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Mapping

from ..protocol import DebateTranscript
from ..statements import Role

START_STATES = ("MaC", "MaW", "MiC", "MiW", "CC", "CW")
END_STATES = ("C", "W")
TRANSITIONS = tuple(f"{s}->{e}" for s in START_STATES for e in END_STATES)


def clear_majority(num_agents: int) -> int:
    """Smallest count that is a clear majority: ceil((A + 1) / 2)."""
    return num_agents // 2 + 1


def is_chaos(labels: Iterable[Role]) -> bool:
    labels = list(labels)
    return max(Counter(labels).values()) < clear_majority(len(labels))


def classify_position(agent: str, labels: Mapping[str, Role], truth: Role) -> str:
    if agent not in labels:
        raise KeyError(f"{agent} has no label")
    counts = Counter(labels.values())
    need = clear_majority(len(labels))
    suffix = "C" if labels[agent] == truth else "W"
    if max(counts.values()) < need:
        return "C" + suffix
    return ("Ma" if counts[labels[agent]] >= need else "Mi") + suffix


def transition_events(tr: DebateTranscript) -> list[tuple[str, int, str, str]]:
    """(agent, round, start, end) for every agent in every round."""
    if tr.solution is None:
        raise ValueError(f"{tr.puzzle_id}: transitions need the ground truth")
    snaps = tr.snapshots()
    out = []
    for t, rnd in enumerate(tr.rounds, start=1):
        focus = rnd.focus_player
        truth = tr.solution[focus]
        before = {a: snaps[t - 1][a][focus] for a in tr.agents}
        for a in tr.agents:
            start = classify_position(a, before, truth)
            end = "C" if snaps[t][a][focus] == truth else "W"
            out.append((a, rnd.index, start, end))
    return out


def transition_counts(transcripts: Iterable[DebateTranscript]) -> dict[str, int]:
    counts = dict.fromkeys(TRANSITIONS, 0)
    for tr in transcripts:
        for _, _, start, end in transition_events(tr):
            counts[f"{start}->{end}"] += 1
    return counts


def correction_rates(counts: Mapping[str, int]) -> dict[str, float | None]:
    """Fraction of each start state's occurrences ending correct; ``None`` if it never occurred."""
    out = {}
    for s in START_STATES:
        c, w = counts[f"{s}->C"], counts[f"{s}->W"]
        out[s] = c / (c + w) if c + w else None
    return out


def agent_transition_counts(transcripts: Iterable[DebateTranscript]) -> dict[str, dict[str, int]]:
    per: dict[str, dict[str, int]] = {}
    for tr in transcripts:
        for agent, _, start, end in transition_events(tr):
            per.setdefault(agent, dict.fromkeys(TRANSITIONS, 0))[f"{start}->{end}"] += 1
    return per
