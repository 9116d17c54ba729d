"""Per-game feature tables for the regression analyses.

Tier features use the performance tiers declared on the team's agent specs.
"Strong" agents are those in the best declared tier of the team, "weak" those
in the worst; agents without a declared tier are left out, and when nobody
declares one the whole team counts as both.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ..agents import TIER_RANK, AgentSpec
from ..protocol import DebateTranscript
from .outcome import auc_agree_major, instance_smooth, instance_strict
from .states import TRANSITIONS, classify_position, is_chaos, transition_events

FEATURES = (
    "game_size", "num_agents", "depth",
    "init_smooth", "init_strict",
    "strong_init_smooth", "strong_init_strict", "weak_init_smooth", "weak_init_strict",
    "strong_in_minority", "weak_in_minority",
    "conf_visible", "order_agreed", "init_chaos",
)
TARGETS = ("final_smooth", "auc_agree_major")


def tier_groups(tr: DebateTranscript) -> tuple[list[str], list[str]]:
    specs = [AgentSpec.from_record(s) for s in tr.config.get("team", [])]
    ranked = {s.name: TIER_RANK[s.perf_tier] for s in specs if s.perf_tier is not None}
    if not ranked:
        return list(tr.agents), list(tr.agents)
    hi, lo = max(ranked.values()), min(ranked.values())
    return [a for a in tr.agents if ranked.get(a) == hi], [a for a in tr.agents if ranked.get(a) == lo]


def initial_chaos(tr: DebateTranscript) -> bool:
    return any(is_chaos(tr.initial[a].assignment[p] for a in tr.agents) for p in tr.players)


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def feature_row(tr: DebateTranscript) -> dict[str, float]:
    truth = tr.solution
    init = {a: tr.initial[a].assignment for a in tr.agents}
    smooth = {a: instance_smooth(init[a], truth) for a in tr.agents}
    strict = {a: instance_strict(init[a], truth) for a in tr.agents}
    strong, weak = tier_groups(tr)

    def minority(group: Sequence[str]) -> int:
        n = 0
        for p in tr.players:
            labels = {a: init[a][p] for a in tr.agents}
            n += sum(classify_position(a, labels, truth[p]).startswith("Mi") for a in group)
        return n

    cfg = tr.config
    return {
        "game_size": len(tr.players),
        "num_agents": len(tr.agents),
        "depth": cfg.get("depth", 1),
        "init_smooth": _mean(list(smooth.values())),
        "init_strict": _mean(list(strict.values())),
        "strong_init_smooth": _mean([smooth[a] for a in strong]),
        "strong_init_strict": _mean([strict[a] for a in strong]),
        "weak_init_smooth": _mean([smooth[a] for a in weak]),
        "weak_init_strict": _mean([strict[a] for a in weak]),
        "strong_in_minority": minority(strong),
        "weak_in_minority": minority(weak),
        "conf_visible": float(bool(cfg.get("confidence_visible", False))),
        "order_agreed": float(cfg.get("order_policy", "fixed") == "agreed"),
        "init_chaos": float(initial_chaos(tr)),
    }


def target_row(tr: DebateTranscript) -> dict[str, float]:
    return {
        "final_smooth": instance_smooth(tr.final_decision, tr.solution),
        "auc_agree_major": auc_agree_major(tr),
    }


def build_feature_table(transcripts: Iterable[DebateTranscript]):
    """(X, feature names, {target: y}, puzzle ids) with one row per valid game."""
    rows, targets, ids = [], [], []
    for tr in transcripts:
        if not tr.valid or tr.solution is None:
            continue
        rows.append([float(v) for v in feature_row(tr).values()])
        targets.append(target_row(tr))
        ids.append(tr.puzzle_id)
    X = np.array(rows, dtype=float).reshape(len(rows), len(FEATURES))
    y = {t: np.array([r[t] for r in targets], dtype=float) for t in TARGETS}
    return X, list(FEATURES), y, ids


def transition_feature_table(transcripts: Iterable[DebateTranscript]):
    """Per-game counts of the 12 transitions against final smooth accuracy."""
    rows, y = [], []
    for tr in transcripts:
        if not tr.valid or tr.solution is None:
            continue
        counts = dict.fromkeys(TRANSITIONS, 0)
        for _, _, start, end in transition_events(tr):
            counts[f"{start}->{end}"] += 1
        rows.append([counts[k] for k in TRANSITIONS])
        y.append(instance_smooth(tr.final_decision, tr.solution))
    return np.array(rows, dtype=float).reshape(len(rows), len(TRANSITIONS)), list(TRANSITIONS), np.array(y)
