"""Accuracy and agreement metrics over final answers and per-round snapshots.

Round t's prediction for a player is the label held by a strict majority of
agents after round t's self-adjustment.  A player with no strict majority
counts as wrong.  Round 0 (the initial proposals) is not part of the AUC
averages.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from ..protocol import DebateTranscript
from ..statements import Role

Assignment = Mapping[str, Role]


class UndefinedMetric(ValueError):
    """The metric has no value for this input (no instances or no rounds)."""


def _check_pair(pred: Assignment, truth: Assignment) -> None:
    if set(pred) != set(truth):
        raise ValueError("prediction and ground truth cover different players")


def instance_strict(pred: Assignment, truth: Assignment) -> float:
    _check_pair(pred, truth)
    return float(all(pred[p] == truth[p] for p in truth))


def instance_smooth(pred: Assignment, truth: Assignment) -> float:
    _check_pair(pred, truth)
    return sum(pred[p] == truth[p] for p in truth) / len(truth)


def strict_accuracy(finals: Iterable[tuple[Assignment, Assignment]]) -> float:
    vals = [instance_strict(p, t) for p, t in finals]
    if not vals:
        raise UndefinedMetric("strict accuracy of an empty instance set")
    return sum(vals) / len(vals)


def smooth_accuracy(finals: Iterable[tuple[Assignment, Assignment]]) -> float:
    vals = [instance_smooth(p, t) for p, t in finals]
    if not vals:
        raise UndefinedMetric("smooth accuracy of an empty instance set")
    return sum(vals) / len(vals)


def strict_majority(labels: Sequence[Role]) -> Role | None:
    role, count = Counter(labels).most_common(1)[0]
    return role if 2 * count > len(labels) else None


def majority_prediction(snapshot: Mapping[str, Assignment], players: Sequence[str]) -> dict[str, Role | None]:
    return {p: strict_majority([snapshot[a][p] for a in snapshot]) for p in players}


def _rounds(tr: DebateTranscript) -> list[dict[str, dict[str, Role]]]:
    snaps = tr.snapshots()[1:]
    if not snaps:
        raise UndefinedMetric(f"{tr.puzzle_id}: transcript has no rounds")
    return snaps


def _truth(tr: DebateTranscript) -> Assignment:
    if tr.solution is None:
        raise UndefinedMetric(f"{tr.puzzle_id}: transcript has no ground truth")
    return tr.solution


def auc_strict(tr: DebateTranscript) -> float:
    truth, snaps = _truth(tr), _rounds(tr)
    total = 0.0
    for snap in snaps:
        pred = majority_prediction(snap, tr.players)
        total += all(pred[p] == truth[p] for p in tr.players)
    return total / len(snaps)


def auc_smooth(tr: DebateTranscript) -> float:
    truth, snaps = _truth(tr), _rounds(tr)
    total = 0.0
    for snap in snaps:
        pred = majority_prediction(snap, tr.players)
        total += sum(pred[p] == truth[p] for p in tr.players) / len(tr.players)
    return total / len(snaps)


def _agreement(tr: DebateTranscript, threshold: int) -> float:
    snaps = _rounds(tr)
    total = 0.0
    for snap in snaps:
        hits = 0
        for p in tr.players:
            top = Counter(snap[a][p] for a in tr.agents).most_common(1)[0][1]
            hits += top >= threshold
        total += hits / len(tr.players)
    return total / len(snaps)


def auc_agree_all(tr: DebateTranscript) -> float:
    return _agreement(tr, len(tr.agents))


def auc_agree_major(tr: DebateTranscript) -> float:
    return _agreement(tr, math.ceil(len(tr.agents) / 2))


def initial_majority(tr: DebateTranscript) -> dict[str, Role | None]:
    return majority_prediction({a: tr.initial[a].assignment for a in tr.agents}, tr.players)


METRIC_NAMES = ("strict_accuracy", "smooth_accuracy", "auc_strict", "auc_smooth", "auc_agree_all", "auc_agree_major")


def instance_metrics(tr: DebateTranscript) -> dict[str, float]:
    truth = _truth(tr)
    return {
        "strict_accuracy": instance_strict(tr.final_decision, truth),
        "smooth_accuracy": instance_smooth(tr.final_decision, truth),
        "auc_strict": auc_strict(tr),
        "auc_smooth": auc_smooth(tr),
        "auc_agree_all": auc_agree_all(tr),
        "auc_agree_major": auc_agree_major(tr),
    }


@dataclass
class MetricsReport:
    strict_accuracy: float
    smooth_accuracy: float
    auc_strict: float
    auc_smooth: float
    auc_agree_all: float
    auc_agree_major: float
    n: int
    per_instance: list[dict[str, Any]] = field(default_factory=list)

    def as_row(self) -> dict[str, Any]:
        return {"n": self.n, **{k: getattr(self, k) for k in METRIC_NAMES}}


def compute_report(transcripts: Iterable[DebateTranscript]) -> MetricsReport:
    """Dataset-level metrics: the mean of each per-instance value over valid games."""
    rows = [{"puzzle_id": tr.puzzle_id, **instance_metrics(tr)} for tr in transcripts if tr.valid]
    if not rows:
        raise UndefinedMetric("no valid games to summarize")
    means = {k: sum(r[k] for r in rows) / len(rows) for k in METRIC_NAMES}
    return MetricsReport(**means, n=len(rows), per_instance=rows)
