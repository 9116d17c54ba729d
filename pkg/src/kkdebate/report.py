"""CSV reports over a run directory's transcripts."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .experiment import load_transcripts, write_atomic
from .metrics import (
    FEATURES, METRIC_NAMES, START_STATES, TARGETS, TRANSITIONS, RankDeficientError, UndefinedMetric,
    agent_transition_counts, build_feature_table, correction_rates, fit_dropping_dependent, initial_majority,
    instance_metrics, significance_stars, transition_counts, transition_feature_table,
)
from .metrics.outcome import instance_strict
from .protocol import DebateTranscript

REPORT_DIR = "reports"
DEFAULT_RIDGE = 1.0


class EmptyReportError(UndefinedMetric):
    pass


def _fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        if np.isnan(v):
            return "nan"
        return f"{v:.10g}"
    return str(v)


def _csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _pct(x: float) -> float:
    return round(100.0 * x, 2)


def initial_vs_final(games: Sequence[DebateTranscript]) -> list[dict[str, Any]]:
    """Instance and agent level accuracy before and after debate, in percent, per game size."""
    by_size: dict[str, list[DebateTranscript]] = defaultdict(list)
    for tr in games:
        by_size[str(len(tr.players))].append(tr)
        by_size["all"].append(tr)
    columns = sorted((k for k in by_size if k != "all"), key=int) + ["all"]
    vals: dict[str, dict[str, float]] = {}
    for col in columns:
        trs = by_size[col]
        init_inst = [instance_strict(_resolve(initial_majority(t)), t.solution) for t in trs]
        final_inst = [instance_strict(t.final_decision, t.solution) for t in trs]
        init_agent = [instance_strict(t.initial[a].assignment, t.solution) for t in trs for a in t.agents]
        final_agent = [instance_strict(t.final_per_agent[a].assignment, t.solution) for t in trs for a in t.agents]
        vals[col] = {
            "initial_instance": _pct(np.mean(init_inst)),
            "final_instance": _pct(np.mean(final_inst)),
            "initial_agent": _pct(np.mean(init_agent)),
            "final_agent": _pct(np.mean(final_agent)),
        }
    rows = []
    for level in ("instance", "agent"):
        ini = {c: vals[c][f"initial_{level}"] for c in columns}
        fin = {c: vals[c][f"final_{level}"] for c in columns}
        rows.append({"metric": f"initial_{level}", **ini})
        rows.append({"metric": f"final_{level}", **fin})
        rows.append({"metric": f"improvement_{level}", **{c: round(fin[c] - ini[c], 2) for c in columns}})
    return rows


def _resolve(pred):
    """Tied players become a value that never equals a role, so they score as wrong."""
    return {p: (r if r is not None else "tie") for p, r in pred.items()}


def _group(records: Sequence[dict[str, Any]]) -> dict[str, list[DebateTranscript]]:
    cells: dict[str, list[DebateTranscript]] = defaultdict(list)
    for rec in records:
        cells[rec["cell"]].append(DebateTranscript.from_record(rec))
    for trs in cells.values():
        trs.sort(key=lambda t: t.puzzle_id)
    return dict(sorted(cells.items()))


def _regression_rows(X, y, names, lam: float, label: str, target: str) -> list[list[Any]]:
    if len(y) < 2:
        return [[label, target, "", lam, "", "", "", "", "", "skipped: fewer than two games"]]
    try:
        fit, dropped = fit_dropping_dependent(X, y, names, lam)
    except (RankDeficientError, np.linalg.LinAlgError, ValueError) as exc:
        return [[label, target, "", lam, "", "", "", "", "", f"failed: {exc}"]]
    pvals = fit.p_values()
    rows = [[label, target, "(intercept)", lam, fit.intercept, fit.intercept_se, "", "", fit.r_squared, ""]]
    for i, name in enumerate(fit.names):
        se = None if fit.standard_errors is None else float(fit.standard_errors[i])
        p = None if pvals is None else float(pvals[i])
        rows.append([label, target, name, lam, float(fit.coefficients[i]), se, p, significance_stars(p),
                     fit.r_squared, ""])
    for name in dropped:
        rows.append([label, target, name, lam, "", "", "", "", "", "dropped: linearly dependent or constant"])
    return rows


def write_report(output_dir: str | Path, ridge: float = DEFAULT_RIDGE) -> list[Path]:
    """Write every report CSV under ``<output_dir>/reports``; returns the paths written."""
    records = load_transcripts(output_dir)
    cells = _group(records)
    valid = {c: [t for t in trs if t.valid and t.solution is not None] for c, trs in cells.items()}
    valid = {c: trs for c, trs in valid.items() if trs}
    if not valid:
        raise EmptyReportError(f"no completed games under {output_dir}")
    outdir = Path(output_dir) / REPORT_DIR
    outdir.mkdir(parents=True, exist_ok=True)
    files: dict[str, str] = {}

    per_game = []
    for c, trs in cells.items():
        for t in trs:
            m = instance_metrics(t) if t.valid and t.solution is not None else {}
            per_game.append([c, t.puzzle_id, len(t.players), t.valid, t.fallback_count,
                             len(t.supervisor_invocations)] + [m.get(k) for k in METRIC_NAMES])
    files["metrics_per_game.csv"] = _csv(
        ["cell", "puzzle_id", "size", "valid", "fallbacks", "supervisor_invocations", *METRIC_NAMES], per_game)

    agg = []
    for c, trs in valid.items():
        ms = [instance_metrics(t) for t in trs]
        agg.append([c, len(trs), len(cells[c]) - len(trs)] + [float(np.mean([m[k] for m in ms])) for k in METRIC_NAMES])
    files["metrics_aggregate.csv"] = _csv(["cell", "n", "invalid", *METRIC_NAMES], agg)

    ivf = [(c, row) for c, trs in valid.items() for row in initial_vs_final(trs)]
    all_cols = sorted({k for _, r in ivf for k in r if k not in ("metric", "all")}, key=int) + ["all"]
    files["initial_vs_final.csv"] = _csv(
        ["cell", "metric", *(f"size_{k}" if k != "all" else "all" for k in all_cols)],
        [[c, r["metric"], *(r.get(k) for k in all_cols)] for c, r in ivf])

    trans_rows, rate_rows = [], []
    for c, trs in valid.items():
        counts = transition_counts(trs)
        trans_rows += [[c, "all", k, counts[k]] for k in TRANSITIONS]
        rates = correction_rates(counts)
        rate_rows += [[c, "all", s, counts[f"{s}->C"] + counts[f"{s}->W"], rates[s]] for s in START_STATES]
        for agent, ac in sorted(agent_transition_counts(trs).items()):
            trans_rows += [[c, agent, k, ac[k]] for k in TRANSITIONS]
            ar = correction_rates(ac)
            rate_rows += [[c, agent, s, ac[f"{s}->C"] + ac[f"{s}->W"], ar[s]] for s in START_STATES]
    files["transitions.csv"] = _csv(["cell", "agent", "transition", "count"], trans_rows)
    files["correction_rates.csv"] = _csv(["cell", "agent", "start_state", "occurrences", "correction_rate"], rate_rows)

    every = [t for trs in valid.values() for t in trs]
    header = ["scope", "target", "feature", "lambda", "coefficient", "std_error", "p_value", "stars",
              "r_squared", "note"]
    reg = []
    X, names, ys, _ = build_feature_table(every)
    for target in TARGETS:
        reg += _regression_rows(X, ys[target], names, 0.0, "all", target)
    files["regression_features.csv"] = _csv(header, reg)

    Xt, tnames, yt = transition_feature_table(every)
    files["transition_weights.csv"] = _csv(header, _regression_rows(Xt, yt, tnames, ridge, "all", "final_smooth"))

    written = []
    for name, text in files.items():
        path = outdir / name
        write_atomic(path, text)
        written.append(path)
    return written


__all__ = ["EmptyReportError", "FEATURES", "initial_vs_final", "write_report"]
