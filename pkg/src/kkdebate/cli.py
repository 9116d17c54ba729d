"""Command-line entry point: ``kkdebate generate|solve|run|analyze|report``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import solver
from .agents import ChatClient, EndpointError, OfflineError, judge_transcript
from .dsl import render_assignment
from .experiment import ConfigError, ExperimentConfig, _parse_sizes, load_transcripts, run_batch
from .generator import GenConfig, HintPolicy, build_dataset
from .metrics import METRIC_NAMES, UndefinedMetric, compute_report
from .protocol import DebateTranscript
from .records import read_puzzles, write_puzzles
from .report import REPORT_DIR, write_report


def cmd_generate(args) -> int:
    base = GenConfig(size=4, max_attempts=args.max_attempts, hint_policy=args.hint_policy)
    puzzles = build_dataset(_parse_sizes(args.sizes), args.per_size, args.seed, base=base, workers=args.workers)
    text = write_puzzles(args.out, puzzles)
    print(f"wrote {len(puzzles)} puzzles to {args.out} (game text in {text})")
    return 0


def cmd_solve(args) -> int:
    puzzles = read_puzzles(args.puzzles)
    bad = 0
    certified = []
    for p in puzzles:
        res = solver.solve(p, max_players=args.max_players, backend=args.backend)
        status = "unique" if res.unique else f"{len(res.solutions)} solutions"
        agrees = ""
        if p.solution is not None:
            ok = res.unique and res.solutions[0] == dict(p.solution)
            agrees = " matches-record" if ok else " MISMATCH"
            bad += not ok
        line = f"{p.id}\t{status}{agrees}\t{res.worlds_checked} worlds\t{res.elapsed * 1e3:.2f} ms"
        if res.unique and args.show:
            line += "\t" + render_assignment(res.solutions[0], p.players)
        print(line)
        if res.unique:
            certified.append(replace(p, solution=res.solutions[0]))
    if args.out:
        write_puzzles(args.out, certified)
        print(f"wrote {len(certified)} certified puzzles to {args.out}")
    return 1 if bad else 0


def _experiment(args) -> ExperimentConfig:
    overrides = {
        "output_dir": args.output_dir, "seed": args.seed, "puzzles_per_cell": args.puzzles_per_cell,
        "concurrency": args.concurrency, "dataset": args.dataset, "offline": True if args.offline else None,
    }
    if args.config:
        return ExperimentConfig.from_file(args.config, **overrides)
    return ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})


def cmd_run(args) -> int:
    cfg = _experiment(args)
    cells = cfg.cells()
    print(f"{len(cells)} cell(s): {', '.join(c.name for c in cells)}; output in {cfg.output_dir}")
    res = run_batch(cfg, max_games=args.max_games)
    print(f"completed {res.completed}, invalid {res.invalid}, failed {res.failed}, "
          f"already done {res.skipped}")
    return 1 if res.failed else 0


def cmd_analyze(args) -> int:
    records = load_transcripts(args.run_dir)
    cells: dict[str, list[DebateTranscript]] = {}
    for rec in records:
        cells.setdefault(rec["cell"], []).append(DebateTranscript.from_record(rec))
    if not cells:
        raise UndefinedMetric(f"no transcripts under {args.run_dir}")
    print("cell\tn\t" + "\t".join(METRIC_NAMES))
    for name in sorted(cells):
        rep = compute_report(cells[name])
        print(f"{name}\t{rep.n}\t" + "\t".join(f"{getattr(rep, k):.4f}" for k in METRIC_NAMES))
    if args.judge:
        if args.offline:
            raise OfflineError("--judge needs network access")
        puzzles = {p.id: p for p in read_puzzles(args.puzzles)} if args.puzzles else None
        if puzzles is None:
            raise ConfigError("--judge needs --puzzles to render the game text")
        client = ChatClient()
        rows = []
        for name in sorted(cells):
            for tr in sorted(cells[name], key=lambda t: t.puzzle_id):
                rows += [{"cell": name, **r} for r in judge_transcript(client, args.judge, puzzles[tr.puzzle_id], tr)]
        out = Path(args.run_dir) / REPORT_DIR / "judge_ratings.csv"
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="", encoding="utf-8") as f:
            w = csv.DictWriter(f, fieldnames=list(rows[0]) if rows else ["cell"], lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        print(f"wrote {len(rows)} ratings to {out}")
    return 0


def cmd_report(args) -> int:
    for path in write_report(args.run_dir, ridge=args.ridge):
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kkdebate", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a dataset of certified puzzles")
    g.add_argument("--sizes", default="4-9", help="player counts, e.g. 4-9 or 4,6,8 (default 4-9)")
    g.add_argument("--per-size", type=int, default=300)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, default=Path("puzzles.jsonl"))
    g.add_argument("--workers", type=int, default=1, help="processes, one size per process")
    g.add_argument("--max-attempts", type=int, default=5000)
    g.add_argument("--hint-policy", choices=[h.value for h in HintPolicy], default=HintPolicy.ONE_SPY.value)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="enumerate the solutions of every puzzle in a file")
    s.add_argument("puzzles", type=Path)
    s.add_argument("--backend", choices=solver.available_backends(), default=None)
    s.add_argument("--max-players", type=int, default=solver.DEFAULT_MAX_PLAYERS)
    s.add_argument("--out", type=Path, help="write the uniquely solvable puzzles with their solutions")
    s.add_argument("--show", action="store_true", help="print each unique solution")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("run", help="run an experiment grid (resumes an interrupted run)")
    r.add_argument("--config", type=Path, help="flat key = value file overriding the anchor setting")
    r.add_argument("--output-dir")
    r.add_argument("--dataset", help="puzzles file (generated into the output dir when absent)")
    r.add_argument("--seed", type=int)
    r.add_argument("--puzzles-per-cell", type=int)
    r.add_argument("--concurrency", type=int)
    r.add_argument("--max-games", type=int, help="stop after this many games (resume later)")
    r.add_argument("--offline", action="store_true", help="refuse any network use; scripted agents only")
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("analyze", help="print per-cell metrics; optionally rate reasoning with a judge")
    a.add_argument("run_dir", type=Path)
    a.add_argument("--judge", metavar="MODEL", help="judge model id for reasoning-soundness ratings")
    a.add_argument("--puzzles", type=Path, help="puzzles file (needed with --judge)")
    a.add_argument("--offline", action="store_true")
    a.set_defaults(func=cmd_analyze)

    p = sub.add_parser("report", help="write CSV reports for a run directory")
    p.add_argument("run_dir", type=Path)
    p.add_argument("--ridge", type=float, default=1.0, help="penalty for the transition-weight fit")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, OfflineError, EndpointError, UndefinedMetric, FileNotFoundError, ValueError) as exc:
        print(f"kkdebate: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
