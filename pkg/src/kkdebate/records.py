"""Line-delimited JSON persistence for puzzles (and shared JSONL helpers)."""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Any, Iterable, Iterator

from .dsl import parse, render_game_text, to_text
from .statements import Puzzle, Role

PUZZLE_FIELDS = ("id", "size", "players", "statements", "hints", "solution")


def puzzle_to_record(puzzle: Puzzle) -> dict[str, Any]:
    return {
        "id": puzzle.id,
        "size": puzzle.size,
        "players": list(puzzle.players),
        "statements": {p: to_text(puzzle.statements[p]) for p in puzzle.players},
        "hints": [to_text(h) for h in puzzle.hints],
        "solution": None if puzzle.solution is None else {p: Role(puzzle.solution[p]).value for p in puzzle.players},
    }


def puzzle_from_record(rec: dict[str, Any]) -> Puzzle:
    if set(rec) != set(PUZZLE_FIELDS):
        raise ValueError(f"puzzle record fields must be exactly {PUZZLE_FIELDS}, got {sorted(rec)}")
    players = tuple(rec["players"])
    if rec["size"] != len(players):
        raise ValueError(f"{rec['id']}: size {rec['size']} does not match {len(players)} players")
    solution = rec["solution"]
    return Puzzle(
        id=rec["id"],
        players=players,
        statements={p: parse(rec["statements"][p], players) for p in players},
        hints=tuple(parse(h, players) for h in rec["hints"]),
        solution=None if solution is None else {p: Role(solution[p]) for p in players},
    )


def dumps(rec: Any) -> str:
    return json.dumps(rec, ensure_ascii=False, separators=(",", ":"))


def write_puzzles(path: str | Path, puzzles: Iterable[Puzzle]) -> Path:
    """Write puzzle records and a ``.txt`` game-info rendering next to them."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    puzzles = list(puzzles)
    with open(path, "w", encoding="utf-8") as f:
        for p in puzzles:
            f.write(dumps(puzzle_to_record(p)) + "\n")
    text_path = path.with_suffix(".txt")
    with open(text_path, "w", encoding="utf-8") as f:
        f.write("\n\n".join(f"# {p.id}\n{render_game_text(p)}" for p in puzzles) + "\n")
    return text_path


def iter_jsonl(path: str | Path) -> Iterator[dict[str, Any]]:
    """Yield records, skipping blank lines and a torn (unterminated) final line."""
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.endswith("\n"):
                break
            if line.strip():
                yield json.loads(line)


def read_puzzles(path: str | Path) -> list[Puzzle]:
    return [puzzle_from_record(r) for r in iter_jsonl(path)]


class JsonlSink:
    """Append-only JSONL file; each record is written and flushed whole under a lock."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._repair_tail()

    def _repair_tail(self) -> None:
        if not self.path.exists():
            return
        data = self.path.read_bytes()
        if data and not data.endswith(b"\n"):
            cut = data.rfind(b"\n") + 1
            with open(self.path, "r+b") as f:
                f.truncate(cut)

    def append(self, rec: Any) -> None:
        line = dumps(rec) + "\n"
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(line)
                f.flush()
                os.fsync(f.fileno())
