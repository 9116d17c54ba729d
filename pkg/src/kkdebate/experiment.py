"""Experiment grid, batch execution with a resumable manifest."""

from __future__ import annotations

import configparser
import hashlib
import json
import logging
import math
import os
import random
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from .agents import AgentSpec, ChatClient, EndpointError, OfflineError, Tier
from .engine import ORDER_POLICIES, DebateConfig, run_debate
from .generator import DATASET_SIZES, build_dataset
from .records import JsonlSink, iter_jsonl, read_puzzles, write_puzzles
from .seeding import derive_seed
from .statements import Puzzle

log = logging.getLogger(__name__)

H, M, L = Tier.HIGH, Tier.MEDIUM, Tier.LOW

# Per slot: (performance tier, confidence tier); None means the confidence tier is unspecified.
COMPOSITIONS: dict[str, tuple[tuple[Tier, Tier | None], ...]] = {
    "het-mix-a": ((H, M), (M, M), (L, M)),
    "het-mix-b": ((H, L), (M, L), (L, M)),
    "het-mix-c": ((H, H), (M, L), (L, M)),
    "het-mix-d": ((H, H), (H, M), (H, L)),
    "hom-strong": ((H, None), (H, None), (H, None)),
    "hom-weak": ((L, None), (L, None), (L, None)),
}

# Offline stand-ins: performance sets the oracle noise, confidence the revision style.
PERF_NOISE = {H: 0.1, M: 0.3, L: 0.5}
FACTORS = ("team_size", "composition", "confidence_visible", "order_policy", "depth", "sizes")

TRANSCRIPTS = "transcripts.jsonl"
MANIFEST = "manifest.json"


class ConfigError(ValueError):
    pass


def scripted_profile(perf: Tier, conf: Tier | None) -> str:
    oracle = f"oracle:{PERF_NOISE[perf]:g}"
    if conf is H:
        return f"stubborn/{oracle}"
    if conf is L:
        return f"conformist/{oracle}"
    return oracle


def _parse_sizes(text: str) -> tuple[int, ...]:
    out: list[int] = []
    for part in text.replace(";", " ").replace(",", " ").split():
        lo, _, hi = part.partition("-")
        out.extend(range(int(lo), int(hi or lo) + 1))
    if not out:
        raise ConfigError("sizes must not be empty")
    return tuple(sorted(set(out)))


def _sizes_text(sizes: Sequence[int]) -> str:
    s = sorted(sizes)
    if s == list(range(s[0], s[-1] + 1)) and len(s) > 1:
        return f"{s[0]}-{s[-1]}"
    return ",".join(map(str, s))


def _parse_bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on", "visible"):
        return True
    if t in ("0", "false", "no", "off", "hidden"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _factor_value(factor: str, text: str):
    if factor in ("team_size", "depth"):
        return int(text)
    if factor == "confidence_visible":
        return _parse_bool(text)
    if factor == "sizes":
        return _parse_sizes(text)
    return text.strip()


@dataclass(frozen=True)
class Cell:
    name: str
    debate: DebateConfig
    sizes: tuple[int, ...]
    factor: str | None = None


@dataclass
class ExperimentConfig:
    """Anchor setting plus single-factor variations (``vary``)."""

    team_size: int = 3
    composition: str = "het-mix-a"
    confidence_visible: bool = False
    order_policy: str = "fixed"
    depth: int = 1
    sizes: tuple[int, ...] = DATASET_SIZES
    puzzles_per_cell: int = 100
    seed: int = 0
    output_dir: str = "runs/default"
    dataset: str | None = None
    backend: str = "scripted"
    models: dict[str, str] = field(default_factory=dict)
    supervisor: str = "scripted:oracle:0"
    api_base: str | None = None
    timeout: float | None = None
    temperature: float = 0.0
    retries: int = 4
    concurrency: int = 4
    offline: bool = False
    vary: dict[str, tuple] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.sizes = tuple(self.sizes)
        if self.backend not in ("scripted", "remote"):
            raise ConfigError("backend must be scripted or remote")
        for f in self.vary:
            if f not in FACTORS:
                raise ConfigError(f"cannot vary {f!r}; factors are {FACTORS}")
        self.vary = {f: tuple(v) for f, v in self.vary.items()}
        for cell in self._settings():
            self._validate(cell)

    def _validate(self, s: Mapping[str, Any]) -> None:
        if s["composition"] not in COMPOSITIONS:
            raise ConfigError(f"unknown composition {s['composition']!r}; known: {sorted(COMPOSITIONS)}")
        if s["team_size"] < 2:
            raise ConfigError("team_size must be at least 2")
        if s["depth"] < 1:
            raise ConfigError("depth must be at least 1")
        if s["order_policy"] not in ORDER_POLICIES:
            raise ConfigError(f"order_policy must be one of {ORDER_POLICIES}")
        if self.backend == "remote":
            for perf, _ in COMPOSITIONS[s["composition"]]:
                if perf.value not in self.models:
                    raise ConfigError(f"remote backend needs model.{perf.value}")

    def anchor(self) -> dict[str, Any]:
        return {f: getattr(self, f) for f in FACTORS}

    def _settings(self) -> list[dict[str, Any]]:
        out = [self.anchor()]
        for f in FACTORS:
            for v in self.vary.get(f, ()):
                if v != self.anchor()[f]:
                    out.append({**self.anchor(), f: v})
        return out

    def hash(self) -> str:
        rec = asdict(self)
        for k in ("output_dir", "concurrency", "offline", "api_base", "timeout"):
            rec.pop(k)
        return hashlib.sha256(json.dumps(rec, sort_keys=True, default=list).encode()).hexdigest()[:16]

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> ExperimentConfig:
        """Flat ``key = value`` file; ``vary.<factor>`` lists comma-separated alternatives,
        except ``vary.sizes`` whose alternatives are separated by ``|``."""
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
        parser.optionxform = str
        parser.read_string("[experiment]\n" + Path(path).read_text(encoding="utf-8"))
        return cls.from_mapping(dict(parser["experiment"]), **overrides)

    @classmethod
    def from_mapping(cls, items: Mapping[str, str], **overrides) -> ExperimentConfig:
        kwargs: dict[str, Any] = {}
        models: dict[str, str] = {}
        vary: dict[str, tuple] = {}
        for key, raw in items.items():
            raw = str(raw).strip()
            if key.startswith("model."):
                models[key[len("model."):]] = raw
            elif key.startswith("vary."):
                factor = key[len("vary."):]
                if factor not in FACTORS:
                    raise ConfigError(f"cannot vary {factor!r}")
                parts = raw.split("|") if factor == "sizes" else raw.split(",")
                vary[factor] = tuple(_factor_value(factor, p) for p in parts if p.strip())
            elif key in FACTORS:
                kwargs[key] = _factor_value(key, raw)
            elif key in ("puzzles_per_cell", "seed", "retries", "concurrency"):
                kwargs[key] = int(raw)
            elif key in ("timeout", "temperature"):
                kwargs[key] = float(raw)
            elif key == "offline":
                kwargs[key] = _parse_bool(raw)
            elif key in ("output_dir", "dataset", "backend", "supervisor", "api_base"):
                kwargs[key] = raw
            else:
                raise ConfigError(f"unknown config key {key!r}")
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(models=models, vary=vary, **kwargs)

    # -- teams ------------------------------------------------------------

    def team(self, composition: str, size: int) -> tuple[AgentSpec, ...]:
        slots = list(COMPOSITIONS[composition])
        strongest = max(slots, key=lambda s: (s[0] is H, s[0] is M))
        while len(slots) < size:
            slots.append(strongest)
        out = []
        for i, (perf, conf) in enumerate(slots[:size], start=1):
            if self.backend == "remote":
                out.append(AgentSpec(f"Agent{i}", "remote", self.models[perf.value], perf, conf))
            else:
                out.append(AgentSpec(f"Agent{i}", "scripted", scripted_profile(perf, conf), perf, conf))
        return tuple(out)

    def supervisor_spec(self) -> AgentSpec:
        kind, _, model = self.supervisor.partition(":")
        if kind not in ("scripted", "remote") or not model:
            raise ConfigError("supervisor must look like scripted:<profile> or remote:<model>")
        return AgentSpec("Supervisor", kind, model)

    def cells(self) -> list[Cell]:
        out = []
        for s in self._settings():
            changed = [f for f in FACTORS if s[f] != self.anchor()[f]]
            if changed:
                f = changed[0]
                v = _sizes_text(s[f]) if f == "sizes" else str(s[f]).lower()
                name = f"{f}={v}"
            else:
                name = "anchor"
            debate = DebateConfig(
                team=self.team(s["composition"], s["team_size"]),
                confidence_visible=s["confidence_visible"],
                order_policy=s["order_policy"],
                depth=s["depth"],
                supervisor=self.supervisor_spec(),
                seed=derive_seed(self.seed, name),
            )
            out.append(Cell(name, debate, tuple(s["sizes"]), changed[0] if changed else None))
        return out


def expand_grid(cfg: ExperimentConfig) -> list[Cell]:
    return cfg.cells()


def sample_puzzles(puzzles: Sequence[Puzzle], sizes: Sequence[int], count: int, seed: int) -> list[Puzzle]:
    """``count`` puzzles spread evenly over ``sizes``; the choice per size depends only on (seed, size)."""
    by_size: dict[int, list[Puzzle]] = {}
    for p in puzzles:
        by_size.setdefault(p.size, []).append(p)
    sizes = sorted(sizes)
    base, extra = divmod(count, len(sizes))
    out = []
    for i, n in enumerate(sizes):
        want = base + (i < extra)
        pool = sorted(by_size.get(n, []), key=lambda p: p.id)
        if len(pool) < want:
            raise ConfigError(f"dataset has {len(pool)} puzzles of size {n}, need {want}")
        order = list(range(len(pool)))
        random.Random(derive_seed(seed, "sample", n)).shuffle(order)
        out.extend(pool[j] for j in sorted(order[:want]))
    return out


def write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(f".{path.name}.{os.getpid()}.{threading.get_ident()}.tmp")
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(text)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


@dataclass
class RunManifest:
    config_hash: str
    cells: dict[str, list[str]]
    games: dict[str, dict[str, Any]] = field(default_factory=dict)

    @staticmethod
    def key(cell: str, puzzle_id: str) -> str:
        return f"{cell}/{puzzle_id}"

    def pending(self) -> list[tuple[str, str]]:
        return [(c, pid) for c, ids in self.cells.items() for pid in ids
                if self.games.get(self.key(c, pid), {}).get("status") not in ("done", "invalid")]

    @property
    def complete(self) -> bool:
        return not self.pending()

    def to_json(self) -> str:
        return json.dumps({"config_hash": self.config_hash, "cells": self.cells, "games": self.games},
                          indent=1, sort_keys=True) + "\n"

    @classmethod
    def load(cls, path: Path) -> RunManifest:
        rec = json.loads(path.read_text(encoding="utf-8"))
        return cls(rec["config_hash"], rec["cells"], rec["games"])


@dataclass
class BatchResult:
    completed: int = 0
    failed: int = 0
    invalid: int = 0
    skipped: int = 0
    manifest: RunManifest | None = None


def make_client(cfg: ExperimentConfig):
    return ChatClient(base_url=cfg.api_base, timeout=cfg.timeout, temperature=cfg.temperature,
                      max_retries=cfg.retries)


def load_dataset(cfg: ExperimentConfig) -> list[Puzzle]:
    out = Path(cfg.output_dir)
    path = Path(cfg.dataset) if cfg.dataset else out / "puzzles.jsonl"
    if path.exists():
        return read_puzzles(path)
    sizes = sorted({n for c in cfg.cells() for n in c.sizes})
    per_size = math.ceil(cfg.puzzles_per_cell / min(len(c.sizes) for c in cfg.cells()))
    log.info("no dataset at %s; generating %d puzzles per size", path, per_size)
    puzzles = build_dataset(sizes, per_size, cfg.seed)
    write_puzzles(path, puzzles)
    return puzzles


def run_batch(cfg: ExperimentConfig, client=None, max_games: int | None = None,
              runner: Callable[..., Any] = run_debate) -> BatchResult:
    """Run every pending game of the grid; safe to call again after an interruption."""
    cells = cfg.cells()
    if any(c.debate.uses_remote for c in cells):
        if cfg.offline:
            raise OfflineError("configuration uses remote agents but --offline was given")
        client = client or make_client(cfg)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    puzzles = load_dataset(cfg)
    by_id = {p.id: p for p in puzzles}
    chosen = {c.name: [p.id for p in sample_puzzles(puzzles, c.sizes, cfg.puzzles_per_cell, cfg.seed)]
              for c in cells}

    mpath = out / MANIFEST
    if mpath.exists():
        manifest = RunManifest.load(mpath)
        if manifest.config_hash != cfg.hash():
            raise ConfigError(f"{mpath} belongs to a different configuration; use a new output directory")
    else:
        manifest = RunManifest(cfg.hash(), chosen)
    tpath = out / TRANSCRIPTS
    sink = JsonlSink(tpath)
    recorded = {RunManifest.key(r["cell"], r["puzzle_id"]) for r in iter_jsonl(tpath)} if tpath.exists() else set()
    for key in recorded:
        manifest.games.setdefault(key, {"status": "done"})

    cell_by_name = {c.name: c for c in cells}
    todo = manifest.pending()
    result = BatchResult(skipped=sum(len(v) for v in manifest.cells.values()) - len(todo), manifest=manifest)
    if max_games is not None:
        todo = todo[:max_games]
    lock = threading.Lock()
    write_atomic(mpath, manifest.to_json())

    def play(item: tuple[str, str]) -> None:
        cell_name, pid = item
        key = RunManifest.key(cell_name, pid)
        try:
            tr = runner(by_id[pid], cell_by_name[cell_name].debate, client)
        except (EndpointError, OfflineError) as exc:
            log.error("game %s failed: %s", key, exc)
            status = {"status": "failed", "error": str(exc)}
        else:
            sink.append({"cell": cell_name, **tr.to_record()})
            status = {"status": "done" if tr.valid else "invalid"}
            if tr.error:
                status["error"] = tr.error
        with lock:
            manifest.games[key] = status
            field_ = {"done": "completed", "invalid": "invalid", "failed": "failed"}[status["status"]]
            setattr(result, field_, getattr(result, field_) + 1)
            write_atomic(mpath, manifest.to_json())

    if cfg.concurrency <= 1:
        for item in todo:
            play(item)
    else:
        with ThreadPoolExecutor(max_workers=cfg.concurrency) as pool:
            list(pool.map(play, todo))
    return result


def load_transcripts(output_dir: str | Path) -> list[dict[str, Any]]:
    path = Path(output_dir) / TRANSCRIPTS
    if not path.exists():
        return []
    return list(iter_jsonl(path))
