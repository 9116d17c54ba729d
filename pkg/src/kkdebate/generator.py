"""Seeded puzzle generation with certified unique solutions.

Each attempt plants a world (roles plus spy truth bits), draws one statement
per player from the weighted templates, keeping only draws whose truth value
matches the speaker's bit, attaches a hint, and accepts the puzzle iff the
solver finds exactly one role assignment.  The planted world is consistent by
construction, so an accepted puzzle's unique solution is the planted roles.
"""

from __future__ import annotations

import enum
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

from . import solver
from .dsl import to_text
from .seeding import derive_seed
from .statements import (
    ROLES,
    CountLiars,
    CountRole,
    Exactly,
    ExactlyOneOf,
    Parity,
    Polarity,
    Puzzle,
    Role,
    RoleClaim,
    SameRole,
    Statement,
    TruthClaim,
    World,
    evaluate,
)

NAME_POOL = (
    "Alice", "Bella", "Chris", "David", "Emma", "Frank", "Grace", "Henry", "Iris",
    "Jack", "Kate", "Liam", "Mia", "Noah", "Olivia", "Peter", "Quinn", "Rachel",
    "Sam", "Tom", "Uma", "Violet", "Will", "Xavier", "Yara", "Zoe",
)

TEMPLATES = ("role_claim", "truth_claim", "same_role", "count_role", "count_liars", "exactly_one_of")
DATASET_SIZES = (4, 5, 6, 7, 8, 9)
_STATEMENT_TRIES = 200


class HintPolicy(str, enum.Enum):
    ONE_SPY = "always-one-spy-count"
    RANDOM = "random-hint"
    NONE = "none"


ONE_SPY_HINT = CountRole(None, Role.SPY, Exactly(1))


class GenerationError(RuntimeError):
    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} after {attempts} attempts")
        self.attempts = attempts


@dataclass(frozen=True)
class GenConfig:
    size: int
    seed: int = 0
    max_attempts: int = 5000
    template_weights: Mapping[str, float] = field(default_factory=lambda: dict.fromkeys(TEMPLATES, 1.0))
    hint_policy: HintPolicy = HintPolicy.ONE_SPY

    def __post_init__(self) -> None:
        if not 1 <= self.size <= len(NAME_POOL):
            raise ValueError(f"size must be in [1, {len(NAME_POOL)}], got {self.size}")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        unknown = set(self.template_weights) - set(TEMPLATES)
        if unknown:
            raise ValueError(f"unknown templates: {sorted(unknown)}")
        weights = list(self.template_weights.values())
        if any(w < 0 for w in weights) or not any(w > 0 for w in weights):
            raise ValueError("template weights must be nonnegative and not all zero")
        object.__setattr__(self, "hint_policy", HintPolicy(self.hint_policy))


def _predicate(rng: random.Random, scope_size: int):
    if rng.random() < 0.5:
        return rng.choice((Parity.EVEN, Parity.ODD))
    return Exactly(rng.randint(0, min(scope_size, 3)))


def _atomic(template: str, speaker: str | None, players: Sequence[str], rng: random.Random) -> Statement | None:
    others = [p for p in players if p != speaker]
    n = len(players)
    if template == "role_claim":
        return RoleClaim(rng.choice(players), rng.choice(ROLES))
    if template == "truth_claim":
        if not others:
            return None
        return TruthClaim(rng.choice(others), rng.choice((Polarity.TRUTHFUL, Polarity.LYING)))
    if template == "same_role":
        if speaker is None:
            if n < 2:
                return None
            a, b = sorted(rng.sample(range(n), 2))
            return SameRole(players[a], players[b])
        if not others:
            return None
        return SameRole(speaker, rng.choice(others))
    if template == "count_role":
        if n < 3 or rng.random() < 0.5:
            return CountRole(None, rng.choice(ROLES), _predicate(rng, n))
        scope = tuple(rng.sample(list(players), rng.randint(2, n - 1)))
        return CountRole(scope, rng.choice(ROLES), _predicate(rng, len(scope)))
    if template == "count_liars":
        if n < 2:
            return None
        scope = tuple(rng.sample(list(players), rng.randint(2, n)))
        return CountLiars(scope, _predicate(rng, len(scope)))
    raise ValueError(template)


def sample_statement(
    weights: Mapping[str, float], speaker: str | None, players: Sequence[str], rng: random.Random
) -> Statement | None:
    names = [t for t in TEMPLATES if weights.get(t, 0) > 0]
    template = rng.choices(names, [weights[t] for t in names])[0]
    if template != "exactly_one_of":
        return _atomic(template, speaker, players, rng)
    atomic = [t for t in TEMPLATES[:-1] if weights.get(t, 0) > 0] or list(TEMPLATES[:-1])
    aw = [weights.get(t, 0) or 1.0 for t in atomic]
    parts = []
    while len(parts) < 2:
        part = _atomic(rng.choices(atomic, aw)[0], speaker, players, rng)
        if part is None:
            return None
        if parts and part == parts[0]:
            continue
        parts.append(part)
    return ExactlyOneOf((parts[0], parts[1]))


def _plant_world(players: Sequence[str], policy: HintPolicy, rng: random.Random) -> World:
    if policy is HintPolicy.ONE_SPY:
        spy = rng.randrange(len(players))
        roles = {p: (Role.SPY if i == spy else rng.choice((Role.KNIGHT, Role.KNAVE))) for i, p in enumerate(players)}
    else:
        roles = {p: rng.choice(ROLES) for p in players}
    bits = {p: rng.random() < 0.5 for p in players}
    return World.from_roles(roles, bits)


def _matching_statement(cfg: GenConfig, speaker: str | None, want: bool, players, world, rng) -> Statement | None:
    for _ in range(_STATEMENT_TRIES):
        stmt = sample_statement(cfg.template_weights, speaker, players, rng)
        if stmt is None:
            continue
        if speaker is not None and isinstance(stmt, TruthClaim) and stmt.subject == speaker:
            continue
        if evaluate(stmt, world) == want:
            return stmt
    return None


def generate_one(cfg: GenConfig, puzzle_id: str | None = None) -> Puzzle:
    """Draw puzzles until one has a unique solution; deterministic in ``cfg.seed``."""
    rng = random.Random(cfg.seed)
    pid = puzzle_id or f"size{cfg.size}-seed{cfg.seed}"
    for attempt in range(1, cfg.max_attempts + 1):
        players = tuple(rng.sample(NAME_POOL, cfg.size))
        world = _plant_world(players, cfg.hint_policy, rng)
        statements = {}
        for p in players:
            stmt = _matching_statement(cfg, p, world.truth[p], players, world, rng)
            if stmt is None:
                break
            statements[p] = stmt
        else:
            hints: tuple[Statement, ...] = ()
            if cfg.hint_policy is HintPolicy.ONE_SPY:
                hints = (ONE_SPY_HINT,)
            elif cfg.hint_policy is HintPolicy.RANDOM:
                hint = _matching_statement(cfg, None, True, players, world, rng)
                if hint is None:
                    continue
                hints = (hint,)
            candidate = Puzzle(pid, players, statements, hints)
            if solver.has_unique_solution(candidate):
                return replace(candidate, solution=dict(world.roles))
    raise GenerationError(f"no uniquely solvable size-{cfg.size} puzzle", cfg.max_attempts)


def statement_key(puzzle: Puzzle) -> tuple[str, ...]:
    """Distinctness key: the multiset of canonical statement texts."""
    return tuple(sorted(to_text(s) for s in puzzle.statements.values()))


def _build_size(size: int, per_size: int, seed: int, base: GenConfig | None,
                generate: Callable[[GenConfig, str], Puzzle]) -> list[Puzzle]:
    seen: set[tuple[str, ...]] = set()
    out = []
    for k in range(1, per_size + 1):
        retry = 0
        while True:
            pseed = derive_seed(seed, "dataset", size, k, retry)
            cfg = replace(base, size=size, seed=pseed) if base else GenConfig(size=size, seed=pseed)
            puzzle = generate(cfg, f"size{size}-{k}")
            key = statement_key(puzzle)
            if key not in seen:
                break
            retry += 1
        seen.add(key)
        out.append(puzzle)
    return out


def build_dataset(
    sizes: Sequence[int],
    per_size: int,
    seed: int,
    *,
    base: GenConfig | None = None,
    workers: int = 1,
) -> list[Puzzle]:
    """``per_size`` distinct certified puzzles for each size, ids ``size{n}-{k}``."""
    if not sizes:
        raise ValueError("sizes must be nonempty")
    if per_size < 1:
        raise ValueError("per_size must be >= 1")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_build_size, s, per_size, seed, base, generate_one) for s in sizes]
            chunks = [f.result() for f in futures]
    else:
        chunks = [_build_size(s, per_size, seed, base, generate_one) for s in sizes]
    return [p for chunk in chunks for p in chunk]
