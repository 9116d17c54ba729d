from collections import Counter

import pytest

from kkdebate import generator, solver
from kkdebate.generator import GenConfig, GenerationError, HintPolicy, build_dataset, generate_one, statement_key
from kkdebate.records import puzzle_from_record, puzzle_to_record
from kkdebate.statements import Role, World, is_consistent

from oracles import naive_solutions


def test_generated_puzzle_is_certified():
    for size in (3, 4, 5):
        p = generate_one(GenConfig(size=size, seed=size))
        assert p.size == size
        sols = naive_solutions(p)
        assert sols == {tuple(p.solution[q] for q in p.players)}


def test_generation_is_deterministic():
    a = generate_one(GenConfig(size=5, seed=42))
    b = generate_one(GenConfig(size=5, seed=42))
    assert puzzle_to_record(a) == puzzle_to_record(b)
    c = generate_one(GenConfig(size=5, seed=43))
    assert puzzle_to_record(a) != puzzle_to_record(c)


def test_one_spy_hint_policy():
    p = generate_one(GenConfig(size=6, seed=9))
    assert sum(r is Role.SPY for r in p.solution.values()) == 1
    assert len(p.hints) == 1


def test_other_hint_policies():
    for policy in (HintPolicy.RANDOM, HintPolicy.NONE):
        p = generate_one(GenConfig(size=4, seed=5, hint_policy=policy))
        assert solver.has_unique_solution(p)
        assert len(p.hints) == (1 if policy is HintPolicy.RANDOM else 0)


def test_no_player_calls_itself_truthful_or_lying():
    for p in build_dataset([4, 6], 5, seed=2):
        for name, stmt in p.statements.items():
            assert not (type(stmt).__name__ == "TruthClaim" and stmt.subject == name)


def test_template_weights_restrict_forms():
    cfg = GenConfig(size=4, seed=1, template_weights={"count_role": 1.0, "role_claim": 1.0})
    p = generate_one(cfg)
    assert {type(s).__name__ for s in p.statements.values()} <= {"CountRole", "RoleClaim"}


def test_bad_config_rejected():
    with pytest.raises(ValueError):
        GenConfig(size=0)
    with pytest.raises(ValueError):
        GenConfig(size=4, template_weights={"nope": 1.0})
    with pytest.raises(ValueError):
        GenConfig(size=4, template_weights={"role_claim": 0.0})


def test_attempt_budget_error():
    cfg = GenConfig(size=9, seed=0, max_attempts=1, template_weights={"role_claim": 1.0})
    with pytest.raises(GenerationError) as err:
        generate_one(cfg)
    assert err.value.attempts == 1


def test_dataset_ids_and_distinctness():
    ds = build_dataset([4, 5], 6, seed=3)
    assert [p.id for p in ds] == [f"size{n}-{k}" for n in (4, 5) for k in range(1, 7)]
    keys = [statement_key(p) for p in ds]
    assert len(set(keys)) == len(keys)


def test_duplicates_are_redrawn(monkeypatch):
    real = generator.generate_one
    calls = Counter()

    def flaky(cfg, pid):
        calls[pid] += 1
        # the second puzzle's first draw repeats the first puzzle exactly
        if pid == "size4-2" and calls[pid] == 1:
            return real(GenConfig(size=4, seed=generator.derive_seed(7, "dataset", 4, 1, 0)), pid)
        return real(cfg, pid)

    monkeypatch.setattr(generator, "generate_one", flaky)
    ds = build_dataset([4], 3, seed=7)
    assert calls["size4-2"] == 2
    assert len({statement_key(p) for p in ds}) == 3


def test_planted_roles_are_spread():
    ds = build_dataset([5], 40, seed=4)
    counts = Counter(r for p in ds for r in p.solution.values())
    assert counts[Role.SPY] == 40
    assert counts[Role.KNIGHT] > 30 and counts[Role.KNAVE] > 30


def test_solution_world_is_consistent():
    p = generate_one(GenConfig(size=4, seed=12))
    spies = [q for q in p.players if p.solution[q] is Role.SPY]
    assert any(is_consistent(World.from_roles(p.solution, {s: b for s in spies}), p) for b in (False, True))


def test_record_round_trip():
    p = generate_one(GenConfig(size=5, seed=8))
    rec = puzzle_to_record(p)
    assert list(rec) == ["id", "size", "players", "statements", "hints", "solution"]
    assert puzzle_from_record(rec) == p
