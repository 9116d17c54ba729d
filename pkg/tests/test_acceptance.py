"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import itertools
import json
import random
from contextlib import contextmanager
from time import perf_counter

import numpy as np
import pytest

from kkdebate import solver
from kkdebate.agents import AgentSpec, prompts
from kkdebate.engine import DebateConfig, run_debate
from kkdebate.generator import GenConfig, build_dataset, generate_one, statement_key
from kkdebate.metrics import correction_rates, fit_linear, transition_counts
from kkdebate.metrics.outcome import instance_metrics, instance_strict, initial_majority
from kkdebate.protocol import majority_vote
from kkdebate.statements import Role

from conftest import ACCEPTANCE_LINES, four_player_example, team, three_player_sample
from oracles import brute_auc, naive_solutions, replay_transitions, strict_winner
from synth import synthetic_transcript
from test_prompts import _round2_ctx, _transcript, golden, load_scenario


@contextmanager
def criterion(name, budget):
    """Time the block, record one summary line, and fail on error or overrun."""
    box = {"detail": ""}
    t0 = perf_counter()
    try:
        yield box
    except BaseException as exc:
        line = f"FAIL  {name}: {type(exc).__name__}: {str(exc)[:160]} ({perf_counter() - t0:.2f}s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    elapsed = perf_counter() - t0
    ok = elapsed < budget
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {box['detail']} ({elapsed:.2f}s of {budget:g}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, f"{name} exceeded its time budget"


def solution_set(res, puzzle):
    return {tuple(s[p] for p in puzzle.players) for s in res.solutions}


def test_golden_puzzles():
    with criterion("golden puzzles", 1.0) as box:
        for backend in solver.available_backends():
            for p in (four_player_example(), three_player_sample()):
                res = solver.solve(p, backend=backend)
                assert res.unique, f"{p.id}: {len(res.solutions)} solutions with {backend}"
                assert res.solutions[0] == dict(p.solution), (p.id, backend)
        box["detail"] = f"both published solutions reproduced exactly on {', '.join(solver.available_backends())}"


def test_solver_oracle_equivalence():
    with criterion("solver oracle equivalence", 30.0) as box:
        puzzles = [generate_one(GenConfig(size=3 + i % 3, seed=i)) for i in range(200)]
        for p in puzzles:
            expected = naive_solutions(p)
            for backend in solver.available_backends():
                got = solution_set(solver.solve(p, backend=backend), p)
                assert got == expected, f"{p.id} with {backend}"
        box["detail"] = f"200 generated puzzles (sizes 3-5), solution sets identical on every backend"


@pytest.mark.slow
def test_dataset_shape():
    with criterion("dataset shape", 600.0) as box:
        first = build_dataset(range(4, 10), 300, seed=0)
        second = build_dataset(range(4, 10), 300, seed=0)
        assert len(first) == 1800
        assert [p.size for p in first].count(4) == 300 and {p.size for p in first} == set(range(4, 10))
        assert [(p.id, statement_key(p), p.solution) for p in first] == \
            [(p.id, statement_key(p), p.solution) for p in second]
        for p in first:
            res = solver.solve(p)
            assert res.unique and res.solutions[0] == dict(p.solution), p.id
        box["detail"] = "1800 puzzles, 300 per size 4-9, identical across two runs, each re-verified unique"


@pytest.fixture(scope="module")
def hundred_mixed():
    return build_dataset(range(4, 10), 17, seed=5)[:100]


def test_protocol_ceiling(hundred_mixed):
    with criterion("protocol ceiling", 60.0) as box:
        cfg = DebateConfig(team("oracle:0", "oracle:0", "oracle:0"), seed=1)
        trs = [run_debate(p, cfg) for p in hundred_mixed]
        acc = float(np.mean([instance_strict(t.final_decision, t.solution) for t in trs]))
        calls = sum(len(t.supervisor_invocations) for t in trs)
        assert acc == 1.0 and calls == 0, (acc, calls)
        box["detail"] = f"100 games, final strict accuracy {acc:.3f}, supervisor invocations {calls}"


def test_vote_semantics(hundred_mixed):
    with criterion("vote semantics", 1.0) as box:
        rows = 0
        for size in (2, 3, 4, 5):
            names = [f"a{i}" for i in range(size)]
            for labels in itertools.product(Role, repeat=size):
                assert majority_vote(dict(zip(names, labels))) == strict_winner(labels), labels
                rows += 1
        routed = 0
        for size in (2, 3, 4, 5):
            cfg = DebateConfig(team(*["random"] * size), seed=size)
            for p in hundred_mixed[:3]:
                tr = run_debate(p, cfg)
                tied = {pl for pl, _ in tr.supervisor_invocations}
                for pl in p.players:
                    w = strict_winner([tr.final_per_agent[a].assignment[pl] for a in tr.agents])
                    assert (w is None) == (pl in tied)
                    routed += w is None
        box["detail"] = f"{rows} label tuples match strict majority; {routed} tied players all routed to supervisor"


def test_metric_identities():
    with criterion("metric identities", 60.0) as box:
        rng = random.Random(2024)
        worst = 0.0
        for i in range(1000):
            tr = synthetic_transcript(rng, pid=f"s{i}")
            m = instance_metrics(tr)
            assert all(0.0 <= v <= 1.0 for v in m.values())
            assert m["strict_accuracy"] <= m["smooth_accuracy"]
            assert m["auc_agree_all"] <= m["auc_agree_major"]
            ref = brute_auc(tr.snapshots(), tr.players, tr.agents, tr.solution)
            worst = max(worst, max(abs(m[k] - v) for k, v in ref.items()))
        assert worst <= 1e-12
        box["detail"] = f"1000 synthetic transcripts, identities hold, max AUC deviation {worst:.1e}"


def test_transition_bookkeeping():
    with criterion("transition bookkeeping", 60.0) as box:
        puzzles = build_dataset([4, 5], 25, seed=8)
        cfg = DebateConfig(team("oracle:0.2", "conformist", "stubborn/oracle:0.4", "random"), seed=3)
        trs = [run_debate(p, cfg) for p in puzzles]
        counts = transition_counts(trs)
        expected_total = sum(len(t.agents) * len(t.rounds) for t in trs)
        assert sum(counts.values()) == expected_total
        replay: dict[str, int] = {}
        for t in trs:
            for k, v in replay_transitions(json.loads(json.dumps(t.to_record()))).items():
                replay[k] = replay.get(k, 0) + v
        full = {k: replay.get(k, 0) for k in counts}
        assert full == counts
        assert correction_rates(full) == correction_rates(counts)
        box["detail"] = f"50 games, {expected_total} transitions = agents x rounds, replay counts and rates equal"


def test_regression_correctness():
    with criterion("regression correctness", 1.0) as box:
        rng = np.random.default_rng(0)
        X = rng.normal(size=(50, 5))
        beta = np.array([1.5, -2.0, 0.0, 3.25, 0.5])
        y = X @ beta - 0.75
        fit = fit_linear(X, y, lam=0)
        ols_err = max(np.max(np.abs(fit.coefficients - beta)), abs(fit.intercept + 0.75))
        assert ols_err <= 1e-9

        y_noisy = y + rng.normal(size=50)
        lam = 3.0
        ridge = fit_linear(X, y_noisy, lam=lam)
        Xa = np.column_stack([np.ones(50), X])
        pen = np.sqrt(lam) * np.column_stack([np.zeros(5), np.eye(5)])
        alt, *_ = np.linalg.lstsq(np.vstack([Xa, pen]), np.concatenate([y_noisy, np.zeros(5)]), rcond=None)
        ridge_err = max(np.max(np.abs(ridge.coefficients - alt[1:])), abs(ridge.intercept - alt[0]))
        assert ridge_err <= 1e-9

        norms = [np.linalg.norm(fit_linear(X, y_noisy, lam=l).coefficients) for l in np.logspace(-2, 7, 40)]
        assert all(b < a for a, b in zip(norms, norms[1:]))
        box["detail"] = (f"OLS error {ols_err:.1e}, ridge vs augmented lstsq {ridge_err:.1e}, "
                         f"norm shrinks monotonically over 40 penalties")


def test_debate_improves_accuracy():
    with criterion("debate improves accuracy", 120.0) as box:
        puzzles = build_dataset([4], 100, seed=0)
        cfg = DebateConfig(team("oracle:0.1", "conformist", "conformist"), seed=0)
        trs = [run_debate(p, cfg) for p in puzzles]
        initial = float(np.mean([
            all(initial_majority(t)[p] == t.solution[p] for p in t.players) for t in trs]))
        final = float(np.mean([instance_strict(t.final_decision, t.solution) for t in trs]))
        box["detail"] = f"initial majority {initial:.2f}, final {final:.2f}, margin {final - initial:+.2f}"
        assert final > initial, box["detail"]


def test_prompt_fidelity():
    with criterion("prompt fidelity", 1.0) as box:
        sc = load_scenario()
        agents, initial, rounds = sc
        sample = three_player_sample()
        rendered = {
            "initial": prompts.initial_prompt(sample),
            "debate": prompts.debate_prompt(_round2_ctx(sc, 1), "Agent2"),
            "debate_confidence": prompts.debate_prompt(_round2_ctx(sc, 1, visible=True), "Agent2"),
            "adjust": prompts.adjust_prompt(_round2_ctx(sc, 3), "Agent3"),
            "final": prompts.final_prompt(sample, agents, initial, rounds, False),
            "supervisor": prompts.supervisor_prompt(sample, _transcript(sc)),
            "judge": prompts.judge_prompt(sample, 3, "Uma", "Agent2"),
        }
        mismatched = [k for k, text in rendered.items() if text != golden(k)]
        assert not mismatched, mismatched
        box["detail"] = f"{len(rendered)} rendered prompts byte-identical to golden files"
