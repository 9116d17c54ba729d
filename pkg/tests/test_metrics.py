import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from kkdebate.engine import DebateConfig, run_debate
from kkdebate.metrics import (
    METRIC_NAMES, START_STATES, TRANSITIONS, UndefinedMetric, agent_transition_counts, build_feature_table,
    classify_position, compute_report, correction_rates, initial_chaos, is_chaos, transition_counts,
    transition_events, transition_feature_table,
)
from kkdebate.metrics.features import feature_row, tier_groups
from kkdebate.metrics.outcome import (
    auc_agree_all, auc_agree_major, auc_smooth, auc_strict, instance_metrics, instance_smooth, instance_strict,
    smooth_accuracy, strict_accuracy, strict_majority,
)
from kkdebate.agents import AgentSpec
from kkdebate.statements import Role

from conftest import K, N, S, team
from oracles import brute_auc, replay_transitions
from synth import synthetic_transcript


def test_instance_accuracy_examples():
    truth = {"a": K, "b": N, "c": S, "d": K}
    pred = {"a": K, "b": N, "c": K, "d": K}
    assert instance_strict(pred, truth) == 0.0
    assert instance_smooth(pred, truth) == 0.75
    assert instance_strict(truth, truth) == 1.0


def test_dataset_accuracy_and_empty_input():
    truth = {"a": K, "b": N}
    pairs = [(truth, truth), ({"a": K, "b": S}, truth)]
    assert strict_accuracy(pairs) == 0.5
    assert smooth_accuracy(pairs) == 0.75
    with pytest.raises(UndefinedMetric):
        strict_accuracy([])
    with pytest.raises(UndefinedMetric):
        smooth_accuracy([])


def test_mismatched_players_rejected():
    with pytest.raises(ValueError):
        instance_smooth({"a": K}, {"b": K})


def test_strict_majority():
    assert strict_majority([K, K, N]) is K
    assert strict_majority([K, N]) is None
    assert strict_majority([K, K, N, N]) is None
    assert strict_majority([S, S, S, K]) is S


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_auc_identities_and_oracle(seed):
    tr = synthetic_transcript(random.Random(seed))
    m = instance_metrics(tr)
    assert all(0.0 <= v <= 1.0 for v in m.values())
    assert m["strict_accuracy"] <= m["smooth_accuracy"]
    assert m["auc_strict"] <= m["auc_smooth"]
    assert m["auc_agree_all"] <= m["auc_agree_major"]
    ref = brute_auc(tr.snapshots(), tr.players, tr.agents, tr.solution)
    for k, v in ref.items():
        assert abs(m[k] - v) <= 1e-12


def test_auc_worked_example():
    rng = random.Random(0)
    tr = synthetic_transcript(rng, players=2, agents=3, rounds=2, bias=1.0)
    assert auc_strict(tr) == auc_smooth(tr) == auc_agree_all(tr) == auc_agree_major(tr) == 1.0
    # break one agent's label on one player in round 2 only
    p0 = tr.players[0]
    wrong = next(r for r in Role if r is not tr.solution[p0])
    adj = tr.rounds[1].adjustments["Agent1"]
    object.__setattr__(adj, "assignment", {**adj.assignment, p0: wrong})
    assert auc_agree_all(tr) == pytest.approx((1.0 + 0.5) / 2)
    assert auc_agree_major(tr) == 1.0
    assert auc_strict(tr) == 1.0  # two of three still hold the truth


def test_auc_needs_rounds():
    tr = synthetic_transcript(random.Random(1), rounds=0)
    with pytest.raises(UndefinedMetric):
        auc_smooth(tr)


def test_agree_major_threshold_for_even_teams():
    # four agents split 2-2 still count as major agreement (ceil(4/2) = 2)
    tr = synthetic_transcript(random.Random(2), players=1, agents=4, rounds=1, bias=1.0)
    p = tr.players[0]
    other = next(r for r in Role if r is not tr.solution[p])
    for a in ("Agent1", "Agent2"):
        adj = tr.rounds[0].adjustments[a]
        object.__setattr__(adj, "assignment", {p: other})
    assert auc_agree_major(tr) == 1.0
    assert auc_agree_all(tr) == 0.0
    assert auc_strict(tr) == 0.0  # a tie is not a strict majority


@pytest.mark.parametrize("labels,agent,truth,state", [
    ({"a": K, "b": K, "c": N}, "a", K, "MaC"),
    ({"a": K, "b": K, "c": N}, "a", N, "MaW"),
    ({"a": K, "b": K, "c": N}, "c", N, "MiC"),
    ({"a": K, "b": K, "c": N}, "c", S, "MiW"),
    ({"a": K, "b": N, "c": S}, "a", K, "CC"),
    ({"a": K, "b": N, "c": S}, "a", N, "CW"),
    ({"a": K, "b": K, "c": N, "d": N}, "a", K, "CC"),
    ({"a": K, "b": K, "c": K, "d": N}, "d", K, "MiW"),
    ({"a": K, "b": N}, "a", K, "CC"),
])
def test_classify_position(labels, agent, truth, state):
    assert classify_position(agent, labels, truth) == state


def test_chaos():
    assert is_chaos([K, N, S])
    assert is_chaos([K, K, N, N])
    assert not is_chaos([K, K, N])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_transition_totals_and_replay(seed):
    tr = synthetic_transcript(random.Random(seed))
    counts = transition_counts([tr])
    assert sum(counts.values()) == len(tr.agents) * len(tr.rounds)
    assert set(counts) == set(TRANSITIONS)
    ref = replay_transitions(json.loads(json.dumps(tr.to_record())))
    assert {k: v for k, v in counts.items() if v} == ref
    per_agent = agent_transition_counts([tr])
    for k in TRANSITIONS:
        assert sum(c[k] for c in per_agent.values()) == counts[k]


def test_correction_rates():
    counts = dict.fromkeys(TRANSITIONS, 0)
    counts.update({"MaW->C": 1, "MaW->W": 3, "CC->C": 2})
    rates = correction_rates(counts)
    assert rates["MaW"] == 0.25 and rates["CC"] == 1.0
    assert rates["MiC"] is None and set(rates) == set(START_STATES)


def test_transition_events_are_per_agent_per_round(example4):
    tr = run_debate(example4, DebateConfig(team("oracle:0.3", "conformist", "random"), seed=5))
    ev = transition_events(tr)
    assert len(ev) == 3 * len(tr.rounds)
    assert [e[1] for e in ev] == [r.index for r in tr.rounds for _ in tr.agents]


def test_compute_report_skips_invalid_games():
    rng = random.Random(3)
    trs = [synthetic_transcript(rng, pid=f"g{i}") for i in range(5)]
    trs[0].valid = False
    rep = compute_report(trs)
    assert rep.n == 4
    for k in METRIC_NAMES:
        assert getattr(rep, k) == pytest.approx(sum(instance_metrics(t)[k] for t in trs[1:]) / 4)
    trs_bad = [synthetic_transcript(rng)]
    trs_bad[0].valid = False
    with pytest.raises(UndefinedMetric):
        compute_report(trs_bad)


def test_feature_row_uses_declared_tiers(example4):
    specs = (AgentSpec("Strong", "scripted", "oracle:0", perf_tier="high"),
             AgentSpec("Weak", "scripted", "oracle:1", perf_tier="low"),
             AgentSpec("Mid", "scripted", "oracle:0", perf_tier="medium"))
    tr = run_debate(example4, DebateConfig(specs, order_policy="agreed", confidence_visible=True))
    assert tier_groups(tr) == (["Strong"], ["Weak"])
    row = feature_row(tr)
    assert row["strong_init_strict"] == 1.0 and row["weak_init_smooth"] == 0.0
    assert row["init_smooth"] == pytest.approx(2 / 3)
    assert row["weak_in_minority"] == 4 and row["strong_in_minority"] == 0
    assert row["conf_visible"] == 1.0 and row["order_agreed"] == 1.0
    assert row["init_chaos"] == 0.0 and not initial_chaos(tr)
    assert row["game_size"] == 4 and row["num_agents"] == 3


def test_tier_groups_without_tiers(example4):
    tr = run_debate(example4, DebateConfig(team("oracle:0", "oracle:0")))
    assert tier_groups(tr) == (["Agent1", "Agent2"], ["Agent1", "Agent2"])


def test_feature_tables_shapes():
    rng = random.Random(4)
    trs = [synthetic_transcript(rng, pid=f"g{i}") for i in range(6)]
    trs[2].valid = False
    X, names, ys, ids = build_feature_table(trs)
    assert X.shape == (5, len(names)) and len(ids) == 5
    assert all(len(y) == 5 for y in ys.values())
    Xt, tn, yt = transition_feature_table(trs)
    assert Xt.shape == (5, 12) and tn == list(TRANSITIONS)
    assert Xt.sum() == sum(len(t.agents) * len(t.rounds) for t in trs if t.valid)
