import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borelgame import scenarios
from borelgame.alpha import alpha_fixed_point, is_viable
from borelgame.game import GameError, Player
from borelgame.generators import random_recursive_game
from borelgame.plays import evaluate_payoff, format_lasso
from borelgame.spe import (
    Memory,
    build_profile,
    induced_play,
    profile_from_dict,
    profile_step,
    profile_to_dict,
    threat_play,
)


@pytest.fixture
def g1_profile(g1):
    a, _ = alpha_fixed_point(g1)
    return build_profile(g1, a)


def test_g1_threats(g1, g1_profile):
    assert format_lasso(g1_profile.threat("v1")) == "v1 -go-> v2 -stop-> t2"
    assert format_lasso(g1_profile.threat("v2")) == "v2 -go-> v1 -stop-> t1"
    assert format_lasso(g1_profile.threat("v1", Player.P1)) == "v1 -stop-> t1"
    assert format_lasso(g1_profile.threat("v2", Player.P2)) == "v2 -stop-> t2"


def test_g1_induced_plays(g1, g1_profile):
    assert format_lasso(induced_play(g1, g1_profile, "v1")) == "v1 -go-> v2 -stop-> t2"
    assert format_lasso(induced_play(g1, g1_profile, "v2")) == "v2 -go-> v1 -stop-> t1"


def test_profile_step_follows_and_resets(g1, g1_profile):
    m = g1_profile.initial_memory("v1")
    planned, m2 = profile_step(g1_profile, m)
    assert planned == "go" and m2 == Memory(m.plan, 1)
    # P1 deviates at v1: play continues at t1, memory resets to a terminal plan
    planned, m3 = profile_step(g1_profile, m, "stop")
    assert planned == "go" and g1_profile.vertex(m3) == "t1"
    # P2 deviates at v2 by continuing: the threat punishing P2 starts at v1
    _, m4 = profile_step(g1_profile, m2, "go")
    assert m4 == Memory(g1_profile.threat("v1", Player.P2), 0)
    with pytest.raises(GameError):
        profile_step(g1_profile, m2, "jump")
    with pytest.raises(GameError):
        profile_step(g1_profile, m3)


def test_max_welfare_plan(g1):
    a, _ = alpha_fixed_point(g1)
    prof = build_profile(g1, a, "max-welfare")
    assert format_lasso(prof.root_plan) == "v1 -stop-> t1"
    assert format_lasso(induced_play(g1, prof, "v1")) == "v1 -stop-> t1"
    # elsewhere play starts on the threat
    assert format_lasso(induced_play(g1, prof, "v2")) == "v2 -go-> v1 -stop-> t1"
    with pytest.raises(ValueError):
        build_profile(g1, a, "greedy")


def test_profile_document_roundtrip(g1, g1_profile):
    doc = json.loads(json.dumps(profile_to_dict(g1_profile)))
    assert doc["on_path"] == {"start": "v1", "play": "v1 -go-> v2 -stop-> t2", "payoff": ["3", "1"]}
    again = profile_from_dict(g1, doc)
    assert again.table.plans == g1_profile.table.plans
    a, _ = alpha_fixed_point(g1)
    welfare = build_profile(g1, a, "max-welfare")
    back = profile_from_dict(g1, profile_to_dict(welfare))
    assert back.root_plan == welfare.root_plan and back.plan_mode == "max-welfare"


def test_profile_document_errors(g1, g1_profile):
    doc = profile_to_dict(g1_profile)
    with pytest.raises(GameError):
        profile_from_dict(g1, {**doc, "format": "other"})
    with pytest.raises(GameError, match="no threat plan"):
        profile_from_dict(g1, {**doc, "threats": doc["threats"][1:]})
    bad = json.loads(json.dumps(doc))
    bad["threats"][0]["plan"] = "v2 -stop-> t2"
    with pytest.raises(GameError, match="starts at"):
        profile_from_dict(g1, bad)


def test_threat_play_at_terminal(g1):
    a, _ = alpha_fixed_point(g1)
    assert threat_play(g1, a, "t2").terminal == "t2"


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_threats_are_viable_and_minimal(seed):
    g = random_recursive_game(random.Random(seed))
    a, _ = alpha_fixed_point(g)
    prof = build_profile(g, a)
    for (w, j), p in prof.table.plans.items():
        assert p.start == w
        assert is_viable(g, a, p)
    for w in g.decision_vertices:
        # following the profile from fresh memory yields the threat itself
        assert induced_play(g, prof, w) == prof.threat(w)


def test_single_vertex_profile():
    g = scenarios.load("single")
    a, _ = alpha_fixed_point(g)
    prof = build_profile(g, a)
    assert format_lasso(prof.threat("v")) == "v -end-> t"
    assert format_lasso(induced_play(g, prof, "v")) == "v -end-> t"


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from(["root-threat", "max-welfare"]))
def test_on_path_guarantee(seed, plan):
    g = random_recursive_game(random.Random(seed))
    a, _ = alpha_fixed_point(g)
    prof = build_profile(g, a, plan)
    for w in g.decision_vertices:
        p = induced_play(g, prof, w)
        x = evaluate_payoff(g, p)
        for v in p.visited():
            assert x.of(g.controller[v]) >= a[v]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_relentless_deviator_ends_below_every_threat(seed):
    """Deviating at every opportunity either stops at a terminal or loops at the floor payoff."""
    g = random_recursive_game(random.Random(seed))
    a, _ = alpha_fixed_point(g)
    prof = build_profile(g, a)
    for w in g.decision_vertices:
        for j in Player:
            deviator = {}
            for v in g.decision_vertices:
                if g.controller[v] == j:
                    deviator[v] = [b for b, _ in g.actions[v]]
            memory, seen, walk, plans = prof.initial_memory(w), {}, [], []
            while not g.is_terminal(prof.vertex(memory)) and memory not in seen:
                seen[memory] = len(walk)
                v = prof.vertex(memory)
                planned = prof.planned_action(memory)
                if g.controller[v] == j:
                    others = [b for b in deviator[v] if b != planned]
                    act = others[0] if others else planned
                else:
                    act = planned
                walk.append((v, act, act != planned))
                memory = prof.after(memory, act)
                if act != planned:
                    plans.append(memory.plan)
            if g.is_terminal(prof.vertex(memory)):
                continue
            loop = walk[seen[memory]:]
            if any(dev for _, _, dev in loop):
                floor = g.infinite_payoff.of(j)
                assert all(floor <= evaluate_payoff(g, p).of(j) for p in plans)
