import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borelgame import scenarios
from borelgame.alpha import alpha_fixed_point
from borelgame.folk import (
    COUNTEREXAMPLE_SPE_PAYOFF,
    BoundsError,
    counterexample_report,
    enumerate_viable,
    folk_crosscheck,
)
from borelgame.game import Payoff
from borelgame.generators import random_recursive_game, random_tree_game
from borelgame.plays import canonical, evaluate_payoff, format_lasso, Lasso

from oracles import all_lassos, viable


def test_g1_enumeration(g1):
    a, _ = alpha_fixed_point(g1)
    got = [(format_lasso(p), x) for p, x in enumerate_viable(g1, a, "v1", 4, 2).plays]
    assert got == [
        ("v1 -stop-> t1", Payoff(1, 3)),
        ("v1 -go-> v2 -stop-> t2", Payoff(3, 1)),
        ("v1 -go-> v2 -go-> v1 -stop-> t1", Payoff(1, 3)),
        ("v1 -go-> v2 -go-> v1 -go-> v2 -stop-> t2", Payoff(3, 1)),
    ]


def test_bounds(g1):
    a, _ = alpha_fixed_point(g1)
    with pytest.raises(BoundsError):
        enumerate_viable(g1, a, "v1", 13, 1)
    with pytest.raises(BoundsError):
        enumerate_viable(g1, a, "v1", -1, 1)
    assert len(enumerate_viable(g1, a, "v1", 0, 0).plays) == 0


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 3), st.integers(1, 3))
def test_enumeration_matches_brute_force(seed, max_prefix, max_cycle):
    g = random_recursive_game(random.Random(seed), max_vertices=6, max_branching=2)
    a, _ = alpha_fixed_point(g)
    got = {p for p, _ in enumerate_viable(g, a, g.root, max_prefix, max_cycle).plays}
    expect = set()
    for prefix, cycle, t in all_lassos(g, g.root, max_prefix + max_cycle):
        if t is not None and len(prefix) > max_prefix:
            continue
        p = canonical(Lasso(prefix, cycle, t))
        if len(p.prefix) <= max_prefix and len(p.cycle) <= max_cycle and viable(g, a, prefix, cycle, t):
            expect.add(p)
    assert got == expect


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**9))
def test_folk_crosscheck_on_trees(seed):
    g = random_tree_game(random.Random(seed), max_depth=4, max_branching=2)
    report = folk_crosscheck(g)
    assert report.match, report.to_dict()
    assert report.common


def test_counterexample_report(counterexample):
    report = counterexample_report(counterexample)
    assert not report.match
    assert "lower-semi-continuous" in report.note
    for p in report.viable_only:
        assert evaluate_payoff(counterexample, p) != COUNTEREXAMPLE_SPE_PAYOFF
    for p in report.common:
        assert evaluate_payoff(counterexample, p) == COUNTEREXAMPLE_SPE_PAYOFF
    assert "(p1 -a-> p2 -b->)*" in report.to_dict()["viable_only"]


def test_trivial_enumerations():
    single = scenarios.load("single")
    a, _ = alpha_fixed_point(single)
    assert [format_lasso(p) for p in enumerate_viable(single, a, "v", 1, 1).lassos()] == ["v -end-> t"]
    from conftest import make_game

    loop = make_game({"a": (1, [("x", "b")]), "b": (2, [("x", "a")])}, {}, inf=(1, 1))
    a, _ = alpha_fixed_point(loop)
    assert [format_lasso(p) for p in enumerate_viable(loop, a, "a", 0, 2).lassos()] == ["(a -x-> b -x->)*"]


def test_tie_game_crosscheck():
    rep = folk_crosscheck(scenarios.load("tie"))
    assert rep.match
    assert sorted(format_lasso(p) for p in rep.common) == ["v -a-> ta", "v -b-> tb"]


def unrolled_g1(depth):
    """Acyclic copy of g1 cut after ``depth`` moves; the cut pays the infinite payoff (0,0)."""
    from conftest import make_game

    decisions, terminals = {}, {"t1": (1, 3), "t2": (3, 1), "cut": (0, 0)}
    for k in range(depth):
        player = 1 if k % 2 == 0 else 2
        nxt = f"u{k + 1}" if k + 1 < depth else "cut"
        decisions[f"u{k}"] = (player, [("stop", "t1" if player == 1 else "t2"), ("go", nxt)])
    return make_game(decisions, terminals)


def test_unrolled_g1_crosscheck():
    g = unrolled_g1(4)
    rep = folk_crosscheck(g)
    assert rep.match, rep.to_dict()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_threats_and_induced_plays_are_enumerated(seed):
    from borelgame.spe import build_profile, induced_play

    g = random_recursive_game(random.Random(seed))
    a, _ = alpha_fixed_point(g)
    prof = build_profile(g, a)
    plays = list(prof.table.plans.values()) + [induced_play(g, prof, w) for w in g.decision_vertices]
    for p in plays:
        listed = enumerate_viable(g, a, p.start, len(p.prefix), len(p.cycle))
        assert p in listed
