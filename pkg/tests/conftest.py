import random

import pytest

from borelgame import scenarios
from borelgame.game import game_from_dict


def make_game(decisions, terminals, root=None, inf=(0, 0)):
    """Small game builder: ``decisions`` maps id -> (player, [(label, target), ...])."""
    verts = [
        {"id": v, "controller": p, "actions": [{"label": a, "to": t} for a, t in acts]}
        for v, (p, acts) in decisions.items()
    ]
    verts += [{"id": t, "terminal": list(x)} for t, x in terminals.items()]
    return game_from_dict(
        {
            "players": ["P1", "P2"],
            "root": root or next(iter(decisions)),
            "infinite_payoff": list(inf),
            "vertices": verts,
        }
    )


@pytest.fixture
def g1():
    return scenarios.load("g1")


@pytest.fixture
def counterexample():
    return scenarios.load("counterexample")


@pytest.fixture
def rng():
    return random.Random(20261015)
