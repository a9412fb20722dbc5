"""Seeded random games for fuzzing."""

from __future__ import annotations

import random
from fractions import Fraction

from .game import ConstantRule, GameGraph, Payoff, Player

LABELS = "abcdefgh"


def _build(vertices, controller, actions, terminals, inf, root, name) -> GameGraph:
    return GameGraph(
        vertices=tuple(vertices),
        controller=controller,
        actions={v: tuple(a) for v, a in actions.items()},
        terminals=terminals,
        infinite_rule=ConstantRule(Payoff(Fraction(inf[0]), Fraction(inf[1]))),
        root=root,
        name=name,
    )


def random_tree_game(
    rng: random.Random, max_depth: int = 5, max_branching: int = 3, payoffs=range(4), stop_prob: float = 0.25
) -> GameGraph:
    """Random game tree; the root always moves and no branch exceeds ``max_depth``."""
    vertices, controller, actions, terminals = [], {}, {}, {}
    values = list(payoffs)
    counter = [0]

    def node(depth: int) -> str:
        counter[0] += 1
        vid = f"n{counter[0]}"
        vertices.append(vid)
        if depth == max_depth or (depth > 0 and rng.random() < stop_prob):
            terminals[vid] = Payoff(Fraction(rng.choice(values)), Fraction(rng.choice(values)))
            return vid
        controller[vid] = rng.choice((Player.P1, Player.P2))
        k = rng.randint(1, max_branching)
        actions[vid] = [(LABELS[i], node(depth + 1)) for i in range(k)]
        return vid

    root = node(0)
    floor = min(values)
    return _build(vertices, controller, actions, terminals, (floor, floor), root, "random-tree")


def random_recursive_game(
    rng: random.Random, max_vertices: int = 8, max_branching: int = 3, payoffs=range(1, 5), require_cycle: bool = True
) -> GameGraph:
    """Random graph game with terminal payoffs from ``payoffs`` and ``(0, 0)`` for infinite plays."""
    values = list(payoffs)
    while True:
        n = rng.randint(2, max_vertices)
        n_term = rng.randint(1, max(1, n // 2))
        n_dec = n - n_term
        decision = [f"v{k}" for k in range(n_dec)]
        terms = [f"t{k}" for k in range(n_term)]
        everything = decision + terms
        controller = {v: rng.choice((Player.P1, Player.P2)) for v in decision}
        actions = {}
        for v in decision:
            k = rng.randint(1, min(max_branching, len(everything)))
            targets = rng.sample(everything, k)
            actions[v] = [(LABELS[i], t) for i, t in enumerate(targets)]
        terminals = {t: Payoff(Fraction(rng.choice(values)), Fraction(rng.choice(values))) for t in terms}
        g = _build(everything, controller, actions, terminals, (0, 0), decision[0], "random-recursive")
        if not require_cycle or not g.is_acyclic():
            return g
