"""Auxiliary zero-sum games: values and subgame-perfect optimal positional strategies.

For player ``i`` the auxiliary game has ``i`` maximizing ``u^i`` and the
opponent minimizing it. With terminal payoffs dominating the constant
payoff of non-terminating plays, the value is the least fixed point of the
Bellman operator started from that constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .game import GameError, GameGraph, Player, controller_at
from .labels import AlphaLabels, ValueLabels
from .plays import Lasso, positional_play


class InconsistentLabels(GameError):
    """Labels passed to strategy synthesis violate Bellman consistency."""


@dataclass(frozen=True)
class PositionalStrategy:
    owner: Player
    choice: Mapping[str, str]

    def __call__(self, v: str) -> str:
        return self.choice[v]


def _bellman(g: GameGraph, player: Player, value: Mapping[str, Fraction], v: str) -> Fraction:
    succ = [value[w] for w in g.successors(v)]
    return max(succ) if g.controller[v] is player else min(succ)


def value_labels(g: GameGraph, player: Player) -> ValueLabels:
    """Exact value of the zero-sum game for ``player`` from every vertex."""
    g.require_lsc()
    player = Player.parse(player)
    bottom = g.infinite_payoff.of(player)
    value = {v: g.terminals[v].of(player) if g.is_terminal(v) else bottom for v in g.vertices}
    limit = len(g.vertices) * len(g.payoff_values)
    for rounds in range(limit + 1):
        new = {v: _bellman(g, player, value, v) for v in g.decision_vertices}
        if all(new[v] == value[v] for v in new):
            return ValueLabels(player, value, rounds)
        value.update(new)
    raise AssertionError(f"value iteration did not stabilise within {limit} rounds")


def check_bellman(g: GameGraph, labels: ValueLabels) -> None:
    player = labels.for_player
    for v in g.vertices:
        if v not in labels.value:
            raise InconsistentLabels(f"no label at {v!r}")
        if g.is_terminal(v):
            if labels[v] != g.terminals[v].of(player):
                raise InconsistentLabels(f"terminal {v!r} labelled {labels[v]}, payoff is {g.terminals[v].of(player)}")
        elif labels[v] != _bellman(g, player, labels.value, v):
            raise InconsistentLabels(f"label at {v!r} is not the max/min of its successors")


def attractor_ranks(g: GameGraph, player: Player, targets) -> dict:
    """Layer index at which each vertex enters ``player``'s attractor of ``targets``."""
    rank = {t: 0 for t in targets}
    layer = 0
    while True:
        layer += 1
        added = []
        for v in g.decision_vertices:
            if v in rank:
                continue
            succ = g.successors(v)
            if g.controller[v] is player:
                ok = any(w in rank for w in succ)
            else:
                ok = all(w in rank for w in succ)
            if ok:
                added.append(v)
        if not added:
            return rank
        for v in added:
            rank[v] = layer


def optimal_strategies(g: GameGraph, labels: ValueLabels) -> tuple:
    """Positional optimal strategies ``(maximizer, minimizer)`` for the labels' game.

    The maximizer keeps the value and, among value-preserving actions, moves
    to the successor closest to a terminal worth at least the value, so the
    value is actually reached. The minimizer takes the first value-preserving
    action.
    """
    check_bellman(g, labels)
    player = labels.for_player
    value = labels.value

    ranks_by_level: dict = {}

    def ranks(level: Fraction) -> dict:
        if level not in ranks_by_level:
            targets = [t for t in g.terminals if g.terminals[t].of(player) >= level]
            ranks_by_level[level] = attractor_ranks(g, player, targets)
        return ranks_by_level[level]

    max_choice, min_choice = {}, {}
    for v in g.decision_vertices:
        keep = [(k, a) for k, (a, w) in enumerate(g.actions[v]) if value[w] == value[v]]
        if g.controller[v] is player:
            r = ranks(value[v])
            inf = float("inf")
            _, best = min(keep, key=lambda ka: (r.get(g.successor(v, ka[1]), inf), ka[0]))
            max_choice[v] = best
        else:
            min_choice[v] = keep[0][1]
    return PositionalStrategy(player, max_choice), PositionalStrategy(player.opponent, min_choice)


def alpha_one(g: GameGraph) -> AlphaLabels:
    """Zero-sum value for the mover at every decision vertex."""
    g.require_lsc()
    values = {p: value_labels(g, p) for p in Player}
    return AlphaLabels(1, {v: values[controller_at(g, v)][v] for v in g.decision_vertices})


def optimal_play(g: GameGraph, start: str, strategies: Optional[dict] = None) -> Lasso:
    """Play from ``start`` when each player follows an optimal maximizer strategy in its own game."""
    if strategies is None:
        strategies = {p: optimal_strategies(g, value_labels(g, p))[0] for p in Player}
    return positional_play(g, {v: strategies[g.controller[v]](v) for v in g.decision_vertices}, start)
