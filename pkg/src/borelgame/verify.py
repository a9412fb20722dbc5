"""Brute-force certification of strategy profiles and a finite-horizon SPE oracle."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .game import GameError, GameGraph, Player, format_rational
from .plays import Lasso, evaluate_payoff
from .spe import Memory, StrategyProfile, induced_play


class OracleError(GameError):
    """The finite-horizon oracle refuses its input (cyclic, or over the caps)."""


@dataclass(frozen=True)
class ProductNode:
    vertex: str
    memory: Memory


def _explore(profile: StrategyProfile, start: Memory, free: frozenset) -> dict:
    """Product graph reachable from ``start``; players in ``free`` may take any action."""
    g = profile.game
    succ: dict = {}
    queue = deque([start])
    succ[start] = None
    while queue:
        m = queue.popleft()
        v = profile.vertex(m)
        if g.is_terminal(v):
            succ[m] = ()
            continue
        if g.controller[v] in free:
            nxt = tuple(profile.after(m, a) for a, _ in g.actions[v])
        else:
            nxt = (profile.after(m, profile.planned_action(m)),)
        succ[m] = nxt
        for n in nxt:
            if n not in succ:
                succ[n] = None
                queue.append(n)
    return succ


def best_deviation(
    g: GameGraph, profile: StrategyProfile, w: str, j: Player, memory: Optional[Memory] = None
) -> Fraction:
    """Highest ``u^j`` over all plays where ``j`` moves freely against the profile.

    Maximised by least-fixed-point iteration on the product of the graph and
    the profile's memory, starting from the infinite-play payoff.
    """
    g.require_lsc()
    j = Player.parse(j)
    start = profile.initial_memory(w) if memory is None else memory
    succ = _explore(profile, start, frozenset([j]))
    bottom = g.infinite_payoff.of(j)
    value = {}
    for m in succ:
        v = profile.vertex(m)
        value[m] = g.terminals[v].of(j) if g.is_terminal(v) else bottom
    inner = [m for m, nxt in succ.items() if nxt]
    changed = True
    while changed:
        changed = False
        for m in inner:
            best = max(value[n] for n in succ[m])
            if best > value[m]:
                value[m] = best
                changed = True
    return value[start]


@dataclass(frozen=True)
class ReportEntry:
    vertex: str
    player: Player
    on_path: Fraction
    best_deviation: Fraction
    memory: Optional[str] = None

    @property
    def slack(self) -> Fraction:
        return self.on_path - self.best_deviation


@dataclass(frozen=True)
class VerificationReport:
    entries: tuple
    epsilon: Fraction
    strict_memory: bool = False

    @property
    def passed(self) -> bool:
        return all(e.slack >= -self.epsilon for e in self.entries)

    def failures(self) -> list:
        return [e for e in self.entries if e.slack < -self.epsilon]

    def to_dict(self) -> dict:
        return {
            "epsilon": format_rational(self.epsilon),
            "strict_memory": self.strict_memory,
            "pass": self.passed,
            "entries": [
                {
                    "vertex": e.vertex,
                    "memory": e.memory,
                    "player": str(e.player),
                    "on_path": format_rational(e.on_path),
                    "best_deviation": format_rational(e.best_deviation),
                    "slack": format_rational(e.slack),
                    "pass": e.slack >= -self.epsilon,
                }
                for e in self.entries
            ],
        }

    def format_table(self) -> str:
        lines = [f"{'vertex':<10} {'player':<6} {'on-path':>9} {'best-dev':>9} {'slack':>8}  result"]
        for e in self.entries:
            ok = "ok" if e.slack >= -self.epsilon else "FAIL"
            where = e.vertex if e.memory is None else f"{e.vertex} {e.memory}"
            lines.append(
                f"{where:<10} {str(e.player):<6} {format_rational(e.on_path):>9} "
                f"{format_rational(e.best_deviation):>9} {format_rational(e.slack):>8}  {ok}"
            )
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"{verdict}: subgame-perfect {format_rational(self.epsilon)}-equilibrium check")
        return "\n".join(lines)


def check_spe(
    g: GameGraph, profile: StrategyProfile, epsilon=Fraction(0), strict_memory: bool = False
) -> VerificationReport:
    """Best deviation against on-path payoff for both players in every subgame.

    Subgames start at each decision vertex with fresh memory. With
    ``strict_memory`` every memory state reachable from those starts under
    arbitrary play is examined as well.
    """
    g.require_lsc()
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    starts = [(w, profile.initial_memory(w)) for w in g.decision_vertices]
    if strict_memory:
        states: dict = {}
        for _, m in starts:
            states.update(_explore(profile, m, frozenset(Player)))
        starts = [(profile.vertex(m), m) for m in states if not g.is_terminal(profile.vertex(m))]
    entries = []
    for w, m in starts:
        pay = evaluate_payoff(g, induced_play(g, profile, w, m), check=False)
        for j in Player:
            entries.append(
                ReportEntry(
                    vertex=w,
                    player=j,
                    on_path=pay.of(j),
                    best_deviation=best_deviation(g, profile, w, j, m),
                    memory=str(m) if strict_memory else None,
                )
            )
    return VerificationReport(tuple(entries), epsilon, strict_memory)


# -- finite-horizon oracle ---------------------------------------------------


@dataclass(frozen=True)
class FiniteHorizonResult:
    plays: dict  # Lasso -> Payoff, plays from the root
    values: dict  # history (tuple of (vertex, action)) -> frozenset of Payoff


def finite_horizon_spe(g: GameGraph, max_depth: int = 6, max_branching: int = 3) -> FiniteHorizonResult:
    """All plays induced by pure subgame-perfect equilibria of an acyclic game.

    Bottom-up: for every combination of one equilibrium outcome per child,
    the mover picks any child whose outcome is best for them; the union over
    combinations is the equilibrium outcome set at the vertex.
    """
    if not g.is_acyclic():
        raise OracleError("cyclic input: the finite-horizon oracle needs an acyclic game")
    depth, branching = g.depth(), g.max_branching()
    if depth > max_depth or branching > max_branching:
        raise OracleError(
            f"oracle caps exceeded: depth {depth} (cap {max_depth}), branching {branching} (cap {max_branching})"
        )
    memo: dict = {}

    def outcomes(v: str) -> dict:
        # payoff -> list of (steps, terminal)
        if v in memo:
            return memo[v]
        if g.is_terminal(v):
            res = {g.terminals[v]: [((), v)]}
        else:
            i = g.controller[v]
            kids = [(a, outcomes(w)) for a, w in g.actions[v]]
            res: dict = {}
            for combo in itertools.product(*[sorted(o, key=tuple) for _, o in kids]):
                top = max(x.of(i) for x in combo)
                for (a, o), x in zip(kids, combo):
                    if x.of(i) != top:
                        continue
                    bucket = res.setdefault(x, [])
                    for steps, t in o[x]:
                        play = (((v, a),) + steps, t)
                        if play not in bucket:
                            bucket.append(play)
        memo[v] = res
        return res

    plays = {}
    for x, lst in outcomes(g.root).items():
        for steps, t in lst:
            plays[Lasso(steps, (), t)] = x

    values: dict = {}

    def walk(v: str, hist: tuple) -> None:
        values[hist] = frozenset(outcomes(v))
        if not g.is_terminal(v):
            for a, w in g.actions[v]:
                walk(w, hist + ((v, a),))

    walk(g.root, ())
    return FiniteHorizonResult(plays, values)
