"""Viability of plays and the iteration of lower bounds on equilibrium payoffs.

Sets of viable plays are infinite and never materialised. They are
represented by the ``is_viable`` predicate and by ``viable_min``, which
optimises over them class by class: a play's payoff is fixed by the
terminal it reaches or, for non-terminating plays, by the constant
infinite payoff, so each class reduces to a reachability question inside
the vertices whose bound the class payoff satisfies.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .game import GameError, GameGraph, Payoff, Player, controller_at
from .labels import AlphaLabels
from .plays import Lasso, canonical, check_lasso, evaluate_payoff, sort_key
from .zerosum import alpha_one


class ViabilityError(GameError):
    """Internal invariant failure: no viable play exists where one must."""


@dataclass(frozen=True)
class ViabilityWitness:
    vertex: str
    play: Lasso
    payoff: Payoff


@dataclass(frozen=True)
class StepRow:
    vertex: str
    old: Fraction
    new: Fraction
    action: str
    witness: Lasso


def is_viable(g: GameGraph, a: AlphaLabels, p: Lasso, *, check: bool = True) -> bool:
    """Every decision vertex on ``p`` gets its mover at least its label."""
    x = evaluate_payoff(g, p, check=check)
    return all(x.of(g.controller[v]) >= a[v] for v in p.visited())


def is_monotonic(g: GameGraph, a: AlphaLabels, p: Lasso, *, check: bool = True) -> bool:
    """Labels seen by each player along ``p`` never decrease.

    The cycle is unrolled twice so that the wrap-around from its last to
    its first vertex is compared as well.
    """
    if check:
        check_lasso(g, p)
    last: dict = {}
    for v in p.visited() + tuple(v for v, _ in p.cycle):
        i = g.controller[v]
        if i in last and a[v] < last[i]:
            return False
        last[i] = a[v]
    return True


def _search(g: GameGraph, start: str, allowed: set) -> dict:
    """BFS parents from ``start`` entering only allowed decision vertices or terminals.

    Actions are expanded in listed order, so the recorded parent path to any
    vertex is the lexicographically smallest shortest one.
    """
    parent = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if g.is_terminal(v):
            continue
        for a, w in g.actions[v]:
            if w in parent:
                continue
            if g.is_terminal(w) or w in allowed:
                parent[w] = (v, a)
                queue.append(w)
    return parent


def _path(parent: dict, end: str) -> tuple:
    steps = []
    while parent[end] is not None:
        v, a = parent[end]
        steps.append((v, a))
        end = v
    return tuple(reversed(steps))


def _shortest_cycle(g: GameGraph, x: str, allowed: set) -> Optional[tuple]:
    parent = {x: None}
    queue = deque([x])
    while queue:
        v = queue.popleft()
        for a, w in g.actions[v]:
            if w == x:
                return _path(parent, v) + ((v, a),)
            if w not in parent and w in allowed:
                parent[w] = (v, a)
                queue.append(w)
    return None


def viable_candidates(g: GameGraph, a: AlphaLabels, w: str) -> Iterator[ViabilityWitness]:
    """One shortest viable play from ``w`` per feasible payoff vector."""
    if g.is_terminal(w):
        yield ViabilityWitness(w, Lasso.at_terminal(w), g.terminals[w])
        return
    inf = g.infinite_payoff
    classes: dict = {}
    for t, x in g.terminals.items():
        classes.setdefault(x, []).append(t)
    classes.setdefault(inf, [])
    for x, terminals in classes.items():
        allowed = {h for h in g.decision_vertices if x.of(g.controller[h]) >= a[h]}
        if w not in allowed:
            continue
        parent = _search(g, w, allowed)
        best: Optional[Lasso] = None
        best_key = None
        for t in terminals:
            if t in parent:
                p = Lasso(_path(parent, t), (), t)
                k = sort_key(g, p)
                if best is None or k < best_key:
                    best, best_key = p, k
        if x == inf:
            for v in parent:
                if g.is_terminal(v):
                    continue
                loop = _shortest_cycle(g, v, allowed)
                if loop is None:
                    continue
                p = canonical(Lasso(_path(parent, v), loop, None))
                k = sort_key(g, p)
                if best is None or k < best_key:
                    best, best_key = p, k
        if best is not None:
            yield ViabilityWitness(w, best, x)


def viable_witness(g: GameGraph, a: AlphaLabels, w: str, j: Player) -> Optional[ViabilityWitness]:
    """Viable play from ``w`` minimising ``u^j``; ties go to the smallest ``sort_key``."""
    j = Player.parse(j)
    best = None
    for cand in viable_candidates(g, a, w):
        key = (cand.payoff.of(j), sort_key(g, cand.play))
        if best is None or key < best[0]:
            best = (key, cand)
    return None if best is None else best[1]


def viable_min(g: GameGraph, a: AlphaLabels, w: str, j: Player) -> Optional[Fraction]:
    """Minimum of ``u^j`` over plays viable from ``w``; ``None`` when there are none."""
    wit = viable_witness(g, a, w, j)
    return None if wit is None else wit.payoff.of(j)


def viable_max_welfare(g: GameGraph, a: AlphaLabels, w: str) -> Optional[ViabilityWitness]:
    best = None
    for cand in viable_candidates(g, a, w):
        key = (-(cand.payoff.u1 + cand.payoff.u2), sort_key(g, cand.play))
        if best is None or key < best[0]:
            best = (key, cand)
    return None if best is None else best[1]


def prepend(g: GameGraph, v: str, action: str, p: Lasso) -> Lasso:
    step = ((v, action),)
    return canonical(Lasso(step + p.prefix, p.cycle, p.terminal))


def alpha_step_rows(g: GameGraph, a: AlphaLabels) -> list:
    g.require_lsc()
    rows = []
    for h in g.decision_vertices:
        i = controller_at(g, h)
        best = None
        for label, w in g.actions[h]:
            wit = viable_witness(g, a, w, i)
            if wit is None:
                raise ViabilityError(f"no {a.index}-viable play from {w!r} (successor of {h!r} via {label!r})")
            val = wit.payoff.of(i)
            if best is None or val > best[0]:
                best = (val, label, wit)
        val, label, wit = best
        rows.append(StepRow(h, a[h], val, label, prepend(g, h, label, wit.play)))
    return rows


def alpha_step(g: GameGraph, a: AlphaLabels) -> AlphaLabels:
    """Best action value for the mover when continuations are restricted to viable plays."""
    rows = alpha_step_rows(g, a)
    return AlphaLabels(a.index + 1, {r.vertex: r.new for r in rows})


def iteration_bound(g: GameGraph) -> int:
    return len(g.vertices) * len(g.payoff_values) + 1


def alpha_iterates(g: GameGraph) -> list:
    """``[(labels, rows_of_the_step_from_them), ...]`` up to the first repeat.

    The last entry holds the stationary labels; its rows show the step that
    reproduced them.
    """
    a = alpha_one(g)
    out = []
    limit = iteration_bound(g)
    while True:
        rows = alpha_step_rows(g, a)
        out.append((a, rows))
        nxt = AlphaLabels(a.index + 1, {r.vertex: r.new for r in rows})
        if not nxt.dominates(a):
            raise ViabilityError(f"labels decreased between iterations {a.index} and {nxt.index}")
        if nxt.same_labels(a):
            return out
        if nxt.index > limit:
            raise ViabilityError(f"no fixed point within {limit} iterations")
        a = nxt


def alpha_fixed_point(g: GameGraph) -> tuple:
    """Stationary labels and the first index ``k`` with ``alpha_{k+1} == alpha_k``."""
    a, _ = alpha_iterates(g)[-1]
    return a, a.index
