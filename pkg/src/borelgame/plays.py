"""Ultimately periodic plays (lassos) and their payoffs.

A lasso is a finite list of steps ``(vertex, action)`` followed either by a
terminal vertex or by a cycle of steps that returns to its own first vertex.
On a finite graph every payoff depends only on the terminal reached or on
the set of edges of the cycle, never on the prefix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from .game import ConstantRule, GameError, GameGraph, Payoff

Step = tuple  # (vertex, action label)


class LassoError(GameError):
    """A lasso is inconsistent with the game graph."""


@dataclass(frozen=True)
class Lasso:
    prefix: tuple = ()
    cycle: tuple = ()
    terminal: Optional[str] = None

    def __post_init__(self) -> None:
        if (self.terminal is None) == (not self.cycle):
            raise LassoError("a lasso ends in exactly one of: a terminal vertex, a non-empty cycle")

    @classmethod
    def at_terminal(cls, t: str) -> "Lasso":
        return cls((), (), t)

    @property
    def start(self) -> str:
        if self.prefix:
            return self.prefix[0][0]
        if self.cycle:
            return self.cycle[0][0]
        return self.terminal  # type: ignore[return-value]

    @property
    def is_terminating(self) -> bool:
        return self.terminal is not None

    @property
    def steps(self) -> tuple:
        """Prefix steps followed by one copy of the cycle."""
        return self.prefix + self.cycle

    def __len__(self) -> int:
        return len(self.prefix) + len(self.cycle)

    def visited(self) -> tuple:
        """Decision vertices visited, in order, covering the prefix and one cycle copy."""
        return tuple(v for v, _ in self.prefix + self.cycle)

    def cycle_edges(self) -> frozenset:
        return frozenset(self.cycle)

    def step_at(self, position: int) -> Optional[Step]:
        """Step taken at ``position`` of the infinite play, None once a terminal is reached."""
        if position < len(self.prefix):
            return self.prefix[position]
        if self.terminal is not None:
            return None
        return self.cycle[(position - len(self.prefix)) % len(self.cycle)]

    def advance(self, position: int) -> int:
        """Position after taking the step at ``position``, folded into range."""
        nxt = position + 1
        if self.cycle and nxt >= len(self.prefix) + len(self.cycle):
            nxt = len(self.prefix)
        return nxt

    def vertex_at(self, position: int) -> str:
        step = self.step_at(position)
        if step is None:
            return self.terminal  # type: ignore[return-value]
        return step[0]

    def __str__(self) -> str:
        return format_lasso(self)


def format_lasso(p: Lasso) -> str:
    """Render as ``v1 -go-> v2 -stop-> t2`` or ``v0 -a-> (v1 -b-> v2 -c->)*``."""
    parts = [f"{v} -{a}->" for v, a in p.prefix]
    if p.terminal is not None:
        parts.append(p.terminal)
        return " ".join(parts)
    parts.append("(" + " ".join(f"{v} -{a}->" for v, a in p.cycle) + ")*")
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\()|(\)\*)|-([A-Za-z0-9_.:]+)->|([A-Za-z0-9_.:]+))")


def parse_lasso(g: GameGraph, text: str) -> Lasso:
    """Inverse of ``format_lasso``; the result is validated against ``g``."""
    pos, tokens = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise LassoError(f"cannot parse lasso {text!r} at offset {pos}")
        pos = m.end()
        if m.group(1):
            tokens.append(("open", None))
        elif m.group(2):
            tokens.append(("close", None))
        elif m.group(3):
            tokens.append(("act", m.group(3)))
        else:
            tokens.append(("vertex", m.group(4)))

    prefix: list = []
    cycle: list = []
    target = prefix
    closed = False
    k = 0
    while k < len(tokens):
        kind, val = tokens[k]
        if kind == "open":
            if target is cycle:
                raise LassoError(f"nested cycle in {text!r}")
            target = cycle
        elif kind == "close":
            if target is not cycle or k != len(tokens) - 1:
                raise LassoError(f"misplaced ')*' in {text!r}")
            closed = True
        elif kind == "vertex":
            if k + 1 < len(tokens) and tokens[k + 1][0] == "act":
                target.append((val, tokens[k + 1][1]))
                k += 1
            elif k == len(tokens) - 1 and target is prefix:
                p = Lasso(tuple(prefix), (), val)
                check_lasso(g, p)
                return p
            else:
                raise LassoError(f"vertex {val!r} without action in {text!r}")
        else:
            raise LassoError(f"action {val!r} without vertex in {text!r}")
        k += 1
    if not cycle:
        raise LassoError(f"lasso {text!r} has neither terminal nor cycle")
    if not closed:
        raise LassoError(f"unclosed cycle in {text!r}")
    p = Lasso(tuple(prefix), tuple(cycle), None)
    check_lasso(g, p)
    return p


def check_lasso(g: GameGraph, p: Lasso) -> None:
    """Raise ``LassoError`` unless ``p`` is edge-consistent with ``g``."""
    seq = p.prefix + p.cycle
    for k, (v, a) in enumerate(seq):
        if v not in g.order:
            raise LassoError(f"unknown vertex {v!r} in lasso")
        if g.is_terminal(v):
            raise LassoError(f"lasso continues past terminal {v!r}")
        if not g.has_action(v, a):
            raise LassoError(f"action {a!r} not available at {v!r}")
        nxt = g.successor(v, a)
        if k + 1 < len(seq):
            expected = seq[k + 1][0]
        elif p.terminal is not None:
            expected = p.terminal
        else:
            expected = p.cycle[0][0]
        if nxt != expected:
            raise LassoError(f"edge {v} -{a}-> leads to {nxt!r}, lasso continues at {expected!r}")
    if p.terminal is not None:
        if p.terminal not in g.order or not g.is_terminal(p.terminal):
            raise LassoError(f"lasso ends at {p.terminal!r}, which is not a terminal vertex")


def canonical(p: Lasso) -> Lasso:
    """Shortest prefix and shortest period denoting the same infinite play."""
    if p.terminal is not None:
        return p
    cycle = list(p.cycle)
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle == cycle[:d] * (n // d):
            cycle = cycle[:d]
            break
    prefix = list(p.prefix)
    while prefix and prefix[-1] == cycle[-1]:
        cycle = [prefix.pop()] + cycle[:-1]
    return Lasso(tuple(prefix), tuple(cycle), None)


def is_canonical(p: Lasso) -> bool:
    return canonical(p) == p


def evaluate_payoff(g: GameGraph, p: Lasso, *, check: bool = True) -> Payoff:
    if check:
        check_lasso(g, p)
    if p.terminal is not None:
        return g.terminals[p.terminal]
    rule = g.infinite_rule
    if isinstance(rule, ConstantRule):
        return rule.payoff
    return rule.payoff(p.cycle_edges())


def sort_key(g: GameGraph, p: Lasso) -> tuple:
    """Total order used for deterministic tie-breaking: length, then steps."""
    order = g.order
    steps = tuple((order[v], g.action_index(v, a)) for v, a in p.prefix)
    loop = tuple((order[v], g.action_index(v, a)) for v, a in p.cycle)
    tail = (0, order[p.terminal]) if p.terminal is not None else (1, len(p.prefix))
    return (len(p), steps + loop, tail)


def lasso_from_walk(g: GameGraph, walk: Sequence, end: str) -> Lasso:
    """Build a lasso from a walk of steps ending at ``end``.

    If ``end`` is terminal the walk is the prefix; otherwise ``end`` must
    occur as the vertex of an earlier step, where the cycle starts.
    """
    walk = tuple(walk)
    if g.is_terminal(end):
        return Lasso(walk, (), end)
    for k, (v, _) in enumerate(walk):
        if v == end:
            return canonical(Lasso(walk[:k], walk[k:], None))
    raise LassoError(f"walk does not close a cycle at {end!r}")


def follow(g: GameGraph, start: str, choose: Callable[[str], str]) -> Lasso:
    """The play from ``start`` when the action at every vertex is ``choose(vertex)``."""
    walk: list = []
    index: dict = {}
    v = start
    while not g.is_terminal(v) and v not in index:
        index[v] = len(walk)
        a = choose(v)
        walk.append((v, a))
        v = g.successor(v, a)
    return lasso_from_walk(g, walk, v)


def positional_play(g: GameGraph, choices: Mapping[str, str], start: str) -> Lasso:
    return follow(g, start, choices.__getitem__)


def run_automaton(g: GameGraph, start_state, step: Callable, vertex_of: Callable) -> Lasso:
    """Simulate a deterministic finite-state controller.

    ``step(state)`` returns ``(action, next_state)``; ``vertex_of(state)`` is
    the current vertex. The play is closed into a lasso as soon as a state
    repeats (its cycle then has the vertex sequence of the repeated segment).
    """
    walk: list = []
    seen: dict = {}
    state = start_state
    while True:
        v = vertex_of(state)
        if g.is_terminal(v):
            return Lasso(tuple(walk), (), v)
        if state in seen:
            k = seen[state]
            return canonical(Lasso(tuple(walk[:k]), tuple(walk[k:]), None))
        seen[state] = len(walk)
        a, state = step(state)
        walk.append((v, a))


def iter_walks(g: GameGraph, start: str, length: int) -> Iterator[tuple]:
    """All walks of exactly ``length`` steps from ``start`` through decision vertices.

    Yields ``(steps, end_vertex)``; walks stop early only at terminals, which
    are not yielded unless the length is reached exactly.
    """
    def rec(v: str, acc: list, left: int) -> Iterator[tuple]:
        if left == 0:
            yield tuple(acc), v
            return
        if g.is_terminal(v):
            return
        for a, w in g.actions[v]:
            acc.append((v, a))
            yield from rec(w, acc, left - 1)
            acc.pop()

    yield from rec(start, [], length)


def distinct(plays: Iterable[Lasso]) -> list:
    seen, out = set(), []
    for p in plays:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out
