"""Finite positional two-player games: representation, validation and loading.

A game is a finite directed graph. Decision vertices belong to one of two
players and carry an ordered list of labelled actions; terminal vertices
carry a payoff vector. Plays that never terminate are paid by an
``infinite rule``: either one constant vector, or (for demonstrations only)
a tail table keyed by which marked edges recur forever.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterator, Mapping, NamedTuple, Union

_INT64 = 2**63
_NAME_RE = re.compile(r"^[A-Za-z0-9_.:]+$")


class GameError(Exception):
    """Base class for errors raised by this package."""


class GameFormatError(GameError, ValueError):
    """The game document is malformed or inconsistent."""


class NotLSCError(GameError):
    """A solver was called on a game without a lower-semi-continuity certificate."""


class Player(enum.IntEnum):
    P1 = 1
    P2 = 2

    @property
    def opponent(self) -> "Player":
        return Player(3 - self.value)

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, text: Union[str, int, "Player"]) -> "Player":
        if isinstance(text, Player):
            return text
        key = str(text).strip().upper()
        if key in ("1", "P1"):
            return cls.P1
        if key in ("2", "P2"):
            return cls.P2
        raise ValueError(f"unknown player {text!r}")


def opponent(player: Player) -> Player:
    return player.opponent


class Payoff(NamedTuple):
    u1: Fraction
    u2: Fraction

    def of(self, player: Player) -> Fraction:
        return self.u1 if player is Player.P1 else self.u2

    def dominates(self, other: "Payoff") -> bool:
        return self.u1 >= other.u1 and self.u2 >= other.u2

    def __str__(self) -> str:
        return f"({format_rational(self.u1)},{format_rational(self.u2)})"


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(value: Any) -> Fraction:
    """Parse an integer or a ``"p/q"`` string in lowest terms."""
    if isinstance(value, bool):
        raise GameFormatError(f"malformed rational {value!r}")
    if isinstance(value, int):
        q = Fraction(value)
    elif isinstance(value, str):
        m = re.fullmatch(r"\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?", value)
        if not m:
            raise GameFormatError(f"malformed rational {value!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise GameFormatError(f"malformed rational {value!r}: zero denominator")
        q = Fraction(num, den)
        if q.numerator != num or q.denominator != den:
            raise GameFormatError(f"malformed rational {value!r}: not in lowest terms")
    else:
        raise GameFormatError(f"malformed rational {value!r}")
    if abs(q.numerator) >= _INT64 or q.denominator >= _INT64:
        raise GameFormatError(f"malformed rational {value!r}: exceeds 64-bit range")
    return q


@dataclass(frozen=True)
class ConstantRule:
    payoff: Payoff


@dataclass(frozen=True)
class TailTable:
    """Payoff of a non-terminating play by the set of marks recurring in its cycle.

    ``marks`` maps a mark name to the edges ``(vertex, action)`` carrying it;
    ``rows`` maps each subset of mark names to a payoff vector.
    """

    marks: Mapping[str, frozenset]
    rows: Mapping[frozenset, Payoff]

    def classify(self, edges: frozenset) -> frozenset:
        return frozenset(name for name, marked in self.marks.items() if marked & edges)

    def payoff(self, edges: frozenset) -> Payoff:
        return self.rows[self.classify(edges)]


InfiniteRule = Union[ConstantRule, TailTable]


@dataclass(frozen=True, eq=False)
class GameGraph:
    """Immutable finite game graph.

    ``vertices`` keeps declaration order, which fixes every deterministic
    tie-break in the solvers.
    """

    vertices: tuple
    controller: Mapping[str, Player]
    actions: Mapping[str, tuple]
    terminals: Mapping[str, Payoff]
    infinite_rule: InfiniteRule
    root: str
    name: str = ""
    _succ: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise GameFormatError(f"duplicate vertex id {v!r}")
            seen.add(v)
            if v in self.terminals:
                if v in self.controller or self.actions.get(v):
                    raise GameFormatError(f"terminal with actions: {v!r}")
            else:
                if v not in self.controller:
                    raise GameFormatError(f"vertex {v!r} has neither controller nor terminal payoff")
                acts = self.actions.get(v, ())
                if not acts:
                    raise GameFormatError(f"non-terminal without actions: {v!r}")
                labels = set()
                for label, target in acts:
                    if label in labels:
                        raise GameFormatError(f"duplicate action {label!r} at {v!r}")
                    labels.add(label)
                    if target not in seen and target not in self.vertices:
                        raise GameFormatError(f"unknown vertex reference {target!r} (edge {v} -{label}->)")
                self._succ[v] = dict(acts)
        if self.root not in seen:
            raise GameFormatError(f"unknown vertex reference {self.root!r} (root)")
        if isinstance(self.infinite_rule, TailTable):
            for name, edges in self.infinite_rule.marks.items():
                for v, label in edges:
                    if v not in self._succ or label not in self._succ[v]:
                        raise GameFormatError(f"tail table mark {name!r} names unknown edge {v} -{label}->")

    # -- structure -------------------------------------------------------

    def is_terminal(self, v: str) -> bool:
        return v in self.terminals

    @cached_property
    def decision_vertices(self) -> tuple:
        return tuple(v for v in self.vertices if v not in self.terminals)

    @cached_property
    def order(self) -> dict:
        return {v: k for k, v in enumerate(self.vertices)}

    def successor(self, v: str, label: str) -> str:
        try:
            return self._succ[v][label]
        except KeyError:
            raise GameError(f"action {label!r} is not available at {v!r}") from None

    def has_action(self, v: str, label: str) -> bool:
        return label in self._succ.get(v, ())

    def action_index(self, v: str, label: str) -> int:
        for k, (lab, _) in enumerate(self.actions[v]):
            if lab == label:
                return k
        raise GameError(f"action {label!r} is not available at {v!r}")

    def successors(self, v: str) -> tuple:
        return tuple(t for _, t in self.actions.get(v, ()))

    def edges(self) -> Iterator[tuple]:
        for v in self.decision_vertices:
            for label, target in self.actions[v]:
                yield v, label, target

    def is_acyclic(self) -> bool:
        state: dict = {}

        def visit(v: str) -> bool:
            state[v] = 1
            for w in self.successors(v):
                s = state.get(w)
                if s == 1 or (s is None and not visit(w)):
                    return False
            state[v] = 2
            return True

        return all(state.get(v) == 2 or visit(v) for v in self.vertices)

    def depth(self) -> int:
        """Longest number of moves from the root (acyclic games only)."""
        memo: dict = {}

        def d(v: str) -> int:
            if v not in memo:
                memo[v] = 0 if self.is_terminal(v) else 1 + max(d(w) for w in self.successors(v))
            return memo[v]

        return d(self.root)

    def max_branching(self) -> int:
        return max((len(self.actions[v]) for v in self.decision_vertices), default=0)

    # -- payoffs ---------------------------------------------------------

    @property
    def infinite_payoff(self) -> Payoff:
        if not isinstance(self.infinite_rule, ConstantRule):
            raise NotLSCError("game uses a tail table for non-terminating plays")
        return self.infinite_rule.payoff

    @cached_property
    def lsc_certified(self) -> bool:
        rule = self.infinite_rule
        if not isinstance(rule, ConstantRule):
            return False
        return all(x.dominates(rule.payoff) for x in self.terminals.values())

    @cached_property
    def payoff_values(self) -> frozenset:
        vals = set()
        for x in self.terminals.values():
            vals.update(x)
        if isinstance(self.infinite_rule, ConstantRule):
            vals.update(self.infinite_rule.payoff)
        else:
            for x in self.infinite_rule.rows.values():
                vals.update(x)
        return frozenset(vals)

    def require_lsc(self) -> None:
        if not self.lsc_certified:
            raise NotLSCError(
                "game is not lsc-certified: the infinite payoff must be a constant vector "
                "weakly dominated by every terminal payoff"
            )


def controller_at(g: GameGraph, v: str) -> Player:
    if g.is_terminal(v):
        raise GameError(f"{v!r} is a terminal vertex and has no mover")
    try:
        return g.controller[v]
    except KeyError:
        raise GameError(f"unknown vertex {v!r}") from None


# -- loading ---------------------------------------------------------------

_TOP_FIELDS = {"players", "root", "infinite_payoff", "vertices", "name", "description"}


def _check_fields(obj: Any, allowed: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise GameFormatError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise GameFormatError(f"{where}: unknown field(s) {sorted(extra)}")


def _check_name(name: Any, what: str) -> str:
    if not isinstance(name, str) or not _NAME_RE.match(name):
        raise GameFormatError(f"invalid {what} {name!r} (use letters, digits, '_', '.', ':')")
    return name


def _payoff(value: Any, where: str) -> Payoff:
    if not isinstance(value, list) or len(value) != 2:
        raise GameFormatError(f"{where}: payoff must be a 2-array of rationals")
    return Payoff(parse_rational(value[0]), parse_rational(value[1]))


def _tail_table(table_doc: Any) -> TailTable:
    _check_fields(table_doc, {"marks", "rows"}, "tail_table")
    marks_doc = table_doc.get("marks")
    if not isinstance(marks_doc, dict) or not marks_doc:
        raise GameFormatError("tail_table: 'marks' must be a non-empty object")
    marks = {}
    for name, edges in marks_doc.items():
        if not isinstance(edges, list):
            raise GameFormatError(f"tail_table mark {name!r}: expected a list of [vertex, action]")
        pairs = set()
        for e in edges:
            if not (isinstance(e, list) and len(e) == 2):
                raise GameFormatError(f"tail_table mark {name!r}: bad edge {e!r}")
            pairs.add((str(e[0]), str(e[1])))
        marks[name] = frozenset(pairs)
    rows = {}
    for row in table_doc.get("rows", []):
        _check_fields(row, {"recurring", "payoff"}, "tail_table row")
        key = frozenset(row.get("recurring", []))
        if not key <= set(marks):
            raise GameFormatError(f"tail_table row names unknown marks {sorted(key - set(marks))}")
        if key in rows:
            raise GameFormatError(f"tail_table row {sorted(key)} given twice")
        rows[key] = _payoff(row.get("payoff"), "tail_table row")
    if len(rows) != 2 ** len(marks):
        raise GameFormatError("tail_table rows must cover every subset of marks")
    return TailTable(marks=marks, rows=rows)


def game_from_dict(doc: Any) -> GameGraph:
    _check_fields(doc, _TOP_FIELDS, "game")
    for required in ("root", "infinite_payoff", "vertices"):
        if required not in doc:
            raise GameFormatError(f"game: missing field {required!r}")
    if doc.get("players", ["P1", "P2"]) != ["P1", "P2"]:
        raise GameFormatError("game: 'players' must be [\"P1\", \"P2\"]")

    inf = doc["infinite_payoff"]
    if isinstance(inf, dict):
        _check_fields(inf, {"tail_table"}, "infinite_payoff")
        rule: InfiniteRule = _tail_table(inf.get("tail_table"))
    else:
        rule = ConstantRule(_payoff(inf, "infinite_payoff"))

    if not isinstance(doc["vertices"], list) or not doc["vertices"]:
        raise GameFormatError("game: 'vertices' must be a non-empty array")
    order, controller, actions, terminals = [], {}, {}, {}
    for entry in doc["vertices"]:
        if not isinstance(entry, dict):
            raise GameFormatError("vertex: expected an object")
        vid = _check_name(entry.get("id"), "vertex id")
        if vid in order:
            raise GameFormatError(f"duplicate vertex id {vid!r}")
        order.append(vid)
        if "terminal" in entry:
            if "actions" in entry or "controller" in entry:
                raise GameFormatError(f"terminal with actions: {vid!r}")
            _check_fields(entry, {"id", "terminal"}, f"vertex {vid}")
            terminals[vid] = _payoff(entry["terminal"], f"vertex {vid}")
            continue
        _check_fields(entry, {"id", "controller", "actions"}, f"vertex {vid}")
        ctrl = entry.get("controller")
        if ctrl not in (1, 2):
            raise GameFormatError(f"vertex {vid}: controller must be 1 or 2")
        controller[vid] = Player(ctrl)
        acts = []
        for a in entry.get("actions") or []:
            _check_fields(a, {"label", "to"}, f"action at {vid}")
            acts.append((_check_name(a.get("label"), "action label"), _check_name(a.get("to"), "vertex id")))
        if not acts:
            raise GameFormatError(f"non-terminal without actions: {vid!r}")
        actions[vid] = tuple(acts)

    known = set(order)
    for vid, acts in actions.items():
        for label, target in acts:
            if target not in known:
                raise GameFormatError(f"unknown vertex reference {target!r} (edge {vid} -{label}->)")
    root = _check_name(doc["root"], "root")
    if root not in known:
        raise GameFormatError(f"unknown vertex reference {root!r} (root)")
    return GameGraph(
        vertices=tuple(order),
        controller=controller,
        actions=actions,
        terminals=terminals,
        infinite_rule=rule,
        root=root,
        name=str(doc.get("name", "")),
    )


def load_game(text: str) -> GameGraph:
    """Parse a game-file document (JSON text) into a validated ``GameGraph``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFormatError(f"parse error: {exc}") from None
    return game_from_dict(doc)


def game_to_dict(g: GameGraph) -> dict:
    def pay(x: Payoff) -> list:
        return [_json_rational(x.u1), _json_rational(x.u2)]

    if isinstance(g.infinite_rule, ConstantRule):
        inf: Any = pay(g.infinite_rule.payoff)
    else:
        table = g.infinite_rule
        inf = {
            "tail_table": {
                "marks": {k: sorted([list(e) for e in v]) for k, v in table.marks.items()},
                "rows": [
                    {"recurring": sorted(k), "payoff": pay(x)}
                    for k, x in sorted(table.rows.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
                ],
            }
        }
    vertices = []
    for v in g.vertices:
        if g.is_terminal(v):
            vertices.append({"id": v, "terminal": pay(g.terminals[v])})
        else:
            vertices.append(
                {
                    "id": v,
                    "controller": int(g.controller[v]),
                    "actions": [{"label": a, "to": t} for a, t in g.actions[v]],
                }
            )
    doc: dict = {"players": ["P1", "P2"], "root": g.root, "infinite_payoff": inf, "vertices": vertices}
    if g.name:
        doc["name"] = g.name
    return doc


def _json_rational(q: Fraction) -> Any:
    return q.numerator if q.denominator == 1 else format_rational(q)


def dump_game(g: GameGraph) -> str:
    return json.dumps(game_to_dict(g), indent=2)
