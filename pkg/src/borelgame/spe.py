"""Threat plays and the plan-following strategy profile.

Both players run one shared automaton whose memory is the current plan (a
lasso) and a position on it. Whoever moves follows the plan; when the mover
takes any other action the memory is reset to the threat play at the vertex
reached, chosen to minimise the payoff of the player who just deviated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .alpha import ViabilityError, viable_max_welfare, viable_witness
from .game import GameError, GameGraph, Payoff, Player, controller_at, format_rational
from .labels import AlphaLabels
from .plays import Lasso, check_lasso, evaluate_payoff, format_lasso, parse_lasso, run_automaton

PLAN_MODES = ("root-threat", "max-welfare")
PROFILE_FORMAT = "borelgame-profile/1"


def threat_play(g: GameGraph, a_star: AlphaLabels, w: str, punish: Optional[Player] = None) -> Lasso:
    """Viable play from ``w`` that is worst for ``punish``.

    ``punish`` defaults to the player not moving at ``w``.
    """
    if g.is_terminal(w):
        return Lasso.at_terminal(w)
    if punish is None:
        punish = controller_at(g, w).opponent
    wit = viable_witness(g, a_star, w, punish)
    if wit is None:
        raise ViabilityError(f"no viable play from {w!r}")
    return wit.play


@dataclass(frozen=True)
class ThreatTable:
    plans: Mapping[tuple, Lasso]

    def threat(self, w: str, punish: Player) -> Lasso:
        return self.plans[(w, punish)]

    def entries(self) -> list:
        return sorted(self.plans.items(), key=lambda kv: (kv[0][0], int(kv[0][1])))


@dataclass(frozen=True)
class Memory:
    plan: Lasso
    position: int = 0

    def __str__(self) -> str:
        return f"[{format_lasso(self.plan)} @ {self.position}]"


@dataclass(frozen=True, eq=False)
class StrategyProfile:
    game: GameGraph
    table: ThreatTable
    root_plan: Optional[Lasso] = None
    plan_mode: str = "root-threat"
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def threat(self, w: str, punish: Optional[Player] = None) -> Lasso:
        if self.game.is_terminal(w):
            return Lasso.at_terminal(w)
        if punish is None:
            punish = self.game.controller[w].opponent
        return self.table.threat(w, punish)

    def initial_memory(self, w: str) -> Memory:
        if w == self.game.root and self.root_plan is not None:
            return Memory(self.root_plan, 0)
        return Memory(self.threat(w), 0)

    @staticmethod
    def vertex(memory: Memory) -> str:
        return memory.plan.vertex_at(memory.position)

    @staticmethod
    def planned_action(memory: Memory) -> Optional[str]:
        step = memory.plan.step_at(memory.position)
        return None if step is None else step[1]

    def after(self, memory: Memory, action: str) -> Memory:
        """Memory once ``action`` has been played at the current vertex."""
        key = (memory, action)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        v = self.vertex(memory)
        target = self.game.successor(v, action)
        if action == self.planned_action(memory):
            nxt = Memory(memory.plan, memory.plan.advance(memory.position))
        else:
            nxt = Memory(self.threat(target, self.game.controller[v]), 0)
        self._cache[key] = nxt
        return nxt


def build_profile(g: GameGraph, a_star: AlphaLabels, plan: str = "root-threat") -> StrategyProfile:
    """Threat table for every decision vertex and both punished players."""
    if plan not in PLAN_MODES:
        raise ValueError(f"unknown plan mode {plan!r}; expected one of {PLAN_MODES}")
    plans = {}
    for w in g.decision_vertices:
        for j in Player:
            plans[(w, j)] = threat_play(g, a_star, w, j)
    root_plan = None
    if plan == "max-welfare" and not g.is_terminal(g.root):
        wit = viable_max_welfare(g, a_star, g.root)
        if wit is None:
            raise ViabilityError(f"no viable play from {g.root!r}")
        root_plan = wit.play
    return StrategyProfile(g, ThreatTable(plans), root_plan, plan)


def profile_step(profile: StrategyProfile, memory: Memory, observed_action: Optional[str] = None) -> tuple:
    """Prescribed action at the current vertex and the memory after the move.

    With ``observed_action`` omitted the prescribed action is played.
    """
    v = profile.vertex(memory)
    if profile.game.is_terminal(v):
        raise GameError(f"play has ended at terminal {v!r}")
    planned = profile.planned_action(memory)
    action = planned if observed_action is None else observed_action
    if not profile.game.has_action(v, action):
        raise GameError(f"action {action!r} is not available at {v!r}")
    return planned, profile.after(memory, action)


def induced_play(g: GameGraph, profile: StrategyProfile, start: str, memory: Optional[Memory] = None) -> Lasso:
    """The play when both players follow ``profile`` from ``start``."""
    if memory is None:
        memory = profile.initial_memory(start)
    if profile.vertex(memory) != start:
        raise GameError(f"memory {memory} is not at {start!r}")

    def step(m: Memory) -> tuple:
        a = profile.planned_action(m)
        return a, profile.after(m, a)

    return run_automaton(g, memory, step, profile.vertex)


# -- profile documents -------------------------------------------------------


def describe_automaton(profile: StrategyProfile) -> str:
    root_rule = (
        "at the root, start on the welfare-maximising viable plan"
        if profile.root_plan is not None
        else "start on threat(w, opponent of the mover at w)"
    )
    return (
        "memory = (plan, position); " + root_rule + "; the mover plays the plan's action and "
        "position advances; any other action by the mover at v leading to w' resets memory "
        "to (threat(w', controller of v), 0)"
    )


def profile_to_dict(profile: StrategyProfile) -> dict:
    g = profile.game
    root_play = induced_play(g, profile, g.root)
    pay = evaluate_payoff(g, root_play)
    doc = {
        "format": PROFILE_FORMAT,
        "plan_mode": profile.plan_mode,
        "threats": [
            {"vertex": w, "punish": str(j), "plan": format_lasso(p)} for (w, j), p in profile.table.entries()
        ],
        "automaton": describe_automaton(profile),
        "on_path": {
            "start": g.root,
            "play": format_lasso(root_play),
            "payoff": [format_rational(pay.u1), format_rational(pay.u2)],
        },
    }
    if profile.root_plan is not None:
        doc["root_plan"] = format_lasso(profile.root_plan)
    return doc


def profile_from_dict(g: GameGraph, doc: dict) -> StrategyProfile:
    if not isinstance(doc, dict) or doc.get("format") != PROFILE_FORMAT:
        raise GameError(f"not a profile document (expected format {PROFILE_FORMAT!r})")
    plans = {}
    for entry in doc.get("threats", []):
        w = entry["vertex"]
        j = Player.parse(entry["punish"])
        p = parse_lasso(g, entry["plan"])
        if p.start != w:
            raise GameError(f"threat plan for {w!r} starts at {p.start!r}")
        plans[(w, j)] = p
    missing = [(w, str(j)) for w in g.decision_vertices for j in Player if (w, j) not in plans]
    if missing:
        raise GameError(f"profile has no threat plan for {missing[:3]}")
    root_plan = None
    if "root_plan" in doc:
        root_plan = parse_lasso(g, doc["root_plan"])
        check_lasso(g, root_plan)
    return StrategyProfile(g, ThreatTable(plans), root_plan, doc.get("plan_mode", "root-threat"))


def on_path_payoff(g: GameGraph, profile: StrategyProfile, w: str) -> Payoff:
    return evaluate_payoff(g, induced_play(g, profile, w))
