"""Bounded enumeration of viable plays and the cross-check against the SPE oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .alpha import alpha_fixed_point, is_viable
from .game import GameError, GameGraph, Payoff
from .labels import AlphaLabels
from .plays import Lasso, evaluate_payoff, format_lasso, is_canonical, iter_walks, sort_key
from .verify import finite_horizon_spe

MAX_BOUND = 12


class BoundsError(GameError):
    """Enumeration bounds above the configured cap."""


@dataclass(frozen=True)
class ViablePlaySet:
    plays: tuple  # of (Lasso, Payoff)
    bounds: tuple  # (max_prefix, max_cycle)

    def lassos(self) -> list:
        return [p for p, _ in self.plays]

    def __contains__(self, p: Lasso) -> bool:
        return any(p == q for q, _ in self.plays)


def enumerate_lassos(g: GameGraph, start: str, max_prefix: int, max_cycle: int) -> list:
    """Every canonical lasso from ``start`` within the bounds (steps, not vertices)."""
    out = []
    for n in range(max_prefix + 1):
        for prefix, v in iter_walks(g, start, n):
            if g.is_terminal(v):
                out.append(Lasso(prefix, (), v))
                continue
            for c in range(1, max_cycle + 1):
                for loop, end in iter_walks(g, v, c):
                    if end != v:
                        continue
                    p = Lasso(prefix, loop, None)
                    if is_canonical(p):
                        out.append(p)
    return out


def enumerate_viable(
    g: GameGraph, a_star: AlphaLabels, start: str, max_prefix: int, max_cycle: int, cap: int = MAX_BOUND
) -> ViablePlaySet:
    """All canonical viable lassos from ``start`` within the bounds, shortest first."""
    if max_prefix < 0 or max_cycle < 0:
        raise BoundsError("bounds must be non-negative")
    if max_prefix > cap or max_cycle > cap:
        raise BoundsError(f"bounds ({max_prefix}, {max_cycle}) exceed the cap {cap}")
    plays = [p for p in enumerate_lassos(g, start, max_prefix, max_cycle) if is_viable(g, a_star, p, check=False)]
    plays.sort(key=lambda p: sort_key(g, p))
    return ViablePlaySet(tuple((p, evaluate_payoff(g, p, check=False)) for p in plays), (max_prefix, max_cycle))


@dataclass(frozen=True)
class FolkReport:
    oracle_only: frozenset
    viable_only: frozenset
    common: frozenset
    note: str = ""

    @property
    def match(self) -> bool:
        return not self.oracle_only and not self.viable_only

    def to_dict(self) -> dict:
        def fmt(s):
            return sorted(format_lasso(p) for p in s)

        return {
            "match": self.match,
            "oracle_only": fmt(self.oracle_only),
            "viable_only": fmt(self.viable_only),
            "common": fmt(self.common),
            "note": self.note,
        }


def folk_crosscheck(
    g: GameGraph, max_depth: int = 6, max_branching: int = 3, a_star: Optional[AlphaLabels] = None
) -> FolkReport:
    """Compare the exhaustive SPE play set with the viable plays at the root."""
    oracle = finite_horizon_spe(g, max_depth=max_depth, max_branching=max_branching)
    if a_star is None:
        a_star, _ = alpha_fixed_point(g)
    depth = g.depth()
    viable = set(enumerate_viable(g, a_star, g.root, depth, 0, cap=max(depth, MAX_BOUND)).lassos())
    spe = set(oracle.plays)
    return FolkReport(frozenset(spe - viable), frozenset(viable - spe), frozenset(spe & viable))


# -- the tail-table counterexample ------------------------------------------

#: Values stated for the counterexample: the unique equilibrium payoff and
#: the claimed label at every history.
COUNTEREXAMPLE_SPE_PAYOFF = Payoff(2, 2)
COUNTEREXAMPLE_CLAIMED_LABEL = 1


def counterexample_report(g: GameGraph, max_prefix: int = 2, max_cycle: int = 2) -> FolkReport:
    """Plays viable under the claimed constant labels versus the unique equilibrium payoff.

    The game is not lower-semi-continuous, so neither side is computed by
    the solvers: the labels and the equilibrium payoff are the stated ones,
    and the comparison only exhibits plays that are viable yet cannot be
    equilibrium plays.
    """
    claimed = AlphaLabels.constant(g.decision_vertices, COUNTEREXAMPLE_CLAIMED_LABEL)
    viable = enumerate_viable(g, claimed, g.root, max_prefix, max_cycle)
    not_spe = frozenset(p for p, x in viable.plays if x != COUNTEREXAMPLE_SPE_PAYOFF)
    spe = frozenset(p for p, x in viable.plays if x == COUNTEREXAMPLE_SPE_PAYOFF)
    return FolkReport(
        frozenset(),
        not_spe,
        spe,
        note="payoffs are not lower-semi-continuous; the viable-play characterisation is not claimed sound here",
    )
