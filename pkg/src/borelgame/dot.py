"""Graphviz export."""

from __future__ import annotations

import re
from typing import Optional

from .game import GameGraph, format_rational
from .labels import AlphaLabels

_BARE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _id(v: str) -> str:
    return v if _BARE.match(v) else '"' + v.replace('"', '\\"') + '"'


def export_dot(g: GameGraph, labels: Optional[AlphaLabels] = None, table=None) -> str:
    """Deterministic DOT text; edges used by any threat play are drawn in red."""
    highlighted = set()
    plans = []
    if table is not None:
        for (w, j), p in table.entries():
            highlighted.update(p.prefix + p.cycle)
            plans.append(f"  // threat({w}, {j}): {p}")
    lines = [f"digraph {_id(g.name) if g.name else 'game'} {{", "  rankdir=LR;"]
    lines.extend(plans)
    for v in g.vertices:
        if g.is_terminal(v):
            lines.append(f'  {_id(v)} [label="{v}|{g.terminals[v]}", shape=box];')
        else:
            parts = [v, str(g.controller[v])]
            if labels is not None and v in labels.label:
                parts.append(format_rational(labels[v]))
            lines.append(f'  {_id(v)} [label="{"|".join(parts)}"];')
    for v, a, w in g.edges():
        style = ', color=red, penwidth=2' if (v, a) in highlighted else ''
        lines.append(f'  {_id(v)} -> {_id(w)} [label="{a}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
