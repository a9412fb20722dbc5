"""Command-line entry point: ``borelgame {solve,value,spe,verify,folk,demo,export}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import scenarios
from .alpha import alpha_fixed_point, alpha_iterates
from .dot import export_dot
from .folk import (
    COUNTEREXAMPLE_CLAIMED_LABEL,
    COUNTEREXAMPLE_SPE_PAYOFF,
    BoundsError,
    counterexample_report,
    enumerate_viable,
    folk_crosscheck,
)
from .game import GameError, GameGraph, Payoff, Player, format_rational, load_game, parse_rational
from .generators import random_recursive_game
from .plays import evaluate_payoff, format_lasso, parse_lasso
from .spe import PLAN_MODES, build_profile, induced_play, profile_from_dict, profile_to_dict
from .verify import check_spe
from .zerosum import optimal_strategies, value_labels

log = logging.getLogger("borelgame")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
SEED_ENV = "BORELGAME_SEED"

# (description, representative lasso, expected payoff)
COUNTEREXAMPLE_ROWS = (
    ("b recurs for neither player", "(p1 -a-> p2 -a->)*", Payoff(Fraction(2), Fraction(2))),
    ("b recurs only for player 2", "(p1 -a-> p2 -b->)*", Payoff(Fraction(2), Fraction(1))),
    ("b recurs only for player 1", "(p1 -b-> p2 -a->)*", Payoff(Fraction(1), Fraction(2))),
    ("b recurs for both players", "(p1 -b-> p2 -b->)*", Payoff(Fraction(0), Fraction(0))),
)


@dataclass
class RunConfig:
    command: str
    path: Optional[str] = None
    flags: dict = field(default_factory=dict)


class InputError(Exception):
    pass


def read_game(source: str) -> GameGraph:
    path = Path(source)
    if path.is_file():
        return load_game(path.read_text())
    try:
        return scenarios.load(source)
    except KeyError:
        raise InputError(f"no such file or bundled scenario: {source}") from None


def _warn_lsc(g: GameGraph) -> None:
    if not g.lsc_certified:
        print(
            "warning: game is not lsc-certified; solver guarantees do not apply to it",
            file=sys.stderr,
        )


def _emit_json(doc: dict, target: Optional[str]) -> None:
    if target is None:
        return
    text = json.dumps(doc, indent=2, sort_keys=False)
    if target == "-":
        print(text)
    else:
        Path(target).write_text(text + "\n")


def _labels_doc(a) -> dict:
    return {"index": a.index, "labels": a.as_strings()}


# -- commands ------------------------------------------------------------------


def cmd_solve(g: GameGraph, args) -> int:
    _warn_lsc(g)
    iterates = alpha_iterates(g)
    for a, rows in iterates:
        print(f"iteration {a.index} -> {a.index + 1}")
        print(f"  {'vertex':<8} {'old':>5} {'new':>5}  {'action':<8} witness")
        for r in rows:
            print(
                f"  {r.vertex:<8} {format_rational(r.old):>5} {format_rational(r.new):>5}  "
                f"{r.action:<8} {format_lasso(r.witness)}"
            )
    a_star = iterates[-1][0]
    print(f"k* = {a_star.index}")
    print("alpha* = " + ", ".join(f"{v}:{q}" for v, q in a_star.as_strings().items()))
    _emit_json(
        {
            "iterations": [_labels_doc(a) for a, _ in iterates],
            "k_star": a_star.index,
            "alpha_star": a_star.as_strings(),
        },
        args.json,
    )
    return EXIT_OK


def cmd_value(g: GameGraph, args) -> int:
    _warn_lsc(g)
    player = Player.parse(args.player)
    labels = value_labels(g, player)
    maxi, mini = optimal_strategies(g, labels)
    print(f"zero-sum values for {player} (maximizer {player}, minimizer {player.opponent})")
    for v in g.vertices:
        move = maxi.choice.get(v) or mini.choice.get(v) or "-"
        print(f"  {v:<8} {format_rational(labels[v]):>5}  {move}")
    _emit_json(
        {
            "player": str(player),
            "values": {v: format_rational(q) for v, q in labels.value.items()},
            "maximizer": dict(maxi.choice),
            "minimizer": dict(mini.choice),
        },
        args.json,
    )
    return EXIT_OK


def _profile(g: GameGraph, args):
    if getattr(args, "profile", None):
        try:
            doc = json.loads(Path(args.profile).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read profile: {exc}") from None
        return profile_from_dict(g, doc)
    a_star, _ = alpha_fixed_point(g)
    return build_profile(g, a_star, plan=args.plan)


def cmd_spe(g: GameGraph, args) -> int:
    _warn_lsc(g)
    profile = _profile(g, args)
    text = json.dumps(profile_to_dict(profile), indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_verify(g: GameGraph, args) -> int:
    _warn_lsc(g)
    profile = _profile(g, args)
    try:
        eps = parse_rational(args.epsilon)
    except GameError as exc:
        raise InputError(f"--epsilon: {exc}") from None
    if eps < 0:
        raise InputError("--epsilon must be non-negative")
    report = check_spe(g, profile, eps, strict_memory=args.strict_memory)
    print(report.format_table())
    _emit_json(report.to_dict(), args.json)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_folk(g: GameGraph, args) -> int:
    _warn_lsc(g)
    a_star, _ = alpha_fixed_point(g)
    start = args.start or g.root
    viable = enumerate_viable(g, a_star, start, args.max_prefix, args.max_cycle)
    print(f"viable plays from {start} (prefix <= {args.max_prefix}, cycle <= {args.max_cycle}):")
    for p, x in viable.plays:
        print(f"  {format_lasso(p):<50} {x}")
    doc: dict = {"plays": [{"play": format_lasso(p), "payoff": str(x)} for p, x in viable.plays]}
    status = EXIT_OK
    if args.oracle:
        rep = folk_crosscheck(g)
        print(f"oracle cross-check: {'match' if rep.match else 'MISMATCH'}")
        for p in sorted(rep.oracle_only, key=str):
            print(f"  only in oracle: {p}")
        for p in sorted(rep.viable_only, key=str):
            print(f"  only viable:    {p}")
        doc["crosscheck"] = rep.to_dict()
        status = EXIT_OK if rep.match else EXIT_FAIL
    _emit_json(doc, args.json)
    return status


def cmd_export(g: GameGraph, args) -> int:
    labels = table = None
    if g.lsc_certified:
        a_star, _ = alpha_fixed_point(g)
        if not args.no_labels:
            labels = a_star
        if not args.no_threats:
            table = build_profile(g, a_star).table
    else:
        _warn_lsc(g)
    text = export_dot(g, labels, table)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def demo_counterexample() -> int:
    g = scenarios.load("counterexample")
    print("counterexample: alternating a/b game with a tail-table payoff")
    print(f"lsc_certified = {g.lsc_certified}")
    _warn_lsc(g)
    ok = True
    print(f"  {'recurring b':<28} {'lasso':<24} {'evaluated':>9} {'table':>7}")
    for text, lasso, expected in COUNTEREXAMPLE_ROWS:
        got = evaluate_payoff(g, parse_lasso(g, lasso))
        ok &= got == expected
        print(f"  {text:<28} {lasso:<24} {str(got):>9} {str(expected):>7}  {'ok' if got == expected else 'MISMATCH'}")
    shifted = "p1 -b-> p2 -b-> (p1 -a-> p2 -a->)*"
    print(f"  prefix is irrelevant: {shifted} -> {evaluate_payoff(g, parse_lasso(g, shifted))}")
    print(f"stated unique subgame-perfect equilibrium payoff: {COUNTEREXAMPLE_SPE_PAYOFF}")
    print(f"stated label at every history: {COUNTEREXAMPLE_CLAIMED_LABEL}")
    rep = counterexample_report(g)
    print("plays viable under the stated labels (prefix <= 2, cycle <= 2):")
    for p in sorted(rep.common | rep.viable_only, key=str):
        tag = "equilibrium payoff" if p in rep.common else "viable, not an equilibrium play"
        print(f"  {format_lasso(p):<40} {evaluate_payoff(g, p)}  {tag}")
    print(f"viable set equals equilibrium plays: {rep.match}")
    print("note: " + rep.note + "; the folk cross-check is reported here, not relied on")
    return EXIT_OK if ok else EXIT_FAIL


def demo_g1() -> int:
    g = scenarios.load("g1")
    a_star, k = alpha_fixed_point(g)
    print(f"g1: k* = {k}, alpha* = {a_star.as_strings()}")
    profile = build_profile(g, a_star)
    for (w, j), p in profile.table.entries():
        print(f"  threat({w}, punish {j}) = {p}   {evaluate_payoff(g, p)}")
    play = induced_play(g, profile, g.root)
    print(f"on-path from {g.root}: {play}  payoff {evaluate_payoff(g, play)}")
    report = check_spe(g, profile)
    print(report.format_table())
    return EXIT_OK if report.passed else EXIT_FAIL


def demo_fuzz(seed: int, count: int) -> int:
    rng = random.Random(seed)
    failed = 0
    worst_k = 0
    for n in range(count):
        g = random_recursive_game(rng)
        a_star, k = alpha_fixed_point(g)
        worst_k = max(worst_k, k)
        report = check_spe(g, build_profile(g, a_star))
        if not report.passed:
            failed += 1
            print(f"game {n}: verification FAILED")
    print(f"seed {seed}: {count} random games, {failed} failures, largest k* = {worst_k}")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_demo(args) -> int:
    name = args.name
    if name == "list":
        print("demos: g1, counterexample, fuzz")
        print("bundled scenarios: " + ", ".join(scenarios.names()))
        return EXIT_OK
    if name == "g1":
        return demo_g1()
    if name == "counterexample":
        return demo_counterexample()
    if name == "fuzz":
        seed = args.seed
        if os.environ.get(SEED_ENV):
            seed = int(os.environ[SEED_ENV])
        return demo_fuzz(seed, args.count)
    raise InputError(f"unknown demo {name!r}")


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="borelgame", description="Subgame-perfect equilibria of games on graphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def game_cmd(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("file", help="game file, or the name of a bundled scenario")
        return p

    p = game_cmd("solve", "print the label iteration and its fixed point")
    p.add_argument("--json", metavar="PATH", help="also write a JSON report ('-' for stdout)")

    p = game_cmd("value", "zero-sum values and optimal strategies for one player")
    p.add_argument("--player", required=True, help="1, 2, P1 or P2")
    p.add_argument("--json", metavar="PATH")

    p = game_cmd("spe", "emit the equilibrium profile document")
    p.add_argument("--plan", choices=PLAN_MODES, default="root-threat")
    p.add_argument("-o", "--output", metavar="PATH")

    p = game_cmd("verify", "check a profile for subgame perfection")
    p.add_argument("--profile", metavar="PATH", help="profile document (default: construct one)")
    p.add_argument("--plan", choices=PLAN_MODES, default="root-threat")
    p.add_argument("--epsilon", default="0")
    p.add_argument("--strict-memory", action="store_true", help="check every reachable memory state")
    p.add_argument("--json", metavar="PATH")

    p = game_cmd("folk", "enumerate viable plays, optionally cross-checked against the SPE oracle")
    p.add_argument("--max-prefix", type=int, required=True)
    p.add_argument("--max-cycle", type=int, required=True)
    p.add_argument("--start", help="start vertex (default: root)")
    p.add_argument("--oracle", action="store_true", help="cross-check against the finite-horizon oracle")
    p.add_argument("--json", metavar="PATH")

    p = game_cmd("export", "write a Graphviz DOT rendering")
    p.add_argument("--no-labels", action="store_true")
    p.add_argument("--no-threats", action="store_true")
    p.add_argument("-o", "--output", metavar="PATH")

    p = sub.add_parser("demo", help="bundled demonstrations")
    p.add_argument("name", choices=("g1", "counterexample", "fuzz", "list"))
    p.add_argument("--seed", type=int, default=0, help=f"fuzz seed (overridden by ${SEED_ENV})")
    p.add_argument("--count", type=int, default=50)
    return parser


COMMANDS = {
    "solve": cmd_solve,
    "value": cmd_value,
    "spe": cmd_spe,
    "verify": cmd_verify,
    "folk": cmd_folk,
    "export": cmd_export,
}


def run(config: RunConfig) -> int:
    args = argparse.Namespace(**config.flags)
    if config.command == "demo":
        return cmd_demo(args)
    g = read_game(config.path)
    return COMMANDS[config.command](g, args)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "file")}
    config = RunConfig(args.command, getattr(args, "file", None), flags)
    try:
        return run(config)
    except (InputError, GameError, BoundsError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
