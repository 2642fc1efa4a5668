"""Command-line front end.

    sigref solve   GAME [--mixed-support N] [--grid-step X]
    sigref refine  GAME --criterion {persuasive,intuitive,d1,gp,undefeated,all}
    sigref compare GAME
    sigref graph   GAME [--format dot|json|text]
    sigref spence  SPEC [--random-specs N --seed S]

GAME is a JSON file or the name of a bundled fixture.  Exit status is 0 on
success, 1 when ``--check`` finds a failed property, 2 on bad input.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ._exact import as_fraction, fmt
from .equilibria import (
    enumerate_mixed_equilibria,
    enumerate_pure_equilibria,
    is_sequential_equilibrium,
)
from .game import GameError
from .io import (
    NumericError,
    SchemaError,
    class_to_dict,
    dumps,
    encode,
    fixture_names,
    fixture_path,
    load_game,
)
from .persuasion import PersuasionCache, persuasion_digraph
from .refinements import comparison_table, d1_criterion, gp_criterion, intuitive_criterion, undefeated
from .spence import (
    SpenceSpec,
    canonical_grid,
    lex_max_outcome,
    random_spec,
    riley_outcome,
    suite_grid,
    verify_theorems,
)

COMMANDS = ("solve", "refine", "compare", "graph", "spence")
CRITERIA = ("persuasive", "intuitive", "d1", "gp", "undefeated", "all")


@dataclass
class RunConfig:
    command: str
    game: str
    criterion: str = "all"
    mixed_support: int | None = None
    grid_step: Fraction | None = None
    format: str = "json"
    out: str | None = None
    seed: int = 0
    check: bool = False
    random_specs: int = 0


class InputError(Exception):
    pass


def _load(name: str):
    p = Path(name)
    if not p.exists():
        cand = fixture_path(name)
        if not cand.exists():
            raise InputError(f"no such file or fixture: {name} (fixtures: {', '.join(fixture_names())})")
        p = cand
    return load_game(p)


def _game_and_classes(cfg: RunConfig):
    obj = _load(cfg.game)
    if isinstance(obj, SpenceSpec):
        step = cfg.grid_step if cfg.grid_step is not None else Fraction(1, 20)
        game = obj.to_game(canonical_grid(obj, step))
        return obj, game, enumerate_pure_equilibria(game)
    if cfg.mixed_support:
        return obj, obj, enumerate_mixed_equilibria(obj, cfg.mixed_support)
    return obj, obj, enumerate_pure_equilibria(obj)


def _pay(values) -> str:
    return "(" + ", ".join(fmt(v, 2) for v in values) + ")"


def _solve(cfg):
    _, game, classes = _game_and_classes(cfg)
    failed = [c.label for c in classes if not is_sequential_equilibrium(game, c.profile)]
    if cfg.format == "text":
        lines = [f"{game.name}: {len(classes)} equilibrium classes"]
        lines += [f"  {c.label}  {_pay(c.payoffs)}" for c in classes]
        text = "\n".join(lines) + "\n"
    else:
        text = dumps({"game": game.name, "seed": cfg.seed,
                      "classes": [class_to_dict(game, c) for c in classes]})
    return text, bool(failed)


def _refine(cfg):
    _, game, classes = _game_and_classes(cfg)
    names = ["intuitive", "d1", "gp", "undefeated", "persuasive"] if cfg.criterion == "all" else [cfg.criterion]
    cache = PersuasionCache(game)
    most = {id(c) for c in cache.most_persuasive(classes)} if "persuasive" in names else set()
    rows = []
    for c in classes:
        row = {"label": c.label, "payoffs": [encode(v) for v in c.payoffs]}
        for n in names:
            if n == "persuasive":
                beaten = [d.label for d in classes if d.payoffs != c.payoffs and cache.beats(c, d)]
                row[n] = {"pass": id(c) in most, "witness": {"more_persuasive_than": beaten}}
                continue
            fn = {"intuitive": intuitive_criterion, "d1": d1_criterion, "gp": gp_criterion}.get(n)
            v = fn(game, c) if fn else undefeated(game, c, classes)
            w = None if v.witness is None else {k: encode(x) if isinstance(x, Fraction) else x
                                                for k, x in v.witness.items()}
            row[n] = {"pass": v.passed, "witness": w}
        rows.append(row)
    if cfg.format == "text":
        lines = [f"{game.name}: " + ", ".join(names)]
        for r in rows:
            marks = " ".join(f"{n}={'pass' if r[n]['pass'] else 'fail'}" for n in names)
            lines.append(f"  {r['label']}  {marks}")
        return "\n".join(lines) + "\n", False
    return dumps({"game": game.name, "criteria": names, "verdicts": rows}), False


def _compare(cfg):
    _, game, classes = _game_and_classes(cfg)
    comp = comparison_table(game, classes)
    return (comp.to_text() if cfg.format == "text" else dumps(comp.to_dict())), False


def _graph(cfg):
    _, game, classes = _game_and_classes(cfg)
    g = persuasion_digraph(game, classes)
    if cfg.format == "dot":
        return g.to_dot(), False
    if cfg.format == "text":
        d = g.to_dict()
        lines = [f"{e['from']} -> {e['to']} via {e['message']}" for e in d["edges"]]
        lines.append("most persuasive: " + (", ".join(d["most_persuasive"]) or "none"))
        lines.append("least persuasive: " + (", ".join(d["least_persuasive"]) or "none"))
        return "\n".join(lines) + "\n", False
    return dumps(g.to_dict()), False


def _spence(cfg):
    if cfg.random_specs:
        rng = random.Random(cfg.seed)
        results = []
        for i in range(cfg.random_specs):
            spec = random_spec(rng)
            rep = verify_theorems(spec, suite_grid(spec))
            results.append({"values": [encode(v) for v in spec.values], "prior": [encode(p) for p in spec.prior],
                            "classes": rep.n_classes, "passed": rep.passed, "failures": rep.failures})
        failed = sum(not r["passed"] for r in results)
        if cfg.format == "text":
            text = f"seed {cfg.seed}: {len(results) - failed}/{len(results)} random specs pass\n"
        else:
            text = dumps({"seed": cfg.seed, "specs": results, "failed": failed})
        return text, failed > 0
    spec = _load(cfg.game)
    if not isinstance(spec, SpenceSpec):
        raise InputError("the spence command needs a monotone spec with a cost and no action model")
    step = cfg.grid_step if cfg.grid_step is not None else Fraction(1, 20)
    rep = verify_theorems(spec, canonical_grid(spec, step))
    riley = riley_outcome(spec)
    lex = lex_max_outcome(spec)
    if cfg.format == "text":
        lines = [f"{spec.name}: bounds [{fmt(spec.bounds[0])}, {fmt(spec.bounds[1])}]"]
        for name, out in (("riley", riley), ("lex max", lex)):
            lines.append(f"  {name}: messages {_pay(out.messages)} payoffs {_pay(out.payoffs)}")
        lines.append(f"  grid classes: {rep.n_classes}; most persuasive: {', '.join(rep.most_persuasive) or 'none'}")
        lines.append(f"  theorems hold: {rep.passed}")
        text = "\n".join(lines) + "\n"
    else:
        text = dumps({"spec": spec.name, "riley": riley.to_dict(spec), "lex_max": lex.to_dict(spec),
                      "report": rep.to_dict(spec)})
    return text, not rep.passed


HANDLERS = {"solve": _solve, "refine": _refine, "compare": _compare, "graph": _graph, "spence": _spence}


def run(cfg: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        text, failed = HANDLERS[cfg.command](cfg)
    except (SchemaError, NumericError, GameError, InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 1 if (cfg.check and failed) else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sigref", description="Refinement and persuasiveness analysis for signaling games.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("game", nargs="?", default="", help="game JSON file or bundled fixture name")
    p.add_argument("--criterion", choices=CRITERIA, default="all")
    p.add_argument("--mixed-support", type=int, default=None, metavar="N")
    p.add_argument("--grid-step", default=None, metavar="X")
    p.add_argument("--format", choices=("json", "text", "dot"), default=None)
    p.add_argument("--out", default=None, metavar="PATH")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--check", action="store_true", help="exit 1 when a verified property fails")
    p.add_argument("--random-specs", type=int, default=0, metavar="N",
                   help="spence: check N random specs drawn with --seed")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt_ = args.format or ("dot" if args.command == "graph" else "json")
    if fmt_ == "dot" and args.command != "graph":
        print("error: dot output is only available for graph", file=sys.stderr)
        return 2
    if not args.game and not (args.command == "spence" and args.random_specs):
        print("error: a game file or fixture name is required", file=sys.stderr)
        return 2
    try:
        step = None if args.grid_step is None else as_fraction(args.grid_step)
        if step is not None and step <= 0:
            raise ValueError("grid step must be positive")
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: bad --grid-step: {exc}", file=sys.stderr)
        return 2
    cfg = RunConfig(args.command, args.game, args.criterion, args.mixed_support, step, fmt_,
                    args.out, args.seed, args.check, args.random_specs)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
