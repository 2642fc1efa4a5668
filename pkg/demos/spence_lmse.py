"""Three-type education signaling: the lexicographically best separating outcome.

Builds the canonical message grid, enumerates pure classes, and shows that the
lex-max outcome is the only one no other class out-persuades.
"""

import sys

from sigref import (
    enumerate_pure_equilibria,
    lex_max_outcome,
    load_fixture,
    persuasion_digraph,
    riley_outcome,
    verify_theorems,
)
from sigref._exact import fmt
from sigref.spence import canonical_grid


def row(name, out):
    msgs = ", ".join(fmt(m, 2) for m in out.messages)
    pays = ", ".join(fmt(u, 2) for u in out.payoffs)
    print(f"{name:<8} messages ({msgs})  payoffs ({pays})")


spec = load_fixture(sys.argv[1] if len(sys.argv) > 1 else "spence3")
row("riley", riley_outcome(spec))
row("lex-max", lex_max_outcome(spec))

grid = canonical_grid(spec, None)
game = spec.to_game(grid)
classes = enumerate_pure_equilibria(game)
print(f"\n{len(classes)} pure classes on a {game.n_messages}-point grid")

# the full digraph is quadratic in the class count; the report short-circuits
report = verify_theorems(spec, grid)
print("most persuasive:", report.most_persuasive, "passed:", report.passed)

small = [c for c in classes if c.payoffs in {report.lex_max.payoffs, riley_outcome(spec).payoffs}]
print()
print(persuasion_digraph(game, small).to_dot())
