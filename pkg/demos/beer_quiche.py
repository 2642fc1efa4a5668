"""Compare the two pooling outcomes of the beer-quiche game under every criterion."""

from sigref import comparison_table, enumerate_pure_equilibria, load_fixture, more_persuasive

game = load_fixture("beer_quiche")
classes = enumerate_pure_equilibria(game)
print(comparison_table(game, classes).to_text())

for a in classes:
    for b in classes:
        if a is b:
            continue
        w = more_persuasive(game, a, b)
        if w is not None:
            print(f"\n{a.label} beats {b.label}")
            print("  " + w.describe(game))
