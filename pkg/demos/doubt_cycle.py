"""A game where persuasion is cyclic, so no class is most persuasive."""

from sigref import enumerate_pure_equilibria, load_fixture, persuasion_digraph

game = load_fixture("reasonable_doubt")
classes = enumerate_pure_equilibria(game)
dg = persuasion_digraph(game, classes)

for c in classes:
    print(c.label, tuple(str(u) for u in c.payoffs))
print("\nedges:")
for a, b in sorted(dg.edges):
    print(f"  {classes[a].label} -> {classes[b].label}")
print("cycles:", [[classes[i].label for i in cyc] for cyc in dg.cycles()])
print("most persuasive:", [c.label for c in dg.most_persuasive] or "none")
print("least persuasive:", [c.label for c in dg.least_persuasive])
