"""Strong and Pareto checks on the H1, H3 and H4 gadgets."""

from nashgadgets.analysis import CoalitionQuery, check_pareto, check_strong, coalition_feasible
from nashgadgets.gadgets import build_H
from nashgadgets.game import MixedProfile

h0, h1 = build_H("H1", u=0), build_H("H1", u=1)
ggg = MixedProfile.pure(h0, ["G"] * 3)
bots = MixedProfile.pure(h1, ["⊥"] * 3)

v = coalition_feasible(h0, ggg, CoalitionQuery({1, 2}))
print("H1(0) GGG, players 1 and 2 deviate:", v.status, {j: str(g) for j, g in v.witness["gains"].items()})
print("H1(1) ⊥⊥⊥ strong:", check_strong(h1, bots).status)

for name in ("H3", "H4"):
    g = build_H(name)
    print(f"{name} GGG Pareto optimal:", check_pareto(g, MixedProfile.pure(g, ["G"] * 3)).status)
