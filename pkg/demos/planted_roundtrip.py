"""Plant a rational solution, reduce to G1, lift it back and verify it."""

import random

from nashgadgets.analysis import check_NE
from nashgadgets.gadgets import build_G0, build_G1, lift_solution, project_profile
from nashgadgets.game import eval_payoff
from nashgadgets.suites import planted_pipeline, planted_system
from nashgadgets.systems import format_system

rng = random.Random(2024)
system, x = planted_system(rng, 2, 2)
print(format_system(system))
print("planted solution:", [str(v) for v in x])

bsys, w = planted_pipeline(system, x)
g1 = build_G1(build_G0(bsys))
print("G1 action counts:", g1.action_counts)

prof = lift_solution(bsys, w, w, g1)
print("equilibrium check:", check_NE(g1, prof).status)
print("payoffs:", ", ".join(str(v) for v in eval_payoff(g1, prof)))
print("projection recovers w:", project_profile(g1, prof) == (w, w))
