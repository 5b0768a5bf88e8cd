"""Solve the H5 gadget and print its unique equilibrium in Q(sqrt 6)."""

from nashgadgets.analysis import find_equilibria
from nashgadgets.gadgets import build_H
from nashgadgets.quadfield import to_float

h5 = build_H("H5")
for eq in find_equilibria(h5):
    print("flag:", eq.flag)
    for i, s in enumerate(eq.profile.strategies, 1):
        print(f"player {i}:", ", ".join(f"{v} (~{to_float(v):.6f})" for v in s))
    print("payoffs:", ", ".join(str(v) for v in eq.payoffs))
