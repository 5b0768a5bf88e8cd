import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nashgadgets.analysis import check_NE
from nashgadgets.gadgets import (
    BadParameter,
    NotASolution,
    build_G0,
    build_G1,
    build_G2,
    build_G3,
    build_G4,
    build_G5,
    build_gadget,
    build_H,
    lift_solution,
    project_profile,
)
from nashgadgets.game import MixedProfile, eval_payoff, is_zero_sum
from nashgadgets.suites import planted_pipeline, planted_system
from nashgadgets.systems import BilinearSystem, bilinearize_homogenize

ONE = BilinearSystem(2, (((1, 0), (0, -1)),))
HALF = [F(1, 2), F(1, 2)]


def cell(game, labels):
    idx = tuple(game.action_index(i, lab) for i, lab in enumerate(labels))
    return tuple(game.payoffs[idx])


def test_h1_cells():
    h = build_H("H1", u=0)
    assert cell(h, ["G", "G", "G"]) == (0, 0, 0)
    assert cell(h, ["⊥", "⊥", "⊥"]) == (-2, 1, 1)
    assert cell(h, ["G", "⊥", "G"]) == (1, 0, -1)
    assert cell(h, ["G", "⊥", "⊥"]) == (-4, 2, 2)
    assert cell(build_H("H1", u=3), ["G", "G", "G"]) == (6, -3, -3)


def test_h2_cells():
    h = build_H("H2", k=3)
    assert cell(h, ["*", "0", "2"])[1] == -1
    assert cell(h, ["*", "1", "1"]) == (0, 1, -1)
    assert cell(h, ["*", "0", "1"]) == (0, 0, 0)


def test_h5_cell():
    assert cell(build_H("H5"), ["1", "1", "1"]) == (-4, 2, 2)


@pytest.mark.parametrize("kw", [{"name": "H1", "u": -1}, {"name": "H2", "k": 1}, {"name": "H7"}])
def test_bad_parameters(kw):
    with pytest.raises(BadParameter):
        build_H(**kw)


def test_g0_cells_and_shape():
    g0 = build_G0(ONE)
    assert g0.action_counts == (2, 2, 2)
    assert cell(g0, ["(+,1)", "x1", "y1"]) == (2, -1, -1)
    assert cell(g0, ["(-,1)", "x1", "y1"]) == (-2, 1, 1)
    assert is_zero_sum(g0)


def direct_q(A, x, y):
    return sum(A[i][j] * x[i] * y[j] for i in range(len(x)) for j in range(len(y)))


def rand_simplex(rng, n):
    w = [F(rng.randint(0, 9)) for _ in range(n)]
    if not any(w):
        w[-1] = F(1)
    return [v / sum(w) for v in w]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_payoff_identity(seed):
    rng = random.Random(seed)
    s, _ = planted_system(rng, rng.randint(1, 3), rng.randint(1, 3))
    b = bilinearize_homogenize(s)
    g0 = build_G0(b)
    x, y = rand_simplex(rng, b.dim), rand_simplex(rng, b.dim)
    k = rng.randrange(b.num_equations)
    for sign, lab in ((1, f"(+,{k + 1})"), (-1, f"(-,{k + 1})")):
        a = g0.action_index(0, lab)
        p1 = [F(int(i == a)) for i in range(g0.action_counts[0])]
        u = eval_payoff(g0, MixedProfile([p1, x, y]))
        q = direct_q(b.matrices[k], x, y)
        assert u[0] / 2 == -u[1] == -u[2] == sign * q


def test_g1_cells():
    g1 = build_G1(build_G0(ONE))
    assert g1.action_counts == (3, 3, 3)
    assert cell(g1, ["⊥", "⊥", "⊥"]) == (-2, 1, 1)
    assert cell(g1, ["(+,1)", "⊥", "y2"]) == (1, 0, -1)
    assert cell(g1, ["(-,1)", "x2", "y1"]) == cell(build_G0(ONE), ["(-,1)", "x2", "y1"])


def test_g3_g4_cells():
    g0 = build_G0(ONE)
    assert cell(build_G4(g0), ["⊥", "⊥", "⊥"]) == (-1, -1, -1)
    g3 = build_G3(g0)
    assert cell(g3, ["⊥", "⊥", "⊥"]) == cell(build_H("H3", u=0), ["⊥", "⊥", "⊥"])


def test_g2_cells():
    g1 = build_G1(build_G0(ONE))
    g2 = build_G2(g1)
    assert g2.meta["k"] == "3"
    assert cell(g2, ["⊥", "(⊥,0)", "(⊥,0)"]) == (-2, 2, 0)
    assert cell(g2, ["⊥", "(⊥,0)", "(⊥,1)"]) == (-2, 1, 1)
    # partial ⊥ cells use H1 with (⊥,i) read as ⊥
    assert cell(g2, ["⊥", "(⊥,2)", "y1"]) == cell(build_H("H1"), ["⊥", "⊥", "G"])
    assert cell(g2, ["(+,1)", "(⊥,1)", "(⊥,2)"]) == cell(build_H("H1"), ["G", "⊥", "⊥"])


def test_g5_cells():
    g5 = build_G5(build_G1(build_G0(ONE)))
    assert cell(g5, ["(⊥,1)", "(⊥,1)", "(⊥,1)"]) == (F(-8, 3), F(4, 3), F(4, 3))
    assert cell(g5, ["(⊥,1)", "(⊥,2)", "(⊥,2)"]) == (-2, 1, 1)
    assert cell(g5, ["(⊥,2)", "x1", "y1"]) == cell(build_H("H1"), ["⊥", "G", "G"])
    assert is_zero_sum(g5)


def test_zero_sum_preservation():
    rng = random.Random(6)
    for _ in range(5):
        s, _ = planted_system(rng, 2, 2)
        g0 = build_G0(bilinearize_homogenize(s))
        g1 = build_G1(g0)
        for g in (g0, g1, build_G2(g1), build_G5(g1)):
            assert is_zero_sum(g)
        assert not is_zero_sum(build_G3(g0))
        assert not is_zero_sum(build_G4(g0))
    for g in (build_H("H1", u=2), build_H("H2", k=4), build_H("H5")):
        assert is_zero_sum(g)
    assert not is_zero_sum(build_H("H3"))
    assert not is_zero_sum(build_H("H4"))


def test_cell_count_law():
    rng = random.Random(7)
    for _ in range(10):
        s, _ = planted_system(rng, rng.randint(1, 4), rng.randint(1, 4))
        b = bilinearize_homogenize(s)
        assert build_G0(b).num_cells() == 2 * b.num_equations * b.dim**2


def test_lift_planted_half():
    g0 = build_G0(ONE)
    x = lift_solution(ONE, HALF, HALF, g0)
    assert x[0] == (F(1, 2), F(1, 2))
    assert check_NE(g0, x).status == "YES"
    assert eval_payoff(g0, x) == (0, 0, 0)


def test_lift_rejects_non_solutions():
    with pytest.raises(NotASolution):
        lift_solution(ONE, [1, 0], [1, 0], build_G0(ONE))


def test_lift_into_extended_games_keeps_bot_at_zero():
    rng = random.Random(9)
    s, x = planted_system(rng, 2, 2)
    b, w = planted_pipeline(s, x)
    for name in ("g1", "g2", "g3", "g4", "g5"):
        g = build_gadget(name, b)
        prof = lift_solution(b, w, w, g)
        assert prof.max_probability() <= F(1, 2)
        assert project_profile(g, prof) == (w, w)
        assert check_NE(g, prof).status == "YES"


def test_project_profile_cases():
    g1 = build_G1(build_G0(ONE))
    assert project_profile(g1, MixedProfile.pure(g1, ["⊥"] * 3)) is None
    mixed = MixedProfile([[F(1, 2), F(1, 2), 0], [F(1, 8), F(3, 8), F(1, 2)], [F(1, 4), F(1, 4), F(1, 2)]])
    assert project_profile(g1, mixed) == ([F(1, 4), F(3, 4)], HALF)


def test_simple_bot_variant():
    g = build_G1(build_G0(ONE), simple_bot=True)
    assert cell(g, ["⊥", "⊥", "⊥"]) == (0, 0, 0)
    assert cell(g, ["(+,1)", "x1", "y1"]) == (2, -1, -1)
