import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nashgadgets.analysis import (
    DEFAULT_EPS,
    CoalitionQuery,
    EmptyCoalition,
    build_auxiliary_game,
    check_pareto,
    check_strong,
    coalition_feasible,
    find_equilibria,
    grid_oracle,
    strict_infeasibility_certificate,
)
from nashgadgets.gadgets import build_H
from nashgadgets.game import MixedProfile, StrategicGame, eval_payoff
from nashgadgets.suites import oracle_agreement

EPS = DEFAULT_EPS
Q12 = CoalitionQuery({1, 2}, frozenset(), {3})


def pure(game, labels):
    return MixedProfile.pure(game, labels)


@pytest.fixture(scope="module")
def h1():
    h0, h1 = build_H("H1", u=0), build_H("H1", u=1)
    return h0, pure(h0, ["G"] * 3), h1, pure(h1, ["⊥"] * 3)


def test_auxiliary_game_cells(h1):
    h0, ggg, _, _ = h1
    aux = build_auxiliary_game(h0, ggg, Q12)
    assert aux.action_counts == (2, 2, 1, 2)
    assert aux.labels[2] == ("⊥",)
    assert aux.payoffs[0, 0, 0, 0, 3] == aux.payoffs[0, 0, 0, 1, 3] == EPS
    assert aux.payoffs[1, 1, 0, 0, 3] == -2 + EPS
    assert aux.payoffs[1, 1, 0, 1, 3] == -1 + EPS
    assert all(aux.payoffs[idx][:3].tolist() == [0, 0, 0] for idx in np.ndindex(aux.action_counts))


def test_auxiliary_game_weak_members_get_no_margin(h1):
    h0, ggg, _, _ = h1
    aux = build_auxiliary_game(h0, ggg, CoalitionQuery({1}, {2}, {3}))
    assert aux.payoffs[0, 0, 0, 1, 3] == 0


def test_empty_coalition():
    with pytest.raises(EmptyCoalition):
        CoalitionQuery(frozenset(), frozenset())


def test_ggg_coalition_improves(h1):
    h0, ggg, _, _ = h1
    v = coalition_feasible(h0, ggg, Q12)
    assert v.status == "YES"
    assert v.witness["gains"] == {1: 2, 2: 1}
    assert [v.witness["profile"][i] for i in range(3)] == [(0, 1), (0, 1), (1, 0)]


def test_bot_profile_resists_pairs(h1):
    _, _, h, bots = h1
    assert coalition_feasible(h, bots, Q12).status == "NO"
    assert grid_oracle(h, bots, Q12, N=64).status == "NO"


def test_bot_profile_system_is_infeasible_on_a_grid():
    # p1 p2 + 4 p2 - 2 p1 > 0 and p1 p2 - 4 p2 + p1 > 0 never hold together
    for a in range(65):
        for b in range(65):
            p1, p2 = F(a, 64), F(b, 64)
            assert not (p1 * p2 + 4 * p2 - 2 * p1 > 0 and p1 * p2 - 4 * p2 + p1 > 0)


def test_strict_certificate(h1):
    _, _, h, bots = h1
    lam = strict_infeasibility_certificate(h, bots, {1, 2})
    assert lam == [F(2, 5), F(3, 5)]
    h0, ggg, _, _ = h1
    assert strict_infeasibility_certificate(h0, ggg, {1, 2}) is None


def test_grid_examples(h1):
    h0, ggg, _, _ = h1
    v = grid_oracle(h0, ggg, Q12, N=4)
    assert v.status == "YES" and v.witness["gains"] == {1: 2, 2: 1}
    # resolution 1 scans only the pure deviations
    assert grid_oracle(h0, ggg, Q12, N=1).status == "YES"
    h3 = build_H("H3")
    assert grid_oracle(h3, pure(h3, ["G"] * 3), CoalitionQuery({1}, {2, 3}, frozenset()), N=1).status == "YES"


def test_strong_examples(h1):
    h0, ggg, h, bots = h1
    assert check_strong(h, bots).status == "YES"
    assert check_strong(h0, ggg).status == "NO"
    h4 = build_H("H4")
    assert check_strong(h4, pure(h4, ["G"] * 3)).status == "YES"


def test_pareto_examples():
    h3 = build_H("H3")
    v = check_pareto(h3, pure(h3, ["G"] * 3))
    assert v.status == "NO"
    assert v.witness["gains"] == {1: 1, 2: 1, 3: 1}
    h4 = build_H("H4")
    assert check_pareto(h4, pure(h4, ["G"] * 3)).status == "YES"


def rand_game(rng, zero_sum=False):
    T = np.empty((2, 2, 2, 3), dtype=object)
    for idx in np.ndindex(2, 2, 2):
        row = [F(rng.randint(-4, 4)) for _ in range(3)]
        if zero_sum:
            row[2] = -row[0] - row[1]
        T[idx] = row
    return StrategicGame(T)


def rand_profile(rng, counts):
    out = []
    for n in counts:
        w = [F(rng.randint(0, 4)) for _ in range(n)]
        if not any(w):
            w[0] = F(1)
        out.append([v / sum(w) for v in w])
    return MixedProfile(out)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_zero_sum_profiles_are_pareto_optimal(seed):
    rng = random.Random(seed)
    g = rand_game(rng, zero_sum=True)
    assert check_pareto(g, rand_profile(rng, g.action_counts)).status == "YES"


def test_zero_sum_gadgets_are_pareto_optimal():
    for g in (build_H("H1", u=2), build_H("H5")):
        rng = random.Random(0)
        for _ in range(3):
            assert check_pareto(g, rand_profile(rng, g.action_counts)).status == "YES"


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_singletons_cannot_improve_at_equilibria(seed):
    g = rand_game(random.Random(seed))
    for e in find_equilibria(g):
        for i in (1, 2, 3):
            assert coalition_feasible(g, e.profile, CoalitionQuery({i})).status == "NO"


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_witnesses_reverify(seed):
    rng = random.Random(seed)
    g = rand_game(rng)
    x = rand_profile(rng, g.action_counts)
    B1 = set(rng.sample([1, 2, 3], rng.randint(1, 3)))
    rest = sorted({1, 2, 3} - B1)
    B2 = set(rest[: rng.randint(0, len(rest))])
    q = CoalitionQuery(B1, B2)
    v = coalition_feasible(g, x, q)
    if v.status != "YES":
        return
    prof = v.witness["profile"]
    before, after = eval_payoff(g, x), eval_payoff(g, prof)
    for j in range(1, 4):
        if j not in B1 | B2:
            assert prof[j - 1] == x[j - 1]
        else:
            gain = after[j - 1] - before[j - 1]
            assert v.witness["gains"][j] == gain
            assert gain >= (EPS if j in B1 else 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_multilinear_vertex_bound(seed):
    """On any sub-product of simplices the max is attained at a vertex."""
    rng = np.random.default_rng(seed)
    counts = (2, 3, 2)
    U = rng.normal(size=counts)
    verts = []
    for n in counts:
        V = rng.dirichlet(np.ones(n), size=rng.integers(1, n + 1))
        verts.append(V)
    vmax = max(
        np.einsum("abc,a,b,c->", U, a, b, c)
        for a in verts[0] for b in verts[1] for c in verts[2]
    )
    for _ in range(1000):
        pts = [rng.dirichlet(np.ones(len(V))) @ V for V in verts]
        assert np.einsum("abc,a,b,c->", U, *pts) <= vmax + 1e-12


def test_node_budget_gives_unknown_or_decides(h1):
    _, _, h, bots = h1
    v = coalition_feasible(h, bots, Q12, node_budget=0)
    assert v.status in ("NO", "UNKNOWN")


def test_branch_and_bound_agrees_with_grid():
    agree, bad, _ = oracle_agreement(seed=7, games=15)
    assert bad == [] and agree > 0
