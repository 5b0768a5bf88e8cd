import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nashgadgets.gadgets import build_G0, build_H
from nashgadgets.game import (
    BadPlayerCount,
    GameFormatError,
    MixedProfile,
    ShapeMismatch,
    StrategicGame,
    deviation_payoffs,
    eval_payoff,
    format_game,
    format_profile,
    is_symmetric_game,
    is_zero_sum,
    parse_game,
    parse_profile,
    transform_payoffs,
)
from nashgadgets.quadfield import qsqrt
from nashgadgets.systems import BilinearSystem


def rand_game(rng, counts, lo=-6, hi=6):
    T = np.empty(tuple(counts) + (len(counts),), dtype=object)
    for idx in np.ndindex(T.shape):
        T[idx] = F(rng.randint(lo, hi), rng.choice([1, 2, 3]))
    return StrategicGame(T)


def rand_profile(rng, counts):
    out = []
    for n in counts:
        w = [F(rng.randint(0, 5)) for _ in range(n)]
        if not any(w):
            w[0] = F(1)
        out.append([v / sum(w) for v in w])
    return MixedProfile(out)


def brute_payoff(game, prof):
    """Expected payoff by explicit sum over pure profiles."""
    m = game.num_players
    tot = [F(0)] * m
    for a in itertools.product(*(range(n) for n in game.action_counts)):
        p = F(1)
        for i, ai in enumerate(a):
            p *= prof[i][ai]
        for i in range(m):
            tot[i] += p * game.payoffs[a + (i,)]
    return tuple(tot)


def test_h1_payoffs_at_pure_profiles():
    assert eval_payoff(build_H("H1", u=0), MixedProfile.pure(build_H("H1", u=0), ["G"] * 3)) == (0, 0, 0)
    h = build_H("H1", u=1)
    assert eval_payoff(h, MixedProfile.pure(h, ["⊥"] * 3)) == (-2, 1, 1)


def test_g0_uniform_player1_gets_zero():
    bsys = BilinearSystem(2, (((1, 0), (0, -1)), ((0, 3), (-2, 1))))
    g0 = build_G0(bsys)
    rng = random.Random(5)
    for _ in range(10):
        prof = rand_profile(rng, g0.action_counts)
        prof = prof.replace(0, [F(1, 4)] * 4)
        assert eval_payoff(g0, prof) == (0, 0, 0)


def test_shape_mismatch():
    h = build_H("H1")
    with pytest.raises(ShapeMismatch):
        eval_payoff(h, MixedProfile([[1], [1], [1]]))


def test_eval_payoff_matches_explicit_sum():
    rng = random.Random(11)
    for counts in [(2, 3, 2), (3, 3), (2, 2, 2, 2)]:
        g = rand_game(rng, counts)
        x = rand_profile(rng, counts)
        assert eval_payoff(g, x) == brute_payoff(g, x)


def test_deviation_payoffs_are_pure_replacements():
    rng = random.Random(2)
    g = rand_game(rng, (2, 3, 2))
    x = rand_profile(rng, g.action_counts)
    for i in range(3):
        dev = deviation_payoffs(g, x, i)
        for a in range(g.action_counts[i]):
            pure = [F(int(b == a)) for b in range(g.action_counts[i])]
            assert dev[a] == eval_payoff(g, x.replace(i, pure))[i]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.fractions(0, 1, max_denominator=9))
def test_multilinear_in_each_player(seed, t):
    rng = random.Random(seed)
    g = rand_game(rng, (2, 3, 2))
    x = rand_profile(rng, g.action_counts)
    i = rng.randrange(3)
    p, q = rand_profile(rng, g.action_counts)[i], rand_profile(rng, g.action_counts)[i]
    mix = [t * a + (1 - t) * b for a, b in zip(p, q)]
    lhs = eval_payoff(g, x.replace(i, mix))
    up, uq = eval_payoff(g, x.replace(i, p)), eval_payoff(g, x.replace(i, q))
    assert lhs == tuple(t * a + (1 - t) * b for a, b in zip(up, uq))


def test_zero_sum_examples():
    assert is_zero_sum(build_H("H1", u=1))
    assert not is_zero_sum(build_H("H3", u=0))
    assert is_zero_sum(build_G0(BilinearSystem(2, (((1, 0), (0, -1)),))))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_zero_sum_games_have_zero_sum_mixed_payoffs(seed):
    rng = random.Random(seed)
    T = np.empty((2, 3, 2, 3), dtype=object)
    for idx in np.ndindex(2, 3, 2):
        a, b = F(rng.randint(-5, 5)), F(rng.randint(-5, 5))
        T[idx] = [a, b, -a - b]
    g = StrategicGame(T)
    assert is_zero_sum(g)
    assert sum(eval_payoff(g, rand_profile(rng, g.action_counts))) == 0


def symmetric_by_definition(game) -> bool:
    """u_i(a) = u_{pi(i)}(b) where b gives player pi(i) the action a_i."""
    m = game.num_players
    n = game.action_counts[0]
    if any(c != n for c in game.action_counts):
        return False
    for perm in itertools.permutations(range(m)):
        for a in itertools.product(range(n), repeat=m):
            b = [None] * m
            for i in range(m):
                b[perm[i]] = a[i]
            for i in range(m):
                if game.payoffs[tuple(a) + (i,)] != game.payoffs[tuple(b) + (perm[i],)]:
                    return False
    return True


def game_from_own_and_multiset(f, n, m=3):
    def fn(a):
        return [f(a[i], tuple(sorted(a[:i] + a[i + 1:]))) for i in range(m)]

    labels = [tuple(str(k) for k in range(n))] * m
    return StrategicGame.from_function(labels, fn)


def test_symmetric_from_own_action_and_multiset():
    rng = random.Random(3)
    table = {}

    def f(own, others):
        return table.setdefault((own, others), F(rng.randint(-9, 9)))

    g = game_from_own_and_multiset(f, 3)
    assert is_symmetric_game(g)
    assert symmetric_by_definition(g)


def test_symmetry_check_agrees_with_definition_on_random_games():
    rng = random.Random(8)
    for _ in range(30):
        g = rand_game(rng, (2, 2, 2), -1, 1)
        assert is_symmetric_game(g) == symmetric_by_definition(g)


def test_asymmetric_examples():
    assert not is_symmetric_game(build_H("H1", u=1))
    g = StrategicGame(np.full((1, 1, 1, 3), F(4), dtype=object))
    assert is_symmetric_game(g)
    assert not is_symmetric_game(rand_game(random.Random(0), (2, 3, 2)))


def test_total_payoff_transforms():
    T = np.empty((1, 1, 1, 3), dtype=object)
    T[0, 0, 0] = [F(2), F(-1), F(-1)]
    g = StrategicGame(T)
    neg = transform_payoffs(g, "TOTAL_NEG")
    pos = transform_payoffs(g, "TOTAL_POS")
    assert tuple(neg.payoffs[0, 0, 0]) == (2, -2, -2) and sum(neg.payoffs[0, 0, 0]) == -2
    assert tuple(pos.payoffs[0, 0, 0]) == (6, -2, -2) and sum(pos.payoffs[0, 0, 0]) == 2
    assert transform_payoffs(g, "SHIFT_SCALE", 1, 0) == g


def test_total_transforms_need_three_players():
    g = rand_game(random.Random(1), (2, 2))
    with pytest.raises(BadPlayerCount):
        transform_payoffs(g, "TOTAL_NEG")


def test_positive_affine_map_preserves_best_replies():
    rng = random.Random(4)
    for _ in range(10):
        g = rand_game(rng, (2, 3, 2))
        h = transform_payoffs(g, "SHIFT_SCALE", F(rng.randint(1, 5), 2), F(rng.randint(-9, 9)))
        x = rand_profile(rng, g.action_counts)
        for i in range(3):
            dg, dh = deviation_payoffs(g, x, i), deviation_payoffs(h, x, i)
            bg, bh = eval_payoff(g, x)[i], eval_payoff(h, x)[i]
            for a, b in zip(dg, dh):
                assert (a > bg) == (b > bh) and (a < bg) == (b < bh)


def test_game_format_round_trip():
    rng = random.Random(9)
    g = rand_game(rng, (2, 3, 2))
    text = format_game(g)
    back = parse_game(text)
    assert back == g and format_game(back) == text
    h = build_H("H5")
    assert format_game(parse_game(format_game(h))) == format_game(h)


@pytest.mark.parametrize(
    "text",
    [
        "players 2\n",
        "game 1\nplayers 2\nactions 1 1 1\n",
        "game 1\nplayers 2\nactions 1 1\npayoff 0 0 1/1 2/1\n",
        "game 1\nplayers 2\nactions 1 1\npayoff 0 0 : 1/1\n",
    ],
)
def test_bad_game_text(text):
    with pytest.raises(GameFormatError):
        parse_game(text)


def test_profile_round_trip_with_radicals():
    r = 3 - qsqrt(6)
    x = MixedProfile([[F(1, 3), F(2, 3)], [r, 1 - r]])
    assert parse_profile(format_profile(x)) == x


def test_profile_invariants():
    with pytest.raises(ValueError):
        MixedProfile([[F(1, 2), F(1, 3)]])
    with pytest.raises(ValueError):
        MixedProfile([[F(3, 2), F(-1, 2)]])
    x = MixedProfile([[F(1, 2), 0, F(1, 2)], [1, 0]])
    assert x.support(0) == (0, 2) and x.support(1) == (0,)
