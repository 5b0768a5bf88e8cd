"""Exact Nash equilibrium check by pure deviations."""

from __future__ import annotations

from ..game import MixedProfile, StrategicGame, deviation_payoffs, eval_payoff
from .verdict import NO, YES, Verdict


def best_deviation(game: StrategicGame, profile: MixedProfile):
    """Largest pure-deviation gain over all players.

    Returns ``(gain, player, action)`` with 0-based indices; ties go to the
    smallest (player, action).  ``gain <= 0`` means no profitable deviation.
    """
    payoffs = eval_payoff(game, profile)
    best = None
    for i in range(game.num_players):
        for a, v in enumerate(deviation_payoffs(game, profile, i)):
            gain = v - payoffs[i]
            if best is None or gain > best[0]:
                best = (gain, i, a)
    return best


def check_NE(game: StrategicGame, profile: MixedProfile) -> Verdict:
    payoffs = eval_payoff(game, profile)
    gain, i, a = best_deviation(game, profile)
    if gain > 0:
        w = {"player": i + 1, "action": game.labels[i][a], "gain": gain}
        return Verdict(NO, w, f"player {i + 1} gains {gain} by switching to {game.labels[i][a]}")
    return Verdict(YES, {"payoffs": payoffs}, "no profitable pure deviation")
