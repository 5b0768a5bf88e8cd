"""Exact gadget games that encode quadratic systems, plus tools to check them.

Modules: ``quadfield`` (exact numbers), ``game`` (normal-form games and
profiles), ``systems`` (quadratic and bilinear systems), ``gadgets`` (H/G
games), ``symmetrize`` (D games), ``analysis`` (equilibria and coalitions)
and ``cli``.
"""

from .game import BOT, MixedProfile, StrategicGame, eval_payoff, format_game, parse_game
from .quadfield import QuadAlgebraic, qsqrt

__version__ = "0.1.0"

__all__ = ["BOT", "MixedProfile", "StrategicGame", "eval_payoff", "format_game", "parse_game", "QuadAlgebraic", "qsqrt"]
