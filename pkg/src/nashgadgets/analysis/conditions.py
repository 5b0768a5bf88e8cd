"""Predicates of the decision-problem table, evaluated on one equilibrium.

Problem ids are accepted in several spellings: ``LargePayoffs``,
``NEWithLargePayoffs``, ``ExistsNEWithLargePayoffs``, ``SNEWithSmallSupports``,
``ExistsSecondSNE``, ``IrrationalNE``.  A leading ``S`` before ``NE`` adds
the requirement that all players use the same strategy.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..game import MixedProfile, StrategicGame, _exact, eval_payoff
from .coalition import DEFAULT_EPS, check_pareto, check_strong
from .verdict import UNKNOWN

__all__ = ["ConditionParams", "UnknownProblemId", "UndecidedCondition", "check_condition", "PROBLEMS", "parse_problem_id"]


class UnknownProblemId(KeyError):
    pass


class UndecidedCondition(RuntimeError):
    """A coalition-based predicate came back UNKNOWN."""


@dataclass
class ConditionParams:
    """u: payoff threshold, k: support bound, T: per-player action index sets."""

    u: Fraction = Fraction(0)
    k: int = 0
    T: Sequence[frozenset] | None = None
    eps: Fraction = DEFAULT_EPS
    equilibria: Sequence[MixedProfile] = field(default_factory=list)

    def __post_init__(self):
        self.u = _exact(self.u)
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.T is not None:
            self.T = [frozenset(t) for t in self.T]


def _supp(x: MixedProfile) -> list[tuple]:
    return [x.support(i) for i in range(x.num_players)]


def _need_T(game, p: ConditionParams):
    if p.T is None or len(p.T) != game.num_players:
        raise ValueError("this condition needs one action set T_i per player")
    for i, t in enumerate(p.T):
        if any(a < 0 or a >= game.action_counts[i] for a in t):
            raise ValueError(f"T_{i + 1} is not a subset of player {i + 1}'s actions")
    return p.T


def _coalition(fn, want_yes):
    def pred(game, x, p):
        v = fn(game, x, p.eps)
        if v.status == UNKNOWN:
            raise UndecidedCondition(v.detail)
        return v.yes == want_yes

    return pred


def _second(game, x, p):
    return any(e != x for e in p.equilibria)


PROBLEMS = {
    "LargePayoffs": lambda g, x, p: all(v >= p.u for v in eval_payoff(g, x)),
    "SmallPayoffs": lambda g, x, p: all(v <= p.u for v in eval_payoff(g, x)),
    "LargeTotalPayoff": lambda g, x, p: sum(eval_payoff(g, x), Fraction(0)) >= p.u,
    "SmallTotalPayoff": lambda g, x, p: sum(eval_payoff(g, x), Fraction(0)) <= p.u,
    "InABall": lambda g, x, p: all(v <= p.u for s in x.strategies for v in s),
    "LargeSupports": lambda g, x, p: all(len(s) >= p.k for s in _supp(x)),
    "SmallSupports": lambda g, x, p: all(len(s) <= p.k for s in _supp(x)),
    "RestrictingSupports": lambda g, x, p: all(t <= set(s) for t, s in zip(_need_T(g, p), _supp(x))),
    "RestrictedSupports": lambda g, x, p: all(set(s) <= t for t, s in zip(_need_T(g, p), _supp(x))),
    "Rational": lambda g, x, p: x.is_rational(),
    "Irrational": lambda g, x, p: not x.is_rational(),
    "Second": _second,
    "ParetoOptimal": _coalition(check_pareto, True),
    "NonParetoOptimal": _coalition(check_pareto, False),
    "Strong": _coalition(check_strong, True),
    "NonStrong": _coalition(check_strong, False),
    "NonSymmetric": lambda g, x, p: not x.is_symmetric(),
}

_ALIASES = {"Pareto": "ParetoOptimal", "NonPareto": "NonParetoOptimal"}
_PREFIX = re.compile(r"^(S?)NE(?:With)?(\w+)$")
_SUFFIX = re.compile(r"^(\w+?)(S?)NE$")


def parse_problem_id(problem_id: str) -> tuple[str, bool]:
    """(base predicate, symmetric flag)."""
    s = problem_id[len("Exists"):] if problem_id.startswith("Exists") else problem_id
    for name in (s, _ALIASES.get(s)):
        if name in PROBLEMS:
            return name, False
    for rx, base_group, sym_group in ((_PREFIX, 2, 1), (_SUFFIX, 1, 2)):
        m = rx.match(s)
        if m:
            base = _ALIASES.get(m.group(base_group), m.group(base_group))
            if base in PROBLEMS:
                sym = bool(m.group(sym_group))
                if base == "NonSymmetric" and sym:
                    break
                return base, sym
    raise UnknownProblemId(problem_id)


def check_condition(problem_id: str, game: StrategicGame, x: MixedProfile, params: ConditionParams | None = None) -> bool:
    """Exact truth value of the table condition for the equilibrium x.

    Whether x is an equilibrium at all is the caller's business.  For the
    Second* ids ``params.equilibria`` holds the enumerated equilibrium set.
    """
    base, sym = parse_problem_id(problem_id)
    params = params or ConditionParams()
    if sym and not x.is_symmetric():
        return False
    if sym and base == "Second":
        eqs = [e for e in params.equilibria if e.is_symmetric()]
        params = ConditionParams(params.u, params.k, params.T, params.eps, eqs)
    return bool(PROBLEMS[base](game, x, params))
