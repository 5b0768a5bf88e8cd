"""Equilibrium checks, enumeration, coalition queries and table predicates."""

from .coalition import (
    DEFAULT_EPS,
    CoalitionQuery,
    EmptyCoalition,
    build_auxiliary_game,
    check_pareto,
    check_strong,
    coalition_feasible,
    grid_oracle,
    strict_infeasibility_certificate,
)
from .conditions import ConditionParams, UndecidedCondition, UnknownProblemId, check_condition, parse_problem_id
from .equilibria import EXACT, NUMERIC, BudgetExceeded, Equilibrium, find_equilibria
from .ne import best_deviation, check_NE
from .verdict import NO, UNKNOWN, YES, Verdict

__all__ = [
    "Verdict", "YES", "NO", "UNKNOWN",
    "check_NE", "best_deviation",
    "find_equilibria", "Equilibrium", "BudgetExceeded", "EXACT", "NUMERIC",
    "CoalitionQuery", "EmptyCoalition", "build_auxiliary_game", "coalition_feasible",
    "grid_oracle", "check_pareto", "check_strong", "strict_infeasibility_certificate", "DEFAULT_EPS",
    "ConditionParams", "UnknownProblemId", "UndecidedCondition", "check_condition", "parse_problem_id",
]
