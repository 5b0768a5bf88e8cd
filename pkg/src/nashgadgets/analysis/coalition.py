"""Coalition improvement queries: Pareto optimality and strong equilibria.

A query fixes a profile x and a partition (B1, B2, B3) of the players.  It
asks for a deviation x' of the players in D = B1 ∪ B2 (B3 stays at x) with
gain >= eps for every member of B1 and gain >= 0 for every member of B2.
Writing ``W_j(x') = u_j(x) - u_j(x') + eps_j`` the question is whether
``W(x') <= 0`` is feasible on the product of the deviators' simplices.

W is multilinear, so on a product of sub-simplices its image lies in the
convex hull of the images of the cell's vertices.  A cell is discarded
when some convex weight vector lambda makes ``lambda . W`` positive at all
of those vertices; lambda comes from an LP and is re-checked exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy.optimize import linprog

from ..game import MixedProfile, StrategicGame, eval_payoff
from ..quadfield import to_float
from .verdict import NO, UNKNOWN, YES, Verdict

__all__ = [
    "EmptyCoalition",
    "CoalitionQuery",
    "build_auxiliary_game",
    "coalition_feasible",
    "grid_oracle",
    "check_pareto",
    "check_strong",
    "strict_infeasibility_certificate",
    "DEFAULT_EPS",
]

DEFAULT_EPS = Fraction(1, 1024)
DELTA_MIN = Fraction(1, 2**20)


class EmptyCoalition(ValueError):
    pass


@dataclass(frozen=True)
class CoalitionQuery:
    """Players are 1-based.  B3 defaults to everyone not in B1 or B2."""

    B1: frozenset
    B2: frozenset = frozenset()
    B3: frozenset | None = None
    eps: Fraction = DEFAULT_EPS

    def __post_init__(self):
        object.__setattr__(self, "B1", frozenset(self.B1))
        object.__setattr__(self, "B2", frozenset(self.B2))
        object.__setattr__(self, "eps", Fraction(self.eps))
        if self.B3 is not None:
            object.__setattr__(self, "B3", frozenset(self.B3))
        if not (self.B1 | self.B2):
            raise EmptyCoalition("B1 and B2 are both empty")
        if self.B1 & self.B2:
            raise ValueError("B1 and B2 overlap")
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    def resolve(self, m: int) -> tuple[list[int], list[int], list[int]]:
        """0-based (B1, B2, B3) for an m-player game."""
        D = self.B1 | self.B2
        B3 = frozenset(range(1, m + 1)) - D if self.B3 is None else self.B3
        if (D | B3) != frozenset(range(1, m + 1)) or D & B3:
            raise ValueError("B1, B2, B3 must partition the players")
        return (sorted(i - 1 for i in self.B1), sorted(i - 1 for i in self.B2), sorted(i - 1 for i in B3))


class _Problem:
    """Reduced payoff tensors of the deviators with B3 contracted at x."""

    def __init__(self, game: StrategicGame, x: MixedProfile, q: CoalitionQuery):
        m = game.num_players
        self.game, self.x, self.q = game, x, q
        self.B1, self.B2, self.B3 = q.resolve(m)
        self.D = sorted(self.B1 + self.B2)
        base = eval_payoff(game, x)
        self.base = [base[j] for j in self.D]
        self.eps = [q.eps if j in self.B1 else Fraction(0) for j in self.D]
        self.R = []
        for j in self.D:
            T = game.payoffs[..., j]
            for p in reversed(self.B3):
                T = np.tensordot(T, np.array(x[p], dtype=object), axes=([p], [0]))
            self.R.append(T)  # axes follow self.D
        self.counts = [game.action_counts[i] for i in self.D]

    def payoff_grid(self, R, verts):
        """R contracted with each deviator's vertex matrix: one value per vertex combo."""
        out = R
        for V in verts:
            # contract the leading remaining action axis, append the vertex axis last
            out = np.tensordot(out, V, axes=([0], [1]))
        return out

    def W_at_vertices(self, verts) -> np.ndarray:
        """Array of shape (#combos, |D|) with exact W values."""
        cols = []
        for k in range(len(self.D)):
            U = self.payoff_grid(self.R[k], verts).reshape(-1)
            cols.append(self.base[k] + self.eps[k] - U)
        return np.stack(cols, axis=1)

    def gains_at(self, strategies) -> list:
        verts = [np.array([s], dtype=object) for s in strategies]
        W = self.W_at_vertices(verts)[0]
        return [self.eps[k] - W[k] for k in range(len(self.D))]

    def full_profile(self, strategies) -> MixedProfile:
        strats = list(self.x.strategies)
        for i, s in zip(self.D, strategies):
            strats[i] = tuple(s)
        return MixedProfile(strats, check=False)

    def witness(self, strategies) -> dict:
        gains = self.gains_at(strategies)
        return {
            "coalition": [i + 1 for i in self.D],
            "profile": self.full_profile(strategies),
            "gains": {i + 1: g for i, g in zip(self.D, gains)},
        }


def _separating_weights(W: np.ndarray):
    """Exact convex weights lambda with min_v lambda.W(v) > 0, or None."""
    k = W.shape[1]
    for j in range(k):
        if all(v > 0 for v in W[:, j]):
            lam = [Fraction(int(i == j)) for i in range(k)]
            return lam
    if k == 1:
        return None
    Wf = np.vectorize(to_float, otypes=[float])(W)
    scale = max(1.0, np.abs(Wf).max())
    # maximize t s.t. t - lambda.W(v) <= 0, sum lambda = 1
    c = np.zeros(k + 1)
    c[-1] = -1.0
    A = np.hstack([-Wf / scale, np.ones((Wf.shape[0], 1))])
    res = linprog(
        c,
        A_ub=A,
        b_ub=np.zeros(Wf.shape[0]),
        A_eq=np.array([[1.0] * k + [0.0]]),
        b_eq=[1.0],
        bounds=[(0, None)] * k + [(None, None)],
        method="highs",
    )
    if res.status != 0 or res.x[-1] <= 1e-13:
        return None
    for den in (64, 4096, 10**6, 10**9):
        lam = [Fraction(max(v, 0.0)).limit_denominator(den) for v in res.x[:k]]
        tot = sum(lam)
        if tot == 0:
            continue
        lam = [v / tot for v in lam]
        if all(sum((l * w for l, w in zip(lam, row)), Fraction(0)) > 0 for row in W):
            return lam
    return None


def _nonpositive_weights(G: np.ndarray):
    """Exact convex weights lambda with lambda.G(v) <= 0 on every row, or None."""
    k = G.shape[1]
    for j in range(k):
        if all(v <= 0 for v in G[:, j]):
            return [Fraction(int(i == j)) for i in range(k)]
    Gf = np.vectorize(to_float, otypes=[float])(G)
    res = linprog(
        np.zeros(k),
        A_ub=Gf,
        b_ub=np.zeros(Gf.shape[0]),
        A_eq=np.ones((1, k)),
        b_eq=[1.0],
        bounds=[(0, None)] * k,
        method="highs",
    )
    if res.status != 0:
        return None
    for den in (12, 64, 4096, 10**6):
        lam = [Fraction(max(v, 0.0)).limit_denominator(den) for v in res.x]
        tot = sum(lam)
        if tot == 0:
            continue
        lam = [v / tot for v in lam]
        if all(sum((l * g for l, g in zip(lam, row)), Fraction(0)) <= 0 for row in G):
            return lam
    return None


def strict_infeasibility_certificate(game: StrategicGame, x: MixedProfile, B1) -> list | None:
    """Weights showing that no deviation of B1 (others fixed at x) makes every
    member strictly better off, whatever the margin.

    The gains are multilinear, so ``lambda . gain <= 0`` at all pure
    deviations extends to the whole product of simplices; a point with all
    gains positive would make that combination positive.
    """
    P = _Problem(game, x, CoalitionQuery(B1, frozenset(), None, DEFAULT_EPS))
    full = [_unit_simplex(n, range(n), n) for n in P.counts]
    W = P.W_at_vertices(full)
    gains = np.array([[e - w for e, w in zip(P.eps, row)] for row in W], dtype=object)
    return _nonpositive_weights(gains)


def _feasible_row(row) -> bool:
    return all(v <= 0 for v in row)


def _centroid(V: np.ndarray) -> np.ndarray:
    n = V.shape[0]
    return np.array([sum(V[:, c], Fraction(0)) / n for c in range(V.shape[1])], dtype=object)


def _longest_edge(verts):
    best = None
    for b, V in enumerate(verts):
        n = V.shape[0]
        for r, s in itertools.combinations(range(n), 2):
            d = V[r] - V[s]
            L = sum((v * v for v in d), Fraction(0))
            if best is None or L > best[0]:
                best = (L, b, r, s)
    return best


def _unit_simplex(size: int, support: Iterable[int], n: int) -> np.ndarray:
    rows = []
    for a in support:
        rows.append([Fraction(int(c == a)) for c in range(n)])
    return np.array(rows, dtype=object).reshape(len(rows), n)


def _search_cell(P: _Problem, verts, stats, node_budget: int):
    """Branch and bound from one root cell.  Returns (status, witness strategies, delta)."""
    stack = [verts]
    undecided_delta = None
    while stack:
        if stats["nodes"] >= node_budget:
            return UNKNOWN, None, undecided_delta or Fraction(-1)
        cell = stack.pop()
        stats["nodes"] += 1
        W = P.W_at_vertices(cell)
        shape = [V.shape[0] for V in cell]
        for flat, row in enumerate(W):
            if _feasible_row(row):
                idx = np.unravel_index(flat, shape)
                return YES, [cell[b][idx[b]] for b in range(len(cell))], None
        cen = [_centroid(V) for V in cell]
        if _feasible_row(P.W_at_vertices([c.reshape(1, -1) for c in cen])[0]):
            return YES, cen, None
        if _separating_weights(W) is not None:
            stats["pruned"] += 1
            continue
        L, b, r, s = _longest_edge(cell)
        if L == 0 or L < DELTA_MIN * DELTA_MIN:
            stats["floor"] += 1
            undecided_delta = L if undecided_delta is None else max(undecided_delta, L)
            continue
        mid = (cell[b][r] + cell[b][s]) / 2
        for drop in (r, s):
            V = cell[b].copy()
            V[drop] = mid
            child = list(cell)
            child[b] = V
            stack.append(child)
    if undecided_delta is not None:
        return UNKNOWN, None, undecided_delta
    return NO, None, None


def coalition_feasible(
    game: StrategicGame,
    x: MixedProfile,
    q: CoalitionQuery,
    node_budget: int = 20_000,
) -> Verdict:
    """Decide whether the coalition can improve as described by ``q``.

    YES carries a witness profile whose gains were computed exactly.  NO
    means every cell was discarded by an exactly verified bound, so no
    deviation reaches the eps margin.  UNKNOWN reports the largest squared
    edge length left undecided (or -1 when the node budget ran out).
    """
    P = _Problem(game, x, q)
    stats = {"nodes": 0, "pruned": 0, "floor": 0, "patterns": 0}
    full = [_unit_simplex(n, range(n), n) for n in P.counts]

    # pure deviations first, then the whole product as one cell
    W = P.W_at_vertices(full)
    for flat, row in enumerate(W):
        if _feasible_row(row):
            idx = np.unravel_index(flat, P.counts)
            w = P.witness([full[b][idx[b]] for b in range(len(full))])
            return Verdict(YES, w, "pure coalition deviation", stats)
    if _separating_weights(W) is not None:
        stats["pruned"] += 1
        return Verdict(NO, None, "bound holds on the whole strategy space", stats)

    k = len(P.D)
    patterns = [list(itertools.combinations(range(n), min(k, n))) for n in P.counts]
    worst = None
    for pattern in itertools.product(*patterns):
        stats["patterns"] += 1
        root = [_unit_simplex(n, T, n) for n, T in zip(P.counts, pattern)]
        status, strategies, delta = _search_cell(P, root, stats, node_budget)
        if status == YES:
            return Verdict(YES, P.witness(strategies), "branch and bound witness", stats)
        if status == UNKNOWN:
            worst = delta if worst is None else max(worst, delta)
            if delta == -1:
                break
    if worst is not None:
        return Verdict(UNKNOWN, {"delta": worst}, "undecided cells remain", stats)
    return Verdict(NO, None, "all cells pruned", stats)


def build_auxiliary_game(game: StrategicGame, x: MixedProfile, q: CoalitionQuery) -> StrategicGame:
    """(m+1)-player game: B3 frozen to a single action ⊥, the extra player
    picks j in B1 ∪ B2 and receives ``u_j(x) - u_j(x^a) (+ eps for B1)``.
    Every other player's payoff is 0."""
    m = game.num_players
    B1, B2, B3 = q.resolve(m)
    D = sorted(B1 + B2)
    base = eval_payoff(game, x)
    labels = [game.labels[i] if i in D else ("⊥",) for i in range(m)]
    labels.append(tuple(f"j{j + 1}" for j in D))
    counts = [len(ls) for ls in labels]
    T = np.empty(tuple(counts) + (m + 1,), dtype=object)
    for prof in itertools.product(*(range(n) for n in counts)):
        j = D[prof[-1]]
        strats = list(x.strategies)
        for i in D:
            strats[i] = [Fraction(int(c == prof[i])) for c in range(game.action_counts[i])]
        uj = eval_payoff(game, MixedProfile(strats, check=False))[j]
        val = base[j] - uj + (q.eps if j in B1 else 0)
        T[prof] = [Fraction(0)] * m + [val]
    meta = {"kind": "auxiliary", "eps": str(q.eps)}
    return StrategicGame(T, labels, meta)


def _compositions(N: int, parts: int) -> np.ndarray:
    if parts == 1:
        return np.array([[N]])
    rows = []
    for first in range(N + 1):
        for rest in _compositions(N - first, parts - 1):
            rows.append([first] + list(rest))
    return np.array(rows)


def grid_oracle(
    game: StrategicGame,
    x: MixedProfile,
    q: CoalitionQuery,
    N: int = 64,
    verify: int = 32,
) -> Verdict:
    """Brute-force scan of the grid with denominator N on every deviator's simplex.

    Floating point picks candidates; YES needs an exact check of at least
    one of them.  ``stats["margin"]`` is the best ``min_j(-W_j)`` seen.
    """
    P = _Problem(game, x, q)
    grids = [_compositions(N, n) for n in P.counts]
    Rf = [np.vectorize(to_float, otypes=[float])(R) for R in P.R]
    offs = [to_float(b + e) for b, e in zip(P.base, P.eps)]
    best = -np.inf
    cands = []
    chunk = max(1, 2_000_000 // max(1, int(np.prod([len(g) for g in grids[1:]]))))
    first = grids[0] / N
    for start in range(0, len(first), chunk):
        part = first[start:start + chunk]
        mins = None
        for k in range(len(P.D)):
            U = np.tensordot(Rf[k], part, axes=([0], [1]))  # (..., c)
            U = np.moveaxis(U, -1, 0)
            for g in grids[1:]:
                U = np.tensordot(U, g / N, axes=([1], [1]))
                U = np.moveaxis(U, -1, U.ndim - 1)
            val = U - offs[k]  # = -W_k
            mins = val if mins is None else np.minimum(mins, val)
        best = max(best, float(mins.max()))
        hits = np.argwhere(mins >= -1e-9)
        if len(hits):
            order = np.argsort(-mins[tuple(hits.T)])[:verify]
            for h in hits[order]:
                cands.append((float(mins[tuple(h)]), (h[0] + start,) + tuple(h[1:])))
    cands.sort(key=lambda t: -t[0])
    for _, h in cands[:verify]:
        strategies = [[Fraction(int(v), N) for v in grids[b][h[b]]] for b in range(len(grids))]
        gains = P.gains_at(strategies)
        if all(g >= e for g, e in zip(gains, P.eps)):
            return Verdict(YES, P.witness(strategies), f"grid point at resolution 1/{N}", {"margin": best})
    return Verdict(NO, {"resolution": Fraction(1, N)}, f"no grid point at resolution 1/{N}", {"margin": best})


def check_pareto(game: StrategicGame, x: MixedProfile, eps=DEFAULT_EPS, node_budget: int = 20_000) -> Verdict:
    """YES when no profile gives some player eps more and nobody less."""
    m = game.num_players
    unknown = None
    for i in range(1, m + 1):
        q = CoalitionQuery({i}, set(range(1, m + 1)) - {i}, frozenset(), eps)
        v = coalition_feasible(game, x, q, node_budget)
        if v.status == YES:
            return Verdict(NO, v.witness, f"player {i} improves without hurting anyone")
        if v.status == UNKNOWN:
            unknown = v
    if unknown is not None:
        return Verdict(UNKNOWN, unknown.witness, "some coalition query was undecided")
    return Verdict(YES, None, "no Pareto improvement")


def check_strong(game: StrategicGame, x: MixedProfile, eps=DEFAULT_EPS, node_budget: int = 20_000) -> Verdict:
    """YES when no nonempty coalition can all gain eps with the rest at x."""
    m = game.num_players
    unknown = None
    for size in range(1, m + 1):
        for B1 in itertools.combinations(range(1, m + 1), size):
            v = coalition_feasible(game, x, CoalitionQuery(set(B1), frozenset(), None, eps), node_budget)
            if v.status == YES:
                return Verdict(NO, v.witness, f"coalition {set(B1)} improves")
            if v.status == UNKNOWN:
                unknown = v
    if unknown is not None:
        return Verdict(UNKNOWN, unknown.witness, "some coalition query was undecided")
    return Verdict(YES, None, "no coalition improves")
