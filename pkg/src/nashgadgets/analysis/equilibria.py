"""Support enumeration for small games.

For every support profile the indifference equations are solved exactly
when the system is linear (at most two mixing players) or every support
has at most two actions; the resulting points lie in Q or a single
Q(sqrt d).  Other supports go through damped Newton multistart and are
flagged NUMERIC.  Every candidate is re-checked against all pure
deviations before it is reported.

When the solutions of a support form a continuum, the reported points are
those where enough best-response constraints become tight to pin the
point down (the vertices of the component); its faces on the boundary of
the support are found by the smaller supports.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod

import numpy as np
import sympy as sp

from ..game import MixedProfile, StrategicGame, eval_payoff
from ..quadfield import MixedRadicands, is_rational
from .ne import best_deviation
from .polysolve import Branch, _primitive_key, factor_branches, solve_zero_dim

__all__ = ["Equilibrium", "BudgetExceeded", "find_equilibria", "EXACT", "NUMERIC"]

EXACT = "EXACT"
NUMERIC = "NUMERIC"


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Equilibrium:
    profile: MixedProfile
    flag: str
    payoffs: tuple
    support: tuple

    @property
    def exact(self) -> bool:
        return self.flag == EXACT

    def floats(self) -> list[list[float]]:
        return self.profile.to_floats()


def _supports(n: int, k: int) -> list[tuple[int, ...]]:
    out = []
    for size in range(1, min(n, k) + 1):
        out += list(itertools.combinations(range(n), size))
    return out


def _sign_prune(diff: np.ndarray, equality: bool) -> bool:
    """True when a multilinear function with these vertex values cannot be
    zero (equality) or non-positive (inequality) at an interior point."""
    pos = diff > 0
    neg = diff < 0
    if pos.any() and not neg.any():
        return True
    if equality and neg.any() and not pos.any():
        return True
    return False


class _Solver:
    def __init__(self, game: StrategicGame, tolerance: float, seed: int, starts: int, max_tight: int | None):
        self.game = game
        self.m = game.num_players
        self.counts = game.action_counts
        self.T = [game.payoffs[..., i] for i in range(self.m)]
        self.Tf = np.vectorize(float, otypes=[float])(game.payoffs)
        self.tol = tolerance
        self.rng = np.random.default_rng(seed)
        self.starts = starts
        self.max_tight = max_tight
        self.found: list[Equilibrium] = []
        self._exact_keys = set()

    # -- pruning -------------------------------------------------------------
    def _slab(self, i: int, supp) -> np.ndarray:
        """Player i's payoffs over others' supports, all own actions, own axis first."""
        idx = [supp[j] if j != i else range(self.counts[i]) for j in range(self.m)]
        X = self.T[i][np.ix_(*idx)]
        return np.moveaxis(X, i, 0)

    def pruned(self, supp) -> bool:
        for i in range(self.m):
            X = self._slab(i, supp)
            own = supp[i]
            base = X[own[0]]
            for a in range(self.counts[i]):
                if a == own[0]:
                    continue
                if _sign_prune(X[a] - base, equality=a in own):
                    return True
        return False

    # -- exact path ------------------------------------------------------------
    def _polys(self, supp):
        syms = []
        probs = []
        for i, s in enumerate(supp):
            if len(s) == 1:
                probs.append({s[0]: sp.Integer(1)})
                continue
            ts = sp.symbols(f"t{i}_1:{len(s)}")
            syms += ts
            d = {s[0]: 1 - sum(ts)}
            d.update({a: t for a, t in zip(s[1:], ts)})
            probs.append(d)
        gens = tuple(syms)
        dom = sp.QQ

        def utility(i, b):
            expr = sp.Integer(0)
            others = [supp[j] for j in range(self.m) if j != i]
            for rest in itertools.product(*others):
                full = list(rest)
                full.insert(i, b)
                coeff = self.T[i][tuple(full)]
                if coeff == 0:
                    continue
                term = sp.Rational(coeff.numerator, coeff.denominator)
                for j, a in enumerate(full):
                    if j != i:
                        term = term * probs[j][a]
                expr += term
            return sp.Poly(sp.expand(expr), *gens, domain=dom) if gens else sp.Poly(expr, sp.Symbol("_z"), domain=dom)

        eqs, cons = [], []
        for i, s in enumerate(supp):
            base = utility(i, s[0])
            for a in range(self.counts[i]):
                if a == s[0]:
                    continue
                d = utility(i, a) - base
                (eqs if a in s else cons).append(d)
        return gens, probs, eqs, cons

    def _points_exact(self, supp):
        gens, probs, eqs, cons = self._polys(supp)
        if not gens:
            return [((), True)], gens, probs
        points = []
        seen = {}

        def branch(polys):
            key = frozenset(_primitive_key(p) for p in polys)
            if key not in seen:
                seen[key] = Branch(polys, gens)
            return seen[key]

        uniq = {}
        for c in cons:
            if not c.is_ground:
                uniq.setdefault(_primitive_key(c), c)
        cons = list(uniq.values())
        depth_cap = len(gens) if self.max_tight is None else min(len(gens), self.max_tight)
        frontier = []
        for polys in factor_branches(eqs):
            B = branch(polys)
            if B.empty:
                continue
            if B.zero_dim:
                points += solve_zero_dim(polys, gens)
            else:
                frontier.append((polys, 0))
        depth = 0
        visited = set()
        while frontier and depth < depth_cap:
            depth += 1
            nxt = []
            for polys, start in frontier:
                B = branch(polys)
                for ci in range(start, len(cons)):
                    c = cons[ci]
                    if B.reduces_to_zero(c) or B.constant_on(c):
                        continue
                    for sub in factor_branches(polys + [c]):
                        key = frozenset(_primitive_key(p) for p in sub)
                        if key in visited:
                            continue
                        visited.add(key)
                        B2 = branch(sub)
                        if B2.empty:
                            continue
                        if B2.zero_dim:
                            points += solve_zero_dim(sub, gens)
                        else:
                            nxt.append((sub, ci + 1))
            frontier = nxt
        return points, gens, probs

    def _profile_from_point(self, supp, gens, probs, pt):
        subs = dict(zip(gens, pt))
        strats = []
        for i, d in enumerate(probs):
            s = [Fraction(0)] * self.counts[i]
            for a, expr in d.items():
                if isinstance(expr, sp.Expr) and expr.free_symbols:
                    # 1 - sum(t): evaluate with exact arithmetic
                    coeffs = sp.Poly(expr, *gens).terms()
                    val = Fraction(0)
                    for monom, c in coeffs:
                        term = Fraction(int(c.p), int(c.q))
                        for g, e in zip(gens, monom):
                            if e:
                                term = term * subs[g] ** e
                        val = val + term
                    s[a] = val
                else:
                    s[a] = Fraction(int(expr))
            strats.append(s)
        return strats

    # -- numeric path ------------------------------------------------------------
    def _dev(self, strats, i):
        out = np.moveaxis(self.Tf[..., i], i, 0)
        for j in reversed(range(self.m)):
            if j == i:
                continue
            axis = j + 1 if j < i else j
            out = np.tensordot(out, strats[j], axes=([axis], [0]))
        return out

    def _points_numeric(self, supp):
        mixers = [i for i, s in enumerate(supp) if len(s) > 1]
        sizes = [len(supp[i]) for i in mixers]
        offs = np.cumsum([0] + sizes)

        def unpack(v):
            strats = []
            for i in range(self.m):
                s = np.zeros(self.counts[i])
                if i in mixers:
                    k = mixers.index(i)
                    s[list(supp[i])] = v[offs[k]:offs[k + 1]]
                else:
                    s[supp[i][0]] = 1.0
                strats.append(s)
            return strats

        def F(v):
            strats = unpack(v)
            res = []
            for k, i in enumerate(mixers):
                d = self._dev(strats, i)
                s = supp[i]
                res += [d[a] - d[s[0]] for a in s[1:]]
                res.append(v[offs[k]:offs[k + 1]].sum() - 1.0)
            return np.array(res)

        def J(v):
            cols = []
            for k, j in enumerate(mixers):
                for a in supp[j]:
                    # multilinear in player j's vector: derivative is the
                    # value with that vector replaced by a unit vector
                    w = v.copy()
                    w[offs[k]:offs[k + 1]] = 0.0
                    w[offs[k] + supp[j].index(a)] = 1.0
                    col = F(w) - F0_without(v, k)
                    cols.append(col)
            return np.array(cols).T

        def F0_without(v, k):
            w = v.copy()
            w[offs[k]:offs[k + 1]] = 0.0
            return F(w)

        starts = self._starts(sizes)
        pts = []
        for x0 in starts:
            v = x0.copy()
            fv = F(v)
            for _ in range(60):
                nrm = np.abs(fv).max()
                if nrm < self.tol:
                    break
                step = np.linalg.lstsq(J(v), fv, rcond=None)[0]
                lam = 1.0
                while lam > 1e-6:
                    w = v - lam * step
                    fw = F(w)
                    if np.abs(fw).max() < nrm:
                        break
                    lam /= 2
                v, fv = w, fw
            if np.abs(fv).max() >= self.tol or (v < 1e-12).any():
                continue
            if any(np.allclose(v, q, atol=1e-9) for q in pts):
                continue
            pts.append(v)
        return [unpack(v) for v in pts]

    def _starts(self, sizes):
        per = []
        for s in sizes:
            comps = [c for c in itertools.product(range(1, 8), repeat=s) if sum(c) == 8]
            per.append(comps)
        total = prod(len(p) for p in per)
        if total <= self.starts:
            combos = list(itertools.product(*per))
        else:
            combos = [tuple(p[self.rng.integers(len(p))] for p in per) for _ in range(self.starts)]
        combos.append(tuple((1,) * s for s in sizes))
        return [np.concatenate([np.array(c, dtype=float) / sum(c) for c in combo]) for combo in combos]

    # -- verification ---------------------------------------------------------
    def _accept_exact(self, supp, strats) -> bool:
        for i, s in enumerate(supp):
            if any(not strats[i][a] > 0 for a in s):
                return False
        prof = MixedProfile(strats, check=False)
        try:
            gain, _, _ = best_deviation(self.game, prof)
            payoffs = eval_payoff(self.game, prof)
        except MixedRadicands:
            return self._accept_numeric(supp, [np.array([float(v) for v in s]) for s in strats])
        if gain > 0:
            return False
        key = prof.strategies
        if key in self._exact_keys:
            return True
        self._exact_keys.add(key)
        self.found.append(Equilibrium(prof, EXACT, payoffs, tuple(supp)))
        return True

    def _accept_numeric(self, supp, strats) -> bool:
        strats = [np.clip(s, 0.0, None) / np.clip(s, 0.0, None).sum() for s in strats]
        for i in range(self.m):
            d = self._dev(strats, i)
            if d.max() - d @ strats[i] > 1e-9:
                return False
        for e in self.found:
            if all(np.allclose(a, b, atol=1e-9) for a, b in zip(e.floats(), strats)):
                return True
        approx = []
        for s in strats:
            fr = [Fraction(float(v)) for v in s]
            fr[int(np.argmax(s))] += 1 - sum(fr, Fraction(0))
            approx.append(fr)
        prof = MixedProfile(approx, check=False)
        payoffs = tuple(float(self._dev(strats, i) @ strats[i]) for i in range(self.m))
        self.found.append(Equilibrium(prof, NUMERIC, payoffs, tuple(supp)))
        return True

    def run_support(self, supp):
        mixers = [i for i, s in enumerate(supp) if len(s) > 1]
        if len(mixers) <= 2 or all(len(s) <= 2 for s in supp):
            points, gens, probs = self._points_exact(supp)
            for pt, exact in points:
                if exact:
                    self._accept_exact(supp, self._profile_from_point(supp, gens, probs, pt))
                else:
                    subs = dict(zip(gens, pt))
                    strats = []
                    for i, d in enumerate(probs):
                        s = np.zeros(self.counts[i])
                        for a, expr in d.items():
                            s[a] = float(sp.sympify(expr).subs(subs))
                        strats.append(s)
                    if all(s[list(supp[i])].min() > 1e-12 for i, s in enumerate(strats)):
                        self._accept_numeric(supp, strats)
        else:
            for strats in self._points_numeric(supp):
                self._accept_numeric(supp, strats)


def find_equilibria(
    game: StrategicGame,
    max_support: int | None = None,
    tolerance: float = 1e-12,
    budget: int = 200_000,
    seed: int = 0,
    starts: int = 64,
    max_tight: int | None = None,
) -> list[Equilibrium]:
    """Enumerate equilibria whose supports have at most ``max_support`` actions.

    Raises :class:`BudgetExceeded` when the number of support profiles
    exceeds ``budget``.  ``seed`` only affects NUMERIC starts.
    """
    if not all(is_rational(v) for v in game.payoffs.flat):
        raise ValueError("support enumeration needs rational payoffs")
    k = max(game.action_counts) if max_support is None else max_support
    per = [_supports(n, k) for n in game.action_counts]
    total = prod(len(p) for p in per)
    if total > budget:
        raise BudgetExceeded(f"{total} support profiles exceed the budget of {budget}")
    solver = _Solver(game, tolerance, seed, starts, max_tight)
    for supp in itertools.product(*per):
        if solver.pruned(supp):
            continue
        solver.run_support(supp)
    return solver.found
