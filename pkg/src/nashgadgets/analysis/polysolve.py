"""Exact solving of small polynomial systems over the rationals.

Points are returned with coordinates in Q or in a single field Q(sqrt d)
whenever every univariate eliminant splits into factors of degree at most
two.  Higher-degree factors fall back to floating-point roots, and such
points are marked inexact.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import sympy as sp

from ..quadfield import MixedRadicands, qsqrt, to_float

__all__ = [
    "to_fraction_sp",
    "eval_poly",
    "univariate_roots",
    "factor_branches",
    "solve_zero_dim",
    "Branch",
]


def to_fraction_sp(r) -> Fraction:
    r = sp.Rational(r)
    return Fraction(int(r.p), int(r.q))


def eval_poly(poly: sp.Poly, point: Sequence):
    """Exact value of ``poly`` at ``point`` (Fractions or QuadAlgebraic)."""
    total = Fraction(0)
    for monom, coeff in poly.terms():
        term = to_fraction_sp(coeff)
        for v, e in zip(point, monom):
            if e:
                term = term * v**e
        total = total + term
    return total


def _eval_float(poly: sp.Poly, point: Sequence[float]) -> float:
    total = 0.0
    for monom, coeff in poly.terms():
        term = float(coeff)
        for v, e in zip(point, monom):
            term *= v**e
        total += term
    return total


def univariate_roots(poly: sp.Poly, lo=0, hi=1) -> list[tuple[object, bool]]:
    """Real roots in ``[lo, hi]`` as ``(value, exact)`` pairs."""
    out = []
    _, factors = poly.factor_list()
    for f, _ in factors:
        deg = f.degree()
        c = [to_fraction_sp(v) for v in f.all_coeffs()]
        if deg == 1:
            roots = [(-c[1] / c[0], True)]
        elif deg == 2:
            a, b, cc = c
            disc = b * b - 4 * a * cc
            if disc < 0:
                continue
            r = qsqrt(disc)
            roots = [((-b + r) / (2 * a), True), ((-b - r) / (2 * a), True)]
        else:
            roots = []
            for z in f.nroots(n=30):
                if abs(sp.im(z)) < 1e-20:
                    roots.append((float(sp.re(z)), False))
        for v, exact in roots:
            if exact:
                if lo <= v <= hi:
                    out.append((v, True))
            elif lo - 1e-12 <= v <= hi + 1e-12:
                out.append((v, False))
    return out


def _primitive_key(p: sp.Poly):
    """Canonical form of p up to a nonzero scalar."""
    _, q = p.primitive()
    if q.LC() < 0:
        q = -q
    return q.as_expr()


def factor_branches(polys: Iterable[sp.Poly]) -> list[list[sp.Poly]]:
    """Split ``V(polys)`` into unions by choosing one irreducible factor of
    every polynomial.  Constant nonzero polynomials make the set empty."""
    choices = []
    for p in polys:
        if p.is_zero:
            continue
        if p.is_ground:
            return []
        _, facs = p.factor_list()
        uniq = {}
        for f, _ in facs:
            uniq.setdefault(_primitive_key(f), f)
        choices.append(list(uniq.values()))
    branches = []
    seen = set()
    for combo in itertools.product(*choices):
        keyed = {}
        for f in combo:
            keyed.setdefault(_primitive_key(f), f)
        key = frozenset(keyed)
        if key in seen:
            continue
        seen.add(key)
        branches.append(list(keyed.values()))
    # drop branches whose generator set contains another's
    keys = [frozenset(_primitive_key(f) for f in b) for b in branches]
    keep = []
    for i, b in enumerate(branches):
        if any(j != i and keys[j] < keys[i] for j in range(len(branches))):
            continue
        keep.append(b)
    return keep


class Branch:
    """Groebner data for one set of generators."""

    def __init__(self, polys: list[sp.Poly], gens: tuple):
        self.gens = gens
        self.polys = polys
        if polys:
            self.G = sp.groebner([p.as_expr() for p in polys], *gens, order="grevlex", domain=sp.QQ)
            exprs = list(self.G.exprs)
        else:
            self.G = None
            exprs = []
        self.empty = exprs == [1] or any(sp.Poly(e, *gens).is_ground and e != 0 for e in exprs)
        if self.empty:
            self.zero_dim = False
        elif not gens:
            self.zero_dim = True
        elif self.G is None:
            self.zero_dim = False
        else:
            self.zero_dim = self.G.is_zero_dimensional

    def reduces_to_zero(self, p: sp.Poly) -> bool:
        if self.G is None:
            return p.is_zero
        _, r = self.G.reduce(p.as_expr())
        return sp.expand(r) == 0

    def constant_on(self, p: sp.Poly) -> bool:
        """True when p is a nonzero constant modulo the ideal (never tight)."""
        if self.G is None:
            return p.is_ground and not p.is_zero
        _, r = self.G.reduce(p.as_expr())
        r = sp.expand(r)
        return r != 0 and r.is_number


def solve_zero_dim(polys: list[sp.Poly], gens: tuple) -> list[tuple[tuple, bool]]:
    """All real points of a zero-dimensional system in ``[0, 1]^n``.

    Returns ``(point, exact)`` pairs.  Coordinates come from each variable's
    univariate eliminant; every combination is checked against ``polys``
    exactly, or by float residual when a root is inexact or the candidate
    mixes two radicands.
    """
    if not gens:
        return [((), True)]
    exprs = [p.as_expr() for p in polys]
    per_var = []
    for v in gens:
        order = tuple(g for g in gens if g != v) + (v,)
        G = _lex_basis(tuple(exprs), order)
        if G == (sp.Integer(1),):
            return []
        uni = [sp.Poly(e, v) for e in G if e.free_symbols <= {v} and not sp.Poly(e, v).is_ground]
        if not uni:
            raise ArithmeticError("ideal is not zero-dimensional")
        roots = univariate_roots(uni[-1])
        if not roots:
            return []
        per_var.append(roots)
    out = []
    for combo in itertools.product(*per_var):
        pt = tuple(v for v, _ in combo)
        exact = all(e for _, e in combo)
        if exact:
            try:
                ok = all(eval_poly(p, pt) == 0 for p in polys)
            except MixedRadicands:
                exact = False
            else:
                if ok:
                    out.append((pt, True))
                continue
        fpt = tuple(to_float(v) for v in pt)
        scale = max(1.0, max((abs(float(c)) for p in polys for c in p.coeffs()), default=1.0))
        if all(abs(_eval_float(p, fpt)) <= 1e-9 * scale for p in polys):
            out.append((fpt, False))
    return out


@lru_cache(maxsize=4096)
def _lex_basis(exprs: tuple, order: tuple) -> tuple:
    G = sp.groebner(list(exprs), *order, order="lex", domain=sp.QQ)
    return tuple(G.exprs)
