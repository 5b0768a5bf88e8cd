"""Keyed claim suites: each suite rebuilds a gadget, runs the analysis and
compares with the claimed equilibrium structure.  A suite returns a list of
:class:`Claim`; the CLI prints them and the acceptance tests assert on them.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, sqrt

import numpy as np
import sympy as sp

from .analysis import (
    CoalitionQuery,
    check_NE,
    check_pareto,
    check_strong,
    coalition_feasible,
    find_equilibria,
    grid_oracle,
    strict_infeasibility_certificate,
)
from .analysis.verdict import NO, UNKNOWN, YES
from .gadgets import build_G0, build_G1, build_G2, build_G5, build_H, lift_solution, project_profile
from .game import BOT, MixedProfile, StrategicGame, eval_payoff, is_symmetric_game, is_zero_sum
from .quadfield import qsqrt
from .symmetrize import build_D0, build_Gplus, build_GplusPrime, extend_symmetric, lift_nonsymmetric, lift_symmetric
from .systems import (
    QuadraticSystem,
    augment_irrational,
    bilinearize_homogenize,
    embed_solution,
    eval_bilinear,
    eval_quadratic,
    normalize_to_promise,
    parse_system,
    promise_point,
)

__all__ = ["Claim", "SUITES", "run_suite", "planted_system", "planted_pipeline"]


@dataclass
class Claim:
    suite: str
    name: str
    passed: bool
    detail: str = ""
    data: dict = field(default_factory=dict)


# -- planted instances ------------------------------------------------------


def planted_system(rng: random.Random, n: int, ell: int) -> tuple[QuadraticSystem, list[Fraction]]:
    """Integer-coefficient system in n variables with a planted solution in [-1, 1]^n."""
    x = [Fraction(rng.randint(-4, 4), 4) for _ in range(n)]
    monos = [(0, j) for j in range(1, n + 1)] + [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    eqs = []
    for _ in range(ell):
        picked = rng.sample(monos, rng.randint(1, min(3, len(monos))))
        terms = [(Fraction(rng.choice([-3, -2, -1, 1, 2, 3])), i, j) for i, j in picked]
        val = sum((c * (x[i - 1] if i else 1) * x[j - 1] for c, i, j in terms), Fraction(0))
        terms.append((-val, 0, 0))
        scale = lcm(*(c.denominator for c, _, _ in terms))
        eqs.append(tuple((int(c * scale), i, j) for c, i, j in terms))
    sys = QuadraticSystem(n, tuple(eqs))
    assert all(v == 0 for v in eval_quadratic(sys, x))
    return sys, x


def planted_pipeline(sys: QuadraticSystem, x):
    """normalize -> bilinearize; returns (bsys, simplex point w with q(w, w) = 0)."""
    norm = normalize_to_promise(sys)
    bsys = bilinearize_homogenize(norm)
    w = embed_solution(promise_point(x))
    return bsys, w


def _profile(game: StrategicGame, actions) -> MixedProfile:
    return MixedProfile.pure(game, actions)


def _same_set(found, expected, tol=1e-9) -> bool:
    if len(found) != len(expected):
        return False
    for e in expected:
        if not any(_close(f.profile, e, tol) for f in found):
            return False
    return True


def _close(p: MixedProfile, q: MixedProfile, tol) -> bool:
    if p == q:
        return True
    a, b = p.to_floats(), q.to_floats()
    return all(abs(u - v) <= tol for s, t in zip(a, b) for u, v in zip(s, t))


def _fmt_set(eqs) -> str:
    return "; ".join(str(e.profile) for e in eqs)


def _timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


# -- H gadgets ----------------------------------------------------------------


def suite_h1(cfg) -> list[Claim]:
    out = []
    for u in (0, 1):
        h = build_H("H1", u=u)
        eqs, dt = _timed(find_equilibria, h)
        expected = [_profile(h, ["G"] * 3), _profile(h, [BOT] * 3)] if u == 0 else [_profile(h, [BOT] * 3)]
        out.append(Claim("h1", f"H1({u}) equilibria", _same_set(eqs, expected) and dt < 10, _fmt_set(eqs), {"seconds": dt}))
    h = build_H("H1", u=1)
    v = check_NE(h, _profile(h, ["G"] * 3))
    ok = v.status == NO and v.witness["player"] == 2 and v.witness["action"] == BOT and v.witness["gain"] == 1
    out.append(Claim("h1", "H1(1) GGG: player 2 gains 1 by ⊥", ok, str(v.witness)))
    return out


def suite_h2(cfg) -> list[Claim]:
    out = []
    for k in range(2, 6):
        h = build_H("H2", k=k)
        eqs, dt = _timed(find_equilibria, h)
        uni = [Fraction(1, k)] * k
        expected = [MixedProfile([[1], uni, uni])]
        out.append(Claim("h2", f"H2(k={k}) unique uniform equilibrium", _same_set(eqs, expected) and dt < 10, _fmt_set(eqs), {"seconds": dt}))
    return out


def suite_h3(cfg) -> list[Claim]:
    h = build_H("H3", u=0)
    eqs, dt = _timed(find_equilibria, h)
    ggg, bbb = _profile(h, ["G"] * 3), _profile(h, [BOT] * 3)
    out = [Claim("h3", "H3(0) equilibria", _same_set(eqs, [ggg, bbb]) and dt < 10, _fmt_set(eqs), {"seconds": dt})]
    v = check_pareto(h, ggg, cfg.eps)
    ok = v.status == NO and _witness_verifies(h, ggg, v.witness, strict_all=False)
    out.append(Claim("h3", "H3(0) GGG is not Pareto optimal", ok, _fmt_witness(v.witness)))
    return out


def suite_h4(cfg) -> list[Claim]:
    h = build_H("H4", u=0)
    eqs, dt = _timed(find_equilibria, h)
    ggg, bbb = _profile(h, ["G"] * 3), _profile(h, [BOT] * 3)
    out = [Claim("h4", "H4(0) equilibria", _same_set(eqs, [ggg, bbb]) and dt < 10, _fmt_set(eqs), {"seconds": dt})]
    out.append(Claim("h4", "H4(0) GGG is Pareto optimal", check_pareto(h, ggg, cfg.eps).status == YES))
    out.append(Claim("h4", "H4(0) GGG is a strong equilibrium", check_strong(h, ggg, cfg.eps).status == YES))
    return out


def suite_h5(cfg) -> list[Claim]:
    h = build_H("H5")
    eqs, dt = _timed(find_equilibria, h)
    r6 = qsqrt(6)
    p1 = 1 - 1 / r6
    p2 = 3 - r6
    expected = MixedProfile([[p1, 1 - p1], [p2, 1 - p2], [p2, 1 - p2]])
    ok = len(eqs) == 1 and eqs[0].exact and eqs[0].profile == expected and dt < 10
    f = eqs[0].floats() if eqs else [[float("nan")]] * 3
    ok = ok and abs(f[0][0] - (1 - 1 / sqrt(6))) < 1e-12 and abs(f[1][0] - (3 - sqrt(6))) < 1e-12
    detail = f"P1 plays 1 w.p. {f[0][0]:.12f}, P2/P3 w.p. {f[1][0]:.12f}"
    out = [Claim("h5", "H5 unique equilibrium in Q(sqrt 6)", ok, detail, {"seconds": dt})]
    pay = eval_payoff(h, expected)
    out.append(Claim("h5", "H5 payoffs (-4(3-sqrt6), 2(3-sqrt6), 2(3-sqrt6))", pay == (-4 * p2, 2 * p2, 2 * p2), ", ".join(str(v) for v in pay)))
    return out


# -- coalitions -----------------------------------------------------------------


def _fmt_witness(w) -> str:
    if not w:
        return ""
    return f"{w.get('profile')} gains {w.get('gains')}"


def _witness_verifies(game, x, w, strict_all: bool) -> bool:
    """Re-evaluate the claimed gains with eval_payoff."""
    if not w or "profile" not in w:
        return False
    before, after = eval_payoff(game, x), eval_payoff(game, w["profile"])
    for j, g in w["gains"].items():
        if after[j - 1] - before[j - 1] != g:
            return False
    gains = [after[i] - before[i] for i in range(game.num_players)]
    if strict_all:
        return all(w["gains"][j] > 0 for j in w["gains"])
    return all(g >= 0 for g in gains) and any(g > 0 for g in gains)


def lemma9_gains():
    """Gains of players 1 and 2 in H1(1) when they leave ⊥⊥⊥ with P(G) = p1, p2."""
    p1, p2 = sp.symbols("p1 p2")
    h = build_H("H1", u=1)
    T = h.payoffs
    dist = [[p1, 1 - p1], [p2, 1 - p2], [0, 1]]
    gains = []
    for j in (0, 1):
        val = sum(
            sp.Rational(T[a, b, c, j].numerator, T[a, b, c, j].denominator) * dist[0][a] * dist[1][b] * dist[2][c]
            for a in range(2) for b in range(2) for c in range(2)
        )
        base = T[1, 1, 1, j]
        gains.append(sp.expand(val - sp.Rational(base.numerator, base.denominator)))
    return (p1, p2), gains


def suite_strong(cfg) -> list[Claim]:
    out = []
    h1 = build_H("H1", u=1)
    bbb = _profile(h1, [BOT] * 3)
    v, dt = _timed(check_strong, h1, bbb, cfg.eps)
    out.append(Claim("strong", "H1(1) ⊥⊥⊥ is strong (no UNKNOWN)", v.status == YES and dt < 30, v.detail, {"seconds": dt}))
    h0 = build_H("H1", u=0)
    ggg = _profile(h0, ["G"] * 3)
    v, dt = _timed(check_strong, h0, ggg, cfg.eps)
    ok = v.status == NO and _witness_verifies(h0, ggg, v.witness, strict_all=True) and dt < 30
    out.append(Claim("strong", "H1(0) GGG is not strong", ok, _fmt_witness(v.witness), {"seconds": dt}))
    v = coalition_feasible(h0, ggg, CoalitionQuery({1, 2}, eps=cfg.eps))
    w = v.witness or {}
    ok = v.status == YES and w.get("gains") == {1: 2, 2: 1} and w["profile"].strategies[:2] == ((0, 1), (0, 1))
    out.append(Claim("strong", "H1(0) GGG: players 1,2 move to (⊥,⊥,G) gaining (2,1)", ok, _fmt_witness(w)))
    (p1, p2), gains = lemma9_gains()
    want = [p1 * p2 + 4 * p2 - 2 * p1, p1 * p2 - 4 * p2 + p1]
    out.append(Claim("strong", "H1(1) ⊥⊥⊥ pair gains are p1p2+4p2-2p1 and p1p2-4p2+p1",
                     all(sp.expand(g - e) == 0 for g, e in zip(gains, want)), str(gains)))
    lam = strict_infeasibility_certificate(h1, bbb, {1, 2})
    ok = lam is not None
    if ok:
        combo = sp.expand(sum(sp.Rational(l.numerator, l.denominator) * g for l, g in zip(lam, want)))
        ok = all(combo.subs({p1: a, p2: b}) <= 0 for a in (0, 1) for b in (0, 1))
    out.append(Claim("strong", "both gains positive is infeasible on [0,1]^2", ok, f"weights {lam}"))
    return out


def suite_pareto(cfg) -> list[Claim]:
    out = suite_h3(cfg)[1:] + suite_h4(cfg)[1:2]
    rng = np.random.default_rng(cfg.seed)
    ok = True
    for _ in range(5):
        T = np.empty((2, 2, 2, 3), dtype=object)
        for idx in np.ndindex(2, 2, 2):
            a, b = (Fraction(int(v), 4) for v in rng.integers(-12, 13, size=2))
            T[idx] = [a, b, -a - b]
        g = StrategicGame(T)
        for e in find_equilibria(g):
            ok = ok and check_pareto(g, e.profile, cfg.eps).status == YES
        ok = ok and check_pareto(g, MixedProfile.uniform(g), cfg.eps).status == YES
    out.append(Claim("pareto", "zero-sum profiles are Pareto optimal", ok))
    return [Claim("pareto", c.name, c.passed, c.detail, c.data) for c in out]


def random_game(rng: random.Random) -> StrategicGame:
    T = np.empty((2, 2, 2, 3), dtype=object)
    for idx in np.ndindex(T.shape):
        T[idx] = Fraction(rng.randint(-12, 12), 4)
    return StrategicGame(T)


def oracle_agreement(seed: int, games: int = 50, eps=Fraction(1, 1024)):
    """Compare branch and bound with the grid scan on random 2x2x2 games.

    Queries run at the game's equilibria and at one random rational profile.
    Returns (agreements, disagreements, borderline) with disagreement records.
    """
    rng = random.Random(seed)
    coalitions = [{1}, {2}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}]
    agree, bad, border = 0, [], 0
    for gi in range(games):
        g = random_game(rng)
        profiles = [e.profile for e in find_equilibria(g)]
        q = [Fraction(rng.randint(1, 7), 8) for _ in range(3)]
        profiles.append(MixedProfile([[v, 1 - v] for v in q]))
        for x in profiles:
            B1 = coalitions[rng.randrange(len(coalitions))]
            query = CoalitionQuery(B1, eps=eps)
            v = coalition_feasible(g, x, query)
            if v.status == UNKNOWN:
                border += 1
                continue
            coarse = grid_oracle(g, x, query, N=64)
            margin = coarse.stats["margin"]
            if v.status == YES:
                fine = grid_oracle(g, x, query, N=256)
                w = v.witness
                ok = fine.status == YES or all(w["gains"][j] >= (eps if j in B1 else 0) for j in w["gains"])
                ok = ok and _gains_match(g, x, w)
            else:
                if abs(margin) <= 1e-6:
                    border += 1
                    continue
                ok = coarse.status == NO
            if ok:
                agree += 1
            else:
                bad.append((gi, sorted(B1), v.status, coarse.status))
    return agree, bad, border


def _gains_match(g, x, w) -> bool:
    before, after = eval_payoff(g, x), eval_payoff(g, w["profile"])
    return all(after[j - 1] - before[j - 1] == gj for j, gj in w["gains"].items())


def suite_oracle(cfg) -> list[Claim]:
    agree, bad, border = oracle_agreement(cfg.seed)
    return [Claim("oracle", "branch and bound agrees with the grid scan", not bad,
                  f"{agree} agree, {len(bad)} disagree, {border} borderline", {"disagreements": bad})]


# -- reductions -------------------------------------------------------------------


def suite_roundtrip(cfg, count: int = 100) -> list[Claim]:
    rng = random.Random(cfg.seed)
    fails = []
    for t in range(count):
        sys, x = planted_system(rng, rng.randint(1, 4), rng.randint(1, 4))
        bsys, w = planted_pipeline(sys, x)
        g1 = build_G1(build_G0(bsys))
        prof = lift_solution(bsys, w, w, g1)
        v = check_NE(g1, prof)
        pay = eval_payoff(g1, prof)
        back = project_profile(g1, prof)
        ok = (
            v.status == YES
            and pay == (0, 0, 0)
            and prof.max_probability() <= Fraction(1, 2)
            and check_NE(g1, _profile(g1, [BOT] * 3)).status == YES
            and back == (w, w)
        )
        if not ok:
            fails.append(t)
    return [Claim("roundtrip", f"{count} planted systems lift to payoff-0 equilibria of G1", not fails, f"failures: {fails}")]


NEGATIVE_SYSTEMS = {
    "1=0": "qsys 1\nvars 1\neq 1:0:0\n",
    "x1^2+1=0": "qsys 1\nvars 1\neq 1:1:1 1:0:0\n",
    "x1^2+x2^2+1=0": "qsys 1\nvars 2\neq 1:1:1 1:2:2 1:0:0\n",
}


def suite_negative(cfg) -> list[Claim]:
    out = []
    for name, text in NEGATIVE_SYSTEMS.items():
        bsys = bilinearize_homogenize(parse_system(text))
        g1 = build_G1(build_G0(bsys))
        ms = cfg.max_support or (None if bsys.dim <= 2 else 2)
        eqs, dt = _timed(find_equilibria, g1, max_support=ms)
        ok = _same_set(eqs, [_profile(g1, [BOT] * 3)])
        out.append(Claim("negative", f"G1 of {name} has only ⊥⊥⊥ (support <= {ms or 'all'})", ok, _fmt_set(eqs), {"seconds": dt}))
    return out


def suite_g0(cfg, instances: int = 20, samples: int = 50) -> list[Claim]:
    rng = random.Random(cfg.seed)
    bad = 0
    sizes_ok = True
    for _ in range(instances):
        sys, x = planted_system(rng, rng.randint(1, 3), rng.randint(1, 3))
        bsys = bilinearize_homogenize(sys)
        g0 = build_G0(bsys)
        ell, N = bsys.num_equations, bsys.dim
        sizes_ok = sizes_ok and g0.num_cells() == 2 * ell * N * N
        for _ in range(samples):
            xv = _rand_simplex(rng, N)
            yv = _rand_simplex(rng, N)
            k = rng.randrange(ell)
            s = rng.choice((1, -1))
            a = 2 * k + (0 if s == 1 else 1)
            p1 = [Fraction(int(i == a)) for i in range(2 * ell)]
            pay = eval_payoff(g0, MixedProfile([p1, xv, yv]))
            q = eval_bilinear(bsys, xv, yv)[k]
            if not (pay[0] / 2 == -pay[1] == -pay[2] == s * q):
                bad += 1
    return [
        Claim("g0", f"payoff identity on {instances * samples} samples", bad == 0, f"{bad} mismatches"),
        Claim("g0", "cell count is 2 ell (n+1)^2", sizes_ok),
    ]


def _rand_simplex(rng: random.Random, n: int) -> list[Fraction]:
    w = [Fraction(rng.randint(0, 12)) for _ in range(n)]
    if sum(w) == 0:
        w[0] = Fraction(1)
    tot = sum(w)
    return [v / tot for v in w]


def suite_zerosum(cfg) -> list[Claim]:
    rng = random.Random(cfg.seed)
    ok = True
    for _ in range(5):
        sys, _ = planted_system(rng, rng.randint(1, 2), rng.randint(1, 2))
        g0 = build_G0(bilinearize_homogenize(sys))
        g1 = build_G1(g0)
        for g in (g0, g1, build_G2(g1), build_G5(g1)):
            ok = ok and is_zero_sum(g)
    for g in (build_H("H1", u=0), build_H("H1", u=3), build_H("H2", k=4), build_H("H5")):
        ok = ok and is_zero_sum(g)
    return [Claim("zerosum", "G0, G1, G2, G5, H1, H2, H5 are zero-sum", ok)]


def suite_symmetric(cfg, count: int = 50) -> list[Claim]:
    rng = random.Random(cfg.seed)
    pay_ok, sym_ok, bot_ok = True, True, True
    for t in range(count):
        sys, x = planted_system(rng, rng.randint(1, 2), rng.randint(1, 2))
        bsys, w = planted_pipeline(sys, x)
        g0 = build_G0(bsys)
        gplus, info = build_Gplus(g0)
        d0 = build_D0(gplus)
        prof = lift_symmetric(bsys, w, d0)
        pay_ok = pay_ok and eval_payoff(d0, prof) == (info.K,) * 3
        if t < 3:
            d1 = extend_symmetric(d0, info, "D1")
            d4 = extend_symmetric(d0, info, "D4")
            gp, _ = build_GplusPrime(g0)
            dp1 = extend_symmetric(build_D0(gp, "ROLE_PRIME"), info, "D'1")
            sym_ok = sym_ok and all(is_symmetric_game(g) for g in (d0, d1, d4, dp1))
            bbb = _profile(d1, [BOT] * 3)
            bot_ok = bot_ok and eval_payoff(d1, bbb) == (info.K + 1,) * 3 and check_NE(d1, bbb).status == YES
    return [
        Claim("symmetric", f"{count} symmetric lifts into D0 pay exactly K = 2M/9", pay_ok),
        Claim("symmetric", "D0, D1, D4, D'1 are symmetric games", sym_ok),
        Claim("symmetric", "all-⊥ in D1 pays K+1 and is an equilibrium", bot_ok),
    ]


def suite_nonsymmetric(cfg, count: int = 20) -> list[Claim]:
    rng = random.Random(cfg.seed)
    fails = []
    for t in range(count):
        sys, x = planted_system(rng, rng.randint(1, 2), rng.randint(1, 2))
        bsys, w = planted_pipeline(sys, x)
        g0 = build_G0(bsys)
        gp, info = build_GplusPrime(g0)
        dp1 = extend_symmetric(build_D0(gp, "ROLE_PRIME"), info, "D'1")
        prof = lift_nonsymmetric(bsys, w, w, dp1)
        ok = (
            check_NE(dp1, prof).status == YES
            and eval_payoff(dp1, prof) == (info.M,) * 3
            and not prof.is_symmetric()
            and check_NE(dp1, _profile(dp1, [BOT] * 3)).status == YES
        )
        if not ok:
            fails.append(t)
    return [Claim("nonsymmetric", f"{count} role lifts into D'1 are non-symmetric equilibria paying M", not fails, f"failures: {fails}")]


IRRATIONAL_SYSTEMS = {
    "x1=0": "qsys 1\nvars 1\neq 1:0:1\n",
    "x1^2-x1=0": "qsys 1\nvars 1\neq 1:1:1 -1:0:1\n",
    "x1=0,x2=0": "qsys 1\nvars 2\neq 1:0:1\neq 1:0:2\n",
}


def suite_irrational(cfg) -> list[Claim]:
    out = []
    for name, text in IRRATIONAL_SYSTEMS.items():
        bsys = bilinearize_homogenize(augment_irrational(parse_system(text)))
        g1 = build_G1(build_G0(bsys))
        eqs, dt = _timed(find_equilibria, g1, max_support=cfg.max_support or 2)
        zero = [e for e in eqs if e.payoffs == (0, 0, 0)]
        ok = bool(zero) and all(e.exact and not e.profile.is_rational() for e in zero)
        out.append(Claim("irrational", f"augmented {name}: payoff-0 equilibria are irrational", ok,
                         f"{len(zero)} payoff-0 of {len(eqs)}", {"seconds": dt}))
    rng = random.Random(cfg.seed)
    sys, x = planted_system(rng, 1, 1)
    bsys, w = planted_pipeline(sys, x)
    g5 = build_G5(build_G1(build_G0(bsys)))
    prof = lift_solution(bsys, w, w, g5)
    out.append(Claim("irrational", "G5 of a planted system has a rational equilibrium",
                     prof.is_rational() and check_NE(g5, prof).status == YES))
    g5 = build_G5(build_G1(build_G0(bilinearize_homogenize(parse_system(NEGATIVE_SYSTEMS["1=0"])))))
    eqs = find_equilibria(g5)
    ok = len(eqs) == 1 and eqs[0].exact and not eqs[0].profile.is_rational()
    out.append(Claim("irrational", "G5 of 1=0 has only the irrational H5 equilibrium", ok, _fmt_set(eqs)))
    return out


SUITES = {
    "h1": suite_h1,
    "h2": suite_h2,
    "h3": suite_h3,
    "h4": suite_h4,
    "h5": suite_h5,
    "strong": suite_strong,
    "pareto": suite_pareto,
    "oracle": suite_oracle,
    "roundtrip": suite_roundtrip,
    "negative": suite_negative,
    "g0": suite_g0,
    "zerosum": suite_zerosum,
    "symmetric": suite_symmetric,
    "nonsymmetric": suite_nonsymmetric,
    "irrational": suite_irrational,
}


@dataclass
class SuiteConfig:
    seed: int = 0
    eps: Fraction = Fraction(1, 1024)
    max_support: int | None = None


def run_suite(name: str, cfg: SuiteConfig | None = None) -> list[Claim]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](cfg or SuiteConfig())
