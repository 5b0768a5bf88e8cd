"""Command-line front end.

    nashgadgets reduce    --in sys.qsys --gadget g1 --out g1.game
    nashgadgets check     --in g1.game --profile x.prof --property ne
    nashgadgets solve     --in g1.game --max-support 2
    nashgadgets lemmas    --suite h5
    nashgadgets roundtrip --seed 3 --gadget g1

Reports are plain text followed by one JSON object per check.  Exit status
is 0 when every check passes, 1 when one fails or is undecided, 2 on usage
or input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import gadgets, symmetrize
from .analysis import (
    CoalitionQuery,
    ConditionParams,
    UndecidedCondition,
    UnknownProblemId,
    check_condition,
    check_NE,
    check_pareto,
    check_strong,
    coalition_feasible,
    find_equilibria,
    grid_oracle,
)
from .analysis.verdict import YES
from .game import MixedProfile, StrategicGame, eval_payoff, format_game, is_bot_label, parse_game, parse_profile
from .quadfield import QuadAlgebraic, format_number
from .suites import SUITES, SuiteConfig, planted_system, run_suite
from .systems import (
    BilinearSystem,
    QuadraticSystem,
    augment_irrational,
    bilinearize_homogenize,
    embed_solution,
    eval_bilinear,
    eval_quadratic,
    format_bilinear,
    normalize_to_promise,
    parse_bilinear,
    parse_system,
    promise_point,
)

G_GADGETS = ("g0", "g1", "g2", "g3", "g4", "g5")
H_GADGETS = ("h1", "h2", "h3", "h4", "h5")
D_GADGETS = ("d0", "d1", "d4", "dp0", "dp1")


class UsageError(Exception):
    pass


# -- output ------------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, (Fraction, QuadAlgebraic)):
        return format_number(v)
    if isinstance(v, MixedProfile):
        return [[format_number(p) for p in s] for s in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _show(v) -> str:
    """Human-readable form; JSON records keep the parseable literals."""
    if isinstance(v, MixedProfile):
        return " | ".join(" ".join(str(p) for p in s) for s in v)
    if isinstance(v, dict):
        return ", ".join(f"{k}: {_show(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_show(x) for x in v) + ")"
    return str(v)


class Report:
    def __init__(self, stream):
        self.stream = stream
        self.records = []
        self.failed = False

    def line(self, text: str = ""):
        print(text, file=self.stream)

    def record(self, ok: bool, **fields):
        self.failed |= not ok
        self.records.append(dict(fields, ok=ok))

    def finish(self) -> int:
        for r in self.records:
            print(json.dumps(_jsonable(r), ensure_ascii=False, sort_keys=True), file=self.stream)
        return 1 if self.failed else 0


# -- input -------------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _header(text: str) -> str:
    for raw in text.splitlines():
        tok = raw.split("#", 1)[0].split()
        if tok:
            return tok[0]
    return ""


def _load_system(path: str):
    """A QuadraticSystem or BilinearSystem, by the file's header word."""
    text = _read(path)
    kind = _header(text)
    if kind == "qsys":
        return parse_system(text)
    if kind == "bsys":
        return parse_bilinear(text)
    raise UsageError(f"{path}: expected a qsys or bsys file")


def _load_game(path: str) -> StrategicGame:
    return parse_game(_read(path))


def _to_bilinear(system, normalize: bool, augment: bool) -> BilinearSystem:
    if isinstance(system, BilinearSystem):
        if normalize or augment:
            raise UsageError("--normalize/--augment apply to qsys input only")
        return system
    if augment:
        system = augment_irrational(system)
    if normalize:
        system = normalize_to_promise(system)
    return bilinearize_homogenize(system)


def _build(args) -> StrategicGame | BilinearSystem:
    name = args.gadget.lower()
    if name in H_GADGETS:
        return gadgets.build_H(name, u=Fraction(args.u), k=args.k)
    if not args.input:
        raise UsageError(f"--gadget {name} needs --in")
    bsys = _to_bilinear(_load_system(args.input), args.normalize, args.augment)
    if name == "bsys":
        return bsys
    if name in G_GADGETS:
        return gadgets.build_gadget(name, bsys, simple_bot=args.simple_bot)
    if name in D_GADGETS:
        g0 = gadgets.build_G0(bsys)
        if name.startswith("dp"):
            src, info = symmetrize.build_GplusPrime(g0)
            d0 = symmetrize.build_D0(src, "ROLE_PRIME")
        else:
            src, info = symmetrize.build_Gplus(g0)
            d0 = symmetrize.build_D0(src, "ROLE_SUM")
        if name in ("d0", "dp0"):
            return d0
        return symmetrize.extend_symmetric(d0, info, {"d1": "D1", "d4": "D4", "dp1": "D'1"}[name])
    raise UsageError(f"unknown gadget {name!r}")


def _profile_arg(args, game: StrategicGame) -> MixedProfile:
    if args.profile and args.pure:
        raise UsageError("give --profile or --pure, not both")
    if args.pure:
        labels = args.pure if len(args.pure) > 1 else args.pure[0].split(",")
        if len(labels) != game.num_players:
            raise UsageError(f"--pure needs {game.num_players} labels")
        try:
            return MixedProfile.pure(game, labels)
        except (KeyError, ValueError) as exc:
            raise UsageError(f"--pure: {exc}") from None
    if not args.profile:
        raise UsageError("check needs --profile or --pure")
    prof = parse_profile(_read(args.profile))
    if tuple(len(s) for s in prof) != game.action_counts:
        raise UsageError("profile shape does not match the game")
    return prof


def _support_sets(text: str | None, game: StrategicGame):
    """``a,b;c;d`` -> per-player action index sets; ``nobot`` means all but ⊥."""
    if text is None:
        return None
    if text == "nobot":
        return [{a for a, lab in enumerate(ls) if not is_bot_label(lab)} for ls in game.labels]
    parts = text.split(";")
    if len(parts) != game.num_players:
        raise UsageError(f"--T needs {game.num_players} ';'-separated groups")
    out = []
    for i, part in enumerate(parts):
        labs = [s for s in part.split(",") if s]
        try:
            out.append({game.action_index(i, lab) for lab in labs})
        except (KeyError, ValueError) as exc:
            raise UsageError(f"--T: {exc}") from None
    return out


# -- commands ------------------------------------------------------------------


def cmd_reduce(args, rep: Report) -> int:
    obj = _build(args)
    if isinstance(obj, BilinearSystem):
        text = format_bilinear(obj)
        rep.record(True, command="reduce", gadget="bsys", dim=obj.dim, equations=obj.num_equations)
    else:
        text = format_game(obj)
        # the written game has to read back identically
        back = parse_game(text)
        ok = back == obj and format_game(back) == text
        rep.record(ok, command="reduce", gadget=args.gadget.lower(), actions=list(obj.action_counts), roundtrip=ok)
    if not args.out:
        # stdout carries the file itself, so no report block
        rep.stream.write(text)
        return 1 if rep.failed else 0
    Path(args.out).write_text(text, encoding="utf-8")
    rep.line(f"wrote {args.out}")
    return rep.finish()


def _print_verdict(rep: Report, prop: str, v):
    rep.line(f"{prop}: {v.status}" + (f"  ({v.detail})" if v.detail else ""))
    if v.witness:
        for key, val in v.witness.items():
            rep.line(f"  {key}: {_show(val)}")


def cmd_check(args, rep: Report) -> int:
    game = _load_game(args.input)
    x = _profile_arg(args, game)
    eps = Fraction(args.eps)
    prop = args.property
    if prop == "ne":
        v = check_NE(game, x)
    elif prop == "pareto":
        v = check_pareto(game, x, eps)
    elif prop == "strong":
        v = check_strong(game, x, eps)
    elif prop.startswith("coalition:"):
        q = _coalition_arg(prop[len("coalition:"):], eps)
        if args.grid:
            v = grid_oracle(game, x, q, N=args.grid)
        else:
            v = coalition_feasible(game, x, q)
    elif prop.startswith("condition:"):
        return _check_condition(args, rep, game, x, prop[len("condition:"):], eps)
    else:
        raise UsageError(f"unknown property {prop!r}")
    _print_verdict(rep, prop, v)
    rep.record(v.status == YES, command="check", property=prop, status=v.status, witness=v.witness)
    return rep.finish()


def _coalition_arg(text: str, eps) -> CoalitionQuery:
    """``1,2`` (strict improvers) or ``1/2,3`` (strict / weak)."""
    strict, _, weak = text.partition("/")
    try:
        B1 = {int(t) for t in strict.split(",") if t}
        B2 = {int(t) for t in weak.split(",") if t}
        return CoalitionQuery(B1, B2, eps=eps)
    except ValueError as exc:
        raise UsageError(f"coalition: {exc}") from None


def _check_condition(args, rep, game, x, pid, eps) -> int:
    params = ConditionParams(Fraction(args.u), args.k, _support_sets(args.T, game), eps)
    if pid.replace("Exists", "").startswith("Second"):
        params.equilibria = [e.profile for e in find_equilibria(game, max_support=args.max_support, seed=args.seed)]
    try:
        val = check_condition(pid, game, x, params)
    except UnknownProblemId:
        raise UsageError(f"unknown problem id {pid!r}") from None
    except UndecidedCondition as exc:
        rep.line(f"condition {pid}: UNKNOWN ({exc})")
        rep.record(False, command="check", property=f"condition:{pid}", status="UNKNOWN")
        return rep.finish()
    rep.line(f"condition {pid}: {'true' if val else 'false'}")
    rep.record(val, command="check", property=f"condition:{pid}", value=val)
    return rep.finish()


def cmd_solve(args, rep: Report) -> int:
    game = _load_game(args.input)
    eqs = find_equilibria(game, max_support=args.max_support, tolerance=args.tolerance, seed=args.seed)
    rep.line(f"{len(eqs)} equilibria")
    for n, e in enumerate(eqs, 1):
        rep.line(f"[{n}] {e.flag}  payoffs {_show(e.payoffs)}")
        for i, s in enumerate(e.profile):
            rep.line(f"    player {i + 1}: " + " ".join(str(v) for v in s))
        rep.record(True, command="solve", index=n, flag=e.flag, profile=e.profile, payoffs=list(e.payoffs))
    return rep.finish()


def cmd_lemmas(args, rep: Report) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if any(n not in SUITES for n in names):
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, {', '.join(SUITES)}")
    cfg = SuiteConfig(seed=args.seed, eps=Fraction(args.eps), max_support=args.max_support)
    for name in names:
        for c in run_suite(name, cfg):
            rep.line(f"{'PASS' if c.passed else 'FAIL'}  {c.suite}: {c.name}" + (f"  [{c.detail}]" if c.detail else ""))
            rep.record(c.passed, command="lemmas", suite=c.suite, claim=c.name)
    return rep.finish()


def _parse_vector(text: str) -> list:
    try:
        return [Fraction(t) for t in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--solution: {exc}") from None


def cmd_roundtrip(args, rep: Report) -> int:
    """plant -> reduce -> lift -> verify -> project, with exact residuals."""
    if args.input:
        system = _load_system(args.input)
        if not isinstance(system, QuadraticSystem):
            raise UsageError("roundtrip needs a qsys input")
        if not args.solution:
            raise UsageError("--in needs --solution")
        x = _parse_vector(args.solution)
    else:
        rng = random.Random(args.seed)
        system, x = planted_system(rng, rng.randint(1, 4), rng.randint(1, 4))
    if len(x) != system.var_count:
        raise UsageError("solution length does not match the system")
    residual = eval_quadratic(system, x)
    rep.line(f"system: {system.var_count} variables, {system.num_equations} equations")
    rep.line("planted x: " + " ".join(str(v) for v in x))
    rep.line("system residuals: " + " ".join(str(v) for v in residual))
    bsys = bilinearize_homogenize(normalize_to_promise(system))
    w = embed_solution(promise_point(x))
    bres = eval_bilinear(bsys, w, w)
    rep.line("bilinear residuals: " + " ".join(str(v) for v in bres))
    name = args.gadget.lower()
    g0 = gadgets.build_G0(bsys)
    if name in ("g1", "g5"):
        game = gadgets.build_G1(g0, simple_bot=args.simple_bot)
        if name == "g5":
            game = gadgets.build_G5(game)
        prof = gadgets.lift_solution(bsys, w, w, game)
        back = gadgets.project_profile(game, prof)
        proj_res = [max((abs(a - b) for a, b in zip(u, v)), default=0) for u, v in zip(back, (w, w))] if back else None
    elif name in ("d0", "d1"):
        gp, info = symmetrize.build_Gplus(g0)
        game = symmetrize.build_D0(gp)
        if name == "d1":
            game = symmetrize.extend_symmetric(game, info, "D1")
        prof = symmetrize.lift_symmetric(bsys, w, game)
        pr = symmetrize.project_symmetric(game, prof[0])
        proj_res = [max(abs(a - b) for a, b in zip(pr.conditionals[b], w)) for b in (1, 2)]
    elif name == "dp1":
        gp, info = symmetrize.build_GplusPrime(g0)
        game = symmetrize.extend_symmetric(symmetrize.build_D0(gp, "ROLE_PRIME"), info, "D'1")
        prof = symmetrize.lift_nonsymmetric(bsys, w, w, game)
        proj_res = None
    else:
        raise UsageError("roundtrip supports --gadget g1, g5, d0, d1, dp1")
    v = check_NE(game, prof)
    gain = v.witness["gain"] if v.witness and "gain" in v.witness else Fraction(0)
    pay = eval_payoff(game, prof)
    rep.line(f"game {name}: actions {list(game.action_counts)}")
    rep.line("lifted profile:")
    for i, s in enumerate(prof):
        rep.line(f"    player {i + 1}: " + " ".join(str(v) for v in s))
    rep.line(f"NE check: {v.status}, largest deviation gain {max(gain, Fraction(0))}")
    rep.line("payoffs: " + _show(pay))
    if proj_res is not None:
        rep.line("projection residuals: " + " ".join(str(r) for r in proj_res))
    ok = all(r == 0 for r in residual) and all(r == 0 for r in bres) and v.status == YES
    ok = ok and (proj_res is None or all(r == 0 for r in proj_res))
    rep.record(ok, command="roundtrip", gadget=name, ne=v.status, payoffs=list(pay))
    return rep.finish()


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nashgadgets", description="Gadget games for quadratic systems and exact equilibrium checks.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--in", dest="input", help="input file (.qsys, .bsys or .game)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--eps", default="1/1024", help="coalition improvement margin")
        sp.add_argument("--max-support", type=int, default=None)
        sp.add_argument("--tolerance", type=float, default=1e-12)

    r = sub.add_parser("reduce", help="build a gadget game or bilinear system")
    common(r)
    r.add_argument("--gadget", required=True, help="bsys, g0..g5, h1..h5, d0, d1, d4, dp0, dp1")
    r.add_argument("--out")
    r.add_argument("--u", default="0")
    r.add_argument("--k", type=int, default=2)
    r.add_argument("--simple-bot", action="store_true")
    r.add_argument("--normalize", action="store_true", help="move solutions into the promise region first")
    r.add_argument("--augment", action="store_true", help="add 2w^2 - 1 = 0 first")

    c = sub.add_parser("check", help="verify a property of a profile")
    common(c)
    c.add_argument("--profile", help=".prof file")
    c.add_argument("--pure", nargs="+", help="one action label per player (or one comma-joined string)")
    c.add_argument("--property", default="ne", help="ne, pareto, strong, coalition:<B1>[/<B2>], condition:<id>")
    c.add_argument("--grid", type=int, default=None, help="use the grid scan with this denominator")
    c.add_argument("--u", default="0")
    c.add_argument("--k", type=int, default=0)
    c.add_argument("--T", default=None, help="per-player label sets 'a,b;c;d' or 'nobot'")

    s = sub.add_parser("solve", help="enumerate equilibria")
    common(s)

    lm = sub.add_parser("lemmas", help="run a claim suite")
    common(lm)
    lm.add_argument("--suite", required=True, help="all, " + ", ".join(SUITES))

    rt = sub.add_parser("roundtrip", help="plant, reduce, lift, verify, project")
    common(rt)
    rt.add_argument("--gadget", default="g1")
    rt.add_argument("--solution", help="comma-separated planted solution for --in")
    rt.add_argument("--simple-bot", action="store_true")
    return p


COMMANDS = {"reduce": cmd_reduce, "check": cmd_check, "solve": cmd_solve, "lemmas": cmd_lemmas, "roundtrip": cmd_roundtrip}


def main(argv=None, stream=None) -> int:
    args = build_parser().parse_args(argv)
    rep = Report(stream or sys.stdout)
    if args.command in ("check", "solve") and not args.input:
        print(f"error: {args.command} needs --in", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args, rep)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
