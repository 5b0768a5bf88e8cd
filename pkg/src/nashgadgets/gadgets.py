"""Gadget games H1..H5 and the reduction games G0..G5.

Every game built here is a 3-player :class:`StrategicGame` whose action
labels carry the gadget role: Player 1's G0 actions are ``(+,k)``/``(-,k)``,
Players 2 and 3 use ``x1..`` and ``y1..``, and the opt-out family is ``⊥``
or ``(⊥,i)``, always appended after the G0 actions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .game import BOT, MixedProfile, ShapeMismatch, StrategicGame, is_bot_label
from .systems import BilinearSystem, eval_bilinear

__all__ = [
    "BadParameter",
    "NotASolution",
    "H1_CELLS",
    "H3_CELLS",
    "H4_CELLS",
    "H5_CELLS",
    "build_H",
    "build_G0",
    "extend_with_hgadget",
    "build_G1",
    "build_G3",
    "build_G4",
    "build_G2",
    "build_G5",
    "build_gadget",
    "lift_solution",
    "project_profile",
]


class BadParameter(ValueError):
    pass


class NotASolution(ValueError):
    pass


# Cells indexed by (P1, P2, P3) with 0 = G and 1 = ⊥.  The all-G cell
# depends on u and is filled in by build_H.
H1_CELLS = {
    (0, 0, 1): (1, -1, 0),
    (0, 1, 0): (1, 0, -1),
    (0, 1, 1): (-4, 2, 2),
    (1, 0, 0): (0, 0, 0),
    (1, 0, 1): (2, -3, 1),
    (1, 1, 0): (2, 1, -3),
    (1, 1, 1): (-2, 1, 1),
}

H3_CELLS = {
    (0, 0, 1): (0, 0, 0),
    (0, 1, 0): (0, 0, 0),
    (0, 1, 1): (1, 1, 1),
    (1, 0, 0): (0, 0, 0),
    (1, 0, 1): (1, 1, 1),
    (1, 1, 0): (1, 1, 1),
    (1, 1, 1): (2, 2, 2),
}

H4_CELLS = {
    (0, 0, 1): (-3, -3, 0),
    (0, 1, 0): (-3, 0, -3),
    (0, 1, 1): (-2, -2, -2),
    (1, 0, 0): (0, -3, -3),
    (1, 0, 1): (-2, -2, -2),
    (1, 1, 0): (-2, -2, -2),
    (1, 1, 1): (-1, -1, -1),
}

# actions 1, 2 stored at indices 0, 1
H5_CELLS = {
    (0, 0, 0): (-4, 2, 2),
    (0, 0, 1): (-2, 1, 1),
    (0, 1, 0): (-2, 1, 1),
    (0, 1, 1): (0, 0, 0),
    (1, 0, 0): (0, 0, 0),
    (1, 0, 1): (-2, 1, 1),
    (1, 1, 0): (-2, 1, 1),
    (1, 1, 1): (-6, 3, 3),
}

_GB = ("G", BOT)


def _h2_u2(a2: int, a3: int, k: int) -> int:
    if a2 == a3:
        return 1
    if a2 % k == (a3 + 1) % k:
        return -1
    return 0


def build_H(name: str, u=0, k: int = 2) -> StrategicGame:
    """One of the five small gadgets.  ``u`` is used by H1, H3, H4; ``k`` by H2."""
    name = name.upper()
    u = Fraction(u)
    if name in ("H1", "H3", "H4"):
        if u < 0:
            raise BadParameter("u must be non-negative")
        cells = {"H1": H1_CELLS, "H3": H3_CELLS, "H4": H4_CELLS}[name]
        table = dict(cells)
        table[(0, 0, 0)] = (2 * u, -u, -u)
        return StrategicGame.from_function([_GB] * 3, lambda a: table[a], {"kind": name, "u": str(u)})
    if name == "H2":
        if int(k) != k or k < 2:
            raise BadParameter("k must be an integer >= 2")
        k = int(k)

        def h2(a):
            v = _h2_u2(a[1], a[2], k)
            return (0, v, -v)

        labels = [("*",), tuple(str(i) for i in range(k)), tuple(str(i) for i in range(k))]
        return StrategicGame.from_function(labels, h2, {"kind": "H2", "k": str(k)})
    if name == "H5":
        return StrategicGame.from_function([("1", "2")] * 3, lambda a: H5_CELLS[a], {"kind": "H5"})
    raise BadParameter(f"unknown gadget {name!r}")


def build_G0(bsys: BilinearSystem) -> StrategicGame:
    """The zero-sum game whose zero-payoff equilibria encode ``bsys``'s solutions."""
    ell, N = bsys.num_equations, bsys.dim
    A = np.array(bsys.matrices, dtype=object)  # (ell, N, N)
    T = np.empty((2 * ell, N, N, 3), dtype=object)
    for k in range(ell):
        for r, s in enumerate((1, -1)):
            v = s * A[k]
            T[2 * k + r, :, :, 0] = 2 * v
            T[2 * k + r, :, :, 1] = -v
            T[2 * k + r, :, :, 2] = -v
    labels = [
        tuple(f"({sg},{k + 1})" for k in range(ell) for sg in ("+", "-")),
        tuple(f"x{i + 1}" for i in range(N)),
        tuple(f"y{i + 1}" for i in range(N)),
    ]
    return StrategicGame(T, labels, {"kind": "G0", "ell": str(ell), "dim": str(N)})


def _is_two_action_gadget(h: StrategicGame) -> bool:
    return h.num_players == 3 and h.action_counts == (2, 2, 2)


def extend_with_hgadget(g0: StrategicGame, h: StrategicGame | None = None, simple_bot: bool = False) -> StrategicGame:
    """Give every player an extra ``⊥``; cells touching ``⊥`` copy ``h``.

    In ``h`` index 0 is G and index 1 is ⊥; every non-⊥ action of ``g0``
    is read as G.  With ``simple_bot`` any cell touching ``⊥`` pays 0 to
    everyone and ``h`` is ignored.
    """
    if g0.num_players != 3:
        raise ShapeMismatch("gadget extension needs a 3-player game")
    if not simple_bot and (h is None or not _is_two_action_gadget(h)):
        raise ShapeMismatch("h must be a 3-player game with actions {G, ⊥}")
    counts = g0.action_counts
    T = np.empty(tuple(n + 1 for n in counts) + (3,), dtype=object)
    zero = np.array([Fraction(0)] * 3, dtype=object)
    for prof in np.ndindex(*T.shape[:-1]):
        bits = tuple(int(a == n) for a, n in zip(prof, counts))
        if not any(bits):
            T[prof] = g0.payoffs[prof]
        elif simple_bot:
            T[prof] = zero
        else:
            T[prof] = h.payoffs[bits]
    labels = [ls + (BOT,) for ls in g0.labels]
    kind = "simple" if simple_bot else h.meta.get("kind", "H")
    meta = dict(g0.meta, kind=_EXT_NAME.get(kind, f"G0+{kind}"))
    return StrategicGame(T, labels, meta)


_EXT_NAME = {"H1": "G1", "H3": "G3", "H4": "G4", "simple": "G1-simple"}


def build_G1(g0: StrategicGame, simple_bot: bool = False) -> StrategicGame:
    if simple_bot:
        return extend_with_hgadget(g0, simple_bot=True)
    return extend_with_hgadget(g0, build_H("H1"))


def build_G3(g0: StrategicGame) -> StrategicGame:
    return extend_with_hgadget(g0, build_H("H3"))


def build_G4(g0: StrategicGame) -> StrategicGame:
    return extend_with_hgadget(g0, build_H("H4"))


def _translate(g1: StrategicGame, families: Sequence[int]) -> tuple[list, list]:
    """Index maps into ``g1`` after splitting ⊥ into ``families[i]`` copies.

    Returns ``(labels, back)``: new labels per player and, per player, the
    ``g1`` action index each new action reads from.
    """
    labels, back = [], []
    for i, ls in enumerate(g1.labels):
        bot = ls.index(BOT)
        core = [a for a in range(len(ls)) if a != bot]
        copies = families[i]
        if copies:
            names = [f"({BOT},{c})" for c in copies]
            labels.append(tuple(ls[a] for a in core) + tuple(names))
            back.append(core + [bot] * len(names))
        else:
            labels.append(ls)
            back.append(list(range(len(ls))))
    return labels, back


def build_G2(g1: StrategicGame) -> StrategicGame:
    """Split Players 2 and 3's ⊥ into ``(⊥,0..k-1)`` and perturb the all-⊥
    cells by H2(k), where k is the largest action count of ``g1``."""
    k = max(g1.action_counts)
    labels, back = _translate(g1, [None, list(range(k)), list(range(k))])
    bots = [g1.action_index(i, BOT) for i in range(3)]
    allbot = g1.payoffs[tuple(bots)]
    n2 = len(labels[1]) - k
    n3 = len(labels[2]) - k

    def cell(a):
        src = tuple(back[i][a[i]] for i in range(3))
        if src == tuple(bots):
            v = _h2_u2(a[1] - n2, a[2] - n3, k)
            return (allbot[0], allbot[1] + v, allbot[2] - v)
        return g1.payoffs[src]

    meta = dict(g1.meta, kind="G2", k=str(k))
    return StrategicGame.from_function(labels, cell, meta)


def build_G5(g1: StrategicGame) -> StrategicGame:
    """Split every player's ⊥ into ``(⊥,1), (⊥,2)``; all-⊥ cells get
    ``g1``'s all-⊥ payoff plus one sixth of H5."""
    labels, back = _translate(g1, [[1, 2]] * 3)
    bots = tuple(g1.action_index(i, BOT) for i in range(3))
    allbot = g1.payoffs[bots]
    offs = [len(ls) - 2 for ls in labels]

    def cell(a):
        src = tuple(back[i][a[i]] for i in range(3))
        if src == bots:
            h = H5_CELLS[tuple(a[i] - offs[i] for i in range(3))]
            return tuple(allbot[i] + Fraction(h[i], 6) for i in range(3))
        return g1.payoffs[src]

    meta = dict(g1.meta, kind="G5")
    return StrategicGame.from_function(labels, cell, meta)


def build_gadget(name: str, bsys: BilinearSystem | None = None, u=0, k: int = 2, simple_bot: bool = False) -> StrategicGame:
    """Dispatch on a gadget name (case-insensitive): h1..h5 or g0..g5."""
    name = name.lower()
    if name.startswith("h"):
        return build_H(name, u=u, k=k)
    if bsys is None:
        raise BadParameter(f"gadget {name} needs a bilinear system")
    g0 = build_G0(bsys)
    if name == "g0":
        return g0
    if name == "g1":
        return build_G1(g0, simple_bot=simple_bot)
    if name == "g2":
        return build_G2(build_G1(g0))
    if name == "g3":
        return build_G3(g0)
    if name == "g4":
        return build_G4(g0)
    if name == "g5":
        return build_G5(build_G1(g0))
    raise BadParameter(f"unknown gadget {name!r}")


# -- solution <-> profile -------------------------------------------------------


def _core_actions(game: StrategicGame, player: int) -> list[int]:
    return [a for a, lab in enumerate(game.labels[player]) if not is_bot_label(lab)]


def lift_solution(bsys: BilinearSystem, x: Sequence, y: Sequence, game: StrategicGame) -> MixedProfile:
    """Profile (uniform on Player 1's G0 actions, x, y) with no mass on ⊥."""
    if len(x) != bsys.dim or len(y) != bsys.dim:
        raise ShapeMismatch("solution vectors must have length dim")
    vals = eval_bilinear(bsys, x, y)
    bad = [k + 1 for k, v in enumerate(vals) if v != 0]
    if bad:
        raise NotASolution(f"q_k(x, y) != 0 for k in {bad}")
    strats = []
    for i, vec in enumerate((None, x, y)):
        core = _core_actions(game, i)
        s = [Fraction(0)] * game.action_counts[i]
        if vec is None:
            for a in core:
                s[a] = Fraction(1, len(core))
        else:
            if len(core) != len(vec):
                raise ShapeMismatch(f"player {i + 1} has {len(core)} G0 actions, vector has {len(vec)}")
            for a, v in zip(core, vec):
                s[a] = v
        strats.append(s)
    return MixedProfile(strats)


def project_profile(game: StrategicGame, profile: MixedProfile):
    """Players 2 and 3's strategies conditioned on non-⊥ actions.

    Returns ``(x, y)``, or ``None`` when either player puts no mass on
    G0 actions.
    """
    out = []
    for i in (1, 2):
        core = _core_actions(game, i)
        mass = sum((profile[i][a] for a in core), Fraction(0))
        if mass == 0:
            return None
        out.append([profile[i][a] / mass for a in core])
    return tuple(out)
