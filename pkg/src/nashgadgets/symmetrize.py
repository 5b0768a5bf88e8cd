"""Symmetrization of G0: G+, G'+, the role-mixing games D0 / D'0 and their
⊥-extensions D1, D4, D'1.

Block layout: the symmetric action set is S1 ⊔ S2 ⊔ S3 in that order,
followed by ``⊥`` for the extended games.  Block sizes are kept in
``meta["blocks"]`` so lifts and projections stay label independent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .game import BOT, MixedProfile, ShapeMismatch, StrategicGame
from .gadgets import NotASolution
from .systems import BilinearSystem, eval_bilinear

__all__ = [
    "SymmetrizationInfo",
    "BadVariantSource",
    "compute_M",
    "build_Gplus",
    "build_GplusPrime",
    "build_D0",
    "extend_symmetric",
    "lift_symmetric",
    "lift_nonsymmetric",
    "project_symmetric",
    "BlockProjection",
]


class BadVariantSource(ValueError):
    pass


@dataclass(frozen=True)
class SymmetrizationInfo:
    M: int
    K: Fraction

    @classmethod
    def from_M(cls, M: int) -> "SymmetrizationInfo":
        return cls(M, Fraction(2 * M, 9))

    @classmethod
    def from_meta(cls, meta: dict) -> "SymmetrizationInfo":
        return cls.from_M(int(meta["M"]))


def compute_M(g0: StrategicGame) -> int:
    """Smallest positive integer M with -M < u1(a) < M on every pure profile."""
    top = max(abs(v) for v in g0.payoffs[..., 0].flat)
    return math.floor(top) + 1


def build_Gplus(g0: StrategicGame) -> tuple[StrategicGame, SymmetrizationInfo]:
    """u1' = u1 + M and u2' = u3' = M - u1."""
    info = SymmetrizationInfo.from_M(compute_M(g0))
    u1 = g0.payoffs[..., 0]
    T = np.stack([u1 + info.M, info.M - u1, info.M - u1], axis=-1)
    meta = {"kind": "G+", "M": str(info.M), "K": str(info.K)}
    return StrategicGame(T, g0.labels, meta), info


def build_GplusPrime(g0: StrategicGame) -> tuple[StrategicGame, SymmetrizationInfo]:
    """Every payoff shifted by M."""
    info = SymmetrizationInfo.from_M(compute_M(g0))
    meta = {"kind": "G'+", "M": str(info.M), "K": str(info.K)}
    return StrategicGame(g0.payoffs + info.M, g0.labels, meta), info


def _block_labels(labels: Sequence[Sequence[str]]) -> tuple[str, ...]:
    flat = [lab for ls in labels for lab in ls]
    if len(set(flat)) == len(flat):
        return tuple(flat)
    return tuple(f"{r + 1}:{lab}" for r, ls in enumerate(labels) for lab in ls)


def build_D0(gplus: StrategicGame, variant: str = "ROLE_SUM") -> StrategicGame:
    """Symmetric game in which the players pick a role by picking its action.

    When player i's action lies in block pi(i) for a permutation pi,
    player i is paid as role pi(i) of ``gplus`` with each role's action
    taken from whoever chose it; otherwise everyone gets 0.
    """
    variant = variant.upper()
    expected = {"ROLE_SUM": "G+", "ROLE_PRIME": "G'+"}
    if variant not in expected:
        raise BadVariantSource(f"unknown variant {variant!r}")
    if gplus.meta.get("kind") != expected[variant]:
        raise BadVariantSource(f"{variant} needs a {expected[variant]} source game")
    if gplus.num_players != 3:
        raise ShapeMismatch("symmetrization needs a 3-player game")
    sizes = gplus.action_counts
    offs = [0, sizes[0], sizes[0] + sizes[1]]
    n = sum(sizes)
    T = np.full((n, n, n, 3), Fraction(0), dtype=object)
    G = gplus.payoffs
    for perm in itertools.permutations(range(3)):
        # player i picks from block perm[i]; role perm[i] takes that action
        sub = np.transpose(G, tuple(perm) + (3,))[..., list(perm)]
        idx = tuple(slice(offs[perm[i]], offs[perm[i]] + sizes[perm[i]]) for i in range(3))
        T[idx] = sub
    labels = [_block_labels(gplus.labels)] * 3
    kind = "D0" if variant == "ROLE_SUM" else "D'0"
    meta = {
        "kind": kind,
        "M": gplus.meta["M"],
        "K": gplus.meta["K"],
        "blocks": ",".join(str(s) for s in sizes),
    }
    return StrategicGame(T, labels, meta)


_EXTENSIONS = {"D1": "D0", "D4": "D0", "DPRIME1": "D'0"}
_EXT_KIND = {"D1": "D1", "D4": "D4", "DPRIME1": "D'1"}


def _bot_payoffs(variant: str, info: SymmetrizationInfo, bots: tuple[bool, ...]) -> tuple:
    c = sum(bots)
    K, M = info.K, info.M
    if variant == "D1":
        v = K if c == 1 else K + 1
        return (v, v, v)
    if variant == "D4":
        if c == 1:
            return tuple(K if b else K - 3 for b in bots)
        v = K - 2 if c == 2 else K - 1
        return (v, v, v)
    v = M + c - 1
    return (v, v, v)


def extend_symmetric(d0: StrategicGame, info: SymmetrizationInfo | None = None, variant: str = "D1") -> StrategicGame:
    """Add a shared ``⊥`` action paying by the number of ⊥ players."""
    variant = variant.upper().replace("'", "PRIME")
    if variant not in _EXTENSIONS:
        raise BadVariantSource(f"unknown variant {variant!r}")
    if d0.meta.get("kind") != _EXTENSIONS[variant]:
        raise BadVariantSource(f"{variant} extends {_EXTENSIONS[variant]}, got {d0.meta.get('kind')}")
    if info is None:
        info = SymmetrizationInfo.from_meta(d0.meta)
    n = d0.action_counts[0]
    T = np.empty((n + 1,) * 3 + (3,), dtype=object)
    T[:n, :n, :n] = d0.payoffs
    for prof in itertools.product(range(n + 1), repeat=3):
        bots = tuple(a == n for a in prof)
        if any(bots):
            T[prof] = _bot_payoffs(variant, info, bots)
    labels = [d0.labels[0] + (BOT,)] * 3
    meta = dict(d0.meta, kind=_EXT_KIND[variant])
    return StrategicGame(T, labels, meta)


def _blocks(game: StrategicGame) -> list[int]:
    if "blocks" not in game.meta:
        raise ShapeMismatch("game carries no block layout")
    return [int(s) for s in game.meta["blocks"].split(",")]


def _pad(vec: list, total: int) -> list:
    return vec + [Fraction(0)] * (total - len(vec))


def _check_solution(bsys: BilinearSystem, x, y):
    if len(x) != bsys.dim or len(y) != bsys.dim:
        raise ShapeMismatch("solution vectors must have length dim")
    if any(v != 0 for v in eval_bilinear(bsys, x, y)):
        raise NotASolution("(x, y) does not solve the system")


def lift_symmetric(bsys: BilinearSystem, x: Sequence, game: StrategicGame) -> MixedProfile:
    """(y, y, y) with y = z/3 ⊕ x/3 ⊕ x/3 and z uniform on S1."""
    _check_solution(bsys, x, x)
    s1, s2, s3 = _blocks(game)
    if s2 != len(x) or s3 != len(x):
        raise ShapeMismatch("block sizes do not match the solution")
    third = Fraction(1, 3)
    y = [third / s1] * s1 + [third * v for v in x] * 2
    y = _pad(y, game.action_counts[0])
    return MixedProfile([y, y, y])


def lift_nonsymmetric(bsys: BilinearSystem, x: Sequence, y: Sequence, game: StrategicGame) -> MixedProfile:
    """Player i takes role i: z uniform on S1, x on S2, y on S3."""
    _check_solution(bsys, x, y)
    s1, s2, s3 = _blocks(game)
    total = game.action_counts[0]
    p1 = _pad([Fraction(1, s1)] * s1, total)
    p2 = _pad([Fraction(0)] * s1 + list(x), total)
    p3 = _pad([Fraction(0)] * (s1 + s2) + list(y), total)
    return MixedProfile([p1, p2, p3])


@dataclass
class BlockProjection:
    masses: tuple
    conditionals: tuple  # None for a block with zero mass

    @property
    def empty_blocks(self) -> tuple[int, ...]:
        return tuple(b + 1 for b, c in enumerate(self.conditionals) if c is None)


def project_symmetric(game: StrategicGame, y: Sequence) -> BlockProjection:
    """Per-block masses and conditional distributions of one strategy."""
    sizes = _blocks(game)
    masses, conds = [], []
    start = 0
    for s in sizes:
        part = list(y[start:start + s])
        start += s
        mass = sum(part, Fraction(0))
        masses.append(mass)
        conds.append(None if mass == 0 else [v / mass for v in part])
    return BlockProjection(tuple(masses), tuple(conds))
