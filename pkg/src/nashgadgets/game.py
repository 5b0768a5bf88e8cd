"""Finite strategic-form games with exact payoffs, mixed profiles and
the simple payoff transforms (total-payoff variants, positive affine maps)."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .quadfield import QuadAlgebraic, format_number, is_rational, parse_number, to_float

__all__ = [
    "ShapeMismatch",
    "BadPlayerCount",
    "GameFormatError",
    "StrategicGame",
    "MixedProfile",
    "eval_payoff",
    "deviation_payoffs",
    "is_zero_sum",
    "is_symmetric_game",
    "symmetry_violation",
    "transform_payoffs",
    "format_game",
    "parse_game",
    "format_profile",
    "parse_profile",
    "BOT",
    "is_bot_label",
]

BOT = "⊥"


def is_bot_label(label: str) -> bool:
    """True for the opt-out action and its indexed copies ``(⊥,i)``."""
    return label == BOT or label.startswith(f"({BOT},")


class ShapeMismatch(ValueError):
    pass


class BadPlayerCount(ValueError):
    pass


class GameFormatError(ValueError):
    def __init__(self, msg, lineno=None):
        super().__init__(f"line {lineno}: {msg}" if lineno else msg)
        self.lineno = lineno


def _exact(v):
    if isinstance(v, (Fraction, QuadAlgebraic)):
        return v._simplify() if isinstance(v, QuadAlgebraic) else v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"payoffs must be exact numbers, got {type(v).__name__}")


class StrategicGame:
    """An m-player game stored as a dense tensor.

    ``payoffs[a_1, ..., a_m, i]`` is the payoff of player ``i`` (0-based) at
    the pure profile ``(a_1, ..., a_m)``.  Entries are ``Fraction`` or
    :class:`QuadAlgebraic`.  ``meta`` holds free-form string annotations that
    survive the text round trip (construction kind, M, K, block sizes, ...).
    """

    def __init__(self, payoffs, labels: Sequence[Sequence[str]] | None = None, meta=None):
        arr = np.asarray(payoffs, dtype=object)
        if arr.ndim < 3:
            raise BadPlayerCount("a game needs at least two players")
        m = arr.ndim - 1
        if arr.shape[-1] != m:
            raise ShapeMismatch(f"payoff vectors have length {arr.shape[-1]}, expected {m}")
        arr = np.vectorize(_exact, otypes=[object])(arr)
        arr.flags.writeable = False
        self._payoffs = arr
        counts = arr.shape[:-1]
        if labels is None:
            labels = [[str(a) for a in range(n)] for n in counts]
        labels = tuple(tuple(str(s) for s in ls) for ls in labels)
        if len(labels) != m or any(len(ls) != n for ls, n in zip(labels, counts)):
            raise ShapeMismatch("labels do not match action counts")
        for ls in labels:
            if any(not s or any(c.isspace() for c in s) for s in ls):
                raise ValueError("action labels must be non-empty and contain no whitespace")
        self.labels = labels
        self.meta = dict(meta or {})

    @classmethod
    def from_function(cls, labels: Sequence[Sequence[str]], fn, meta=None) -> "StrategicGame":
        """Build a game from ``fn(profile_indices) -> payoff vector``."""
        counts = tuple(len(ls) for ls in labels)
        arr = np.empty(counts + (len(counts),), dtype=object)
        for prof in itertools.product(*(range(n) for n in counts)):
            vec = fn(prof)
            if len(vec) != len(counts):
                raise ShapeMismatch(f"payoff at {prof} has length {len(vec)}")
            arr[prof] = list(vec)
        return cls(arr, labels, meta)

    @property
    def payoffs(self) -> np.ndarray:
        return self._payoffs

    @property
    def num_players(self) -> int:
        return self._payoffs.ndim - 1

    @property
    def action_counts(self) -> tuple[int, ...]:
        return self._payoffs.shape[:-1]

    def num_cells(self) -> int:
        return int(np.prod(self.action_counts))

    def payoff(self, profile: Sequence[int]) -> tuple:
        return tuple(self._payoffs[tuple(profile)])

    def action_index(self, player: int, label: str) -> int:
        return self.labels[player].index(label)

    def pure_profiles(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(n) for n in self.action_counts))

    def __eq__(self, other):
        if not isinstance(other, StrategicGame):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.meta == other.meta
            and self._payoffs.shape == other._payoffs.shape
            and bool(np.all(self._payoffs == other._payoffs))
        )

    def __repr__(self):
        kind = self.meta.get("kind", "game")
        return f"<StrategicGame {kind} actions={self.action_counts}>"


class MixedProfile:
    """One probability vector per player, entries exact (rational or Q(sqrt d))."""

    def __init__(self, strategies: Sequence[Sequence], check: bool = True):
        strats = []
        for s in strategies:
            strats.append(tuple(_exact(v) for v in s))
        self.strategies = tuple(strats)
        if check:
            for i, s in enumerate(self.strategies):
                if any(v < 0 for v in s):
                    raise ValueError(f"player {i + 1} has a negative probability")
                if sum(s, Fraction(0)) != 1:
                    raise ValueError(f"player {i + 1}'s probabilities do not sum to 1")

    @classmethod
    def pure(cls, game: StrategicGame, actions: Sequence) -> "MixedProfile":
        """Pure profile from action indices or labels."""
        strats = []
        for i, (n, a) in enumerate(zip(game.action_counts, actions)):
            idx = game.action_index(i, a) if isinstance(a, str) else int(a)
            strats.append([Fraction(int(k == idx)) for k in range(n)])
        return cls(strats)

    @classmethod
    def uniform(cls, game: StrategicGame) -> "MixedProfile":
        return cls([[Fraction(1, n)] * n for n in game.action_counts])

    @property
    def num_players(self) -> int:
        return len(self.strategies)

    def __getitem__(self, i):
        return self.strategies[i]

    def __iter__(self):
        return iter(self.strategies)

    def __len__(self):
        return len(self.strategies)

    def support(self, player: int) -> tuple[int, ...]:
        return tuple(a for a, v in enumerate(self.strategies[player]) if v > 0)

    def is_rational(self) -> bool:
        return all(is_rational(v) for s in self.strategies for v in s)

    def is_symmetric(self) -> bool:
        return all(s == self.strategies[0] for s in self.strategies)

    def to_floats(self) -> list[list[float]]:
        return [[to_float(v) for v in s] for s in self.strategies]

    def max_probability(self):
        return max(v for s in self.strategies for v in s)

    def replace(self, player: int, strategy: Sequence) -> "MixedProfile":
        strats = list(self.strategies)
        strats[player] = tuple(strategy)
        return MixedProfile(strats, check=False)

    def __eq__(self, other):
        if not isinstance(other, MixedProfile):
            return NotImplemented
        return self.strategies == other.strategies

    def __hash__(self):
        return hash(self.strategies)

    def __repr__(self):
        body = "; ".join(" ".join(str(v) for v in s) for s in self.strategies)
        return f"MixedProfile({body})"


def _check_shape(game: StrategicGame, profile: MixedProfile):
    if len(profile) != game.num_players or any(
        len(s) != n for s, n in zip(profile, game.action_counts)
    ):
        raise ShapeMismatch("profile shape does not match the game")


def _vec(s) -> np.ndarray:
    return np.array(list(s), dtype=object)


def _contract(tensor: np.ndarray, profile, skip=()) -> np.ndarray:
    """Contract the player axes of ``tensor`` with the profile's strategies,
    leaving the axes listed in ``skip`` (and any trailing axes) in place."""
    out = tensor
    for j in reversed(range(len(profile))):
        if j in skip:
            continue
        out = np.tensordot(out, _vec(profile[j]), axes=([j], [0]))
    return out


def eval_payoff(game: StrategicGame, profile: MixedProfile) -> tuple:
    """Exact expected payoff of every player."""
    _check_shape(game, profile)
    return tuple(_exact_scalar(v) for v in _contract(game.payoffs, profile))


def deviation_payoffs(game: StrategicGame, profile: MixedProfile, player: int) -> list:
    """Payoff of ``player`` for each of its pure actions against the others."""
    _check_shape(game, profile)
    vals = _contract(game.payoffs[..., player], profile, skip=(player,))
    return [_exact_scalar(v) for v in vals]


def _exact_scalar(v):
    if isinstance(v, QuadAlgebraic):
        return v._simplify()
    if isinstance(v, int):
        return Fraction(v)
    return v


def is_zero_sum(game: StrategicGame) -> bool:
    sums = game.payoffs.sum(axis=-1)
    return all(v == 0 for v in sums.flat)


def symmetry_violation(game: StrategicGame) -> str | None:
    """Return a human-readable reason the game is not symmetric, or None."""
    counts = game.action_counts
    m = game.num_players
    if len(set(counts)) != 1:
        return f"unequal action sets {counts}"
    if len(set(game.labels)) != 1:
        return "players have differently labelled action sets"
    T = game.payoffs
    for perm in itertools.permutations(range(m)):
        # player perm(i) takes over player i's action: U[a, i] = T[b, perm(i)]
        # with b[perm(i)] = a[i]
        U = np.transpose(T, tuple(perm) + (m,))[..., list(perm)]
        bad = np.argwhere(U != T)
        if len(bad):
            cell = tuple(int(v) for v in bad[0])
            return f"permutation {tuple(p + 1 for p in perm)} breaks profile {cell[:-1]} for player {cell[-1] + 1}"
    return None


def is_symmetric_game(game: StrategicGame) -> bool:
    return symmetry_violation(game) is None


def transform_payoffs(game: StrategicGame, kind: str, alpha=1, beta=0, players=None) -> StrategicGame:
    """Payoff transforms used by the total-payoff reductions.

    ``TOTAL_NEG``: u1' = u1, u2' = u3' = -u1.
    ``TOTAL_POS``: u1' = 3*u1, u2' = u3' = -u1.
    ``SHIFT_SCALE``: u_i' = alpha*u_i + beta for players in ``players``
    (all players by default); alpha must be positive.
    """
    T = game.payoffs
    kind = kind.upper()
    if kind in ("TOTAL_NEG", "TOTAL_POS"):
        if game.num_players != 3:
            raise BadPlayerCount(f"{kind} needs a 3-player game")
        u1 = T[..., 0]
        first = u1 if kind == "TOTAL_NEG" else 3 * u1
        new = np.stack([first, -u1, -u1], axis=-1)
        meta = dict(game.meta, transform=kind)
        return StrategicGame(new, game.labels, meta)
    if kind == "SHIFT_SCALE":
        alpha = Fraction(alpha) if not isinstance(alpha, QuadAlgebraic) else alpha
        if not alpha > 0:
            raise ValueError("alpha must be positive")
        who = range(game.num_players) if players is None else players
        new = np.array(T, dtype=object)
        for i in who:
            new[..., i] = alpha * T[..., i] + beta
        return StrategicGame(new, game.labels, game.meta)
    raise ValueError(f"unknown transform {kind!r}")


# -- text formats -------------------------------------------------------------


def format_game(game: StrategicGame) -> str:
    lines = ["game 1", f"players {game.num_players}"]
    lines.append("actions " + " ".join(str(n) for n in game.action_counts))
    for key, value in game.meta.items():
        lines.append(f"# {key}: {value}")
    for i, ls in enumerate(game.labels):
        lines.append(f"labels {i + 1} " + " ".join(ls))
    for prof in game.pure_profiles():
        vals = " ".join(format_number(v) for v in game.payoffs[prof])
        lines.append("payoff " + " ".join(str(a) for a in prof) + " : " + vals)
    return "\n".join(lines) + "\n"


def parse_game(text: str) -> StrategicGame:
    m = None
    counts = None
    labels = {}
    meta = {}
    arr = None
    seen = set()
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            continue
        tok = line.split()
        head = tok[0]
        if not header:
            if tok != ["game", "1"]:
                raise GameFormatError("expected header 'game 1'", lineno)
            header = True
            continue
        if head == "players":
            m = int(tok[1])
        elif head == "actions":
            counts = tuple(int(t) for t in tok[1:])
            if m is None or len(counts) != m:
                raise GameFormatError("action counts do not match player count", lineno)
            arr = np.empty(counts + (m,), dtype=object)
        elif head == "labels":
            labels[int(tok[1]) - 1] = tok[2:]
        elif head == "payoff":
            if arr is None:
                raise GameFormatError("payoff before actions line", lineno)
            try:
                colon = tok.index(":")
            except ValueError:
                raise GameFormatError("missing ':'", lineno) from None
            prof = tuple(int(t) for t in tok[1:colon])
            if len(prof) != m or any(not 0 <= a < n for a, n in zip(prof, counts)):
                raise GameFormatError(f"bad profile {prof}", lineno)
            vals = []
            pos = colon + 1
            while pos < len(tok):
                try:
                    v, pos = parse_number(tok, pos)
                except (ValueError, ZeroDivisionError) as exc:
                    raise GameFormatError(str(exc), lineno) from None
                vals.append(v)
            if len(vals) != m:
                raise GameFormatError("payoff vector has wrong length", lineno)
            arr[prof] = vals
            seen.add(prof)
        else:
            raise GameFormatError(f"unknown directive {head!r}", lineno)
    if arr is None:
        raise GameFormatError("missing players/actions lines")
    if len(seen) != int(np.prod(counts)):
        raise GameFormatError(f"expected {int(np.prod(counts))} payoff lines, got {len(seen)}")
    lab = [labels.get(i) for i in range(m)]
    if any(ls is None for ls in lab):
        lab = None
    return StrategicGame(arr, lab, meta)


def format_profile(profile: MixedProfile) -> str:
    return "".join(" ".join(format_number(v) for v in s) + "\n" for s in profile)


def parse_profile(text: str) -> MixedProfile:
    strats = []
    for raw in text.splitlines():
        tok = raw.split("#", 1)[0].split()
        if not tok:
            continue
        vals = []
        pos = 0
        while pos < len(tok):
            v, pos = parse_number(tok, pos)
            vals.append(v)
        strats.append(vals)
    return MixedProfile(strats)
