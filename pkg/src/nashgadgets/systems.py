"""Quadratic systems, homogeneous bilinear systems and the transformations
between them.

A :class:`QuadraticSystem` over variables ``x_1..x_n`` stores each equation as
a list of ``(c, i, j)`` terms meaning ``c * x_i * x_j`` where index 0 stands
for an absent factor, so ``(c, 0, 0)`` is a constant and ``(c, 0, i)`` is
linear.  A :class:`BilinearSystem` stores one integer ``(n+1) x (n+1)``
matrix per equation ``q_k(x, y) = x^T A_k y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .game import ShapeMismatch

__all__ = [
    "SystemSyntaxError",
    "IndexOutOfRange",
    "QuadraticSystem",
    "BilinearSystem",
    "parse_system",
    "format_system",
    "parse_bilinear",
    "format_bilinear",
    "normalize_to_promise",
    "promise_point",
    "augment_irrational",
    "bilinearize_homogenize",
    "embed_solution",
    "eval_bilinear",
    "eval_quadratic",
]


class SystemSyntaxError(ValueError):
    def __init__(self, msg, lineno=None):
        super().__init__(f"line {lineno}: {msg}" if lineno else msg)
        self.lineno = lineno


class IndexOutOfRange(ValueError):
    pass


def _canon_terms(terms) -> tuple[tuple[int, int, int], ...]:
    """Merge like terms, order factors i <= j, drop zeros; sorted by (i, j)."""
    acc: dict[tuple[int, int], int] = {}
    for c, i, j in terms:
        i, j = (i, j) if i <= j else (j, i)
        acc[(i, j)] = acc.get((i, j), 0) + int(c)
    return tuple((c, i, j) for (i, j), c in sorted(acc.items()) if c != 0)


@dataclass(frozen=True)
class QuadraticSystem:
    var_count: int
    equations: tuple[tuple[tuple[int, int, int], ...], ...]

    def __post_init__(self):
        if self.var_count < 1:
            raise ValueError("need at least one variable")
        if not self.equations:
            raise ValueError("need at least one equation")
        eqs = []
        for eq in self.equations:
            for c, i, j in eq:
                for k in (i, j):
                    if not 0 <= k <= self.var_count:
                        raise IndexOutOfRange(f"variable index {k} outside 0..{self.var_count}")
            eqs.append(_canon_terms(eq))
        object.__setattr__(self, "equations", tuple(eqs))

    @property
    def num_equations(self) -> int:
        return len(self.equations)


@dataclass(frozen=True)
class BilinearSystem:
    dim: int
    matrices: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if not self.matrices:
            raise ValueError("need at least one matrix")
        mats = []
        for A in self.matrices:
            A = tuple(tuple(int(v) for v in row) for row in A)
            if len(A) != self.dim or any(len(row) != self.dim for row in A):
                raise ShapeMismatch(f"matrix is not {self.dim}x{self.dim}")
            mats.append(A)
        object.__setattr__(self, "matrices", tuple(mats))

    @property
    def num_equations(self) -> int:
        return len(self.matrices)


def eval_quadratic(sys: QuadraticSystem, x: Sequence) -> list:
    """Value of every equation's left-hand side at ``x`` (length n)."""
    if len(x) != sys.var_count:
        raise ShapeMismatch("assignment has the wrong length")
    vals = [1] + list(x)
    return [sum((c * vals[i] * vals[j] for c, i, j in eq), Fraction(0)) for eq in sys.equations]


def eval_bilinear(bsys: BilinearSystem, x: Sequence, y: Sequence) -> list:
    """Exact values ``q_k(x, y) = sum_ij a_ij x_i y_j`` for every k."""
    if len(x) != bsys.dim or len(y) != bsys.dim:
        raise ShapeMismatch("vectors must have length dim")
    out = []
    for A in bsys.matrices:
        total = Fraction(0)
        for i, row in enumerate(A):
            if x[i] == 0:
                continue
            inner = sum((a * yj for a, yj in zip(row, y) if a), Fraction(0))
            total = total + x[i] * inner
        out.append(total)
    return out


# -- reductions ---------------------------------------------------------------


def normalize_to_promise(sys: QuadraticSystem) -> QuadraticSystem:
    """Move solutions from the box [-1, 1]^n into the promise region.

    Substitutes ``x_i = 8n z_i - 2`` and appends ``2 z_{n+1} - 1 = 0``.  A
    box solution maps to ``z`` with ``0 < z_i <= 1/2`` and
    ``1/2 <= sum z < 1``.  That solutions lie in the box is the caller's
    promise; it is not checked.
    """
    n = sys.var_count
    alpha = 8 * n
    eqs = []
    for eq in sys.equations:
        out = []
        for c, i, j in eq:
            if i == 0 and j == 0:
                out.append((c, 0, 0))
            elif i == 0:
                # c*(alpha z_j - 2)
                out += [(c * alpha, 0, j), (-2 * c, 0, 0)]
            else:
                # c*(alpha z_i - 2)(alpha z_j - 2)
                out += [
                    (c * alpha * alpha, i, j),
                    (-2 * c * alpha, 0, i),
                    (-2 * c * alpha, 0, j),
                    (4 * c, 0, 0),
                ]
        eqs.append(out)
    eqs.append([(2, 0, n + 1), (-1, 0, 0)])
    return QuadraticSystem(n + 1, tuple(tuple(e) for e in eqs))


def promise_point(x: Sequence) -> list[Fraction]:
    """Image of a box point under the :func:`normalize_to_promise` map."""
    n = len(x)
    return [(Fraction(v) + 2) / (8 * n) for v in x] + [Fraction(1, 2)]


def augment_irrational(sys: QuadraticSystem) -> QuadraticSystem:
    """Add a fresh variable w with ``2 w^2 - 1 = 0`` (so w = +-1/sqrt 2)."""
    w = sys.var_count + 1
    eqs = sys.equations + (((2, w, w), (-1, 0, 0)),)
    return QuadraticSystem(w, eqs)


def bilinearize_homogenize(sys: QuadraticSystem) -> BilinearSystem:
    """Homogeneous bilinear system over the simplex pair with slack coordinate.

    Each equation becomes one matrix: ``c x_i x_j`` adds c at (i, j), a linear
    term ``c x_i`` adds c to row i, a constant adds c everywhere.  Then, for
    i = 1..n, a coupling matrix encodes ``x_i sum(y) - y_i sum(x) = 0``.
    """
    n = sys.var_count
    N = n + 1
    mats = []
    for eq in sys.equations:
        A = [[0] * N for _ in range(N)]
        for c, i, j in eq:
            if i == 0 and j == 0:
                for r in range(N):
                    for s in range(N):
                        A[r][s] += c
            elif i == 0:
                for s in range(N):
                    A[j - 1][s] += c
            else:
                A[i - 1][j - 1] += c
        mats.append(A)
    for i in range(n):
        A = [[0] * N for _ in range(N)]
        for s in range(N):
            A[i][s] += 1
            A[s][i] -= 1
        mats.append(A)
    return BilinearSystem(N, tuple(tuple(tuple(r) for r in A) for A in mats))


def embed_solution(z: Sequence) -> list:
    """Simplex point ``(z, 1 - sum z)`` for a corner-simplex point z."""
    z = list(z)
    return z + [1 - sum(z, Fraction(0))]


# -- text formats -------------------------------------------------------------


def parse_system(text: str) -> QuadraticSystem:
    n = None
    eqs = []
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if not header:
            if tok != ["qsys", "1"]:
                raise SystemSyntaxError("expected header 'qsys 1'", lineno)
            header = True
        elif tok[0] == "vars":
            if len(tok) != 2 or not tok[1].isdigit():
                raise SystemSyntaxError("expected 'vars n'", lineno)
            n = int(tok[1])
        elif tok[0] == "eq":
            if n is None:
                raise SystemSyntaxError("'eq' before 'vars'", lineno)
            terms = []
            for t in tok[1:]:
                parts = t.split(":")
                try:
                    c, i, j = (int(p) for p in parts)
                except ValueError:
                    raise SystemSyntaxError(f"bad term {t!r}", lineno) from None
                if not (0 <= i <= n and 0 <= j <= n):
                    raise IndexOutOfRange(f"line {lineno}: term {t!r} refers past x{n}")
                terms.append((c, i, j))
            eqs.append(tuple(terms))
        else:
            raise SystemSyntaxError(f"unknown directive {tok[0]!r}", lineno)
    if n is None:
        raise SystemSyntaxError("missing 'vars' line")
    if not eqs:
        raise SystemSyntaxError("no equations")
    return QuadraticSystem(n, tuple(eqs))


def format_system(sys: QuadraticSystem) -> str:
    lines = ["qsys 1", f"vars {sys.var_count}"]
    for eq in sys.equations:
        body = " ".join(f"{c}:{i}:{j}" for c, i, j in eq) if eq else "0:0:0"
        lines.append("eq " + body)
    return "\n".join(lines) + "\n"


def parse_bilinear(text: str) -> BilinearSystem:
    dim = None
    mats = []
    cur = None
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if not header:
            if tok != ["bsys", "1"]:
                raise SystemSyntaxError("expected header 'bsys 1'", lineno)
            header = True
        elif tok[0] == "dim":
            dim = int(tok[1])
        elif tok[0] == "mat":
            if dim is None:
                raise SystemSyntaxError("'mat' before 'dim'", lineno)
            cur = []
            mats.append(cur)
        else:
            if cur is None or len(cur) >= dim:
                raise SystemSyntaxError("matrix row outside a 'mat' block", lineno)
            try:
                row = [int(t) for t in tok]
            except ValueError:
                raise SystemSyntaxError("non-integer entry", lineno) from None
            if len(row) != dim:
                raise SystemSyntaxError(f"row has {len(row)} entries, expected {dim}", lineno)
            cur.append(row)
    if dim is None or not mats:
        raise SystemSyntaxError("missing 'dim' or 'mat' blocks")
    if any(len(A) != dim for A in mats):
        raise SystemSyntaxError("incomplete matrix block")
    return BilinearSystem(dim, tuple(tuple(tuple(r) for r in A) for A in mats))


def format_bilinear(bsys: BilinearSystem) -> str:
    lines = ["bsys 1", f"dim {bsys.dim}"]
    for A in bsys.matrices:
        lines.append("mat")
        lines += [" ".join(str(v) for v in row) for row in A]
    return "\n".join(lines) + "\n"
