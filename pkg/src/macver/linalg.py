"""Exact rational vectors, matrices and symmetric bilinear forms.

Vectors are tuples of :class:`~fractions.Fraction` (plain ``int`` entries are
accepted everywhere), matrices are tuples of row tuples.  Nothing here ever
touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Tuple

from .errors import UsageError

Vector = Tuple[Fraction, ...]
Matrix = Tuple[Tuple[Fraction, ...], ...]

POSITIVE_DEFINITE = "positive-definite"
POSITIVE_SEMIDEFINITE = "positive-semidefinite"
INDEFINITE = "indefinite"


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise UsageError(f"not a rational number: {x!r}") from exc
    raise UsageError(f"not an exact rational: {x!r}")


def vector(xs: Iterable) -> Vector:
    return tuple(as_fraction(x) for x in xs)


def zero(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(j == i)) for j in range(n))


def _check_len(x: Sequence, y: Sequence) -> None:
    if len(x) != len(y):
        raise UsageError(f"dimension mismatch: {len(x)} vs {len(y)}")


def add(x: Sequence, y: Sequence) -> Vector:
    _check_len(x, y)
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Sequence, y: Sequence) -> Vector:
    _check_len(x, y)
    return tuple(a - b for a, b in zip(x, y))


def scale(c, x: Sequence) -> Vector:
    return tuple(c * a for a in x)


def dot(x: Sequence, y: Sequence):
    _check_len(x, y)
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def is_zero(x: Sequence) -> bool:
    return all(a == 0 for a in x)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vector(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(col) for col in zip(*m))


def mat_vec(m: Sequence[Sequence], x: Sequence) -> Vector:
    return tuple(dot(row, x) for row in m)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def _row_reduce(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int], int]:
    """Reduced row echelon form; returns (rows, pivot columns, sign of swaps)."""
    rows = [[as_fraction(v) for v in r] for r in m]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    sign = 1
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[r], rows[p] = rows[p], rows[r]
            sign = -sign
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots, sign


def rank(m: Sequence[Sequence]) -> int:
    return len(_row_reduce(m)[1])


def det(m: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction Gaussian elimination."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise UsageError("determinant of a non-square matrix")
    a = [[as_fraction(v) for v in r] for r in m]
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        result *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def nullspace(m: Sequence[Sequence]) -> list[Vector]:
    """Basis of the right kernel ``{x : m x = 0}``."""
    ncols = len(m[0])
    rows, pivots, _ = _row_reduce(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -rows[r][f]
        basis.append(tuple(x))
    return basis


def solve(m: Sequence[Sequence], b: Sequence) -> Vector:
    """Unique solution of a square nonsingular system ``m x = b``."""
    n = len(m)
    aug = [list(r) + [b[i]] for i, r in enumerate(m)]
    rows, pivots, _ = _row_reduce(aug)
    if pivots != list(range(n)):
        raise UsageError("singular linear system")
    return tuple(rows[i][n] for i in range(n))


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    aug = [list(r) + list(unit(n, i)) for i, r in enumerate(m)]
    rows, pivots, _ = _row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise UsageError("matrix is singular")
    return tuple(tuple(rows[i][n:]) for i in range(n))


def primitive_integer(x: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    den = lcm(*(as_fraction(v).denominator for v in x))
    ints = [int(v * den) for v in x]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        raise UsageError("zero vector has no primitive representative")
    return tuple(v // g for v in ints)


@dataclass(frozen=True)
class Definiteness:
    kind: str
    radical_dim: int
    radical: tuple[Vector, ...] = field(repr=False)


@dataclass(frozen=True)
class GramForm:
    """Symmetric bilinear form given by its Gram matrix in a fixed basis."""

    gram: Matrix

    def __post_init__(self):
        g = matrix(self.gram)
        n = len(g)
        if any(len(r) != n for r in g):
            raise UsageError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise UsageError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def bilinear(self, x: Sequence, y: Sequence) -> Fraction:
        if len(x) != self.dim or len(y) != self.dim:
            raise UsageError(
                f"dimension mismatch: form has dim {self.dim}, got {len(x)} and {len(y)}"
            )
        return dot(x, mat_vec(self.gram, y))

    def norm(self, x: Sequence) -> Fraction:
        return self.bilinear(x, x)

    def scaled(self, c) -> "GramForm":
        c = as_fraction(c)
        return GramForm(tuple(tuple(c * v for v in r) for r in self.gram))

    def definiteness(self) -> Definiteness:
        return definiteness(self)


def bilinear(form: GramForm, x: Sequence, y: Sequence) -> Fraction:
    return form.bilinear(x, y)


def definiteness(form: GramForm) -> Definiteness:
    """Classify a Gram matrix by symmetric pivoting, no square roots.

    A zero diagonal entry with a nonzero off-diagonal entry in its row, or a
    negative pivot, rules out semidefiniteness.
    """
    n = form.dim
    a = [list(r) for r in form.gram]
    active = list(range(n))
    zero_rows = 0
    while active:
        p = next((i for i in active if a[i][i] > 0), None)
        if p is None:
            if any(a[i][i] < 0 for i in active):
                break
            # remaining diagonal is zero; semidefinite only if the block vanishes
            if any(a[i][j] != 0 for i in active for j in active):
                break
            zero_rows += len(active)
            active = []
            break
        piv = a[p][p]
        active.remove(p)
        for i in active:
            if a[i][p] != 0:
                f = a[i][p] / piv
                for j in active:
                    a[i][j] -= f * a[p][j]
    else:
        active = []
    radical = tuple(nullspace(form.gram)) if n else ()
    if active:
        return Definiteness(INDEFINITE, len(radical), radical)
    if zero_rows == 0:
        return Definiteness(POSITIVE_DEFINITE, 0, ())
    return Definiteness(POSITIVE_SEMIDEFINITE, len(radical), radical)
