"""Certified enumeration of shifted lattice points in an ellipsoid.

Finds every integer vector ``z`` with ``Q(s + z) <= bound`` where ``Q`` is a
positive-definite rational quadratic form.  The form is diagonalised
exactly (rational LDL^T, no square roots) and the search is the usual
Fincke-Pohst recursion; per-coordinate intervals are widened to safe integer
bounds and every candidate is re-checked exactly, so nothing is dropped and
nothing spurious is kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, isqrt
from typing import Sequence

from .errors import DomainError
from .linalg import as_fraction, matrix


@dataclass
class EnumerationTrace:
    """Per-level node counts of the search tree (the completeness certificate)."""
    bound: Fraction
    visited: list[int] = field(default_factory=list)
    points: int = 0


def ldl(gram: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """``Q(x) = sum_i d_i (x_i + sum_{j>i} m_ij x_j)^2``; returns ``(m, d)``."""
    g = [list(r) for r in matrix(gram)]
    n = len(g)
    m = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n
    for i in range(n):
        piv = g[i][i]
        if piv <= 0:
            raise DomainError("quadratic form is not positive definite")
        d[i] = piv
        for j in range(i + 1, n):
            m[i][j] = g[i][j] / piv
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                g[j][k] -= g[i][j] * g[i][k] / piv
    return m, d


def _sqrt_ceil(r: Fraction) -> int:
    """An integer ``>= sqrt(r)`` for rational ``r >= 0``."""
    return isqrt(r.numerator // r.denominator) + 1


def enumerate_shifted(gram: Sequence[Sequence], shift: Sequence, bound) -> tuple[list[tuple[int, ...]], EnumerationTrace]:
    """All ``z in Z^n`` with ``(s+z)^T G (s+z) <= bound``, sorted."""
    bound = as_fraction(bound)
    s = [as_fraction(x) for x in shift]
    n = len(s)
    m, d = ldl(gram)
    trace = EnumerationTrace(bound, [0] * n)
    out: list[tuple[int, ...]] = []
    if bound < 0:
        return out, trace
    x = [Fraction(0)] * n
    z = [0] * n

    def level(i: int, budget: Fraction) -> None:
        center = -sum((m[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        r = budget / d[i]
        w = _sqrt_ceil(r)
        lo = floor(center - s[i]) - w
        hi = ceil(center - s[i]) + w
        for zi in range(lo, hi + 1):
            xi = s[i] + zi
            t = (xi - center) ** 2
            if t > r:
                continue
            trace.visited[i] += 1
            x[i], z[i] = xi, zi
            rest = budget - d[i] * t
            if i == 0:
                out.append(tuple(z))
            else:
                level(i - 1, rest)

    if n == 0:
        out.append(())
    else:
        level(n - 1, bound)
    out.sort()
    trace.points = len(out)
    return out, trace


def brute_force(gram: Sequence[Sequence], shift: Sequence, bound, box: int) -> list[tuple[int, ...]]:
    """Exhaustive check over ``[-box, box]^n``; test oracle only."""
    from itertools import product

    g = matrix(gram)
    s = [as_fraction(v) for v in shift]
    bound = as_fraction(bound)
    n = len(s)
    out = []
    for z in product(range(-box, box + 1), repeat=n):
        v = [s[i] + z[i] for i in range(n)]
        q = sum(v[i] * g[i][j] * v[j] for i in range(n) for j in range(n))
        if q <= bound:
            out.append(tuple(z))
    return sorted(out)
