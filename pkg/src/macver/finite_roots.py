"""Finite root systems A-G and the non-reduced BC_l in exact coordinates.

All vectors live in the basis of simple roots, so roots are integer tuples and
``Q(R)`` is ``Z^l`` on the nose.  The bilinear form is carried as a Gram matrix
of the simple roots; the default normalisation gives long roots norm 2 (for
``BC_l``: short 1, middle 2, long 4), and ``scale`` multiplies the whole form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial, lcm
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import DomainError, UsageError
from .linalg import GramForm, Vector

FAMILIES = ("A", "B", "C", "D", "E", "F", "G", "BC")

Root = tuple[int, ...]


@dataclass(frozen=True)
class FiniteType:
    family: str
    rank: int

    def __post_init__(self):
        f, l = self.family, self.rank
        ok = {
            "A": l >= 1,
            "B": l >= 2,
            "C": l >= 2,
            "D": l >= 4,
            "E": l in (6, 7, 8),
            "F": l == 4,
            "G": l == 2,
            "BC": l >= 1,
        }.get(f)
        if not ok:
            raise UsageError(f"illegal finite type {f}{l}")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, label: str) -> "FiniteType":
        label = label.strip().replace("_", "")
        fam = label.rstrip("0123456789")
        num = label[len(fam):]
        if fam.upper() not in FAMILIES or not num:
            raise UsageError(f"unknown finite type label {label!r}")
        return cls(fam.upper(), int(num))

    @property
    def simply_laced(self) -> bool:
        return self.family in ("A", "D", "E")


def dynkin_edges(family: str, rank: int) -> list[tuple[int, int]]:
    """Edges of the Dynkin diagram with Bourbaki numbering (0-based)."""
    l = rank
    if family == "E":
        return [(0, 2), (2, 3), (1, 3)] + [(i, i + 1) for i in range(3, l - 1)]
    if family == "D":
        return [(i, i + 1) for i in range(l - 2)] + [(l - 3, l - 1)]
    return [(i, i + 1) for i in range(l - 1)]


def simple_root_norms(family: str, rank: int) -> list[Fraction]:
    """Default squared lengths of the simple roots (long roots have norm 2)."""
    l = rank
    two, one = Fraction(2), Fraction(1)
    if family in ("B", "BC"):
        return [two] * (l - 1) + [one]
    if family == "C":
        return [one] * (l - 1) + [two]
    if family == "F":
        return [two, two, one, one]
    if family == "G":
        return [Fraction(2, 3), two]
    return [two] * l


def default_gram(family: str, rank: int) -> linalg.Matrix:
    """Gram matrix ``I(alpha_i, alpha_j)`` of the simple roots, default scale.

    Works for ``D_3`` too (it is ``A_3`` with a different labelling); folding
    needs that case for the ``D_{l+1}`` column at ``l = 2``.
    """
    norms = simple_root_norms(family, rank)
    g = [[Fraction(0)] * rank for _ in range(rank)]
    for i in range(rank):
        g[i][i] = norms[i]
    for i, j in dynkin_edges(family, rank):
        # adjacent simple roots: (a_i, a_j) = -max(norm)/2 ... except G2 triple bond
        if family == "G":
            ip = Fraction(-1)
        else:
            ip = -max(norms[i], norms[j]) / 2
        g[i][j] = g[j][i] = ip
    return linalg.matrix(g)


def weyl_group_order(family: str, rank: int) -> int:
    l = rank
    if family == "A":
        return factorial(l + 1)
    if family in ("B", "C", "BC"):
        return 2**l * factorial(l)
    if family == "D":
        return 2 ** (l - 1) * factorial(l)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("G", 2): 12}[(family, l)]


def _cartan_from_gram(gram: linalg.Matrix) -> tuple[tuple[int, ...], ...]:
    n = len(gram)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            v = 2 * gram[i][j] / gram[i][i]
            if v.denominator != 1:
                raise DomainError("simple root Gram matrix is not crystallographic")
            row.append(int(v))
        rows.append(tuple(row))
    return tuple(rows)


def _closure(cartan: Sequence[Sequence[int]]) -> list[Root]:
    """All roots generated from the simple roots by simple reflections."""
    l = len(cartan)
    start = [tuple(int(i == j) for j in range(l)) for i in range(l)]
    seen = set(start)
    frontier = list(start)
    while frontier:
        nxt = []
        for b in frontier:
            for i in range(l):
                p = sum(cartan[i][j] * b[j] for j in range(l))
                if p:
                    c = list(b)
                    c[i] -= p
                    c = tuple(c)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
        frontier = nxt
    return sorted(seen, key=lambda r: (sum(r), r))


class FiniteRootSystem:
    """A finite (possibly non-reduced BC) root system in simple-root coordinates.

    Attributes are immutable tuples; build with :func:`build_finite` or
    :meth:`from_gram`.
    """

    def __init__(self, family: str, gram: linalg.Matrix, *, nonreduced: bool = False,
                 scale: Fraction = Fraction(1)):
        self.family = family
        self.rank = len(gram)
        self.scale = scale
        self.form = GramForm(gram)
        self.nonreduced = nonreduced
        self.cartan = _cartan_from_gram(self.form.gram)
        roots = _closure(self.cartan)
        if nonreduced:
            short = min(self.norm(r) for r in roots)
            roots = roots + [tuple(2 * x for x in r) for r in roots if self.norm(r) == short]
        roots = sorted(set(roots), key=lambda r: (sum(r), r))
        self.roots: tuple[Root, ...] = tuple(roots)
        self._root_set = frozenset(roots)
        self.positive_roots: tuple[Root, ...] = tuple(r for r in roots if all(x >= 0 for x in r))
        self.simple_roots: tuple[Root, ...] = tuple(
            tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))
        self.strata = self._stratify()
        self.theta = self._highest(self.roots)
        self.theta_s = self._highest(self.short_roots or self.roots)
        half = Fraction(1, 2)
        self.rho: Vector = tuple(half * sum(r[i] for r in self.positive_roots)
                                 for i in range(self.rank))

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_gram(cls, family: str, gram, *, nonreduced: bool = False,
                  scale=1) -> "FiniteRootSystem":
        return cls(family, linalg.matrix(gram), nonreduced=nonreduced,
                   scale=linalg.as_fraction(scale))

    def _stratify(self) -> dict[str, tuple[Root, ...]]:
        norms = sorted({self.norm(r) for r in self.roots})
        if self.nonreduced:
            # BC_1 has no middle stratum
            names = ["s", "m", "l"] if len(norms) == 3 else ["s", "l"]
            if len(norms) not in (2, 3):
                raise DomainError("BC system must have two or three root lengths")
        elif len(norms) == 1:
            names = ["l"]
        else:
            names = ["s", "l"]
        strata = {}
        for name, n in zip(names, norms):
            strata[name] = tuple(r for r in self.roots if self.norm(r) == n)
        for name in ("s", "m", "l"):
            strata.setdefault(name, ())
        return strata

    def _highest(self, roots: Iterable[Root]) -> Root:
        roots = list(roots)
        top = max(sum(r) for r in roots)
        best = [r for r in roots if sum(r) == top]
        if len(best) != 1:
            raise DomainError("highest root is not unique")
        return best[0]

    # -- basic data -----------------------------------------------------------
    def __repr__(self) -> str:
        return f"FiniteRootSystem({self.family}{self.rank}, scale={self.scale})"

    @property
    def type(self) -> FiniteType:
        return FiniteType(self.family, self.rank)

    @property
    def short_roots(self) -> tuple[Root, ...]:
        return self.strata["s"]

    @property
    def long_roots(self) -> tuple[Root, ...]:
        return self.strata["l"]

    @property
    def middle_roots(self) -> tuple[Root, ...]:
        return self.strata["m"]

    def stratum_of(self, alpha: Sequence) -> str:
        n = self.norm(alpha)
        for name in ("s", "m", "l"):
            st = self.strata[name]
            if st and self.norm(st[0]) == n:
                return name
        raise DomainError(f"{alpha} is not a root")

    @property
    def simple_short(self) -> tuple[int, ...]:
        """Indices of simple roots in the short stratum (empty if simply laced)."""
        return tuple(i for i, a in enumerate(self.simple_roots)
                     if self.stratum_of(a) == "s")

    @property
    def simple_long(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.simple_roots)
                     if self.stratum_of(a) != "s")

    def norm(self, x: Sequence) -> Fraction:
        return self.form.norm(x)

    def inner(self, x: Sequence, y: Sequence) -> Fraction:
        return self.form.bilinear(x, y)

    def is_root(self, x: Sequence) -> bool:
        try:
            key = tuple(int(v) for v in x if Fraction(v).denominator == 1)
        except (TypeError, ValueError):
            return False
        return len(key) == self.rank and key in self._root_set

    def _require_root(self, alpha: Sequence) -> None:
        if not self.is_root(alpha):
            raise DomainError(f"{tuple(alpha)} is not a root of {self.family}{self.rank}")

    def height(self, x: Sequence) -> Fraction:
        return sum(x, Fraction(0))

    @cached_property
    def coroot_vectors(self) -> tuple[Vector, ...]:
        """Simple coroots ``alpha_i^vee`` as vectors."""
        return tuple(linalg.scale(2 / self.norm(a), a) for a in self.simple_roots)

    def pairing(self, lam: Sequence, alpha: Sequence) -> Fraction:
        """``I(lam, alpha^vee)``."""
        return 2 * self.inner(lam, alpha) / self.norm(alpha)

    def labels(self, lam: Sequence) -> tuple[Fraction, ...]:
        """Dynkin labels ``(I(lam, alpha_i^vee))_i``."""
        return tuple(self.pairing(lam, a) for a in self.simple_roots)

    def integer_labels(self, lam: Sequence) -> tuple[int, ...]:
        labs = self.labels(lam)
        if any(v.denominator != 1 for v in labs):
            raise DomainError(f"{tuple(lam)} is not in the weight lattice")
        return tuple(int(v) for v in labs)

    @property
    def dimension(self) -> int:
        """``dim g`` for reduced types: number of roots plus rank."""
        if self.nonreduced:
            raise DomainError("no simple Lie algebra attached to BC")
        return len(self.roots) + self.rank

    @property
    def coxeter_number(self) -> int:
        """Height of the highest root plus one (reduced types)."""
        return int(self.height(self.theta)) + 1

    @property
    def weyl_order(self) -> int:
        return weyl_group_order(self.family, self.rank)

    @cached_property
    def root_matrix(self) -> np.ndarray:
        m = np.array(self.roots, dtype=np.int64)
        m.flags.writeable = False
        return m


def build_finite(ftype: FiniteType | str, scale=1) -> FiniteRootSystem:
    """Construct the root system of ``ftype`` with Gram matrix ``scale * default``."""
    if isinstance(ftype, str):
        ftype = FiniteType.parse(ftype)
    scale = linalg.as_fraction(scale)
    if scale <= 0:
        raise UsageError("scale must be positive")
    gram = tuple(tuple(scale * v for v in row) for row in default_gram(ftype.family, ftype.rank))
    return FiniteRootSystem(ftype.family, gram, nonreduced=ftype.family == "BC", scale=scale)


def coroot(rs: FiniteRootSystem, alpha: Sequence) -> Vector:
    """``alpha^vee = 2 alpha / I(alpha, alpha)``."""
    rs._require_root(alpha)
    return linalg.scale(2 / rs.norm(alpha), linalg.vector(alpha))


def reflect(rs: FiniteRootSystem, alpha: Sequence, lam: Sequence) -> Vector:
    """``s_alpha(lam) = lam - I(lam, alpha^vee) alpha``."""
    rs._require_root(alpha)
    p = rs.pairing(lam, alpha)
    return tuple(Fraction(x) - p * a for x, a in zip(lam, alpha))


def weight_lattice_basis(rs: FiniteRootSystem) -> list[Vector]:
    """Fundamental weights ``omega_i`` with ``I(omega_i, alpha_j^vee) = delta_ij``."""
    if rs.nonreduced:
        raise DomainError("weight lattice is only provided for reduced types")
    l = rs.rank
    ginv = linalg.inverse(rs.form.gram)
    half_norms = [rs.norm(a) / 2 for a in rs.simple_roots]
    return [tuple(ginv[k][i] * half_norms[i] for k in range(l)) for i in range(l)]


@dataclass(frozen=True)
class CoxeterCensus:
    h: int
    orbits: tuple[tuple[Root, ...], ...]
    short_count: int
    long_count: int
    simple_short: int
    simple_long: int


def coxeter_element(rs: FiniteRootSystem, c_word: Sequence[int]):
    """Return ``x -> s_{w_1} ... s_{w_l}(x)`` for a 1-based word."""
    l = rs.rank
    if sorted(c_word) != list(range(1, l + 1)):
        raise UsageError(f"Coxeter word must be a permutation of 1..{l}, got {list(c_word)}")
    cart = rs.cartan

    def apply(x: Root) -> Root:
        x = list(x)
        for k in reversed(c_word):
            i = k - 1
            p = sum(cart[i][j] * x[j] for j in range(l))
            x[i] -= p
        return tuple(x)

    return apply


def coxeter_orbit_census(rs: FiniteRootSystem, c_word: Sequence[int]) -> CoxeterCensus:
    """Split the roots into orbits of a Coxeter element and check their shape.

    Every orbit must have exactly ``h`` elements and contain a positive root that
    the Coxeter element sends to a negative root.
    """
    if rs.nonreduced:
        raise DomainError("Coxeter census is defined for reduced types")
    c = coxeter_element(rs, c_word)
    remaining = set(rs.roots)
    orbits = []
    positive = set(rs.positive_roots)
    while remaining:
        start = min(remaining)
        orbit = [start]
        x = c(start)
        while x != start:
            orbit.append(x)
            x = c(x)
        remaining -= set(orbit)
        orbits.append(tuple(orbit))
    h = rs.coxeter_number
    for orb in orbits:
        if len(orb) != h:
            raise DomainError(f"Coxeter orbit of size {len(orb)} != h = {h}")
        if not any(r in positive and c(r) not in positive for r in orb):
            raise DomainError("Coxeter orbit without a positive-to-negative root")
    return CoxeterCensus(
        h=h,
        orbits=tuple(orbits),
        short_count=len(rs.short_roots),
        long_count=len(rs.long_roots),
        simple_short=len(rs.simple_short),
        simple_long=len(rs.simple_long),
    )


@dataclass(frozen=True)
class AxiomReport:
    full_rank: bool
    nonisotropic: bool
    integral: bool
    closed: bool
    irreducible: bool

    @property
    def ok(self) -> bool:
        return all((self.full_rank, self.nonisotropic, self.integral, self.closed,
                    self.irreducible))


def check_axioms(roots: Sequence[Sequence], form: GramForm) -> AxiomReport:
    """Run the five generalized-root-system axioms on a finite root set.

    Works on rational coordinates by clearing denominators, then does the
    pairwise work in exact int64 arithmetic (bounds are checked).
    """
    roots = [linalg.vector(r) for r in roots]
    n, dim = len(roots), form.dim
    den = lcm(*(x.denominator for r in roots for x in r))
    x = np.array([[int(v * den) for v in r] for r in roots], dtype=object)
    gden = lcm(*(v.denominator for row in form.gram for v in row))
    g = np.array([[int(v * gden) for v in row] for row in form.gram], dtype=object)
    bound = int(np.max(np.abs(x))) if n else 0
    gbound = int(np.max(np.abs(g))) if dim else 0
    use64 = (bound * bound * gbound * dim * dim) < 2**62
    if use64:
        x = x.astype(np.int64)
        g = g.astype(np.int64)
    ip = x @ g @ x.T
    full_rank = linalg.rank(roots) == dim
    diag = [ip[i, i] for i in range(n)]
    nonisotropic = all(d != 0 for d in diag)
    integral = nonisotropic and all(
        (2 * ip[b, a]) % diag[a] == 0 for a in range(n) for b in range(n))
    closed = False
    if integral:
        index = {tuple(int(v) for v in row): i for i, row in enumerate(x)}
        closed = True
        for a in range(n):
            xa = x[a]
            for b in range(n):
                p = (2 * ip[b, a]) // diag[a]
                if p and tuple(int(v) for v in (x[b] - p * xa)) not in index:
                    closed = False
                    break
            if not closed:
                break
    # irreducible: the non-orthogonality graph is connected
    seen = {0} if n else set()
    stack = [0] if n else []
    while stack:
        i = stack.pop()
        for j in range(n):
            if j not in seen and ip[i, j] != 0:
                seen.add(j)
                stack.append(j)
    irreducible = len(seen) == n
    return AxiomReport(full_rank, nonisotropic, bool(integral), closed, irreducible)
