"""Reduced affine root systems ``X_l^(t)`` under their canonical ``family rank (tier)`` labels.

Vectors of the extended space are coordinate tuples
``(c_1, ..., c_l, c_delta, c_d)``: the first ``l`` entries are simple-root
coordinates of the finite quotient, then the coefficient of ``delta`` and of
the extra direction ``d`` dual to it (``I(delta, d) = 1``, ``I(d, d) = 0``,
``d`` orthogonal to the finite part).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg
from .errors import DomainError, UsageError
from .finite_roots import FiniteRootSystem, FiniteType, build_finite
from .linalg import GramForm, Vector

LEGAL_TIERS = {
    "A": (1,), "D": (1,), "E": (1,),
    "B": (1, 2), "C": (1, 2), "F": (1, 2),
    "G": (1, 3),
    "BC": (2,),
}

_LABEL_RE = re.compile(r"^\s*([A-Za-z]+)_?(\d+)\s*\^?\s*[({]*\s*(\d+)\s*[)}]*\s*$")


@dataclass(frozen=True)
class AffineType:
    family: str
    rank: int
    tier: int

    def __post_init__(self):
        FiniteType(self.family, self.rank)
        if self.tier not in LEGAL_TIERS.get(self.family, ()):
            raise UsageError(f"illegal affine type {self.family}{self.rank}({self.tier})")

    def __str__(self) -> str:
        return f"{self.family}{self.rank}({self.tier})"

    @classmethod
    def parse(cls, label: str) -> "AffineType":
        m = _LABEL_RE.match(label)
        if not m:
            raise UsageError(f"cannot parse affine type label {label!r}")
        return cls(m.group(1).upper(), int(m.group(2)), int(m.group(3)))

    @property
    def twisted(self) -> bool:
        return self.tier != 1

    @property
    def is_bc(self) -> bool:
        return self.family == "BC"


def legal_labels(max_rank: int = 8) -> list[str]:
    """Every legal canonical label up to ``max_rank`` (used in CLI error messages)."""
    out = []
    for fam, tiers in LEGAL_TIERS.items():
        for l in range(1, max_rank + 1):
            for t in tiers:
                try:
                    out.append(str(AffineType(fam, l, t)))
                except UsageError:
                    pass
    return out


@dataclass(frozen=True)
class AffineRoot:
    finite: tuple[int, ...]
    level: int
    stratum: str

    def vector(self) -> Vector:
        return tuple(Fraction(x) for x in self.finite) + (Fraction(self.level), Fraction(0))


class AffineSystem:
    """Affine root system with its simple roots, GCM, labels and colabels."""

    def __init__(self, atype: AffineType, quotient: FiniteRootSystem):
        self.type = atype
        self.quotient = quotient
        self.scale = quotient.scale
        l = self.rank = atype.rank
        self.dim = l + 2
        g = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for i in range(l):
            for j in range(l):
                g[i][j] = quotient.form.gram[i][j]
        g[l][l + 1] = g[l + 1][l] = Fraction(1)
        self.form = GramForm(linalg.matrix(g))
        self.delta: Vector = linalg.unit(self.dim, l)
        self.d_vector: Vector = linalg.unit(self.dim, l + 1)
        if atype.tier == 1:
            top = quotient.theta
        elif atype.is_bc:
            top = tuple(2 * x for x in quotient.theta_s)
        else:
            top = quotient.theta_s
        self.alpha0_finite = top
        alpha0 = tuple(Fraction(-x) for x in top) + (Fraction(1), Fraction(0))
        self.simple_roots: tuple[Vector, ...] = (alpha0,) + tuple(
            self.embed_finite(a) for a in quotient.simple_roots)
        self.gcm = tuple(
            tuple(self._cartan_entry(ai, aj) for aj in self.simple_roots)
            for ai in self.simple_roots)
        self.labels = _primitive_null_vector(self.gcm)
        self.colabels = _primitive_null_vector(linalg.transpose(self.gcm))
        self.coxeter_number = sum(self.labels)
        self.dual_coxeter_number = sum(self.colabels)

    def __repr__(self) -> str:
        return f"AffineSystem({self.type}, scale={self.scale})"

    def _cartan_entry(self, a: Vector, b: Vector) -> int:
        v = 2 * self.form.bilinear(a, b) / self.form.norm(a)
        if v.denominator != 1:
            raise DomainError("non-integral generalized Cartan matrix entry")
        return int(v)

    def embed_finite(self, x: Sequence) -> Vector:
        return tuple(Fraction(v) for v in x) + (Fraction(0), Fraction(0))

    def inner(self, x: Sequence, y: Sequence) -> Fraction:
        return self.form.bilinear(x, y)

    def coroot(self, alpha: Sequence) -> Vector:
        n = self.form.norm(alpha)
        if n == 0:
            raise DomainError("isotropic vector has no coroot")
        return linalg.scale(2 / n, alpha)

    # -- membership and enumeration --------------------------------------------
    def is_root(self, finite: Sequence, level) -> bool:
        level = Fraction(level)
        if level.denominator != 1:
            return False
        if not self.quotient.is_root(finite):
            return False
        k = int(level)
        st = self.quotient.stratum_of(finite)
        t = self.type.tier
        if self.type.is_bc:
            return k % 2 == 1 if st == "l" else True
        if t == 1 or st == "s":
            return True
        return k % t == 0

    def is_root_vector(self, v: Sequence) -> bool:
        v = linalg.vector(v)
        if v[-1] != 0:
            return False
        fin = v[: self.rank]
        if any(x.denominator != 1 for x in fin):
            return False
        return self.is_root(tuple(int(x) for x in fin), v[self.rank])

    @cached_property
    def weyl_quotient(self) -> FiniteRootSystem:
        """Finite system used for the Weyl group: ``R_f`` or, for BC, ``R_f'`` (type C)."""
        if not self.type.is_bc:
            return self.quotient
        basis = self.complement_basis
        gram = [[self.inner(a, b) for b in basis] for a in basis]
        return FiniteRootSystem.from_gram("C", gram, scale=self.scale)

    @cached_property
    def complement_basis(self) -> tuple[Vector, ...]:
        """Simple roots spanning the finite complement of ``rad(I)`` in the splitting used."""
        if self.type.is_bc:
            return self.simple_roots[: self.rank]
        return self.simple_roots[1:]

    def embed(self, y: Sequence) -> Vector:
        """Map ``weyl_quotient`` simple-root coordinates into the extended space."""
        out = linalg.zero(self.dim)
        for c, b in zip(y, self.complement_basis):
            if c:
                out = linalg.add(out, linalg.scale(Fraction(c), b))
        return out

    def split(self, v: Sequence) -> tuple[Vector, Fraction]:
        """Write ``v`` in ``F`` as ``embed(y) + k delta``; returns ``(y, k)``."""
        v = linalg.vector(v)
        if v[-1] != 0:
            raise DomainError("vector has a component along rad(I)^*")
        cols = list(self.complement_basis) + [self.delta]
        m = [[cols[j][i] for j in range(len(cols))] for i in range(self.rank + 1)]
        sol = linalg.solve(m, v[: self.rank + 1])
        return sol[: self.rank], sol[self.rank]

    @property
    def theta_s_norm(self) -> Fraction:
        return self.quotient.norm(self.quotient.theta_s)

    @property
    def theta_norm(self) -> Fraction:
        return self.quotient.norm(self.quotient.theta)


def _primitive_null_vector(m) -> tuple[int, ...]:
    kernel = linalg.nullspace(m)
    if len(kernel) != 1:
        raise DomainError(f"generalized Cartan matrix has corank {len(kernel)}, expected 1")
    v = linalg.primitive_integer(kernel[0])
    if all(x <= 0 for x in v):
        v = tuple(-x for x in v)
    if not all(x > 0 for x in v):
        raise DomainError("null vector of the GCM is not positive")
    return v


def build_affine(atype: AffineType | str, scale=1) -> AffineSystem:
    if isinstance(atype, str):
        atype = AffineType.parse(atype)
    return AffineSystem(atype, build_finite(FiniteType(atype.family, atype.rank), scale))


def affine_from_finite(quotient: FiniteRootSystem, tier: int = 1,
                       label: AffineType | None = None) -> AffineSystem:
    """Untwisted (or twisted) affinization of an arbitrary finite system.

    Used for folding sources such as ``D_3^(1)`` that are not legal labels.
    """
    if label is None:
        label = _UnvalidatedType(quotient.family, quotient.rank, tier)
    return AffineSystem(label, quotient)


@dataclass(frozen=True)
class _UnvalidatedType:
    family: str
    rank: int
    tier: int

    def __str__(self) -> str:
        return f"{self.family}{self.rank}({self.tier})"

    twisted = AffineType.twisted
    is_bc = AffineType.is_bc


def roots_up_to(sys: AffineSystem, n_max: int) -> list[AffineRoot]:
    """All real roots ``alpha + k delta`` with ``|k| <= n_max``, by length stratum."""
    if n_max < 0:
        raise UsageError("n_max must be non-negative")
    out = []
    for k in range(-n_max, n_max + 1):
        for a in sys.quotient.roots:
            if sys.is_root(a, k):
                out.append(AffineRoot(a, k, sys.quotient.stratum_of(a)))
    return out


def special_indices(sys: AffineSystem) -> frozenset[int]:
    """Nodes ``i`` with ``delta - a_i alpha_i`` a root."""
    out = set()
    for i, (a, ai) in enumerate(zip(sys.labels, sys.simple_roots)):
        v = linalg.sub(sys.delta, linalg.scale(a, ai))
        if sys.is_root_vector(v):
            out.add(i)
    return frozenset(out)


@dataclass(frozen=True)
class Aliases:
    saito: str
    kac: str
    moody: str
    macdonald: str
    carter: str

    def get(self, scheme: str) -> str:
        return getattr(self, scheme)


NOMENCLATURE_SCHEMES = ("saito", "kac", "moody", "macdonald", "carter")


def nomenclature(atype: AffineType | str) -> Aliases:
    """Names of a reduced affine type in the five common conventions."""
    if isinstance(atype, str):
        atype = AffineType.parse(atype)
    f, l, t = atype.family, atype.rank, atype.tier
    saito = f"{f}_{l}^({t})"
    if t == 1:
        mac = f"{f}_{l}=({f}_{l})^v" if f in "ADE" else f"{f}_{l}"
        return Aliases(saito, f"{f}_{l}^(1)", f"{f}_{l},1", mac, f"~{f}_{l}")
    if f == "B":
        return Aliases(saito, f"D_{l + 1}^(2)", f"B_{l},2", f"C_{l}^v", f"~C_{l}^t")
    if f == "C":
        return Aliases(saito, f"A_{2 * l - 1}^(2)", f"C_{l},2", f"B_{l}^v", f"~B_{l}^t")
    if f == "F":
        return Aliases(saito, "E_6^(2)", "F_4,2", "F_4^v", "~F_4^t")
    if f == "G":
        return Aliases(saito, "D_4^(3)", "G_2,3", "G_2^v", "~G_2^t")
    moody = "A_1,2" if l == 1 else f"BC_{l},2"
    return Aliases(saito, f"A_{2 * l}^(2)", moody, f"BC_{l}=(BC_{l})^v", f"~C_{l}'")


# Non-reduced affine types and the affine Lie superalgebras sharing their
# root systems, with the reduced type whose Macdonald identity they reuse.
NONREDUCED_CORRESPONDENCE = (
    ("BCC_l", "B^(1)(0,l)", "BC_l^(2)"),
    ("C^vBC_l", "A^(4)(0,2l)", "B_l^(2)"),
    ("BB_l^v", "A^(2)(0,2l-1)", "B_l^(1)"),
    ("C^vC_l", "C^(2)(l+1)", "B_l^(2)"),
)
