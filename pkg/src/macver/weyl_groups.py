"""Finite Weyl groups, affine translations and the lattices ``M``."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .affine_roots import AffineSystem
from .errors import CapacityError, DomainError
from .finite_roots import FiniteRootSystem
from .linalg import Matrix, Vector

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class WeylElement:
    """Element of ``W(R_f)`` as an integer matrix on simple-root coordinates."""
    matrix: np.ndarray
    length: int

    @property
    def det(self) -> int:
        return -1 if self.length % 2 else 1

    def apply(self, x: Sequence) -> Vector:
        return linalg.mat_vec(self.matrix.tolist(), x)

    def as_fractions(self) -> Matrix:
        return linalg.matrix(self.matrix.tolist())


def simple_reflection_matrices(rs: FiniteRootSystem) -> list[np.ndarray]:
    """``s_i`` on simple-root coordinates: ``x -> x - <x, alpha_i^vee> alpha_i``."""
    l = rs.rank
    mats = []
    for i in range(l):
        s = np.eye(l, dtype=np.int64)
        s[i, :] -= np.array(rs.cartan[i], dtype=np.int64)
        mats.append(s)
    return mats


def enumerate_weyl(rs: FiniteRootSystem, cap: int = DEFAULT_CAP) -> list[WeylElement]:
    """All elements of ``W(R_f)`` by breadth-first search on the orbit of ``2 rho``.

    ``W`` acts simply transitively on the regular orbit, and the BFS depth of a
    point is the length of the element reaching it.
    """
    order = rs.weyl_order
    if order > cap:
        raise CapacityError(f"|W({rs.family}{rs.rank})| = {order} exceeds the cap {cap}", required=order)
    gens = simple_reflection_matrices(rs)
    rho2 = np.array([int(2 * x) for x in rs.rho], dtype=np.int64)
    start = np.eye(rs.rank, dtype=np.int64)
    seen = {tuple(rho2.tolist())}
    out = [WeylElement(start, 0)]
    queue = deque([(start, rho2, 0)])
    while queue:
        m, v, depth = queue.popleft()
        for s in gens:
            w = s @ v
            key = tuple(w.tolist())
            if key in seen:
                continue
            seen.add(key)
            mm = s @ m
            mm.flags.writeable = False
            out.append(WeylElement(mm, depth + 1))
            queue.append((mm, w, depth + 1))
    if len(out) != order:
        raise DomainError(f"enumerated {len(out)} Weyl group elements, expected {order}")
    return out


def rho_orbit(rs: FiniteRootSystem, lam: Sequence[int], cartan=None) -> list[tuple[tuple[int, ...], int]]:
    """Orbit ``{(u(lam), det u)}`` of a regular integral point, in Dynkin-label coordinates.

    Simple reflections act on labels by ``m -> m - m_i * A[i]`` (row of the
    Cartan matrix transposed).  ``lam`` must be regular.
    """
    cart = rs.cartan if cartan is None else cartan
    l = len(cart)
    start = tuple(int(x) for x in lam)
    if any(x == 0 for x in start):
        raise DomainError("rho_orbit needs a regular weight")
    seen = {start: 1}
    frontier = [start]
    sign = 1
    while frontier:
        sign = -sign
        nxt = []
        for v in frontier:
            for i in range(l):
                c = v[i]
                w = tuple(v[j] - c * cart[j][i] for j in range(l))
                if w not in seen:
                    seen[w] = sign
                    nxt.append(w)
        frontier = nxt
    return list(seen.items())


def label_matrix(rs: FiniteRootSystem, u: WeylElement) -> np.ndarray:
    """``u`` acting on Dynkin labels: ``A M A^-1``, since labels are ``A`` times coordinates."""
    a = np.array(rs.cartan, dtype=object)
    ainv = linalg.inverse(a.tolist())
    m = np.array(u.matrix.tolist(), dtype=object)
    res = a @ m @ np.array(ainv, dtype=object)
    return np.array([[int(x) for x in row] for row in res], dtype=np.int64)


# -- affine extension ---------------------------------------------------------------

def hat_reflection(sys: AffineSystem, alpha: Sequence) -> Matrix:
    """Matrix of ``s_alpha(x) = x - I(x, alpha^vee) alpha`` on the extended space."""
    alpha = linalg.vector(alpha)
    cor = sys.coroot(alpha)
    n = sys.dim
    cols = []
    for k in range(n):
        e = linalg.unit(n, k)
        p = sys.inner(e, cor)
        cols.append(linalg.sub(e, linalg.scale(p, alpha)))
    return linalg.transpose(cols)


def translation_matrix(sys: AffineSystem, gamma: Sequence) -> Matrix:
    """``t_gamma(x) = x + I(x,delta) gamma - (I(x,gamma) + |gamma|^2 I(x,delta) / 2) delta``."""
    g = linalg.vector(gamma)
    if len(g) == sys.rank:
        g = sys.embed_finite(g)
    n = sys.dim
    half = sys.form.norm(g) / 2
    cols = []
    for k in range(n):
        e = linalg.unit(n, k)
        xd = sys.inner(e, sys.delta)
        v = linalg.add(e, linalg.scale(xd, g))
        v = linalg.sub(v, linalg.scale(sys.inner(e, g) + half * xd, sys.delta))
        cols.append(v)
    return linalg.transpose(cols)


def finite_extension(sys: AffineSystem, u: WeylElement) -> Matrix:
    """Extend ``u in W(weyl_quotient)`` to the extended space.

    ``u`` fixes ``delta`` and the part of ``d`` orthogonal to the finite
    complement, which makes the extension an isometry in every case (for
    ``BC`` the complement is spanned by ``alpha_0, ..., alpha_{l-1}``).
    """
    basis = sys.complement_basis
    gp = [[sys.inner(a, b) for b in basis] for a in basis]
    proj = linalg.solve(gp, [sys.inner(sys.d_vector, b) for b in basis])
    d_perp = linalg.sub(sys.d_vector, sys.embed(proj))
    m = u.as_fractions()

    def act(y: Sequence) -> Vector:
        return sys.embed(linalg.mat_vec(m, y))

    # express each standard basis vector as complement-coords + a delta + b d_perp
    n = sys.dim
    cols = []
    for k in range(n):
        e = linalg.unit(n, k)
        b = sys.inner(e, sys.delta)  # coefficient of d_perp (I(d_perp, delta) = 1)
        rest = linalg.sub(e, linalg.scale(b, d_perp))
        y, a = sys.split(rest)
        cols.append(linalg.add(linalg.add(act(y), linalg.scale(a, sys.delta)),
                               linalg.scale(b, d_perp)))
    out = linalg.transpose(cols)
    if not _is_isometry(sys, out):
        raise DomainError("finite Weyl element does not extend to an isometry")
    return out


def _is_isometry(sys: AffineSystem, m: Matrix) -> bool:
    g = sys.form.gram
    return linalg.mat_mul(linalg.mat_mul(linalg.transpose(m), g), m) == g


@dataclass(frozen=True)
class AffineWeylElement:
    """``u t_gamma`` with ``u`` finite and ``gamma`` in the finite complement."""
    u: WeylElement
    gamma: Vector
    matrix: Matrix

    @property
    def det(self) -> int:
        return self.u.det


def affine_element(sys: AffineSystem, u: WeylElement, gamma: Sequence) -> AffineWeylElement:
    g = linalg.vector(gamma)
    if len(g) != sys.dim:
        g = sys.embed(g)
    m = linalg.mat_mul(finite_extension(sys, u), translation_matrix(sys, g))
    return AffineWeylElement(u, g, m)


def translation(sys: AffineSystem, gamma: Sequence) -> AffineWeylElement:
    l = sys.rank
    ident = WeylElement(np.eye(l, dtype=np.int64), 0)
    g = linalg.vector(gamma)
    if len(g) != sys.dim:
        g = sys.embed(g)
    return AffineWeylElement(ident, g, translation_matrix(sys, g))


@dataclass(frozen=True)
class TranslationLattice:
    """Basis of ``M`` in ``weyl_quotient`` simple-root coordinates."""
    basis: tuple[Vector, ...]
    description: str

    def gram(self, rs: FiniteRootSystem) -> Matrix:
        return linalg.matrix([[rs.inner(a, b) for b in self.basis] for a in self.basis])


def translation_lattice(sys: AffineSystem) -> TranslationLattice:
    rs = sys.weyl_quotient
    if sys.type.is_bc:
        return TranslationLattice(rs.coroot_vectors, "Q((R_f')^vee)")
    if sys.type.tier == 1:
        return TranslationLattice(rs.coroot_vectors, "Q(R_f^vee)")
    c = 2 / sys.theta_s_norm
    basis = tuple(linalg.scale(c, a) for a in rs.simple_roots)
    return TranslationLattice(basis, "(2/I(theta_s,theta_s)) Q(R_f)")


def check_s0_product(sys: AffineSystem) -> bool:
    """``s_{alpha_0} s_{delta - alpha_0}`` (or ``s_{alpha_l} s_{delta - 2 alpha_l}`` for BC) is a translation."""
    rs = sys.weyl_quotient
    if sys.type.is_bc:
        a = sys.simple_roots[sys.rank]
        b = linalg.sub(sys.delta, linalg.scale(2, a))
        theta = sys.embed(rs.theta)
    else:
        a = sys.simple_roots[0]
        b = linalg.sub(sys.delta, a)
        theta = sys.embed_finite(rs.theta if sys.type.tier == 1 else rs.theta_s)
    prod = linalg.mat_mul(hat_reflection(sys, a), hat_reflection(sys, b))
    t = translation_matrix(sys, sys.coroot(theta))
    return prod == t
