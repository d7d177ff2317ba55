"""Weyl vectors and the denominator and Macdonald identities.

Both sides of each identity are built independently and compared exactly:

* finite denominator identity as an exact element of the group ring of ``P``;
* affine denominator identity in the group ring of ``P`` tensor truncated
  ``q``-series (``q = e^{-delta}``), sum side over ``W x M`` with ``M``
  enumerated by the certified lattice enumerator;
* Macdonald identities as truncated ``q``-series: an eta product against a
  ``d``-weighted lattice sum.

"Order ``N``" means coefficients are compared through ``q^(c + N)`` where
``q^c`` is the leading term (``c`` is the strange-formula value).
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm, prod
from typing import Any, Sequence

import numpy as np

from . import linalg
from .affine_roots import AffineSystem, AffineType, build_affine
from .errors import DomainError, UsageError
from .finite_roots import FiniteRootSystem
from .folding import folding_source, source_affine
from .groupring import BoxPoly
from .lattice import enumerate_shifted
from .linalg import Vector, as_fraction
from .qseries import EtaFactor, QSeries, compare, eta_product
from .weyl_groups import DEFAULT_CAP, enumerate_weyl, label_matrix, translation_lattice


# -- Weyl vectors ---------------------------------------------------------------------

@dataclass(frozen=True)
class WeylVectorData:
    rho_f: Vector                       # in weyl_quotient coordinates (R_f, or R_f' for BC)
    fundamental: tuple[Vector, ...]     # Lambda_0 .. Lambda_l in the extended space
    rho: Vector
    rho_prime: Vector
    rho_delta: Fraction                 # I(rho, delta)
    rho_norm: Fraction                  # I(rho, rho)

    @property
    def strange_value(self) -> Fraction:
        return self.rho_norm / (2 * self.rho_delta)


def weyl_vector_data(sys: AffineSystem) -> WeylVectorData:
    """Solve ``I(Lambda_i, alpha_j^vee) = delta_ij`` in ``span(complement) + R d``."""
    basis = list(sys.complement_basis) + [sys.d_vector]
    cor = [sys.coroot(a) for a in sys.simple_roots]
    m = [[sys.inner(b, c) for b in basis] for c in cor]
    fund = []
    n = sys.rank + 1
    for i in range(n):
        x = linalg.solve(m, [Fraction(int(i == j)) for j in range(n)])
        v = linalg.zero(sys.dim)
        for c, b in zip(x, basis):
            v = linalg.add(v, linalg.scale(c, b))
        fund.append(v)
    rho = linalg.zero(sys.dim)
    for v in fund:
        rho = linalg.add(rho, v)
    rd = sys.inner(rho, sys.delta)
    rr = sys.inner(rho, rho)
    rho_prime = linalg.sub(rho, linalg.scale(rr / (2 * rd), sys.delta))
    return WeylVectorData(sys.weyl_quotient.rho, tuple(fund), rho, rho_prime, rd, rr)


def rho_delta_closed_form(sys: AffineSystem) -> Fraction | None:
    """``(I(theta,theta)/2) h^vee`` (untwisted) or ``(I(theta_s,theta_s)/2) h^vee`` (twisted)."""
    if sys.type.is_bc:
        return None
    n = sys.theta_norm if sys.type.tier == 1 else sys.theta_s_norm
    return n / 2 * sys.dual_coxeter_number


def source_dimension(sys: AffineSystem) -> int:
    """``dim g`` of ``R_f`` (untwisted) or of the folding source ``Y_N`` (twisted)."""
    if sys.type.is_bc:
        raise DomainError("no folding source for BC")
    if sys.type.tier == 1:
        return sys.quotient.dimension
    src, _ = folding_source(sys.type)
    return src.dimension


def strange_formula_check(sys: AffineSystem) -> tuple[Fraction, Fraction]:
    """``(I(rho,rho) / 2 I(rho,delta), dim g / 24)``; raises if they differ."""
    wv = weyl_vector_data(sys)
    expected = Fraction(source_dimension(sys), 24)
    if wv.strange_value != expected:
        raise DomainError(f"strange formula fails for {sys.type}: {wv.strange_value} != {expected}")
    return wv.strange_value, expected


def kostant_check(rs: FiniteRootSystem) -> bool:
    """``dim g = (h + 1) l``."""
    return rs.dimension == (rs.coxeter_number + 1) * rs.rank


def dual_coxeter_folding_check(atype: AffineType | str) -> tuple[int, int]:
    """``h^vee`` of a twisted type and the label sum of its simply-laced folding source."""
    sys = build_affine(atype) if isinstance(atype, str) else build_affine(atype)
    src, _ = folding_source(sys.type)
    aff = source_affine(src)
    a, b = sys.dual_coxeter_number, sum(aff.labels)
    if a != b:
        raise DomainError(f"h^vee mismatch for {sys.type}: {a} != {b}")
    return a, b


def twisted_bookkeeping(sys: AffineSystem) -> tuple[int, int]:
    """``dim g(Y_N)`` against ``(h+1)(|Pi_s| + t |Pi_l|)``."""
    rs = sys.quotient
    h = rs.coxeter_number
    rhs = (h + 1) * (len(rs.simple_short) + sys.type.tier * len(rs.simple_long))
    return source_dimension(sys), rhs


# -- Weyl dimension factor -------------------------------------------------------------

def weyl_dim_factor(rs: FiniteRootSystem, lam: Sequence) -> Fraction:
    """``d(lam) = prod_{alpha>0} I(lam + rho, alpha) / I(rho, alpha)``, asserted integral."""
    if rs.nonreduced:
        raise DomainError("use the reduced subsystem for d")
    lam = linalg.vector(lam)
    rs.integer_labels(lam)
    shifted = linalg.add(lam, rs.rho)
    val = Fraction(1)
    for a in rs.positive_roots:
        val *= rs.inner(shifted, a) / rs.inner(rs.rho, a)
    if val.denominator != 1:
        raise DomainError(f"d({tuple(lam)}) = {val} is not an integer")
    return val


def _truncated_sinh(x: Fraction) -> Fraction:
    # e^{x/2} - e^{-x/2} with exp cut after the cubic term
    return x + x**3 / 24


def specialization_check(rs: FiniteRootSystem, lam: Sequence, k: int = 10) -> tuple[Fraction, Fraction, Fraction, bool]:
    """Evaluate the Weyl-character ratio at ``t rho`` with ``t = 2^-k`` and compare with ``d``.

    Returns ``(ratio, d, C, ok)`` where ``ok`` means ``|ratio - d| <= 4^-k C``.
    """
    lam = linalg.vector(lam)
    d = weyl_dim_factor(rs, lam)
    t = Fraction(1, 2**k)
    shifted = linalg.add(lam, rs.rho)
    a = [rs.inner(shifted, r) for r in rs.positive_roots]
    b = [rs.inner(rs.rho, r) for r in rs.positive_roots]
    num = prod((_truncated_sinh(t * x) for x in a), start=Fraction(1))
    den = prod((_truncated_sinh(t * y) for y in b), start=Fraction(1))
    ratio = num / den
    c = abs(d) * (sum(x * x for x in a) + sum(y * y for y in b)) / 12
    return ratio, d, c, abs(ratio - d) <= c / 4**k


# -- reports -----------------------------------------------------------------------------

@dataclass
class IdentityReport:
    identity: str
    type: str
    order: int | None
    lhs: Any
    rhs: Any
    verdict: bool
    first_mismatch: dict | None = None
    lattice_points: int = 0
    wall_ms: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self, wall: bool = True) -> dict:
        out = {
            "identity": self.identity,
            "type": self.type,
            "order": self.order,
            "verdict": "pass" if self.verdict else "fail",
            "first_mismatch": self.first_mismatch,
            "lattice_points_enumerated": self.lattice_points,
        }
        if wall:
            out["wall_ms"] = round(self.wall_ms, 3)
        return out


def _series_mismatch(lhs: QSeries, rhs: QSeries, order: Fraction) -> tuple[bool, dict | None]:
    rep = compare(lhs, rhs, order)
    if rep.equal:
        return True, None
    den = lcm(rep.exponent.denominator, 1)
    return False, {
        "exponent_num": int(rep.exponent * den),
        "denom": den,
        "lhs_coeff": str(rep.lhs),
        "rhs_coeff": str(rep.rhs),
    }


def _dict_mismatch(lhs: dict, rhs: dict, qden: int | None = None) -> tuple[bool, dict | None]:
    keys = sorted(set(lhs) | set(rhs))
    for k in keys:
        a, b = lhs.get(k, 0), rhs.get(k, 0)
        if a != b:
            out = {"lhs_coeff": str(a), "rhs_coeff": str(b)}
            if qden is None:
                out["weight"] = list(k)
            else:
                out.update({"exponent_num": k[0], "denom": qden, "weight": list(k[1:])})
            return False, out
    return True, None


# -- finite denominator identity ---------------------------------------------------------------

def denominator_finite(rs: FiniteRootSystem, cap: int = DEFAULT_CAP) -> IdentityReport:
    """``e^rho prod_{alpha>0}(1 - e^-alpha) = sum_W det(u) e^{u rho}``, exactly.

    Monomials are keyed by doubled simple-root coordinates.  Also checks the
    rewriting as ``prod (e^{alpha/2} - e^{-alpha/2})``.
    """
    t0 = time.perf_counter()
    group = enumerate_weyl(rs, cap)
    rho2 = np.array([int(2 * x) for x in rs.rho], dtype=np.int64)
    rhs: dict[tuple[int, ...], int] = {}
    for u in group:
        key = tuple(int(x) for x in u.matrix @ rho2)
        rhs[key] = rhs.get(key, 0) + u.det
    rhs = {k: v for k, v in rhs.items() if v}
    lo, hi = (-rho2).tolist(), rho2.tolist()
    zero = [0] * rs.rank
    pos = sorted(rs.positive_roots, key=lambda r: (sum(r), r))
    lhs_poly = BoxPoly(lo, hi).set_terms([(rho2.tolist(), 1)])
    for a in pos:
        lhs_poly.multiply([(zero, 1), ([-2 * x for x in a], -1)])
    lhs = lhs_poly.to_dict()
    alt_poly = BoxPoly(lo, hi).set_terms([(zero, 1)])
    for a in pos:
        alt_poly.multiply([(list(a), 1), ([-x for x in a], -1)])
    alt = alt_poly.to_dict()
    ok, mism = _dict_mismatch(lhs, rhs)
    if ok and alt != lhs:
        ok, mism = _dict_mismatch(alt, lhs)
        mism = dict(mism or {}, note="half-root product rewriting")
    return IdentityReport("denominator_finite", f"{rs.family}{rs.rank}", None, lhs, rhs, ok, mism,
                          0, (time.perf_counter() - t0) * 1000,
                          {"weyl_order": len(group), "terms": len(rhs)})


# -- lattice sums ----------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeSum:
    """``{rho_f + gamma : gamma in c M}`` with ``|rho_f + gamma|^2 / (2 e) <= cutoff``."""
    rs: FiniteRootSystem
    basis: tuple[Vector, ...]          # basis of M
    lattice_scale: Fraction
    exponent_scale: Fraction           # e in the exponent |lam|^2 / 2e
    cutoff: Fraction

    def points(self) -> list[Vector]:
        rs, c = self.rs, self.lattice_scale
        cols = [linalg.scale(c, b) for b in self.basis]
        gram = [[rs.inner(a, b) for b in cols] for a in cols]
        m = [[cols[j][i] for j in range(len(cols))] for i in range(rs.rank)]
        shift = linalg.solve(m, rs.rho)
        bound = 2 * self.exponent_scale * self.cutoff
        zs, _ = enumerate_shifted(gram, shift, bound)
        out = []
        for z in zs:
            v = rs.rho
            for zi, col in zip(z, cols):
                if zi:
                    v = linalg.add(v, linalg.scale(zi, col))
            out.append(v)
        return out


def _int_setup(rs: FiniteRootSystem):
    gden = lcm(1, *(x.denominator for row in rs.form.gram for x in row))
    g = [[int(x * gden) for x in row] for row in rs.form.gram]
    w = [[sum(g[i][j] * a[j] for j in range(rs.rank)) for i in range(rs.rank)]
         for a in rs.positive_roots]
    rho2 = [2 * x for x in rs.rho]
    dens = [sum(rho2[i] * wa[i] for i in range(rs.rank)) for wa in w]
    return gden, g, w, dens


def _evaluate(args) -> list[tuple[Fraction, int]]:
    """``(|lam|^2, d)`` for each point; ``d`` computed from integer pairings."""
    pts2, gden, g, w, dens = args
    den_prod = prod(int(x) for x in dens)
    out = []
    for v in pts2:
        num = 1
        for wa in w:
            num *= sum(v[i] * wa[i] for i in range(len(v)))
            if num == 0:
                break
        if num % den_prod:
            raise DomainError(f"non-integral d at doubled point {v}")
        n2 = sum(v[i] * g[i][j] * v[j] for i in range(len(v)) for j in range(len(v)))
        out.append((Fraction(n2, 4 * gden), num // den_prod))
    return out


def lattice_series(ls: LatticeSum, threads: int = 1, min_parallel: int = 2000) -> tuple[QSeries, int]:
    """``sum d(gamma) q^{|rho_f + gamma|^2 / 2e}`` over the lattice sum, known through the cutoff."""
    pts = ls.points()
    gden, g, w, dens = _int_setup(ls.rs)
    pts2 = []
    for v in pts:
        v2 = [2 * x for x in v]
        if any(x.denominator != 1 for x in v2):
            raise DomainError("lattice point is not in the weight lattice")
        pts2.append([int(x) for x in v2])
    if threads > 1 and len(pts2) > min_parallel:
        chunks = [pts2[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(threads) as pool:
            parts = list(pool.map(_evaluate, [(c, gden, g, w, dens) for c in chunks]))
        vals = [x for part in parts for x in part]
    else:
        vals = _evaluate((pts2, gden, g, w, dens))
    terms: dict[Fraction, Fraction] = {}
    for n2, d in vals:
        if d:
            e = n2 / (2 * ls.exponent_scale)
            terms[e] = terms.get(e, 0) + d
    return QSeries(terms, ls.cutoff), len(pts)


# -- Macdonald identities ----------------------------------------------------------------------------

def _finish(name: str, sys: AffineSystem, order: int, lhs: QSeries, rhs: QSeries,
            points: int, t0: float, extra: dict) -> IdentityReport:
    cut = rhs.order
    ok, mism = _series_mismatch(lhs, rhs, cut)
    return IdentityReport(name, str(sys.type), order, lhs, rhs, ok, mism, points,
                          (time.perf_counter() - t0) * 1000, extra)


def _check_order(order: int) -> None:
    if order < 1:
        raise UsageError("order must be at least 1")


def macdonald_untwisted(sys: AffineSystem, order: int = 20, threads: int = 1) -> IdentityReport:
    """``eta(q)^{dim g} = sum_{gamma in I(rho,delta) Q^vee} d(gamma) q^{|rho_f+gamma|^2 / 2 I(rho,delta)}``."""
    _check_order(order)
    if sys.type.tier != 1:
        raise UsageError(f"{sys.type} is not untwisted")
    t0 = time.perf_counter()
    rs = sys.quotient
    wv = weyl_vector_data(sys)
    dim = rs.dimension
    c = Fraction(dim, 24)
    cut = c + order
    lhs = eta_product([EtaFactor(Fraction(1), dim)], cut)
    lat = translation_lattice(sys)
    ls = LatticeSum(rs, lat.basis, wv.rho_delta, wv.rho_delta, cut)
    rhs, npts = lattice_series(ls, threads)
    return _finish("macdonald", sys, order, lhs, rhs, npts, t0,
                   {"leading": c, "rho_delta": wv.rho_delta})


def macdonald_twisted(sys: AffineSystem, order: int = 20, threads: int = 1) -> IdentityReport:
    """``(eta(q)^{|Pi_s|} eta(q^t)^{|Pi_l|})^{h+1} = sum_{gamma in h^vee Q} d(gamma) q^...``."""
    _check_order(order)
    if sys.type.tier == 1 or sys.type.is_bc:
        raise UsageError(f"{sys.type} is not twisted of non-BC type")
    t0 = time.perf_counter()
    rs = sys.quotient
    wv = weyl_vector_data(sys)
    h = rs.coxeter_number
    ns, nl = len(rs.simple_short), len(rs.simple_long)
    t = sys.type.tier
    dim_src, dim_count = twisted_bookkeeping(sys)
    factors = [EtaFactor(Fraction(1), ns * (h + 1)), EtaFactor(Fraction(t), nl * (h + 1))]
    c = sum((f.weight for f in factors), Fraction(0))
    cut = c + order
    lhs = eta_product(factors, cut)
    lat = translation_lattice(sys)
    scale_check = wv.rho_delta * 2 / sys.theta_s_norm
    ls = LatticeSum(rs, lat.basis, wv.rho_delta, wv.rho_delta, cut)
    rhs, npts = lattice_series(ls, threads)
    rep = _finish("macdonald", sys, order, lhs, rhs, npts, t0,
                  {"leading": c, "rho_delta": wv.rho_delta, "dim_source": dim_src,
                   "dim_count": dim_count, "lattice_multiplier": scale_check})
    if dim_src != dim_count or scale_check != sys.dual_coxeter_number:
        rep.verdict = False
        rep.first_mismatch = rep.first_mismatch or {"bookkeeping": [dim_src, dim_count],
                                                    "lattice_multiplier": str(scale_check)}
    return rep


def bc_eta_factors(l: int) -> list[EtaFactor]:
    """``(eta(q^1/2)^2 eta(q)^{2l-3} eta(q^2)^2)^l``."""
    return [EtaFactor(Fraction(1, 2), 2 * l), EtaFactor(Fraction(1), (2 * l - 3) * l),
            EtaFactor(Fraction(2), 2 * l)]


def macdonald_BC(l: int, order: int = 10, scale=1, lattice_scale=None,
                 threads: int = 1) -> IdentityReport:
    """The ``BC_l^(2)`` identity; the sum runs over ``I(rho,delta) Q((R_f')^vee)``.

    ``lattice_scale`` replaces ``I(rho,delta)`` as the lattice multiplier only;
    the exponent keeps ``2 I(rho,delta)`` in the denominator.
    """
    _check_order(order)
    t0 = time.perf_counter()
    sys = build_affine(AffineType("BC", l, 2), scale)
    rs = sys.weyl_quotient
    wv = weyl_vector_data(sys)
    factors = bc_eta_factors(l)
    c = sum((f.weight for f in factors), Fraction(0))
    cut = c + order
    lhs = eta_product(factors, cut)
    lat = translation_lattice(sys)
    mult = wv.rho_delta if lattice_scale is None else as_fraction(lattice_scale)
    ls = LatticeSum(rs, lat.basis, mult, wv.rho_delta, cut)
    rhs, npts = lattice_series(ls, threads)
    return _finish("macdonald", sys, order, lhs, rhs, npts, t0,
                   {"leading": c, "rho_delta": wv.rho_delta, "lattice_scale": mult,
                    "eta_weight": sum(f.exponent for f in factors)})


def macdonald(sys: AffineSystem, order: int = 20, threads: int = 1,
              lattice_scale=None) -> IdentityReport:
    if sys.type.is_bc:
        return macdonald_BC(sys.rank, order, sys.scale, lattice_scale, threads)
    if lattice_scale is not None:
        raise UsageError("--lattice-scale applies to BC types only")
    if sys.type.tier == 1:
        return macdonald_untwisted(sys, order, threads)
    return macdonald_twisted(sys, order, threads)


# -- affine denominator identity ------------------------------------------------------------------

def _imaginary_multiplicity(sys: AffineSystem, n: int) -> int:
    rs = sys.quotient
    if sys.type.tier == 1 or sys.type.is_bc:
        return sys.rank
    return len(rs.simple_short) + (len(rs.simple_long) if n % sys.type.tier == 0 else 0)


def positive_real_roots(sys: AffineSystem, n_max) -> list[tuple[Vector, Fraction]]:
    """Positive real roots ``y + k delta`` (``y`` in ``weyl_quotient`` coordinates) with ``k <= n_max``.

    For BC, ``y`` may be half of a root of ``R_f'``, and ``k`` a half-integer.
    """
    out = []
    rs = sys.weyl_quotient
    for k in range(-int(n_max) - 2, int(n_max) + 3):
        for a in sys.quotient.roots:
            if not sys.is_root(a, k):
                continue
            y, kk = sys.split(tuple(a) + (k, 0))
            if kk > n_max or kk < 0:
                continue
            if kk == 0 and not all(x >= 0 for x in y):
                continue
            out.append((y, kk))
    return out


def denominator_affine(sys: AffineSystem, order: int = 5, cap: int = DEFAULT_CAP) -> IdentityReport:
    """Affine denominator identity in ``Z[P] x Q[[q]]`` through ``q^order``.

    Product side: ``e^{rho_f} prod (1 - e^{-y} q^k)`` over positive real roots
    and imaginary factors ``(1 - q^n)^mult``.  Sum side:
    ``sum_{gamma in I(rho,delta) M} sum_W det(u) e^{u(rho_f + gamma)} q^{(|rho_f+gamma|^2 - |rho_f|^2) / 2 I(rho,delta)}``.
    Both are multiplied out in full; nothing is divided.
    """
    _check_order(order)
    t0 = time.perf_counter()
    rs = sys.weyl_quotient
    wv = weyl_vector_data(sys)
    c0 = wv.rho_delta
    qden = 2 if sys.type.is_bc else 1
    nq = order * qden
    l = rs.rank
    start = [0] + [1] * l
    factors = []
    for y, k in positive_real_roots(sys, order):
        labels = rs.integer_labels(y)
        factors.append([(0,) + (0,) * l, 1, (int(k * qden),) + tuple(-x for x in labels), -1])
    for n in range(1, order + 1):
        for _ in range(_imaginary_multiplicity(sys, n)):
            factors.append([(0,) * (l + 1), 1, (n * qden,) + (0,) * l, -1])
    factors.sort(key=lambda f: (f[2][0], f[2][1:]))
    lo, hi = list(start), list(start)
    for f in factors:
        for i in range(l + 1):
            lo[i] += min(0, f[2][i])
            hi[i] += max(0, f[2][i])
    lo[0], hi[0] = 0, nq
    poly = BoxPoly(lo, hi, cap0=nq).set_terms([(start, 1)])
    for z, cz, s, cs in factors:
        if s[0] > nq:
            continue
        poly.multiply([(z, cz), (s, cs)])
    lhs = poly.to_dict()

    group = enumerate_weyl(rs, cap)
    mats = [(label_matrix(rs, u), u.det) for u in group]
    rho_norm = rs.norm(rs.rho)
    lat = translation_lattice(sys)
    ls = LatticeSum(rs, lat.basis, c0, c0, (rho_norm + 2 * c0 * order) / (2 * c0))
    pts = ls.points()
    rhs: dict[tuple[int, ...], int] = {}
    for lam in pts:
        e = (rs.norm(lam) - rho_norm) / (2 * c0)
        eq = e * qden
        if eq.denominator != 1:
            raise DomainError(f"exponent {e} off the q-grid")
        labels = np.array(rs.integer_labels(lam), dtype=np.int64)
        for m, det in mats:
            key = (int(eq),) + tuple(int(x) for x in m @ labels)
            rhs[key] = rhs.get(key, 0) + det
    rhs = {k: v for k, v in rhs.items() if v}
    ok, mism = _dict_mismatch(lhs, rhs, qden)
    return IdentityReport("denominator_affine", str(sys.type), order, lhs, rhs, ok, mism,
                          len(pts), (time.perf_counter() - t0) * 1000,
                          {"terms": len(lhs), "factors": len(factors)})
