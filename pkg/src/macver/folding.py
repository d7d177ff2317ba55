"""Diagram automorphisms, folding (orbit sums) and mean-folding (orbit means).

Folding images are built in two ways that are checked against each other:
directly on root sets (every root is sent to the sum or mean of its orbit),
and on simple roots (orbits of nodes give the simple roots of the image).
The type of an image is identified by matching Cartan matrices up to node
relabelling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg
from .affine_roots import (LEGAL_TIERS, AffineSystem, AffineType, affine_from_finite,
                           build_affine, roots_up_to)
from .errors import DomainError, UsageError
from .finite_roots import (FiniteRootSystem, FiniteType, _cartan_from_gram, _closure,
                           build_finite, check_axioms, default_gram)
from .linalg import GramForm, Vector

SUM, MEAN = "sum", "mean"


# -- automorphisms ----------------------------------------------------------------

@dataclass(frozen=True)
class DiagramAutomorphism:
    """Node permutation ``perm[i] = sigma(i)`` of a (generalized) Cartan matrix."""
    perm: tuple[int, ...]
    name: str = ""

    @property
    def order(self) -> int:
        k, p = 1, list(self.perm)
        while p != list(range(len(p))):
            p = [self.perm[x] for x in p]
            k += 1
        return k

    @property
    def fixed_nodes(self) -> tuple[int, ...]:
        return tuple(i for i, j in enumerate(self.perm) if i == j)

    def powers(self) -> list[tuple[int, ...]]:
        out, p = [], tuple(range(len(self.perm)))
        for _ in range(self.order):
            out.append(p)
            p = tuple(self.perm[x] for x in p)
        return out

    def node_orbits(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(len(self.perm)):
            if i in seen:
                continue
            orb, j = [], i
            while j not in orb:
                orb.append(j)
                j = self.perm[j]
            seen.update(orb)
            out.append(tuple(sorted(orb)))
        return out

    def act(self, x: Sequence) -> tuple:
        """Image of a vector given in simple-root coordinates."""
        y = [0] * len(x)
        for i, c in enumerate(x):
            y[self.perm[i]] = c
        return tuple(y)

    def check(self, cartan: Sequence[Sequence[int]]) -> None:
        n = len(cartan)
        if sorted(self.perm) != list(range(n)):
            raise DomainError("automorphism is not a permutation of the nodes")
        for i in range(n):
            for j in range(n):
                if cartan[self.perm[i]][self.perm[j]] != cartan[i][j]:
                    raise DomainError(f"permutation {self.perm} does not preserve the Cartan matrix")


def identity_automorphism(n: int) -> DiagramAutomorphism:
    return DiagramAutomorphism(tuple(range(n)), "id")


def finite_automorphism(family: str, rank: int) -> DiagramAutomorphism:
    """Catalog automorphisms of ``A_{2l-1}``, ``D_{l+1}``, ``E_6`` and ``D_4`` (triality)."""
    n = rank
    if family == "A" and n % 2 == 1 and n >= 3:
        return DiagramAutomorphism(tuple(n - 1 - i for i in range(n)), f"A{n} flip")
    if family == "D" and n >= 3:
        perm = list(range(n))
        perm[n - 2], perm[n - 1] = n - 1, n - 2
        return DiagramAutomorphism(tuple(perm), f"D{n} flip")
    if family == "E" and n == 6:
        return DiagramAutomorphism((5, 1, 4, 3, 2, 0), "E6 flip")
    raise UsageError(f"no catalog automorphism for {family}{n}")


def triality() -> DiagramAutomorphism:
    # 1 -> 3 -> 4 -> 1 in Bourbaki numbering
    return DiagramAutomorphism((2, 1, 3, 0), "D4 triality")


def affine_extension(sigma: DiagramAutomorphism) -> DiagramAutomorphism:
    """Fix node 0 and act by ``sigma`` on nodes ``1..l``."""
    return DiagramAutomorphism((0,) + tuple(i + 1 for i in sigma.perm), sigma.name + " (affine)")


def bc_automorphism(l: int) -> DiagramAutomorphism:
    """Order-4 automorphism of ``D_{2l+2}^(1)`` cycling the four extremal nodes.

    ``0 -> n-1 -> 1 -> n -> 0`` with ``n = 2l+2``; the chain node ``i`` goes to
    ``n - i``, so ``l + 1`` is the only fixed node.
    """
    if l < 1:
        raise UsageError("l must be at least 1")
    n = 2 * l + 2
    perm = list(range(n + 1))
    perm[0], perm[n - 1], perm[1], perm[n] = n - 1, 1, n, 0
    for i in range(2, n - 1):
        perm[i] = n - i
    return DiagramAutomorphism(tuple(perm), f"D{n}(1) order 4")


# -- folding of vectors -------------------------------------------------------------

def orbit(sigma: DiagramAutomorphism, x: Sequence) -> list[tuple]:
    out, y = [], tuple(x)
    while y not in out:
        out.append(y)
        y = sigma.act(y)
    return out


def tr_sum(sigma: DiagramAutomorphism, x: Sequence) -> Vector:
    """Sum over the orbit ``<sigma>.x`` (each distinct image counted once)."""
    pts = orbit(sigma, x)
    return tuple(sum((Fraction(p[i]) for p in pts), Fraction(0)) for i in range(len(x)))


def tr_mean(sigma: DiagramAutomorphism, x: Sequence) -> Vector:
    """``(1/|H|) sum_{h in H} h.x``."""
    k = sigma.order
    pts = [tuple(x)]
    for _ in range(k - 1):
        pts.append(sigma.act(pts[-1]))
    return tuple(sum((Fraction(p[i]) for p in pts), Fraction(0)) / k for i in range(len(x)))


def _tr(kind: str):
    if kind == SUM:
        return tr_sum
    if kind == MEAN:
        return tr_mean
    raise UsageError(f"unknown folding kind {kind!r}")


# -- type identification ----------------------------------------------------------------

def _match(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """A relabelling ``p`` with ``b[p[i]][p[j]] == a[i][j]``, by backtracking."""
    n = len(a)
    if len(b) != n:
        return None
    sig_a = [sorted(r) for r in a]
    sig_b = [sorted(r) for r in b]
    col_a = [sorted(a[j][i] for j in range(n)) for i in range(n)]
    col_b = [sorted(b[j][i] for j in range(n)) for i in range(n)]
    p: list[int] = []
    used = [False] * n

    def go(i: int) -> bool:
        if i == n:
            return True
        for k in range(n):
            if used[k] or sig_a[i] != sig_b[k] or col_a[i] != col_b[k]:
                continue
            if all(b[p[j]][k] == a[j][i] and b[k][p[j]] == a[i][j] for j in range(i)):
                used[k] = True
                p.append(k)
                if go(i + 1):
                    return True
                p.pop()
                used[k] = False
        return False

    return tuple(p) if go(0) else None


@lru_cache(maxsize=None)
def _finite_cartan(family: str, rank: int) -> tuple[tuple[int, ...], ...]:
    return _cartan_from_gram(default_gram(family, rank))


def identify_cartan(cartan: Sequence[Sequence[int]]) -> list[str]:
    """All reduced finite types whose Cartan matrix matches up to relabelling."""
    n = len(cartan)
    out = []
    for fam in ("A", "B", "C", "D", "E", "F", "G"):
        try:
            FiniteType(fam, n)
        except UsageError:
            continue
        if _match(cartan, _finite_cartan(fam, n)) is not None:
            out.append(f"{fam}{n}")
    return out


@lru_cache(maxsize=None)
def _affine_gcm(label: str) -> tuple[tuple[int, ...], ...]:
    return build_affine(label).gcm


def identify_gcm(gcm: Sequence[Sequence[int]]) -> list[str]:
    """All legal affine types whose GCM matches up to relabelling."""
    l = len(gcm) - 1
    out = []
    for fam, tiers in LEGAL_TIERS.items():
        for t in tiers:
            try:
                label = str(AffineType(fam, l, t))
            except UsageError:
                continue
            if _match(gcm, _affine_gcm(label)) is not None:
                out.append(label)
    return out


def match_gcm(gcm, label: str) -> tuple[int, ...] | None:
    return _match(gcm, _affine_gcm(label))


# -- finite folding ---------------------------------------------------------------------

@dataclass
class FoldingResult:
    kind: str
    sigma: DiagramAutomorphism
    images: tuple[Vector, ...]
    simple_roots: tuple[Vector, ...]
    form: GramForm
    cartan: tuple[tuple[int, ...], ...]
    types: list[str]
    root_map: dict = field(repr=False, default_factory=dict)
    orbits: tuple[tuple[int, ...], ...] = ()

    @property
    def type(self) -> str:
        return self.types[0] if self.types else "?"


def fold_finite(rs: FiniteRootSystem, sigma: DiagramAutomorphism, kind: str = SUM) -> FoldingResult:
    """Fold a finite root system; image coordinates are in the source simple-root basis."""
    if rs.nonreduced:
        raise DomainError("folding is defined for reduced systems")
    sigma.check(rs.cartan)
    _check_isometry(rs.form.gram, sigma)
    tr = _tr(kind)
    root_map = {r: tr(sigma, r) for r in rs.roots}
    images = tuple(sorted(set(root_map.values()), key=lambda v: (sum(v), v)))
    orbits = tuple(sigma.node_orbits())
    simple = tuple(tr(sigma, rs.simple_roots[o[0]]) for o in orbits)
    g = linalg.matrix([[rs.inner(a, b) for b in simple] for a in simple])
    cartan = _cartan_from_gram(g)
    # the image must be exactly the root system generated by the folded simple roots
    generated = {_combine(simple, c) for c in _closure(cartan)}
    if generated != set(images):
        raise DomainError("folded roots differ from the system generated by folded simple roots")
    return FoldingResult(kind, sigma, images, simple, GramForm(g), cartan,
                         identify_cartan(cartan), root_map, orbits)


def _combine(basis: Sequence[Vector], coeffs: Sequence[int]) -> Vector:
    out = [Fraction(0)] * len(basis[0])
    for c, b in zip(coeffs, basis):
        if c:
            for i, x in enumerate(b):
                out[i] += c * x
    return tuple(out)


def _check_isometry(gram, sigma: DiagramAutomorphism) -> None:
    n = len(gram)
    for i in range(n):
        for j in range(n):
            if gram[sigma.perm[i]][sigma.perm[j]] != gram[i][j]:
                raise DomainError("diagram automorphism does not extend to an isometry")


def fold_sum(rs: FiniteRootSystem, sigma: DiagramAutomorphism) -> FoldingResult:
    return fold_finite(rs, sigma, SUM)


def fold_mean(rs: FiniteRootSystem, sigma: DiagramAutomorphism) -> FoldingResult:
    return fold_finite(rs, sigma, MEAN)


def image_axioms(res: FoldingResult):
    """Run the root-system axioms on the image, in the folded simple-root basis."""
    n = len(res.simple_roots[0])
    basis = [[res.simple_roots[j][i] for j in range(len(res.simple_roots))] for i in range(n)]
    coords = [_least_coords(basis, v) for v in res.images]
    return check_axioms(coords, res.form)


def _least_coords(m, v) -> Vector:
    # m has full column rank; solve the normal equations exactly
    mt = linalg.transpose(m)
    return linalg.solve(linalg.mat_mul(mt, m), linalg.mat_vec(mt, v))


def coroot_set(vectors, inner) -> set[Vector]:
    return {linalg.scale(2 / inner(v, v), v) for v in vectors}


def fold_duality_check(rs: FiniteRootSystem, sigma: DiagramAutomorphism) -> bool:
    """``Tr^{sigma}(R^vee) == (Tr_{sigma}(R))^vee`` and ``Tr_{sigma}(R^vee) == (Tr^{sigma}(R))^vee``."""
    sigma.check(rs.cartan)
    coroots = [linalg.scale(2 / rs.norm(r), r) for r in rs.roots]
    sum_of_coroots = {tr_sum(sigma, c) for c in coroots}
    mean_of_coroots = {tr_mean(sigma, c) for c in coroots}
    dual_of_mean = coroot_set({tr_mean(sigma, r) for r in rs.roots}, rs.inner)
    dual_of_sum = coroot_set({tr_sum(sigma, r) for r in rs.roots}, rs.inner)
    return sum_of_coroots == dual_of_mean and mean_of_coroots == dual_of_sum


def stratum_check(rs: FiniteRootSystem, res: FoldingResult) -> bool:
    """Short image roots come from fixed roots, long ones from moved roots (sum folding)."""
    norms = {v: rs.inner(v, v) for v in res.images}
    if len(set(norms.values())) == 1:
        return True
    short = min(norms.values())
    for r, img in res.root_map.items():
        fixed = res.sigma.act(r) == tuple(r)
        if fixed != (norms[img] == short):
            return False
    return True


def weyl_vector_check(rs: FiniteRootSystem, res: FoldingResult) -> bool:
    """Half the sum of positive image roots equals the source Weyl vector."""
    pos = [v for v in res.images if all(x >= 0 for x in v)]
    half = tuple(sum((v[i] for v in pos), Fraction(0)) / 2 for i in range(rs.rank))
    return half == rs.rho


def positivity_check(rs: FiniteRootSystem, res: FoldingResult) -> bool:
    """Folding sends positive roots onto the positive image roots."""
    pos_images = {res.root_map[r] for r in rs.positive_roots}
    pos = {v for v in res.images if all(x >= 0 for x in v)}
    return pos_images == pos and all(any(x > 0 for x in v) for v in pos)


def highest_short_check(rs: FiniteRootSystem, res: FoldingResult) -> bool:
    """``Tr(theta) = theta`` is the highest short root of the image."""
    norms = [rs.inner(v, v) for v in res.images]
    short = min(norms)
    shorts = [v for v, n in zip(res.images, norms) if n == short]
    top = max(shorts, key=lambda v: sum(v))
    th = res.root_map[rs.theta]
    return th == top == tuple(Fraction(x) for x in rs.theta)


# -- affine folding -----------------------------------------------------------------------

@dataclass
class AffineFoldingResult:
    kind: str
    sigma: DiagramAutomorphism
    gcm: tuple[tuple[int, ...], ...]
    simple_roots: tuple[Vector, ...]
    types: list[str]
    system: AffineSystem | None
    orbits: tuple[tuple[int, ...], ...]

    @property
    def type(self) -> str:
        return self.types[0] if self.types else "?"


def _affine_basis_coords(sys: AffineSystem, v: Sequence) -> Vector:
    """Coordinates of a vector of ``F`` (no ``d`` part) in the basis ``alpha_0..alpha_l``."""
    n = sys.rank + 1
    m = [[sys.simple_roots[j][i] for j in range(n)] for i in range(n)]
    return linalg.solve(m, linalg.vector(v)[:n])


def fold_affine_gcm(sys: AffineSystem, sigma: DiagramAutomorphism, kind: str = SUM):
    """Simple roots (in the ``alpha_i`` basis) and GCM of the folded affine system."""
    sigma.check(sys.gcm)
    n = sys.rank + 1
    g = [[sys.inner(a, b) for b in sys.simple_roots] for a in sys.simple_roots]
    _check_isometry(g, sigma)
    tr = _tr(kind)
    orbits = tuple(sigma.node_orbits())
    simple = tuple(tr(sigma, tuple(int(i == o[0]) for i in range(n))) for o in orbits)
    gram = [[sum(a[i] * g[i][j] * b[j] for i in range(n) for j in range(n)) for b in simple]
            for a in simple]
    return simple, _cartan_from_gram(linalg.matrix(gram)), orbits, gram


def fold_affine(sys: AffineSystem, sigma_f: DiagramAutomorphism, kind: str = SUM,
                extend: bool = True) -> AffineFoldingResult:
    """Fold an untwisted affine system along ``sigma_f`` (extended by fixing node 0)."""
    sigma = affine_extension(sigma_f) if extend else sigma_f
    simple, gcm, orbits, _ = fold_affine_gcm(sys, sigma, kind)
    types = identify_gcm(gcm)
    target = build_affine(types[0]) if types else None
    return AffineFoldingResult(kind, sigma, gcm, simple, types, target, orbits)


def folded_affine_roots(sys: AffineSystem, sigma: DiagramAutomorphism, kind: str,
                        n_max: int) -> set[Vector]:
    """Images (in the ``alpha_i`` basis) of real roots of level ``<= n_max``, minus isotropic ones."""
    tr = _tr(kind)
    n = sys.rank + 1
    g = [[sys.inner(a, b) for b in sys.simple_roots] for a in sys.simple_roots]
    out = set()
    for r in roots_up_to(sys, n_max):
        c = _affine_basis_coords(sys, r.vector())
        img = tr(sigma, c)
        norm = sum(img[i] * g[i][j] * img[j] for i in range(n) for j in range(n))
        if norm != 0:
            out.add(img)
    return out


def affine_roots_match(sys: AffineSystem, res: AffineFoldingResult, n_target: int = 1,
                       target_label: str | None = None) -> bool:
    """Folded real roots land in the identified system and cover its low levels.

    Images are mapped to the target through the node matching of the GCMs.
    Every target root of level ``<= n_target`` must be hit by a source root of
    level ``<= n_src``, where ``n_src`` leaves room for the ratio between the
    two imaginary roots.
    """
    label = target_label or res.type
    target = build_affine(label)
    p = match_gcm(res.gcm, label)
    if p is None:
        return False
    ratio = _level_ratio(sys, res, target, p)
    n_src = int((n_target + 2) * ratio) + 1
    mapped = set()
    for img in folded_affine_roots(sys, res.sigma, res.kind, n_src):
        v = _to_target(sys, res, target, p, img)
        if not target.is_root_vector(v):
            return False
        mapped.add(v)
    return all(r.vector() in mapped for r in roots_up_to(target, n_target))


def _to_target(sys, res, target, p, img) -> Vector:
    n_src = sys.rank + 1
    basis = [[res.simple_roots[j][i] for j in range(len(res.simple_roots))] for i in range(n_src)]
    c = _least_coords(basis, img)
    v = linalg.zero(target.dim)
    for k, ck in enumerate(c):
        if ck:
            v = linalg.add(v, linalg.scale(ck, target.simple_roots[p[k]]))
    return v


def _level_ratio(sys, res, target, p) -> Fraction:
    """Source levels per target level: the image of ``delta`` is ``delta' / ratio``."""
    img = _tr(res.kind)(res.sigma, sys.labels)
    v = _to_target(sys, res, target, p, img)
    level = v[target.rank]
    if any(v[i] for i in range(target.rank)) or level <= 0:
        raise DomainError("image of delta is not a positive multiple of delta")
    return 1 / level


def fold_BC(l: int, kind: str = SUM) -> AffineFoldingResult:
    """Fold ``D_{2l+2}^(1)`` by the order-4 automorphism; the image is ``BC_l^(2)``."""
    n = 2 * l + 2
    src = build_affine(f"D{n}(1)")
    sigma = bc_automorphism(l)
    res = fold_affine(src, sigma, kind, extend=False)
    if f"BC{l}(2)" not in res.types:
        raise DomainError(f"fold of D{n}(1) is {res.types}, not BC{l}(2)")
    return res


# -- catalog and folding sources ---------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    source: str            # family of Y_N
    sum_finite: str
    mean_finite: str
    sum_affine: str
    mean_affine: str


TABLE = (
    CatalogEntry("A_{2l-1}", "B_l", "C_l", "B_l^(2)", "C_l^(1)"),
    CatalogEntry("D_{l+1}", "C_l", "B_l", "C_l^(2)", "B_l^(1)"),
    CatalogEntry("E_6", "F_4", "F_4", "F_4^(2)", "F_4^(1)"),
    CatalogEntry("D_4", "G_2", "G_2", "G_2^(3)", "G_2^(1)"),
)


def catalog_source(column: str, l: int) -> tuple[FiniteRootSystem, DiagramAutomorphism]:
    """Source system and automorphism for a column of the folding table."""
    if column == "A":
        rs = build_finite(FiniteType("A", 2 * l - 1))
        return rs, finite_automorphism("A", 2 * l - 1)
    if column == "D":
        rs = finite_system("D", l + 1)
        return rs, finite_automorphism("D", l + 1)
    if column == "E":
        return build_finite("E6"), finite_automorphism("E", 6)
    if column == "T":
        return build_finite("D4"), triality()
    raise UsageError(f"unknown table column {column!r}")


def finite_system(family: str, rank: int) -> FiniteRootSystem:
    """Like :func:`build_finite` but also accepts ``D_3`` (needed as a folding source)."""
    if family == "D" and rank == 3:
        return FiniteRootSystem(family, default_gram("D", 3))
    return build_finite(FiniteType(family, rank))


def expected_types(column: str, l: int) -> dict[str, str]:
    """Table entries for a column, as labels comparable with the identified types."""
    s, m = {"A": ("B", "C"), "D": ("C", "B"), "E": ("F", "F"), "T": ("G", "G")}[column]
    rank = {"E": 4, "T": 2}.get(column, l)
    tier = 3 if column == "T" else 2
    return {
        "sum_finite": f"{s}{rank}",
        "mean_finite": f"{m}{rank}",
        "sum_affine": f"{s}{rank}({tier})",
        "mean_affine": f"{m}{rank}(1)",
    }


def folding_source(atype: AffineType | str) -> tuple[FiniteRootSystem, DiagramAutomorphism]:
    """``(Y_N, sigma_f)`` with ``X_l^(t)`` the folding of ``Y_N^(1)`` (twisted non-BC types)."""
    if isinstance(atype, str):
        atype = AffineType.parse(atype)
    f, l, t = atype.family, atype.rank, atype.tier
    if t == 1 or f == "BC":
        raise DomainError(f"{atype} is not a folding of a simply-laced untwisted type")
    column = {"B": "A", "C": "D", "F": "E", "G": "T"}[f]
    return catalog_source(column, l)


def source_affine(rs: FiniteRootSystem) -> AffineSystem:
    return affine_from_finite(rs, 1)


def folding_table(ls: Sequence[int] = (2, 3, 4)) -> list[dict]:
    """Recompute every row of the folding table for the given ranks."""
    rows = []
    for column in ("A", "D", "E", "T"):
        for l in (ls if column in "AD" else (None,)):
            rs, sigma = catalog_source(column, l if l else 0)
            fs, fm = fold_sum(rs, sigma), fold_mean(rs, sigma)
            aff = source_affine(rs)
            asum = fold_affine(aff, sigma, SUM)
            amean = fold_affine(aff, sigma, MEAN)
            rows.append({
                "source": f"{rs.family}{rs.rank}",
                "automorphism": sigma.name,
                "sum_finite": fs.types,
                "mean_finite": fm.types,
                "sum_affine": asum.types,
                "mean_affine": amean.types,
                "expected": expected_types(column, l or 0),
            })
    return rows
