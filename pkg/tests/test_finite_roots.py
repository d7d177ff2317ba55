from fractions import Fraction

import pytest

from macver import linalg
from macver.errors import DomainError, UsageError
from macver.finite_roots import (FiniteRootSystem, build_finite, check_axioms, coroot,
                                 coxeter_orbit_census, default_gram, reflect,
                                 weight_lattice_basis)

REDUCED = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "D5", "E6", "E7", "E8", "F4", "G2"]

# |R|, h, |W|
COUNTS = {
    "A1": (2, 2, 2), "A2": (6, 3, 6), "A3": (12, 4, 24), "A4": (20, 5, 120),
    "B2": (8, 4, 8), "B3": (18, 6, 48), "B4": (32, 8, 384),
    "C3": (18, 6, 48), "C4": (32, 8, 384),
    "D4": (24, 6, 192), "D5": (40, 8, 1920),
    "E6": (72, 12, 51840), "E7": (126, 18, 2903040), "E8": (240, 30, 696729600),
    "F4": (48, 12, 1152), "G2": (12, 6, 12),
}


@pytest.mark.parametrize("label", REDUCED)
def test_counts(label):
    rs = build_finite(label)
    n, h, w = COUNTS[label]
    assert len(rs.roots) == n
    assert len(rs.positive_roots) == n // 2
    assert rs.coxeter_number == h
    assert rs.weyl_order == w


def test_a2():
    rs = build_finite("A2")
    assert len(rs.roots) == 6
    assert [list(r) for r in rs.cartan] == [[2, -1], [-1, 2]]


def test_g2_strata():
    rs = build_finite("G2")
    assert len(rs.short_roots) == 6 and len(rs.long_roots) == 6


def test_e8_dimension():
    rs = build_finite("E8")
    assert rs.dimension == 248 == 31 * 8
    assert linalg.det(rs.cartan) == 1


def test_bc_strata():
    rs = build_finite("BC2")
    assert (len(rs.short_roots), len(rs.middle_roots), len(rs.long_roots)) == (4, 4, 4)
    rs3 = build_finite("BC3")
    assert (len(rs3.short_roots), len(rs3.middle_roots), len(rs3.long_roots)) == (6, 12, 6)
    assert {rs3.norm(r) for r in rs3.short_roots} == {1}
    assert {rs3.norm(r) for r in rs3.middle_roots} == {2}
    assert {rs3.norm(r) for r in rs3.long_roots} == {4}


def test_bc_has_no_dimension():
    with pytest.raises(DomainError):
        build_finite("BC2").dimension


@pytest.mark.parametrize("label", REDUCED)
def test_long_norm_two(label):
    rs = build_finite(label)
    assert rs.norm(rs.theta) == 2
    assert max(rs.norm(r) for r in rs.roots) == 2


@pytest.mark.parametrize("label", REDUCED)
def test_rho_two_ways(label):
    rs = build_finite(label)
    half = linalg.scale(Fraction(1, 2), [sum(c) for c in zip(*rs.positive_roots)])
    assert rs.rho == half
    assert all(rs.pairing(rs.rho, a) == 1 for a in rs.simple_roots)


@pytest.mark.parametrize("label", REDUCED)
def test_kostant_dimension(label):
    rs = build_finite(label)
    assert rs.dimension == (rs.coxeter_number + 1) * rs.rank


@pytest.mark.parametrize("label", ["A3", "B3", "C3", "F4", "G2", "BC2"])
def test_axioms(label):
    rs = build_finite(label)
    assert check_axioms(rs.roots, rs.form).ok


def test_axioms_detect_non_closed_set():
    rs = build_finite("A2")
    rep = check_axioms(rs.roots[:-1], rs.form)
    assert not rep.ok


@pytest.mark.parametrize("c", [1, 2, Fraction(1, 3)])
def test_coroot_scaling(c):
    base = build_finite("B2")
    rs = build_finite("B2", c)
    for a in rs.roots:
        assert coroot(rs, a) == linalg.scale(1 / Fraction(c), coroot(base, a))


def test_reflect_and_errors():
    rs = build_finite("A2")
    a1 = rs.simple_roots[0]
    assert reflect(rs, a1, a1) == linalg.scale(-1, a1)
    assert reflect(rs, a1, rs.simple_roots[1]) == (1, 1)
    with pytest.raises(DomainError):
        reflect(rs, (1, -1), (0, 1))
    with pytest.raises(DomainError):
        coroot(rs, (2, 0))


def test_weight_lattice_is_dual_basis():
    rs = build_finite("C3")
    basis = weight_lattice_basis(rs)
    for i, w in enumerate(basis):
        assert rs.labels(w) == tuple(Fraction(int(i == j)) for j in range(3))


def test_e8_weights_are_roots_lattice():
    rs = build_finite("E8")
    assert all(x.denominator == 1 for w in weight_lattice_basis(rs) for x in w)


@pytest.mark.parametrize("label,word,sizes", [
    ("A2", [2, 1], [3, 3]),
    ("B2", [2, 1], [4, 4]),
    ("G2", [1, 2], [6, 6]),
])
def test_coxeter_orbits(label, word, sizes):
    census = coxeter_orbit_census(build_finite(label), word)
    assert sorted(len(o) for o in census.orbits) == sizes


@pytest.mark.parametrize("label", ["B2", "B3", "B4", "C3", "C4", "F4", "G2"])
def test_coxeter_census_counts(label):
    rs = build_finite(label)
    census = coxeter_orbit_census(rs, list(range(1, rs.rank + 1)))
    assert census.short_count == census.h * census.simple_short
    assert census.long_count == census.h * census.simple_long
    assert all(len(o) == census.h for o in census.orbits)


def test_coxeter_word_must_be_permutation():
    with pytest.raises(UsageError):
        coxeter_orbit_census(build_finite("A2"), [1, 1])


@pytest.mark.parametrize("label", ["D3", "E5", "G3", "F2", "A0", "X4", "B1"])
def test_invalid_types(label):
    with pytest.raises(UsageError):
        build_finite(label)


def test_d3_from_gram():
    rs = FiniteRootSystem("D", default_gram("D", 3))
    assert len(rs.roots) == 12
