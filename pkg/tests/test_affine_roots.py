from fractions import Fraction

import pytest

from macver import linalg
from macver.affine_roots import (AffineType, build_affine, legal_labels, nomenclature,
                                 roots_up_to, special_indices)
from macver.errors import UsageError

# (h, h^vee) from the standard tables of affine Kac-Moody algebras
COXETER = {
    "A1(1)": (2, 2), "A4(1)": (5, 5), "B3(1)": (6, 5), "C3(1)": (6, 4), "D5(1)": (8, 8),
    "E6(1)": (12, 12), "E7(1)": (18, 18), "E8(1)": (30, 30), "F4(1)": (12, 9), "G2(1)": (6, 4),
    "B3(2)": (4, 6), "B4(2)": (5, 8), "C3(2)": (5, 6), "C4(2)": (7, 8),
    "F4(2)": (9, 12), "G2(3)": (4, 6),
    "BC1(2)": (3, 3), "BC2(2)": (5, 5), "BC3(2)": (7, 7),
}


@pytest.mark.parametrize("label", sorted(COXETER))
def test_coxeter_numbers(label):
    s = build_affine(label)
    assert (s.coxeter_number, s.dual_coxeter_number) == COXETER[label]


@pytest.mark.parametrize("label", legal_labels())
def test_gcm_null_vectors(label):
    s = build_affine(label)
    a = [list(r) for r in s.gcm]
    n = len(a)
    assert all(sum(a[i][j] * s.labels[j] for j in range(n)) == 0 for i in range(n))
    assert all(sum(s.colabels[i] * a[i][j] for i in range(n)) == 0 for j in range(n))
    assert min(s.labels) >= 1 and min(s.colabels) >= 1
    assert linalg.rank(a) == n - 1


@pytest.mark.parametrize("label", legal_labels())
def test_form_is_semidefinite_with_delta_radical(label):
    s = build_affine(label)
    assert s.inner(s.delta, s.delta) == 0
    for a in s.simple_roots:
        assert s.inner(a, s.delta) == 0
    assert sum(linalg.scale(c, a)[0] for c, a in zip(s.labels, s.simple_roots)) == s.delta[0]


def test_a1_untwisted():
    s = build_affine("A1(1)")
    assert [list(r) for r in s.gcm] == [[2, -2], [-2, 2]]
    assert s.labels == (1, 1)


def test_bc1_labels():
    s = build_affine("BC1(2)")
    assert s.labels == (1, 2)
    assert s.colabels == (2, 1)


def test_twisted_colabel_rule():
    for label in ["B3(2)", "C4(2)", "F4(2)", "G2(3)"]:
        s = build_affine(label)
        rs = s.quotient
        t = s.type.tier
        for i in range(1, s.rank + 1):
            short = (i - 1) in rs.simple_short
            assert s.colabels[i] == (s.labels[i] if short else t * s.labels[i])


def test_roots_level_zero():
    roots = roots_up_to(build_affine("A1(1)"), 0)
    assert sorted(r.finite for r in roots) == [(-1,), (1,)]


def test_bc1_roots():
    roots = roots_up_to(build_affine("BC1(2)"), 1)
    long_levels = {r.level for r in roots if r.stratum == "l"}
    short_levels = {r.level for r in roots if r.stratum == "s"}
    assert long_levels == {-1, 1}
    assert short_levels == {-1, 0, 1}


def test_twisted_long_roots_only_at_multiples_of_tier():
    s = build_affine("G2(3)")
    for r in roots_up_to(s, 4):
        if r.stratum == "l":
            assert r.level % 3 == 0


def test_special_indices():
    assert special_indices(build_affine("A3(1)")) == frozenset(range(4))
    assert special_indices(build_affine("E8(1)")) == frozenset({0})
    for l in (1, 2, 3):
        assert special_indices(build_affine(f"BC{l}(2)")) == frozenset({l})


def test_parse_and_legality():
    t = AffineType.parse("BC2(2)")
    assert (t.family, t.rank, t.tier) == ("BC", 2, 2)
    assert t.is_bc and t.twisted
    for bad in ["Z9(9)", "A3(2)", "E6(2)", "D4(3)", "G2(2)", "A3", "B1(1)"]:
        with pytest.raises(UsageError):
            AffineType.parse(bad)


def test_legal_labels():
    labels = legal_labels()
    assert "G2(3)" in labels and "BC1(2)" in labels and "F4(2)" in labels
    assert "D3(1)" not in labels


def test_nomenclature():
    b = nomenclature("B3(2)")
    assert (b.kac, b.moody, b.macdonald, b.carter) == ("D_4^(2)", "B_3,2", "C_3^v", "~C_3^t")
    c = nomenclature("C3(2)")
    assert (c.kac, c.macdonald) == ("A_5^(2)", "B_3^v")
    bc = nomenclature("BC2(2)")
    assert bc.kac == "A_4^(2)"
    assert bc.macdonald == "BC_2=(BC_2)^v"


@pytest.mark.parametrize("c", [2, Fraction(1, 3)])
def test_scale_does_not_change_combinatorics(c):
    for label in ["C3(2)", "BC2(2)", "G2(1)"]:
        a, b = build_affine(label), build_affine(label, c)
        assert a.gcm == b.gcm and a.labels == b.labels and a.colabels == b.colabels
