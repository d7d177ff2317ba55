from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import PROPERTY_CASES
from macver import identities as ids
from macver import linalg
from macver.affine_roots import build_affine, legal_labels
from macver.errors import CapacityError, DomainError, UsageError
from macver.finite_roots import build_finite, weight_lattice_basis
from macver.qseries import QSeries, compare
from macver.weyl_groups import translation_lattice

F = Fraction


# -- Weyl vectors and the strange formula ----------------------------------------------

@pytest.mark.parametrize("label", legal_labels())
def test_rho_prime_isotropic(label):
    s = build_affine(label)
    wv = ids.weyl_vector_data(s)
    assert s.inner(wv.rho_prime, wv.rho_prime) == 0
    for i, lam in enumerate(wv.fundamental):
        for j, a in enumerate(s.simple_roots):
            assert s.inner(lam, s.coroot(a)) == int(i == j)


@pytest.mark.parametrize("label", [l for l in legal_labels() if not l.startswith("BC")])
def test_strange_formula_everywhere(label):
    s = build_affine(label)
    value, expected = ids.strange_formula_check(s)
    assert value == expected
    assert ids.rho_delta_closed_form(s) == ids.weyl_vector_data(s).rho_delta


def test_strange_formula_values():
    assert ids.strange_formula_check(build_affine("A1(1)")) == (F(1, 8), F(1, 8))
    assert ids.strange_formula_check(build_affine("E8(1)"))[0] == F(31, 3)
    assert build_finite("E8").norm(build_finite("E8").rho) == 620
    assert ids.strange_formula_check(build_affine("G2(3)"))[0] == F(7, 6)


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_bc_weyl_data(l):
    s = build_affine(f"BC{l}(2)")
    wv = ids.weyl_vector_data(s)
    rs = s.weyl_quotient
    assert wv.rho_delta == 2 * l + 1
    assert rs.norm(rs.rho) / (2 * wv.rho_delta) == F(l * (l + 1), 12)
    assert sum(f.weight for f in ids.bc_eta_factors(l)) == F(l * (l + 1), 12)
    assert sum(f.exponent for f in ids.bc_eta_factors(l)) == l * (2 * l + 1)


@pytest.mark.parametrize("label", ["B2(2)", "B3(2)", "C3(2)", "G2(3)", "F4(2)"])
def test_twisted_bookkeeping(label):
    a, b = ids.twisted_bookkeeping(build_affine(label))
    assert a == b


def test_kostant():
    for lab in ["A5", "B4", "C4", "D6", "E7", "F4", "G2"]:
        assert ids.kostant_check(build_finite(lab))


# -- d and its specialisation ---------------------------------------------------------------

def test_weyl_dim_examples():
    a1 = build_finite("A1")
    assert ids.weyl_dim_factor(a1, (0,)) == 1
    for k in range(6):
        assert ids.weyl_dim_factor(a1, (F(k, 2),)) == k + 1
        assert ids.weyl_dim_factor(a1, (2 * k,)) == 4 * k + 1
    a2 = build_finite("A2")
    w1 = weight_lattice_basis(a2)[0]
    assert ids.weyl_dim_factor(a2, linalg.scale(-1, w1)) == 0  # lambda + rho on a wall
    assert ids.weyl_dim_factor(a2, (F(-1), F(0))) == -1  # s_1 . 0
    with pytest.raises(DomainError):
        ids.weyl_dim_factor(a1, (F(1, 4),))


FINITE = {lab: build_finite(lab) for lab in ["A1", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "E6"]}
WEIGHTS = {lab: weight_lattice_basis(rs) for lab, rs in FINITE.items()}


@st.composite
def weights(draw, lo=-4):
    lab = draw(st.sampled_from(sorted(FINITE)))
    rs = FINITE[lab]
    m = draw(st.lists(st.integers(lo, 6), min_size=rs.rank, max_size=rs.rank))
    lam = linalg.zero(rs.rank)
    for c, w in zip(m, WEIGHTS[lab]):
        lam = linalg.add(lam, linalg.scale(c, w))
    return lab, lam


@settings(max_examples=PROPERTY_CASES)
@given(weights())
def test_d_integrality(data):
    lab, lam = data
    d = ids.weyl_dim_factor(FINITE[lab], lam)
    assert d.denominator == 1


@settings(max_examples=PROPERTY_CASES)
@given(weights(lo=0))
def test_specialisation_converges_to_d(data):
    lab, lam = data
    ratio, d, c, ok = ids.specialization_check(FINITE[lab], lam, k=10)
    assert ok, (ratio, d, c)
    assert d > 0


# -- finite denominator identity ------------------------------------------------------

def test_denominator_a1():
    rep = ids.denominator_finite(build_finite("A1"))
    assert rep.verdict
    assert rep.lhs == {(1,): 1, (-1,): -1}


def test_denominator_a2_six_monomials():
    rep = ids.denominator_finite(build_finite("A2"))
    assert rep.verdict and len(rep.lhs) == 6


def test_denominator_f4():
    rep = ids.denominator_finite(build_finite("F4"))
    assert rep.verdict and rep.extra["weyl_order"] == 1152


def test_denominator_capacity():
    with pytest.raises(CapacityError):
        ids.denominator_finite(build_finite("E7"))


# -- affine denominator identity -------------------------------------------------------

@pytest.mark.parametrize("label,order", [("A1(1)", 5), ("C2(2)", 4), ("BC1(2)", 4), ("G2(1)", 3),
                                         ("B3(1)", 2), ("F4(2)", 2)])
def test_denominator_affine(label, order):
    rep = ids.denominator_affine(build_affine(label), order)
    assert rep.verdict, rep.first_mismatch


def test_denominator_affine_detects_wrong_multiplicity(monkeypatch):
    monkeypatch.setattr(ids, "_imaginary_multiplicity", lambda sys, n: 1)
    rep = ids.denominator_affine(build_affine("C3(2)"), 3)
    assert not rep.verdict
    assert rep.first_mismatch["denom"] == 1


def test_bc_half_integral_levels():
    roots = ids.positive_real_roots(build_affine("BC1(2)"), 2)
    levels = sorted({k for _, k in roots})
    # short roots sit at half-odd levels, the long ones at even levels
    assert levels == [0, F(1, 2), F(3, 2), 2]


# -- Macdonald identities --------------------------------------------------------------

def test_jacobi_pattern():
    rep = ids.macdonald(build_affine("A1(1)"), 20)
    assert rep.verdict
    got = [(e, c) for e, c in rep.rhs.items()][:4]
    assert got == [(F(1, 8), 1), (F(9, 8), -3), (F(25, 8), 5), (F(49, 8), -7)]


@pytest.mark.parametrize("label", ["A2(1)", "A3(1)", "B2(1)", "C3(1)", "G2(1)", "D4(1)"])
def test_untwisted_order_20(label):
    assert ids.macdonald(build_affine(label), 20).verdict


@pytest.mark.parametrize("label,order", [("G2(3)", 20), ("B2(2)", 20), ("C3(2)", 12)])
def test_twisted(label, order):
    rep = ids.macdonald(build_affine(label), order)
    assert rep.verdict
    assert rep.extra["lattice_multiplier"] == build_affine(label).dual_coxeter_number


def test_g2_twisted_weight():
    rep = ids.macdonald_twisted(build_affine("G2(3)"), 5)
    assert rep.extra["dim_source"] == 28 == rep.extra["dim_count"]
    assert rep.lhs.valuation() == F(28, 24)


@pytest.mark.parametrize("l", [1, 2])
def test_bc(l):
    rep = ids.macdonald_BC(l, 10)
    assert rep.verdict
    assert rep.extra["eta_weight"] == l * (2 * l + 1)


def test_bc_wrong_lattice_scale_fails():
    rep = ids.macdonald_BC(1, 10, lattice_scale=2)
    assert not rep.verdict


def test_untwisted_rejects_lattice_scale():
    with pytest.raises(UsageError):
        ids.macdonald(build_affine("A2(1)"), 5, lattice_scale=3)


def test_order_must_be_positive():
    with pytest.raises(UsageError):
        ids.macdonald(build_affine("A1(1)"), 0)


@pytest.mark.parametrize("scale", [2, F(1, 3)])
@pytest.mark.parametrize("label", ["A2(1)", "G2(3)", "BC2(2)"])
def test_scale_invariance(label, scale):
    a = ids.macdonald(build_affine(label), 8)
    b = ids.macdonald(build_affine(label, scale), 8)
    assert a.lhs.to_json() == b.lhs.to_json()
    assert a.rhs.to_json() == b.rhs.to_json()


def test_process_pool_gives_same_series():
    s = build_affine("A3(1)")
    wv = ids.weyl_vector_data(s)
    ls = ids.LatticeSum(s.quotient, translation_lattice(s).basis, wv.rho_delta, wv.rho_delta, F(21, 2))
    one, n1 = ids.lattice_series(ls, 1)
    two, n2 = ids.lattice_series(ls, 2, min_parallel=0)
    assert one == two and n1 == n2


def test_leading_rhs_term_is_strange_value():
    for label in ["A4(1)", "F4(1)", "B3(2)"]:
        rep = ids.macdonald(build_affine(label), 3)
        assert rep.rhs.valuation() == rep.lhs.valuation() == rep.extra["leading"]
        assert rep.rhs.coeff(rep.rhs.valuation()) == 1


def test_report_schema():
    rep = ids.macdonald(build_affine("A1(1)"), 4)
    d = rep.to_dict()
    assert set(d) == {"identity", "type", "order", "verdict", "first_mismatch",
                      "lattice_points_enumerated", "wall_ms"}
    assert d["verdict"] == "pass" and d["first_mismatch"] is None
    bad = ids.macdonald_BC(1, 6, lattice_scale=2).to_dict()
    assert set(bad["first_mismatch"]) == {"exponent_num", "denom", "lhs_coeff", "rhs_coeff"}


def test_bc1_closed_form():
    # sum_k (1 - 3k) q^((3k-1)^2 / 6)
    terms = {F((3 * k - 1) ** 2, 6): 1 - 3 * k for k in range(-10, 11)}
    rep = ids.macdonald_BC(1, 10)
    cut = rep.rhs.order
    assert compare(rep.lhs, QSeries(terms, 50), cut).equal
