from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import PROPERTY_CASES
from macver import linalg
from macver.affine_roots import build_affine
from macver.errors import CapacityError
from macver.finite_roots import build_finite
from macver.weyl_groups import (affine_element, check_s0_product, enumerate_weyl,
                                finite_extension, label_matrix, rho_orbit, translation,
                                translation_lattice, translation_matrix)

F = Fraction


def test_small_groups():
    a2 = enumerate_weyl(build_finite("A2"))
    assert len(a2) == 6 and sum(u.det == 1 for u in a2) == 3
    assert len(enumerate_weyl(build_finite("B2"))) == 8
    a1 = enumerate_weyl(build_finite("A1"))
    assert sorted(u.det for u in a1) == [-1, 1]


def test_capacity_error_names_required_cap():
    with pytest.raises(CapacityError) as exc:
        enumerate_weyl(build_finite("E7"))
    assert exc.value.required == 2903040


@pytest.mark.parametrize("label", ["A3", "B3", "G2", "F4"])
def test_group_preserves_roots_and_form(label):
    rs = build_finite(label)
    roots = set(rs.roots)
    g = rs.form.gram
    for u in enumerate_weyl(rs)[:200]:
        m = u.as_fractions()
        assert linalg.mat_mul(linalg.mat_mul(linalg.transpose(m), g), m) == g
        assert {tuple(int(x) for x in u.apply(r)) for r in rs.roots} == roots
        assert linalg.det(m) == u.det


@pytest.mark.parametrize("label", ["A2", "B3", "G2"])
def test_rho_orbit_matches_group(label):
    rs = build_finite(label)
    orbit = dict(rho_orbit(rs, [1] * rs.rank))
    for u in enumerate_weyl(rs):
        key = tuple(int(x) for x in label_matrix(rs, u) @ np.ones(rs.rank, dtype=np.int64))
        assert orbit[key] == u.det


def test_translation_lattices():
    a1 = translation_lattice(build_affine("A1(1)"))
    assert a1.basis == ((1,),)
    c2 = build_affine("C2(2)")
    lat = translation_lattice(c2)
    c = 2 / c2.theta_s_norm
    assert lat.basis == tuple(linalg.scale(c, a) for a in c2.quotient.simple_roots)
    bc = build_affine("BC1(2)")
    assert translation_lattice(bc).basis == bc.weyl_quotient.coroot_vectors


@pytest.mark.parametrize("label", ["A1(1)", "A2(1)", "G2(1)", "G2(3)", "C3(2)", "B3(2)",
                                   "F4(2)", "BC1(2)", "BC2(2)", "BC3(2)"])
def test_s0_product_is_translation(label):
    assert check_s0_product(build_affine(label))


def test_t_zero_is_identity():
    s = build_affine("A2(1)")
    assert translation_matrix(s, (0, 0)) == linalg.identity(s.dim)


# -- property suites: translation laws and determinant factorisation ------------------

SYSTEMS = {lab: build_affine(lab) for lab in ["A2(1)", "C2(2)", "G2(3)", "BC2(2)"]}
GROUPS = {lab: enumerate_weyl(s.weyl_quotient) for lab, s in SYSTEMS.items()}
EXT = {lab: [finite_extension(s, u) for u in GROUPS[lab]] for lab, s in SYSTEMS.items()}


@st.composite
def affine_data(draw):
    lab = draw(st.sampled_from(sorted(SYSTEMS)))
    s = SYSTEMS[lab]
    basis = translation_lattice(s).basis
    l = s.rank

    def lattice_vector():
        cs = draw(st.lists(st.integers(-3, 3), min_size=l, max_size=l))
        v = linalg.zero(l)
        for c, b in zip(cs, basis):
            v = linalg.add(v, linalg.scale(c, b))
        return v

    g1, g2 = lattice_vector(), lattice_vector()
    i = draw(st.integers(0, len(GROUPS[lab]) - 1))
    x = draw(st.lists(st.fractions(-4, 4, max_denominator=3), min_size=s.dim, max_size=s.dim))
    return lab, g1, g2, i, x


def _isometry(s, m):
    g = s.form.gram
    return linalg.mat_mul(linalg.mat_mul(linalg.transpose(m), g), m) == g


@settings(max_examples=PROPERTY_CASES)
@given(affine_data())
def test_translation_laws(data):
    lab, g1, g2, i, x = data
    s = SYSTEMS[lab]
    e1, e2 = s.embed(g1), s.embed(g2)
    t1, t2 = translation_matrix(s, e1), translation_matrix(s, e2)
    t12 = translation_matrix(s, linalg.add(e1, e2))
    assert linalg.mat_mul(t1, t2) == t12
    assert linalg.mat_vec(t1, s.delta) == s.delta
    assert _isometry(s, t1)
    assert s.inner(linalg.mat_vec(t1, x), linalg.mat_vec(t1, x)) == s.inner(x, x)
    u, ue = GROUPS[lab][i], EXT[lab][i]
    conj = linalg.mat_mul(linalg.mat_mul(ue, t1), linalg.inverse(ue))
    assert conj == translation_matrix(s, s.embed(u.apply(g1)))


@settings(max_examples=PROPERTY_CASES)
@given(affine_data())
def test_determinant_factorisation(data):
    lab, g1, _, i, _ = data
    s = SYSTEMS[lab]
    w = affine_element(s, GROUPS[lab][i], g1)
    assert linalg.det(w.matrix) == w.det == GROUPS[lab][i].det
    assert linalg.det(translation(s, g1).matrix) == 1
