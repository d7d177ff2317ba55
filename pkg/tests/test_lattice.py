from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from macver import linalg
from macver.errors import DomainError
from macver.lattice import brute_force, enumerate_shifted, ldl

F = Fraction


def test_ldl_reconstructs_form():
    g = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    m, d = ldl(g)
    x = (F(1), F(-2), F(3))
    q = sum(d[i] * (x[i] + sum(m[i][j] * x[j] for j in range(i + 1, 3))) ** 2 for i in range(3))
    assert q == sum(x[i] * g[i][j] * x[j] for i in range(3) for j in range(3))


def test_ldl_rejects_indefinite():
    with pytest.raises(DomainError):
        ldl([[1, 2], [2, 1]])


def test_a1_jacobi_points():
    # rho + 2k alpha with I(alpha, alpha) = 2: norms (4k+1)^2 / 2
    zs, trace = enumerate_shifted([[8]], [F(1, 4)], F(81, 2))
    assert zs == [(-2,), (-1,), (0,), (1,), (2,)]
    assert trace.points == 5


def test_e8_shell_counts():
    from macver.finite_roots import build_finite
    rs = build_finite("E8")
    g = rs.form.gram
    zs, _ = enumerate_shifted(g, [0] * 8, 4)
    # theta series of E8: 1 + 240 q + 2160 q^2
    assert len(zs) == 1 + 240 + 2160


def test_negative_bound_is_empty():
    assert enumerate_shifted([[1]], [0], -1)[0] == []


@st.composite
def forms(draw):
    n = draw(st.integers(1, 3))
    # triangular with nonzero diagonal, so the Gram matrix is positive definite
    m = [[draw(st.integers(1, 2)) if i == j else (draw(st.integers(-2, 2)) if j > i else 0)
          for j in range(n)] for i in range(n)]
    g = linalg.mat_mul(linalg.transpose(m), m)
    shift = draw(st.lists(st.fractions(-1, 1, max_denominator=4), min_size=n, max_size=n))
    bound = draw(st.fractions(0, 12, max_denominator=3))
    return g, shift, bound


@settings(max_examples=400)
@given(forms())
def test_matches_brute_force(data):
    g, shift, bound = data
    # |x_i| <= sqrt(bound * (G^-1)_ii) on the ellipsoid, so this box contains it
    ginv = linalg.inverse(g)
    box = max(int(float(bound * ginv[i][i]) ** 0.5) + 2 for i in range(len(g)))
    zs, trace = enumerate_shifted(g, shift, bound)
    assert zs == brute_force(g, shift, bound, box)
    assert trace.points == len(zs)
