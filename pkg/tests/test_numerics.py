import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deligne_action.intlinalg import NoIntegerSolution, solve_integer
from deligne_action.jets import Jet
from deligne_action.maps import ExpAffine, Mobius, schwarzian_values
from deligne_action.quadrature import QuadratureRule
from deligne_action.regions import Region, continue_log

from oracles import monomial_over_triangle, schwarzian_of_exp

small = st.floats(-2, 2, allow_nan=False)
cplx = st.builds(complex, small, small)


@pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (0, 3), (2, 2), (4, 1), (3, 4)])
def test_triangle_rule_is_exact_on_low_degree_monomials(a, b):
    u, v, w = QuadratureRule(10, 16).triangle()
    assert np.sum(w * u ** a * v ** b) == pytest.approx(monomial_over_triangle(a, b), rel=1e-13)


def test_segment_rule_integrates_polynomials():
    x, w = QuadratureRule(10, 8).segment()
    for k in range(15):
        assert np.sum(w * x ** k) == pytest.approx(1 / (k + 1), rel=1e-13)


@given(cplx, cplx, cplx)
def test_jet_leibniz_rule(a, b, p):
    z = Jet.variable(np.array([p]), 3)
    f = z * z * a + z.conj() * b + 1.0
    g = z.conj() * z + a
    lhs = (f * g).dz().value
    rhs = (f.dz() * g.truncate(2) + f.truncate(2) * g.dz()).value
    assert np.allclose(lhs, rhs, atol=1e-10)


@given(st.floats(0.2, 2.0), st.floats(-1, 1))
def test_log_inverts_exp(r, theta):
    p = np.array([r * np.exp(1j * theta)])
    z = Jet.variable(p, 4)
    back = z.log().exp()
    assert np.allclose(back.c, z.c, atol=1e-12)


def test_derivatives_match_closed_form():
    p = np.array([0.3 + 0.4j])
    z = Jet.variable(p, 4)
    e = (z * 2.0).exp()
    for k in range(5):
        assert e.derivative(k, 0)[0] == pytest.approx(2 ** k * np.exp(2 * p[0]))
    assert abs(e.derivative(0, 1)[0]) == 0


@given(cplx, cplx)
@settings(max_examples=30)
def test_mobius_composition_and_inverse(z0, shift):
    m = Mobius(2.0, 1.0 + shift, 1.0, 1.0 + shift)
    n = Mobius(1.0, 0.5, 0.0, 1.0)
    z = np.array([z0])
    assert np.allclose(m.compose(n)(z), m(n(z)))
    if abs(m.det) > 1e-3:
        assert np.allclose(m.inverse()(m(z)), z, atol=1e-8 * (1 + abs(z0)))


def test_schwarzian_of_mobius_vanishes_and_of_exp_is_constant():
    z = np.array([0.1, 0.7j, -0.4 + 0.2j])
    assert np.max(np.abs(schwarzian_values(Mobius(1, 2, 3, 7), z))) < 1e-12
    s = 1.3 - 0.2j
    assert np.allclose(schwarzian_values(ExpAffine(s, 0.0), z), schwarzian_of_exp(s))


def test_continued_log_follows_winding():
    # log z continued once around the origin picks up 2 pi i
    targets = np.exp(1j * np.linspace(0, 2 * np.pi, 9)[1:])
    logs, base, cur = [], 1.0 + 0j, 0j
    for t in targets:
        cur = continue_log(lambda w: w, base, cur, [t])[0]
        logs.append(cur)
        base = t
    assert logs[-1] == pytest.approx(2j * np.pi)


def test_region_orientation_and_membership():
    r = Region([0, 1j, 1 + 1j, 1])  # clockwise input
    assert r.area == pytest.approx(1.0)
    assert r.contains(np.array([0.5 + 0.5j]))[0]
    assert not r.contains(np.array([2.0]))[0]
    assert all(r.contains(r.samples(2)))


@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 10 ** 6))
@settings(max_examples=40)
def test_integer_solver_recovers_solvable_systems(m, n, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(-4, 5, size=(m, n)).tolist()
    x0 = rng.integers(-3, 4, size=n).tolist()
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    x = solve_integer(A, b)
    assert all(isinstance(v, int) for v in x)
    assert [sum(a * v for a, v in zip(row, x)) for row in A] == b


def test_integer_solver_rejects_fractional_solutions():
    with pytest.raises(NoIntegerSolution):
        solve_integer([[2, 4]], [1])
