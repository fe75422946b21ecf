import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deligne_action.cech_deligne import random_form
from deligne_action.fields import (FanTriangle, FormDegreeError, Path, area_form, d, integrate, pullback, wedge,
                                   zero_form)
from deligne_action.jets import Jet
from deligne_action.maps import Mobius

seeds = st.integers(0, 2 ** 32 - 1)
PTS = np.array([0.1 + 0.2j, -0.3 + 0.1j, 0.25 - 0.3j])


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_dd_vanishes(seed):
    f = random_form(np.random.default_rng(seed), 0)
    assert np.max(np.abs(d(d(f))(PTS))) < 1e-12


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_pullback_commutes_with_d(seed):
    rng = np.random.default_rng(seed)
    g = Mobius(1.0, 0.2, 0.1, 1.0)
    for deg in (0, 1):
        a = random_form(rng, deg)
        lhs = d(pullback(g, a))(PTS)
        rhs = pullback(g, d(a))(PTS)
        assert np.allclose(lhs, rhs, atol=1e-10)


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_leibniz_for_wedge(seed):
    rng = np.random.default_rng(seed)
    f, a = random_form(rng, 0), random_form(rng, 1)
    lhs = d(wedge(f, a))(PTS)
    rhs = wedge(d(f), a)(PTS) + wedge(f, d(a))(PTS)
    assert np.allclose(lhs, rhs, atol=1e-10)


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_stokes_on_a_fan_triangle(seed):
    rng = np.random.default_rng(seed)
    a = random_form(rng, 1)
    p0, p1, p2 = 0.0, 0.6 + 0.1j, 0.2 + 0.5j
    tri = FanTriangle(p0, Path(p1, p2))
    inner = integrate(d(a), tri)
    rim = integrate(a, Path(p0, p1)) + integrate(a, Path(p1, p2)) + integrate(a, Path(p2, p0))
    assert inner == pytest.approx(rim, abs=1e-11)


def test_pushed_triangle_matches_pulled_form():
    g = Mobius(1.0, 0.3, -0.2, 1.0)
    a = random_form(np.random.default_rng(1), 2)
    tri = FanTriangle(0.0, Path(0.3, 0.2j))
    lhs = integrate(a, FanTriangle(0.0, Path(0.3, 0.2j), g))
    rhs = integrate(pullback(g, a), tri)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_unit_square_area():
    flat = area_form(lambda z: Jet.constant(1.0, z.order, z.shape))
    lower = FanTriangle(0.0, Path(1.0, 1 + 1j))
    upper = FanTriangle(0.0, Path(1 + 1j, 1j))
    assert (integrate(flat, lower) + integrate(flat, upper)).real == pytest.approx(1.0)


def test_degree_mismatch_raises():
    with pytest.raises(FormDegreeError):
        integrate(zero_form(1), FanTriangle(0.0, Path(1.0, 1j)))
    with pytest.raises(FormDegreeError):
        d(zero_form(2))
