import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deligne_action import variation as var
from deligne_action.polyakov import DeformationData, target_trivialization, trivialize_tame_symbol
from deligne_action.suite import ONSHELL_FAMILY, SECOND_FAMILY

from oracles import SPHERE_VARIATION, SPHERE_VARIATION_RTOL

seeds = st.integers(0, 2 ** 32 - 1)
coef = st.floats(-10, 10, allow_nan=False)


@given(coef, coef, coef)
def test_richardson_is_exact_on_even_quadratics(c0, c2, c4):
    steps = (0.1, 0.05, 0.025)
    vals = [c0 + c2 * s ** 2 + c4 * s ** 4 for s in steps]
    assert var.richardson(vals, steps) == pytest.approx(c0, abs=1e-9)


@pytest.fixture(scope="module")
def torus_defm(scenarios):
    return DeformationData(scenarios("torus").family(spec=SECOND_FAMILY))


def test_vertical_field_is_global(torus_defm, scenarios):
    assert var.VerticalVariation.from_family(torus_defm).verify().passed
    sphere = DeformationData(scenarios("sphere3").family())
    assert var.VerticalVariation.from_family(sphere).verify().passed


def test_beltrami_variation(torus_defm):
    rep = var.var_mu_check(torus_defm)
    assert rep.passed, str(rep)


def test_descent_of_the_variation(torus_defm, scenarios):
    triv = trivialize_tame_symbol(torus_defm.cover)
    h = scenarios("torus").connection()
    rep = var.descent_variation_check(torus_defm, h, triv, target_trivialization(torus_defm, triv))
    assert rep.passed, str(rep)


@given(seeds)
@settings(max_examples=5, deadline=None)
def test_commutation_identity(scenarios, seed):
    rng = np.random.default_rng(seed)
    v = var.random_polynomial_field((-1, 0), rng)
    h = var.random_polynomial_field((2, 0), rng)
    mu = var.random_polynomial_field((-1, 1), rng, scale=0.05)
    r, _ = var.sup_residual(var.commutator_residual(v, h, mu), scenarios("torus").cover)
    assert r < 1e-8


@pytest.mark.parametrize("name,spec", [("torus", ONSHELL_FAMILY), ("sphere3", None)])
def test_schwarzian_transport(scenarios, name, spec):
    sc = scenarios(name)
    defm = DeformationData(sc.family(spec=spec))
    r, _ = var.sup_residual(var.schwarzian_identity_residual(defm), sc.cover)
    assert r < 1e-8


def test_torus_finite_difference(scenarios):
    sc = scenarios("torus")
    rep = var.fd_variation_check(sc, h=var.probe_connection(sc), tol=1e-6)
    assert rep.passed, str(rep)
    assert abs(rep.details["predicted"][0]) + abs(rep.details["predicted"][1]) > 1e-3


def test_sphere_finite_difference_matches_frozen_value(scenarios, cycles):
    sc = scenarios("sphere3")
    res = var.fd_variation(DeformationData(sc.family()), sc.connection(), cycles("sphere3"), rule=sc.quad)
    assert res.rel_error < 1e-4
    assert res.predicted == pytest.approx(SPHERE_VARIATION, rel=SPHERE_VARIATION_RTOL)


def test_onshell_connection_solves_el(scenarios):
    sc = scenarios("torus")
    defm = DeformationData(sc.family(spec=ONSHELL_FAMILY))
    r, _ = var.sup_residual(var.el_residual(var.onshell_connection(defm), var.mu_field(defm)), sc.cover)
    assert r < 1e-10
    off, _ = var.sup_residual(var.el_residual(var.h_field(sc.connection()), var.mu_field(defm)), sc.cover)
    assert off > 1e-3


def test_lie_cocycle_is_closed_on_shell(scenarios, cycles):
    sc = scenarios("torus")
    defm = DeformationData(sc.family(spec=ONSHELL_FAMILY))
    mu, h = var.mu_field(defm), var.onshell_connection(defm)
    charts = sc.flat_charts()
    rng = np.random.default_rng(9)
    for _ in range(2):
        v = var.trig_vector_field(charts, var.random_trig_modes(rng))
        w = var.trig_vector_field(charts, var.random_trig_modes(rng))
        assert abs(var.lie_coboundary(v, w, h, mu, cycles("torus"))) < 1e-8


def test_D_h_is_skew_on_the_torus(scenarios, cycles):
    sc = scenarios("torus")
    charts = sc.flat_charts()
    rng = np.random.default_rng(2)
    u = var.trig_vector_field(charts, var.random_trig_modes(rng))
    v = var.trig_vector_field(charts, var.random_trig_modes(rng))
    h = var.h_field(sc.connection())
    assert var.skew_residual(u, v, h, cycles("torus")) < 1e-9


def test_constant_h_gives_zero_variation_on_the_torus(scenarios, cycles):
    sc = scenarios("torus")
    res = var.fd_variation(DeformationData(sc.family()), sc.connection(), cycles("torus"), rule=sc.quad)
    assert abs(res.predicted) < 1e-10
    assert abs(res.fd) < 1e-8
