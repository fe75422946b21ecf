import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deligne_action.atlas import TWO_PI_I, chern_cocycle
from deligne_action.cech_deligne import (CochainError, D_squared_residual, DeligneCocycle3, cech_delta_layer,
                                         cochain_residuals, cochain_to_dict, cup, layer_residual,
                                         line_bundle_cochain, random_cochain, total_D, verify_cocycle)
from deligne_action.polyakov import log_derivative_form
from deligne_action.scenario import BUILTIN

seeds = st.integers(0, 2 ** 32 - 1)


@given(seeds, st.sampled_from(BUILTIN), st.integers(0, 2))
@settings(max_examples=12, deadline=None)
def test_D_squared_vanishes(scenarios, seed, name, n):
    cover = scenarios(name).cover
    phi = random_cochain(cover, 3, n, np.random.default_rng(seed))
    forms, ints = D_squared_residual(phi, cover, per_triangle=1)
    assert forms < 1e-10
    assert ints == 0


@given(seeds)
@settings(max_examples=10, deadline=None)
def test_cech_delta_squared_on_integers(scenarios, seed):
    cover = scenarios("sphere3").cover
    rng = np.random.default_rng(seed)
    comp = {t: int(rng.integers(-5, 6)) for t in cover.tuples(2)}
    dd = cech_delta_layer(cech_delta_layer(comp, cover, 1, integer=True), cover, 2, integer=True)
    assert all(v == 0 for v in dd.values())


@given(seeds)
@settings(max_examples=10, deadline=None)
def test_coboundaries_are_cocycles(scenarios, seed):
    cover = scenarios("torus").cover
    lam = random_cochain(cover, 3, 2, np.random.default_rng(seed))
    rep = verify_cocycle(DeligneCocycle3.from_cochain(total_D(lam, cover)), cover, tol=1e-10, per_triangle=1)
    assert rep.passed, str(rep)


def test_D_is_additive(scenarios):
    cover = scenarios("torus").cover
    rng = np.random.default_rng(0)
    a, b = random_cochain(cover, 3, 1, rng), random_cochain(cover, 3, 1, rng)
    diff = total_D(a + b, cover) - total_D(a, cover) - total_D(b, cover)
    res = cochain_residuals(diff, cover, 1)
    assert max(r for r, _ in res.values()) < 1e-11


@pytest.mark.parametrize("name", ["torus", "sphere3"])
def test_log_derivative_line_bundle_and_its_square(scenarios, name):
    cover = scenarios(name).cover
    c, _ = chern_cocycle(cover)
    logs = {t: log_derivative_form(cover, *t) for t in cover.tuples(2)}
    L = line_bundle_cochain(logs, c)
    DL = total_D(L, cover)
    for k, comp in DL.layers.items():
        r, _ = layer_residual(comp, cover, integer=(k == 0), per_triangle=1)
        assert r < 1e-9
    sq = cup(L, L, cover)
    assert sq.p == 2 and sq.n == 4
    r = cochain_residuals(total_D(sq, cover), cover, 1)
    assert max(v for k, (v, _) in r.items() if k > 0) < 1e-8


def test_layer_degree_bookkeeping(scenarios):
    cover = scenarios("torus").cover
    phi = random_cochain(cover, 3, 3, np.random.default_rng(1))
    assert sorted(phi.layers) == [0, 1, 2, 3]
    assert phi.cech_degree(3) == 0
    with pytest.raises(CochainError):
        DeligneCocycle3.from_cochain(random_cochain(cover, 3, 2, np.random.default_rng(1)))


def test_serialized_cochain_keeps_integers_and_nodes(scenarios):
    cover = scenarios("torus").cover
    phi = random_cochain(cover, 3, 2, np.random.default_rng(2))
    out = cochain_to_dict(phi, cover)
    assert out["p"] == 3 and out["n"] == 2
    ints = out["layers"]["0"]
    assert all(isinstance(e["value"], int) for e in ints)
    forms = out["layers"]["1"][0]
    assert len(forms["nodes"]) * 1 == len(forms["values"])
    assert TWO_PI_I == pytest.approx(2j * np.pi)
