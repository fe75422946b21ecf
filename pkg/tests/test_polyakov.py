import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deligne_action.cech_deligne import cochain_residuals, total_D
from deligne_action.polyakov import (DeformationData, build_lagrangian_cocycle, class_generator, gauge_cochain,
                                     random_branch_shifts, random_torsor_shift, shift_log_branches,
                                     shift_trivialization, trivialize_tame_symbol)
from deligne_action.suite import SECOND_FAMILY


@pytest.fixture(scope="module")
def torus_lagrangian(scenarios):
    sc = scenarios("torus")
    defm = DeformationData(sc.family(spec=SECOND_FAMILY))
    h = sc.connection()
    return defm, h, build_lagrangian_cocycle(defm, h)


@pytest.mark.parametrize("name", ["torus", "sphere3", "genus2_octagon", "annulus_synthetic"])
def test_tame_trivialization(scenarios, name):
    rep = trivialize_tame_symbol(scenarios(name).cover).verify(1e-8, per_triangle=1)
    assert rep.passed, str(rep)


@pytest.mark.parametrize("name", ["torus", "genus2_octagon"])
def test_lagrangian_cocycle_is_closed(scenarios, name):
    sc = scenarios(name)
    defm = DeformationData(sc.family())
    rep = build_lagrangian_cocycle(defm, sc.connection()).verify(1e-8, per_triangle=1)
    assert rep.passed, str(rep)


def test_deformed_torus_cocycle_and_ledger(torus_lagrangian):
    defm, _, lag = torus_lagrangian
    assert lag.verify(1e-8, per_triangle=1).passed
    assert lag.ledger.check(defm.cover)
    assert defm.verify().passed


def test_identity_map_has_trivial_top_form_when_h_vanishes(scenarios):
    sc = scenarios("genus2_octagon")
    lag = build_lagrangian_cocycle(DeformationData(sc.family()), sc.connection())
    z = sc.cover.samples((0,))
    assert np.max(np.abs(lag.omega[(0,)](z))) == 0


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=4, deadline=None)
def test_branch_shift_changes_cocycle_by_a_coboundary(torus_lagrangian, seed):
    defm, h, lag = torus_lagrangian
    k, kt, p = random_branch_shifts(defm, np.random.default_rng(seed))
    sh = shift_log_branches(defm, lag.triv, lag.triv_t, k, kt, p)
    assert sh.r == sh.r_direct
    new = build_lagrangian_cocycle(sh.defm, h, sh.triv, sh.triv_t)
    diff = new.cocycle - lag.cocycle - total_D(gauge_cochain(sh), defm.cover)
    res = cochain_residuals(diff, defm.cover, 1)
    assert res[0][0] == 0
    assert max(r for k_, (r, _) in res.items() if k_ > 0) < 1e-9


def test_class_generator_pairs_to_one(scenarios, cycles):
    cover = scenarios("sphere3").cover
    eps = cycles("sphere3").eps
    zeta = class_generator(cover, eps)
    assert sum(eps[f] * zeta[f] for f in eps) == pytest.approx(1.0)
    for t in cover.tuples(4):
        assert abs(sum((-1) ** k * zeta[t[:k] + t[k + 1:]] for k in range(4))) < 1e-9


def test_torsor_shift_is_checked_for_closedness(scenarios):
    cover = scenarios("torus").cover
    triv = trivialize_tame_symbol(cover)
    beta, p = random_torsor_shift(cover, np.random.default_rng(0))
    moved = shift_trivialization(triv, beta, p)
    assert moved.verify(1e-8, per_triangle=1).passed
    bad = dict(beta)
    bad[next(iter(bad))] += 0.1
    with pytest.raises(ValueError):
        shift_trivialization(triv, bad, p)
