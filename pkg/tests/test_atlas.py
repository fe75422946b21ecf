import numpy as np
import pytest

from deligne_action.atlas import (NerveDepthError, build_nerve, chern_cocycle, verify_projective_connection,
                                  verify_transitions)
from deligne_action.scenario import BUILTIN

from oracles import nerve_euler_characteristic


@pytest.mark.parametrize("name", BUILTIN)
def test_transitions_compose(scenarios, name):
    rep = verify_transitions(scenarios(name).cover)
    assert rep.passed, str(rep)


@pytest.mark.parametrize("name", BUILTIN)
def test_nerve_faces_are_declared_and_simplicial(scenarios, name):
    cover = scenarios(name).cover
    nerve = build_nerve(cover, cover.max_order - 1)
    assert nerve.check_simplicial_identities() == []
    assert nerve.counts()[0] == len(cover.ids)


def test_nerve_deeper_than_declared_is_refused(scenarios):
    cover = scenarios("torus").cover
    with pytest.raises(NerveDepthError):
        build_nerve(cover, cover.max_order)


@pytest.mark.parametrize("name", BUILTIN)
def test_chern_cocycle_is_integral_and_closed(scenarios, name):
    cover = scenarios(name).cover
    c, rounding = chern_cocycle(cover)
    assert rounding < 1e-9
    for t in cover.tuples(4):
        assert sum((-1) ** k * c[t[:k] + t[k + 1:]] for k in range(4)) == 0


@pytest.mark.parametrize("name,chi", [("sphere3", 2), ("torus", 0), ("genus2_octagon", -2)])
def test_chern_number_is_euler_characteristic_of_nerve(scenarios, cycles, name, chi):
    sc = scenarios(name)
    assert nerve_euler_characteristic(sc.faces) == chi
    c, _ = chern_cocycle(sc.cover)
    cyc = cycles(name)
    assert -sum(co * c.get(tau, 0) for (tau, _), co in cyc.sigma2) == chi


@pytest.mark.parametrize("name", BUILTIN)
def test_scenario_connection_transforms_by_schwarzian(scenarios, name):
    sc = scenarios(name)
    h = sc.connection()
    rep = verify_projective_connection(sc.cover, {i: h.values(i) for i in sc.cover.ids}, 1e-9)
    assert rep.passed, str(rep)


def test_branch_shift_moves_logs_by_two_pi_i(scenarios):
    cover = scenarios("torus").cover
    key = cover.tuples(2)[0]
    shifted = cover.with_branch_shifts({key: 1})
    z = cover.samples(key)
    diff = shifted.transition(*key).log_deriv(z) - cover.transition(*key).log_deriv(z)
    assert np.allclose(diff, 2j * np.pi)
