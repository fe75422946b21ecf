import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deligne_action.atlas import TWO_PI_I
from deligne_action.cech_deligne import random_cochain, total_D
from deligne_action.chains import shift_cycle, total_boundary
from deligne_action.pairing import (PairingError, action, distance_mod, pair_chain, pair_total_additive,
                                    random_chain, reduce_mod)
from deligne_action.polyakov import DeformationData, build_lagrangian_cocycle
from deligne_action.suite import SECOND_FAMILY

from oracles import torus_action

seeds = st.integers(0, 2 ** 32 - 1)
finite = st.floats(-1e3, 1e3, allow_nan=False)


@given(finite, finite, st.integers(-50, 50))
def test_reduce_mod_is_a_section(re, im, k):
    z = complex(re, im)
    r = reduce_mod(z)
    assert abs(((z - r) / TWO_PI_I ** 3).imag) < 1e-9
    assert reduce_mod(z + k * TWO_PI_I ** 3) == pytest.approx(r, abs=1e-8)
    assert abs((r / TWO_PI_I ** 3).real) <= 0.5 + 1e-12


@given(seeds)
@settings(max_examples=6, deadline=None)
def test_coboundaries_pair_to_zero(scenarios, cycles, seed):
    sc, cyc = scenarios("sphere3"), cycles("sphere3")
    lam = random_cochain(sc.cover, 3, 2, np.random.default_rng(seed))
    v = pair_total_additive(total_D(lam, sc.cover), shift_cycle(cyc), cyc.geometry, sc.quad)
    assert distance_mod(v) < 1e-8


@pytest.mark.parametrize("name", ["sphere3", "torus"])
def test_cocycle_kills_shifted_boundaries(scenarios, cycles, name):
    sc, cyc = scenarios(name), cycles(name)
    spec = SECOND_FAMILY if name == "torus" else None
    lag = build_lagrangian_cocycle(DeformationData(sc.family(spec=spec)), sc.connection())
    rng = np.random.default_rng(3)
    for _ in range(3):
        c = random_chain(sc.cover, 3, rng, terms=8)
        v = pair_chain(lag.cocycle, total_boundary(c, shifted=True), cyc.geometry, sc.quad)
        assert abs(v) < 1e-9


@pytest.mark.parametrize("name", ["torus", "sphere3", "genus2_octagon"])
def test_multiplicative_pairing_matches_exponential(scenarios, cycles, name):
    sc = scenarios(name)
    av = action(DeformationData(sc.family()), sc.connection(), cycle=cycles(name), rule=sc.quad)
    assert av.consistency < 1e-12


@pytest.mark.parametrize("mu,h", [(0.1, 1.0), (0.2, 2 + 1j), (0.05, -0.5j)])
def test_torus_closed_form(scenarios, cycles, mu, h):
    sc = scenarios("torus")
    defm = DeformationData(sc.family(spec={"kind": "affine_beltrami", "mu": [mu, 0.0], "modes": []}))
    hc = sc.connection({"kind": "constant", "value": [h.real, h.imag] if isinstance(h, complex) else [h, 0.0]})
    av = action(defm, hc, cycle=cycles("torus"), rule=sc.quad)
    assert av.S_raw == pytest.approx(torus_action(mu, h), rel=1e-8)


def test_action_needs_a_cycle(scenarios):
    sc = scenarios("torus")
    with pytest.raises(PairingError):
        action(DeformationData(sc.family()), sc.connection())
