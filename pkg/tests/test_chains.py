import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deligne_action.chains import (ChainError, DoubleChain, area_of_cycle, boundary_prime, boundary_second,
                                   build_fundamental_class, second_augmentation, shift_cycle, total_boundary)
from deligne_action.pairing import random_chain
from deligne_action.scenario import BUILTIN

seeds = st.integers(0, 2 ** 32 - 1)


@pytest.mark.parametrize("name", BUILTIN)
def test_fundamental_cycle_descent(cycles, name):
    cyc = cycles(name)
    for label, chain in cyc.descent_residuals().items():
        assert chain.is_zero(), label
    assert cyc.is_cycle()


@pytest.mark.parametrize("name", BUILTIN)
def test_second_augmentation_is_signed_face_sum(cycles, name):
    cyc = cycles(name)
    aug = {t: v for t, v in second_augmentation(cyc.total()).items() if len(t) == 3}
    assert aug == {f: e for f, e in cyc.eps.items() if e}


@pytest.mark.parametrize("name", BUILTIN)
def test_area_of_first_augmentation(scenarios, cycles, name):
    sc = scenarios(name)
    area = area_of_cycle(cycles(name), sc.area_density(), sc.quad).real
    assert area == pytest.approx(sc.expected_area(), abs=1e-8)


def test_star_cycle_term_counts(cycles):
    cyc = cycles("torus")
    n = len(cyc.faces)
    assert len(cyc.sigma2) == n
    assert sum(abs(c) for _, c in cyc.sigma0) == 6 * n


def test_shift_signs(cycles):
    cyc = cycles("sphere3")
    sh = shift_cycle(cyc)
    assert sh == cyc.sigma0 - cyc.sigma1 - cyc.sigma2


def test_unknown_face_is_rejected(scenarios):
    sc = scenarios("torus")
    with pytest.raises(ChainError):
        build_fundamental_class(sc.cover, [(0, 1, 99)])


def test_chain_arithmetic():
    a = DoubleChain.single((0,), (("@", 0, 0j),), 2)
    assert (a - a).is_zero()
    assert (a * 3 - a - a - a).is_zero()


@given(seeds, st.integers(1, 3))
@settings(max_examples=25, deadline=None)
def test_boundaries_square_to_zero(scenarios, seed, degree):
    rng = np.random.default_rng(seed)
    cover = scenarios("sphere3").cover
    c = random_chain(cover, degree, rng, terms=6)
    assert boundary_prime(boundary_prime(c)).is_zero()
    assert boundary_second(boundary_second(c)).is_zero()
    assert total_boundary(total_boundary(c)).is_zero()
    assert total_boundary(total_boundary(c, shifted=True), shifted=True).is_zero()


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_boundaries_commute(scenarios, seed):
    rng = np.random.default_rng(seed)
    c = random_chain(scenarios("torus").cover, 2, rng)
    assert boundary_prime(boundary_second(c)) == boundary_second(boundary_prime(c))
