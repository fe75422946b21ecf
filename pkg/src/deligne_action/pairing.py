"""Pairing Deligne cochains with chains of the nerve double complex; the action S[f] and A[f]."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .atlas import TWO_PI_I
from .cech_deligne import DeligneCochain, MultiplicativeCocycle, exp_map
from .chains import CycleGeometry, DoubleChain, FundamentalCycle, is_explicit, shift_cycle
from .fields import integrate
from .quadrature import DEFAULT_RULE


class PairingError(ValueError):
    pass


def reduce_mod(value, p=3):
    """Canonical representative of value mod Z(p) = (2 pi i)^p Z.

    The multiple removed is the nearest integer to the real part of
    value / (2 pi i)^p, so the representative lies in a fixed strip.
    """
    unit = TWO_PI_I ** p
    k = np.rint((complex(value) / unit).real)
    return complex(value) - k * unit


def distance_mod(value, p=3):
    return abs(reduce_mod(value, p))


def pair_component(layer: dict, chain: DoubleChain, geometry: CycleGeometry, rule=DEFAULT_RULE,
                   integer=False):
    """Sum over terms of the chain of coeff * integral of the layer's form on that simplex."""
    if integer:
        return 0j
    total = 0j
    for (tau, labels), coeff in chain:
        if tau not in layer:
            raise PairingError(f"no cochain component on {tau}")
        form = layer[tau]
        if form.degree != len(labels) - 1:
            raise PairingError(f"bidegree mismatch: {form.degree}-form against a {len(labels) - 1}-simplex")
        total += coeff * integrate(form, geometry.realize(tau, labels), rule)
    return total


def _split(chain: DoubleChain):
    parts = {}
    for (tau, labels), coeff in chain:
        key = (len(labels) - 1, len(tau) - 1)
        parts.setdefault(key, DoubleChain()).add(tau, labels, coeff)
    return parts


def pair_chain(phi: DeligneCochain, chain: DoubleChain, geometry: CycleGeometry, rule=DEFAULT_RULE):
    """Raw additive pairing: layer k (forms of degree k-1) meets S_{k-1}(N_{n-k})."""
    total = 0j
    for (dim, q), part in _split(chain).items():
        k = dim + 1
        if q != phi.n - k or k not in phi.layers:
            continue
        total += pair_component(phi.layer(k), part, geometry, rule)
    return total


def pair_total_additive(phi: DeligneCochain, shifted: DoubleChain, geometry: CycleGeometry,
                        rule=DEFAULT_RULE, reduce=True):
    """<phi, 'C> reduced mod Z(p); with 'Sigma this is <w,S0> - <a,S1> - <f,S2>."""
    raw = pair_chain(phi, shifted, geometry, rule)
    return reduce_mod(raw, phi.p) if reduce else raw


def pair_total_multiplicative(psi: MultiplicativeCocycle, chain: DoubleChain, geometry: CycleGeometry,
                              rule=DEFAULT_RULE):
    """exp(<psi_0, C_20> + <psi_1, C_11>) times the product of g(v)^coeff over C_02."""
    parts = _split(chain)
    expo = 0j
    if (2, 0) in parts:
        expo += pair_component(psi.top, parts[(2, 0)], geometry, rule)
    if (1, 1) in parts:
        expo += pair_component(psi.middle, parts[(1, 1)], geometry, rule)
    prod = 1 + 0j
    for (tau, labels), coeff in parts.get((0, 2), DoubleChain()):
        g = complex(psi.functions[tau](np.array([geometry.realize(tau, labels)]))[0])
        if g == 0:
            raise PairingError(f"invertible function vanishes on {tau}")
        prod *= g ** coeff
    return np.exp(expo) * prod


@dataclass
class ActionValue:
    S_raw: complex
    S_reduced: complex
    A: complex
    choices: dict = field(default_factory=dict)

    @property
    def consistency(self):
        """|A - exp(S / (2 pi i)^2)| / |A|."""
        return abs(self.A - np.exp(self.S_reduced / TWO_PI_I ** 2)) / abs(self.A)

    def to_dict(self):
        return {
            "S_raw": [self.S_raw.real, self.S_raw.imag],
            "S_reduced": [self.S_reduced.real, self.S_reduced.imag],
            "A_re": self.A.real,
            "A_im": self.A.imag,
            "consistency": self.consistency,
            "choices": self.choices,
        }


def evaluate(cocycle: DeligneCochain, cycle: FundamentalCycle, rule=DEFAULT_RULE, choices=None) -> ActionValue:
    """Pair a total-degree-3 cocycle both ways against a fundamental cycle."""
    raw = pair_chain(cocycle, shift_cycle(cycle), cycle.geometry, rule)
    A = pair_total_multiplicative(exp_map(cocycle), cycle.total(), cycle.geometry, rule)
    return ActionValue(raw, reduce_mod(raw, cocycle.p), complex(A), dict(choices or {}))


def action(defm, h, triv=None, cycle: FundamentalCycle = None, rule=DEFAULT_RULE, lagrangian=None) -> ActionValue:
    """S[f] = <Omega[f], 'Sigma> and A[f] = exp(S / (2 pi i)^2)."""
    from .polyakov import build_lagrangian_cocycle

    if lagrangian is None:
        lagrangian = build_lagrangian_cocycle(defm, h, triv)
    if cycle is None:
        raise PairingError("a fundamental cycle is required")
    shifts = {f"{t[0]},{t[1]}": tr.branch_shift for t, tr in defm.cover.transitions.items() if tr.branch_shift}
    choices = {
        "scenario": defm.cover.name,
        "trivialization": lagrangian.triv.label,
        "transition_branch_shifts": shifts,
        "df_branch_shifts": {str(k): v for k, v in defm.df_shifts.items()},
        "seeds": len(cycle.geometry.seeds),
        "faces": len(cycle.faces),
    }
    return evaluate(lagrangian.cocycle, cycle, rule, choices)


# ---------------------------------------------------------------------------
# random chains for the duality checks
# ---------------------------------------------------------------------------

def random_chain(cover, degree, rng, terms=6, spread=0.05):
    """Random chain of total degree ``degree`` whose vertices are explicit points near seeds.

    Every simplex sits in its own tuple's overlap, in the chart of the tuple's
    last index, so all its faces remain realizable.
    """
    out = DoubleChain()
    for _ in range(terms):
        q = int(rng.integers(max(0, degree - 2), min(degree, cover.max_order - 1) + 1))
        dim = degree - q
        tuples = cover.tuples(q + 1)
        if not tuples or dim > 2:
            continue
        tau = tuples[int(rng.integers(len(tuples)))]
        region = cover.region(tau)
        center = cover.seed(tau)
        scale = spread * region.diameter()
        pts = []
        while len(pts) < dim + 1:
            z = center + scale * complex(rng.normal(), rng.normal())
            if region.contains(np.array([z]))[0]:
                pts.append(("@", tau[-1], complex(z)))
        out.add(tau, tuple(pts), int(rng.choice([-2, -1, 1, 2])))
    return out


def explicit_only(chain: DoubleChain):
    return all(is_explicit(l) for (_, labels), _ in chain for l in labels)
