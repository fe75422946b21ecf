"""Charts, holomorphic transitions, overlap combinatorics and the nerve of a cover.

Coordinates follow the last-index rule: anything attached to an ordered
tuple (i0, ..., iq) is written in the coordinate of chart iq, and the
transition z_ij (i < j) expresses z_i as a function of z_j on the overlap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .jets import Jet
from .maps import HoloMap, schwarzian_values
from .regions import Region, continue_log
from .report import Report

TWO_PI_I = 2j * np.pi
ROUNDING_TOL = 1e-6 * 2 * np.pi


class NerveDepthError(ValueError):
    pass


class TransitionError(RuntimeError):
    pass


class BranchInconsistency(RuntimeError):
    pass


@dataclass(frozen=True)
class Chart:
    id: int
    domain: Region
    label: str = ""


class Transition:
    """z_i = holo(z_j) on the overlap U_ij, given in z_j coordinates."""

    def __init__(self, to, frm, holo: HoloMap, region: Region, branch_shift=0):
        self.i, self.j = to, frm
        self.holo = holo
        self.region = region
        self.branch_shift = int(branch_shift)
        self.base = region.centroid
        self.base_log = np.log(holo.deriv(np.array([self.base]))[0]) + TWO_PI_I * self.branch_shift

    def __call__(self, z):
        return self.holo(z)

    def deriv(self, z):
        return self.holo.deriv(np.asarray(z, dtype=complex))

    def second_deriv(self, z):
        return self.holo.derivs(np.asarray(z, dtype=complex), 2)[2]

    def derivs(self, z, k):
        return self.holo.derivs(np.asarray(z, dtype=complex), k)

    def log_deriv(self, z):
        """Branch of log z'_ij continued from the overlap's basepoint."""
        return continue_log(self.deriv, self.base, self.base_log, z)

    def log_deriv_jet(self, points, order):
        """log z'_ij as a holomorphic jet at ``points`` (z_j coordinates)."""
        zj = Jet.variable(points, order + 1)
        return self.holo.apply(zj).dz().log(self.log_deriv(points))

    def apply(self, jet):
        return self.holo.apply(jet)

    def shifted(self, k):
        return Transition(self.i, self.j, self.holo, self.region, self.branch_shift + k)


@dataclass
class CoverAtlas:
    charts: list
    transitions: dict
    intersections: dict
    max_order: int = 5
    seeds: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.charts = sorted(self.charts, key=lambda c: c.id)
        for c in self.charts:
            self.intersections.setdefault((c.id,), c.domain)

    @property
    def ids(self):
        return [c.id for c in self.charts]

    def chart(self, i):
        for c in self.charts:
            if c.id == i:
                return c
        raise KeyError(i)

    def transition(self, i, j) -> Transition:
        try:
            return self.transitions[(i, j)]
        except KeyError:
            raise TransitionError(f"no transition z_{i}{j} declared") from None

    def region(self, tup) -> Region:
        return self.intersections[tuple(tup)]

    def tuples(self, length):
        return sorted(t for t in self.intersections if len(t) == length)

    def samples(self, tup, per_triangle=2):
        return self.region(tup).samples(per_triangle)

    def seed(self, tup):
        tup = tuple(tup)
        if tup in self.seeds:
            return self.seeds[tup]
        return self.region(tup).centroid

    def push(self, frm, to, points):
        """Carry points from chart ``frm`` to chart ``to`` (to < frm) via z_to,frm."""
        if frm == to:
            return np.asarray(points, dtype=complex)
        return self.transition(to, frm)(points)

    def with_branch_shifts(self, shifts):
        trans = {key: t.shifted(shifts.get(key, 0)) for key, t in self.transitions.items()}
        return CoverAtlas(self.charts, trans, dict(self.intersections), self.max_order, dict(self.seeds), self.name)


class Nerve:
    def __init__(self, levels):
        self.levels = levels

    def __getitem__(self, q):
        return self.levels[q]

    @property
    def max_q(self):
        return len(self.levels) - 1

    @staticmethod
    def face(tup, k):
        return tup[:k] + tup[k + 1:]

    def counts(self):
        return [len(level) for level in self.levels]

    def check_simplicial_identities(self):
        bad = []
        for level in self.levels[2:]:
            for t in level:
                q = len(t) - 1
                for l in range(q + 1):
                    for k in range(l):
                        if self.face(self.face(t, l), k) != self.face(self.face(t, k), l - 1):
                            bad.append((t, k, l))
        return bad


def build_nerve(cover: CoverAtlas, max_q: int) -> Nerve:
    if max_q < 0:
        raise ValueError("max_q must be nonnegative")
    if max_q + 1 > cover.max_order:
        raise NerveDepthError(f"intersections are declared up to order {cover.max_order}; "
                              f"tuples of order {max_q + 1} were requested")
    levels = [cover.tuples(q + 1) for q in range(max_q + 1)]
    known = set(cover.intersections)
    for level in levels[1:]:
        for t in level:
            for k in range(len(t)):
                if Nerve.face(t, k) not in known:
                    raise NerveDepthError(f"face {Nerve.face(t, k)} of {t} is not declared")
    return Nerve(levels)


def verify_transitions(cover: CoverAtlas, tol=1e-12) -> Report:
    worst, res = None, 0.0
    for (i, j, k) in cover.tuples(3):
        z = cover.samples((i, j, k))
        try:
            r = np.max(np.abs(cover.transition(i, k)(z) - cover.transition(i, j)(cover.transition(j, k)(z))))
        except (FloatingPointError, ValueError) as exc:
            raise TransitionError(f"evaluation failed on {(i, j, k)}: {exc}") from exc
        scale = max(1.0, float(np.max(np.abs(cover.transition(i, k)(z)))))
        r /= scale
        if r > res:
            res, worst = r, (i, j, k)
    return Report("transition cocycle", res, tol, worst=worst)


def log_derivative_cochain(cover: CoverAtlas):
    """The 1-cochain {log z'_ij} of branch-continued logarithms, as values."""
    return {key: t.log_deriv for key, t in cover.transitions.items()}


def round_integers(values, what):
    x = np.asarray(values)
    k = np.rint(x.real)
    res = float(np.max(np.abs(x - k))) if x.size else 0.0
    if res * 2 * np.pi > ROUNDING_TOL or (x.size and np.ptp(k) != 0):
        raise BranchInconsistency(f"{what}: non-integer or non-constant value (residual {res:.2e})")
    return int(k.flat[0]) if x.size else 0, res


def chern_cocycle(cover: CoverAtlas):
    """c_ijk = (delta log z')_ijk / 2 pi i as exact integers, plus the rounding residual."""
    c, worst = {}, 0.0
    for (i, j, k) in cover.tuples(3):
        z = cover.samples((i, j, k))
        tij, tjk, tik = cover.transition(i, j), cover.transition(j, k), cover.transition(i, k)
        val = (tjk.log_deriv(z) - tik.log_deriv(z) + tij.log_deriv(tjk(z))) / TWO_PI_I
        c[(i, j, k)], r = round_integers(val, f"c{(i, j, k)}")
        worst = max(worst, r)
    return c, worst


def schwarzian(cover: CoverAtlas, pair):
    t = cover.transition(*pair)
    return lambda z: schwarzian_values(t.holo, np.asarray(z, dtype=complex))


def verify_projective_connection(cover: CoverAtlas, h, tol=1e-10) -> Report:
    """Check {z_i, z_j} = h_j - (h_i o z_ij) (z'_ij)^2 on every pair overlap.

    ``h`` maps chart ids to value evaluators.
    """
    res, worst = 0.0, None
    for (i, j) in cover.tuples(2):
        z = cover.samples((i, j))
        t = cover.transition(i, j)
        lhs = schwarzian(cover, (i, j))(z)
        rhs = h[j](z) - h[i](t(z)) * t.deriv(z) ** 2
        r = float(np.max(np.abs(lhs - rhs)))
        if r > res:
            res, worst = r, (i, j)
    return Report("projective connection", res, tol, worst=worst)


def closure_defects(intersections):
    """Tuples whose sub-tuples are not all declared."""
    known = set(intersections)
    missing = []
    for t in known:
        for r in range(1, len(t)):
            for sub in combinations(t, r):
                if sub not in known:
                    missing.append((t, sub))
    return missing
