"""Closed-form deformation families f_t and projective connections per model.

A family supplies chart jets of f_i (source chart i -> target chart i),
the velocity d f_i / dt at the family's base point, and the target atlas.
"""

from __future__ import annotations

import numpy as np

from .atlas import CoverAtlas, Transition
from .jets import Jet
from .maps import Affine, ExpAffine, LogAffine, Translation
from .regions import Region


class DeformationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# flat model helpers
# ---------------------------------------------------------------------------

def trig_jet(modes, zeta: Jet, derivative=False):
    """sum_k c_k exp(2 pi i (m x + n y)) on the jet zeta = x + i y (or its d/dzeta)."""
    out = Jet.constant(0.0, zeta.order, zeta.value.shape)
    zc = zeta.conj()
    for m, n, re, im in modes:
        # 2 pi i (m x + n y) with x = (z + zb)/2, y = (z - zb)/(2i)
        expo = (zeta + zc) * (np.pi * 1j * m) + (zeta - zc) * (np.pi * n)
        term = expo.exp() * complex(re, im)
        if derivative:
            term = term * (np.pi * 1j * m + np.pi * n)
        out = out + term
    return out


class FlatCharts:
    """Chart maps of the flat model: translations or u = exp(s (zeta - p))."""

    def __init__(self, centers, exp_charts, s):
        self.centers = centers
        self.exp_charts = set(exp_charts)
        self.s = s

    def to_model(self, i, z: Jet) -> Jet:
        if i in self.exp_charts:
            return z.log() * (1 / self.s) + self.centers[i]
        return z + self.centers[i]

    def from_model(self, i, zeta: Jet, center=None) -> Jet:
        c = self.centers[i] if center is None else center
        if i in self.exp_charts:
            return ((zeta - c) * self.s).exp()
        return zeta - c

    def from_model_deriv(self, i, zeta: Jet, center=None) -> Jet:
        c = self.centers[i] if center is None else center
        if i in self.exp_charts:
            return ((zeta - c) * self.s).exp() * self.s
        return Jet.constant(1.0, zeta.order, zeta.value.shape)

    def transition(self, i, j, lam, centers=None):
        p = self.centers if centers is None else centers
        c = p[j] + lam - p[i]
        ki, kj = i in self.exp_charts, j in self.exp_charts
        if not ki and not kj:
            return Translation(c)
        if not ki:
            return LogAffine(self.s, c)
        if not kj:
            return ExpAffine(self.s, c)
        return Affine(np.exp(self.s * c), 0.0)


def _pushed_atlas(source: CoverAtlas, maps, transitions, name):
    """Target atlas whose regions are images of the source regions under f."""
    from .atlas import Chart

    inter = {}
    for t, reg in source.intersections.items():
        inter[t] = Region(maps(t[-1], reg.vertices))
    charts = [Chart(c.id, inter[(c.id,)], c.label) for c in source.charts]
    trans = {key: Transition(key[0], key[1], holo, inter[key]) for key, holo in transitions.items()}
    return CoverAtlas(charts, trans, inter, source.max_order, {}, name)


class Family:
    """Base class; subclasses implement f_jet, velocity_jet and at."""

    mode = "same"
    t = 0.0

    def __init__(self, cover: CoverAtlas):
        self.cover = cover
        self.target = cover

    def f_jet(self, i, points, order) -> Jet:
        raise NotImplementedError

    def velocity_jet(self, i, points, order) -> Jet:
        raise NotImplementedError

    def at(self, t) -> "Family":
        raise NotImplementedError

    def f_values(self, i, points):
        return self.f_jet(i, np.asarray(points, dtype=complex), 0).value

    def mu_sup(self, per_triangle=2):
        worst = 0.0
        for c in self.cover.charts:
            pts = c.domain.samples(per_triangle)
            f = self.f_jet(c.id, pts, 1)
            worst = max(worst, float(np.max(np.abs(f.dzbar().value / f.dz().value))))
        return worst


class IdentityFamily(Family):
    def f_jet(self, i, points, order):
        return Jet.variable(points, order)

    def velocity_jet(self, i, points, order):
        return Jet.constant(0.0, order, np.shape(points))

    def at(self, t):
        if t:
            raise DeformationError("the identity family has no parameter")
        return self


class AffineBeltramiFamily(Family):
    """F(zeta) = zeta + mu conj(zeta) + periodic modes + t V(zeta) on C / Z[i]-type lattices.

    The target surface is the quotient by lam + mu conj(lam); its charts are
    the source chart kinds centered at F_0(p_i) and its transitions are pushed
    forward accordingly.  The centers do not move with t, so the target
    transitions are t-independent and the variation is vertical.
    """

    mode = "pulled"

    def __init__(self, cover, charts: FlatCharts, lattice_of, mu, modes=(), velocity_modes=(), t=0.0):
        super().__init__(cover)
        self.charts = charts
        self.lattice_of = lattice_of
        self.mu = complex(mu)
        self.modes = [tuple(m) for m in modes]
        self.velocity_modes = [tuple(m) for m in velocity_modes]
        self.t = float(t)
        self.target_centers = {i: self._F_value(p, with_velocity=False) for i, p in charts.centers.items()}
        trans = {}
        for (i, j), lam in lattice_of.items():
            lt = lam + self.mu * np.conj(lam)
            trans[(i, j)] = charts.transition(i, j, lt, self.target_centers)
        self.target = _pushed_atlas(cover, self.f_values, trans, cover.name + "~")

    def _F(self, zeta: Jet, with_velocity=True) -> Jet:
        out = zeta + zeta.conj() * self.mu
        if self.modes:
            out = out + trig_jet(self.modes, zeta)
        if with_velocity and self.t and self.velocity_modes:
            out = out + trig_jet(self.velocity_modes, zeta) * self.t
        return out

    def _F_value(self, p, with_velocity=True):
        return complex(self._F(Jet.constant(p, 0, ()), with_velocity).value)

    def f_jet(self, i, points, order):
        zeta = self.charts.to_model(i, Jet.variable(points, order))
        return self.charts.from_model(i, self._F(zeta), self.target_centers[i])

    def velocity_jet(self, i, points, order):
        zeta = self.charts.to_model(i, Jet.variable(points, order))
        bprime = self.charts.from_model_deriv(i, self._F(zeta), self.target_centers[i])
        return bprime * trig_jet(self.velocity_modes, zeta)

    def at(self, t):
        return AffineBeltramiFamily(self.cover, self.charts, self.lattice_of, self.mu, self.modes,
                                    self.velocity_modes, t)


# ---------------------------------------------------------------------------
# round sphere
# ---------------------------------------------------------------------------

def rotation_of(mobius):
    """The rotation R with stereo(R x) = mobius(stereo(x)), by orthogonal Procrustes."""
    rng = np.random.default_rng(7)
    x = rng.normal(size=(12, 3))
    x /= np.linalg.norm(x, axis=1)[:, None]
    from .surfaces import inverse_stereo, stereo

    y = np.array([inverse_stereo(mobius(np.array([stereo(v)]))[0]) for v in x])
    u, _, vt = np.linalg.svd(y.T @ x)
    return u @ vt


def _stereo_inverse_jet(z: Jet):
    zc = z.conj()
    den = (z * zc + 1.0).reciprocal()
    return [(z + zc) * den, (z - zc) * den * (-1j), (z * zc - 1.0) * den]


def _stereo_jet(y):
    return (y[0] + y[1] * 1j) / ((y[2] - 1.0) * -1.0)


def _rotate(r, x):
    return [x[0] * r[k, 0] + x[1] * r[k, 1] + x[2] * r[k, 2] for k in range(3)]


def default_sphere_field(x):
    """A fixed polynomial vector field on R^3 driving the sphere family."""
    return [x[1] * x[2] + 0.3, x[2] - x[0] * x[1] * 0.5, x[0] * x[0] - x[1] * 0.4]


class SphereFlowFamily(Family):
    """f = normalize(x + eps V(x)) on the unit sphere, same atlas on both sides."""

    def __init__(self, cover, rotations, epsilon, t=0.0):
        super().__init__(cover)
        self.rotations = rotations
        self.epsilon = float(epsilon)
        self.t = float(t)

    def _parts(self, i, points, order):
        r = self.rotations[i]
        x = _rotate(r.T, _stereo_inverse_jet(Jet.variable(points, order)))
        v = default_sphere_field(x)
        e = self.epsilon + self.t
        y = [x[k] + v[k] * e for k in range(3)]
        norm2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2]
        inv = norm2.power(-0.5)
        n = [y[k] * inv for k in range(3)]
        return r, v, n, inv

    def f_jet(self, i, points, order):
        r, _, n, _ = self._parts(i, points, order)
        return _stereo_jet(_rotate(r, n))

    def velocity_jet(self, i, points, order):
        r, v, n, inv = self._parts(i, points, order)
        nv = n[0] * v[0] + n[1] * v[1] + n[2] * v[2]
        dn = [(v[k] - n[k] * nv) * inv for k in range(3)]
        y = _rotate(r, n)
        u = _rotate(r, dn)
        one_minus = (y[2] - 1.0) * -1.0
        return (u[0] + u[1] * 1j) / one_minus + (y[0] + y[1] * 1j) * u[2] / (one_minus * one_minus)

    def at(self, t):
        return SphereFlowFamily(self.cover, self.rotations, self.epsilon, t)


# ---------------------------------------------------------------------------
# projective connections
# ---------------------------------------------------------------------------

class ProjectiveConnection:
    """Chart family h_i given by jet evaluators."""

    def __init__(self, fn, label=""):
        self.fn = fn
        self.label = label

    def jet(self, i, points, order):
        return self.fn(i, np.asarray(points, dtype=complex), order)

    def values(self, i):
        return lambda z: self.jet(i, z, 0).value

    def evaluators(self, cover):
        return {i: self.values(i) for i in cover.ids}

    def __add__(self, other):
        return ProjectiveConnection(lambda i, p, n: self.fn(i, p, n) + other.fn(i, p, n))


def zero_connection():
    return ProjectiveConnection(lambda i, p, n: Jet.constant(0.0, n, p.shape), "0")


def flat_connection(charts: FlatCharts, value=0.0, modes=()):
    """q(zeta) dzeta^2 with q constant plus periodic modes, with the chart Schwarzian added."""

    def fn(i, p, n):
        z = Jet.variable(p, n)
        zeta = charts.to_model(i, z)
        q = Jet.constant(value, n, p.shape)
        if modes:
            q = q + trig_jet(modes, zeta)
        if i in charts.exp_charts:
            # zeta = log(u)/s + p: zeta' = 1/(s u), {zeta, u} = 1/(2 u^2)
            inv = z.reciprocal()
            return q * inv * inv * (1 / charts.s ** 2) + inv * inv * 0.5
        return q

    return ProjectiveConnection(fn, "flat")


def sphere_quartic_connection(inverse_charts, k1, k2):
    """[k1 conj(a z + b)^4 + k2 conj(c z + d)^4] / (1 + |z|^2)^4 with U_i^-1 = [[a, b], [c, d]]."""

    def fn(i, p, n):
        (a, b), (c, d) = inverse_charts[i]
        z = Jet.variable(p, n)
        zc = z.conj()
        num = ((zc * np.conj(a) + np.conj(b)) ** 4) * k1 + ((zc * np.conj(c) + np.conj(d)) ** 4) * k2
        return num / ((z * zc + 1.0) ** 4)

    return ProjectiveConnection(fn, "sphere-quartic")
