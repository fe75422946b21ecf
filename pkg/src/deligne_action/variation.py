"""Vertical variations of the action, the operators dbar_mu and D_h, and the Lie-algebra cocycle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atlas import TWO_PI_I, CoverAtlas
from .cech_deligne import cech_delta_layer
from .chains import build_fundamental_class
from .fields import FormField, d, integrate
from .jets import Jet
from .quadrature import QuadratureRule
from .report import Report, merge

# products of third derivatives of trig fields oscillate faster than the action integrands
LIE_RULE = QuadratureRule(16, 16)


class VariationError(ValueError):
    pass


class TensorField:
    """Chart family phi_i of weight (p, q): phi dz^p dzbar^q, given by jet evaluators."""

    def __init__(self, weight, fn, label=""):
        self.weight = tuple(weight)
        self.fn = fn
        self.label = label

    def jet(self, i, points, order):
        return self.fn(i, np.asarray(points, dtype=complex), order)

    def values(self, i, points):
        return self.jet(i, points, 0).value

    def __add__(self, other):
        return TensorField(self.weight, lambda i, p, n: self.fn(i, p, n) + other.fn(i, p, n))

    def __sub__(self, other):
        return TensorField(self.weight, lambda i, p, n: self.fn(i, p, n) - other.fn(i, p, n))

    def __mul__(self, other):
        if isinstance(other, TensorField):
            w = (self.weight[0] + other.weight[0], self.weight[1] + other.weight[1])
            return TensorField(w, lambda i, p, n: self.fn(i, p, n) * other.fn(i, p, n))
        return TensorField(self.weight, lambda i, p, n: self.fn(i, p, n) * other)

    __rmul__ = __mul__

    def as_form(self, i):
        """The chart-i component as a form: weight (0,0) functions, (1,1) area coefficients."""
        deg = {(0, 0): 0, (1, 1): 2}.get(self.weight)
        if deg is None:
            raise VariationError(f"weight {self.weight} is not a form degree")
        return FormField(deg, lambda p, n: self.fn(i, p, n), f"{self.label}{i}")

    def consistency(self, cover: CoverAtlas, per_triangle=2, tol=1e-8) -> Report:
        """phi_j = phi_i o z_ij (z'_ij)^p conj(z'_ij)^q on every pairwise overlap."""
        p, q = self.weight
        worst, where, scale = 0.0, None, 0.0
        for (i, j) in cover.tuples(2):
            z = cover.samples((i, j), per_triangle)
            tr = cover.transition(i, j)
            zp = tr.deriv(z)
            lhs = self.values(i, tr(z)) * zp ** p * np.conj(zp) ** q
            rhs = self.values(j, z)
            r = float(np.max(np.abs(lhs - rhs)))
            scale = max(scale, float(np.max(np.abs(rhs))))
            if r > worst:
                worst, where = r, (i, j)
        return Report(f"weight {self.weight} consistency of {self.label or 'field'}", worst, tol,
                      {"sup": scale}, where)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def dbar_mu(k, phi: TensorField, mu: TensorField) -> TensorField:
    """dbar phi - mu d phi - k (d mu) phi on weight (k, 0)."""

    def fn(i, p, n):
        f = phi.jet(i, p, n + 1)
        m = mu.jet(i, p, n + 1)
        return f.dzbar() - (m * f.dz()) - m.dz() * f.truncate(n) * k

    return TensorField((k, phi.weight[1] + 1), fn, f"dbar_mu({phi.label})")


def D_h(v: TensorField, h: TensorField) -> TensorField:
    """d^3 v + 2 h d v + (d h) v, weight (-1, l) -> (2, l)."""

    def fn(i, p, n):
        x = v.jet(i, p, n + 3)
        x1 = x.dz()
        x3 = x1.dz().dz()
        hh = h.jet(i, p, n + 1)
        return x3 + hh.truncate(n) * x1.truncate(n) * 2.0 + hh.dz() * x.truncate(n)

    return TensorField((2, v.weight[1]), fn, f"D_h({v.label})")


def lie_derivative(v: TensorField, x: TensorField) -> TensorField:
    """L_v = v d + 2 dv on weight-2 fields."""

    def fn(i, p, n):
        vv = v.jet(i, p, n + 1)
        xx = x.jet(i, p, n + 1)
        return vv.truncate(n) * xx.dz() + vv.dz() * xx.truncate(n) * 2.0

    return TensorField(x.weight, fn, f"L_v({x.label})")


def bracket(v: TensorField, w: TensorField) -> TensorField:
    """[v, w] = v dw - w dv."""

    def fn(i, p, n):
        a = v.jet(i, p, n + 1)
        b = w.jet(i, p, n + 1)
        return a.truncate(n) * b.dz() - b.truncate(n) * a.dz()

    return TensorField((-1, 0), fn, "[v,w]")


def dbar(x: TensorField) -> TensorField:
    return TensorField((x.weight[0], x.weight[1] + 1), lambda i, p, n: x.jet(i, p, n + 1).dzbar(),
                       f"dbar({x.label})")


# ---------------------------------------------------------------------------
# fields from deformation data
# ---------------------------------------------------------------------------

def mu_field(defm) -> TensorField:
    return TensorField((-1, 1), lambda i, p, n: defm.mu_jet(i, p, n), "mu")


def h_field(h) -> TensorField:
    return TensorField((2, 0), lambda i, p, n: h.jet(i, p, n), "h")


def schwarzian_field(defm) -> TensorField:
    """{f_i, z_i} with z-derivatives of the smooth map f_i."""

    def fn(i, p, n):
        f = defm.family.f_jet(i, p, n + 3)
        f1 = f.dz()
        f2 = f1.dz()
        f3 = f2.dz()
        r = f2 / f1.truncate(n + 1)
        return f3 / f1.truncate(n) - r.truncate(n) * r.truncate(n) * 1.5

    return TensorField((2, 0), fn, "{f,z}")


@dataclass
class VerticalVariation:
    """v = delta f / d f as a global (-1,0) field, with delta mu = dbar_mu v."""

    defm: object
    v: TensorField

    @classmethod
    def from_family(cls, defm):
        fam = defm.family

        def fn(i, p, n):
            return fam.velocity_jet(i, p, n) / defm.df_jet(i, p, n)

        return cls(defm, TensorField((-1, 0), fn, "v"))

    def delta_f(self, i, p, n):
        return self.defm.family.velocity_jet(i, p, n)

    @property
    def delta_mu(self) -> TensorField:
        return dbar_mu(-1, self.v, mu_field(self.defm))

    def verify(self, tol=1e-8, per_triangle=2) -> Report:
        return self.v.consistency(self.defm.cover, per_triangle, tol)


def el_residual(h: TensorField, mu: TensorField) -> TensorField:
    """D_h mu - dbar h; zero exactly on the Euler-Lagrange locus."""
    return D_h(mu, h) - dbar(h)


def source_form(mu: TensorField, h: TensorField, v: TensorField) -> TensorField:
    """a = -2 (dbar h - D_h mu) v dz^dzbar."""
    return (el_residual(h, mu) * v) * 2.0


def integrate_global(form: TensorField, cycle, rule=None) -> complex:
    """Integral over X of a global 2-form, through the first augmentation of the cycle."""
    return _integral(form, cycle, rule)


def sup_residual(field: TensorField, cover: CoverAtlas, per_triangle=2):
    worst, where = 0.0, None
    for i in cover.ids:
        z = cover.samples((i,), per_triangle)
        r = float(np.max(np.abs(field.values(i, z))))
        if r > worst:
            worst, where = r, i
    return worst, where


# ---------------------------------------------------------------------------
# eta and lambda
# ---------------------------------------------------------------------------

def eta_lambda(defm, h, var: VerticalVariation):
    """eta_i (1-forms per chart) and lambda_ij (functions in chart j); tau~ = 0."""
    mu = mu_field(defm)
    hh = h_field(h)
    S = schwarzian_field(defm)
    dmu = var.delta_mu

    def eta(i):
        def fn(p, n):
            f = defm.family.f_jet(i, p, n + 2)
            fz = f.dz()
            ldf_z = fz.dz() / fz.truncate(n)
            ldf_zb = fz.dzbar() / fz.truncate(n)
            dlog = var.delta_f(i, p, n + 1).dz() / fz.truncate(n)
            core = (hh.jet(i, p, n) - S.jet(i, p, n)) * var.v.jet(i, p, n) * 2.0
            a = dlog * ldf_z - core
            b = dlog * ldf_zb + ldf_z * dmu.jet(i, p, n) * 2.0 - core * mu.jet(i, p, n)
            return (a, b)

        return FormField(1, fn, f"eta{i}")

    def lam(i, j):
        tr = defm.target.transition(i, j)
        lz = defm.log_zp(i, j)
        lw = defm.log_wp_f(i, j)

        def fn(p, n):
            w = defm.family.f_jet(j, p, n + 1)
            wpp = tr.log_deriv_jet(w.value, n + 1).dz().compose(w.truncate(n))
            df = var.delta_f(j, p, n + 1)
            dlog = df.dz() / defm.df_jet(j, p, n)
            return wpp * df.truncate(n) * 2.0 - (lw.fn(p, n) + lz.fn(p, n)) * dlog

        return FormField(0, fn, f"lambda{i}{j}")

    etas = {(i,): eta(i) for i in defm.cover.ids}
    lams = {t: lam(*t) for t in defm.cover.tuples(2)}
    return etas, lams


# ---------------------------------------------------------------------------
# finite differences in t
# ---------------------------------------------------------------------------

STEPS = (1e-2, 5e-3, 2.5e-3)


def richardson(values, steps):
    """Central differences D(s) = D + c2 s^2 + c4 s^4 + ..., with steps halving."""
    table = [np.asarray(v) for v in values]
    for level in range(1, len(table)):
        r = (steps[level - 1] / steps[level]) ** (2 * level)
        table = [(r * table[k + 1] - table[k]) / (r - 1) for k in range(len(table) - 1)]
    return table[0]


def _shifted_defm(defm, t):
    from .polyakov import DeformationData

    return DeformationData(defm.family.at(defm.family.t + t), defm.cover, defm.target, defm.df_shifts,
                           defm.per_triangle)


def _component_values(builder, defm, points_of, steps):
    """d/dt at t = 0 of every component of ``builder(defm_t)`` at its sample points."""
    diffs = []
    for s in steps:
        plus = builder(_shifted_defm(defm, s))
        minus = builder(_shifted_defm(defm, -s))
        diffs.append({t: (_vals(plus[t], points_of(t)) - _vals(minus[t], points_of(t))) / (2 * s) for t in plus})
    keys = diffs[0].keys()
    return {t: richardson([dd[t] for dd in diffs], steps) for t in keys}


def _vals(form, pts):
    return np.asarray(form(pts))


def _residual(lhs: dict, rhs: dict, points_of):
    worst, where = 0.0, None
    for t, v in lhs.items():
        r = float(np.max(np.abs(v - _vals(rhs[t], points_of(t)))))
        if r > worst:
            worst, where = r, t
    return worst, where


def descent_variation_check(defm, h, triv, triv_t, steps=STEPS, tol=1e-7, per_triangle=1) -> Report:
    """var omega = a + d eta, var theta = delta eta + d lambda, var Theta = delta lambda."""
    from .polyakov import big_theta, omega, theta

    var = VerticalVariation.from_family(defm)
    mu, hh = mu_field(defm), h_field(h)
    a = source_form(mu, hh, var.v)
    etas, lams = eta_lambda(defm, h, var)
    pts = lambda t: defm.cover.samples(t, per_triangle)
    reports = []

    vom = _component_values(lambda dm: omega(dm, h), defm, pts, steps)
    rhs = {t: a.as_form(t[0]) + d(etas[t]) for t in etas}
    r, w = _residual(vom, rhs, pts)
    reports.append(Report("var omega = a + d eta", r, tol, worst=w))

    vth = _component_values(lambda dm: theta(dm, triv, triv_t), defm, pts, steps)
    deta = cech_delta_layer(etas, defm.cover, 0, form_degree=1)
    rhs = {t: deta[t] + d(lams[t]) for t in lams}
    r, w = _residual(vth, rhs, pts)
    reports.append(Report("var theta = delta eta + d lambda", r, tol, worst=w))

    vTh = _component_values(lambda dm: big_theta(dm, triv, triv_t), defm, pts, steps)
    dlam = cech_delta_layer(lams, defm.cover, 1, form_degree=0)
    r, w = _residual(vTh, dlam, pts)
    reports.append(Report("var Theta = delta lambda", r, tol, worst=w))
    return merge("descent of the variation", reports, tol)


def var_mu_check(defm, steps=STEPS, tol=1e-7, per_triangle=2) -> Report:
    """d mu_t / dt at 0 against dbar_mu v."""
    var = VerticalVariation.from_family(defm)
    dmu = var.delta_mu
    pts = lambda t: defm.cover.samples(t, per_triangle)
    fd = _component_values(lambda dm: {(i,): _MuValues(dm, i) for i in dm.cover.ids}, defm, pts, steps)
    worst, where = 0.0, None
    for (i,), v in fd.items():
        r = float(np.max(np.abs(v - dmu.values(i, pts((i,))))))
        if r > worst:
            worst, where = r, i
    return Report("var mu = dbar_mu v", worst, tol, worst=where)


class _MuValues:
    def __init__(self, defm, i):
        self.defm, self.i = defm, i

    def __call__(self, pts):
        return self.defm.mu_jet(self.i, pts, 0).value


@dataclass
class VariationResult:
    fd: complex
    predicted: complex
    raw: list
    steps: tuple
    scale: float

    @property
    def abs_error(self):
        return abs(self.fd - self.predicted)

    @property
    def rel_error(self):
        return self.abs_error / abs(self.predicted) if self.predicted != 0 else float("inf")

    def to_dict(self):
        return {"fd": [self.fd.real, self.fd.imag], "predicted": [self.predicted.real, self.predicted.imag],
                "abs_error": self.abs_error, "rel_error": self.rel_error, "steps": list(self.steps),
                "raw_differences": [[x.real, x.imag] for x in self.raw], "action_scale": self.scale}


def fd_variation(defm, h, cycle, triv=None, triv_t=None, steps=STEPS, rule=None) -> VariationResult:
    """(S[f_t] - S[f_-t]) / 2t, Richardson-extrapolated, against 2 pi i int_X a(f, v)."""
    from .pairing import pair_chain
    from .chains import shift_cycle
    from .polyakov import build_lagrangian_cocycle, target_trivialization, trivialize_tame_symbol
    from .quadrature import DEFAULT_RULE

    rule = DEFAULT_RULE if rule is None else rule
    if triv is None:
        triv = trivialize_tame_symbol(defm.cover)
    if triv_t is None:
        triv_t = target_trivialization(defm, triv)
    shifted = shift_cycle(cycle)

    def S(t):
        lag = build_lagrangian_cocycle(_shifted_defm(defm, t), h, triv, triv_t)
        return pair_chain(lag.cocycle, shifted, cycle.geometry, rule)

    raw = [(S(s) - S(-s)) / (2 * s) for s in steps]
    fd = complex(richardson(raw, steps))
    var = VerticalVariation.from_family(defm)
    a = source_form(mu_field(defm), h_field(h), var.v)
    total = _integral(a, cycle, rule)
    return VariationResult(fd, complex(TWO_PI_I * total), [complex(x) for x in raw], tuple(steps), abs(S(0.0)))


def fd_variation_check(sc, h=None, steps=STEPS, tol=1e-4, family=None) -> Report:
    """Finite-difference check of delta S = 2 pi i int a on a scenario with a supplied family."""
    from .polyakov import DeformationData

    fam = sc.family() if family is None else family
    defm = DeformationData(fam)
    h = sc.connection() if h is None else h
    cycle = build_fundamental_class(sc.cover, sc.faces)
    res = fd_variation(defm, h, cycle, steps=steps, rule=sc.quad)
    err = res.rel_error if abs(res.predicted) > 1e-12 else res.abs_error
    return Report(f"finite-difference variation on {sc.name}", err, tol, res.to_dict())


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------

def commutator_residual(v: TensorField, h: TensorField, mu: TensorField) -> TensorField:
    """D_h dbar_mu v - dbar_mu D_h v - L_v(D_h mu - dbar h)."""
    lhs = D_h(dbar_mu(-1, v, mu), h) - dbar_mu(2, D_h(v, h), mu)
    return lhs - lie_derivative(v, el_residual(h, mu))


def schwarzian_identity_residual(defm) -> TensorField:
    """dbar_mu {f, z} - d^3 mu."""
    mu = mu_field(defm)
    S = schwarzian_field(defm)

    def d3(i, p, n):
        return mu.jet(i, p, n + 3).dz().dz().dz()

    return dbar_mu(2, S, mu) - TensorField((2, 1), d3)


def lie_identity_residual(v: TensorField, w: TensorField, h: TensorField) -> TensorField:
    """L_v(D_h w) - L_w(D_h v) - D_h [v, w]."""
    return lie_derivative(v, D_h(w, h)) - lie_derivative(w, D_h(v, h)) - D_h(bracket(v, w), h)


def polynomial_field(weight, coeffs, label="poly"):
    """sum c_ab z^a zbar^b, the same in every chart; ``coeffs`` maps (a, b) -> c."""

    def fn(i, p, n):
        z = Jet.variable(p, n)
        zb = z.conj()
        out = Jet.constant(0.0, n, p.shape)
        for (a, b), c in coeffs.items():
            out = out + (z ** a) * (zb ** b) * c
        return out

    return TensorField(weight, fn, label)


def random_polynomial_field(weight, rng, degree=3, scale=0.3):
    coeffs = {(a, b): scale * complex(rng.normal(), rng.normal())
              for a in range(degree + 1) for b in range(degree + 1 - a)}
    return polynomial_field(weight, coeffs)


def trig_vector_field(charts, modes, label="v"):
    """A periodic (-1,0) field V(zeta) d/dzeta on a flat scenario, written in every chart."""
    from .deformations import trig_jet

    def fn(i, p, n):
        zeta = charts.to_model(i, Jet.variable(p, n))
        return trig_jet(modes, zeta) * charts.from_model_deriv(i, zeta)

    return TensorField((-1, 0), fn, label)


def onshell_connection(defm) -> TensorField:
    """h = {f, z}: then D_h mu - dbar h = -dbar_mu({f,z} - h) vanishes identically."""
    return schwarzian_field(defm)


def probe_connection(sc, value=1.0, scale=0.25):
    """A periodic h whose modes are conjugate to the scenario's variation modes, so int a != 0."""
    modes = sc.raw.get("variation", {}).get("modes", [])
    probe = [[-m, -n, scale * (1 + k), -0.5 * scale * k] for k, (m, n, _, _) in enumerate(modes)]
    return sc.connection({"kind": "trig", "value": [float(np.real(value)), float(np.imag(value))],
                          "modes": probe})


def random_trig_modes(rng, count=3, max_freq=2, scale=0.2):
    out = []
    for _ in range(count):
        m, n = (int(x) for x in rng.integers(-max_freq, max_freq + 1, size=2))
        out.append([m, n, float(scale * rng.normal()), float(scale * rng.normal())])
    return out


# ---------------------------------------------------------------------------
# the Lie-algebra cocycle
# ---------------------------------------------------------------------------

def lie_cocycle(v: TensorField, h: TensorField, mu: TensorField, cycle, rule=None) -> complex:
    """c(v) = 2 int_X mu D_h v."""
    return 2 * _integral(mu * D_h(v, h), cycle, rule)


def lie_action(v: TensorField, w: TensorField, h: TensorField, mu: TensorField, cycle, rule=None) -> complex:
    """(v . c(w)) = 2 int (dbar_mu v D_h w + mu L_v(D_h w))."""
    Dw = D_h(w, h)
    return 2 * _integral(dbar_mu(-1, v, mu) * Dw + mu * lie_derivative(v, Dw), cycle, rule)


def lie_coboundary(v, w, h, mu, cycle, rule=None) -> complex:
    """delta c(v, w) = v.c(w) - w.c(v) - c([v, w])."""
    return (lie_action(v, w, h, mu, cycle, rule) - lie_action(w, v, h, mu, cycle, rule)
            - lie_cocycle(bracket(v, w), h, mu, cycle, rule))


def _integral(form: TensorField, cycle, rule=None):
    rule = LIE_RULE if rule is None else rule
    total = 0j
    for (tau, lab), c in cycle.sigma0:
        total += c * integrate(form.as_form(tau[0]), cycle.geometry.realize(tau, lab), rule)
    return complex(total)


def skew_residual(u: TensorField, v: TensorField, h: TensorField, cycle, rule=None) -> float:
    """|int u D_h v + int v D_h u|.

    u D_h v has weight (1,0); it is completed to a 2-form with the unit
    (0,1) field, which is global only on translation-chart scenarios.
    """
    one = TensorField((0, 1), lambda i, p, n: Jet.constant(1.0, n, p.shape))
    a = _integral(u * D_h(v, h) * one, cycle, rule)
    b = _integral(v * D_h(u, h) * one, cycle, rule)
    return abs(a + b)
