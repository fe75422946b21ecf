"""The local Lagrangian cocycle of the chiral Polyakov action, built by descent.

Layers are written in the coordinate of the last chart of each tuple.
Integers in Z(1) and Z(2) are stored as plain ints; their 2 pi i factors
are reinstated only when a value is formed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .atlas import TWO_PI_I, BranchInconsistency, CoverAtlas, chern_cocycle, round_integers
from .cech_deligne import (
    DeligneCochain,
    DeligneCocycle3,
    cech_delta_layer,
    cochain_residuals,
    line_bundle_cochain,
    tame_symbol,
    total_D,
)
from .fields import FormField, d, pullback, wedge, zero_form
from .intlinalg import solve_integer
from .jets import Jet
from .quadrature import gauss_legendre01
from .regions import continue_log
from .report import Report


class LedgerError(BranchInconsistency):
    pass


def _function(fn, label=""):
    return FormField(0, fn, label)


def log_derivative_form(atlas: CoverAtlas, i, j):
    """log z'_ij as a holomorphic function in chart j."""
    tr = atlas.transition(i, j)
    return _function(lambda p, n: tr.log_deriv_jet(p, n), f"log z'{i}{j}")


def _integer_delta(comp, cover, q):
    return cech_delta_layer(comp, cover, q, integer=True)


# ---------------------------------------------------------------------------
# deformation data and branch ledger
# ---------------------------------------------------------------------------

@dataclass
class BranchLedger:
    """Integers b_ij, c_ijk, c~_ijk, each meaning that multiple of 2 pi i."""

    b: dict
    c: dict
    c_tilde: dict
    residual: float = 0.0

    def check(self, cover: CoverAtlas):
        db = _integer_delta(self.b, cover, 1)
        for t, v in db.items():
            if v != self.c_tilde.get(t, 0) - self.c.get(t, 0):
                raise LedgerError(f"delta b != c~ - c at {t}")
        if cover.max_order >= 4:
            for name, comp in (("c", self.c), ("c~", self.c_tilde)):
                bad = [t for t, v in _integer_delta(comp, cover, 2).items() if v]
                if bad:
                    raise LedgerError(f"{name} is not a cocycle at {bad[0]}")
        return True

    def to_dict(self):
        def enc(comp):
            return [[list(t), int(v)] for t, v in sorted(comp.items()) if v]

        return {"b": enc(self.b), "c": enc(self.c), "c_tilde": enc(self.c_tilde)}


class DeformationData:
    """Chart data of a deformation map f: X -> X~ together with chosen log branches.

    ``df_shifts`` moves the branch of log(df_i) by 2 pi i times an integer.
    The source and target atlases carry their own transition branches.
    """

    def __init__(self, family, cover=None, target=None, df_shifts=None, per_triangle=2):
        self.family = family
        self.cover = family.cover if cover is None else cover
        self.target = family.target if target is None else target
        self.df_shifts = {i: int(v) for i, v in (df_shifts or {}).items() if v}
        self.per_triangle = per_triangle
        self._ledger = None

    # chart-local fields -----------------------------------------------------
    def f_map(self, i):
        return lambda p, n: self.family.f_jet(i, p, n)

    def df_jet(self, i, points, order):
        return self.family.f_jet(i, points, order + 1).dz()

    def mu_jet(self, i, points, order):
        f = self.family.f_jet(i, points, order + 1)
        return f.dzbar() / f.dz()

    def log_df_values(self, i, z):
        z = np.asarray(z, dtype=complex)
        base = self.cover.chart(i).domain.centroid
        vals = lambda x: self.df_jet(i, x, 0).value
        base_log = np.log(vals(np.array([base]))[0]) + TWO_PI_I * self.df_shifts.get(i, 0)
        return continue_log(vals, base, base_log, z.ravel()).reshape(z.shape)

    def log_df(self, i):
        def fn(p, n):
            return self.df_jet(i, p, n).log(self.log_df_values(i, p))

        return _function(fn, f"log df{i}")

    def log_zp(self, i, j):
        return log_derivative_form(self.cover, i, j)

    def log_wp_f(self, i, j):
        """log w'_ij o f_j in chart j."""
        tr = self.target.transition(i, j)

        def fn(p, n):
            w = self.family.f_jet(j, p, n)
            return tr.log_deriv_jet(w.value, n).compose(w)

        return _function(fn, f"log w'{i}{j} o f")

    def zpp_over_zp(self, i, j):
        tr = self.cover.transition(i, j)
        return _function(lambda p, n: tr.log_deriv_jet(p, n + 1).dz(), f"z''/z'{i}{j}")

    def pull(self, form, frm, to):
        """Carry a form written in chart ``frm`` to chart ``to`` (frm < to)."""
        if frm == to:
            return form
        return pullback(self.cover.transition(frm, to).holo, form)

    # ledger ------------------------------------------------------------------
    def _logs_at(self, i, j, z):
        return self.target.transition(i, j).log_deriv(self.family.f_values(j, z))

    def ledger(self) -> BranchLedger:
        if self._ledger is not None:
            return self._ledger
        c, worst = chern_cocycle(self.cover)
        ct = {}
        for (i, j, k) in self.cover.tuples(3):
            z = self.cover.samples((i, j, k), self.per_triangle)
            zj = self.cover.transition(j, k)(z)
            val = (self._logs_at(j, k, z) - self._logs_at(i, k, z) + self._logs_at(i, j, zj)) / TWO_PI_I
            ct[(i, j, k)], r = round_integers(val, f"c~{(i, j, k)}")
            worst = max(worst, r)
        b = {}
        for (i, j) in self.cover.tuples(2):
            z = self.cover.samples((i, j), self.per_triangle)
            tr = self.cover.transition(i, j)
            val = (self._logs_at(i, j, z) - tr.log_deriv(z) - self.log_df_values(i, tr(z))
                   + self.log_df_values(j, z)) / TWO_PI_I
            b[(i, j)], r = round_integers(val, f"b{(i, j)}")
            worst = max(worst, r)
        self._ledger = BranchLedger(b, c, ct, worst)
        self._ledger.check(self.cover)
        return self._ledger

    # consistency -------------------------------------------------------------
    def verify(self, tol=1e-8) -> Report:
        """f_i o z_ij = w_ij o f_j, the mu transformation law, df != 0 and |mu| < 1."""
        details = {}
        worst, where = 0.0, None
        for (i, j) in self.cover.tuples(2):
            z = self.cover.samples((i, j), self.per_triangle)
            tr = self.cover.transition(i, j)
            lhs = self.family.f_values(i, tr(z))
            rhs = self.target.transition(i, j)(self.family.f_values(j, z))
            r1 = float(np.max(np.abs(lhs - rhs)))
            zp = tr.deriv(z)
            mu_i = self.mu_jet(i, tr(z), 0).value
            mu_j = self.mu_jet(j, z, 0).value
            r2 = float(np.max(np.abs(mu_i * np.conj(zp) / zp - mu_j)))
            for r in (r1, r2):
                if r > worst:
                    worst, where = r, (i, j)
        mu_sup, df_min = 0.0, np.inf
        for i in self.cover.ids:
            z = self.cover.samples((i,), self.per_triangle)
            df_min = min(df_min, float(np.min(np.abs(self.df_jet(i, z, 0).value))))
            mu_sup = max(mu_sup, float(np.max(np.abs(self.mu_jet(i, z, 0).value))))
        details.update({"mu_sup": mu_sup, "df_min": df_min})
        if df_min == 0 or mu_sup >= 1:
            worst = float("inf")
        return Report("deformation data", worst, tol, details, where)


# ---------------------------------------------------------------------------
# dilogarithm trivialization of the tame symbol (TX, TX]
# ---------------------------------------------------------------------------

class Dilogarithm:
    """L_ijk(z_k) = -int_base^z (log z'_ij o z_jk) dlog z'_jk along a straight segment."""

    def __init__(self, atlas: CoverAtlas, triple, base=None, nodes=20, panels=2):
        i, j, k = triple
        self.triple = tuple(triple)
        self.tij = atlas.transition(i, j)
        self.tjk = atlas.transition(j, k)
        self.base = complex(atlas.seed(triple) if base is None else base)
        s, w = gauss_legendre01(nodes)
        edges = np.linspace(0.0, 1.0, panels + 1)
        self._s = np.concatenate([a + (b - a) * s for a, b in zip(edges[:-1], edges[1:])])
        self._w = np.concatenate([(b - a) * w for a, b in zip(edges[:-1], edges[1:])])

    def integrand(self, z):
        z = np.asarray(z, dtype=complex)
        g1, g2 = self.tjk.derivs(z, 2)[1:3]
        return -self.tij.log_deriv(self.tjk(z)) * g2 / g1

    def integrand_jet(self, points, order):
        zj = self.tjk.apply(Jet.variable(points, order))
        lij = self.tij.log_deriv_jet(zj.value, order).compose(zj)
        return -(lij * self.tjk.log_deriv_jet(points, order + 1).dz())

    def values(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        x = self.base + self._s[:, None] * (flat - self.base)[None, :]
        g = self.integrand(x.ravel()).reshape(x.shape)
        return ((self._w[:, None] * g).sum(axis=0) * (flat - self.base)).reshape(z.shape)

    def jet(self, points, order):
        points = np.asarray(points, dtype=complex)
        c = np.zeros((order + 1, order + 1) + points.shape, dtype=complex)
        c[0, 0] = self.values(points)
        if order >= 1:
            g = self.integrand_jet(points, order - 1)
            for a in range(1, order + 1):
                c[a, 0] = g.c[a - 1, 0] / a
        return Jet(c, order)

    def form(self):
        return _function(self.jet, f"L{self.triple}")


def _constant(value):
    return lambda p, n: Jet.constant(value, n, p.shape)


@dataclass
class TameTrivialization:
    """(tau_ij, phi_ijk, n_ijkl) with D(tau, phi, n) = (TX, TX]; tau = None means zero.

    ``n`` holds integers in units of (2 pi i)^2.
    """

    atlas: CoverAtlas
    phi: dict
    n: dict
    chern: dict
    tau: dict = None
    label: str = "dilog"
    constants: dict = field(default_factory=dict)

    def as_cochain(self) -> DeligneCochain:
        tau = self.tau or {t: zero_form(1) for t in self.atlas.tuples(2)}
        return DeligneCochain(2, 3, {2: dict(tau), 1: dict(self.phi), 0: dict(self.n)})

    def symbol(self) -> DeligneCochain:
        logs = {t: log_derivative_form(self.atlas, *t) for t in self.atlas.tuples(2)}
        L = line_bundle_cochain(logs, self.chern)
        return tame_symbol(L, L, self.atlas, check=False)

    def verify(self, tol=1e-8, per_triangle=2) -> Report:
        """Residuals of D(tau, phi, n) - (TX, TX] layer by layer."""
        diff = total_D(self.as_cochain(), self.atlas) - self.symbol()
        names = {2: "dphi + delta tau - symbol", 1: "n - delta phi - symbol", 0: "delta n - c c"}
        res = cochain_residuals(diff, self.atlas, per_triangle)
        details = {names[k]: float(r) for k, (r, _) in res.items()}
        forms = max([r for k, (r, _) in res.items() if k > 0], default=0.0)
        ints = max([r for k, (r, _) in res.items() if k == 0], default=0)
        return Report(f"tame trivialization ({self.label})", forms if not ints else float("inf"), tol, details)

    def dtau_residual(self, per_triangle=2):
        if not self.tau:
            return 0.0
        worst = 0.0
        for t, form in self.tau.items():
            z = self.atlas.samples(t, per_triangle)
            worst = max(worst, float(np.max(np.abs(d(form)(z)))))
        return worst


def _delta_matrix(rows, cols):
    """Integer matrix of the Čech differential from ``cols`` tuples to ``rows`` tuples."""
    index = {t: a for a, t in enumerate(cols)}
    M = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, t in enumerate(rows):
        for k in range(len(t)):
            face = t[:k] + t[k + 1:]
            if face in index:
                M[r, index[face]] += (-1) ** k
    return M


def _cup_cc(c, quint):
    return c.get(quint[:3], 0) * c.get(quint[2:], 0)


def trivialize_tame_symbol(atlas: CoverAtlas, basepoints=None, chern=None, tol=1e-8,
                           per_triangle=1) -> TameTrivialization:
    """The dilogarithm trivialization (0, L - beta, n) of (TX, TX].

    beta is a constant 2-cochain absorbing the integration constants so that
    c log z' = -delta(L - beta) + n with n exact integers.
    """
    c = chern_cocycle(atlas)[0] if chern is None else chern
    basepoints = basepoints or {}
    triples, quads, quints = atlas.tuples(3), atlas.tuples(4), atlas.tuples(5)
    dilogs = {t: Dilogarithm(atlas, t, basepoints.get(t)) for t in triples}
    alpha = {}
    for t in quads:
        i, j, k, l = t
        z = atlas.samples(t, per_triangle)
        zl = atlas.transition(k, l)(z)
        val = (TWO_PI_I * c.get((i, j, k), 0) * atlas.transition(k, l).log_deriv(z)
               + dilogs[(j, k, l)].values(z) - dilogs[(i, k, l)].values(z)
               + dilogs[(i, j, l)].values(z) - dilogs[(i, j, k)].values(zl))
        spread = float(np.ptp(val.real) + np.ptp(val.imag))
        if spread > tol * (1 + float(np.max(np.abs(val)))):
            raise BranchInconsistency(f"integration constant on {t} is not constant (spread {spread:.2e})")
        alpha[t] = complex(np.mean(val)) / TWO_PI_I ** 2
    # integers n with delta n = c u c; with no 5-fold overlaps round alpha instead
    if quints:
        A = _delta_matrix(quints, quads).tolist()
        sol = solve_integer(A, [_cup_cc(c, q) for q in quints])
        n = dict(zip(quads, (int(v) for v in sol)))
    else:
        n = {t: int(np.rint(alpha[t].real)) for t in quads}
    beta = {t: 0j for t in triples}
    residual = 0.0
    if quads:
        M = _delta_matrix(quads, triples).astype(float)
        rhs = np.array([alpha[t] - n[t] for t in quads])
        sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        residual = float(np.max(np.abs(M @ sol - rhs)))
        if residual > tol:
            raise BranchInconsistency(f"integration constants are not a coboundary (residual {residual:.2e})")
        beta = {t: complex(v) for t, v in zip(triples, sol)}
    phi = {}
    for t in triples:
        shift = -TWO_PI_I ** 2 * beta[t]
        phi[t] = _shifted(dilogs[t].form(), shift)
    return TameTrivialization(atlas, phi, n, dict(c), None, "dilog",
                              {"beta": beta, "alpha": alpha, "coboundary_residual": residual,
                               "basepoints": {t: dl.base for t, dl in dilogs.items()}})


def _shifted(form, value):
    if value == 0:
        return form

    def fn(p, n):
        return form.fn(p, n) + Jet.constant(value, n, p.shape)

    return _function(fn, form.label)


def shift_trivialization(triv: TameTrivialization, beta: dict, p: dict, tol=1e-9) -> TameTrivialization:
    """Move (phi, n) by a cocycle (beta, p) of Z(2) -> C: phi + beta, n + p.

    ``beta`` holds complex constants, ``p`` integers in units of (2 pi i)^2.
    """
    for t in triv.atlas.tuples(4):
        db = sum((-1) ** k * beta.get(t[:k] + t[k + 1:], 0) for k in range(4))
        if abs(db - TWO_PI_I ** 2 * p.get(t, 0)) > tol * (1 + abs(db)):
            raise ValueError(f"torsor shift is not a cocycle at {t}")
    phi = {t: _shifted(f, complex(beta.get(t, 0))) for t, f in triv.phi.items()}
    n = {t: v + int(p.get(t, 0)) for t, v in triv.n.items()}
    return TameTrivialization(triv.atlas, phi, n, triv.chern, triv.tau, triv.label + "+shift",
                              dict(triv.constants))


def class_generator(atlas: CoverAtlas, eps: dict, tol=1e-9):
    """A complex 2-cocycle zeta with <zeta, sum eps_f f> = 1.

    Constants and coboundaries pair to zero against the nerve 2-cycle when
    the signed face count vanishes, so this is the part of a torsor shift
    that can move A at all.
    """
    triples, quads = atlas.tuples(3), atlas.tuples(4)
    M = _delta_matrix(quads, triples).astype(float)
    e = np.array([[float(eps.get(t, 0)) for t in triples]])
    A = np.vstack([M, e]) if len(quads) else e
    rhs = np.zeros(A.shape[0])
    rhs[-1] = 1.0
    sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    if np.max(np.abs(A @ sol - rhs)) > tol:
        raise ValueError("the nerve 2-cycle is a boundary; no generator exists")
    return {t: float(v) for t, v in zip(triples, sol)}


def random_torsor_shift(atlas: CoverAtlas, rng, scale=0.3, int_range=2, eps=None):
    """A random cocycle (beta, p): a constant plus delta(gamma) plus an integer 2-cochain.

    With ``eps`` (the fundamental cycle's face signs) a random multiple of
    the class generator is added as well.
    """
    pairs, triples, quads = atlas.tuples(2), atlas.tuples(3), atlas.tuples(4)
    const = complex(rng.normal(), rng.normal()) * scale
    gamma = {t: complex(rng.normal(), rng.normal()) * scale for t in pairs}
    ints = {t: int(rng.integers(-int_range, int_range + 1)) for t in triples}
    zeta = class_generator(atlas, eps) if eps is not None else {}
    x = complex(rng.normal(), rng.normal()) * scale * abs(TWO_PI_I) ** 2
    beta = {}
    for t in triples:
        dg = sum((-1) ** k * gamma[t[:k] + t[k + 1:]] for k in range(3))
        beta[t] = const + dg + TWO_PI_I ** 2 * ints[t] + x * zeta.get(t, 0.0)
    p = {t: sum((-1) ** k * ints.get(t[:k] + t[k + 1:], 0) for k in range(4)) for t in quads}
    return beta, p


# ---------------------------------------------------------------------------
# the descent components
# ---------------------------------------------------------------------------

def omega(defm: DeformationData, h) -> dict:
    """(f_zz / f_z) mu_z + 2 mu h, as the dz^dzbar coefficient per chart."""

    def make(i):
        def fn(p, n):
            f = defm.family.f_jet(i, p, n + 2)
            fz = f.dz()
            if np.any(fz.value == 0):
                raise ZeroDivisionError(f"df vanishes at a sample of chart {i}")
            mu = f.dzbar() / fz
            return fz.dz() / fz * mu.dz() + mu * h.jet(i, p, n) * 2.0

        return FormField(2, fn, f"omega{i}")

    return {(i,): make(i) for i in defm.cover.ids}


def _pullback_f(defm, k, form):
    return pullback(defm.f_map(k), form)


def theta(defm: DeformationData, triv: TameTrivialization, triv_t: TameTrivialization) -> dict:
    out = {}
    for (i, j) in defm.cover.tuples(2):
        mu_ratio = wedge(_function(lambda p, n, j=j: defm.mu_jet(j, p, n)), defm.zpp_over_zp(i, j))
        first = FormField(1, lambda p, n, g=mu_ratio: (Jet.constant(0.0, n, p.shape), g.fn(p, n) * 2.0))
        lw, lz = defm.log_wp_f(i, j), defm.log_zp(i, j)
        th = first - wedge(lw + lz, d(defm.log_df(j))) + wedge(lw, d(lz))
        if triv_t.tau:
            th = th - _pullback_f(defm, j, triv_t.tau[(i, j)])
        if triv.tau:
            th = th + triv.tau[(i, j)]
        out[(i, j)] = th
    return out


def big_theta(defm: DeformationData, triv: TameTrivialization, triv_t: TameTrivialization) -> dict:
    led = defm.ledger()
    out = {}
    for (i, j, k) in defm.cover.tuples(3):
        t = (i, j, k)
        ct, c = led.c_tilde.get(t, 0), led.c.get(t, 0)
        val = _pullback_f(defm, k, triv_t.phi[t]) - triv.phi[t]
        if ct + c:
            val = val - defm.log_df(k) * (TWO_PI_I * (ct + c))
        val = val - wedge(defm.pull(defm.log_zp(i, j), j, k), defm.log_wp_f(j, k))
        if ct:
            val = val + defm.log_zp(i, k) * (TWO_PI_I * ct)
        out[t] = val
    return out


def m_closed_form(defm: DeformationData, triv: TameTrivialization, triv_t: TameTrivialization) -> dict:
    """m_ijkl / (2 pi i)^2 from the integer ledger and the trivializations."""
    led = defm.ledger()
    c, ct, b = led.c, led.c_tilde, led.b
    out = {}
    for t in defm.cover.tuples(4):
        i, j, k, l = t
        out[t] = (triv_t.n.get(t, 0) - triv.n.get(t, 0)
                  - (ct.get((i, j, k), 0) + c.get((i, j, k), 0)) * b.get((k, l), 0)
                  + c.get((i, j, l), 0) * ct.get((j, k, l), 0)
                  - c.get((i, k, l), 0) * ct.get((i, j, k), 0))
    return out


def m_numerical(defm: DeformationData, Theta: dict, per_triangle=1) -> dict:
    """delta Theta on 4-fold overlaps, rounded to integers in units of (2 pi i)^2."""
    out = {}
    worst = 0.0
    comp = cech_delta_layer(Theta, defm.cover, 2, form_degree=0)
    for t, form in comp.items():
        z = defm.cover.samples(t, per_triangle)
        out[t], r = round_integers(form(z) / TWO_PI_I ** 2, f"delta Theta{t}")
        worst = max(worst, r)
    return out, worst


def m_layer(defm, triv, triv_t, Theta=None, per_triangle=1) -> dict:
    """Closed-form m, cross-checked against the rounded numerical delta Theta."""
    closed = m_closed_form(defm, triv, triv_t)
    if Theta is None:
        Theta = big_theta(defm, triv, triv_t)
    numeric, _ = m_numerical(defm, Theta, per_triangle)
    bad = [t for t in closed if closed[t] != numeric.get(t)]
    if bad:
        raise LedgerError(f"closed-form m disagrees with delta Theta at {bad[0]}: "
                          f"{closed[bad[0]]} vs {numeric.get(bad[0])}")
    return closed


@dataclass
class LagrangianCocycle:
    cocycle: DeligneCocycle3
    omega: dict
    theta: dict
    Theta: dict
    m: dict
    ledger: BranchLedger
    defm: DeformationData
    triv: TameTrivialization
    triv_t: TameTrivialization
    h: object = None

    def verify(self, tol=1e-8, per_triangle=2) -> Report:
        from .cech_deligne import verify_cocycle

        return verify_cocycle(self.cocycle, self.defm.cover, tol, per_triangle)


def target_trivialization(defm: DeformationData, triv: TameTrivialization):
    """The deformed-side trivialization; shared with ``triv`` when both sides use one atlas."""
    if defm.target is triv.atlas:
        return triv
    return trivialize_tame_symbol(defm.target)


def build_lagrangian_cocycle(defm: DeformationData, h, triv=None, triv_t=None) -> LagrangianCocycle:
    """Omega = 2 pi i (omega, theta, -Theta, -m)."""
    if triv is None:
        triv = trivialize_tame_symbol(defm.cover)
    if triv_t is None:
        triv_t = target_trivialization(defm, triv)
    led = defm.ledger()
    om = omega(defm, h)
    th = theta(defm, triv, triv_t)
    Th = big_theta(defm, triv, triv_t)
    m = m_layer(defm, triv, triv_t, Th)
    cocycle = DeligneCocycle3({t: v * TWO_PI_I for t, v in om.items()},
                              {t: v * TWO_PI_I for t, v in th.items()},
                              {t: v * (-TWO_PI_I) for t, v in Th.items()},
                              {t: -v for t, v in m.items()})
    return LagrangianCocycle(cocycle, om, th, Th, m, led, defm, triv, triv_t, h)


# ---------------------------------------------------------------------------
# changing logarithm branches
# ---------------------------------------------------------------------------

def _shift_trivialization_branches(triv: TameTrivialization, atlas: CoverAtlas, k: dict):
    """Transport the trivialization to shifted transition branches log z' + 2 pi i k."""
    c = triv.chern
    dk = {t: sum((-1) ** a * k.get(t[:a] + t[a + 1:], 0) for a in range(3)) for t in atlas.tuples(3)}
    phi = {}
    for t, form in triv.phi.items():
        i, j, kk = t
        if k.get((i, j), 0):
            form = form - log_derivative_form(triv.atlas, j, kk) * (TWO_PI_I * k[(i, j)])
        phi[t] = form
    n = {}
    for t, v in triv.n.items():
        i, j, kk, l = t
        n[t] = (v + k.get((i, j), 0) * c.get((j, kk, l), 0) + c.get((i, j, kk), 0) * k.get((kk, l), 0)
                + dk.get((i, j, kk), 0) * k.get((kk, l), 0))
    chern = {t: c.get(t, 0) + dk[t] for t in atlas.tuples(3)}
    return TameTrivialization(atlas, phi, n, chern, triv.tau, triv.label, dict(triv.constants))


@dataclass
class BranchShift:
    defm: DeformationData
    triv: TameTrivialization
    triv_t: TameTrivialization
    ledger: BranchLedger
    psi: dict
    r: dict
    r_direct: dict


def shift_log_branches(defm: DeformationData, triv, triv_t, k=None, kt=None, p=None,
                       per_triangle=1) -> BranchShift:
    """Change log z', log w' and log df by 2 pi i (k, k~, p) and compute (psi, r)."""
    k = {t: int(v) for t, v in (k or {}).items() if v}
    kt = {t: int(v) for t, v in (kt or {}).items() if v}
    p = {t: int(v) for t, v in (p or {}).items() if v}
    old = defm.ledger()
    same = triv_t is triv
    if same and k != kt:
        # the two sides stop sharing transition branches
        same = False
    cover = defm.cover.with_branch_shifts(k)
    target = cover if (same and defm.target is defm.cover) else defm.target.with_branch_shifts(kt)
    shifts = {i: defm.df_shifts.get(i, 0) + p.get(i, 0) for i in set(defm.df_shifts) | set(p)}
    new = DeformationData(defm.family, cover, target, shifts, defm.per_triangle)
    new_triv = _shift_trivialization_branches(triv, cover, k)
    new_triv_t = new_triv if (same and target is cover) else _shift_trivialization_branches(triv_t, target, kt)
    led = new.ledger()

    psi = {}
    for (i, j) in defm.cover.tuples(2):
        kk, kkt = k.get((i, j), 0), kt.get((i, j), 0)
        form = zero_form(0)
        if kk + kkt:
            form = form - defm.log_df(j) * (TWO_PI_I * (kk + kkt))
        if kkt:
            form = form + defm.log_zp(i, j) * (TWO_PI_I * kkt)
        psi[(i, j)] = form

    c, ct, b = old.c, old.c_tilde, old.b
    dk = {t: sum((-1) ** a * k.get(t[:a] + t[a + 1:], 0) for a in range(3)) for t in defm.cover.tuples(3)}
    dkt = {t: sum((-1) ** a * kt.get(t[:a] + t[a + 1:], 0) for a in range(3)) for t in defm.cover.tuples(3)}
    r = {}
    for t in defm.cover.tuples(3):
        i, j, l = t
        r[t] = ((kt.get((i, j), 0) + k.get((i, j), 0)) * b.get((j, l), 0)
                + (ct.get(t, 0) + c.get(t, 0) + dk[t] + dkt[t]) * p.get(l, 0)
                + k.get((i, j), 0) * kt.get((j, l), 0)
                - ct.get(t, 0) * k.get((i, l), 0)
                - dkt[t] * k.get((i, l), 0)
                + kt.get((j, l), 0) * c.get(t, 0)
                + kt.get((i, j), 0) * c.get(t, 0))

    # dual route: r = Theta_old + delta psi - Theta_new, rounded
    Th_old = big_theta(defm, triv, triv_t)
    Th_new = big_theta(new, new_triv, new_triv_t)
    dpsi = cech_delta_layer(psi, defm.cover, 1, form_degree=0)
    r_direct = {}
    for t in defm.cover.tuples(3):
        z = defm.cover.samples(t, per_triangle)
        val = (Th_old[t](z) + dpsi[t](z) - Th_new[t](z)) / TWO_PI_I ** 2
        r_direct[t], _ = round_integers(val, f"r{t}")
    return BranchShift(new, new_triv, new_triv_t, led, psi, r, r_direct)


def gauge_cochain(shift: BranchShift) -> DeligneCochain:
    """lambda = (0, 2 pi i psi, r) in total degree 2 of Z(3)_D."""
    cover = shift.defm.cover
    return DeligneCochain(3, 2, {
        2: {(i,): zero_form(1) for i in cover.ids},
        1: {t: v * TWO_PI_I for t, v in shift.psi.items()},
        0: dict(shift.r),
    })


def random_branch_shifts(defm: DeformationData, rng, k_range=1, separate=True):
    """Random integer shifts (k, k~, p); k~ = k when both sides share one atlas."""
    pairs = defm.cover.tuples(2)
    k = {t: int(rng.integers(-k_range, k_range + 1)) for t in pairs}
    if separate:
        kt = {t: int(rng.integers(-k_range, k_range + 1)) for t in pairs}
    else:
        kt = dict(k)
    p = {i: int(rng.integers(-k_range, k_range + 1)) for i in defm.cover.ids}
    return k, kt, p
