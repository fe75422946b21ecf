"""The acceptance battery: nine numbered criteria, each a merged Report plus a runtime budget."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .atlas import build_nerve, chern_cocycle
from .cech_deligne import D_squared_residual, cech_delta_layer, layer_residual, random_cochain, total_D
from .chains import (boundary_prime, boundary_second, build_fundamental_class, second_augmentation,
                     total_boundary)
from .group_cohomology import (build_polygon_cycle, euler_cochain, euler_number, integer_cochain_from,
                               lattice_group, log_derivative_cochain, octagon_group, polygon_area,
                               translate_lagrangian)
from .pairing import action, distance_mod, pair_total_additive, random_chain
from .chains import shift_cycle
from .polyakov import (DeformationData, build_lagrangian_cocycle, random_branch_shifts, random_torsor_shift,
                       shift_log_branches, shift_trivialization, target_trivialization,
                       trivialize_tame_symbol)
from .report import Report, merge
from .scenario import BUILTIN, load_builtin
from . import variation as var

# a torus family with non-constant mu, used wherever an on-shell h = {f, z} is needed
ONSHELL_FAMILY = {"kind": "affine_beltrami", "mu": [0.1, 0.05],
                  "modes": [[1, 0, 0.02, 0.01], [0, 1, -0.01, 0.015], [1, -1, 0.01, 0.0]]}
SECOND_FAMILY = {"kind": "affine_beltrami", "mu": [0.15, 0.05], "modes": [[1, 0, 0.02, 0.01]]}


@dataclass
class CriterionResult:
    number: int
    title: str
    report: Report
    seconds: float
    budget: float = None
    extras: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.report.passed and (self.budget is None or self.seconds <= self.budget)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        budget = "" if self.budget is None else f" / {self.budget:.0f}s"
        return f"criterion {self.number}: {status}  {self.title}  ({self.seconds:.1f}s{budget})"

    def to_dict(self):
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "seconds": self.seconds, "budget": self.budget, "report": self.report.to_dict()}


class Context:
    """Scenario cache and RNG shared by the criteria of one run."""

    def __init__(self, seed=0, triangle_order=None, segment_order=None):
        self.seed = seed
        self.orders = {"triangle_order": triangle_order, "segment_order": segment_order}
        self._scenarios = {}
        self._cycles = {}

    def rng(self, salt):
        return np.random.default_rng([self.seed, salt])

    def scenario(self, name):
        if name not in self._scenarios:
            self._scenarios[name] = load_builtin(name, **self.orders)
        return self._scenarios[name]

    def cycle(self, name):
        if name not in self._cycles:
            sc = self.scenario(name)
            self._cycles[name] = build_fundamental_class(sc.cover, sc.faces)
        return self._cycles[name]


def _chain_size(c):
    return float(len(c))


# ---------------------------------------------------------------------------
# 1. algebraic identities
# ---------------------------------------------------------------------------

def criterion_1(ctx: Context, tol=1e-10):
    rng = ctx.rng(1)
    parts = []
    for name in BUILTIN:
        cover = ctx.scenario(name).cover
        nerve = build_nerve(cover, min(cover.max_order - 1, 4))
        parts.append(Report(f"{name}: simplicial identities", float(len(nerve.check_simplicial_identities())), 0.0))
        for n in (1, 2):
            phi = random_cochain(cover, 3, n, rng)
            forms, ints = D_squared_residual(phi, cover, per_triangle=1)
            parts.append(Report(f"{name}: D^2 forms (n={n})", forms, tol))
            parts.append(Report(f"{name}: D^2 integers (n={n})", float(ints), 0.0))
        # delta^2 on a layer of 0-forms and on an integer layer
        phi = random_cochain(cover, 3, 2, rng)
        for k, integer in ((1, False), (0, True)):
            q = 2 - k
            if q + 3 > cover.max_order:
                continue
            dd = cech_delta_layer(cech_delta_layer(phi.layer(k), cover, q, integer, 0), cover, q + 1, integer, 0)
            r, where = layer_residual(dd, cover, integer=integer, per_triangle=1)
            parts.append(Report(f"{name}: delta^2 layer {k}", float(r), 0.0 if integer else tol, worst=where))
        for degree in (2, 3):
            c = random_chain(cover, degree, rng, terms=8)
            parts.append(Report(f"{name}: d'd' (degree {degree})", _chain_size(boundary_prime(boundary_prime(c))), 0.0))
            parts.append(Report(f"{name}: d''d'' (degree {degree})",
                                _chain_size(boundary_second(boundary_second(c))), 0.0))
            parts.append(Report(f"{name}: (d'+-d'')^2 (degree {degree})",
                                _chain_size(total_boundary(total_boundary(c))), 0.0))
    return merge("algebraic identities", parts)


# ---------------------------------------------------------------------------
# 2. fundamental class
# ---------------------------------------------------------------------------

def nerve_boundary(chain: dict):
    out = {}
    for t, c in chain.items():
        for k in range(len(t)):
            f = t[:k] + t[k + 1:]
            out[f] = out.get(f, 0) + (-1) ** k * c
    return {k: v for k, v in out.items() if v}


def criterion_2(ctx: Context):
    parts = []
    for name in BUILTIN:
        cyc = ctx.cycle(name)
        for label, chain in cyc.descent_residuals().items():
            parts.append(Report(f"{name}: {label}", _chain_size(chain), 0.0))
        aug = {t: c for t, c in second_augmentation(cyc.total()).items() if len(t) == 3}
        expected = {f: e for f, e in cyc.eps.items() if e}
        mism = sum(abs(aug.get(t, 0) - expected.get(t, 0)) for t in set(aug) | set(expected))
        parts.append(Report(f"{name}: second augmentation = sum eps Delta", float(mism), 0.0,
                            {"faces": len(expected)}))
        parts.append(Report(f"{name}: sum eps Delta is a nerve cycle", float(len(nerve_boundary(expected))), 0.0))
    return merge("fundamental class", parts)


# ---------------------------------------------------------------------------
# 3. Lagrangian cocycle
# ---------------------------------------------------------------------------

def criterion_3(ctx: Context, tol=1e-8):
    parts = []
    for name in ("torus", "sphere3", "genus2_octagon"):
        sc = ctx.scenario(name)
        defm = DeformationData(sc.family())
        lag = build_lagrangian_cocycle(defm, sc.connection())
        rep = lag.verify(tol, per_triangle=1)
        rep.name = f"{name}: D Omega"
        parts.append(rep)
    g = octagon_group()
    rep = translate_lagrangian(g).verify(ctx.rng(3))
    rep.name = "genus-2 group side: descent of the translated cocycle"
    parts.append(rep)
    return merge("Lagrangian cocycle", parts)


# ---------------------------------------------------------------------------
# 4. closed-form action on the torus
# ---------------------------------------------------------------------------

def closed_form_torus(mu, h):
    """S for constant mu, h on the unit-square torus: 2 pi i * 2 mu h * int dz^dzbar, with int dz^dzbar = -2i."""
    return 8 * np.pi * mu * h


def criterion_4(ctx: Context, tol=1e-8, mus=(0.1, 0.2), hs=(1.0, 2 + 1j)):
    sc = ctx.scenario("torus")
    cyc = ctx.cycle("torus")
    triv = trivialize_tame_symbol(sc.cover)
    parts, table = [], []
    for mu in mus:
        fam = sc.family(spec={"kind": "affine_beltrami", "mu": [mu, 0.0], "modes": []})
        defm = DeformationData(fam)
        for hv in hs:
            hv = complex(hv)
            h = sc.connection({"kind": "constant", "value": [hv.real, hv.imag]})
            av = action(defm, h, triv=triv, cycle=cyc, rule=sc.quad)
            ref = closed_form_torus(mu, hv)
            rel = abs(av.S_raw - ref) / abs(ref)
            table.append({"mu": mu, "h": [hv.real, hv.imag], "S": [av.S_raw.real, av.S_raw.imag],
                          "closed_form": [ref.real, ref.imag], "rel_error": rel})
            parts.append(Report(f"S = 8 pi mu h at mu={mu}, h={hv}", rel, tol))
    rep = merge("closed-form torus action", parts)
    rep.details["table"] = table
    return rep


# ---------------------------------------------------------------------------
# 5. gauge invariances
# ---------------------------------------------------------------------------

def criterion_5(ctx: Context, shifts=20, tol=1e-10, torsor_tol=1e-8):
    sc = ctx.scenario("torus")
    cyc = ctx.cycle("torus")
    h = sc.connection()
    rng = ctx.rng(5)
    defm = DeformationData(sc.family(spec=SECOND_FAMILY))
    lag = build_lagrangian_cocycle(defm, h)
    A0 = action(defm, h, cycle=cyc, lagrangian=lag, rule=sc.quad).A
    worst, r_mismatch = 0.0, 0
    for _ in range(shifts):
        k, kt, p = random_branch_shifts(defm, rng)
        sh = shift_log_branches(defm, lag.triv, lag.triv_t, k, kt, p)
        lag2 = build_lagrangian_cocycle(sh.defm, h, sh.triv, sh.triv_t)
        A1 = action(sh.defm, h, cycle=cyc, lagrangian=lag2, rule=sc.quad).A
        worst = max(worst, abs(A1 - A0) / abs(A0))
        r_mismatch += sum(1 for t in sh.r if sh.r[t] != sh.r_direct[t])
    parts = [Report(f"A under {shifts} log-branch shifts", worst, tol),
             Report("integer ledger r: closed form = rounded direct", float(r_mismatch), 0.0)]

    # torsor: one shift of both trivializations, two different maps
    triv = trivialize_tame_symbol(sc.cover)
    beta, pp = random_torsor_shift(sc.cover, rng, eps=cyc.eps)
    ratios = []
    for spec in ({"kind": "affine_beltrami", "mu": [0.1, 0.0], "modes": []}, SECOND_FAMILY):
        d = DeformationData(sc.family(spec=spec))
        tt = target_trivialization(d, triv)
        bt, pt = random_torsor_shift(d.target, np.random.default_rng([ctx.seed, 55]), eps=cyc.eps)
        a = action(d, h, cycle=cyc, rule=sc.quad, lagrangian=build_lagrangian_cocycle(d, h, triv, tt)).A
        b = action(d, h, cycle=cyc, rule=sc.quad,
                   lagrangian=build_lagrangian_cocycle(d, h, shift_trivialization(triv, beta, pp),
                                                       shift_trivialization(tt, bt, pt))).A
        ratios.append(b / a)
    diff = abs(ratios[0] - ratios[1]) / abs(ratios[0])
    parts.append(Report("torsor ratio equal across two maps", diff, torsor_tol,
                        {"ratios": [[z.real, z.imag] for z in ratios]}))
    return merge("gauge invariances", parts)


# ---------------------------------------------------------------------------
# 6. pairing duality
# ---------------------------------------------------------------------------

def criterion_6(ctx: Context, count=20, tol=1e-8, consistency_tol=1e-12):
    rng = ctx.rng(6)
    parts = []
    names = ("torus", "sphere3")
    worst, where = 0.0, None
    for n in range(count):
        name = names[n % len(names)]
        sc, cyc = ctx.scenario(name), ctx.cycle(name)
        lam = random_cochain(sc.cover, 3, 2, rng)
        r = distance_mod(pair_total_additive(total_D(lam, sc.cover), shift_cycle(cyc), cyc.geometry, sc.quad))
        if r > worst:
            worst, where = r, f"{name} #{n}"
    parts.append(Report(f"<D lambda, 'Sigma> mod Z(3) for {count} random lambda", worst, tol, worst=where))
    for name in ("torus", "sphere3", "genus2_octagon"):
        sc, cyc = ctx.scenario(name), ctx.cycle(name)
        defm = DeformationData(sc.family())
        av = action(defm, sc.connection(), cycle=cyc, rule=sc.quad)
        parts.append(Report(f"{name}: A = exp(S / (2 pi i)^2)", av.consistency, consistency_tol,
                            {"A": [av.A.real, av.A.imag]}))
    return merge("pairing duality", parts)


# ---------------------------------------------------------------------------
# 7. topological invariants
# ---------------------------------------------------------------------------

def chern_pairing(ctx: Context, name):
    """<c, Sigma2-part of the total cycle>, i.e. <c, -Sigma2>."""
    c, _ = chern_cocycle(ctx.scenario(name).cover)
    cyc = ctx.cycle(name)
    return -sum(co * c.get(tau, 0) for (tau, _), co in cyc.sigma2)


def criterion_7(ctx: Context):
    g = octagon_group()
    cyc = build_polygon_cycle(g)
    routes = {
        "rotation numbers": euler_number(g, cyc),
        "principal logs": euler_number(g, cyc, integer_cochain_from(log_derivative_cochain(g, principal=True), g)),
        "continued logs": euler_number(g, cyc, integer_cochain_from(log_derivative_cochain(g), g)),
    }
    parts = [Report(f"genus-2 Euler number via {k} = -2", float(abs(v + 2)), 0.0, {"value": v})
             for k, v in routes.items()]
    area = polygon_area(cyc)
    parts.append(Report("octagon area = 4 pi", abs(area - 4 * np.pi), 1e-9, {"area": area}))
    lat = lattice_group()
    e = euler_number(lat, build_polygon_cycle(lat), euler_cochain(lat))
    parts.append(Report("lattice group Euler number = 0", float(abs(e)), 0.0, {"value": e}))
    for name, expected in (("sphere3", 2), ("torus", 0), ("genus2_octagon", -2)):
        v = chern_pairing(ctx, name)
        parts.append(Report(f"{name}: Chern pairing = {expected}", float(abs(v - expected)), 0.0, {"value": v}))
    return merge("topological invariants", parts)


# ---------------------------------------------------------------------------
# 8. variation theorem
# ---------------------------------------------------------------------------

def criterion_8(ctx: Context, tol=1e-4, el_tol=1e-10):
    torus = ctx.scenario("torus")
    parts = []
    rep = var.fd_variation_check(torus, h=var.probe_connection(torus), tol=tol)
    rep.name = "torus: finite-difference delta S = 2 pi i int a"
    parts.append(rep)
    sphere = ctx.scenario("sphere3")
    rep = var.fd_variation_check(sphere, tol=tol)
    rep.name = "sphere: finite-difference delta S = 2 pi i int a"
    parts.append(rep)
    # on-shell: constant (mu, h), and h = {f, z} for a non-constant mu
    defm = DeformationData(torus.family())
    r, where = var.sup_residual(var.el_residual(var.h_field(torus.connection()), var.mu_field(defm)), torus.cover)
    parts.append(Report("torus constant (mu, h): EL residual", r, el_tol, worst=where))
    defm = DeformationData(torus.family(spec=ONSHELL_FAMILY))
    r, where = var.sup_residual(var.el_residual(var.onshell_connection(defm), var.mu_field(defm)), torus.cover)
    parts.append(Report("torus h = {f, z}: EL residual", r, el_tol, worst=where))
    return merge("variation theorem", parts)


# ---------------------------------------------------------------------------
# 9. operator identities
# ---------------------------------------------------------------------------

def criterion_9(ctx: Context, pairs=10, tol=1e-8):
    rng = ctx.rng(9)
    torus = ctx.scenario("torus")
    cover = torus.cover
    parts = []
    worst = 0.0
    for _ in range(5):
        v = var.random_polynomial_field((-1, 0), rng)
        h = var.random_polynomial_field((2, 0), rng)
        mu = var.random_polynomial_field((-1, 1), rng, scale=0.05)
        worst = max(worst, var.sup_residual(var.commutator_residual(v, h, mu), cover)[0])
    parts.append(Report("commutation identity on random polynomial fields", worst, tol))
    for name, spec in (("torus", ONSHELL_FAMILY), ("sphere3", None)):
        sc = ctx.scenario(name)
        defm = DeformationData(sc.family(spec=spec))
        r, where = var.sup_residual(var.schwarzian_identity_residual(defm), sc.cover)
        parts.append(Report(f"{name}: dbar_mu {{f, z}} = d^3 mu", r, tol, worst=where))
    defm = DeformationData(torus.family(spec=ONSHELL_FAMILY))
    mu, h = var.mu_field(defm), var.onshell_connection(defm)
    charts = torus.flat_charts()
    cyc = ctx.cycle("torus")
    worst, scale = 0.0, 0.0
    for _ in range(pairs):
        v = var.trig_vector_field(charts, var.random_trig_modes(rng))
        w = var.trig_vector_field(charts, var.random_trig_modes(rng))
        worst = max(worst, abs(var.lie_coboundary(v, w, h, mu, cyc)))
        scale = max(scale, abs(var.lie_action(v, w, h, mu, cyc)))
    parts.append(Report(f"delta c(v, w) for {pairs} trig pairs (on-shell torus)", worst, tol,
                        {"largest |v.c(w)|": scale}))
    return merge("operator identities", parts)


CRITERIA = {
    1: ("D^2 = 0, delta^2 = 0, d'd' = d''d'' = 0 on random inputs", criterion_1, 60.0),
    2: ("fundamental cycle: descent, closedness, second augmentation", criterion_2, None),
    3: ("D Omega = 0 on torus, sphere, genus 2", criterion_3, None),
    4: ("torus closed form S = 8 pi mu h", criterion_4, 10.0),
    5: ("log-branch and torsor gauge invariance", criterion_5, None),
    6: ("pairing duality and A = exp(S / (2 pi i)^2)", criterion_6, None),
    7: ("Euler number -2, sphere Chern number 2, torus 0", criterion_7, 30.0),
    8: ("variation theorem and on-shell EL residual", criterion_8, None),
    9: ("commutation, Schwarzian and Lie cocycle identities", criterion_9, None),
}


def run_criterion(n, ctx: Context = None) -> CriterionResult:
    ctx = Context() if ctx is None else ctx
    title, fn, budget = CRITERIA[n]
    t0 = time.perf_counter()
    rep = fn(ctx)
    return CriterionResult(n, title, rep, time.perf_counter() - t0, budget)


def run_suite(numbers=None, ctx: Context = None, echo=None):
    ctx = Context() if ctx is None else ctx
    out = []
    for n in numbers or sorted(CRITERIA):
        res = run_criterion(n, ctx)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
