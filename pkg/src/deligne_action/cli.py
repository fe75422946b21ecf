"""Command-line entry point: `deligne-action [flags] <command> [flags]`."""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click
import numpy as np

from .report import Report, merge

SCHEMA = 1
BEGIN = "=== BEGIN REPORT ==="
END = "=== END REPORT ==="


class Settings:
    def __init__(self):
        self.scenario = "torus"
        self.tol = None
        self.emit = None
        self.quad_triangle = None
        self.quad_segment = None
        self.seed = 0
        self._sc = None

    def load(self):
        from .scenario import load_scenario

        if self._sc is None:
            self._sc = load_scenario(self.scenario, self.quad_triangle, self.quad_segment)
        return self._sc

    def tolerance(self, key, default):
        if self.tol is not None:
            return self.tol
        sc = self._sc
        return float(sc.tolerances.get(key, default)) if sc is not None else default

    def rng(self):
        return np.random.default_rng(self.seed)


def _store(name):
    def cb(ctx, param, value):
        if value is not None:
            setattr(ctx.ensure_object(Settings), name, value)
        return value

    return cb


def _attach(f):
    """Turn the shared flags into setters on the Settings object."""
    params = ["scenario", "tol", "emit", "quad_triangle", "quad_segment", "seed"]
    types = [str, float, click.Path(dir_okay=False), int, int, int]
    helps = ["Scenario file or built-in name (default torus).", "Override every tolerance.",
             "Write the JSON report here; figures go alongside.", "Triangle quadrature order.",
             "Segment quadrature order.", "Seed for randomized checks."]
    for name, tp, hp in reversed(list(zip(params, types, helps))):
        f = click.option(f"--{name.replace('_', '-')}", name, type=tp, help=hp, expose_value=False,
                         callback=_store(name))(f)
    return f


def _config_errors():
    from .chains import ChainError
    from .group_cohomology import GroupError
    from .maps import UnknownKind
    from .scenario import ScenarioError

    return (ScenarioError, UnknownKind, ChainError, GroupError, FileNotFoundError, IsADirectoryError)


def command(group, name):
    """Register a subcommand returning (reports, payload, figures) and turn it into a report + exit code."""

    def wrap(fn):
        @group.command(name)
        @_attach
        @click.pass_obj
        @functools.wraps(fn)
        def run(settings, *args, **kwargs):
            try:
                reports, payload, figures = fn(settings, *args, **kwargs)
            except _config_errors() as exc:
                msg = str(exc) if isinstance(exc, OSError) or not exc.args else exc.args[0]
                click.echo(f"error: {msg}", err=True)
                sys.exit(2)
            sys.exit(finish(settings, f"{group.name} {name}".strip() if group is not main else name,
                            reports, payload, figures))

        return run

    return wrap


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        x = float(x)
    if isinstance(x, float) and not np.isfinite(x):
        return str(x)
    return x


def finish(settings: Settings, cmd, reports, payload, figures):
    passed = all(r.passed for r in reports)
    sc = settings._sc
    doc = {
        "schema": SCHEMA,
        "command": cmd,
        "scenario": sc.name if sc is not None else None,
        "seed": settings.seed,
        "passed": passed,
        "checks": [r.to_dict() for r in reports],
        **payload,
    }
    for r in reports:
        click.echo(str(r))
    written = []
    if settings.emit and figures:
        stem = Path(settings.emit)
        for tag, draw in figures:
            try:
                written.append(draw(stem.with_name(f"{stem.stem}_{tag}.png")))
            except Exception as exc:  # a broken figure must not hide the numbers
                click.echo(f"warning: figure {tag} failed: {exc}", err=True)
    doc["figures"] = written
    text = json.dumps(_jsonable(doc), indent=2, sort_keys=False)
    if settings.emit:
        Path(settings.emit).parent.mkdir(parents=True, exist_ok=True)
        Path(settings.emit).write_text(text + "\n")
    click.echo(BEGIN)
    click.echo(text)
    click.echo(END)
    return 0 if passed else 1


@click.group()
@_attach
@click.pass_context
def main(ctx):
    """Deligne-cocycle construction, pairing and checks for the chiral Polyakov action."""
    ctx.ensure_object(Settings)


# ---------------------------------------------------------------------------
# atlas
# ---------------------------------------------------------------------------

@main.group()
def atlas():
    """Cover atlas checks."""


@command(atlas, "verify")
def atlas_verify(settings):
    from .atlas import build_nerve, chern_cocycle, verify_projective_connection, verify_transitions
    from .plotting import plot_cover

    sc = settings.load()
    cover = sc.cover
    reports = [verify_transitions(cover, settings.tolerance("transitions", 1e-12))]
    c, rounding = chern_cocycle(cover)
    reports.append(Report("Chern cocycle rounding", rounding, settings.tolerance("integers", 1e-6)))
    nerve = build_nerve(cover, cover.max_order - 1)
    reports.append(Report("simplicial identities", float(len(nerve.check_simplicial_identities())), 0.0,
                          {"nerve_counts": nerve.counts()}))
    h = sc.connection()
    reports.append(verify_projective_connection(cover, {i: h.values(i) for i in cover.ids},
                                                settings.tolerance("identities", 1e-10)))
    payload = {"chern_cocycle": [[list(t), v] for t, v in sorted(c.items())]}
    return reports, payload, [("cover", lambda p: plot_cover(sc, p))]


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------

@main.group()
def chains():
    """Fundamental-class cycles."""


@command(chains, "fundamental")
def chains_fundamental(settings):
    from .chains import area_of_cycle, build_fundamental_class, second_augmentation
    from .plotting import plot_cover, plot_fundamental_cycle
    from .suite import nerve_boundary

    sc = settings.load()
    cyc = build_fundamental_class(sc.cover, sc.faces)
    reports = [Report(f"descent {k}", float(len(v)), 0.0) for k, v in cyc.descent_residuals().items()]
    aug = {t: v for t, v in second_augmentation(cyc.total()).items() if len(t) == 3}
    mism = sum(abs(aug.get(t, 0) - cyc.eps.get(t, 0)) for t in set(aug) | set(cyc.eps))
    reports.append(Report("second augmentation = sum eps Delta", float(mism), 0.0))
    reports.append(Report("nerve 2-cycle", float(len(nerve_boundary(cyc.eps))), 0.0))
    area = area_of_cycle(cyc, sc.area_density(), sc.quad).real
    reports.append(Report("area of the first augmentation", abs(area - sc.expected_area()),
                          settings.tolerance("forms", 1e-8), {"area": area, "expected": sc.expected_area()}))
    figures = [("cycle", lambda p: plot_fundamental_cycle(cyc, p)), ("cover", lambda p: plot_cover(sc, p))]
    return reports, {"cycle": cyc.to_dict()}, figures


# ---------------------------------------------------------------------------
# polyakov
# ---------------------------------------------------------------------------

@main.group()
def polyakov():
    """The Lagrangian cocycle and the action."""


def _lagrangian(sc):
    from .polyakov import DeformationData, build_lagrangian_cocycle

    defm = DeformationData(sc.family())
    sc.check_mu(defm.family)
    h = sc.connection()
    return defm, h, build_lagrangian_cocycle(defm, h)


@command(polyakov, "build")
def polyakov_build(settings):
    from .cech_deligne import cochain_to_dict

    sc = settings.load()
    defm, h, lag = _lagrangian(sc)
    reports = [defm.verify(settings.tolerance("forms", 1e-8)),
               lag.triv.verify(settings.tolerance("forms", 1e-8)),
               lag.verify(settings.tolerance("forms", 1e-8))]
    payload = {"ledger": lag.ledger.to_dict(),
               "m": [[list(t), int(v)] for t, v in sorted(lag.m.items())],
               "cocycle": cochain_to_dict(lag.cocycle, sc.cover)}
    return reports, payload, []


@command(polyakov, "action")
def polyakov_action(settings):
    from .chains import build_fundamental_class
    from .pairing import action

    sc = settings.load()
    defm, h, lag = _lagrangian(sc)
    cyc = build_fundamental_class(sc.cover, sc.faces)
    av = action(defm, h, cycle=cyc, rule=sc.quad, lagrangian=lag)
    reports = [lag.verify(settings.tolerance("forms", 1e-8)),
               Report("A = exp(S / (2 pi i)^2)", av.consistency, settings.tol or 1e-12)]
    payload = {"action": av.to_dict()}
    closed = _closed_form(sc)
    if closed is not None:
        rel = abs(av.S_raw - closed) / abs(closed)
        reports.append(Report("S = 8 pi mu h", rel, settings.tol or 1e-8))
        payload["closed_form"] = closed
    return reports, payload, []


def _closed_form(sc):
    """8 pi mu h when the scenario is the flat torus with constant mu and h, else None."""
    dfm, hh = sc.raw.get("deformation", {}), sc.raw.get("h", {})
    if sc.metric != "flat" or dfm.get("kind") != "affine_beltrami" or dfm.get("modes") or hh.get("kind") != "constant":
        return None
    if sc.flat_charts().exp_charts:
        return None
    from .maps import _cplx
    from .suite import closed_form_torus

    return complex(closed_form_torus(_cplx(dfm.get("mu", 0.0)), _cplx(hh.get("value", 0.0))))


# ---------------------------------------------------------------------------
# pairing
# ---------------------------------------------------------------------------

@command(main, "pair")
@click.option("--count", default=10, show_default=True, help="Number of random gauge cochains.")
def pair(settings, count):
    """Pairing duality: <D lambda, 'Sigma> vanishes and boundaries do not change S."""
    from .cech_deligne import random_cochain, total_D
    from .chains import build_fundamental_class, shift_cycle, total_boundary
    from .pairing import distance_mod, pair_total_additive, random_chain

    sc = settings.load()
    rng = settings.rng()
    cyc = build_fundamental_class(sc.cover, sc.faces)
    shifted = shift_cycle(cyc)
    tol = settings.tolerance("forms", 1e-8)
    worst = 0.0
    for _ in range(count):
        lam = random_cochain(sc.cover, 3, 2, rng)
        worst = max(worst, distance_mod(pair_total_additive(total_D(lam, sc.cover), shifted, cyc.geometry, sc.quad)))
    reports = [Report(f"<D lambda, 'Sigma> mod Z(3), {count} draws", worst, tol)]
    _, _, lag = _lagrangian(sc)
    s0 = pair_total_additive(lag.cocycle, shifted, cyc.geometry, sc.quad)
    moved = cyc.total() + total_boundary(random_chain(sc.cover, 3, rng))
    s1 = pair_total_additive(lag.cocycle, shift_cycle(moved), cyc.geometry, sc.quad)
    reports.append(Report("S unchanged by adding a boundary", distance_mod(s1 - s0), tol))
    return reports, {"S": s0}, []


# ---------------------------------------------------------------------------
# fuchsian
# ---------------------------------------------------------------------------

@main.group()
def fuchsian():
    """Group-side computations on a Fuchsian (or lattice) uniformization."""


def _group(settings, genus):
    from .group_cohomology import FuchsianGroup, lattice_group, octagon_group

    if genus == 1:
        return lattice_group()
    if genus == 2:
        return octagon_group()
    if genus is None:
        return FuchsianGroup.from_scenario(settings.load())
    raise click.BadParameter("built-in groups exist for genus 1 and 2; use --scenario for others")


@command(fuchsian, "euler")
@click.option("--genus", type=int, default=None, help="1: square lattice, 2: regular octagon group.")
def fuchsian_euler(settings, genus):
    from .group_cohomology import build_polygon_cycle, euler_number
    from .plotting import plot_polygon_cycle

    g = _group(settings, genus)
    cyc = build_polygon_cycle(g)
    e = euler_number(g, cyc)
    expected = 2 - 2 * g.genus
    reports = [Report("polygon cycle closed", 0.0 if cyc.is_cycle() else 1.0, 0.0),
               Report(f"Euler number = 2 - 2g = {expected}", float(abs(e - expected)), 0.0, {"value": e})]
    click.echo(f"euler_number: {e}")
    return reports, {"euler_number": e, "genus": g.genus}, [("polygon", lambda p: plot_polygon_cycle(cyc, p))]


@command(fuchsian, "verify")
@click.option("--genus", type=int, default=None, help="1: square lattice, 2: regular octagon group.")
def fuchsian_verify(settings, genus):
    from .group_cohomology import build_polygon_cycle, polygon_area, translate_lagrangian

    g = _group(settings, genus)
    reports = [g.verify(settings.tol)]
    cyc = build_polygon_cycle(g)
    reports.append(Report("polygon cycle closed", 0.0 if cyc.is_cycle() else 1.0, 0.0))
    area = polygon_area(cyc)
    expected = 4 * np.pi * (g.genus - 1) if not g.plane else area
    reports.append(Report("area = 4 pi (g - 1)", abs(area - expected), 1e-9, {"area": area}))
    if not g.plane:
        reports.append(translate_lagrangian(g).verify(settings.rng()))
    return reports, {"genus": g.genus, "elements_registered": len(g.elements)}, []


# ---------------------------------------------------------------------------
# vary
# ---------------------------------------------------------------------------

@main.group()
def vary():
    """Vertical variations and the Euler-Lagrange locus."""


@command(vary, "check")
@click.option("--probe-h", is_flag=True, help="Use a periodic h whose modes meet the variation's, so int a != 0.")
def vary_check(settings, probe_h):
    from . import variation as var
    from .plotting import plot_fd_convergence

    sc = settings.load()
    h = var.probe_connection(sc) if probe_h else None
    rep = var.fd_variation_check(sc, h=h, tol=settings.tol or 1e-4)
    return [rep], {"variation": rep.details}, [("fd", lambda p: plot_fd_convergence(rep.details, p))]


@command(vary, "el")
def vary_el(settings):
    from . import variation as var
    from .polyakov import DeformationData

    sc = settings.load()
    defm = DeformationData(sc.family())
    tol = settings.tol or 1e-10
    mu = var.mu_field(defm)
    r, where = var.sup_residual(var.el_residual(var.h_field(sc.connection()), mu), sc.cover)
    # the scenario's own h need not be on-shell; this is reported, not enforced
    info = {"scenario_h_residual": r, "scenario_h_worst_chart": where}
    r2, w2 = var.sup_residual(var.el_residual(var.onshell_connection(defm), mu), sc.cover)
    reports = [Report("EL residual for h = {f, z}", r2, tol, worst=w2)]
    return reports, info, []


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

@command(main, "suite")
@click.option("--only", multiple=True, type=int, help="Run only these criteria (repeatable).")
def suite_cmd(settings, only):
    """Run the numbered acceptance criteria."""
    from .plotting import plot_suite
    from .suite import Context, run_suite

    ctx = Context(settings.seed, settings.quad_triangle, settings.quad_segment)
    results = run_suite(list(only) or None, ctx, echo=click.echo)
    reports = []
    for res in results:
        rep = res.report
        if res.budget is not None:
            rep = merge(rep.name, [rep, Report("runtime", res.seconds, res.budget)])
        rep.name = f"criterion {res.number}: {res.title}"
        reports.append(rep)
    payload = {"criteria": [r.to_dict() for r in results]}
    if settings.scenario:
        sc = settings.load()
        closed = _closed_form(sc)
        if closed is not None:
            from .chains import build_fundamental_class
            from .pairing import action

            defm, h, lag = _lagrangian(sc)
            av = action(defm, h, cycle=build_fundamental_class(sc.cover, sc.faces), rule=sc.quad, lagrangian=lag)
            rel = abs(av.S_raw - closed) / abs(closed)
            reports.append(Report(f"{sc.name}: S = 8 pi mu h", rel, 1e-8))
            payload["closed_form"] = {"S": av.S_raw, "8 pi mu h": closed, "rel_error": rel}
    return reports, payload, [("suite", lambda p: plot_suite(results, p))]


if __name__ == "__main__":
    main()
