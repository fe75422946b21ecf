"""Loading scenario files (TOML or JSON) into atlases, families and connections."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import deformations as dfm
from .atlas import Chart, CoverAtlas, Transition
from .maps import UnknownKind, _cplx, from_dict
from .quadrature import QuadratureRule
from .regions import Region

MU_LIMIT = 0.95
BUILTIN = ("torus", "sphere3", "annulus_synthetic", "genus2_octagon")


class ScenarioError(ValueError):
    """Malformed scenario; the message starts with the offending key path."""


def builtin_path(name):
    stem = name[:-5] if name.endswith(".toml") else name
    return resources.files("deligne_action") / "scenarios" / f"{stem}.toml"


def _read(path):
    p = Path(str(path))
    if not p.exists() and not p.is_absolute() and p.suffix in ("", ".toml"):
        alt = builtin_path(p.name)
        if alt.is_file():
            p = Path(str(alt))
    text = p.read_text()
    try:
        if p.suffix == ".json":
            return json.loads(text), p
        return tomllib.loads(text), p
    except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"{p}: parse error: {exc}") from exc


def _need(d, key, path):
    try:
        return d[key]
    except (KeyError, TypeError):
        raise ScenarioError(f"{path}.{key}: missing") from None


def _poly(raw, path):
    try:
        return Region([_cplx(v) for v in raw])
    except (TypeError, ValueError, IndexError) as exc:
        raise ScenarioError(f"{path}: bad polygon ({exc})") from exc


@dataclass
class Scenario:
    name: str
    raw: dict
    cover: CoverAtlas
    chart_maps: dict
    faces: list
    quad: QuadratureRule
    tolerances: dict
    path: str = ""
    metric: str = "flat"
    deck: dict = field(default_factory=dict)

    # analytic pieces ------------------------------------------------------
    @property
    def model(self):
        return self.raw.get("model", {})

    def flat_charts(self):
        if self.metric != "flat":
            raise ScenarioError(f"model.kind: flat charts requested on a {self.metric} scenario")
        centers = {c["id"]: _cplx(c["center"]) for c in self.raw["charts"]}
        return dfm.FlatCharts(centers, self.model.get("exp_charts", []), float(self.model.get("scale", 1.0)))

    def family(self, t=0.0, spec=None):
        spec = self.raw.get("deformation", {"kind": "identity"}) if spec is None else spec
        kind = spec.get("kind")
        if kind == "identity":
            fam = dfm.IdentityFamily(self.cover)
        elif kind == "affine_beltrami":
            vmodes = self.raw.get("variation", {}).get("modes", [])
            fam = dfm.AffineBeltramiFamily(self.cover, self.flat_charts(), self.deck,
                                           _cplx(spec.get("mu", 0.0)), spec.get("modes", []), vmodes, t)
        elif kind == "sphere_flow":
            rots = {i: dfm.rotation_of(m) for i, m in self.chart_maps.items()}
            fam = dfm.SphereFlowFamily(self.cover, rots, float(spec.get("epsilon", 0.0)), t)
        else:
            raise UnknownKind(f"deformation.kind: unknown analytic kind {kind!r}")
        return fam

    def check_mu(self, fam=None):
        fam = self.family() if fam is None else fam
        sup = fam.mu_sup()
        if sup > MU_LIMIT:
            raise ScenarioError(f"deformation: sup |mu| = {sup:.3f} exceeds {MU_LIMIT}")
        return sup

    def connection(self, spec=None):
        spec = self.raw.get("h", {"kind": "zero"}) if spec is None else spec
        kind = spec.get("kind")
        if kind == "zero":
            return dfm.zero_connection()
        if kind in ("constant", "trig"):
            return dfm.flat_connection(self.flat_charts(), _cplx(spec.get("value", 0.0)), spec.get("modes", []))
        if kind == "sphere_quartic":
            inv = {i: np.linalg.inv(m.m) for i, m in self.chart_maps.items()}
            return dfm.sphere_quartic_connection(inv, _cplx(spec["k1"]), _cplx(spec["k2"]))
        raise UnknownKind(f"h.kind: unknown analytic kind {kind!r}")

    def area_density(self):
        """Conformal density rho with the model metric rho |dz|^2 in every chart."""
        if self.metric == "round":
            return lambda i, z: 4 / (1 + z * z.conj()) ** 2
        if self.metric == "hyperbolic":
            return lambda i, z: 4 / (1 - z * z.conj()) ** 2
        charts = self.flat_charts()
        s = charts.s
        return lambda i, z: (1 / (s * s * z * z.conj()) if i in charts.exp_charts else z * 0 + 1)

    def expected_area(self):
        return {"flat": 1.0, "round": 4 * np.pi, "hyperbolic": 4 * np.pi}[self.metric]


def load_scenario(path, triangle_order=None, segment_order=None) -> Scenario:
    raw, p = _read(path)
    return scenario_from_dict(raw, str(p), triangle_order, segment_order)


def scenario_from_dict(raw, path="<dict>", triangle_order=None, segment_order=None) -> Scenario:
    metric = raw.get("metric", "flat")
    if metric not in ("flat", "round", "hyperbolic"):
        raise UnknownKind(f"metric: unknown kind {metric!r}")
    charts, chart_maps = [], {}
    for n, c in enumerate(_need(raw, "charts", "")):
        cid = int(_need(c, "id", f"charts[{n}]"))
        charts.append(Chart(cid, _poly(_need(c, "polygon", f"charts[{n}]"), f"charts[{n}].polygon"),
                            c.get("label", "")))
        if "map" in c:
            chart_maps[cid] = from_dict(c["map"], f"charts[{n}].map")
    inter = {(c.id,): c.domain for c in charts}
    for n, e in enumerate(raw.get("intersections", [])):
        t = tuple(int(x) for x in _need(e, "tuple", f"intersections[{n}]"))
        if list(t) != sorted(set(t)):
            raise ScenarioError(f"intersections[{n}].tuple: indices must be strictly increasing")
        inter[t] = _poly(_need(e, "polygon", f"intersections[{n}]"), f"intersections[{n}].polygon")
    trans, deck = {}, {}
    for n, e in enumerate(raw.get("transitions", [])):
        i, j = int(_need(e, "to", f"transitions[{n}]")), int(_need(e, "from", f"transitions[{n}]"))
        if (i, j) not in inter:
            raise ScenarioError(f"transitions[{n}]: no intersection declared for {(i, j)}")
        holo = from_dict(_need(e, "map", f"transitions[{n}]"), f"transitions[{n}].map")
        trans[(i, j)] = Transition(i, j, holo, inter[(i, j)], e.get("branch_shift", 0))
        if "deck" in e and metric == "flat":
            deck[(i, j)] = _cplx(e["deck"])
    seeds = {tuple(int(x) for x in k.split(",")): _cplx(v) for k, v in raw.get("seeds", {}).items()}
    quad = raw.get("quad", {})
    rule = QuadratureRule(int(triangle_order or quad.get("triangle_order", 10)),
                          int(segment_order or quad.get("segment_order", 16)))
    cover = CoverAtlas(charts, trans, inter, int(raw.get("max_order", 5)), seeds, raw.get("name", ""))
    faces = [tuple(sorted(int(x) for x in f)) for f in raw.get("faces", [])]
    for f in faces:
        if f not in inter:
            raise ScenarioError(f"faces: {f} is not a declared triple intersection")
    for key in ("deformation", "h", "variation"):
        if key in raw and "kind" not in raw[key]:
            raise ScenarioError(f"{key}.kind: missing")
    sc = Scenario(raw.get("name", Path(path).stem), raw, cover, chart_maps, faces, rule,
                  dict(raw.get("tolerances", {})), path, metric, deck)
    _validate_kinds(sc)
    return sc


def _validate_kinds(sc):
    known = {
        "deformation": {"identity", "affine_beltrami", "sphere_flow"},
        "h": {"zero", "constant", "trig", "sphere_quartic"},
        "variation": {"trig", "flow", "none"},
    }
    for key, kinds in known.items():
        if key in sc.raw and sc.raw[key]["kind"] not in kinds:
            raise UnknownKind(f"{key}.kind: unknown analytic kind {sc.raw[key]['kind']!r}")


def load_builtin(name, **kw) -> Scenario:
    return load_scenario(str(builtin_path(name)), **kw)
