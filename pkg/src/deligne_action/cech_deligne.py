"""Čech cochains valued in the smooth Deligne complex Z(p)_D.

A cochain of total degree n has one layer per Deligne degree k = 0..p,
each a Čech (n-k)-cochain: exact integers for k = 0 (the factor
(2 pi i)^p is implicit) and forms of degree k-1 otherwise.  Components on
a tuple are written in the coordinate of its last chart.
"""

from __future__ import annotations

import numpy as np

from .atlas import TWO_PI_I, CoverAtlas
from .fields import FormField, d, pullback, wedge, zero_form
from .jets import Jet
from .report import Report


class CochainError(ValueError):
    pass


def _level(cover: CoverAtlas, q):
    return cover.tuples(q + 1)


class DeligneCochain:
    """Layers {k: {tuple: value}} of a total-degree-n cochain in Z(p)_D."""

    def __init__(self, p, n, layers=None):
        self.p = p
        self.n = n
        self.layers = {k: dict(v) for k, v in (layers or {}).items()}

    def layer(self, k):
        return self.layers.get(k, {})

    def cech_degree(self, k):
        return self.n - k

    def degrees(self):
        return [k for k in range(self.p + 1) if 0 <= self.n - k]

    def __add__(self, other):
        _compatible(self, other)
        out = DeligneCochain(self.p, self.n)
        for k in set(self.layers) | set(other.layers):
            a, b = self.layer(k), other.layer(k)
            merged = {}
            for t in set(a) | set(b):
                if t in a and t in b:
                    merged[t] = a[t] + b[t]
                else:
                    merged[t] = a.get(t, b.get(t))
            out.layers[k] = merged
        return out

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c):
        """Multiply every layer by c (c must be an integer when integer layers are present)."""
        out = DeligneCochain(self.p, self.n)
        for k, comp in self.layers.items():
            if k == 0:
                if int(c) != c:
                    raise CochainError("integer layers only scale by integers")
                out.layers[k] = {t: int(c) * v for t, v in comp.items()}
            else:
                out.layers[k] = {t: v * c for t, v in comp.items()}
        return out

    def __repr__(self):
        sizes = {k: len(v) for k, v in sorted(self.layers.items())}
        return f"DeligneCochain(p={self.p}, n={self.n}, layers={sizes})"


def _compatible(a, b):
    if a.p != b.p or a.n != b.n:
        raise CochainError(f"incompatible cochains (p={a.p}, n={a.n}) and (p={b.p}, n={b.n})")


# ---------------------------------------------------------------------------
# Čech differential
# ---------------------------------------------------------------------------

def _delta_component(comp, t, cover, integer, form_degree):
    """(delta phi)_t for a tuple t of length q+2 from the layer ``comp``."""
    q = len(t) - 2
    if integer:
        total = 0
        for k in range(q + 1):
            total += (-1) ** k * comp.get(t[:k] + t[k + 1:], 0)
        total += (-1) ** (q + 1) * comp.get(t[:-1], 0)
        return total
    parts = []
    for k in range(q + 1):
        face = t[:k] + t[k + 1:]
        if face in comp:
            parts.append((comp[face], (-1) ** k))
    last = t[:-1]
    if last in comp:
        parts.append((pullback(cover.transition(t[-2], t[-1]).holo, comp[last]), (-1) ** (q + 1)))
    return _linear(parts, form_degree)


def _linear(parts, degree):
    if not parts:
        return zero_form(degree)

    def fn(p, n):
        out = None
        for form, c in parts:
            x = form.fn(p, n)
            x = tuple(a * c for a in x) if isinstance(x, tuple) else x * c
            if out is None:
                out = x
            elif isinstance(out, tuple):
                out = (out[0] + x[0], out[1] + x[1])
            else:
                out = out + x
        return out

    return FormField(degree, fn)


def cech_delta_layer(comp: dict, cover: CoverAtlas, q: int, integer=False, form_degree=0):
    """Čech differential of a q-cochain layer, on every declared (q+1)-tuple."""
    out = {}
    for t in _level(cover, q + 1):
        out[t] = _delta_component(comp, t, cover, integer, form_degree)
    return out


def cech_delta(phi: DeligneCochain, cover: CoverAtlas) -> DeligneCochain:
    """Apply the Čech differential to every layer (no signs)."""
    out = DeligneCochain(phi.p, phi.n + 1)
    for k, comp in phi.layers.items():
        q = phi.n - k
        if q + 2 > cover.max_order:
            raise CochainError(f"Čech degree {q + 1} needs intersections of order {q + 2}")
        out.layers[k] = cech_delta_layer(comp, cover, q, integer=(k == 0), form_degree=k - 1)
    return out


# ---------------------------------------------------------------------------
# total differential
# ---------------------------------------------------------------------------

def iota(value, p):
    """Embed an integer of Z(p) as the constant function (2 pi i)^p value."""
    c = complex(TWO_PI_I ** p * value)
    return FormField(0, lambda pts, n: Jet.constant(c, n, pts.shape), f"iota({value})")


def total_D(phi: DeligneCochain, cover: CoverAtlas) -> DeligneCochain:
    """D = d + (-1)^k delta on the Deligne-degree-k layer, with iota on integers."""
    out = DeligneCochain(phi.p, phi.n + 1)
    for k in range(phi.p + 1):
        q_new = phi.n + 1 - k
        if q_new < 0:
            continue
        tuples = _level(cover, q_new) if q_new + 1 <= cover.max_order else []
        comps = {}
        delta = {}
        if k in phi.layers and q_new >= 1:
            delta = cech_delta_layer(phi.layers[k], cover, q_new - 1, integer=(k == 0), form_degree=k - 1)
        below = phi.layers.get(k - 1, {}) if k >= 1 else {}
        for t in tuples:
            if k == 0:
                val = delta.get(t, 0)
                comps[t] = (-1) ** k * val
                continue
            parts = []
            if t in delta:
                parts.append((delta[t], (-1) ** k))
            if t in below:
                src = below[t]
                parts.append((iota(src, phi.p) if k == 1 else d(src), 1))
            comps[t] = _linear(parts, k - 1)
        out.layers[k] = comps
    return out


# ---------------------------------------------------------------------------
# evaluation of residuals
# ---------------------------------------------------------------------------

def form_values(form: FormField, pts):
    v = form(pts)
    return np.asarray(v).ravel()


def layer_residual(comp: dict, cover: CoverAtlas, integer=False, per_triangle=2):
    worst, where = 0.0, None
    for t, val in sorted(comp.items()):
        if integer:
            r = abs(int(val))
        else:
            pts = cover.samples(t, per_triangle)
            r = float(np.max(np.abs(form_values(val, pts)))) if len(pts) else 0.0
        if r > worst:
            worst, where = r, t
    return worst, where


def cochain_residuals(phi: DeligneCochain, cover: CoverAtlas, per_triangle=2):
    """Max |component| per layer at region samples; integer layers exactly."""
    return {k: layer_residual(comp, cover, integer=(k == 0), per_triangle=per_triangle)
            for k, comp in sorted(phi.layers.items())}


def D_squared_residual(phi, cover, per_triangle=2):
    res = cochain_residuals(total_D(total_D(phi, cover), cover), cover, per_triangle)
    forms = max([r for k, (r, _) in res.items() if k > 0], default=0.0)
    ints = max([r for k, (r, _) in res.items() if k == 0], default=0)
    return forms, ints


class DeligneCocycle3(DeligneCochain):
    """(omega_i, a_ij, f_ijk, m_ijkl) in total degree 3 of Z(3)_D."""

    def __init__(self, omega, a, f, m):
        super().__init__(3, 3, {3: omega, 2: a, 1: f, 0: m})

    @classmethod
    def from_cochain(cls, c: DeligneCochain):
        if c.p != 3 or c.n != 3:
            raise CochainError("not a total-degree-3 cochain of Z(3)_D")
        return cls(c.layer(3), c.layer(2), c.layer(1), c.layer(0))

    @property
    def omega(self):
        return self.layers[3]

    @property
    def a(self):
        return self.layers[2]

    @property
    def f(self):
        return self.layers[1]

    @property
    def m(self):
        return self.layers[0]


def verify_cocycle(omega: DeligneCochain, cover: CoverAtlas, tol=1e-8, per_triangle=2) -> Report:
    """Residuals of all components of D(Omega); integer components must vanish exactly."""
    DO = total_D(omega, cover)
    names = {3: "delta omega - d a", 2: "delta a + d f", 1: "delta f - m", 0: "delta m"}
    details, worst, where = {}, 0.0, None
    int_fail = False
    for k, (r, t) in cochain_residuals(DO, cover, per_triangle).items():
        details[names.get(k, f"layer {k}")] = {"residual": float(r), "worst": None if t is None else list(t)}
        if k == 0:
            int_fail = int_fail or r != 0
        elif r > worst:
            worst, where = r, t
    rep = Report("Deligne cocycle", worst if not int_fail else float("inf"), tol, details, where)
    return rep


# ---------------------------------------------------------------------------
# cup product
# ---------------------------------------------------------------------------

def _cup_values(x, kx, px, y, ky, qy):
    """Deligne product of a degree-kx element of Z(px)_D with a degree-ky element of Z(qy)_D."""
    if kx == 0:
        if ky == 0:
            return ("int", x * y)
        return ("form", y * complex(TWO_PI_I ** px * x))
    if ky == qy:
        return ("form", wedge(x, d(y)))
    return None


def cup(a: DeligneCochain, b: DeligneCochain, cover: CoverAtlas) -> DeligneCochain:
    """Cup product Z(p)_D x Z(q)_D -> Z(p+q)_D with the front/back Čech product."""
    p, q = a.p, b.p
    out = DeligneCochain(p + q, a.n + b.n)
    for ka, comp_a in a.layers.items():
        sa = a.n - ka
        for kb, comp_b in b.layers.items():
            sb = b.n - kb
            if kb != q and ka != 0:
                continue
            k = ka + kb
            if k > p + q:
                continue
            length = sa + sb + 1
            if length > cover.max_order:
                continue
            sign = (-1) ** (sa * kb)
            layer = out.layers.setdefault(k, {})
            for t in cover.tuples(length):
                front, back = t[: sa + 1], t[sa:]
                if front not in comp_a or back not in comp_b:
                    continue
                x = comp_a[front]
                if ka > 0 and front[-1] != t[-1]:
                    x = pullback(cover.transition(front[-1], t[-1]).holo, x)
                val = _cup_values(x, ka, p, comp_b[back], kb, q)
                if val is None:
                    continue
                kind, v = val
                if kind == "int":
                    layer[t] = layer.get(t, 0) + sign * v
                else:
                    v = v * sign
                    layer[t] = layer[t] + v if t in layer else v
    return out


def line_bundle_cochain(f: dict, m: dict) -> DeligneCochain:
    """(f_ij, m_ijk) as a total-degree-2 cochain of Z(1)_D (the relation is checked separately)."""
    return DeligneCochain(1, 2, {1: f, 0: m})


def check_line_bundle(L: DeligneCochain, cover, tol=1e-9):
    r = cochain_residuals(total_D(L, cover), cover)
    forms = max([v for k, (v, _) in r.items() if k > 0], default=0.0)
    ints = max([v for k, (v, _) in r.items() if k == 0], default=0)
    if forms > tol or ints:
        raise CochainError(f"line-bundle relation delta f = m violated (residual {forms:.2e})")


def tame_symbol(L: DeligneCochain, L2: DeligneCochain, cover, tol=1e-9, check=True) -> DeligneCochain:
    """(L, L'] = (-f_ij df'_jk, m_ijk f'_kl, m_ijk m'_klp) in total degree 4 of Z(2)_D."""
    if check:
        check_line_bundle(L, cover, tol)
        check_line_bundle(L2, cover, tol)
    return cup(L, L2, cover)


# ---------------------------------------------------------------------------
# exponential
# ---------------------------------------------------------------------------

class MultiplicativeCocycle:
    """(psi_i forms, psi_ij forms, g_ijk invertible functions) from a total-degree-3 cocycle."""

    def __init__(self, top, middle, functions):
        self.top = top
        self.middle = middle
        self.functions = functions


def exp_map(omega: DeligneCochain) -> MultiplicativeCocycle:
    p = omega.p
    scale = TWO_PI_I ** (p - 1)
    top = {t: v * (1 / scale) for t, v in omega.layer(3).items()}
    mid = {t: v * (-1 / scale) for t, v in omega.layer(2).items()}

    def expo(form):
        return FormField(0, lambda pts, n: (form.fn(pts, n) * (1 / scale)).exp())

    funcs = {t: expo(v) for t, v in omega.layer(1).items()}
    return MultiplicativeCocycle(top, mid, funcs)


# ---------------------------------------------------------------------------
# random cochains for identity checks
# ---------------------------------------------------------------------------

def random_form(rng, degree, degree_poly=2, scale=0.5):
    """Random polynomial form in z, zbar with exact jets."""
    def coeffs():
        return (rng.normal(size=(degree_poly + 1, degree_poly + 1))
                + 1j * rng.normal(size=(degree_poly + 1, degree_poly + 1))) * scale

    def poly(c):
        def fn(pts, n):
            z = Jet.variable(pts, n)
            zb = z.conj()
            out = Jet.constant(0.0, n, pts.shape)
            zp = [Jet.constant(1.0, n, pts.shape)]
            zbp = [Jet.constant(1.0, n, pts.shape)]
            for _ in range(degree_poly):
                zp.append(zp[-1] * z)
                zbp.append(zbp[-1] * zb)
            for a in range(degree_poly + 1):
                for b in range(degree_poly + 1 - a):
                    out = out + zp[a] * zbp[b] * c[a, b]
            return out
        return fn

    if degree == 0:
        return FormField(0, poly(coeffs()))
    if degree == 1:
        fa, fb = poly(coeffs()), poly(coeffs())
        return FormField(1, lambda pts, n: (fa(pts, n), fb(pts, n)))
    return FormField(2, poly(coeffs()))


def random_cochain(cover, p, n, rng, int_range=3):
    """Random cochain of total degree n in Z(p)_D over all declared tuples of the right length."""
    c = DeligneCochain(p, n)
    for k in range(p + 1):
        q = n - k
        if q < 0 or q + 1 > cover.max_order:
            continue
        if k == 0:
            c.layers[0] = {t: int(rng.integers(-int_range, int_range + 1)) for t in cover.tuples(q + 1)}
        else:
            c.layers[k] = {t: random_form(rng, k - 1) for t in cover.tuples(q + 1)}
    return c


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def cochain_to_dict(phi: DeligneCochain, cover: CoverAtlas, per_triangle=1):
    """Integers verbatim; forms as sampled tables (nodes in the last chart, coefficient values)."""
    out = {"p": phi.p, "n": phi.n, "layers": {}}
    for k, comp in sorted(phi.layers.items()):
        entries = []
        for t, v in sorted(comp.items()):
            if k == 0:
                entries.append({"tuple": list(t), "value": int(v)})
                continue
            pts = cover.samples(t, per_triangle)
            vals = np.asarray(v(pts))
            entries.append({
                "tuple": list(t),
                "form_degree": k - 1,
                "nodes": [[float(z.real), float(z.imag)] for z in pts],
                "values": [[float(x.real), float(x.imag)] for x in vals.ravel()],
            })
        out["layers"][str(k)] = entries
    return out
