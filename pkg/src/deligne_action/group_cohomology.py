"""Deck-group cochains on the upper half plane and the 4g-gon fundamental cycle.

Group elements act on the left by Moebius maps.  A q-cochain assigns to
each q-tuple (g1, ..., gq) a form on H (or an integer), and the coboundary
is read from right to left, so that (g1, ..., gq; z) corresponds to a
Cech tuple whose charts are chained by z_{k-1} = g_k(z_k):

    (delta phi)_{g1..gq} = phi_{g2..gq} + sum_i (-1)^i phi_{..g_i g_{i+1}..}
                           + (-1)^q g_q^* phi_{g1..g_{q-1}}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .atlas import TWO_PI_I
from .fields import FanTriangle, FormField, Path, area_form, d, integrate, pullback
from .jets import Jet
from .maps import Mobius
from .quadrature import QuadratureRule
from .regions import continue_log
from .report import Report, merge


class GroupError(ValueError):
    pass


class DescentError(GroupError):
    def __init__(self, message, residual):
        super().__init__(f"{message}: {len(residual)} residual terms")
        self.residual = residual


def mobius(m, z):
    m = np.asarray(m)
    z = np.asarray(z, dtype=complex)
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def mobius_deriv(m, z):
    """Derivative 1/(cz+d)^2 of a unit-determinant Moebius map."""
    m = np.asarray(m)
    z = np.asarray(z, dtype=complex)
    return 1.0 / (m[1, 0] * z + m[1, 1]) ** 2


def _canonical(m, tol=1e-9):
    """The lift with c > 0, or c = 0 and Re d > 0."""
    m = np.array(m, dtype=complex)
    m = m / np.sqrt(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    c, dd = m[1, 0], m[1, 1]
    scale = np.max(np.abs(m))
    if abs(c) > tol * scale:
        flip = (c.real < 0) if abs(c.real) >= abs(c.imag) else (c.imag < 0)
    else:
        flip = dd.real < 0
    return -m if flip else m


class GroupElement:
    """A registered element of the group; equality is identity within the registry."""

    def __init__(self, index, matrix, word):
        self.index = index
        self.matrix = matrix
        self.word = word
        self.map = Mobius.from_matrix(matrix)

    def __repr__(self):
        return self.word or "e"

    def __call__(self, z):
        return mobius(self.matrix, z)

    def deriv(self, z):
        return mobius_deriv(self.matrix, z)

    @property
    def trace(self):
        return complex(self.matrix[0, 0] + self.matrix[1, 1])


class FuchsianGroup:
    """A finitely generated group of Moebius maps with a single relator.

    ``plane=True`` allows complex translations acting on C (a lattice deck
    group); the hyperbolicity checks are then skipped.
    """

    def __init__(self, generators, names, relator, genus, vertices=None, side_pairing=None,
                 center=None, plane=False, tol=1e-10):
        self.names = list(names)
        self.genus = int(genus)
        self.plane = plane
        self.tol = tol
        self._elements = []
        self.identity = self._register(np.eye(2), "")
        self.generators = [self._register(np.asarray(g, dtype=complex), n) for g, n in zip(generators, names)]
        self.by_name = dict(zip(self.names, self.generators))
        for g, n in zip(list(self.generators), self.names):
            self.by_name[n[0].upper() + n[1:]] = self.inverse(g)
        self.relator = list(relator)
        self.vertices = None if vertices is None else [complex(v) for v in vertices]
        self.side_pairing = None if side_pairing is None else [tuple(map(int, p)) for p in side_pairing]
        self.center = None if center is None else complex(center)

    @classmethod
    def from_dict(cls, raw, **kw):
        def cplx(v):
            return complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)

        gens = [np.array([[cplx(x) for x in row] for row in g]) for g in raw["generators"]]
        return cls(gens, raw["names"], raw["relator"], raw["genus"],
                   vertices=[cplx(v) for v in raw.get("vertices", [])] or None,
                   side_pairing=raw.get("side_pairing"),
                   center=cplx(raw["center"]) if "center" in raw else None,
                   plane=raw.get("plane", False), **kw)

    @classmethod
    def from_scenario(cls, sc, **kw):
        if "group" not in sc.raw:
            raise GroupError(f"scenario {sc.name} has no [group] section")
        return cls.from_dict(sc.raw["group"], **kw)

    # registry -----------------------------------------------------------
    def _register(self, m, word):
        m = _canonical(m)
        for e in self._elements:
            if np.max(np.abs(e.matrix - m)) < 1e-8 * max(1.0, np.max(np.abs(m))):
                return e
        e = GroupElement(len(self._elements), m, word)
        self._elements.append(e)
        return e

    @property
    def elements(self):
        return list(self._elements)

    def mul(self, g, h):
        if g is self.identity:
            return h
        if h is self.identity:
            return g
        return self._register(g.matrix @ h.matrix, g.word + h.word)

    def inverse(self, g):
        (a, b), (c, dd) = g.matrix
        word = "".join(_invert_letter(x) for x in reversed(_letters(g.word)))
        return self._register(np.array([[dd, -b], [-c, a]]), word)

    def word(self, letters):
        if isinstance(letters, str):
            letters = _letters(letters)
        out = self.identity
        for x in letters:
            if x not in self.by_name:
                raise GroupError(f"unknown generator {x!r}")
            out = self.mul(out, self.by_name[x])
        return out

    def random_element(self, rng, max_length=3):
        n = int(rng.integers(0, max_length + 1))
        pool = sorted(self.by_name)
        return self.word([pool[int(rng.integers(len(pool)))] for _ in range(n)])

    # checks -------------------------------------------------------------
    def verify(self, tol=None) -> Report:
        tol = self.tol if tol is None else tol
        m = np.eye(2, dtype=complex)
        for x in self.relator:
            m = m @ self.by_name[x].matrix
        rel = min(np.max(np.abs(m - np.eye(2))), np.max(np.abs(m + np.eye(2))))
        reports = [Report("relator", float(rel), tol)]
        dets = max(abs(np.linalg.det(g.matrix) - 1) for g in self.generators)
        reports.append(Report("unit determinant", float(dets), tol))
        if not self.plane:
            real = max(float(np.max(np.abs(g.matrix.imag))) for g in self.generators)
            reports.append(Report("real matrices", real, tol))
            margin = min(abs(g.trace) for g in self.generators) - 2
            reports.append(Report("hyperbolic generators", 0.0 if margin > 0 else float(-margin) + 1, tol,
                                  {"min_abs_trace": margin + 2}))
        if self.vertices is not None and self.side_pairing is not None:
            reports.append(self.side_pairing_report(tol))
        return merge("fuchsian group", reports, tol)

    def side_maps(self):
        """For every side k, the element g_k carrying side k onto its partner m with reversed orientation."""
        v = self.vertices
        n = len(v)
        out = {}
        cands = list(self.by_name.values())
        for k, m in self.side_pairing:
            best = None
            for g in cands:
                err = max(abs(g(v[k]) - v[(m + 1) % n]), abs(g(v[(k + 1) % n]) - v[m]))
                if best is None or err < best[0]:
                    best = (err, g)
            out[k] = (m, best[1], best[0])
        return out

    def side_pairing_report(self, tol=1e-10):
        maps = self.side_maps()
        worst = max(maps.items(), key=lambda kv: kv[1][2])
        return Report("side pairing", float(worst[1][2]), tol, {"sides": len(maps)}, worst=f"side {worst[0]}")

    def sample_points(self, per_ray=3):
        """Points of the fundamental polygon: on segments from the center toward each vertex."""
        if self.vertices is None or self.center is None:
            return np.array([1j, 0.3 + 1.2j, -0.4 + 0.8j])
        fr = np.linspace(0.15, 0.85, per_ray)
        pts = [self.center] + [self.center + t * (v - self.center) for v in self.vertices for t in fr]
        return np.array(pts)


def _letters(word):
    out = []
    for ch in word:
        if ch.isalpha():
            out.append(ch)
        else:
            out[-1] += ch
    return out


def _invert_letter(x):
    return x[0].lower() + x[1:] if x[0].isupper() else x[0].upper() + x[1:]


# ---------------------------------------------------------------------------
# cochains and the coboundary
# ---------------------------------------------------------------------------

@dataclass
class GroupCochain:
    """q-cochain; ``fn(elements)`` returns a FormField, or an int when ``integer``."""

    q: int
    fn: object
    degree: int = 0
    integer: bool = False
    label: str = ""

    def __call__(self, elements):
        elements = tuple(elements)
        if len(elements) != self.q:
            raise GroupError(f"{self.label or 'cochain'} has degree {self.q}, got {len(elements)} elements")
        return self.fn(elements)

    def __sub__(self, other):
        return GroupCochain(self.q, lambda e: self(e) - other(e), self.degree, self.integer)


def group_delta(phi: GroupCochain, group: FuchsianGroup) -> GroupCochain:
    q = phi.q

    def fn(el):
        out = phi(el[1:])
        for i in range(1, q + 1):
            merged = el[:i - 1] + (group.mul(el[i - 1], el[i]),) + el[i + 1:]
            out = out + (-1) ** i * phi(merged)
        last = phi(el[:q])
        if not phi.integer:
            last = pullback(el[q].map, last)
        return out + (-1) ** (q + 1) * last

    return GroupCochain(q + 1, fn, phi.degree, phi.integer, f"delta({phi.label})")


def _form_values(form, points):
    if isinstance(form, (int, np.integer, float, complex)):
        return np.full(len(points), complex(form))
    v = form(points)
    return np.abs(v).max(axis=0) if form.degree == 1 else np.abs(v)


def cochain_residual(phi: GroupCochain, tuples, points):
    """Largest |phi| over the given element tuples and sample points."""
    worst, where = 0.0, None
    for el in tuples:
        r = float(np.max(_form_values(phi(el), points)))
        if r > worst:
            worst, where = r, el
    return worst, where


def random_tuples(group, q, rng, count=8, max_length=3):
    return [tuple(group.random_element(rng, max_length) for _ in range(q)) for _ in range(count)]


def random_group_cochain(group, q, rng, degree=0):
    """Smooth q-cochain with coefficients depending on the element matrices."""
    coef = rng.normal(size=(q, 4)) + 1j * rng.normal(size=(q, 4))

    def fn(el):
        weights = [complex(np.dot(coef[k], e.matrix.ravel())) / np.linalg.norm(e.matrix) for k, e in enumerate(el)]
        a = 0.3 + 0.1 * sum(weights)
        b = 0.2 - 0.05 * sum(w * (k + 1) for k, w in enumerate(weights))

        def f(p, n):
            z = Jet.variable(p, n)
            g = (z * a + b * z * z.conj()).exp() if degree == 0 else z * a + z.conj() * b
            if degree == 0:
                return g
            if degree == 1:
                return (g, g * z)
            return g * z.conj()

        return FormField(degree, f)

    return GroupCochain(q, fn, degree)


# ---------------------------------------------------------------------------
# rotation numbers, log gamma' and the Euler cocycle
# ---------------------------------------------------------------------------

def rotation_number(g: GroupElement, z, base=1j):
    """Continuous argument w(g)(z) of cz + d, continued from ``base`` where it is principal."""
    (_, _), (c, dd) = g.matrix
    if abs(c) < 1e-14:
        return np.full(np.shape(z), np.angle(dd), dtype=float)
    vals = lambda p: c * p + dd
    b0 = np.log(complex(vals(np.array([base]))[0]))
    logs = continue_log(vals, base, b0, np.atleast_1d(z))
    return logs.imag.reshape(np.shape(z))


def log_automorphy(g: GroupElement, z, base=1j):
    """log(cz + d) on the rotation-number branch."""
    (_, _), (c, dd) = g.matrix
    z = np.asarray(z, dtype=complex)
    return np.log(np.abs(c * z + dd)) + 1j * rotation_number(g, z, base)


def euler_cocycle(group, g1, g2, z, tol=1e-8):
    """Integer c_{g1,g2}/(2 pi i) = -(w(g2) - w(g1 g2) + w(g1) o g2) / pi, constant in z."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    g12 = group.mul(g1, g2)
    dw = rotation_number(g2, z) - rotation_number(g12, z) + rotation_number(g1, g2(z))
    c = -dw / np.pi
    k = np.rint(c)
    if np.max(np.abs(c - k)) > tol or np.any(k != k[0]):
        raise GroupError(f"euler cocycle of ({g1}, {g2}) is not a constant integer: {c}")
    return int(k[0])


def euler_cochain(group, points=None) -> GroupCochain:
    pts = group.sample_points() if points is None else points
    cache = {}

    def fn(el):
        key = tuple(e.index for e in el)
        if key not in cache:
            cache[key] = euler_cocycle(group, el[0], el[1], pts)
        return cache[key]

    return GroupCochain(2, fn, integer=True, label="c")


def log_derivative_cochain(group, principal=False) -> GroupCochain:
    """{log g'} as a 1-cochain of functions.

    The default branch is -2 log(cz+d) on the rotation-number branch; with
    ``principal`` the value at i is the principal log of g'(i), continued.
    """
    def fn(el):
        g = el[0]
        (_, _), (c, dd) = g.matrix

        def f(p, n):
            z = Jet.variable(p, n)
            j = z * c + dd
            if principal:
                base = np.log(complex(g.deriv(1j)))
                branch = continue_log(lambda x: mobius_deriv(g.matrix, x), 1j, base, p)
                return (j * j).reciprocal().log(branch)
            return j.log(log_automorphy(g, p)) * -2.0

        return FormField(0, f, f"log {g}'")

    return GroupCochain(1, fn, label="log g'")


def integer_cochain_from(lcochain: GroupCochain, group, points=None, tol=1e-8) -> GroupCochain:
    """(delta l)/(2 pi i) rounded, checked integral and constant on the sample points."""
    pts = group.sample_points() if points is None else points
    dl = group_delta(lcochain, group)

    def fn(el):
        v = dl(el)(pts) / TWO_PI_I
        k = np.rint(v.real)
        if np.max(np.abs(v - k)) > tol or np.any(k != k[0]):
            raise GroupError(f"delta log g' on {el} is not a constant integer")
        return int(k[0])

    return GroupCochain(2, fn, integer=True, label="delta log g'/2 pi i")


# ---------------------------------------------------------------------------
# the polygon cycle
# ---------------------------------------------------------------------------

class GroupChain:
    """Integer combination of (element tuple, simplex) terms; simplices are vertex tuples in H."""

    def __init__(self):
        self.terms = {}

    def add(self, elements, simplex, coeff=1):
        """Simplices are stored with sorted vertices; reordering contributes its sign."""
        simplex = tuple(simplex)
        if coeff == 0 or len(set(simplex)) != len(simplex):
            return self
        order = sorted(range(len(simplex)), key=lambda k: (simplex[k].real, simplex[k].imag))
        inv = sum(1 for a in range(len(order)) for b in range(a + 1, len(order)) if order[a] > order[b])
        coeff = (-1) ** inv * int(coeff)
        key = (tuple(elements), tuple(simplex[k] for k in order))
        c = self.terms.get(key, 0) + int(coeff)
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)
        return self

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: repr(kv[0])))

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        out = GroupChain()
        for src in (self, other):
            for (el, s), c in src.terms.items():
                out.add(el, s, c)
        return out

    def __neg__(self):
        out = GroupChain()
        for (el, s), c in self.terms.items():
            out.add(el, s, -c)
        return out

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return not self.terms

    def to_list(self):
        return [{"elements": [repr(e) for e in el], "simplex": [[v.real, v.imag] for v in s], "coeff": c}
                for (el, s), c in self]


class PointSnap:
    """Identifies points that agree to a tolerance, so exact chain arithmetic sees one vertex."""

    def __init__(self, tol=1e-8):
        self.tol = tol
        self.points = []

    def __call__(self, z):
        z = complex(z)
        for p in self.points:
            if abs(p - z) <= self.tol * max(1.0, abs(z)):
                return p
        self.points.append(z)
        return z


def chain_boundary_prime(c: GroupChain) -> GroupChain:
    out = GroupChain()
    for (el, s), coeff in c.terms.items():
        if len(s) > 1:
            for k in range(len(s)):
                out.add(el, s[:k] + s[k + 1:], (-1) ** k * coeff)
    return out


def chain_boundary_second(c: GroupChain, group: FuchsianGroup, snap: PointSnap) -> GroupChain:
    """Dual of the right-to-left coboundary: the last face moves the simplex by g_q."""
    out = GroupChain()
    for (el, s), coeff in c.terms.items():
        q = len(el)
        if q == 0:
            continue
        out.add(el[1:], s, coeff)
        for i in range(1, q):
            out.add(el[:i - 1] + (group.mul(el[i - 1], el[i]),) + el[i + 1:], s, (-1) ** i * coeff)
        moved = tuple(snap(el[-1](v)) for v in s)
        out.add(el[:-1], moved, (-1) ** q * coeff)
    return out


@dataclass
class PolygonCycle:
    F: GroupChain
    sigma1: GroupChain
    sigma2: GroupChain
    group: FuchsianGroup
    apex: complex
    snap: PointSnap = field(repr=False, default=None)

    def total(self):
        return self.F + self.sigma1 - self.sigma2

    def descent_residuals(self):
        b2 = lambda c: chain_boundary_second(c, self.group, self.snap)
        return {
            "d'F - d''S1": chain_boundary_prime(self.F) - b2(self.sigma1),
            "d'S1 - d''S2": chain_boundary_prime(self.sigma1) - b2(self.sigma2),
            "d'S2": chain_boundary_prime(self.sigma2),
        }

    def is_cycle(self):
        return all(c.is_zero() for c in self.descent_residuals().values())

    def reversed(self):
        return PolygonCycle(-self.F, -self.sigma1, -self.sigma2, self.group, self.apex, self.snap)

    def to_dict(self):
        return {"F": self.F.to_list(), "sigma1": self.sigma1.to_list(), "sigma2": self.sigma2.to_list(),
                "apex": [self.apex.real, self.apex.imag]}


def _vertex_transports(group, snap, verts, maps):
    """h_a with v_a = h_a v_0, found by following side maps from vertex 0."""
    n = len(verts)
    h = {0: group.identity}
    changed = True
    while changed:
        changed = False
        for k, (m, g, _) in maps.items():
            # g sends v_k -> v_{m+1} and v_{k+1} -> v_m
            for a, b in ((k, (m + 1) % n), ((k + 1) % n, m)):
                for src, dst, gg in ((a, b, g), (b, a, group.inverse(g))):
                    if src in h and dst not in h:
                        h[dst] = group.mul(gg, h[src])
                        changed = True
    if len(h) != n:
        raise GroupError("polygon vertices do not form a single orbit under the side pairing")
    for a, ha in h.items():
        if snap(ha(verts[0])) != verts[a]:
            raise GroupError(f"vertex transport to {a} misses by {abs(ha(verts[0]) - verts[a]):.2e}")
    return h


def build_polygon_cycle(group: FuchsianGroup, apex=None, tol=1e-10) -> PolygonCycle:
    """Fan-triangulated polygon F, side-pairing edges Sigma1, and Sigma2 solved from descent.

    Sigma2 is found by moving every vertex term of d'Sigma1 to the base
    vertex with v0 (x) [g|h] and collecting the remainder, which has to be
    a multiple of v0 (x) [e] (the boundary of v0 (x) [e|e]).
    """
    if group.vertices is None or group.side_pairing is None:
        raise GroupError("the group carries no fundamental polygon")
    snap = PointSnap()
    verts = [snap(v) for v in group.vertices]
    n = len(verts)
    apex = snap(group.center if apex is None else apex)
    maps = group.side_maps()
    bad = {k: err for k, (_, _, err) in maps.items() if err > tol}
    if bad:
        raise GroupError(f"side maps miss their partner sides: {bad}")

    e = group.identity
    F = GroupChain()
    for k in range(n):
        F.add((), (apex, verts[k], verts[(k + 1) % n]), 1)
    sigma1 = GroupChain()
    done = set()
    for k in sorted(maps):
        m, g, _ = maps[k]
        if k in done:
            continue
        done.update((k, m))
        sigma1.add((g,), (verts[k], verts[(k + 1) % n]), 1)

    h = _vertex_transports(group, snap, verts, maps)
    v0 = verts[0]
    sigma2 = GroupChain()
    rest = GroupChain()
    for (el, s), coeff in chain_boundary_prime(sigma1):
        (g,), (v,) = el, s
        ha = h[verts.index(v)]
        # (h v0) [g] = d''(v0 [g|h]) - v0 [h] + v0 [g h]
        sigma2.add((g, ha), (v0,), coeff)
        rest.add((ha,), (v0,), -coeff)
        rest.add((group.mul(g, ha),), (v0,), coeff)
    leftover = {el: c for (el, s), c in rest.terms.items() if el != (e,)}
    if leftover:
        raise DescentError("descent for Sigma2 is unsolvable", leftover)
    ce = rest.terms.get(((e,), (v0,)), 0)
    sigma2.add((e, e), (v0,), ce)

    cyc = PolygonCycle(F, sigma1, sigma2, group, apex, snap)
    res = {k: c for k, c in cyc.descent_residuals().items() if not c.is_zero()}
    if res:
        raise DescentError(f"polygon cycle fails {sorted(res)}", res)
    return cyc


def _to_disc(center):
    """Moebius map H -> unit disc sending ``center`` to 0."""
    return Mobius(1.0, -center, 1.0, -np.conj(center))


def geodesic_triangle(apex, a, b, plane=False):
    """The triangle (apex, a, b) with geodesic sides, as a fan in the disc centered at apex."""
    if plane:
        return FanTriangle(apex, Path(a, b))
    S = _to_disc(apex)
    T = _to_disc(a)
    far = Path(0j, complex(T(np.array([b]))[0]), S.compose(T.inverse()))
    return FanTriangle(0j, far, S.inverse())


def hyperbolic_density(z: Jet):
    y = (z - z.conj()) * -0.5j
    return (y * y).reciprocal()


AREA_RULE = QuadratureRule(48, 16)


def polygon_area(cycle: PolygonCycle, rule=AREA_RULE):
    """Area of the augmentation of F; the hyperbolic density is steep near the vertices, hence the high order."""
    plane = cycle.group.plane
    density = (lambda z: Jet.constant(1.0, z.order, z.shape)) if plane else hyperbolic_density
    form = area_form(density)
    total = 0.0
    for (el, s), c in cycle.F:
        total += c * integrate(form, geodesic_triangle(*s, plane=plane), rule).real
    return total


def pair_integer(cochain: GroupCochain, chain: GroupChain):
    return sum(c * int(cochain(el)) for (el, s), c in chain)


def euler_number(group, cycle: PolygonCycle, cochain=None) -> int:
    """<c, -Sigma2>: the pairing of the Euler cocycle with the total cycle's (0,2) part."""
    c = euler_cochain(group) if cochain is None else cochain
    return -pair_integer(c, cycle.sigma2)


# ---------------------------------------------------------------------------
# translated Lagrangian cocycle (identity map, equal trivializations)
# ---------------------------------------------------------------------------

@dataclass
class GroupLagrangian:
    """Components of Omega = 2 pi i (omega, theta, -Theta, -m) on the group side."""

    group: FuchsianGroup
    omega: FormField
    theta: GroupCochain
    Theta: GroupCochain
    m: GroupCochain
    logs: GroupCochain
    chern: GroupCochain

    def verify(self, rng, count=6, points=None, tol=1e-9) -> Report:
        g = self.group
        pts = g.sample_points() if points is None else points
        reports = []
        # delta omega = omega - g^* omega against d theta
        d_omega = GroupCochain(1, lambda el: self.omega - pullback(el[0].map, self.omega), 2)
        dtheta = GroupCochain(1, lambda el: d(self.theta(el)), 2)
        r, w = cochain_residual(d_omega - dtheta, random_tuples(g, 1, rng, count), pts)
        reports.append(Report("delta omega = d theta", r, tol, worst=w))
        dT = GroupCochain(2, lambda el: d(self.Theta(el)), 1)
        r, w = cochain_residual(group_delta(self.theta, g) - dT, random_tuples(g, 2, rng, count), pts)
        reports.append(Report("delta theta = d Theta", r, tol, worst=w))
        # delta Theta is the constant (2 pi i)^2 m
        dTh = group_delta(self.Theta, g)
        worst, where = 0.0, None
        for el in random_tuples(g, 3, rng, count):
            v = dTh(el)(pts)
            r = float(np.max(np.abs(v - TWO_PI_I ** 2 * self.m(el))))
            if r > worst:
                worst, where = r, el
        reports.append(Report("delta Theta = m", worst, tol * 100, worst=where))
        dm = group_delta(self.m, g)
        r = max(abs(dm(el)) for el in random_tuples(g, 4, rng, count))
        reports.append(Report("delta m = 0", float(r), 0.5))
        dc = group_delta(self.chern, g)
        r = max(abs(dc(el)) for el in random_tuples(g, 3, rng, count))
        reports.append(Report("delta c = 0", float(r), 0.5))
        return merge("group lagrangian", reports, tol)


def translate_lagrangian(group: FuchsianGroup, h=None) -> GroupLagrangian:
    """Omega for the identity map (mu = 0) with one tame trivialization on both sides.

    With f = id the trivializations cancel in Theta and the ledger b
    vanishes, so the components reduce to
      omega = 0,  theta_g = l_g dl_g,
      Theta_{g1,g2} = -(l_g1 o g2) l_g2 + c l_{g1 g2},
      m = C_{g1,g2g3} C_{g2,g3} - C_{g1g2,g3} C_{g1,g2},
    with l_g = log g' and c = 2 pi i C = delta l.  ``h`` enters only via
    2 mu h and therefore drops out.
    """
    logs = log_derivative_cochain(group)
    chern = integer_cochain_from(logs, group)
    omega = FormField(2, lambda p, n: Jet.constant(0.0, n, p.shape), "omega")

    def theta(el):
        lg = logs(el)
        dl = d(lg)
        return FormField(1, lambda p, n: tuple(x * lg.fn(p, n) for x in dl.fn(p, n)))

    def Theta(el):
        g1, g2 = el
        l1 = pullback(g2.map, logs((g1,)))
        l2 = logs((g2,))
        l12 = logs((group.mul(g1, g2),))
        c = TWO_PI_I * chern(el)
        return FormField(0, lambda p, n: -(l1.fn(p, n) * l2.fn(p, n)) + l12.fn(p, n) * c)

    def m(el):
        g1, g2, g3 = el
        C = lambda a, b: chern((a, b))
        return C(g1, group.mul(g2, g3)) * C(g2, g3) - C(group.mul(g1, g2), g3) * C(g1, g2)

    return GroupLagrangian(group, omega, GroupCochain(1, theta, 1, label="theta"),
                           GroupCochain(2, Theta, 0, label="Theta"),
                           GroupCochain(3, m, integer=True, label="m"), logs, chern)


# ---------------------------------------------------------------------------
# ready-made groups
# ---------------------------------------------------------------------------

def lattice_group(tau=1j):
    """Translations by 1 and tau acting on C, with the parallelogram as fundamental polygon."""
    tau = complex(tau)
    return FuchsianGroup([[[1, tau], [0, 1]], [[1, -1], [0, 1]]], ["a1", "b1"],
                         ["a1", "b1", "A1", "B1"], 1,
                         vertices=[0, 1, 1 + tau, tau], side_pairing=[[0, 2], [1, 3], [2, 0], [3, 1]],
                         center=(1 + tau) / 2, plane=True)


def octagon_group():
    from .scenario import load_builtin

    return FuchsianGroup.from_scenario(load_builtin("genus2_octagon"))


def euler_characteristic_from_polygon(group):
    """V - E + F of the closed surface from the side-paired polygon: 1 - 2g vertices/edges + 1."""
    n = len(group.vertices)
    return 1 - n // 2 + 1
