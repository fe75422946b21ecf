"""Model surfaces and the generator for the shipped scenario files.

Each model places geodesic discs around the vertices of a triangulation,
finds the overlap pattern up to five-fold intersections (through deck
transformations where the model is a quotient), and emits explicit
charts, transitions and overlap polygons.  The output is plain data; the
loader never re-runs this geometry.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np
from scipy.optimize import minimize

from .maps import Affine, ExpAffine, LogAffine, Mobius, Translation

RAY_COUNT = 48


# ---------------------------------------------------------------------------
# discs -> polygon
# ---------------------------------------------------------------------------

def chebyshev_point(discs):
    """Point maximizing the smallest clearance inside a family of Euclidean discs."""
    centers = np.array([c for c, _ in discs])
    radii = np.array([r for _, r in discs])

    def neg_clearance(x):
        z = x[0] + 1j * x[1]
        return -np.min(radii - np.abs(z - centers))

    z0 = np.average(centers, weights=1 / radii)
    best = minimize(neg_clearance, [z0.real, z0.imag], method="Nelder-Mead",
                    options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
    z = best.x[0] + 1j * best.x[1]
    return z, -best.fun


def disc_polygon(discs, rays=RAY_COUNT):
    """Inscribed polygon of an intersection of discs, by exits along rays."""
    x0, clearance = chebyshev_point(discs)
    if clearance <= 0:
        return None, clearance
    ang = np.linspace(0, 2 * np.pi, rays, endpoint=False)
    e = np.exp(1j * ang)
    rho = np.full(rays, np.inf)
    for c, r in discs:
        w = x0 - c
        b = np.real(np.conj(e) * w)
        rho = np.minimum(rho, -b + np.sqrt(b * b - (abs(w) ** 2 - r * r)))
    return x0 + rho * e, clearance


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------

class FlatModel:
    """C / lattice, charts either translated (log) or exponential coordinates."""

    metric = "flat"
    identity = 0j

    def __init__(self, periods, vertices, exp_charts=(), s=1.0, span=1):
        self.periods = [complex(p) for p in periods]
        self.vertices = [complex(v) for v in vertices]
        self.exp_charts = set(exp_charts)
        self.s = s
        self.deck = [m * self.periods[0] + n * self.periods[1]
                     for m, n in product(range(-span, span + 1), repeat=2)]

    # deck elements are lattice vectors
    def act(self, g, x):
        return x + g

    def compose(self, g, h):
        return g + h

    def inverse(self, g):
        return -g

    def same(self, g, h):
        return abs(g - h) < 1e-9

    def distance(self, x, y):
        return abs(x - y)

    def chart_kind(self, i):
        return "exp" if i in self.exp_charts else "log"

    def pre_chart_discs(self, b, items):
        p = self.vertices[b]
        return [(x - p, r) for x, r in items]

    def pre_to_chart(self, b, pts):
        return np.exp(self.s * pts) if b in self.exp_charts else pts

    def chart_map_spec(self, i):
        """Chart map from the model coordinate."""
        p = self.vertices[i]
        if i in self.exp_charts:
            return ExpAffine(self.s, -p)
        return Translation(-p)

    def transition(self, i, j, g):
        c = self.vertices[j] + g - self.vertices[i]
        ki, kj = self.chart_kind(i), self.chart_kind(j)
        if ki == "log" and kj == "log":
            return Translation(c)
        if ki == "log":
            return LogAffine(self.s, c)
        if kj == "log":
            return ExpAffine(self.s, c)
        return Affine(np.exp(self.s * c), 0.0)


def _su2_centering(zeta):
    n = np.sqrt(1 + abs(zeta) ** 2)
    return np.array([[1, -zeta], [np.conj(zeta), 1]], dtype=complex) / n


def stereo(x):
    return (x[0] + 1j * x[1]) / (1 - x[2])


def inverse_stereo(z):
    z = complex(z)
    d = 1 + abs(z) ** 2
    return np.array([2 * z.real / d, 2 * z.imag / d, (abs(z) ** 2 - 1) / d])


class SphereModel:
    metric = "round"
    identity = None

    def __init__(self, vertices):
        self.vertices = [np.asarray(v, float) / np.linalg.norm(v) for v in vertices]
        self.deck = [None]
        self.U = [_su2_centering(stereo(v)) for v in self.vertices]

    def act(self, g, x):
        return x

    def compose(self, g, h):
        return None

    def inverse(self, g):
        return None

    def same(self, g, h):
        return True

    def distance(self, x, y):
        return float(np.arccos(np.clip(np.dot(x, y), -1, 1)))

    def to_chart(self, b, x):
        return Mobius.from_matrix(self.U[b])(np.array([stereo(x)]))[0]

    def pre_chart_discs(self, b, items):
        out = []
        for x, r in items:
            if self.distance(x, -self.vertices[b]) <= r:
                raise ValueError("cap contains the chart's point at infinity")
            e1 = np.cross(x, [0.3, 0.5, 0.8])
            e1 /= np.linalg.norm(e1)
            e2 = np.cross(x, e1)
            pts = [self.to_chart(b, np.cos(r) * x + np.sin(r) * (np.cos(t) * e1 + np.sin(t) * e2))
                   for t in (0.0, 2.1, 4.2)]
            out.append(_circumcircle(*pts))
        return out

    def pre_to_chart(self, b, pts):
        return pts

    def chart_map_spec(self, i):
        return Mobius.from_matrix(self.U[i])

    def transition(self, i, j, g):
        m = self.U[i] @ np.linalg.inv(self.U[j])
        return Mobius.from_matrix(m)


def _circumcircle(a, b, c):
    ax, ay, bx, by, cx, cy = a.real, a.imag, b.real, b.imag, c.real, c.imag
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    ux = ((ax ** 2 + ay ** 2) * (by - cy) + (bx ** 2 + by ** 2) * (cy - ay) + (cx ** 2 + cy ** 2) * (ay - by)) / d
    uy = ((ax ** 2 + ay ** 2) * (cx - bx) + (bx ** 2 + by ** 2) * (ax - cx) + (cx ** 2 + cy ** 2) * (bx - ax)) / d
    center = ux + 1j * uy
    return center, abs(a - center)


def disc_centering(c):
    n = np.sqrt(1 - abs(c) ** 2)
    return np.array([[1, -c], [-np.conj(c), 1]], dtype=complex) / n


def mobius_apply(m, z):
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def hyperbolic_distance(x, y):
    return 2 * np.arctanh(abs((x - y) / (1 - np.conj(x) * y)))


class HyperbolicModel:
    """Unit-disc model with a Fuchsian deck group given by SU(1,1) matrices."""

    metric = "hyperbolic"
    identity = np.eye(2, dtype=complex)

    def __init__(self, vertices, deck):
        self.vertices = [complex(v) for v in vertices]
        self.deck = deck
        self.A = [disc_centering(v) for v in self.vertices]

    def act(self, g, x):
        return mobius_apply(g, x)

    def compose(self, g, h):
        return g @ h

    def inverse(self, g):
        return np.linalg.inv(g)

    def same(self, g, h):
        return np.allclose(g, h, atol=1e-8) or np.allclose(g, -h, atol=1e-8)

    def distance(self, x, y):
        return hyperbolic_distance(x, y)

    def pre_chart_discs(self, b, items):
        out = []
        for x, r in items:
            y = mobius_apply(self.A[b], x)
            t = np.tanh(r / 2)
            den = 1 - t * t * abs(y) ** 2
            out.append((y * (1 - t * t) / den, t * (1 - abs(y) ** 2) / den))
        return out

    def pre_to_chart(self, b, pts):
        return pts

    def chart_map_spec(self, i):
        return Mobius.from_matrix(self.A[i])

    def transition(self, i, j, g):
        return Mobius.from_matrix(self.A[i] @ g @ np.linalg.inv(self.A[j]))


# ---------------------------------------------------------------------------
# cover generation
# ---------------------------------------------------------------------------

class CoverGenerationError(RuntimeError):
    pass


def generate_cover(model, radii, faces, max_order=5, scales=(1.0, 0.985, 0.97, 0.955, 0.94)):
    """Overlap pattern and polygons for discs of radius radii[v] * scales[level]."""
    n = len(model.vertices)
    R = np.asarray(radii, float)

    def disc(v, g, level):
        return model.act(g, model.vertices[v]), R[v] * scales[level - 1]

    # self-overlaps would make a chart non-embedded
    ident = model.identity
    for v in range(n):
        for g in model.deck:
            if model.same(g, ident):
                continue
            if model.distance(model.vertices[v], model.act(g, model.vertices[v])) < 2 * R[v]:
                raise CoverGenerationError(f"chart {v} overlaps its own translate")

    lift = {}
    for i, j in combinations(range(n), 2):
        hits = [g for g in model.deck
                if model.distance(model.vertices[i], model.act(g, model.vertices[j]))
                < (R[i] + R[j]) * scales[1]]
        if len(hits) > 1:
            raise CoverGenerationError(f"charts {i},{j} overlap in several places")
        if hits:
            lift[(i, j)] = hits[0]

    def rel(t):
        """Deck element of every entry relative to the first index, if consistent."""
        i0 = t[0]
        g = {i0: ident}
        for a in t[1:]:
            if (i0, a) not in lift:
                return None
            g[a] = lift[(i0, a)]
        for a, b in combinations(t[1:], 2):
            if (a, b) not in lift:
                return None
            if not model.same(lift[(a, b)], model.compose(model.inverse(g[a]), g[b])):
                return None
        return g

    regions = {}
    for v in range(n):
        pts = model.pre_to_chart(v, disc_polygon(model.pre_chart_discs(v, [disc(v, ident, 1)]),
                                                 rays=64)[0])
        regions[(v,)] = pts
    for order in range(2, max_order + 1):
        for t in combinations(range(n), order):
            if any(sub not in regions for sub in combinations(t, order - 1)):
                continue
            g = rel(t)
            if g is None:
                continue
            b = t[-1]
            back = model.inverse(g[b])
            items = []
            for a in t:
                x, r = disc(a, model.compose(back, g[a]), order)
                items.append((x, r))
            poly, clearance = disc_polygon(model.pre_chart_discs(b, items))
            if poly is None or clearance < 1e-4:
                continue
            regions[t] = model.pre_to_chart(b, poly)
    trans = {}
    for (i, j) in [t for t in regions if len(t) == 2]:
        trans[(i, j)] = (model.transition(i, j, lift[(i, j)]), lift[(i, j)])
    missing = [f for f in faces if tuple(sorted(f)) not in regions]
    if missing:
        raise CoverGenerationError(f"faces without triple overlap: {missing}")
    return regions, trans


# ---------------------------------------------------------------------------
# triangulations
# ---------------------------------------------------------------------------

def grid_torus(m=3):
    idx = lambda a, b: (a % m) * m + (b % m)
    verts = [(a + 1j * b) / m for a in range(m) for b in range(m)]
    faces = []
    for a in range(m):
        for b in range(m):
            faces.append((idx(a, b), idx(a + 1, b), idx(a + 1, b + 1)))
            faces.append((idx(a, b), idx(a + 1, b + 1), idx(a, b + 1)))
    return verts, faces


def icosahedron():
    phi = (1 + 5 ** 0.5) / 2
    v = []
    for s1 in (-1, 1):
        for s2 in (-1, 1):
            v += [(0, s1, s2 * phi), (s1, s2 * phi, 0), (s2 * phi, 0, s1)]
    v = np.array(v, float)
    v /= np.linalg.norm(v, axis=1)[:, None]
    # generic rotation keeps every vertex away from the projection pole
    a, b = 0.37, 0.61
    ra = np.array([[1, 0, 0], [0, np.cos(a), -np.sin(a)], [0, np.sin(a), np.cos(a)]])
    rb = np.array([[np.cos(b), 0, np.sin(b)], [0, 1, 0], [-np.sin(b), 0, np.cos(b)]])
    v = v @ (rb @ ra).T
    edge = np.min([np.linalg.norm(v[i] - v[j]) for i, j in combinations(range(12), 2)])
    faces = [f for f in combinations(range(12), 3)
             if all(np.linalg.norm(v[p] - v[q]) < edge * 1.01 for p, q in combinations(f, 2))]
    return v, faces


def check_closed_surface(faces, n_vertices):
    """Each edge in exactly two faces and every vertex link a single cycle."""
    from collections import Counter, defaultdict

    edges = Counter()
    for f in faces:
        if len(set(f)) != 3:
            raise CoverGenerationError(f"degenerate face {f}")
        for p, q in combinations(sorted(f), 2):
            edges[(p, q)] += 1
    bad = [e for e, k in edges.items() if k != 2]
    if bad or len(set(tuple(sorted(f)) for f in faces)) != len(faces):
        raise CoverGenerationError(f"not a closed simplicial surface: {bad[:5]}")
    link = defaultdict(list)
    for f in faces:
        for v in f:
            a, b = [u for u in f if u != v]
            link[v].append((a, b))
    for v, segs in link.items():
        adj = defaultdict(list)
        for a, b in segs:
            adj[a].append(b)
            adj[b].append(a)
        start = segs[0][0]
        seen, prev, cur = {start}, None, start
        while True:
            nxt = [u for u in adj[cur] if u != prev]
            if not nxt or nxt[0] == start:
                break
            prev, cur = cur, nxt[0]
            seen.add(cur)
        if len(seen) != len(adj):
            raise CoverGenerationError(f"link of vertex {v} is not a single cycle")
    return n_vertices - len(edges) + len(faces)


# ---------------------------------------------------------------------------
# the regular octagon group
# ---------------------------------------------------------------------------

def disc_translation(ell):
    c, s = np.cosh(ell / 2), np.sinh(ell / 2)
    return np.array([[c, s], [s, c]], dtype=complex)


def rotation(theta):
    return np.array([[np.exp(0.5j * theta), 0], [0, np.exp(-0.5j * theta)]], dtype=complex)


def octagon_data():
    """Regular octagon with interior angles pi/4 and its commutator side pairing."""
    cot = 1 / np.tan(np.pi / 8)
    d_side = np.arccosh(cot)
    r_vertex = np.arccosh(cot ** 2)
    rho = np.tanh(r_vertex / 2)
    vertices = [rho * np.exp(1j * (2 * k - 1) * np.pi / 8) for k in range(8)]
    phi = [k * np.pi / 4 for k in range(8)]

    def pairing(k, m):
        """Maps side k onto side m, carrying the octagon across side m."""
        return rotation(phi[m]) @ disc_translation(2 * d_side) @ rotation(np.pi - phi[k])

    pairs = [(0, 2), (1, 3), (4, 6), (5, 7)]
    best = None
    for flips in product((0, 1), repeat=4):
        gens = []
        for (k, m), f in zip(pairs, flips):
            gens.append(pairing(m, k) if f else pairing(k, m))
        a1, b1, a2, b2 = gens
        inv = np.linalg.inv
        rel = a1 @ b1 @ inv(a1) @ inv(b1) @ a2 @ b2 @ inv(a2) @ inv(b2)
        err = min(np.max(np.abs(rel - np.eye(2))), np.max(np.abs(rel + np.eye(2))))
        if best is None or err < best[0]:
            best = (err, gens, flips)
    err, gens, flips = best
    if err > 1e-10:
        raise CoverGenerationError(f"octagon relator fails ({err:.2e})")
    side_maps = {}
    for (k, m), f, g in zip(pairs, flips, gens):
        src, dst = (m, k) if f else (k, m)
        side_maps[src] = (dst, g)
        side_maps[dst] = (src, np.linalg.inv(g))
    return {"vertices": vertices, "generators": gens, "side_maps": side_maps,
            "vertex_radius": r_vertex, "side_distance": d_side}


def disc_midpoint(x, y):
    a = disc_centering(x)
    yy = mobius_apply(a, y)
    m = np.tanh(np.arctanh(abs(yy)) / 2) * yy / abs(yy)
    return mobius_apply(np.linalg.inv(a), m)


def _matrix_key(m):
    k = m.ravel()
    lead = k[np.argmax(np.abs(k) > 1e-9)]
    k = k * (np.abs(lead) / lead)
    return tuple(np.round(np.concatenate([k.real, k.imag]), 6))


def words(gens, length):
    """Distinct group elements (up to sign) given by words of bounded length."""
    letters = list(gens) + [np.linalg.inv(g) for g in gens]
    seen = {_matrix_key(np.eye(2)): np.eye(2, dtype=complex)}
    frontier = [np.eye(2, dtype=complex)]
    for _ in range(length):
        new = []
        for w in frontier:
            for l in letters:
                x = w @ l
                key = _matrix_key(x)
                if key not in seen:
                    seen[key] = x
                    new.append(x)
        frontier = new
    return list(seen.values())


def octagon_triangulation(data):
    """Corner-cut octagon triangulation, midpoint-subdivided, with side identifications."""
    V = data["vertices"]
    side_maps = data["side_maps"]
    points, faces_geo = [], []

    def pid(z):
        for k, p in enumerate(points):
            if abs(p - z) < 1e-9:
                return k
        points.append(z)
        return len(points) - 1

    O = 0j
    M = [disc_midpoint(V[k], V[(k + 1) % 8]) for k in range(8)]
    # corners cut off at every octagon vertex, then a fan over the midpoint octagon
    fan = []
    for k in range(8):
        fan.append((V[k], M[k], M[k - 1]))
        fan.append((O, M[k - 1], M[k]))
    for a, b, c in fan:
        mab, mbc, mca = disc_midpoint(a, b), disc_midpoint(b, c), disc_midpoint(c, a)
        for tri in [(a, mab, mca), (mab, b, mbc), (mca, mbc, c), (mab, mbc, mca)]:
            faces_geo.append(tuple(pid(z) for z in tri))
    # identify boundary points through the side pairings
    parent = list(range(len(points)))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for k, (m, g) in side_maps.items():
        for u, p in enumerate(points):
            q = mobius_apply(g, p)
            for w, r in enumerate(points):
                if abs(q - r) < 1e-8 and _on_side(p, V, k):
                    parent[find(u)] = find(w)
    roots = sorted({find(u) for u in range(len(points))})
    cls = {r: n for n, r in enumerate(roots)}
    label = [cls[find(u)] for u in range(len(points))]
    reps = [points[r] for r in roots]
    faces = [tuple(label[u] for u in f) for f in faces_geo]
    return reps, faces, points, faces_geo, label


def _on_side(p, V, k):
    a, b = V[k], V[(k + 1) % 8]
    return abs(hyperbolic_distance(a, p) + hyperbolic_distance(p, b) - hyperbolic_distance(a, b)) < 1e-8


# ---------------------------------------------------------------------------
# scenario emission
# ---------------------------------------------------------------------------

def _c(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _mat(m):
    return [_c(x) for x in np.asarray(m).ravel()]


def _cover_tables(model, regions, trans, faces, labels=None):
    charts = []
    for v in range(len(model.vertices)):
        center = model.vertices[v]
        charts.append({
            "id": v,
            "label": labels[v] if labels else f"v{v}",
            "center": [float(x) for x in center] if model.metric == "round" else _c(center),
            "map": model.chart_map_spec(v).to_dict(),
            "polygon": [_c(z) for z in regions[(v,)]],
        })
    transitions = []
    for (i, j), (holo, g) in sorted(trans.items()):
        entry = {"to": i, "from": j, "map": holo.to_dict()}
        if model.metric == "flat":
            entry["deck"] = _c(g)
        elif model.metric == "hyperbolic":
            entry["deck"] = _mat(g)
        transitions.append(entry)
    intersections = [{"tuple": list(t), "polygon": [_c(z) for z in regions[t]]}
                     for t in sorted(regions, key=lambda t: (len(t), t)) if len(t) > 1]
    return charts, transitions, intersections, [sorted(f) for f in sorted(tuple(sorted(f)) for f in faces)]


def _common(name, description, metric):
    return {
        "schema": 1,
        "name": name,
        "description": description,
        "max_order": 5,
        "metric": metric,
        "quad": {"triangle_order": 10, "segment_order": 16},
        "tolerances": {"transitions": 1e-12, "forms": 1e-8, "integers": 1e-6, "identities": 1e-10},
    }


def torus_spec(exp_charts=(), name="torus", s=1.0):
    verts, faces = grid_torus(3)
    model = FlatModel([1, 1j], verts, exp_charts=exp_charts, s=s)
    regions, trans = generate_cover(model, [0.32] * 9, faces, scales=(1, 0.97, 0.94, 0.91, 0.88))
    charts, transitions, inter, faces = _cover_tables(model, regions, trans, faces)
    if exp_charts:
        spec = _common(name, "unit-square torus on a 3x3 grid; the middle column uses "
                             "exponential coordinates u = exp(s(zeta - p))", "flat")
        spec["deformation"] = {"kind": "affine_beltrami", "mu": _c(0.15), "modes": []}
        spec["h"] = {"kind": "constant", "value": _c(1.0)}
        spec["variation"] = {"kind": "trig", "modes": [[1, 0, 0.03, 0.01], [0, 1, -0.02, 0.02]]}
    else:
        spec = _common(name, "unit-square torus on a 3x3 grid with translation charts", "flat")
        spec["deformation"] = {"kind": "affine_beltrami", "mu": _c(0.1), "modes": []}
        spec["h"] = {"kind": "constant", "value": _c(1.0)}
        spec["variation"] = {"kind": "trig", "modes": [[1, 0, 0.05, 0.0], [1, 1, 0.0, 0.03]]}
    spec["model"] = {"kind": "flat", "periods": [_c(1), _c(1j)], "scale": s,
                     "exp_charts": sorted(int(x) for x in exp_charts)}
    spec.update(charts=charts, transitions=transitions, intersections=inter, faces=faces)
    return spec


def sphere_spec():
    verts, faces = icosahedron()
    model = SphereModel(verts)
    r = np.radians(62.5)
    regions, trans = generate_cover(model, [r] * 12, faces,
                                    scales=tuple(x / 62.5 for x in (62.5, 61.5, 60.5, 59.5, 58.5)))
    charts, transitions, inter, faces = _cover_tables(model, regions, trans, faces)
    spec = _common("sphere3", "round sphere covered by twelve caps around icosahedron vertices, "
                              "SU(2) Moebius charts", "round")
    spec["model"] = {"kind": "round"}
    spec["deformation"] = {"kind": "sphere_flow", "epsilon": 0.12}
    spec["h"] = {"kind": "sphere_quartic", "k1": _c(0.4 + 0.1j), "k2": _c(-0.25 + 0.2j)}
    spec["variation"] = {"kind": "flow"}
    spec.update(charts=charts, transitions=transitions, intersections=inter, faces=faces)
    return spec


def genus2_spec(deck_words=5, kappa=1.2):
    data = octagon_data()
    reps, faces, pts, faces_geo, label = octagon_triangulation(data)
    reach = 2 * data["vertex_radius"] + 1.5
    deck = [g for g in words(data["generators"], deck_words)
            if hyperbolic_distance(0, mobius_apply(g, 0)) < reach]
    radii = np.zeros(len(reps))
    for f in faces_geo:
        P = [pts[u] for u in f]
        obj = lambda x: max(hyperbolic_distance(x[0] + 1j * x[1], p) for p in P)
        c = np.mean(P)
        best = minimize(obj, [c.real, c.imag], method="Nelder-Mead",
                        options={"xatol": 1e-10, "fatol": 1e-12})
        for u in f:
            radii[label[u]] = max(radii[label[u]], best.fun)
    model = HyperbolicModel(reps, deck)
    regions, trans = generate_cover(model, radii * kappa, faces, max_order=5,
                                    scales=(1, 0.985, 0.97, 0.955, 0.94))
    charts, transitions, inter, faces = _cover_tables(model, regions, trans, faces)
    spec = _common("genus2_octagon", "genus-2 surface from the regular octagon with angles pi/4; "
                                     "disc-model charts around the vertices of a 64-face triangulation",
                   "hyperbolic")
    spec["model"] = {"kind": "hyperbolic"}
    spec["deformation"] = {"kind": "identity"}
    spec["h"] = {"kind": "zero"}
    # the group side lives on the upper half plane
    cay = np.array([[1, -1j], [1, 1j]])
    cay_inv = np.linalg.inv(cay)
    gens = []
    for g in data["generators"]:
        m = cay_inv @ g @ cay
        m = m / np.sqrt(np.linalg.det(m))
        if np.max(np.abs(m.imag)) > 1e-9:
            raise CoverGenerationError("generator is not real after the Cayley transform")
        gens.append([[float(x) for x in row] for row in m.real])
    up = lambda w: complex(mobius_apply(cay_inv, w))
    spec["group"] = {
        "genus": 2,
        "generators": gens,
        "names": ["a1", "b1", "a2", "b2"],
        "relator": ["a1", "b1", "A1", "B1", "a2", "b2", "A2", "B2"],
        "center": _c(up(0)),
        "vertices": [_c(up(v)) for v in data["vertices"]],
        "side_pairing": [[k, int(m)] for k, (m, _) in sorted(data["side_maps"].items())],
    }
    spec.update(charts=charts, transitions=transitions, intersections=inter, faces=faces)
    return spec


def write_builtin(directory):
    import os

    import tomli_w

    specs = {
        "torus.toml": torus_spec(),
        "sphere3.toml": sphere_spec(),
        "annulus_synthetic.toml": torus_spec(exp_charts=(3, 4, 5), name="annulus_synthetic"),
        "genus2_octagon.toml": genus2_spec(),
    }
    for fname, spec in specs.items():
        with open(os.path.join(directory, fname), "wb") as fh:
            tomli_w.dump(spec, fh)
    return sorted(specs)


if __name__ == "__main__":
    import sys

    print(write_builtin(sys.argv[1] if len(sys.argv) > 1 else "."))
