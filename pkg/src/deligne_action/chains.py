"""The singular-chain double complex over the nerve and the star fundamental cycle.

A simplex in a tuple is a pair (tuple, labels).  Labels name vertices:
a tuple of chart ids is the seed point v_tau of that intersection, and
("@", chart, z) is an explicit point in chart coordinates.  Chain algebra
only ever touches labels, so boundaries are exact integer arithmetic; the
geometry is resolved separately when integrating.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .atlas import CoverAtlas
from .fields import FanTriangle, Path, area_form, integrate
from .quadrature import DEFAULT_RULE


class ChainError(ValueError):
    pass


def normalize_tuple(t):
    """Sorted tuple and permutation sign; (None, 0) for a repeated index."""
    t = tuple(t)
    if len(set(t)) != len(t):
        return None, 0
    inv = sum(1 for a in range(len(t)) for b in range(a + 1, len(t)) if t[a] > t[b])
    return tuple(sorted(t)), (-1) ** inv


def point(chart, z):
    return ("@", int(chart), complex(z))


def is_explicit(label):
    return len(label) == 3 and label[0] == "@"


class DoubleChain:
    """Finite integer combination of simplices-in-tuples."""

    def __init__(self, terms=None):
        self.terms = {}
        for key, c in (terms or {}).items():
            self.add(key[0], key[1], c)

    @classmethod
    def single(cls, tau, labels, coeff=1):
        out = cls()
        out.add(tau, labels, coeff)
        return out

    def add(self, tau, labels, coeff=1):
        tau, sign = normalize_tuple(tau)
        if sign == 0 or coeff == 0:
            return self
        key = (tau, tuple(labels))
        c = self.terms.get(key, 0) + sign * int(coeff)
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)
        return self

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: repr(kv[0]))

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        out = DoubleChain(self.terms)
        for (tau, lab), c in other.terms.items():
            out.add(tau, lab, c)
        return out

    def __neg__(self):
        return DoubleChain({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return DoubleChain({key: k * c for key, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, DoubleChain) and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def bidegrees(self):
        return sorted({(len(lab) - 1, len(tau) - 1) for tau, lab in self.terms})

    def component(self, p, q):
        return DoubleChain({k: c for k, c in self.terms.items() if len(k[1]) - 1 == p and len(k[0]) - 1 == q})

    def to_list(self):
        return [{"tuple": list(tau), "labels": [_label_json(l) for l in lab], "coeff": c}
                for (tau, lab), c in self.items()]

    def __repr__(self):
        return f"DoubleChain({len(self.terms)} terms, bidegrees {self.bidegrees()})"


def _label_json(label):
    if is_explicit(label):
        return ["@", label[1], [label[2].real, label[2].imag]]
    return list(label)


def boundary_prime(c: DoubleChain) -> DoubleChain:
    out = DoubleChain()
    for (tau, lab), coeff in c.terms.items():
        if len(lab) == 1:
            continue
        for k in range(len(lab)):
            out.add(tau, lab[:k] + lab[k + 1:], (-1) ** k * coeff)
    return out


def boundary_second(c: DoubleChain) -> DoubleChain:
    out = DoubleChain()
    for (tau, lab), coeff in c.terms.items():
        if len(tau) == 1:
            continue
        for j in range(len(tau)):
            out.add(tau[:j] + tau[j + 1:], lab, (-1) ** j * coeff)
    return out


def total_boundary(c: DoubleChain, shifted=False) -> DoubleChain:
    """d' + (-1)^p d'' on S_p(N_q); the shifted complex uses (-1)^(p+1)."""
    out = boundary_prime(c)
    for (tau, lab), coeff in c.terms.items():
        p = len(lab) - 1 + (1 if shifted else 0)
        for (t2, l2), c2 in boundary_second(DoubleChain.single(tau, lab, coeff)).terms.items():
            out.add(t2, l2, (-1) ** p * c2)
    return out


def augment(c: DoubleChain):
    """First augmentation: forget the tuple, keep the simplex (by labels)."""
    out = defaultdict(int)
    for (tau, lab), coeff in c.terms.items():
        if len(tau) == 1:
            out[lab] += coeff
    return {k: v for k, v in out.items() if v}


def second_augmentation(c: DoubleChain):
    """Collapse the simplex to the nerve generator: sum of coefficients per tuple on 0-simplices."""
    out = defaultdict(int)
    for (tau, lab), coeff in c.terms.items():
        if len(lab) == 1:
            out[tau] += coeff
    return {k: v for k, v in out.items() if v}


def singular_boundary(chain: dict):
    out = defaultdict(int)
    for lab, coeff in chain.items():
        for k in range(len(lab)):
            if len(lab) > 1:
                out[lab[:k] + lab[k + 1:]] += (-1) ** k * coeff
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

class CycleGeometry:
    """Realizes labelled simplices in chart coordinates.

    Every edge is a straight segment in the home chart of its first vertex
    (the last index of a seed label, the stated chart of an explicit
    point); a triangle is the cone from its first vertex over its far edge,
    drawn in the home chart of the first vertex.  Realizations in other
    charts are push-forwards by transitions, so a simplex has one shape.
    """

    def __init__(self, cover: CoverAtlas, seeds=None):
        self.cover = cover
        self.seeds = dict(seeds or {})

    def home(self, label):
        return label[1] if is_explicit(label) else label[-1]

    def seed(self, tau):
        tau = tuple(tau)
        if tau not in self.seeds:
            if tau not in self.cover.intersections:
                raise ChainError(f"no seed and no region for {tau}")
            self.seeds[tau] = self.cover.seed(tau)
        return self.seeds[tau]

    def push(self, z, frm, to):
        if frm == to:
            return complex(z)
        if to > frm:
            raise ChainError(f"cannot carry a point from chart {frm} to chart {to}")
        return complex(self.cover.transition(to, frm)(np.array([z]))[0])

    def position(self, label, chart):
        if is_explicit(label):
            return self.push(label[2], label[1], chart)
        return self.push(self.seed(label), label[-1], chart)

    def _push_map(self, frm, to):
        return None if frm == to else self.cover.transition(to, frm).holo

    def realize(self, tau, labels):
        """The simplex drawn in chart tau[-1]."""
        chart = tau[-1]
        if len(labels) == 1:
            return self.position(labels[0], chart)
        if len(labels) == 2:
            h = self.home(labels[0])
            return Path(self.position(labels[0], h), self.position(labels[1], h), self._push_map(h, chart))
        if len(labels) == 3:
            h = self.home(labels[0])
            hf = self.home(labels[1])
            far = Path(self.position(labels[1], hf), self.position(labels[2], hf), self._push_map(hf, h))
            return FanTriangle(self.position(labels[0], h), far, self._push_map(h, chart))
        raise ChainError("only simplices of dimension at most 2 are realized")


# ---------------------------------------------------------------------------
# fundamental cycle
# ---------------------------------------------------------------------------

def _perm_sign(seq, ref):
    pos = [ref.index(x) for x in seq]
    inv = sum(1 for a in range(3) for b in range(a + 1, 3) if pos[a] > pos[b])
    return (-1) ** inv


def _pair(a, b):
    return (a, b) if a < b else (b, a)


def orientation_signs(geom: CycleGeometry, faces, rel_tol=1e-10):
    """eps_ijk: +1 when (v_i, v_ij, v_ijk) is counterclockwise (read in chart i)."""
    eps = {}
    for f in faces:
        i, j, k = f
        a = geom.position((i,), i)
        b = geom.position((i, j), i)
        c = geom.position(f, i)
        cross = ((b - a).conjugate() * (c - a)).imag
        scale = abs(b - a) * abs(c - a)
        if scale == 0 or abs(cross) <= rel_tol * scale:
            raise ChainError(f"degenerate triangle at {f}: seeds are collinear")
        eps[f] = 1 if cross > 0 else -1
    return eps


@dataclass
class FundamentalCycle:
    sigma0: DoubleChain
    sigma1: DoubleChain
    sigma2: DoubleChain
    eps: dict
    geometry: CycleGeometry = None
    faces: list = field(default_factory=list)

    def total(self):
        """Sigma0 + Sigma1 - Sigma2 as one chain of the total complex."""
        return self.sigma0 + self.sigma1 - self.sigma2

    def shifted(self):
        return shift_cycle(self)

    def descent_residuals(self):
        """Chains that must vanish; their term counts are the residuals."""
        return {
            "d'S0 - d''S1": boundary_prime(self.sigma0) - boundary_second(self.sigma1),
            "d'S1 - d''S2": boundary_prime(self.sigma1) - boundary_second(self.sigma2),
            "d'S2": boundary_prime(self.sigma2),
            "d''S0": boundary_second(self.sigma0),
            "total": total_boundary(self.total()),
        }

    def is_cycle(self):
        return all(c.is_zero() for c in self.descent_residuals().values())

    def to_dict(self):
        return {
            "sigma0": self.sigma0.to_list(),
            "sigma1": self.sigma1.to_list(),
            "sigma2": self.sigma2.to_list(),
            "eps": [[list(k), v] for k, v in sorted(self.eps.items())],
            "seeds": [[list(k), [complex(v).real, complex(v).imag]]
                      for k, v in sorted(self.geometry.seeds.items())] if self.geometry else [],
        }


def build_fundamental_class(cover: CoverAtlas, faces, seeds=None, eps=None) -> FundamentalCycle:
    """Barycentric star cycle over the given oriented triangles of the cover's nerve."""
    geom = CycleGeometry(cover, seeds)
    faces = [tuple(f) for f in faces]
    for f in faces:
        if f not in cover.intersections:
            raise ChainError(f"face {f} is not a declared triple intersection")
        for tau in [(f[0],), (f[1],), (f[2],), f[:2], f[1:], (f[0], f[2]), f]:
            geom.seed(tau)
    eps = orientation_signs(geom, faces) if eps is None else dict(eps)
    s0, s1, s2 = DoubleChain(), DoubleChain(), DoubleChain()
    for f in faces:
        e = eps[f]
        for perm in permutations(f):
            a, b, _ = perm
            s0.add((a,), ((a,), _pair(a, b), f), e * _perm_sign(perm, f))
        i, j, k = f
        s1.add((i, k), ((i, k), f), e)
        s1.add((i, j), ((i, j), f), -e)
        s1.add((j, k), ((j, k), f), -e)
        s2.add(f, (f,), -e)
    return FundamentalCycle(s0, s1, s2, eps, geom, faces)


def shift_cycle(cycle):
    """The image in the shifted complex: each S_p(N_q) term gets (-1)^p.

    For the fundamental cycle this is (Sigma0, -Sigma1, -Sigma2, 0).
    """
    chain = cycle.total() if isinstance(cycle, FundamentalCycle) else cycle
    out = DoubleChain()
    for (tau, lab), c in chain.terms.items():
        out.add(tau, lab, (-1) ** (len(lab) - 1) * c)
    return out


def area_of_cycle(cycle: FundamentalCycle, density, rule=DEFAULT_RULE):
    """Metric area of the first augmentation; ``density(i, z_jet)`` per chart."""
    total = 0.0
    for (tau, lab), c in cycle.sigma0:
        form = area_form(lambda z, i=tau[0]: density(i, z))
        total += c * integrate(form, cycle.geometry.realize(tau, lab), rule)
    return total
