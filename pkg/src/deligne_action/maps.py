"""Closed-form holomorphic maps used as chart transitions and chart maps."""

from __future__ import annotations

import math

import numpy as np

from .jets import Jet


class HoloMap:
    kind = "abstract"

    def __call__(self, z):
        return self.derivs(np.asarray(z, dtype=complex), 0)[0]

    def derivs(self, z, k):
        """[g(z), g'(z), ..., g^(k)(z)]"""
        raise NotImplementedError

    def deriv(self, z):
        return self.derivs(np.asarray(z, dtype=complex), 1)[1]

    def apply(self, jet: Jet) -> Jet:
        return jet.apply(self.derivs(jet.value, jet.order))

    def then(self, outer):
        """The composite outer o self."""
        return Composite(outer, self)

    def params(self):
        return []

    def to_dict(self):
        return {"kind": self.kind, "params": [[float(np.real(p)), float(np.imag(p))] for p in self.params()]}


class Mobius(HoloMap):
    kind = "mobius"

    def __init__(self, a, b, c, d):
        self.m = np.array([[a, b], [c, d]], dtype=complex)

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def det(self):
        return self.m[0, 0] * self.m[1, 1] - self.m[0, 1] * self.m[1, 0]

    def derivs(self, z, k):
        (a, b), (c, d) = self.m
        den = c * z + d
        out = [(a * z + b) / den]
        det = self.det
        for n in range(1, k + 1):
            out.append((-1) ** (n + 1) * math.factorial(n) * det * c ** (n - 1) / den ** (n + 1))
        return out

    def inverse(self):
        (a, b), (c, d) = self.m
        return Mobius(d, -b, -c, a)

    def compose(self, inner):
        return Mobius.from_matrix(self.m @ inner.m)

    def params(self):
        return list(self.m.ravel())


class Translation(Mobius):
    kind = "translation"

    def __init__(self, b):
        super().__init__(1.0, b, 0.0, 1.0)
        self.b = complex(b)

    def derivs(self, z, k):
        out = [z + self.b]
        if k >= 1:
            out.append(np.ones_like(z))
        out += [np.zeros_like(z)] * (k - 1)
        return out

    def inverse(self):
        return Translation(-self.b)

    def params(self):
        return [self.b]


class Affine(Mobius):
    kind = "affine"

    def __init__(self, a, b):
        super().__init__(a, b, 0.0, 1.0)
        self.a, self.b = complex(a), complex(b)

    def derivs(self, z, k):
        out = [self.a * z + self.b]
        if k >= 1:
            out.append(np.full_like(z, self.a))
        out += [np.zeros_like(z)] * (k - 1)
        return out

    def inverse(self):
        return Affine(1 / self.a, -self.b / self.a)

    def params(self):
        return [self.a, self.b]


class ExpAffine(HoloMap):
    """z -> exp(s (z + c))"""

    kind = "exp_affine"

    def __init__(self, s, c):
        self.s, self.c = complex(s), complex(c)

    def derivs(self, z, k):
        e = np.exp(self.s * (z + self.c))
        return [self.s ** n * e for n in range(k + 1)]

    def inverse(self):
        return LogAffine(self.s, -self.c)

    def params(self):
        return [self.s, self.c]


class LogAffine(HoloMap):
    """z -> log(z)/s + c with the principal logarithm (regions avoid the cut)."""

    kind = "log_affine"

    def __init__(self, s, c):
        self.s, self.c = complex(s), complex(c)

    def derivs(self, z, k):
        out = [np.log(z) / self.s + self.c]
        for n in range(1, k + 1):
            out.append((-1) ** (n - 1) * math.factorial(n - 1) / (self.s * z ** n))
        return out

    def inverse(self):
        return ExpAffine(self.s, -self.c)

    def params(self):
        return [self.s, self.c]


class Composite(HoloMap):
    kind = "composite"

    def __init__(self, outer, inner):
        self.outer, self.inner = outer, inner

    def derivs(self, z, k):
        j = Jet.variable(z, k)
        out = self.outer.apply(self.inner.apply(j))
        return [out.derivative(n, 0) for n in range(k + 1)]

    def inverse(self):
        return Composite(self.inner.inverse(), self.outer.inverse())

    def to_dict(self):
        return {"kind": "composite", "outer": self.outer.to_dict(), "inner": self.inner.to_dict()}


def _cplx(p):
    if isinstance(p, (list, tuple)):
        return complex(p[0], p[1])
    return complex(p)


KINDS = {
    "mobius": lambda p: Mobius(*p),
    "translation": lambda p: Translation(*p),
    "affine": lambda p: Affine(*p),
    "exp_affine": lambda p: ExpAffine(*p),
    "log_affine": lambda p: LogAffine(*p),
}


class UnknownKind(KeyError):
    pass


def from_dict(spec, path="map"):
    kind = spec.get("kind")
    if kind == "composite":
        return Composite(from_dict(spec["outer"], path + ".outer"), from_dict(spec["inner"], path + ".inner"))
    if kind not in KINDS:
        raise UnknownKind(f"{path}.kind: unknown analytic kind {kind!r}")
    return KINDS[kind]([_cplx(p) for p in spec.get("params", [])])


def schwarzian_values(g: HoloMap, z):
    _, d1, d2, d3 = g.derivs(np.asarray(z, dtype=complex), 3)
    return d3 / d1 - 1.5 * (d2 / d1) ** 2
