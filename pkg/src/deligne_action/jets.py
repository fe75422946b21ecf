"""Truncated Taylor jets in the Wirtinger variables z and zbar.

A jet of order N at a batch of base points stores the coefficients
c[a, b] = d^a dbar^b F / (a! b!) for a + b <= N.  Arithmetic, composition
with holomorphic maps and with other jets, and the Wirtinger derivatives
are exact on the truncated level, so every field built from closed-form
ingredients carries its derivatives along without finite differences.
"""

from __future__ import annotations

import math

import numpy as np


def _mask(order):
    a = np.arange(order + 1)
    return (a[:, None] + a[None, :]) <= order


class Jet:
    __array_priority__ = 100

    def __init__(self, coeffs, order):
        self.c = coeffs
        self.order = order

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, value, order, shape=None):
        value = np.asarray(value, dtype=complex)
        if shape is not None:
            value = np.broadcast_to(value, shape)
        c = np.zeros((order + 1, order + 1) + value.shape, dtype=complex)
        c[0, 0] = value
        return cls(c, order)

    @classmethod
    def variable(cls, points, order):
        """The coordinate z itself, expanded at ``points``."""
        points = np.asarray(points, dtype=complex)
        c = np.zeros((order + 1, order + 1) + points.shape, dtype=complex)
        c[0, 0] = points
        if order >= 1:
            c[1, 0] = 1.0
        return cls(c, order)

    @property
    def value(self):
        return self.c[0, 0]

    @property
    def shape(self):
        return self.c.shape[2:]

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot raise jet order")
        c = self.c[: order + 1, : order + 1].copy()
        c[~_mask(order)] = 0
        return Jet(c, order)

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.order != self.order:
                n = min(self.order, other.order)
                return self.truncate(n), other.truncate(n)
            return self, other
        return self, Jet.constant(other, self.order, self.shape)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce(other)
        return Jet(a.c + b.c, a.order)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c, self.order)

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Jet(a.c - b.c, a.order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * np.asarray(other), self.order)
        a, b = self._coerce(other)
        n = a.order
        out = np.zeros(np.broadcast_shapes(a.c.shape, b.c.shape), dtype=complex)
        for i in range(n + 1):
            for j in range(n + 1 - i):
                out[i:, j:] += a.c[i, j] * b.c[: n + 1 - i, : n + 1 - j]
        out[~_mask(n)] = 0
        return Jet(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / np.asarray(other), self.order)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k):
        if isinstance(k, int) and k >= 0:
            out = Jet.constant(1.0, self.order, self.shape)
            for _ in range(k):
                out = out * self
            return out
        return self.power(k)

    # scalar functions via Taylor series ---------------------------------
    def nilpotent(self):
        c = self.c.copy()
        c[0, 0] = 0
        return Jet(c, self.order)

    def apply(self, derivs):
        """Compose with a holomorphic scalar function.

        ``derivs`` lists g(v), g'(v), ..., g^(N)(v) at the base values v.
        """
        x = self.nilpotent()
        out = Jet.constant(derivs[0], self.order, self.shape)
        power = Jet.constant(1.0, self.order, self.shape)
        for k in range(1, self.order + 1):
            power = power * x
            out = out + power * (derivs[k] / math.factorial(k))
        return out

    def reciprocal(self):
        v = self.value
        return self.apply([(-1) ** k * math.factorial(k) / v ** (k + 1) for k in range(self.order + 1)])

    def exp(self):
        e = np.exp(self.value)
        return self.apply([e] * (self.order + 1))

    def log(self, branch=None):
        """Logarithm; ``branch`` gives the value of log at the base points."""
        v = self.value
        base = np.log(v) if branch is None else branch
        ds = [base] + [(-1) ** (k - 1) * math.factorial(k - 1) / v ** k for k in range(1, self.order + 1)]
        return self.apply(ds)

    def power(self, alpha):
        v = self.value
        ds = []
        coef = 1.0
        for k in range(self.order + 1):
            ds.append(coef * v ** (alpha - k))
            coef *= alpha - k
        return self.apply(ds)

    def sqrt(self):
        return self.power(0.5)

    def conj(self):
        c = np.conj(np.swapaxes(self.c, 0, 1))
        return Jet(c, self.order)

    @property
    def real(self):
        return (self + self.conj()) * 0.5

    # derivatives --------------------------------------------------------
    def dz(self):
        n = self.order - 1
        a = np.arange(1, n + 2)
        c = self.c[1 : n + 2, : n + 1] * a.reshape((-1, 1) + (1,) * len(self.shape))
        c = c.copy()
        c[~_mask(n)] = 0
        return Jet(c, n)

    def dzbar(self):
        n = self.order - 1
        b = np.arange(1, n + 2)
        c = self.c[: n + 1, 1 : n + 2] * b.reshape((1, -1) + (1,) * len(self.shape))
        c = c.copy()
        c[~_mask(n)] = 0
        return Jet(c, n)

    def derivative(self, a, b):
        """Value of d^a dbar^b at the base points."""
        return self.c[a, b] * math.factorial(a) * math.factorial(b)

    # composition --------------------------------------------------------
    def compose(self, inner):
        """Evaluate this jet (a function of w, wbar) along ``inner`` (w as a jet in z).

        The base values of ``inner`` must equal the base points of self.
        """
        n = min(self.order, inner.order)
        u = inner.nilpotent().truncate(n)
        ub = u.conj()
        upow = [Jet.constant(1.0, n, inner.shape)]
        vpow = [Jet.constant(1.0, n, inner.shape)]
        for _ in range(n):
            upow.append(upow[-1] * u)
            vpow.append(vpow[-1] * ub)
        out = Jet.constant(0.0, n, np.broadcast_shapes(self.shape, inner.shape))
        for a in range(n + 1):
            for b in range(n + 1 - a):
                coef = self.c[a, b]
                if np.any(coef != 0):
                    out = out + (upow[a] * vpow[b]) * coef
        return out


def holomorphic_jet(values, order):
    """Jet of a holomorphic function from its derivative values g, g', ..., g^(N)."""
    values = [np.asarray(v, dtype=complex) for v in values]
    shape = values[0].shape
    c = np.zeros((order + 1, order + 1) + shape, dtype=complex)
    for k in range(order + 1):
        c[k, 0] = values[k] / math.factorial(k)
    return Jet(c, order)


def lift(x, order, shape):
    if isinstance(x, Jet):
        return x
    return Jet.constant(x, order, shape)
