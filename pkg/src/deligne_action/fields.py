"""Chart-local differential forms, exterior derivative, pullback and integration.

A form on a chart is an evaluator ``fn(points, order)`` returning jets:
a function for degree 0, the pair (A, B) of a 1-form A dz + B dzbar, and
the coefficient C of C dz^dzbar for degree 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import Jet
from .quadrature import DEFAULT_RULE, QuadratureRule


class FormDegreeError(ValueError):
    pass


class FormField:
    def __init__(self, degree, fn, label=""):
        if degree not in (0, 1, 2):
            raise FormDegreeError(f"form degree {degree} on a surface")
        self.degree = degree
        self.fn = fn
        self.label = label

    def jets(self, points, order=0):
        return self.fn(np.asarray(points, dtype=complex), order)

    def __call__(self, points):
        """Coefficient values; a (2, n) array for 1-forms."""
        out = self.jets(points, 0)
        if self.degree == 1:
            return np.array([out[0].value, out[1].value])
        return out.value

    # linear structure ---------------------------------------------------
    def __add__(self, other):
        if other is None:
            return self
        _check_same(self, other)

        def fn(p, n):
            return _combine(self.fn(p, n), other.fn(p, n), 1.0, 1.0)

        return FormField(self.degree, fn)

    __radd__ = __add__

    def __sub__(self, other):
        return self + other * -1.0

    def __mul__(self, scalar):
        def fn(p, n):
            x = self.fn(p, n)
            if self.degree == 1:
                return (x[0] * scalar, x[1] * scalar)
            return x * scalar

        return FormField(self.degree, fn)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


def _check_same(a, b):
    if a.degree != b.degree:
        raise FormDegreeError(f"adding forms of degrees {a.degree} and {b.degree}")


def _combine(x, y, s, t):
    if isinstance(x, tuple):
        return (x[0] * s + y[0] * t, x[1] * s + y[1] * t)
    return x * s + y * t


def zero_form(degree):
    def fn(p, n):
        z = Jet.constant(0.0, n, p.shape)
        return (z, z) if degree == 1 else z

    return FormField(degree, fn, "0")


def constant_function(value):
    return FormField(0, lambda p, n: Jet.constant(value, n, p.shape), str(value))


def d(form: FormField) -> FormField:
    if form.degree == 0:
        def fn(p, n):
            f = form.fn(p, n + 1)
            return (f.dz(), f.dzbar())

        return FormField(1, fn, f"d({form.label})")
    if form.degree == 1:
        def fn(p, n):
            a, b = form.fn(p, n + 1)
            return b.dz() - a.dzbar()

        return FormField(2, fn, f"d({form.label})")
    raise FormDegreeError("d of a 2-form on a surface is not represented")


def wedge(alpha: FormField, beta: FormField) -> FormField:
    """Wedge product of forms whose degrees add up to at most 2."""
    pa, pb = alpha.degree, beta.degree
    if pa + pb > 2:
        return zero_form(2)

    def fn(p, n):
        x, y = alpha.fn(p, n), beta.fn(p, n)
        if pa == 0:
            return tuple(c * x for c in y) if pb == 1 else x * y
        if pb == 0:
            return tuple(c * y for c in x) if pa == 1 else x * y
        # (A dz + B dzb) ^ (C dz + E dzb) = (A E - B C) dz^dzb
        return x[0] * y[1] - x[1] * y[0]

    return FormField(pa + pb, fn)


def map_jet(holo):
    """Jet evaluator of a holomorphic map, for use with pullback."""
    return lambda p, n: holo.apply(Jet.variable(p, n))


def pullback(mapfn, form: FormField) -> FormField:
    """Pullback along a smooth map given as a jet evaluator ``mapfn(points, order)``.

    A HoloMap may be passed directly.
    """
    if hasattr(mapfn, "apply"):
        mapfn = map_jet(mapfn)

    def fn(p, n):
        w = mapfn(p, n + 1)
        x = form.fn(w.value, n + 1)
        if form.degree == 0:
            return x.compose(w)
        wz, wzb = w.dz(), w.dzbar()
        wc = w.conj()
        vz, vzb = wc.dz(), wc.dzbar()
        if form.degree == 1:
            a, b = x[0].compose(w), x[1].compose(w)
            return (a * wz + b * vz, a * wzb + b * vzb)
        c = x.compose(w)
        return c * (wz * vzb - wzb * vz)

    return FormField(form.degree, fn, f"pullback({form.label})")


def finite_difference_form(values, degree=0, step=1e-6):
    """Order-one jets from a plain value evaluator by central differences.

    Only for synthetic inputs that carry no analytic derivatives.
    """
    if degree != 0:
        raise FormDegreeError("finite-difference fallback is provided for functions only")

    def fn(p, n):
        if n > 1:
            raise ValueError("finite-difference fallback supports first derivatives only")
        v = np.asarray(values(p), dtype=complex)
        c = np.zeros((n + 1, n + 1) + p.shape, dtype=complex)
        c[0, 0] = v
        if n >= 1:
            fx = (values(p + step) - values(p - step)) / (2 * step)
            fy = (values(p + 1j * step) - values(p - 1j * step)) / (2 * step)
            c[1, 0] = 0.5 * (fx - 1j * fy)
            c[0, 1] = 0.5 * (fx + 1j * fy)
        return Jet(c, n)

    return FormField(0, fn, "fd")


# geometry -------------------------------------------------------------------

@dataclass(frozen=True)
class Path:
    """Straight segment from ``start`` to ``end`` in a source chart, pushed by ``holo``."""

    start: complex
    end: complex
    holo: object = None

    def point(self, s):
        x = self.start + np.asarray(s) * (self.end - self.start)
        return x if self.holo is None else self.holo(x)

    def point_and_velocity(self, s):
        x = self.start + np.asarray(s, dtype=float) * (self.end - self.start)
        if self.holo is None:
            return x, np.full(x.shape, self.end - self.start, dtype=complex)
        g, dg = self.holo.derivs(x, 1)
        return g, dg * (self.end - self.start)

    @property
    def endpoints(self):
        return complex(self.point(0.0)), complex(self.point(1.0))


@dataclass(frozen=True)
class FanTriangle:
    """The cone from ``apex`` over ``far``: sigma(t, s) = apex + t (far(s) - apex).

    Oriented like the affine simplex (apex, far(0), far(1)).  With ``holo``
    set, the cone is drawn in a source chart and pushed forward by it.
    """

    apex: complex
    far: Path
    holo: object = None


def segment_nodes(path: Path, rule: QuadratureRule = DEFAULT_RULE):
    s, w = rule.segment()
    g, v = path.point_and_velocity(s)
    return g, w * v, w * np.conj(v)


def triangle_nodes(tri: FanTriangle, rule: QuadratureRule = DEFAULT_RULE):
    t, s, w = rule.square()
    g, v = tri.far.point_and_velocity(s)
    pts = tri.apex + t * (g - tri.apex)
    sig_t = g - tri.apex
    sig_s = t * v
    if tri.holo is not None:
        pts, dg = tri.holo.derivs(pts, 1)
        sig_t, sig_s = sig_t * dg, sig_s * dg
    return pts, w * (sig_t * np.conj(sig_s) - sig_s * np.conj(sig_t))


def integrate(form: FormField, simplex, rule: QuadratureRule = DEFAULT_RULE) -> complex:
    if isinstance(simplex, FanTriangle):
        if form.degree != 2:
            raise FormDegreeError("a triangle integrates 2-forms")
        pts, w = triangle_nodes(simplex, rule)
        return complex(np.sum(form(pts) * w))
    if isinstance(simplex, Path):
        if form.degree != 1:
            raise FormDegreeError("a path integrates 1-forms")
        pts, wz, wzb = segment_nodes(simplex, rule)
        a, b = form(pts)
        return complex(np.sum(a * wz + b * wzb))
    if form.degree != 0:
        raise FormDegreeError("a point evaluates functions")
    return complex(form(np.array([simplex]))[0])


def area_form(density):
    """(i/2) rho dz^dzbar, the area element of a conformal metric rho |dz|^2."""
    return FormField(2, lambda p, n: density(Jet.variable(p, n)) * 0.5j, "area")
