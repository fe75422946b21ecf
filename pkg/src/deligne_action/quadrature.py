"""Quadrature on segments and on (possibly curved) fan triangles."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gauss_legendre01(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class QuadratureRule:
    triangle_order: int = 10
    segment_order: int = 16

    @property
    def triangle_points_per_axis(self):
        # the collapsed Jacobian adds one degree in the radial variable
        return (self.triangle_order + 3) // 2

    def segment(self):
        return gauss_legendre01(self.segment_order)

    def square(self):
        """Tensor Gauss rule on [0,1]^2 for the collapsed triangle parameters (t, s)."""
        x, w = gauss_legendre01(self.triangle_points_per_axis)
        t, s = np.meshgrid(x, x, indexing="ij")
        return t.ravel(), s.ravel(), np.outer(w, w).ravel()

    def triangle(self):
        """Nodes (u, v) and weights on the reference triangle u, v >= 0, u + v <= 1."""
        t, s, w = self.square()
        return t * (1 - s), t * s, w * t


DEFAULT_RULE = QuadratureRule()
