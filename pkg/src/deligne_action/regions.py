"""Polygonal coordinate regions and branch-continued logarithms on them."""

from __future__ import annotations

import numpy as np
from matplotlib.path import Path as MplPath

# barycentric sample pattern inside each fan triangle (centroid, v_k, v_k+1)
_PATTERN = np.array([
    [0.6, 0.2, 0.2],
    [0.3, 0.35, 0.35],
    [0.2, 0.7, 0.1],
    [0.2, 0.1, 0.7],
    [0.45, 0.45, 0.1],
    [0.45, 0.1, 0.45],
])


class Region:
    """A star-shaped polygon (counterclockwise vertex list) in a chart coordinate."""

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=complex)
        if len(v) < 3:
            raise ValueError("a region needs at least three vertices")
        if _signed_area(v) < 0:
            v = v[::-1]
        self.vertices = v
        self._path = MplPath(np.column_stack([v.real, v.imag]))

    @property
    def area(self):
        return _signed_area(self.vertices)

    @property
    def centroid(self):
        v = self.vertices
        w = np.roll(v, -1)
        cross = (v.real * w.imag - w.real * v.imag)
        a = cross.sum() / 2
        return complex(((v + w) * cross).sum() / (6 * a))

    def contains(self, points, margin=0.0):
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        return self._path.contains_points(np.column_stack([pts.real, pts.imag]), radius=-margin)

    def samples(self, per_triangle=2):
        c = self.centroid
        v = self.vertices
        w = np.roll(v, -1)
        pat = _PATTERN[:per_triangle]
        pts = pat[:, 0, None] * c + pat[:, 1, None] * v[None, :] + pat[:, 2, None] * w[None, :]
        return pts.T.ravel()

    def diameter(self):
        v = self.vertices
        return float(np.max(np.abs(v[:, None] - v[None, :])))

    def to_list(self):
        return [[float(z.real), float(z.imag)] for z in self.vertices]


def _signed_area(v):
    w = np.roll(v, -1)
    return float((v.real * w.imag - w.real * v.imag).sum() / 2)


class BranchError(RuntimeError):
    pass


def continue_log(values, base, base_log, targets, steps=16, max_steps=4096):
    """Logarithm of a nonvanishing function continued along straight segments.

    ``values`` evaluates the function at an array of points; the branch at
    ``base`` is ``base_log``.  Steps are refined until every increment of the
    argument stays below pi/2.
    """
    targets = np.atleast_1d(np.asarray(targets, dtype=complex))
    if targets.size == 0:
        return targets.copy()
    while True:
        t = np.linspace(0.0, 1.0, steps + 1)[:, None]
        pts = base + t * (targets[None, :] - base)
        vals = values(pts.ravel()).reshape(pts.shape)
        if np.any(vals == 0):
            raise BranchError("function vanishes on a continuation path")
        ratio = vals[1:] / vals[:-1]
        jumps = np.angle(ratio)
        if np.max(np.abs(jumps)) < np.pi / 2:
            return base_log + np.log(np.abs(vals[-1] / vals[0])) + 1j * jumps.sum(axis=0)
        if steps >= max_steps:
            raise BranchError("argument jumps exceed pi/2 after maximal subdivision")
        steps *= 2
