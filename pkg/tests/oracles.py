"""Independent reference computations and the values frozen from them.

Nothing here goes through the package's quadrature, cochain or pairing code.
"""

import math

import numpy as np


def monomial_over_triangle(a, b):
    """int over {u, v >= 0, u + v <= 1} of u^a v^b (Dirichlet integral)."""
    return math.factorial(a) * math.factorial(b) / math.factorial(a + b + 2)


def torus_action(mu, h):
    """Constant mu and h on the unit square: S = 2 pi i * 2 mu h * (-2i) * area."""
    return 2j * np.pi * 2 * mu * h * (-2j) * 1.0


def nerve_euler_characteristic(faces):
    """V - E + F of the 2-complex spanned by the oriented faces."""
    verts = {i for f in faces for i in f}
    edges = {tuple(sorted(e)) for f in faces for e in ((f[0], f[1]), (f[1], f[2]), (f[0], f[2]))}
    return len(verts) - len(edges) + len(faces)


def gauss_bonnet_euler(area):
    """Curvature -1: chi = -area / 2 pi."""
    return -area / (2 * np.pi)


def schwarzian_of_exp(s):
    """{exp(s z), z} = -s^2 / 2."""
    return -s * s / 2


def mobius_rotation_numbers_by_sampling(m, z, n=4000):
    """arg(c w + d) continued along the segment from i to z, by dense sampling."""
    c, d = m[1]
    t = np.linspace(0.0, 1.0, n)
    w = 1j + t * (z - 1j)
    ang = np.unwrap(np.angle(c * w + d))
    return ang[-1] - ang[0] + np.angle(c * 1j + d)


# frozen: Richardson-extrapolated central difference of S along the sphere flow;
# the direct quadrature of 2 pi i int_X a(f, v) agreed to 6e-9 when it was taken
SPHERE_VARIATION = 4.6710121 - 1.8101585j
SPHERE_VARIATION_RTOL = 1e-6
