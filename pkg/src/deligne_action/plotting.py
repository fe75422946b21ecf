"""Report figures, written as PNG files next to the JSON output."""

from __future__ import annotations

from pathlib import Path as FsPath

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .fields import FanTriangle  # noqa: E402


def triangle_outline(tri: FanTriangle, n=24):
    """Boundary of a fan triangle as a closed polyline, in the chart it is drawn in."""
    s = np.linspace(0.0, 1.0, n)
    far = tri.far.point(s)
    a0, a1 = far[0], far[-1]
    pts = np.concatenate([tri.apex + s * (a0 - tri.apex), far, a1 + s * (tri.apex - a1)])
    return pts if tri.holo is None else tri.holo(pts)


def _save(fig, path):
    path = FsPath(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)
    return str(path)


def _grid(count):
    cols = min(4, count)
    rows = int(np.ceil(count / cols))
    fig, axes = plt.subplots(rows, cols, figsize=(3.2 * cols, 3.0 * rows), squeeze=False)
    for ax in axes.flat[count:]:
        ax.axis("off")
    return fig, list(axes.flat)


def plot_cover(sc, path):
    """One panel per chart: its domain, the overlaps it hosts, and their seeds."""
    cover = sc.cover
    ids = list(cover.ids)
    fig, axes = _grid(len(ids))
    for ax, i in zip(axes, ids):
        v = cover.chart(i).domain.vertices
        ax.fill(v.real, v.imag, alpha=0.15, color="tab:blue")
        for t in cover.intersections:
            if len(t) > 1 and t[-1] == i:
                w = cover.region(t).vertices
                ax.plot(np.append(w.real, w[0].real), np.append(w.imag, w[0].imag), lw=0.6,
                        color="tab:orange" if len(t) == 2 else "tab:red")
                z = cover.seed(t)
                ax.plot(z.real, z.imag, ".", ms=3, color="k")
        ax.set_title(f"chart {i}", fontsize=9)
        ax.set_aspect("equal")
        ax.tick_params(labelsize=6)
    fig.suptitle(f"{sc.name}: charts, overlaps and seeds", fontsize=10)
    return _save(fig, path)


def plot_fundamental_cycle(cycle, path):
    """The Sigma0 triangles, each drawn in its own chart, coloured by orientation sign."""
    charts = sorted({tau[0] for (tau, _), _ in cycle.sigma0})
    fig, axes = _grid(len(charts))
    panel = dict(zip(charts, axes))
    for (tau, lab), c in cycle.sigma0:
        z = triangle_outline(cycle.geometry.realize(tau, lab))
        panel[tau[0]].fill(z.real, z.imag, alpha=0.25, color="tab:green" if c > 0 else "tab:purple")
        panel[tau[0]].plot(z.real, z.imag, lw=0.4, color="k")
    for i, ax in panel.items():
        ax.set_title(f"chart {i}", fontsize=9)
        ax.set_aspect("equal")
        ax.tick_params(labelsize=6)
    fig.suptitle("fundamental cycle: star triangles (green +, purple -)", fontsize=10)
    return _save(fig, path)


def plot_polygon_cycle(pcycle, path):
    """The fan of F triangles over the fundamental polygon, in the plane of the group's action."""
    from .group_cohomology import geodesic_triangle

    fig, ax = plt.subplots(figsize=(5, 5))
    plane = pcycle.group.plane
    for (el, s), c in pcycle.F:
        z = triangle_outline(geodesic_triangle(*s, plane=plane), 40)
        ax.fill(z.real, z.imag, alpha=0.2, color="tab:blue" if c > 0 else "tab:red")
        ax.plot(z.real, z.imag, lw=0.5, color="k")
    v = np.array(pcycle.group.vertices)
    ax.plot(v.real, v.imag, "o", ms=3, color="tab:red")
    ax.plot(pcycle.apex.real, pcycle.apex.imag, "*", ms=8, color="tab:orange")
    ax.set_aspect("equal")
    ax.set_title(f"fundamental polygon, genus {pcycle.group.genus}", fontsize=10)
    return _save(fig, path)


def plot_fd_convergence(result: dict, path):
    """Central differences against the step, with the extrapolated value and the prediction."""
    steps = np.asarray(result["steps"])
    raw = np.array([complex(*x) for x in result["raw_differences"]])
    pred = complex(*result["predicted"])
    fd = complex(*result["fd"])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    err = np.abs(raw - pred) / max(abs(pred), 1e-300)
    ax.loglog(steps, np.maximum(err, 1e-18), "o-", label="central difference")
    ax.axhline(max(abs(fd - pred) / max(abs(pred), 1e-300), 1e-18), ls="--", color="tab:green",
               label="Richardson")
    ax.set_xlabel("step t")
    ax.set_ylabel("relative error")
    ax.legend(fontsize=8)
    ax.set_title("finite-difference variation", fontsize=10)
    return _save(fig, path)


def plot_suite(results, path):
    """log10(residual / tol) per check, grouped by criterion; bars left of zero pass."""
    labels, values, colors = [], [], []
    for res in results:
        parts = res.report.details.get("parts", [res.report.to_dict()])
        for p in parts:
            r, t = p["residual"], p["tol"]
            if t > 0:
                x = np.log10(max(r, 1e-18) / t)
            else:
                x = -1.0 if r == 0 else 1.0
            labels.append(f"{res.number}: {p['check']}"[:60])
            values.append(x)
            colors.append("tab:green" if p["passed"] else "tab:red")
    fig, ax = plt.subplots(figsize=(8, 0.18 * len(labels) + 1))
    y = np.arange(len(labels))
    ax.barh(y, values, color=colors)
    ax.axvline(0.0, color="k", lw=0.8)
    ax.set_yticks(y)
    ax.set_yticklabels(labels, fontsize=5)
    ax.invert_yaxis()
    ax.set_xlabel("log10(residual / tol); exact checks shown as -1 (pass) or +1 (fail)")
    return _save(fig, path)
