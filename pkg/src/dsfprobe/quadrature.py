"""Gauss-Legendre panel quadrature helpers.

Semi-infinite k-integrals are mapped with k = k0 + s*tan(t), t in [0, pi/2),
which turns algebraically decaying tails into smooth bounded integrands.
Near-singular regions (broadened resonance denominators) are handled with
geometrically graded panels around the singular locus.
"""

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=64)
def gauss_legendre(n):
    x, w = leggauss(int(n))
    return x, w


def panel_nodes(edges, n):
    """Composite Gauss-Legendre nodes/weights for the panels defined by edges.

    edges may be 1-D (single panel chain) or 2-D with one chain per row; in the
    2-D case rows are flattened in order.
    """
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(n)
    a = edges[..., :-1]
    b = edges[..., 1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    pts = half[..., None] * x + mid[..., None]
    wts = half[..., None] * w + np.zeros_like(pts)
    return pts.reshape(-1), wts.reshape(-1)


def tail_nodes(k0, scale, n_panels, n):
    """Nodes/weights for int_{k0}^inf dk via k = k0 + scale*tan(t)."""
    t, wt = panel_nodes(np.linspace(0.0, np.pi / 2, n_panels + 1), n)
    k = k0 + scale * np.tan(t)
    w = scale * wt / np.cos(t) ** 2
    return k, w


def graded_edges(center, step0, lo, hi, growth=2.0, max_steps=48):
    """Panel edges clustered geometrically around center, covering [lo, hi]."""
    out = [min(max(center, lo), hi)]
    d = step0
    for _ in range(max_steps):
        if out[-1] >= hi:
            break
        out.append(min(out[-1] + d, hi))
        d *= growth
    left = [out[0]]
    d = step0
    for _ in range(max_steps):
        if left[-1] <= lo:
            break
        left.append(max(left[-1] - d, lo))
        d *= growth
    edges = np.unique(np.concatenate([left, out]))
    return edges


def merge_edges(*edge_sets, lo=None, hi=None, min_width=0.0):
    """Union of several edge arrays, optionally clipped, dropping slivers."""
    e = np.unique(np.concatenate([np.asarray(s, dtype=float) for s in edge_sets]))
    if lo is not None or hi is not None:
        e = np.clip(e, lo, hi)
        e = np.unique(e)
    if min_width > 0 and len(e) > 2:
        keep = [e[0]]
        for v in e[1:-1]:
            if v - keep[-1] >= min_width:
                keep.append(v)
        keep.append(e[-1])
        e = np.asarray(keep)
    return e


def adaptive_panel_integrate(f, edges, n=12, rel_tol=1e-7, max_panels=256):
    """Adaptively refined composite quadrature of a vectorized scalar function.

    Each panel is estimated with n and 2n nodes; panels whose difference
    dominates the error budget are split until the total estimated error is
    below rel_tol (relative to the running total) or max_panels is reached.
    Returns (value, error_estimate).
    """
    edges = np.asarray(edges, dtype=float)

    def panel_est(a, b):
        p1, w1 = panel_nodes(np.array([a, b]), n)
        p2, w2 = panel_nodes(np.array([a, b]), 2 * n)
        v1 = np.dot(w1, f(p1))
        v2 = np.dot(w2, f(p2))
        return v2, abs(v2 - v1)

    panels = []
    for a, b in zip(edges[:-1], edges[1:]):
        if b > a:
            panels.append((a, b, *panel_est(a, b)))

    for _ in range(max_panels):
        total = sum(p[2] for p in panels)
        err = sum(p[3] for p in panels)
        tol = rel_tol * max(abs(total), 1e-300)
        if err <= tol:
            break
        panels.sort(key=lambda p: -p[3])
        a, b, _, _ = panels.pop(0)
        m = 0.5 * (a + b)
        panels.append((a, m, *panel_est(a, m)))
        panels.append((m, b, *panel_est(m, b)))

    total = sum(p[2] for p in panels)
    err = sum(p[3] for p in panels)
    return total, err
