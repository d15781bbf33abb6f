"""Grid scanning with golden-section refinement of the extrema found on the grid."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

# refined points closer than this are reported once
DEDUP_DISTANCE = 1e-4


def thread_count():
    raw = os.environ.get("WIGNER_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError("WIGNER_THREADS", f"expected a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("WIGNER_THREADS", f"expected a positive integer, got {n}")
    return n


def parallel_map(fn, items):
    """``list(map(fn, items))``, threaded when WIGNER_THREADS > 1; order is preserved."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def golden_section(f, lo, hi, tol=1e-10, maximize=False, max_iter=200):
    """Golden-section search for an extremum of a unimodal ``f`` on ``[lo, hi]``.

    Iterates until the bracket is narrower than ``tol``.  The bracket ends are
    evaluated as well, so a monotone ``f`` returns its better endpoint.
    Returns ``(x, f(x))``.
    """
    sgn = -1.0 if maximize else 1.0

    def g(x):
        return sgn * f(x)

    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if gc < gd:
            b, d, gd = d, c, gc
            c = b - INV_PHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + INV_PHI * (b - a)
            gd = g(d)
    best = min([(gc, c), (gd, d), (g(lo), float(lo)), (g(hi), float(hi))])
    return best[1], sgn * best[0]


def candidate_indices(values, maximize=False, periodic=None, slack=5e-3, limit=64):
    """Grid points that are (non-strict) local extrema within ``slack`` of the grid extreme.

    Neighbourhoods are the full 3**ndim box; axes flagged in ``periodic``
    wrap around.  At most ``limit`` points are returned, best first.
    """
    v = -np.asarray(values, dtype=float) if maximize else np.asarray(values, dtype=float)
    ndim = v.ndim
    periodic = periodic or (False,) * ndim
    is_ext = np.ones(v.shape, dtype=bool)
    for offset in np.ndindex(*(3,) * ndim):
        shift = tuple(o - 1 for o in offset)
        if not any(shift):
            continue
        nb = v
        valid = np.ones(v.shape, dtype=bool)
        for axis, s in enumerate(shift):
            if s == 0:
                continue
            nb = np.roll(nb, -s, axis=axis)
            if not periodic[axis]:
                edge = [slice(None)] * ndim
                edge[axis] = slice(-1, None) if s > 0 else slice(0, 1)
                valid[tuple(edge)] = False
        is_ext &= ~valid | (v <= nb)
    is_ext &= v <= v.min() + slack
    idx = np.argwhere(is_ext)
    order = sorted(range(len(idx)), key=lambda k: (v[tuple(idx[k])], tuple(idx[k])))
    return [tuple(int(i) for i in idx[k]) for k in order[:limit]]


def coordinate_refine(f, x0, lower, upper, tol=1e-10, maximize=False, rounds=12):
    """Alternate golden-section searches along each coordinate inside a box.

    ``lower`` and ``upper`` bound the search box (a grid cell neighbourhood
    around ``x0``).  Stops when a full round no longer improves the value.
    """
    x = [float(c) for c in x0]
    best = f(*x)
    for _ in range(rounds):
        before = best
        for axis in range(len(x)):
            def line(t, axis=axis):
                y = list(x)
                y[axis] = t
                return f(*y)
            t, val = golden_section(line, lower[axis], upper[axis], tol=tol, maximize=maximize)
            if (val > best) if maximize else (val < best):
                x[axis], best = t, val
        if len(x) == 1 or abs(best - before) <= 1e-15:
            break
    return tuple(x), best


@dataclass(frozen=True)
class Extremum:
    params: tuple
    value: float


def refine_grid_extrema(f, axes, values, maximize=False, periodic=None, tol=1e-10,
                        keep_within=1e-6, slack=5e-3, limit=64, wrap=None):
    """Refine every promising grid extremum and return all that reach the global extreme.

    ``axes`` are the coordinate arrays of the grid behind ``values``.  Each
    candidate is refined in the box spanned by its grid neighbours.  The
    result is the list of refined points whose value lies within
    ``keep_within`` of the best refined value, deduplicated and sorted by
    coordinates.  ``wrap`` maps a refined point to its canonical form (e.g.
    reducing a phase modulo 2 pi) before deduplication.
    """
    periodic = periodic or (False,) * len(axes)
    cands = candidate_indices(values, maximize=maximize, periodic=periodic, slack=slack, limit=limit)

    def refine(index):
        x0, lo, hi = [], [], []
        for axis, i in enumerate(index):
            grid = axes[axis]
            n = len(grid)
            step = (grid[-1] - grid[0]) / (n - 1) if n > 1 else 0.0
            x0.append(grid[i])
            if periodic[axis]:
                lo.append(grid[i] - step)
                hi.append(grid[i] + step)
            else:
                lo.append(grid[max(i - 1, 0)])
                hi.append(grid[min(i + 1, n - 1)])
        return coordinate_refine(f, x0, lo, hi, tol=tol, maximize=maximize)

    refined = parallel_map(refine, cands)
    if not refined:
        return []
    best = max(v for _, v in refined) if maximize else min(v for _, v in refined)
    hits = []
    for x, v in refined:
        if abs(v - best) > keep_within:
            continue
        if wrap is not None:
            x = wrap(x)
        if any(math.dist(x, h.params) < DEDUP_DISTANCE for h in hits):
            continue
        hits.append(Extremum(tuple(float(c) for c in x), float(v)))
    hits.sort(key=lambda e: e.params)
    return hits
