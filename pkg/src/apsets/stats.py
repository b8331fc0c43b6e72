"""Counting statistics of windowed configurations.

Three measurements: cube-count density with shift diagnostics, the maximum
local count over unit-scale balls (the bounded-local-counts constant of
almost periodic inputs), and the translation discrepancy of convex shapes,
whose growth rate separates almost periodic configurations (flat constant)
from generic ones.

A density limit is not computable from one window, so the estimate reports
the largest-cube ratio together with the finite-size trend, never a
claimed limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BALL,
    CUBE,
    PointConfiguration,
    Window,
    as_point,
    count_in,
    fits_inside,
    shrink_window,
)
from .errors import ValidationError, WindowTooSmallError


@dataclass(frozen=True)
class DensitySample:
    edge: float
    alpha: np.ndarray
    count: int
    ratio: float


@dataclass(frozen=True)
class DensityEstimate:
    """Cube counts count(Q(alpha, T)) / T^k over a ladder of edges T.

    ``extrapolated`` is the origin ratio at the largest T;
    ``max_shift_deviation`` is the worst |ratio(alpha, T_max) -
    ratio(0, T_max)| over the requested shifts.
    """

    samples: tuple
    extrapolated: float
    max_shift_deviation: float

    def ratio(self, alpha, edge: float) -> float:
        alpha = np.asarray(alpha, dtype=float)
        for s in self.samples:
            if s.edge == edge and np.array_equal(s.alpha, alpha):
                return s.ratio
        raise KeyError(f"no sample at alpha={alpha.tolist()}, T={edge}")


def density_estimate(d: PointConfiguration, alphas, edges) -> DensityEstimate:
    """Count points in every cube Q(alpha, T) for the given shifts and edges.

    The origin is always measured as the reference; every requested cube
    must fit inside the window.
    """
    edges = [float(t) for t in edges]
    if not edges or any(t <= 0 for t in edges):
        raise ValidationError("edges must be a nonempty list of positive reals")
    alphas = [as_point(a, d.dim) for a in alphas]
    origin = as_point(np.zeros(d.dim), d.dim)
    t_max = max(edges)
    all_alphas = [origin] + [a for a in alphas if not np.array_equal(a, origin)]
    for a in all_alphas:
        for t in edges:
            if not fits_inside(d.window, Window(CUBE, a, t)):
                raise WindowTooSmallError(
                    f"cube Q({a.tolist()}, {t}) does not fit in the window"
                )
    samples = []
    for a in all_alphas:
        for t in edges:
            c = count_in(d, Window(CUBE, a, t))
            samples.append(DensitySample(t, a, c, c / t**d.dim))
    ref = next(s.ratio for s in samples if s.edge == t_max and np.array_equal(s.alpha, origin))
    deviation = 0.0
    for s in samples:
        if s.edge == t_max:
            deviation = max(deviation, abs(s.ratio - ref))
    return DensityEstimate(tuple(samples), ref, deviation)


def default_ball_centers(d: PointConfiguration, radius: float) -> np.ndarray:
    """Grid of step radius/2 covering the window shrunk by radius."""
    core = shrink_window(d.window, radius)
    if core.is_empty:
        return d.window.center.reshape(1, -1)
    lo, hi = core.bounds()
    step = radius / 2
    axes = []
    for i in range(d.dim):
        n = int(math.floor((hi[i] - lo[i]) / step + 1e-9)) + 1
        axes.append(lo[i] + step * np.arange(n))
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack(mesh, axis=-1).reshape(-1, d.dim)
    if core.kind == BALL:
        pts = pts[core.contains(pts)]
    return pts


def local_count_max(d: PointConfiguration, centers=None, radius: float = 1.0) -> int:
    """Maximum count of points in an open ball B(c, radius) over the centers.

    Centers default to a grid of step radius/2 covering the window shrunk
    by the radius, so the scanned balls stay inside the window.
    """
    if not (radius > 0 and math.isfinite(radius)):
        raise ValidationError("radius must be a positive finite number")
    if centers is None:
        centers = default_ball_centers(d, radius)
    else:
        centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if len(d) == 0 or centers.shape[0] == 0:
        return 0
    r2 = radius * radius
    best = 0
    chunk = max(1, int(4e6 // max(len(d), 1)))
    for start in range(0, centers.shape[0], chunk):
        block = centers[start:start + chunk]
        d2 = ((block[:, None, :] - d.points[None, :, :]) ** 2).sum(axis=2)
        best = max(best, int((d2 < r2).sum(axis=1).max()))
    return best


@dataclass(frozen=True)
class DiscrepancyObservation:
    diameter: float
    shift: np.ndarray
    delta: int


@dataclass(frozen=True)
class DiscrepancyReport:
    """Translation discrepancy |count(E) - count(E + t)| over a shape family.

    ``fitted_c`` is the worst observed ratio delta / (diam(E)^(k-1) + 1);
    for almost periodic inputs it stabilizes as diameters grow.
    """

    family: str
    dim: int
    observed: tuple
    fitted_c: float

    def fitted_c_over(self, lo: float, hi: float) -> float:
        sel = [o for o in self.observed if lo <= o.diameter <= hi]
        if not sel:
            return 0.0
        return max(o.delta / (o.diameter ** (self.dim - 1) + 1) for o in sel)


def discrepancy_scan(d: PointConfiguration, shapes, shifts,
                     family: str = "") -> DiscrepancyReport:
    """Tabulate |count(E) - count(E + t)| for every shape and shift.

    Shapes are Windows (cubes or balls) or any object with vectorized
    ``contains``, ``translate``, ``diameter``, and ``bounds``; both E and
    E + t must fit inside the window.
    """
    shifts = [as_point(t, d.dim) for t in shifts]
    observed = []
    for shape in shapes:
        if not fits_inside(d.window, shape):
            raise WindowTooSmallError(f"shape {shape!r} does not fit in the window")
        base = count_in(d, shape)
        for t in shifts:
            moved = shape.translate(t)
            if not fits_inside(d.window, moved):
                raise WindowTooSmallError(
                    f"shifted shape {shape!r} + {t.tolist()} does not fit in the window"
                )
            delta = abs(count_in(d, moved) - base)
            observed.append(DiscrepancyObservation(shape.diameter, t, int(delta)))
    fitted = max((o.delta / (o.diameter ** (d.dim - 1) + 1) for o in observed), default=0.0)
    return DiscrepancyReport(family, d.dim, tuple(observed), fitted)
