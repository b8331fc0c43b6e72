"""Windows, point configurations, and the translation/restriction algebra.

A configuration is a finite multiset of points in R^k observed through an
axis-aligned window.  It is the computational stand-in for an unbounded
discrete point set: every quantity computed downstream carries the window
it was measured on, so truncation is always explicit.

Conventions, fixed once for the whole library:

* cubes ``Q(x, L)`` are half-open: ``x - L/2 <= y < x + L/2`` per coordinate;
* balls ``B(x, R)`` are open: ``|y - x| < R`` in the Euclidean norm;
* multiplicity is encoded by row repetition in the point array, never by a
  count field, so index-based matchings handle coincident points for free.

All values are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ValidationError

CUBE = "cube"
BALL = "ball"


def as_point(x, dim: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float vector, optionally checking its dimension."""
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.ndim != 1:
        raise ValidationError(f"a point must be a flat coordinate vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValidationError("point coordinates must be finite")
    if dim is not None and p.size != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {p.size}")
    p.flags.writeable = False
    return p


class _EmptyWindow:
    """Sentinel for a window shrunk past its extent.  Contains nothing."""

    is_empty = True

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.zeros(pts.shape[0], dtype=bool)

    def __repr__(self) -> str:
        return "EMPTY_WINDOW"


EMPTY_WINDOW = _EmptyWindow()


@dataclass(frozen=True)
class Window:
    """An axis-aligned observation region: half-open cube or open ball.

    ``extent`` is the edge length for cubes and the radius for balls.
    """

    kind: str
    center: np.ndarray
    extent: float

    is_empty = False

    def __post_init__(self):
        if self.kind not in (CUBE, BALL):
            raise ValidationError(f"unknown window kind {self.kind!r}")
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "extent", float(self.extent))
        if not (self.extent > 0 and math.isfinite(self.extent)):
            raise ValidationError("window extent must be a positive finite number")

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def halfwidth(self) -> float:
        """Inradius of the window: L/2 for cubes, R for balls."""
        return self.extent / 2 if self.kind == CUBE else self.extent

    @property
    def diameter(self) -> float:
        if self.kind == CUBE:
            return self.extent * math.sqrt(self.dim)
        return 2 * self.extent

    @property
    def volume(self) -> float:
        if self.kind == CUBE:
            return self.extent**self.dim
        return unit_ball_volume(self.dim) * self.extent**self.dim

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Bounding box (lo, hi) enclosing the window."""
        h = self.extent / 2 if self.kind == CUBE else self.extent
        return self.center - h, self.center + h

    def contains(self, points) -> np.ndarray:
        """Vectorized membership mask for an (n, k) array of points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.dim:
            raise DimensionMismatchError(
                f"points have dimension {pts.shape[1]}, window has {self.dim}"
            )
        if self.kind == CUBE:
            h = self.extent / 2
            lo, hi = self.center - h, self.center + h
            return np.all((pts >= lo) & (pts < hi), axis=1)
        d2 = ((pts - self.center) ** 2).sum(axis=1)
        return d2 < self.extent**2

    def translate(self, tau) -> "Window":
        tau = as_point(tau, self.dim)
        return Window(self.kind, self.center + tau, self.extent)

    def shrink(self, rho: float):
        """Inner window at depth rho; EMPTY_WINDOW when nothing is left."""
        return shrink_window(self, rho)

    def grow(self, rho: float) -> "Window":
        """Outer window at margin rho (inverse of shrink where defined)."""
        if rho < 0:
            raise ValidationError("grow margin must be nonnegative")
        if self.kind == CUBE:
            return Window(CUBE, self.center, self.extent + 2 * rho)
        return Window(BALL, self.center, self.extent + rho)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Window)
            and self.kind == other.kind
            and self.extent == other.extent
            and np.array_equal(self.center, other.center)
        )

    def __repr__(self) -> str:
        c = ",".join(repr(float(v)) for v in self.center)
        return f"Window({self.kind}, center=({c}), extent={self.extent!r})"


def unit_ball_volume(dim: int) -> float:
    """Lebesgue volume of the unit ball in R^dim."""
    if dim == 1:
        return 2.0  # gamma(1.5) in floats would lose the exact value
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1)


def shrink_window(window: Window, rho: float):
    """The set of points whose rho-ball stays inside the window.

    For cubes the edge shrinks by 2*rho, for balls the radius by rho.
    Returns EMPTY_WINDOW (a value, not an error) when rho eats the whole
    window.
    """
    if rho < 0:
        raise ValidationError("shrink depth must be nonnegative")
    if rho == 0:
        return window
    if window.kind == CUBE:
        new_extent = window.extent - 2 * rho
    else:
        new_extent = window.extent - rho
    if new_extent <= 0:
        return EMPTY_WINDOW
    return Window(window.kind, window.center, new_extent)


@dataclass(frozen=True)
class PointConfiguration:
    """A finite multiset of points confined to a window.

    ``points`` is an (n, dim) float array; repeated rows encode
    multiplicity.  Every point must lie inside the window.
    """

    dim: int
    window: Window
    points: np.ndarray

    def __post_init__(self):
        if self.window.dim != self.dim:
            raise DimensionMismatchError(
                f"window dimension {self.window.dim} != configuration dimension {self.dim}"
            )
        pts = np.asarray(self.points, dtype=float)
        if pts.size == 0:
            pts = pts.reshape(0, self.dim)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise DimensionMismatchError(
                f"points array has shape {pts.shape}, expected (n, {self.dim})"
            )
        if not np.all(np.isfinite(pts)):
            raise ValidationError("point coordinates must be finite")
        inside = self.window.contains(pts)
        if not np.all(inside):
            bad = pts[~inside][0]
            raise ValidationError(f"point {bad.tolist()} lies outside the window")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    def sorted_points(self) -> np.ndarray:
        """Points in lexicographic row order (canonical multiset form)."""
        if len(self) == 0:
            return self.points
        order = np.lexsort(self.points.T[::-1])
        return self.points[order]

    def same_multiset(self, other: "PointConfiguration", tol: float = 0.0) -> bool:
        """Multiset equality of the point lists, ignoring windows."""
        if self.dim != other.dim or len(self) != len(other):
            return False
        a, b = self.sorted_points(), other.sorted_points()
        if tol == 0.0:
            return bool(np.array_equal(a, b))
        return bool(np.all(np.abs(a - b) <= tol))


def config(points, window: Window) -> PointConfiguration:
    """Build a PointConfiguration from anything array-like."""
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        pts = pts.reshape(0, window.dim)
    return PointConfiguration(window.dim, window, pts)


def translate(c: PointConfiguration, tau) -> PointConfiguration:
    """Shift every point and the window by tau; multiplicities survive."""
    tau = as_point(tau, c.dim)
    return PointConfiguration(c.dim, c.window.translate(tau), c.points + tau)


def restrict(c: PointConfiguration, region: Window) -> PointConfiguration:
    """Keep exactly the points (with multiplicity) inside region.

    The region becomes the new window.
    """
    if getattr(region, "is_empty", False):
        raise ValidationError("cannot restrict to an empty window")
    if region.dim != c.dim:
        raise DimensionMismatchError(
            f"region dimension {region.dim} != configuration dimension {c.dim}"
        )
    mask = region.contains(c.points)
    return PointConfiguration(c.dim, region, c.points[mask])


def fits_inside(outer: Window, inner) -> bool:
    """Whether a region lies entirely inside ``outer``.

    ``inner`` may be a Window of either kind or any shape exposing
    ``bounds``; non-window shapes are tested by bounding box, which is
    conservative.
    """
    if getattr(inner, "is_empty", False):
        return True
    if isinstance(inner, Window):
        if inner.kind == CUBE:
            lo, hi = inner.center - inner.extent / 2, inner.center + inner.extent / 2
            if outer.kind == CUBE:
                olo, ohi = outer.bounds()
                return bool(np.all(lo >= olo) and np.all(hi <= ohi))
            corners = np.array(
                np.meshgrid(*[[lo[i], hi[i]] for i in range(outer.dim)], indexing="ij")
            ).reshape(outer.dim, -1).T
            d = np.sqrt(((corners - outer.center) ** 2).sum(axis=1))
            return bool(np.all(d < outer.extent))
        if outer.kind == CUBE:
            olo, ohi = outer.bounds()
            return bool(np.all(inner.center - inner.extent >= olo)
                        and np.all(inner.center + inner.extent <= ohi))
        gap = float(np.sqrt(((inner.center - outer.center) ** 2).sum()))
        return gap + inner.extent <= outer.extent
    lo, hi = inner.bounds()
    olo, ohi = outer.bounds()
    return bool(np.all(lo >= olo) and np.all(hi <= ohi))


def count_in(c: PointConfiguration, region) -> int:
    """Cardinality with multiplicity of the points inside region.

    ``region`` may be a Window, the empty-window sentinel, or any object
    exposing a vectorized ``contains`` mask.
    """
    if getattr(region, "is_empty", False):
        return 0
    if isinstance(region, Window) and region.dim != c.dim:
        raise DimensionMismatchError(
            f"region dimension {region.dim} != configuration dimension {c.dim}"
        )
    if len(c) == 0:
        return 0
    return int(np.count_nonzero(region.contains(c.points)))
