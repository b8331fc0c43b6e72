"""The counting-measure picture of a configuration.

A configuration D induces the atomic measure with a unit mass at every
point; convolving it with a compactly supported continuous radial profile
phi gives the field  x -> sum_n phi(x - a_n),  the measure-side
fingerprint sampled here on a regular grid.  The sup over R^k is replaced
by the max over grid nodes; with the step at most tol / (2 * Lip(phi) * N)
the discretization error stays below half the tolerance, because the field
is Lipschitz with constant Lip(phi) * N when at most N atoms fall within
the support radius of any node.

The component machinery connects the two pictures in the other direction:
when the field of a nearby configuration agrees within half the profile
mass, the per-component atom counts of the two configurations coincide,
which is the step that turns field closeness back into a small-move
bijection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ._grid import GridIndex
from .core import (
    BALL,
    PointConfiguration,
    Window,
    as_point,
    fits_inside,
    shrink_window,
    unit_ball_volume,
)
from .errors import GridMismatchError, ValidationError, WindowTooSmallError

TENT = "tent"
BUMP = "bump"


def _unit_bump(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    v = u[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - v * v))
    return out


def _unit_bump_lipschitz() -> float:
    # numeric bound on sup |d/du exp(1 - 1/(1 - u^2))| with a safety margin
    u = np.linspace(1e-6, 1 - 1e-6, 200001)
    g = _unit_bump(u) * 2 * u / (1 - u * u) ** 2
    return float(g.max()) * 1.001


_BUMP_LIP_UNIT = _unit_bump_lipschitz()


@dataclass(frozen=True)
class TestFunction:
    """Radial profile phi with phi(0) = 1 and support in the open ball of
    ``support_radius``.

    ``lipschitz`` is exact for the tent profile (1/r) and a numeric upper
    bound for the smooth bump.  ``mass`` is the full-space integral of phi
    in ``dim`` dimensions.
    """

    profile: str
    support_radius: float
    dim: int
    lipschitz: float
    mass: float

    __test__ = False  # keep pytest from collecting the domain type

    @classmethod
    def tent(cls, support_radius: float, dim: int) -> "TestFunction":
        r = float(support_radius)
        if not (r > 0 and math.isfinite(r)):
            raise ValidationError("support radius must be a positive finite number")
        if dim < 1:
            raise ValidationError("dimension must be at least 1")
        # radial integral of (1 - s/r) over the ball: V_k r^k / (k + 1)
        mass = unit_ball_volume(dim) * r**dim / (dim + 1)
        return cls(TENT, r, dim, 1.0 / r, mass)

    @classmethod
    def bump(cls, support_radius: float, dim: int) -> "TestFunction":
        r = float(support_radius)
        if not (r > 0 and math.isfinite(r)):
            raise ValidationError("support radius must be a positive finite number")
        if dim < 1:
            raise ValidationError("dimension must be at least 1")
        surface = dim * unit_ball_volume(dim)
        mass, _err = quad(lambda s: float(_unit_bump(np.array([s / r]))[0])
                          * surface * s ** (dim - 1), 0.0, r)
        return cls(BUMP, r, dim, _BUMP_LIP_UNIT / r, mass)

    def radial(self, dist) -> np.ndarray:
        """Profile values at the given distances from the center."""
        s = np.asarray(dist, dtype=float)
        if self.profile == TENT:
            return np.clip(1.0 - s / self.support_radius, 0.0, 1.0)
        return _unit_bump(s / self.support_radius)

    def __call__(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return float(self.radial(np.sqrt((x * x).sum())))


@dataclass(frozen=True)
class SampleGrid:
    """Regular node lattice covering a window, step > 0, nodes inside."""

    box: Window
    step: float

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ValidationError("grid step must be a positive finite number")

    def nodes(self) -> np.ndarray:
        lo, hi = self.box.bounds()
        axes = []
        for i in range(self.box.dim):
            n = int(math.floor((hi[i] - lo[i]) / self.step - 1e-9)) + 1
            axes.append(lo[i] + self.step * np.arange(max(n, 1)))
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack(mesh, axis=-1).reshape(-1, self.box.dim)
        if self.box.kind == BALL:
            pts = pts[self.box.contains(pts)]
        return pts

    def compatible(self, other: "SampleGrid") -> bool:
        return self.box == other.box and self.step == other.step


@dataclass(frozen=True)
class ConvolutionField:
    """Field samples of one configuration under one profile."""

    grid: SampleGrid
    values: np.ndarray
    source: str = ""


def field_values(d: PointConfiguration, phi: TestFunction, points: np.ndarray) -> np.ndarray:
    """Exact field sums sum_n phi(x - a_n) at arbitrary evaluation points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != d.dim:
        raise ValidationError("evaluation points have the wrong dimension")
    if len(d) == 0:
        return np.zeros(points.shape[0])
    index = GridIndex(d.points, cell=phi.support_radius)
    return index.accumulate(points, phi.support_radius, phi.radial)


def convolve(d: PointConfiguration, phi: TestFunction, grid: SampleGrid) -> ConvolutionField:
    """Sample the field of D on the grid.

    The grid box must fit inside the window shrunk by the support radius,
    so no atom contributing to any node can be missing from the window.
    """
    if phi.dim != d.dim:
        raise ValidationError("profile dimension differs from configuration")
    core = shrink_window(d.window, phi.support_radius)
    if core.is_empty or not fits_inside(core, grid.box):
        raise WindowTooSmallError(
            "grid box must fit inside the window shrunk by the support radius"
        )
    return ConvolutionField(grid, field_values(d, phi, grid.nodes()), source=f"n={len(d)}")


def field_distance(f1: ConvolutionField, f2: ConvolutionField) -> float:
    if not f1.grid.compatible(f2.grid):
        raise GridMismatchError("fields were sampled on different grids")
    if f1.values.shape != f2.values.shape:
        raise GridMismatchError("fields have different node counts")
    if f1.values.size == 0:
        return 0.0
    return float(np.abs(f1.values - f2.values).max())


def weak_uniform_distance(d1: PointConfiguration, d2: PointConfiguration,
                          phi: TestFunction, grid: SampleGrid) -> float:
    """Max nodewise gap between the two fields, the finite surrogate for
    the uniform distance of the convolved measures."""
    return field_distance(convolve(d1, phi, grid), convolve(d2, phi, grid))


def measure_period_check(d: PointConfiguration, tau, eps: float,
                         phi: TestFunction, grid: SampleGrid) -> bool:
    """Whether the field moves by at most eps under the shift tau.

    Compares phi*mu at the grid nodes z with its values at z - tau, so
    both node sets must stay inside the shrunk window.
    """
    tau = as_point(tau, d.dim)
    if not (eps >= 0 and math.isfinite(eps)):
        raise ValidationError("eps must be a nonnegative finite number")
    core = shrink_window(d.window, phi.support_radius)
    shifted_box = grid.box.translate(-tau)
    if core.is_empty or not fits_inside(core, grid.box) or not fits_inside(core, shifted_box):
        raise WindowTooSmallError(
            "grid and shifted grid must fit inside the window shrunk by the support radius"
        )
    nodes = grid.nodes()
    base = field_values(d, phi, nodes)
    moved = field_values(d, phi, nodes - tau)
    if nodes.shape[0] == 0:
        return True
    return bool(np.abs(base - moved).max() <= eps)


def eta_for(eps: float, local_max: int) -> float:
    """Ball radius making every component of the union of eta-balls around
    the points thinner than eps, given the unit-ball count bound.

    Requires eps in (0, 1); returns eps / (2 * local_max + 2), strictly
    inside the admissible range eta < eps / (2 * local_max + 1).
    """
    if not (0 < eps < 1):
        raise ValidationError("eps must lie strictly between 0 and 1")
    m = int(local_max)
    if m < 1 or m != local_max:
        raise ValidationError("local_max must be an integer >= 1")
    return eps / (2 * m + 2)


@dataclass(frozen=True)
class MeasureScanReport:
    """Shifts passing the field-shift test over a search box."""

    eps: float
    accepted: np.ndarray
    covering_radius: float
    candidates: np.ndarray
    grid: SampleGrid
    profile: TestFunction

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "profile": self.profile.profile,
            "support_radius": self.profile.support_radius,
            "accepted": self.accepted.tolist(),
            "covering_radius": self.covering_radius,
        }


def default_measure_grid(d: PointConfiguration, phi: TestFunction,
                         max_shift: float, tolerance: float) -> SampleGrid:
    """Node grid certified for a sup surrogate at the given tolerance.

    The box keeps every node and every shifted node inside the window
    shrunk by the support radius; the step tolerance / (2 * Lip * N) keeps
    the discretization error below half the tolerance, N being the atom
    count bound within the support radius.
    """
    from .stats import local_count_max

    margin = phi.support_radius + max_shift + 1e-9
    core = shrink_window(d.window, margin)
    if core.is_empty:
        raise WindowTooSmallError("window too small for the requested measure grid")
    n_atoms = max(local_count_max(d, radius=phi.support_radius), 1)
    step = tolerance / (2 * phi.lipschitz * n_atoms)
    return SampleGrid(core, step)


def scan_measure_periods(d: PointConfiguration, spec, phi: TestFunction,
                         grid: SampleGrid | None = None) -> MeasureScanReport:
    """Sweep the search box at the measure level: a shift is accepted when
    the field moves by at most eps (the set-level scanner's grid and
    covering-radius conventions are reused)."""
    from .scanner import _covering_radius, tau_grid

    candidates = tau_grid(spec.search_box, spec.grid_step)
    if candidates.shape[0] == 0:
        raise ValidationError("search box contains no grid nodes")
    max_norm = float(np.sqrt((candidates**2).sum(axis=1)).max())
    if grid is None:
        grid = default_measure_grid(d, phi, max_norm, spec.eps)
    accepted = np.array([
        tau for tau in candidates if measure_period_check(d, tau, spec.eps, phi, grid)
    ]).reshape(-1, d.dim)
    return MeasureScanReport(
        eps=spec.eps,
        accepted=accepted,
        covering_radius=_covering_radius(spec, accepted),
        candidates=candidates,
        grid=grid,
        profile=phi,
    )


@dataclass(frozen=True)
class Component:
    """One connected component of the union of open eta-balls around the
    points: member indices and the exact diameter of the member point set."""

    indices: np.ndarray
    diameter: float


def components(d: PointConfiguration, eta: float) -> list[Component]:
    """Connected components of union_n B(a_n, eta), via union-find on the
    pairs closer than 2 * eta."""
    if not (eta > 0 and math.isfinite(eta)):
        raise ValidationError("eta must be a positive finite number")
    n = len(d)
    if n == 0:
        return []
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    index = GridIndex(d.points, cell=2 * eta)
    ii, jj, _dd = index.pairs_within(d.points, 2 * eta, strict=True)
    for i, j in zip(ii.tolist(), jj.tolist()):
        if i < j:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = []
    for key in sorted(groups, key=lambda k: min(groups[k])):
        idx = np.array(sorted(groups[key]), dtype=np.intp)
        if idx.size == 1:
            diam = 0.0
        else:
            pts = d.points[idx]
            diff = pts[:, None, :] - pts[None, :, :]
            diam = float(np.sqrt((diff**2).sum(axis=2)).max())
        out.append(Component(idx, diam))
    return out


def component_count_match(d1: PointConfiguration, d2: PointConfiguration,
                          eta: float) -> bool:
    """Per-component count transfer between two nearby configurations.

    Every point of d2 must fall inside the eta/2-thickening of some
    component of d1's eta-ball union (distance to the component's points
    below 3*eta/2) and is tallied against the nearest component; True iff
    every component of d1 holds exactly as many d2 points as d1 points.
    """
    if d1.dim != d2.dim:
        raise ValidationError("configurations have different dimensions")
    comps = components(d1, eta)
    if len(d2) == 0:
        return all(c.indices.size == 0 for c in comps)
    if len(d1) == 0:
        return False
    comp_of = np.empty(len(d1), dtype=np.intp)
    for ci, comp in enumerate(comps):
        comp_of[comp.indices] = ci
    reach = 1.5 * eta
    index = GridIndex(d1.points, cell=reach)
    ii, jj, dd = index.pairs_within(d2.points, reach, strict=True)
    nearest = np.full(len(d2), -1, dtype=np.intp)
    best = np.full(len(d2), np.inf)
    for i, j, dist in zip(ii.tolist(), jj.tolist(), dd.tolist()):
        if dist < best[j] or (dist == best[j] and (nearest[j] == -1 or i < nearest[j])):
            best[j] = dist
            nearest[j] = i
    if np.any(nearest < 0):
        return False
    counts = np.zeros(len(comps), dtype=np.intp)
    np.add.at(counts, comp_of[nearest], 1)
    return bool(np.all(counts == np.array([c.indices.size for c in comps])))
