"""Detection of approximate translation symmetry over a search box.

A vector tau is an eps-almost period of a configuration D when the
windowed bottleneck distance between D and D + tau stays below eps.  The
scanner sweeps a regular grid of candidate shifts over a search box and
reports the accepted ones together with a covering radius: the edge of the
largest accepted-free ball inside the box, the finite surrogate for
relative denseness.  No finite computation can certify relative denseness
over all of R^k, so the radius is reported instead of a boolean.

Collar policy: a shift by tau can move boundary points out of the window
by at most |tau|, and the matching slack adds eps, so the automatic collar
width is |tau| + eps, exactly the loss region of the windowed comparison.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import CUBE, PointConfiguration, Window, as_point, restrict, shrink_window, translate
from .errors import ValidationError, WindowTooSmallError
from .matching import CollarSpec, bottleneck_distance, matching_feasible


@dataclass(frozen=True)
class PeriodScanSpec:
    """Scan parameters.

    ``grid_step`` must not exceed eps/2: acceptance regions of almost
    periods contain balls of radius comparable to the slack, so this
    resolution cannot miss a shift whose distance is below eps/2 when
    checking at level eps.  ``collar_width`` of None selects the automatic
    |tau| + eps policy.
    """

    eps: float
    search_box: Window
    grid_step: float
    collar_width: float | None = None

    def __post_init__(self):
        if not (self.eps > 0 and math.isfinite(self.eps)):
            raise ValidationError("eps must be a positive finite number")
        if not (self.grid_step > 0 and math.isfinite(self.grid_step)):
            raise ValidationError("grid_step must be a positive finite number")
        if self.grid_step > self.eps / 2:
            raise ValidationError(
                f"grid_step {self.grid_step} exceeds eps/2 = {self.eps / 2}; "
                "the sweep could miss almost periods"
            )
        if self.search_box.kind != CUBE:
            raise ValidationError("search_box must be a cube window")
        if self.collar_width is not None and self.collar_width < 0:
            raise ValidationError("collar_width must be nonnegative")


@dataclass(frozen=True)
class AlmostPeriodReport:
    """Accepted shifts of one scan, in lexicographic order.

    ``covering_radius`` is the edge of the largest ball, centered on a
    grid node of the search box shrunk by one grid step, that contains no
    accepted shift (twice the worst node-to-accepted distance); infinite
    when nothing was accepted.  ``boundary_limited`` flags acceptances
    whose fixed collar was narrower than the automatic |tau| + eps policy.
    """

    spec: PeriodScanSpec
    accepted: np.ndarray
    covering_radius: float
    boundary_limited: bool
    candidates: np.ndarray
    distances: np.ndarray | None = None

    def to_dict(self) -> dict:
        doc = {
            "eps": self.spec.eps,
            "grid_step": self.spec.grid_step,
            "search_box": {
                "kind": self.spec.search_box.kind,
                "center": self.spec.search_box.center.tolist(),
                "extent": self.spec.search_box.extent,
            },
            "collar": self.spec.collar_width,
            "accepted": self.accepted.tolist(),
            "covering_radius": self.covering_radius,
            "boundary_limited": self.boundary_limited,
        }
        return doc


def tau_grid(box: Window, step: float, shrink_by: float = 0.0) -> np.ndarray:
    """Regular grid of shifts, symmetric about the box center.

    Symmetry guarantees that the grid contains -tau whenever it contains
    tau, and contains the zero shift for an origin-centered box.
    """
    half = box.extent / 2 - shrink_by
    if half < 0:
        return np.empty((0, box.dim))
    m = int(math.floor(half / step + 1e-9))
    offsets = step * np.arange(-m, m + 1)
    axes = [box.center[i] + offsets for i in range(box.dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, box.dim)


def is_almost_period(d: PointConfiguration, tau, eps: float,
                     collar_width: float | None = None) -> bool:
    """Windowed test of dist(D, D + tau) < eps (strict).

    Requires |tau| + eps to fit inside the window, otherwise no point is
    mandatory and the test would be vacuous.
    """
    tau = as_point(tau, d.dim)
    if not (eps > 0 and math.isfinite(eps)):
        raise ValidationError("eps must be a positive finite number")
    norm = float(np.sqrt((tau**2).sum()))
    if shrink_window(d.window, norm + eps).is_empty:
        raise WindowTooSmallError(
            f"|tau| + eps = {norm + eps} does not fit in window of halfwidth "
            f"{d.window.halfwidth}; nothing would be mandatory"
        )
    width = norm + eps if collar_width is None else collar_width
    shifted = restrict(translate(d, tau), d.window)
    ok, _ = matching_feasible(d, shifted, eps, CollarSpec(width), strict=True)
    return ok


def windowed_shift_distance(d: PointConfiguration, tau,
                            collar_width: float | None = None):
    """Bottleneck distance between D and D + tau on D's window.

    With no explicit collar the width is enlarged until the result is
    trusted (value <= width) or the window runs out.
    """
    tau = as_point(tau, d.dim)
    norm = float(np.sqrt((tau**2).sum()))
    shifted = restrict(translate(d, tau), d.window)
    if collar_width is not None:
        return bottleneck_distance(d, shifted, CollarSpec(collar_width))
    width = norm + 1.0
    for _ in range(6):
        if shrink_window(d.window, width).is_empty:
            raise WindowTooSmallError(
                f"collar {width} for shift {tau.tolist()} exhausts the window"
            )
        res = bottleneck_distance(d, shifted, CollarSpec(width))
        if res.infeasible or res.trusted:
            return res
        width = norm + res.value * 1.25 + 1e-9
    return res


def scan_periods(d: PointConfiguration, spec: PeriodScanSpec, workers: int = 1,
                 record_distances: bool = False) -> AlmostPeriodReport:
    """Sweep the search box and collect every grid shift accepted at eps."""
    if spec.search_box.dim != d.dim:
        raise ValidationError("search box dimension differs from configuration")
    candidates = tau_grid(spec.search_box, spec.grid_step)
    if candidates.shape[0] == 0:
        raise ValidationError("search box contains no grid nodes")
    max_norm = float(np.sqrt((candidates**2).sum(axis=1)).max())
    if shrink_window(d.window, max_norm + spec.eps).is_empty:
        raise WindowTooSmallError(
            f"window halfwidth {d.window.halfwidth} cannot host shifts up to "
            f"|tau| = {max_norm} at eps = {spec.eps}"
        )

    def check(tau):
        return is_almost_period(d, tau, spec.eps, spec.collar_width)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flags = list(pool.map(check, candidates))
    else:
        flags = [check(tau) for tau in candidates]
    flags = np.asarray(flags, dtype=bool)
    accepted = candidates[flags]

    boundary_limited = False
    if spec.collar_width is not None and accepted.shape[0]:
        norms = np.sqrt((accepted**2).sum(axis=1))
        boundary_limited = bool(np.any(spec.collar_width < norms + spec.eps))

    distances = None
    if record_distances:
        distances = np.array([
            windowed_shift_distance(d, tau, collar_width=spec.collar_width).value
            for tau in candidates
        ])

    return AlmostPeriodReport(
        spec=spec,
        accepted=accepted,
        covering_radius=_covering_radius(spec, accepted),
        boundary_limited=boundary_limited,
        candidates=candidates,
        distances=distances,
    )


def _covering_radius(spec: PeriodScanSpec, accepted: np.ndarray) -> float:
    """Edge of the largest accepted-free ball centered on an inner grid node."""
    if accepted.shape[0] == 0:
        return math.inf
    nodes = tau_grid(spec.search_box, spec.grid_step, shrink_by=spec.grid_step)
    if nodes.shape[0] == 0:
        return 0.0
    worst = 0.0
    chunk = max(1, int(2e6 // max(accepted.shape[0], 1)))
    for start in range(0, nodes.shape[0], chunk):
        block = nodes[start:start + chunk]
        d2 = ((block[:, None, :] - accepted[None, :, :]) ** 2).sum(axis=2)
        worst = max(worst, float(d2.min(axis=1).max()))
    return 2 * math.sqrt(worst)


def group_property_check(report: AlmostPeriodReport, d: PointConfiguration,
                         max_pairs: int = 200, seed: int = 0) -> list[dict]:
    """Check that sums and differences of accepted shifts pass at level 2*eps.

    Pairs whose sum or difference leaves the search box, or does not fit
    the window at 2*eps, are skipped.  Returns the list of violations,
    which is empty when the doubling law holds on the sampled pairs.
    """
    acc = report.accepted
    spec = report.spec
    if acc.shape[0] == 0:
        return []
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(acc.shape[0]) for j in range(i, acc.shape[0])]
    if len(pairs) > max_pairs:
        idx = rng.choice(len(pairs), size=max_pairs, replace=False)
        pairs = [pairs[i] for i in sorted(idx)]
    half = spec.search_box.extent / 2
    center = spec.search_box.center
    violations = []
    for i, j in pairs:
        for sign in (1.0, -1.0):
            sigma = acc[i] + sign * acc[j]
            if np.any(np.abs(sigma - center) > half + 1e-9):
                continue
            norm = float(np.sqrt((sigma**2).sum()))
            if shrink_window(d.window, norm + 2 * spec.eps).is_empty:
                continue
            if not is_almost_period(d, sigma, 2 * spec.eps, report.spec.collar_width):
                violations.append({
                    "tau1": acc[i].tolist(),
                    "tau2": acc[j].tolist(),
                    "sign": sign,
                    "sigma": sigma.tolist(),
                })
    return violations


def s_property_estimate(d: PointConfiguration, tau_samples) -> float:
    """Empirical lower bound for the uniform shift-distance constant.

    Maximum of the windowed bottleneck distance dist(D, D + tau) over the
    sampled shifts; an infeasible sample contributes +inf, flagging that
    the window shows no uniform bound for that shift.
    """
    worst = 0.0
    for tau in tau_samples:
        res = windowed_shift_distance(d, tau)
        worst = max(worst, res.value)
    return worst
