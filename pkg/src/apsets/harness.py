"""Executable verification suites binding the library's claims together.

Each suite runs finite, windowed checks and emits a machine-readable
report.  A report never claims more than "all checks passed at the stated
windows and tolerances"; fault-injected members are part of every suite so
that a pass is meaningful rather than vacuous.

Suites (CLI tokens in parentheses):

* limit-stability (t1): shifts accepted by a nearby family member at
  eps/3 are accepted by the limit at eps, the epsilon-third transfer.
* shift-compactness (t2): among random translates there is a sub-family
  whose pairwise differences sit within eps of an accepted shift, and
  whose pairwise windowed distances stay below 2*eps.
* set-measure-convergence (t10): configuration convergence and field
  convergence track each other, and a field gap below half the profile
  mass forces per-component count agreement.
* period-transfer (t11): accepted shifts pass the field-shift test at the
  Lipschitz-transferred tolerance, while the seeded Poisson control is
  rejected at both levels.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._grid import GridIndex
from .core import CUBE, PointConfiguration, Window, as_point, shrink_window
from .errors import ValidationError, WindowTooSmallError
from .generators import (
    converging_family,
    generate,
    integer_lattice,
    perturbed_line,
    standard_corpus,
    with_extra_point,
    GeneratorSpec,
    POISSON,
)
from .matching import CollarSpec, bottleneck_distance
from .measures import (
    SampleGrid,
    TestFunction,
    component_count_match,
    components,
    eta_for,
    measure_period_check,
    weak_uniform_distance,
)
from .scanner import PeriodScanSpec, is_almost_period, scan_periods
from .stats import local_count_max


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    margin: float | None = None
    details: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "margin": self.margin, "details": self.details}


@dataclass(frozen=True)
class TheoremReport:
    """One suite's outcome: the inputs used and every check that ran."""

    suite: str
    inputs: dict
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "inputs": self.inputs,
            "checks": [c.to_dict() for c in self.checks],
        }


def trusted_distance(a: PointConfiguration, b: PointConfiguration,
                     start_width: float = 0.5):
    """Windowed distance with the collar widened until the value is trusted."""
    width = start_width
    for _ in range(6):
        if shrink_window(a.window, width).is_empty:
            raise WindowTooSmallError("collar exhausted the window")
        res = bottleneck_distance(a, b, CollarSpec(width))
        if res.infeasible or res.trusted:
            return res
        width = res.value * 1.25 + 1e-9
    return res


def verify_limit_theorem(family, eps_ladder=(0.45, 0.3), box_halfwidth=6.0,
                         workers: int = 1) -> TheoremReport:
    """Transfer of almost periods from a converging family to its limit.

    For each eps: pick the first member within eps/3 of the limit, scan its
    eps/3-almost periods, and re-check every one against the limit at eps.
    """
    limit = family[-1]
    checks = []
    for eps in eps_ladder:
        third = eps / 3
        p0 = None
        for idx, member in enumerate(family[:-1]):
            res = bottleneck_distance(member, limit, CollarSpec(third))
            if not res.infeasible and res.value < third and res.trusted:
                p0 = idx
                break
        if p0 is None:
            checks.append(CheckResult(
                f"eps={eps}: member within eps/3 of the limit", False,
                details="no member converged within the window; transfer not attempted",
            ))
            continue
        spec = PeriodScanSpec(eps=third, grid_step=third / 2,
                              search_box=Window(CUBE, np.zeros(limit.dim), 2 * box_halfwidth))
        report = scan_periods(family[p0], spec, workers=workers)
        failed = [tau for tau in report.accepted
                  if not is_almost_period(limit, tau, eps)]
        checks.append(CheckResult(
            f"eps={eps}: transferred periods accepted by the limit",
            not failed,
            margin=float(len(report.accepted)),
            details=f"member={p0}, accepted={len(report.accepted)}, failed={len(failed)}",
        ))
    return TheoremReport(
        "t1 limit-stability",
        {"members": len(family), "eps_ladder": list(eps_ladder),
         "box_halfwidth": box_halfwidth},
        tuple(checks),
    )


def _max_clique(n: int, edge) -> list[int]:
    """Largest clique of a small graph; exact up to n=16, greedy beyond."""
    if n <= 16:
        for size in range(n, 0, -1):
            for sub in itertools.combinations(range(n), size):
                if all(edge[i][j] for i, j in itertools.combinations(sub, 2)):
                    return list(sub)
        return []
    best: list[int] = []
    for seed in range(n):
        clique = [seed]
        for v in range(n):
            if v != seed and all(edge[v][u] for u in clique):
                clique.append(v)
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def verify_bochner_smoke(d: PointConfiguration, shifts, eps: float = 0.3,
                         min_size: int = 2, workers: int = 1) -> TheoremReport:
    """Find translates whose pairwise differences are eps-close to accepted
    shifts and whose pairwise windowed distances stay below 2*eps."""
    shifts = [as_point(h, d.dim) for h in shifts]
    n = len(shifts)
    diffs = [[shifts[m] - shifts[l] for m in range(n)] for l in range(n)]
    max_diff = max((float(np.abs(diffs[l][m]).max()) for l in range(n) for m in range(n)),
                   default=0.0)
    step = eps / 3
    half = max_diff + eps + 2 * step
    spec = PeriodScanSpec(eps=eps, grid_step=step,
                          search_box=Window(CUBE, np.zeros(d.dim), 2 * half))
    report = scan_periods(d, spec, workers=workers)
    acc = report.accepted

    def close_to_accepted(v) -> bool:
        if acc.shape[0] == 0:
            return False
        return bool(np.sqrt(((acc - v) ** 2).sum(axis=1)).min() < eps)

    edge = [[False] * n for _ in range(n)]
    for l in range(n):
        edge[l][l] = True
        for m in range(l + 1, n):
            ok = close_to_accepted(diffs[l][m]) and is_almost_period(d, diffs[l][m], 2 * eps)
            edge[l][m] = edge[m][l] = ok
    clique = _max_clique(n, edge)
    checks = [CheckResult(
        f"consistent sub-family of size >= {min_size}",
        len(clique) >= min_size,
        margin=float(len(clique)),
        details=f"sub-family indices {clique}, accepted shifts {acc.shape[0]}",
    )]
    return TheoremReport(
        "t2 shift-compactness",
        {"shifts": [h.tolist() for h in shifts], "eps": eps, "min_size": min_size},
        tuple(checks),
    )


def _field_atom_bound(family, phi) -> int:
    """Atoms within the doubled support radius of any center, over all members."""
    return max(
        max(local_count_max(member, radius=2 * phi.support_radius), 1)
        for member in family
    )


def verify_set_measure_equivalence(family, eps: float = 0.5, eps_scan: float = 0.2,
                                   scan_halfwidth: float = 4.0,
                                   fault_point=None) -> TheoremReport:
    """Field convergence tracks configuration convergence, field closeness
    below half the profile mass forces component count agreement, and the
    limit's accepted shifts pass the field-shift test at the transferred
    tolerance; an injected extra atom must break the agreement."""
    limit = family[-1]
    dim = limit.dim
    m_hat = max(local_count_max(limit, radius=1.0), 1)
    eta = eta_for(eps, m_hat)
    phi = TestFunction.tent(eta / 2, dim)
    nu = phi.mass
    n_atoms = _field_atom_bound(family, phi)
    rate = phi.lipschitz * n_atoms

    dists = [trusted_distance(member, limit).value for member in family]
    margin = phi.support_radius + max(dists) + 0.5
    core = shrink_window(limit.window, margin)
    if core.is_empty:
        raise WindowTooSmallError("window too small for the field comparison")
    step = (nu / 2) / (2 * rate)
    grid = SampleGrid(core, step)

    checks = []
    wuds = [weak_uniform_distance(member, limit, phi, grid) for member in family]
    bound_ok = all(w <= rate * max(dv, 0.0) + 1e-12 for w, dv in zip(wuds, dists))
    checks.append(CheckResult(
        "field gap bounded by lipschitz * atoms * distance", bound_ok,
        margin=max(w - rate * dv for w, dv in zip(wuds, dists)),
        details=f"rate={rate:.4g}, gaps={[f'{w:.3g}' for w in wuds]}",
    ))
    checks.append(CheckResult(
        "field gap non-increasing along the family",
        all(b <= a + 1e-12 for a, b in zip(wuds, wuds[1:])),
        details=f"distances={[f'{v:.3g}' for v in dists]}",
    ))

    below = [i for i, w in enumerate(wuds) if w < nu / 2]
    checks.append(CheckResult(
        "at least two members below half the profile mass", len(below) >= 2,
        margin=float(len(below)),
        details=f"nu/2={nu / 2:.4g}",
    ))
    transfer_ok = all(component_count_match(limit, family[i], eta) for i in below)
    checks.append(CheckResult(
        "component counts agree whenever the field gap is below nu/2",
        transfer_ok, margin=float(len(below)),
    ))

    diam_ok = all(
        all(comp.diameter < eps for comp in components(member, eta))
        for member in family
    )
    checks.append(CheckResult(
        f"all component diameters below eps at eta={eta:.4g}", diam_ok,
    ))

    # members close to the limit inherit its bounded local counts, up to
    # the 4^k factor of doubling the ball radius
    member_counts = [local_count_max(member, radius=1.0) for member in family]
    checks.append(CheckResult(
        "member unit-ball counts within 4^dim of the limit's bound",
        all(c <= 4**dim * m_hat for c in member_counts),
        margin=float(max(member_counts)),
    ))

    spec = PeriodScanSpec(eps=eps_scan, grid_step=eps_scan / 4,
                          search_box=Window(CUBE, np.zeros(dim), 2 * scan_halfwidth))
    scan = scan_periods(limit, spec)
    phi_t = TestFunction.tent(1.0, dim)
    n_t = max(local_count_max(limit, radius=phi_t.support_radius + eps_scan), 1)
    tol = eps_scan * phi_t.lipschitz * n_t
    core_t = shrink_window(limit.window,
                           phi_t.support_radius + scan_halfwidth * math.sqrt(dim) + 0.5)
    grid_t = SampleGrid(core_t, tol / (2 * phi_t.lipschitz * n_t))
    transferred = [measure_period_check(limit, tau, tol, phi_t, grid_t)
                   for tau in scan.accepted]
    checks.append(CheckResult(
        "limit's accepted shifts pass the field test at the transferred tolerance",
        all(transferred),
        margin=float(len(transferred)),
        details=f"tolerance={tol:.4g}, accepted={len(transferred)}",
    ))

    if fault_point is None:
        fault_point = limit.window.center + 0.5
    faulty = with_extra_point(limit, fault_point)
    fault_match = component_count_match(limit, faulty, eta)
    fault_wud = weak_uniform_distance(limit, faulty, phi, grid)
    checks.append(CheckResult(
        "injected extra atom breaks the component agreement",
        (not fault_match) and fault_wud >= nu / 2,
        margin=fault_wud,
        details=f"fault at {np.asarray(fault_point).tolist()}",
    ))
    return TheoremReport(
        "t10 set-measure-convergence",
        {"members": len(family), "eps": eps, "m_hat": m_hat, "eta": eta,
         "support_radius": phi.support_radius, "grid_step": step,
         "eps_scan": eps_scan, "scan_halfwidth": scan_halfwidth},
        tuple(checks),
    )


def _self_spacing(points: np.ndarray) -> np.ndarray:
    """Distance from each point to its nearest distinct neighbor."""
    n = points.shape[0]
    out = np.full(n, np.inf)
    span = float(np.max(points.max(axis=0) - points.min(axis=0), initial=1.0))
    radius = max(span / max(n, 1) ** (1 / points.shape[1]), 1e-9)
    remaining = np.arange(n)
    while remaining.size and radius <= 4 * span:
        index = GridIndex(points, cell=radius)
        still = []
        for j in remaining:
            idx, dist = index.query(points[j], radius)
            dist = dist[idx != j]
            if dist.size:
                out[j] = dist.min()
            else:
                still.append(j)
        remaining = np.asarray(still, dtype=int)
        radius *= 2
    return out


def verify_period_transfer(d_ap: PointConfiguration, d_control: PointConfiguration,
                           eps: float = 0.2, box_halfwidth: float = 6.0,
                           workers: int = 1) -> TheoremReport:
    """Accepted shifts of an almost periodic input pass the field-shift test
    at the transferred tolerance; a Poisson control is rejected at both the
    set level and the measure level for every nonzero shift."""
    checks = []
    dim = d_ap.dim

    spec = PeriodScanSpec(eps=eps, grid_step=eps / 4,
                          search_box=Window(CUBE, np.zeros(dim), 2 * box_halfwidth))
    report = scan_periods(d_ap, spec, workers=workers)
    nonzero = [tau for tau in report.accepted if float(np.abs(tau).max()) > 0]
    checks.append(CheckResult(
        "almost periodic input accepts nonzero shifts", len(nonzero) > 0,
        margin=float(len(nonzero)),
    ))

    phi = TestFunction.tent(1.0, dim)
    n_atoms = max(local_count_max(d_ap, radius=phi.support_radius + eps), 1)
    tol = eps * phi.lipschitz * n_atoms
    margin = phi.support_radius + box_halfwidth * math.sqrt(dim) + 0.5
    core = shrink_window(d_ap.window, margin)
    if core.is_empty:
        raise WindowTooSmallError("window too small for the transfer grid")
    grid = SampleGrid(core, tol / (2 * phi.lipschitz * n_atoms))
    failed = [tau for tau in report.accepted
              if not measure_period_check(d_ap, tau, tol, phi, grid)]
    checks.append(CheckResult(
        "accepted shifts pass the field test at the transferred tolerance",
        not failed,
        margin=float(len(report.accepted)),
        details=f"tolerance={tol:.4g}, atoms={n_atoms}, failed={len(failed)}",
    ))

    spacing = _self_spacing(d_control.points)
    eps_c = float(np.median(spacing)) / 2
    spec_c = PeriodScanSpec(eps=eps_c, grid_step=eps_c / 2,
                            search_box=Window(CUBE, np.zeros(dim), 2 * box_halfwidth))
    report_c = scan_periods(d_control, spec_c, workers=workers)
    # |tau| < eps is accepted for every configuration (the index-identical
    # matching moves each point by |tau|), so only shifts beyond that
    # trivial ball witness periodicity
    set_accepted = [tau for tau in report_c.accepted
                    if float(np.sqrt((tau**2).sum())) >= eps_c]
    checks.append(CheckResult(
        "control accepts no shift beyond the trivial ball at the set level",
        not set_accepted,
        margin=eps_c,
        details=f"eps={eps_c:.4g}, accepted={len(report_c.accepted)}",
    ))

    phi_c = TestFunction.tent(eps_c, dim)
    n_c = max(local_count_max(d_control, radius=2 * eps_c), 1)
    margin_c = phi_c.support_radius + box_halfwidth * math.sqrt(dim) + 0.5
    core_c = shrink_window(d_control.window, margin_c)
    grid_c = SampleGrid(core_c, eps_c / (2 * phi_c.lipschitz * n_c))
    measure_accepted = [
        tau for tau in report_c.candidates
        if float(np.abs(tau).max()) > 0
        and measure_period_check(d_control, tau, eps_c, phi_c, grid_c)
    ]
    checks.append(CheckResult(
        "control accepts no nonzero shift at the measure level",
        not measure_accepted,
        margin=float(len(report_c.candidates)),
        details=f"measure-accepted={len(measure_accepted)}",
    ))
    return TheoremReport(
        "t11 period-transfer",
        {"eps": eps, "box_halfwidth": box_halfwidth,
         "control_eps": eps_c, "transfer_tolerance": tol},
        tuple(checks),
    )


SUITE_TOKENS = ("t1", "t2", "t10", "t11")
_ALIASES = {
    "limit-stability": "t1",
    "shift-compactness": "t2",
    "set-measure-convergence": "t10",
    "period-transfer": "t11",
}


def run_suite(token: str, workers: int = 1) -> list[TheoremReport]:
    """Run one named suite (or "all") on the fixed deterministic corpus."""
    token = _ALIASES.get(token, token)
    if token == "all":
        reports = []
        for t in SUITE_TOKENS:
            reports.extend(run_suite(t, workers=workers))
        return reports
    if token == "t1":
        family = converging_family(perturbed_line(halfwidth=45.0),
                                   [0.12, 0.06, 0.03, 0.0])
        return [verify_limit_theorem(family, workers=workers)]
    if token == "t2":
        d = generate(integer_lattice(1, 60.0))
        rng = np.random.default_rng(20260809)
        shifts = rng.uniform(0.0, 4.0, size=(10, 1))
        return [verify_bochner_smoke(d, shifts, eps=0.3, min_size=3, workers=workers)]
    if token == "t10":
        family = converging_family(perturbed_line(halfwidth=45.0),
                                   [0.2, 0.1, 0.02, 2e-4, 0.0])
        return [verify_set_measure_equivalence(family)]
    if token == "t11":
        d_ap = standard_corpus()["perturbed_1d"]
        control = generate(GeneratorSpec(
            kind=POISSON, window=Window(CUBE, [0.0], 100.0),
            intensity=1.0, seed=20260809,
        ))
        return [verify_period_transfer(d_ap, control, workers=workers)]
    raise ValidationError(f"unknown suite {token!r}; use all, t1, t2, t10, or t11")
