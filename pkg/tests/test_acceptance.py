"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with  pytest tests/test_acceptance.py -v -s  to see every line.
All tolerances are stated inline; nothing is deferred to calibration.
"""

import math
import time

import numpy as np

from apsets import (
    CUBE,
    CollarSpec,
    PeriodScanSpec,
    Window,
    bottleneck_distance,
    brute_force_distance,
    components,
    config,
    converging_family,
    density_estimate,
    discrepancy_scan,
    eta_for,
    generate,
    group_property_check,
    integer_lattice,
    local_count_max,
    perturbed_line,
    restrict,
    scan_periods,
    shrink_window,
    standard_corpus,
    translate,
    verify_bochner_smoke,
    verify_period_transfer,
    verify_set_measure_equivalence,
)
from conftest import random_config


def report(num, ok, desc):
    print(f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'}: {desc}")
    assert ok, f"criterion {num}: {desc}"


def test_criterion_01_matching_oracle_equivalence():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    mismatches = 0
    for trial in range(510):
        dim = trial % 3 + 1
        n = int(rng.integers(1, 9))
        a = random_config(rng, n, dim)
        b = random_config(rng, n, dim)
        if bottleneck_distance(a, b).value != brute_force_distance(a, b):
            mismatches += 1
    elapsed = time.perf_counter() - start
    report(1, mismatches == 0 and elapsed < 60.0,
           f"510 random pairs (|A|=|B|<=8, dims 1-3, collar 0): "
           f"{mismatches} mismatches, {elapsed:.1f}s < 60s")


def test_criterion_02_metric_axioms():
    rng = np.random.default_rng(202)
    sym_exact = True
    tri_ok = True
    for _ in range(210):
        dim = int(rng.integers(1, 3))
        n = int(rng.integers(1, 7))
        a, b, c = (random_config(rng, n, dim) for _ in range(3))
        dab = bottleneck_distance(a, b).value
        if dab != bottleneck_distance(b, a).value:
            sym_exact = False
        if bottleneck_distance(a, c).value > dab + bottleneck_distance(b, c).value + 1e-12:
            tri_ok = False
    report(2, sym_exact and tri_ok,
           "symmetry exact and triangle inequality within 1e-12 on 210 triples")


def test_criterion_03_shift_recovery():
    rng = np.random.default_rng(303)
    ok = True
    worst = 0.0
    for dim, half in ((1, 50.0), (2, 20.0)):
        d = generate(integer_lattice(dim, half))
        for _ in range(6):
            direction = rng.normal(size=dim)
            direction /= np.sqrt((direction**2).sum())
            delta = direction * rng.uniform(0.01, 0.499)
            shifted = restrict(translate(d, delta), d.window)
            res = bottleneck_distance(d, shifted, CollarSpec(1.0))
            err = abs(res.value - float(np.sqrt((delta**2).sum())))
            worst = max(worst, err)
            ok &= err <= 1e-12 and res.trusted
    report(3, ok, f"uniform shifts |delta|<0.5 on Z^k (k=1,2) recovered at collar 1; "
                  f"worst error {worst:.2e} <= 1e-12, all trusted")


def test_criterion_04_scanner_on_integer_lattice(lattice_z):
    spec = PeriodScanSpec(eps=0.2, search_box=Window(CUBE, [0.0], 20.0), grid_step=0.05)
    rep = scan_periods(lattice_z, spec)
    got = set(map(float, rep.accepted.ravel()))
    want = set()
    for j in range(-200, 201):  # tau = 0.05 j; exact distance to Z in integer units
        r = j % 20
        if min(r, 20 - r) < 4:
            want.add(0.05 * j)
    cov_ok = 0.5 <= rep.covering_radius <= 0.5 + 0.2 + 0.05
    report(4, got == want and cov_ok,
           f"accepted = grid shifts within 0.2 of Z exactly ({len(got)} shifts), "
           f"covering radius {rep.covering_radius:.3f} in [0.5, 0.75]")


def test_criterion_05_group_property(lattice_z, union_sqrt2):
    cases = [
        (lattice_z, 0.2, 6.0, 0.05),
        (union_sqrt2, 0.15, 10.0, 0.05),
        (generate(perturbed_line(halfwidth=50.0)), 0.25, 10.0, 0.1),
    ]
    total = 0
    for d, eps, half, step in cases:
        spec = PeriodScanSpec(eps=eps, search_box=Window(CUBE, [0.0], 2 * half),
                              grid_step=step)
        rep = scan_periods(d, spec)
        total += len(group_property_check(rep, d, max_pairs=150, seed=5))
    report(5, total == 0,
           "sums/differences of accepted shifts pass at 2*eps: "
           f"{total} violations on Z, Z u sqrt(2)Z, perturbed lattice")


def test_criterion_06_density_of_lattice_union():
    z = np.arange(-100, 100, dtype=float)
    m = np.arange(-80, 81)
    s = math.sqrt(2) * m + 0.5
    s = s[(s >= -100) & (s < 100)]
    d = config(np.concatenate([z, s]).reshape(-1, 1), Window(CUBE, [0.0], 200.0))
    rng = np.random.default_rng(606)
    target = 1 + 2**-0.5
    ok = True
    lines = []
    for t in (50.0, 100.0, 200.0):
        room = shrink_window(d.window, t / 2)
        if room.is_empty or room.extent == 0:
            alphas = []
        else:
            lo, hi = room.bounds()
            alphas = rng.uniform(lo, hi, size=(10, 1))
        est = density_estimate(d, alphas, [t])
        err = abs(est.extrapolated - target)
        ok &= err <= 2 / t and est.max_shift_deviation <= 4 / t
        lines.append(f"T={t:.0f}: err={err:.4f}<=2/T, dev={est.max_shift_deviation:.4f}<=4/T")
    report(6, ok, "density of Z u (sqrt(2)Z + 1/2) -> 1 + 2^-1/2; " + "; ".join(lines))


def test_criterion_07_discrepancy_constant_stability():
    corpus = standard_corpus()
    rng = np.random.default_rng(20260809)
    ok = True
    lines = []
    for name in ("lattice_z", "union_z_sqrt2", "perturbed_1d", "lattice_z2"):
        d = corpus[name]
        k = d.dim
        diams = np.linspace(1.0, 40.0, 27)
        shift_max = 5.0 if k == 1 else 2.0
        shapes = [Window(CUBE, np.zeros(k), diam / math.sqrt(k)) for diam in diams]
        shifts = [np.zeros(k)] + list(rng.uniform(-shift_max, shift_max, size=(8, k)))
        rep = discrepancy_scan(d, shapes, shifts, family=name)
        first = rep.fitted_c_over(1.0, 20.0)
        second = rep.fitted_c_over(20.0, 40.0)
        ok &= second <= 1.1 * first + 1e-12
        lines.append(f"{name}: {first:.3f} -> {second:.3f}")
    report(7, ok, "fitted discrepancy constant grows <= 10% between diameter "
                  "halves of [1, 40]; " + "; ".join(lines))


def test_criterion_08_component_machinery():
    eps = 0.5
    diam_ok = True
    for name, member in standard_corpus().items():
        m_hat = max(local_count_max(member, radius=1.0), 1)
        eta = eta_for(eps, m_hat)
        if not all(comp.diameter < eps for comp in components(member, eta)):
            diam_ok = False
    family = converging_family(perturbed_line(halfwidth=45.0),
                               [0.2, 0.1, 0.02, 2e-4, 0.0])
    rep = verify_set_measure_equivalence(family, eps=eps)
    names = {c.name: c.passed for c in rep.checks}
    transfer_ok = names["component counts agree whenever the field gap is below nu/2"]
    fault_ok = names["injected extra atom breaks the component agreement"]
    nonvacuous = names["at least two members below half the profile mass"]
    report(8, diam_ok and transfer_ok and fault_ok and nonvacuous,
           "component diameters < eps on every corpus member at eta(eps, M); "
           "field gap < nu/2 implies component count match; injected fault fails")


def test_criterion_09_measure_transfer_and_control():
    rep = verify_period_transfer(standard_corpus()["perturbed_1d"],
                                 standard_corpus()["poisson_1d"])
    details = "; ".join(f"{c.name}: {'ok' if c.passed else 'FAIL'}" for c in rep.checks)
    report(9, rep.passed, details)


def test_criterion_10_shift_clustering():
    d = generate(integer_lattice(1, 60.0))
    rng = np.random.default_rng(20260809)
    shifts = rng.uniform(0.0, 4.0, size=(10, 1))
    rep = verify_bochner_smoke(d, shifts, eps=0.3, min_size=3)
    size = rep.checks[0].margin
    report(10, rep.passed,
           f"10 random translates of Z at eps=0.3: consistent sub-family of "
           f"size {size:.0f} >= 3")
