import math

import numpy as np
import pytest

from apsets import (
    CUBE,
    PeriodScanSpec,
    ValidationError,
    Window,
    WindowTooSmallError,
    config,
    generate,
    group_property_check,
    is_almost_period,
    perturbed_line,
    s_property_estimate,
    scan_periods,
    standard_corpus,
)


def z_scan(lattice_z, eps=0.2, half=10.0, step=0.05, **kw):
    spec = PeriodScanSpec(eps=eps, search_box=Window(CUBE, [0.0], 2 * half),
                          grid_step=step, **kw)
    return scan_periods(lattice_z, spec)


class TestIsAlmostPeriod:
    def test_near_integer_shift(self, lattice_z):
        assert is_almost_period(lattice_z, [5.1], 0.2)

    def test_half_shift(self, lattice_z):
        assert not is_almost_period(lattice_z, [0.5], 0.2)

    def test_union_simultaneous_approximation(self, union_sqrt2):
        # 5 * sqrt(2) = 7.0711..., so shifting by 7 moves the sqrt(2)
        # component by about 0.0711 and the integer component not at all
        assert is_almost_period(union_sqrt2, [7.0], 0.1)
        assert not is_almost_period(union_sqrt2, [7.3], 0.1)

    def test_window_too_small(self):
        tiny = config([[0.0]], Window(CUBE, [0.0], 2.0))
        with pytest.raises(WindowTooSmallError):
            is_almost_period(tiny, [5.0], 0.2)

    def test_boundary_is_strict(self, lattice_z):
        # 0.2 away from the nearest integer is not strictly below eps = 0.2
        assert not is_almost_period(lattice_z, [0.2], 0.2)
        assert is_almost_period(lattice_z, [0.15], 0.2)


class TestScanPeriods:
    def test_spec_validation(self):
        with pytest.raises(ValidationError):
            PeriodScanSpec(eps=0.2, search_box=Window(CUBE, [0.0], 20.0), grid_step=0.2)

    def test_lattice_accepted_set_is_exact(self, lattice_z):
        report = z_scan(lattice_z)
        got = set(map(float, report.accepted.ravel()))
        want = set()
        for j in range(-200, 201):  # tau = 0.05 j; exact threshold in integers
            r = j % 20
            if min(r, 20 - r) < 4:
                want.add(0.05 * j)
        assert got == want

    def test_lattice_covering_radius(self, lattice_z):
        report = z_scan(lattice_z)
        # covering radius within a grid step of lattice covering radius + eps
        assert abs(report.covering_radius - (0.5 + 0.2)) <= 0.05 + 1e-9

    def test_zero_is_always_accepted(self, lattice_z):
        report = z_scan(lattice_z, eps=0.06, half=2.0, step=0.02)
        assert any(np.all(tau == 0) for tau in report.accepted)

    def test_accepted_is_symmetric(self, lattice_z):
        report = z_scan(lattice_z)
        got = set(map(float, report.accepted.ravel()))
        assert got == {-t for t in got}

    def test_monotone_in_eps(self, lattice_z):
        small = z_scan(lattice_z, eps=0.1, step=0.05)
        large = z_scan(lattice_z, eps=0.3, step=0.05)
        s = set(map(float, small.accepted.ravel()))
        l = set(map(float, large.accepted.ravel()))
        assert s <= l

    def test_threads_match_sequential(self, lattice_z):
        spec = PeriodScanSpec(eps=0.2, search_box=Window(CUBE, [0.0], 8.0),
                              grid_step=0.1)
        seq = scan_periods(lattice_z, spec, workers=1)
        par = scan_periods(lattice_z, spec, workers=4)
        assert np.array_equal(seq.accepted, par.accepted)
        assert seq.covering_radius == par.covering_radius

    def test_poisson_control_accepts_only_trivial_shifts(self):
        control = standard_corpus()["poisson_1d"]
        eps = 0.1
        spec = PeriodScanSpec(eps=eps, search_box=Window(CUBE, [0.0], 12.0),
                              grid_step=0.05)
        report = scan_periods(control, spec)
        # |tau| < eps is accepted for any input; nothing beyond may appear
        norms = np.abs(report.accepted.ravel())
        assert np.all(norms < eps)
        assert report.covering_radius > 5.0  # nearly the whole box is empty

    def test_perturbed_lattice_has_nontrivial_periods(self):
        d = generate(perturbed_line(halfwidth=50.0, amplitude=0.1))
        spec = PeriodScanSpec(eps=0.25, search_box=Window(CUBE, [0.0], 60.0),
                              grid_step=0.1)
        report = scan_periods(d, spec)
        norms = np.abs(report.accepted.ravel())
        assert np.any(norms > 1.0)
        assert report.covering_radius < 30.0  # far below the box radius

    def test_plane_lattice_accepted_set_is_exact(self):
        g = np.arange(-10, 10, dtype=float)
        pts = np.stack(np.meshgrid(g, g, indexing="ij"), -1).reshape(-1, 2)
        z2 = config(pts, Window(CUBE, [0.0, 0.0], 20.0))
        spec = PeriodScanSpec(eps=0.3, search_box=Window(CUBE, [0.0, 0.0], 2.4),
                              grid_step=0.1)
        report = scan_periods(z2, spec)
        got = {tuple(np.round(tau, 6)) for tau in report.accepted}
        want = set()
        for j1 in range(-12, 13):  # tau = 0.1 (j1, j2); residue norm in integers
            for j2 in range(-12, 13):
                m1 = min(j1 % 10, 10 - j1 % 10)
                m2 = min(j2 % 10, 10 - j2 % 10)
                if m1 * m1 + m2 * m2 < 9:  # shift within 0.3 of the lattice
                    want.add((round(0.1 * j1, 6), round(0.1 * j2, 6)))
        assert got == want

    def test_record_distances(self, lattice_z):
        spec = PeriodScanSpec(eps=0.2, search_box=Window(CUBE, [0.0], 4.0),
                              grid_step=0.1)
        report = scan_periods(lattice_z, spec, record_distances=True)
        assert report.distances.shape[0] == report.candidates.shape[0]
        frac = np.abs(report.candidates.ravel()
                      - np.round(report.candidates.ravel()))
        assert np.allclose(report.distances, frac, atol=1e-9)

    def test_window_too_small_propagates(self):
        tiny = config([[0.0]], Window(CUBE, [0.0], 4.0))
        spec = PeriodScanSpec(eps=0.2, search_box=Window(CUBE, [0.0], 20.0),
                              grid_step=0.1)
        with pytest.raises(WindowTooSmallError):
            scan_periods(tiny, spec)

    def test_fixed_narrow_collar_sets_boundary_limited(self, lattice_z):
        # a fixed collar below |tau| + eps cannot absorb the loss region of
        # accepted shifts, so such acceptances are flagged
        narrow = z_scan(lattice_z, eps=0.2, half=3.0, step=0.05, collar_width=0.1)
        assert narrow.boundary_limited
        auto = z_scan(lattice_z, eps=0.2, half=3.0, step=0.05)
        assert not auto.boundary_limited


class TestGroupProperty:
    def test_lattice_has_no_violations(self, lattice_z):
        report = z_scan(lattice_z, half=6.0)
        assert group_property_check(report, lattice_z, max_pairs=150, seed=1) == []

    def test_union_has_no_violations(self, union_sqrt2):
        spec = PeriodScanSpec(eps=0.15, search_box=Window(CUBE, [0.0], 20.0),
                              grid_step=0.05)
        report = scan_periods(union_sqrt2, spec)
        assert group_property_check(report, union_sqrt2, max_pairs=120, seed=2) == []

    def test_single_accepted_shift(self):
        control = standard_corpus()["poisson_1d"]
        spec = PeriodScanSpec(eps=0.02, search_box=Window(CUBE, [0.0], 6.0),
                              grid_step=0.01)
        report = scan_periods(control, spec)
        assert group_property_check(report, control) == []


class TestSPropertyEstimate:
    def test_lattice_worst_shift(self, lattice_z):
        est = s_property_estimate(lattice_z, [[0.5], [0.25], [0.7]])
        assert est == 0.5

    def test_lattice_2d_diagonal(self, lattice_z2):
        est = s_property_estimate(lattice_z2, [[0.5, 0.5]])
        assert abs(est - math.sqrt(2) / 2) <= 1e-12

    def test_zero_shift(self, lattice_z):
        assert s_property_estimate(lattice_z, [[0.0]]) == 0.0
