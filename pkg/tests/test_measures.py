import math

import numpy as np
import pytest
from scipy.integrate import quad

from apsets import (
    CUBE,
    CollarSpec,
    GridMismatchError,
    SampleGrid,
    TestFunction,
    ValidationError,
    Window,
    WindowTooSmallError,
    component_count_match,
    components,
    config,
    convolve,
    eta_for,
    field_values,
    local_count_max,
    matching_feasible,
    measure_period_check,
    restrict,
    scan_measure_periods,
    standard_corpus,
    translate,
    weak_uniform_distance,
    with_extra_point,
)
from apsets.measures import field_distance
from apsets.scanner import PeriodScanSpec


@pytest.fixture(scope="module")
def tent():
    return TestFunction.tent(0.5, 1)


@pytest.fixture(scope="module")
def grid():
    return SampleGrid(Window(CUBE, [0.0], 40.0), 0.125)


class TestProfiles:
    def test_tent_basics(self, tent):
        assert tent([0.0]) == 1.0
        assert tent([0.25]) == 0.5
        assert tent([0.5]) == 0.0
        assert tent.lipschitz == 2.0

    def test_tent_mass_matches_quadrature(self):
        for dim in (1, 2, 3):
            phi = TestFunction.tent(0.7, dim)
            surface = dim * (math.pi ** (dim / 2) / math.gamma(dim / 2 + 1))
            want, _ = quad(lambda s: (1 - s / 0.7) * surface * s ** (dim - 1), 0, 0.7)
            assert abs(phi.mass - want) < 1e-12

    def test_tent_mass_line_is_radius(self):
        assert TestFunction.tent(0.3, 1).mass == 0.3

    def test_bump_basics(self):
        phi = TestFunction.bump(0.5, 1)
        assert phi([0.0]) == 1.0
        assert phi([0.5]) == 0.0
        assert 0 < phi([0.25]) < 1

    def test_bump_lipschitz_is_an_upper_bound(self):
        phi = TestFunction.bump(1.0, 1)
        s = np.linspace(0, 1, 20001)
        vals = phi.radial(s)
        slopes = np.abs(np.diff(vals)) / np.diff(s)
        assert slopes.max() <= phi.lipschitz

    def test_invalid_radius(self):
        with pytest.raises(ValidationError):
            TestFunction.tent(0.0, 1)


class TestConvolve:
    def test_lattice_values(self, lattice_z, tent):
        assert field_values(lattice_z, tent, [[0.0]])[0] == 1.0
        assert field_values(lattice_z, tent, [[0.25]])[0] == 0.5

    def test_field_is_periodic_across_nodes(self, lattice_z, tent, grid):
        f = convolve(lattice_z, tent, grid)
        per_cell = f.values.reshape(-1, 8)  # 8 nodes per unit cell
        assert np.allclose(per_cell - per_cell[0], 0.0, atol=1e-12)

    def test_values_bounded_by_local_count(self, tent):
        c = config([[0.0], [0.1], [0.2], [5.0]], Window(CUBE, [0.0], 20.0))
        f = convolve(c, tent, SampleGrid(Window(CUBE, [0.0], 10.0), 0.05))
        assert f.values.max() <= local_count_max(c, radius=tent.support_radius)
        assert np.all(f.values >= 0)

    def test_additive_over_disjoint_union(self, tent, grid):
        w = Window(CUBE, [0.0], 100.0)
        a = config(np.arange(-50, 50, dtype=float).reshape(-1, 1), w)
        b = config((np.arange(-49, 49) + 0.4).reshape(-1, 1), w)
        both = config(np.concatenate([a.points, b.points]), w)
        fa = convolve(a, tent, grid).values
        fb = convolve(b, tent, grid).values
        fab = convolve(both, tent, grid).values
        assert np.allclose(fab, fa + fb, atol=1e-12)

    def test_translation_equivariance(self, lattice_z, tent):
        t = 3.25
        grid0 = SampleGrid(Window(CUBE, [0.0], 20.0), 0.25)
        grid1 = SampleGrid(Window(CUBE, [t], 20.0), 0.25)
        f0 = convolve(lattice_z, tent, grid0).values
        f1 = convolve(translate(lattice_z, [t]), tent, grid1).values
        assert np.allclose(f0, f1, atol=1e-12)

    def test_grid_must_leave_margin(self, lattice_z, tent):
        with pytest.raises(WindowTooSmallError):
            convolve(lattice_z, tent, SampleGrid(Window(CUBE, [0.0], 100.0), 1.0))

    def test_bump_profile_field(self):
        phi = TestFunction.bump(0.5, 1)
        c = config([[0.0], [2.0]], Window(CUBE, [0.0], 10.0))
        grid = SampleGrid(Window(CUBE, [0.0], 8.0), 0.5)
        f = convolve(c, phi, grid).values
        nodes = grid.nodes().ravel()
        assert f[nodes == 0.0][0] == 1.0  # isolated atom, phi(0) = 1
        assert f[nodes == 1.0][0] == 0.0  # outside both supports
        assert np.all((0 <= f) & (f <= 1))


class TestWeakUniformDistance:
    def test_identical_is_zero(self, lattice_z, tent, grid):
        assert weak_uniform_distance(lattice_z, lattice_z, tent, grid) == 0.0

    def test_small_shift_lipschitz_bound(self, lattice_z, tent, grid):
        for delta in (0.1, 0.05, 0.01):
            shifted = restrict(translate(lattice_z, [delta]), lattice_z.window)
            d = weak_uniform_distance(lattice_z, shifted, tent, grid)
            assert d <= 2 * delta / tent.support_radius + 1e-12
        # and the gap vanishes with the shift
        tiny = restrict(translate(lattice_z, [1e-6]), lattice_z.window)
        assert weak_uniform_distance(lattice_z, tiny, tent, grid) < 1e-4

    def test_extra_atom_is_visible(self, lattice_z):
        phi = TestFunction.tent(0.2, 1)
        grid = SampleGrid(Window(CUBE, [0.0], 40.0), 0.25)  # nodes hit 0.5
        extra = with_extra_point(lattice_z, [0.5])
        assert weak_uniform_distance(lattice_z, extra, phi, grid) == 1.0

    def test_grid_mismatch(self, lattice_z, tent, grid):
        other = SampleGrid(Window(CUBE, [0.0], 40.0), 0.25)
        f1 = convolve(lattice_z, tent, grid)
        f2 = convolve(lattice_z, tent, other)
        with pytest.raises(GridMismatchError):
            field_distance(f1, f2)


class TestMeasurePeriodCheck:
    def test_exact_period(self, lattice_z, tent, grid):
        assert measure_period_check(lattice_z, [3.0], 0.05, tent, grid)

    def test_half_shift_fails(self, lattice_z, tent):
        grid = SampleGrid(Window(CUBE, [0.0], 40.0), 0.25)
        assert not measure_period_check(lattice_z, [0.5], 0.3, tent, grid)

    def test_zero_shift(self, lattice_z, tent, grid):
        assert measure_period_check(lattice_z, [0.0], 0.0, tent, grid)

    def test_shifted_grid_must_fit(self, lattice_z, tent):
        wide = SampleGrid(Window(CUBE, [0.0], 98.0), 1.0)
        with pytest.raises(WindowTooSmallError):
            measure_period_check(lattice_z, [3.0], 0.1, tent, wide)


class TestEtaFor:
    def test_reference_values(self):
        assert eta_for(0.5, 4) == 0.05
        assert eta_for(0.9, 1) == 0.225
        assert eta_for(0.5, 1000) == 0.5 / 2002

    def test_strictly_inside_admissible_range(self):
        for eps, m in ((0.5, 4), (0.99, 2), (0.01, 7)):
            assert eta_for(eps, m) < eps / (2 * m + 1)

    def test_domain_errors(self):
        with pytest.raises(ValidationError):
            eta_for(1.0, 4)
        with pytest.raises(ValidationError):
            eta_for(0.0, 4)
        with pytest.raises(ValidationError):
            eta_for(0.5, 0)


class TestComponents:
    def test_isolated_lattice(self):
        c = config(np.arange(-10, 11, dtype=float).reshape(-1, 1),
                   Window(CUBE, [0.0], 21.0))
        comps = components(c, 0.3)
        assert len(comps) == 21 and all(comp.diameter == 0.0 for comp in comps)

    def test_pair_merges(self):
        c = config([[0.0], [0.5], [10.0]], Window(CUBE, [5.0], 30.0))
        comps = components(c, 0.3)
        assert [comp.indices.tolist() for comp in comps] == [[0, 1], [2]]
        assert comps[0].diameter == 0.5 and comps[1].diameter == 0.0

    def test_tangent_balls_do_not_merge(self):
        # open balls of radius 0.25 around points 0.5 apart are disjoint
        c = config([[0.0], [0.5]], Window(CUBE, [0.0], 4.0))
        assert len(components(c, 0.25)) == 2

    def test_diameter_bound_from_eta(self):
        eps = 0.5
        for name, member in standard_corpus().items():
            m_hat = max(local_count_max(member, radius=1.0), 1)
            eta = eta_for(eps, m_hat)
            assert all(comp.diameter < eps for comp in components(member, eta)), name


class TestComponentCountMatch:
    def test_identical(self, lattice_z):
        assert component_count_match(lattice_z, lattice_z, 0.3)

    def test_small_perturbation(self, lattice_z):
        moved = config(lattice_z.points + 0.01, Window(CUBE, [0.01], 100.0))
        moved = config(moved.points, lattice_z.window)
        assert component_count_match(lattice_z, moved, 0.3)

    def test_extra_point_detected(self, lattice_z):
        extra = with_extra_point(lattice_z, [0.5])
        assert not component_count_match(lattice_z, extra, 0.1)

    def test_measure_to_set_transfer(self):
        # whenever the field gap stays below half the profile mass, the
        # per-component counts must agree
        w = Window(CUBE, [0.0], 100.0)
        base = config(np.arange(-50, 50, dtype=float).reshape(-1, 1), w)
        eta = eta_for(0.5, 2)
        phi = TestFunction.tent(eta / 2, 1)
        grid = SampleGrid(Window(CUBE, [0.0], 90.0), phi.mass / (8 * phi.lipschitz))
        rng = np.random.default_rng(17)
        for scale in (1e-4, 1e-3, 5e-3):
            jitter = rng.uniform(-scale, scale, size=(100, 1))
            moved = config(base.points + jitter, w)
            wud = weak_uniform_distance(base, moved, phi, grid)
            if wud < phi.mass / 2:
                assert component_count_match(base, moved, eta)

    def test_set_to_measure_transfer(self, lattice_z):
        # a matching within eps forces the field shift below eps * Lip * N
        eps = 0.2
        phi = TestFunction.tent(1.0, 1)
        n_atoms = local_count_max(lattice_z, radius=phi.support_radius + eps)
        tol = eps * phi.lipschitz * n_atoms
        grid = SampleGrid(Window(CUBE, [0.0], 80.0), 0.1)
        for tau in ([3.0], [5.1], [-2.15]):
            shifted = restrict(translate(lattice_z, tau), lattice_z.window)
            ok, _ = matching_feasible(lattice_z, shifted, eps,
                                      CollarSpec(abs(tau[0]) + eps), strict=True)
            if ok:
                assert measure_period_check(lattice_z, tau, tol, phi, grid)


class TestMeasureScan:
    def test_lattice_measure_periods(self, lattice_z):
        spec = PeriodScanSpec(eps=0.3, search_box=Window(CUBE, [0.0], 8.0),
                              grid_step=0.1)
        phi = TestFunction.tent(0.5, 1)
        report = scan_measure_periods(lattice_z, spec, phi)
        got = set(map(float, report.accepted.ravel()))
        assert all(abs(t - round(t)) <= 0.1 + 1e-9 for t in got)
        assert {float(t) for t in range(-3, 4)} <= got
