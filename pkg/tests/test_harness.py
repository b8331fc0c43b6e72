import numpy as np
import pytest

from apsets import (
    converging_family,
    dumps_canonical,
    generate,
    integer_lattice,
    perturbed_line,
    run_suite,
    standard_corpus,
    verify_bochner_smoke,
    verify_limit_theorem,
    verify_period_transfer,
    verify_set_measure_equivalence,
)
from apsets.errors import ValidationError


@pytest.fixture(scope="module")
def family():
    return converging_family(perturbed_line(halfwidth=45.0), [0.12, 0.06, 0.03, 0.0])


class TestLimitTheorem:
    def test_perturbed_family_passes(self, family):
        report = verify_limit_theorem(family, eps_ladder=(0.45, 0.3))
        assert report.passed
        assert all("transferred" in c.name for c in report.checks)

    def test_non_converging_family_flags_precondition(self):
        # both non-limit members stay at distance about 0.3 from the limit,
        # beyond eps/3 = 0.15, so no transfer may be claimed
        stuck = converging_family(perturbed_line(halfwidth=45.0, amplitude=0.3),
                                  [0.3, 0.3, 0.0])
        report = verify_limit_theorem(stuck, eps_ladder=(0.45,))
        assert not report.passed
        assert "no member converged" in report.checks[0].details

    def test_constant_family_passes_trivially(self):
        fam = converging_family(perturbed_line(halfwidth=45.0), [0.0, 0.0])
        report = verify_limit_theorem(fam, eps_ladder=(0.45,))
        assert report.passed


class TestBochnerSmoke:
    def test_lattice_with_random_shifts(self):
        d = generate(integer_lattice(1, 60.0))
        rng = np.random.default_rng(20260809)
        shifts = rng.uniform(0.0, 4.0, size=(10, 1))
        report = verify_bochner_smoke(d, shifts, eps=0.3, min_size=3)
        assert report.passed

    def test_equal_shifts_pass_with_zero_period(self):
        d = generate(integer_lattice(1, 40.0))
        report = verify_bochner_smoke(d, [[1.3]] * 4, eps=0.3, min_size=4)
        assert report.passed

    def test_perturbed_lattice_finds_pairs(self):
        d = generate(perturbed_line(halfwidth=45.0))
        rng = np.random.default_rng(3)
        shifts = rng.uniform(0.0, 3.0, size=(6, 1))
        report = verify_bochner_smoke(d, shifts, eps=0.3, min_size=2)
        assert report.passed


class TestSetMeasureEquivalence:
    def test_converging_family_passes(self):
        fam = converging_family(perturbed_line(halfwidth=45.0),
                                [0.2, 0.1, 0.02, 2e-4, 0.0])
        report = verify_set_measure_equivalence(fam)
        assert report.passed
        names = [c.name for c in report.checks]
        assert any("injected extra atom" in n for n in names)

    def test_identical_family_all_zero_gaps(self):
        fam = converging_family(perturbed_line(halfwidth=45.0), [0.0, 0.0])
        report = verify_set_measure_equivalence(fam)
        assert report.passed


class TestPeriodTransfer:
    def test_perturbed_versus_poisson(self):
        report = verify_period_transfer(
            standard_corpus()["perturbed_1d"], standard_corpus()["poisson_1d"],
        )
        assert report.passed


class TestRunSuite:
    def test_all_tokens(self):
        for token in ("t1", "t2"):
            reports = run_suite(token)
            assert all(r.passed for r in reports)

    def test_aliases(self):
        assert run_suite("limit-stability")[0].suite.startswith("t1")

    def test_unknown_suite(self):
        with pytest.raises(ValidationError):
            run_suite("t99")

    def test_reports_serialize_reproducibly(self):
        a = dumps_canonical([r.to_dict() for r in run_suite("t1")])
        b = dumps_canonical([r.to_dict() for r in run_suite("t1")])
        assert a == b
