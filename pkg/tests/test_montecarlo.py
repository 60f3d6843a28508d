import math
from fractions import Fraction

import numpy as np
import pytest

from bornlab import (
    DimensionError,
    ParameterError,
    StateVector,
    frequentist_report,
    sample_outcomes,
    simulate_fractions,
    standard_basis,
    symmetric_state,
)


class TestSampleOutcomes:
    def test_deterministic_outcome_state(self):
        counts = sample_outcomes(standard_basis(4).vector(0), standard_basis(4), 5000, 1)
        assert list(counts) == [5000, 0, 0, 0]

    def test_symmetric_state_n2_within_4_sigma(self):
        psi = symmetric_state(standard_basis(2), 0.0)
        counts = sample_outcomes(psi.state, standard_basis(2), 10**6, 2)
        sigma = math.sqrt(10**6 * 0.25)
        assert abs(counts[0] - 500_000) <= 4 * sigma

    def test_one_third_two_thirds_within_4_sigma(self):
        state = StateVector(np.sqrt([1 / 3, 2 / 3]))
        counts = sample_outcomes(state, standard_basis(2), 10**6, 3)
        sigma = math.sqrt(10**6 * (1 / 3) * (2 / 3))
        assert abs(counts[0] - 10**6 / 3) <= 4 * sigma
        assert abs(counts[1] - 2 * 10**6 / 3) <= 4 * sigma

    def test_conservation(self):
        state = StateVector(np.sqrt([0.1, 0.2, 0.3, 0.4]))
        for n in (1, 7, 65_536, 100_001):
            assert sample_outcomes(state, standard_basis(4), n, 9).sum() == n

    def test_seed_determinism(self):
        state = StateVector(np.sqrt([1 / 3, 2 / 3]))
        a = sample_outcomes(state, standard_basis(2), 200_000, 5)
        b = sample_outcomes(state, standard_basis(2), 200_000, 5)
        assert np.array_equal(a, b)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            sample_outcomes(standard_basis(3).vector(0), standard_basis(2), 10, 0)

    def test_bad_sample_count(self):
        with pytest.raises(ParameterError):
            sample_outcomes(standard_basis(2).vector(0), standard_basis(2), 0, 0)


class TestFrequentistReport:
    def test_fabricated_exact_counts(self):
        report = frequentist_report([250, 750], [Fraction(1, 4), Fraction(3, 4)], 1000)
        assert report.chi_square == 0.0
        assert report.passed

    def test_maximal_deviation_fails(self):
        n = 10_000
        report = frequentist_report([0, n], [Fraction(1, 2), Fraction(1, 2)], n)
        assert report.chi_square == pytest.approx(n)
        assert not report.passed

    def test_expected_must_sum_to_one(self):
        with pytest.raises(ParameterError):
            frequentist_report([1, 1], [Fraction(1, 2), Fraction(1, 4)], 2)

    def test_counts_must_sum_to_n(self):
        with pytest.raises(ParameterError):
            frequentist_report([1, 2], [Fraction(1, 2), Fraction(1, 2)], 4)

    def test_single_cell_trivial(self):
        report = frequentist_report([100], [Fraction(1)], 100)
        assert report.chi_square == 0.0
        assert report.degrees_of_freedom == 0
        assert report.passed

    def test_small_cells_pooled(self):
        # expected count 1 in the tiny cell: must be pooled, not divided by
        expected = [Fraction(1, 1000), Fraction(999, 1000)]
        report = frequentist_report([1, 999], expected, 1000)
        assert report.degrees_of_freedom <= 1
        assert math.isfinite(report.chi_square)

    def test_json_round_trip_fields(self):
        report = simulate_fractions([Fraction(1, 3), Fraction(2, 3)], 100_000, 4)
        doc = report.to_json()
        assert doc["n_samples"] == 100_000
        assert sum(doc["counts"]) == 100_000
        assert doc["expected"][0]["fraction"] == "1/3"

    def test_csv_output(self):
        report = simulate_fractions([Fraction(1, 2), Fraction(1, 2)], 1000, 4)
        lines = report.to_csv().strip().splitlines()
        assert lines[0] == "cell,expected,observed,z"
        assert len(lines) == 3


class TestSimulateFractions:
    def test_honest_simulation_passes(self):
        report = simulate_fractions([Fraction(1, 3), Fraction(2, 3)], 10**6, 1)
        assert report.passed

    def test_probabilities_validated(self):
        with pytest.raises(ParameterError):
            simulate_fractions([Fraction(2, 3), Fraction(2, 3)], 100, 1)


def test_inverse_sqrt_n_convergence():
    # empirical max |freq - p| over 20 seeds shrinks at least 3x from
    # n = 1e4 to n = 1e6 for the (1/3, 2/3) fixture
    p = np.array([1 / 3, 2 / 3])
    state = StateVector(np.sqrt(p))
    basis = standard_basis(2)

    def max_err(n):
        worst = 0.0
        for seed in range(20):
            counts = sample_outcomes(state, basis, n, seed)
            worst = max(worst, float(np.max(np.abs(counts / n - p))))
        return worst

    assert max_err(10**4) >= 3 * max_err(10**6)
