import math

import numpy as np
import pytest

from bornlab import (
    Axiom,
    CandidateDistribution,
    DimensionError,
    DomainError,
    born_candidate,
    check_n_independence,
    check_normalization,
    check_orthogonality_axiom,
    check_unitary_invariance,
    check_well_defined,
    haar_unitary,
    random_state,
    run_axiom_suite,
    standard_basis,
    symmetric_state,
)
from bornlab.axioms import pair_form
from bornlab.hilbert import OrthonormalBasis


def cand(name, fn):
    return CandidateDistribution(name, fn)


ABS = cand("r", lambda z: abs(z))
QUARTIC = cand("r^4", lambda z: abs(z) ** 4)


class TestWellDefined:
    def test_born_passes(self):
        report = check_well_defined(born_candidate(), [0.0, 0.5, 1.0, 0.3 + 0.4j])
        assert report.max_residual == 0.0
        assert report.passed

    def test_exceeds_one(self):
        report = check_well_defined(cand("2r^2", lambda z: 2 * abs(z) ** 2), [1.0])
        assert report.max_residual == pytest.approx(1.0)
        assert not report.passed

    def test_below_zero(self):
        report = check_well_defined(cand("r^2-0.1", lambda z: abs(z) ** 2 - 0.1), [0.0])
        assert report.max_residual == pytest.approx(0.1)

    def test_nan_output_is_infinite_residual(self):
        report = check_well_defined(cand("nan", lambda z: float("nan")), [0.5])
        assert report.max_residual == math.inf

    def test_complex_output_is_infinite_residual(self):
        report = check_well_defined(cand("z", lambda z: z), [0.5j])
        assert report.max_residual == math.inf


class TestNormalization:
    def test_born_parseval(self):
        basis = OrthonormalBasis(haar_unitary(6, 3).matrix)
        state = random_state(6, 4)
        assert check_normalization(born_candidate(), basis, state) <= 1e-12

    def test_abs_candidate_exact_residual(self):
        psi = symmetric_state(standard_basis(2), 0.0)
        residual = check_normalization(ABS, standard_basis(2), psi.state)
        assert residual == pytest.approx(math.sqrt(2) - 1, abs=1e-12)

    def test_quartic_candidate_exact_residual(self):
        psi = symmetric_state(standard_basis(2), 0.0)
        residual = check_normalization(QUARTIC, standard_basis(2), psi.state)
        assert residual == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("p", [1, 4])
    def test_power_law_residual_formula(self, p):
        # |z|^p at the N=2 symmetric state gives residual |2^(1-p/2) - 1|
        candidate = cand(f"r^{p}", lambda z, p=p: abs(z) ** p)
        psi = symmetric_state(standard_basis(2), 0.0)
        residual = check_normalization(candidate, standard_basis(2), psi.state)
        assert residual == pytest.approx(abs(2 ** (1 - p / 2) - 1), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            check_normalization(born_candidate(), standard_basis(2), random_state(3, 0))


class TestOrthogonality:
    def test_born_passes(self):
        basis = OrthonormalBasis(haar_unitary(5, 8).matrix)
        assert check_orthogonality_axiom(born_candidate(), basis).max_residual <= 1e-10

    def test_offset_candidate_fails_at_zero(self):
        shifted = cand("r^2+0.05", lambda z: abs(z) ** 2 + 0.05)
        report = check_orthogonality_axiom(shifted, standard_basis(3))
        assert report.max_residual == pytest.approx(0.05)
        assert not report.passed

    def test_abs_candidate_passes_this_axiom_alone(self):
        report = check_orthogonality_axiom(ABS, standard_basis(3))
        assert report.max_residual <= 1e-10


class TestUnitaryInvariance:
    def test_overlap_form_is_invariant(self):
        report = check_unitary_invariance(pair_form(born_candidate()), 50, 1, dim=4)
        assert report.max_residual <= 1e-12

    def test_basis_dependent_pair_form_fails(self):
        peeking = lambda v, w: abs(w.amplitudes[0]) ** 2
        report = check_unitary_invariance(peeking, 50, 1, dim=4, name="amp1")
        assert report.max_residual > 0.1

    def test_bad_trials(self):
        with pytest.raises(ValueError):
            check_unitary_invariance(pair_form(born_candidate()), 0, 1)


class TestNIndependence:
    def test_born_structural_zero(self):
        report = check_n_independence(born_candidate(), {2, 4, 8}, seed=0)
        assert report.max_residual <= 1e-12

    def test_overlap_only_candidate(self):
        report = check_n_independence(ABS, {2, 3, 4, 6}, seed=5)
        assert report.max_residual <= 1e-9
        assert report.worst_case["overlap_only"]

    def test_cross_dimension_fraction_match(self):
        # modulus 1/2 arises as K/N = 1/4 in both N=4 and N=8 pipelines
        report = check_n_independence(born_candidate(), {4, 8}, seed=3)
        assert report.max_residual <= 1e-12


class TestDomain:
    def test_outside_disk_rejected(self):
        with pytest.raises(DomainError):
            born_candidate()(1.5)

    def test_float_slack_tolerated(self):
        assert born_candidate()(1.0 + 5e-10) == pytest.approx(1.0, abs=1e-8)


def test_full_suite_on_born():
    reports = run_axiom_suite(born_candidate(), dims=[2, 3, 5], trials=50, seed=7)
    assert [r.axiom for r in reports] == [
        Axiom.WELL_DEFINED,
        Axiom.NORMALIZATION,
        Axiom.ORTHOGONALITY,
        Axiom.UNITARY_INVARIANCE,
        Axiom.N_INDEPENDENCE,
    ]
    assert all(r.passed for r in reports)
    assert max(r.max_residual for r in reports) <= 1e-9


def test_suite_determinism():
    a = run_axiom_suite(born_candidate(), dims=[2, 4], trials=20, seed=11)
    b = run_axiom_suite(born_candidate(), dims=[2, 4], trials=20, seed=11)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]


def test_report_passed_matches_tolerance():
    report = check_well_defined(cand("1.5", lambda z: 1.5), [1.0], tolerance=0.6)
    assert report.max_residual == pytest.approx(0.5)
    assert report.passed
    report = check_well_defined(cand("1.5", lambda z: 1.5), [1.0], tolerance=0.4)
    assert not report.passed
