import math

import pytest

from bornlab import (
    Axiom,
    CandidateDistribution,
    ConstructionTag,
    FalsifierConfig,
    ParameterError,
    born_candidate,
    candidate_from_expression,
    falsify,
    replay_witness,
    shrink_witness,
)
from bornlab.falsifier import hill_climb

from conftest import make_wrong_above_denominator


def quick_cfg(**overrides):
    defaults = dict(
        n_range=(2, 3, 4, 5, 6, 7, 8),
        random_trials=10,
        optimizer_steps=40,
        seed=0,
    )
    defaults.update(overrides)
    return FalsifierConfig(**defaults)


class TestLedgerPhase:
    def test_abs_candidate_witness_at_n2(self, ledger8):
        result = falsify(candidate_from_expression("r"), quick_cfg(), ledger8)
        w = result.witness
        assert w is not None
        assert w.dimension == 2
        assert w.axiom is Axiom.NORMALIZATION
        assert w.construction_tag is ConstructionTag.LEDGER_CERTIFICATE
        assert w.residual == pytest.approx(math.sqrt(2) - 1, abs=1e-12)

    def test_quartic_witness_residual(self, ledger8):
        result = falsify(candidate_from_expression("r^4"), quick_cfg(), ledger8)
        assert result.witness.dimension == 2
        assert result.witness.residual == pytest.approx(0.5, abs=1e-12)

    def test_offset_candidate_caught_by_orthogonality(self, ledger8):
        result = falsify(candidate_from_expression("r^2 + 0.05"), quick_cfg(), ledger8)
        assert result.witness.axiom is Axiom.ORTHOGONALITY
        assert result.witness.residual == pytest.approx(0.05, abs=1e-12)

    def test_phase_dependent_candidate_caught(self, ledger8):
        result = falsify(
            candidate_from_expression("r^2*(1 + 0.1*sin(phi))"), quick_cfg(), ledger8
        )
        assert result.witness is not None
        assert result.witness.residual >= 0.01

    def test_power_2_1_candidate(self, ledger8):
        # N * N^(-p/2) - 1 at p = 2.1 grows with N; the certificate at the
        # largest in-range dimension must see at least the N=8 residual
        result = falsify(candidate_from_expression("r^2.1"), quick_cfg(), ledger8)
        assert result.witness is not None
        assert result.witness.construction_tag is ConstructionTag.LEDGER_CERTIFICATE


class TestCleanRun:
    def test_born_produces_no_witness(self, ledger8):
        result = falsify(born_candidate(), quick_cfg(n_range=(2, 3, 4)), ledger8)
        assert result.witness is None
        assert result.probes["ledger"] > 0
        assert result.probes["random"] > 0
        assert result.probes["optimizer"] > 0


class TestWitnessReplay:
    def test_replay_matches_recorded_residual(self, ledger8):
        for expr in ("r", "r^4", "r^2 + 0.05"):
            result = falsify(candidate_from_expression(expr), quick_cfg(), ledger8)
            w = result.witness
            assert abs(replay_witness(w) - w.residual) <= 1e-12

    def test_replay_with_explicit_candidate(self, ledger8):
        result = falsify(candidate_from_expression("r"), quick_cfg(), ledger8)
        replayed = replay_witness(result.witness, candidate_from_expression("r"))
        assert abs(replayed - result.witness.residual) <= 1e-12


class TestDeterminism:
    def test_identical_runs_identical_witness(self, ledger8):
        cfg = quick_cfg()
        a = falsify(candidate_from_expression("r"), cfg, ledger8)
        b = falsify(candidate_from_expression("r"), cfg, ledger8)
        assert a.to_json() == b.to_json()
        assert a.witness.state.amplitudes.tobytes() == b.witness.state.amplitudes.tobytes()


class TestShrink:
    def test_shrink_to_n2(self, ledger8):
        cfg = quick_cfg(n_range=(8,))
        result = falsify(candidate_from_expression("r"), cfg, ledger8)
        assert result.witness.dimension == 8
        shrunk = shrink_witness(result.witness, ledger8, cfg)
        assert shrunk.dimension == 2
        assert shrunk.residual == pytest.approx(math.sqrt(2) - 1, abs=1e-12)

    def test_idempotent(self, ledger8):
        cfg = quick_cfg()
        result = falsify(candidate_from_expression("r"), cfg, ledger8)
        once = shrink_witness(result.witness, ledger8, cfg)
        twice = shrink_witness(once, ledger8, cfg)
        assert once.to_json() == twice.to_json()

    def test_fixture_wrong_only_above_denominator_5(self, ledger8):
        fixture = make_wrong_above_denominator(5)
        cfg = quick_cfg(n_range=(8,), random_trials=0, optimizer_steps=0)
        result = falsify(fixture, cfg, ledger8)
        assert result.witness is not None
        shrunk = shrink_witness(result.witness, ledger8, cfg)
        assert shrunk.dimension == 5


class TestOptimizer:
    def test_trace_is_monotone(self):
        _, _, best, trace = hill_climb(
            candidate_from_expression("r^2.5"), 4, steps=60, step_scale=0.1, seed=3
        )
        assert all(b >= a for a, b in zip(trace, trace[1:]))
        assert best == trace[-1]

    def test_finds_violation_without_ledger_help(self):
        # phases 1-2 disabled; the climber alone must push the residual
        # of a non-Born candidate above threshold
        _, _, best, _ = hill_climb(
            candidate_from_expression("r"), 3, steps=100, step_scale=0.2, seed=1
        )
        assert best >= 1e-3


class TestConfigValidation:
    def test_negative_counts_rejected(self):
        with pytest.raises(ParameterError):
            FalsifierConfig(random_trials=-1)

    def test_empty_range_rejected(self):
        with pytest.raises(ParameterError):
            FalsifierConfig(n_range=())

    def test_range_beyond_ledger_rejected(self, ledger8):
        with pytest.raises(ParameterError):
            falsify(born_candidate(), quick_cfg(n_range=(16,)), ledger8)


def test_witness_json_embeds_replay_inputs(ledger8):
    result = falsify(candidate_from_expression("r"), quick_cfg(), ledger8)
    doc = result.witness.to_json()
    assert doc["candidate"] == "r"
    assert len(doc["basis"]) == doc["dimension"]
    assert len(doc["state"]) == doc["dimension"]
    assert doc["seed_chain"]
    assert doc["construction_tag"] == "LedgerCertificate"
