"""Adversarial search for axiom violations of a candidate distribution.

Three phases, cheapest and most interpretable first:

1. ledger probes — the certificate bases behind every ledger constraint
   give deterministic, targeted normalization probes (plus the P(0)/P(1)
   orthogonality probe), so any candidate that is wrong at a rational
   modulus is falsified without randomness;
2. random probes — Haar-random (state, basis) normalization residuals;
3. optimizer — derivative-free hill climbing over the unitary group,
   perturbing U by exp(eps * A) with A random skew-Hermitian, keeping
   perturbations that increase the normalization residual.

Identical (candidate, config, ledger) inputs produce identical outcomes,
witness bit patterns included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.linalg import expm

from .axioms import Axiom, CandidateDistribution, _safe_eval, check_normalization
from .derivation import ConstraintLedger, certificate_objects
from .errors import ParameterError
from .hilbert import (
    OrthonormalBasis,
    StateVector,
    haar_unitary,
    random_state,
    standard_basis,
)


class ConstructionTag(Enum):
    LEDGER_CERTIFICATE = "LedgerCertificate"
    RANDOM_BASIS = "RandomBasis"
    OPTIMIZED_BASIS = "OptimizedBasis"


@dataclass(frozen=True)
class Witness:
    """Concrete inputs on which a candidate measurably violates an axiom."""

    candidate_name: str
    axiom: Axiom
    dimension: int
    state: StateVector
    basis: OrthonormalBasis
    residual: float
    seed_chain: tuple[int, ...]
    construction_tag: ConstructionTag
    candidate: Optional[CandidateDistribution] = field(
        default=None, compare=False, repr=False
    )

    def to_json(self) -> dict:
        return {
            "candidate": self.candidate_name,
            "axiom": self.axiom.value,
            "dimension": self.dimension,
            "state": self.state.to_json(),
            "basis": self.basis.to_json(),
            "residual": self.residual,
            "seed_chain": list(self.seed_chain),
            "construction_tag": self.construction_tag.value,
        }


@dataclass(frozen=True)
class FalsifierConfig:
    n_range: tuple[int, ...] = (2, 3, 4, 5, 6, 7, 8)
    random_trials: int = 50
    optimizer_steps: int = 200
    step_scale: float = 0.1
    violation_threshold: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.random_trials < 0 or self.optimizer_steps < 0:
            raise ParameterError("trial and step counts must be >= 0")
        if not self.n_range or min(self.n_range) < 1:
            raise ParameterError("n_range must contain dimensions >= 1")


@dataclass(frozen=True)
class FalsifyResult:
    witness: Optional[Witness]
    probes: dict

    @property
    def falsified(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        return {
            "falsified": self.falsified,
            "witness": self.witness.to_json() if self.witness else None,
            "probes": self.probes,
        }


def replay_witness(w: Witness, p: Optional[CandidateDistribution] = None) -> float:
    """Re-evaluate the violated axiom on the stored inputs.

    Must reproduce the recorded residual within 1e-12.
    """
    p = p or w.candidate
    if p is None:
        raise ParameterError("witness carries no candidate; pass one explicitly")
    if w.axiom is Axiom.ORTHOGONALITY:
        gram = w.basis.matrix.conj() @ w.basis.matrix.T
        residual = 0.0
        for i in range(w.dimension):
            for j in range(w.dimension):
                value, reason = _safe_eval(p, gram[i, j])
                target = 1.0 if i == j else 0.0
                term = math.inf if reason else abs(value - target)
                residual = max(residual, term)
        return residual
    return check_normalization(p, w.basis, w.state)


def _normalization_residual(p, basis_matrix: np.ndarray, state: np.ndarray) -> float:
    total = 0.0
    for z in basis_matrix.conj() @ state:
        value, reason = _safe_eval(p, z)
        if reason is not None:
            return math.inf
        total += value
    return abs(total - 1.0)


def _ledger_phase(p, cfg, ledger) -> tuple[Optional[Witness], int]:
    probes = 0
    dims = set(cfg.n_range)
    # P(0) = 0 and P(1) = 1 first: the two fixed points every candidate
    # must hit, checked on the standard basis at the smallest dimension
    n0 = min(dims)
    basis = standard_basis(max(n0, 2))
    residual = 0.0
    for z, target in ((0.0, 0.0), (1.0, 1.0)):
        value, reason = _safe_eval(p, z)
        probes += 1
        term = math.inf if reason else abs(value - target)
        residual = max(residual, term)
    if residual >= cfg.violation_threshold:
        return (
            Witness(
                candidate_name=p.name,
                axiom=Axiom.ORTHOGONALITY,
                dimension=basis.dim,
                state=basis.vector(0),
                basis=basis,
                residual=residual,
                seed_chain=(cfg.seed, 1),
                construction_tag=ConstructionTag.LEDGER_CERTIFICATE,
            ),
            probes,
        )
    for c in ledger.constraints():
        if c.K == 0 or c.N not in dims:
            continue
        base = standard_basis(c.N)
        for theta in c.theta_samples:
            objs = certificate_objects(base, c.K, c.N, theta)
            probes += 1
            residual = _normalization_residual(
                p, objs["basis"].matrix, objs["state"].amplitudes
            )
            if residual >= cfg.violation_threshold:
                return (
                    Witness(
                        candidate_name=p.name,
                        axiom=Axiom.NORMALIZATION,
                        dimension=c.N,
                        state=objs["state"],
                        basis=objs["basis"],
                        residual=residual,
                        seed_chain=(cfg.seed, 1, c.N, c.K),
                        construction_tag=ConstructionTag.LEDGER_CERTIFICATE,
                    ),
                    probes,
                )
    return None, probes


def _random_phase(p, cfg) -> tuple[Optional[Witness], int]:
    probes = 0
    for n in sorted(set(cfg.n_range)):
        for t in range(cfg.random_trials):
            sub = int(np.random.SeedSequence([cfg.seed, 2, n, t]).generate_state(1)[0])
            basis = OrthonormalBasis(haar_unitary(n, sub).matrix)
            state = random_state(n, sub + 1)
            probes += 1
            residual = _normalization_residual(p, basis.matrix, state.amplitudes)
            if residual >= cfg.violation_threshold:
                return (
                    Witness(
                        candidate_name=p.name,
                        axiom=Axiom.NORMALIZATION,
                        dimension=n,
                        state=state,
                        basis=basis,
                        residual=residual,
                        seed_chain=(cfg.seed, 2, n, t, sub),
                        construction_tag=ConstructionTag.RANDOM_BASIS,
                    ),
                    probes,
                )
    return None, probes


def _random_skew_hermitian(n: int, rng) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a - a.conj().T) / 2.0


def hill_climb(p, n: int, steps: int, step_scale: float, seed: int):
    """Maximize the normalization residual over the unitary group.

    Returns (best_basis_matrix, best_residual, residual_trace).  The step
    scale halves after 20 consecutive rejections and the search stops
    once it drops below 1e-6; the recorded best residual is
    non-decreasing by construction.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 3, n]))
    state = random_state(n, int(rng.integers(2**63)))
    u = haar_unitary(n, int(rng.integers(2**63))).matrix
    best = _normalization_residual(p, u, state.amplitudes)
    trace = [best]
    scale = step_scale
    rejections = 0
    for _ in range(steps):
        if scale < 1e-6:
            break
        candidate_u = u @ expm(scale * _random_skew_hermitian(n, rng))
        residual = _normalization_residual(p, candidate_u, state.amplitudes)
        if residual > best:
            u, best = candidate_u, residual
            rejections = 0
        else:
            rejections += 1
            if rejections >= 20:
                scale /= 2.0
                rejections = 0
        trace.append(best)
    return u, state, best, trace


def _optimizer_phase(p, cfg) -> tuple[Optional[Witness], int, dict]:
    probes = 0
    traces = {}
    for n in sorted(set(cfg.n_range)):
        u, state, best, trace = hill_climb(
            p, n, cfg.optimizer_steps, cfg.step_scale, cfg.seed
        )
        probes += len(trace)
        traces[n] = trace
        if best >= cfg.violation_threshold:
            return (
                Witness(
                    candidate_name=p.name,
                    axiom=Axiom.NORMALIZATION,
                    dimension=n,
                    state=state,
                    basis=OrthonormalBasis(u),
                    residual=best,
                    seed_chain=(cfg.seed, 3, n),
                    construction_tag=ConstructionTag.OPTIMIZED_BASIS,
                ),
                probes,
                traces,
            )
    return None, probes, traces


def falsify(
    p: CandidateDistribution, cfg: FalsifierConfig, ledger: ConstraintLedger
) -> FalsifyResult:
    """Search for a concrete axiom violation; None witness is a valid outcome."""
    if max(cfg.n_range) > ledger.n_max:
        raise ParameterError(
            f"ledger covers N <= {ledger.n_max}, config asks for {max(cfg.n_range)}"
        )
    witness, ledger_probes = _ledger_phase(p, cfg, ledger)
    probes = {"ledger": ledger_probes, "random": 0, "optimizer": 0}
    if witness is not None:
        return FalsifyResult(_attach(witness, p), probes)
    witness, random_probes = _random_phase(p, cfg)
    probes["random"] = random_probes
    if witness is not None:
        return FalsifyResult(_attach(witness, p), probes)
    witness, opt_probes, _ = _optimizer_phase(p, cfg)
    probes["optimizer"] = opt_probes
    return FalsifyResult(_attach(witness, p) if witness else None, probes)


def _attach(w: Witness, p: CandidateDistribution) -> Witness:
    return Witness(
        candidate_name=w.candidate_name,
        axiom=w.axiom,
        dimension=w.dimension,
        state=w.state,
        basis=w.basis,
        residual=w.residual,
        seed_chain=w.seed_chain,
        construction_tag=w.construction_tag,
        candidate=p,
    )


def shrink_witness(w: Witness, ledger: ConstraintLedger, cfg: FalsifierConfig) -> Witness:
    """Smallest-dimension ledger-certificate witness for the same candidate.

    Scans ledger constraints in ascending (N, K) order and returns the
    first that violates at >= the configured threshold; falls back to the
    original witness (so the operation is idempotent) when no smaller
    deterministic witness exists.
    """
    p = w.candidate
    if p is None:
        raise ParameterError("witness carries no candidate; cannot shrink")
    if w.axiom is Axiom.ORTHOGONALITY:
        return w  # already minimal: a single basis pair
    for c in ledger.constraints():
        if c.K == 0 or c.N > w.dimension:
            continue
        base = standard_basis(c.N)
        for theta in c.theta_samples:
            objs = certificate_objects(base, c.K, c.N, theta)
            residual = _normalization_residual(
                p, objs["basis"].matrix, objs["state"].amplitudes
            )
            if residual >= cfg.violation_threshold:
                if (
                    c.N == w.dimension
                    and w.construction_tag is ConstructionTag.LEDGER_CERTIFICATE
                ):
                    return w
                return Witness(
                    candidate_name=w.candidate_name,
                    axiom=Axiom.NORMALIZATION,
                    dimension=c.N,
                    state=objs["state"],
                    basis=objs["basis"],
                    residual=residual,
                    seed_chain=(cfg.seed, 1, c.N, c.K),
                    construction_tag=ConstructionTag.LEDGER_CERTIFICATE,
                    candidate=p,
                )
    return w
