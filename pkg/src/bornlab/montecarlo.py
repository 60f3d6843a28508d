"""Frequentist verification of Born weights by projective-measurement
simulation.

Outcomes are drawn i.i.d. from the categorical distribution
p_i = |<v_i|psi>|^2 by inverse-CDF lookup on the cumulative vector (the
final cell absorbs float rounding slack).  Sampling is split into
fixed-size blocks of 2^16 draws; block i uses the generator seeded with
SeedSequence([seed, i]), so counts are independent of how blocks are
distributed over workers and identical inputs always give identical
counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.stats import chi2

from .errors import DimensionError, ParameterError
from .hilbert import OrthonormalBasis, StateVector

BLOCK_SIZE = 1 << 16
MAX_Z = 4.0
CHI2_PERCENTILE = 0.9999
MIN_EXPECTED_COUNT = 5.0


@dataclass(frozen=True)
class SimulationReport:
    dimension: int
    expected: tuple[Fraction, ...]
    counts: tuple[int, ...]
    n_samples: int
    chi_square: float
    degrees_of_freedom: int
    chi_square_threshold: float
    max_z_score: float
    z_scores: tuple[float, ...]
    seed: int

    @property
    def passed(self) -> bool:
        return (
            self.max_z_score <= MAX_Z and self.chi_square <= self.chi_square_threshold
        )

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "expected": [
                {"fraction": f"{f.numerator}/{f.denominator}", "decimal": repr(float(f))}
                for f in self.expected
            ],
            "counts": list(self.counts),
            "n_samples": self.n_samples,
            "chi_square": self.chi_square,
            "degrees_of_freedom": self.degrees_of_freedom,
            "chi_square_threshold": self.chi_square_threshold,
            "max_z_score": self.max_z_score,
            "z_scores": list(self.z_scores),
            "seed": self.seed,
            "passed": self.passed,
        }

    def to_csv(self) -> str:
        lines = ["cell,expected,observed,z"]
        for i, (f, c, z) in enumerate(zip(self.expected, self.counts, self.z_scores)):
            lines.append(f"{i + 1},{float(f)!r},{c},{z!r}")
        return "\n".join(lines) + "\n"


def sample_counts_from_probabilities(
    probabilities: np.ndarray, n_samples: int, seed: int
) -> np.ndarray:
    """Per-cell counts of n_samples categorical draws; deterministic per seed."""
    if n_samples < 1:
        raise ParameterError("n_samples must be >= 1")
    cdf = np.cumsum(probabilities)
    cdf[-1] = 1.0  # absorb rounding slack into the final cell
    counts = np.zeros(len(probabilities), dtype=np.int64)
    n_blocks = (n_samples + BLOCK_SIZE - 1) // BLOCK_SIZE
    for block in range(n_blocks):
        size = min(BLOCK_SIZE, n_samples - block * BLOCK_SIZE)
        rng = np.random.default_rng(np.random.SeedSequence([seed, block]))
        draws = rng.random(size)
        cells = np.searchsorted(cdf, draws, side="right")
        counts += np.bincount(cells, minlength=len(probabilities))
    return counts


def sample_outcomes(
    state: StateVector, basis: OrthonormalBasis, n_samples: int, seed: int
) -> np.ndarray:
    """Counts of projective-measurement outcomes with Born weights."""
    if state.dim != basis.dim:
        raise DimensionError(f"dimension mismatch: {state.dim} vs {basis.dim}")
    probabilities = np.abs(basis.matrix.conj() @ state.amplitudes) ** 2
    return sample_counts_from_probabilities(probabilities, n_samples, seed)


def _pool_cells(expected_counts: np.ndarray, counts: np.ndarray):
    """Merge cells with expected count < 5 (smallest first) for the chi-square."""
    exp = list(map(float, expected_counts))
    obs = list(map(int, counts))
    order = sorted(range(len(exp)), key=lambda i: exp[i])
    pooled_exp, pooled_obs = [], []
    acc_e = acc_o = 0.0
    for idx in order:
        acc_e += exp[idx]
        acc_o += obs[idx]
        if acc_e >= MIN_EXPECTED_COUNT:
            pooled_exp.append(acc_e)
            pooled_obs.append(acc_o)
            acc_e = acc_o = 0.0
    if acc_e > 0.0:
        if pooled_exp:
            pooled_exp[-1] += acc_e
            pooled_obs[-1] += acc_o
        else:
            pooled_exp.append(acc_e)
            pooled_obs.append(acc_o)
    return np.array(pooled_exp), np.array(pooled_obs, dtype=float)


def frequentist_report(
    counts: Sequence[int],
    expected: Sequence[Fraction],
    n_samples: int,
    seed: int = 0,
) -> SimulationReport:
    """Pearson chi-square and per-cell z-scores against exact expectations.

    Pass criteria: max |z| <= 4 and chi-square below its 99.99th
    percentile.  Cells with expected count < 5 are pooled before the
    chi-square; z-scores are reported per original cell.
    """
    expected = tuple(Fraction(f) for f in expected)
    counts = tuple(int(c) for c in counts)
    if len(counts) != len(expected):
        raise ParameterError("counts and expected must have equal length")
    if sum(expected) != 1:
        raise ParameterError(f"expected probabilities sum to {sum(expected)}, not 1")
    if sum(counts) != n_samples:
        raise ParameterError("counts must sum to n_samples")
    p = np.array([float(f) for f in expected])
    exp_counts = n_samples * p
    pooled_exp, pooled_obs = _pool_cells(exp_counts, np.array(counts))
    dof = max(len(pooled_exp) - 1, 0)
    if dof == 0:
        chi_square = 0.0
        threshold = 0.0
    else:
        chi_square = float(np.sum((pooled_obs - pooled_exp) ** 2 / pooled_exp))
        threshold = float(chi2.ppf(CHI2_PERCENTILE, dof))
    z_scores = []
    for c, f in zip(counts, expected):
        pf = float(f)
        if pf <= 0.0:
            z_scores.append(0.0 if c == 0 else float("inf"))
        elif pf >= 1.0:
            z_scores.append(0.0 if c == n_samples else float("inf"))
        else:
            sigma = np.sqrt(n_samples * pf * (1.0 - pf))
            z_scores.append(float(abs(c - n_samples * pf) / sigma))
    return SimulationReport(
        dimension=len(counts),
        expected=expected,
        counts=counts,
        n_samples=n_samples,
        chi_square=chi_square,
        degrees_of_freedom=dof,
        chi_square_threshold=threshold,
        max_z_score=max(z_scores) if z_scores else 0.0,
        z_scores=tuple(z_scores),
        seed=seed,
    )


def simulate_fractions(
    probabilities: Sequence[Fraction], n_samples: int, seed: int
) -> SimulationReport:
    """Simulate a state whose squared amplitudes are the given exact
    probabilities (in the standard basis) and test the frequencies."""
    fracs = tuple(Fraction(f) for f in probabilities)
    if any(f < 0 for f in fracs) or sum(fracs) != 1:
        raise ParameterError("probabilities must be non-negative and sum to 1")
    amps = np.sqrt(np.array([float(f) for f in fracs]))
    state = StateVector(amps)
    basis = OrthonormalBasis(np.eye(len(fracs), dtype=np.complex128))
    counts = sample_outcomes(state, basis, n_samples, seed)
    return frequentist_report(counts, fracs, n_samples, seed)
