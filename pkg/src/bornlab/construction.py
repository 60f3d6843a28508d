"""The two explicit constructions behind the rational constraint ledger.

Given any orthonormal basis of C^N this module builds

- the symmetric state: the equal-weight superposition
  ``e^{i theta} (1/sqrt(N)) sum_i v_i``, whose overlap with every basis
  vector has modulus 1/sqrt(N);
- the partial-DFT basis: the first K base vectors mixed by K-th roots of
  unity, the remaining N-K untouched.  Its first vector overlaps the
  symmetric state with modulus sqrt(K/N), vectors 2..K are orthogonal to
  it, and the tail keeps modulus 1/sqrt(N).

Together these pin the probability of an overlap of modulus sqrt(K/N)
to exactly K/N; the ledger in :mod:`bornlab.derivation` is built on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CertificateError, ParameterError
from .hilbert import OrthonormalBasis, StateVector, orthonormality_defect

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SymmetricState:
    """Equal-weight superposition of a full orthonormal basis, with an
    explicit global phase theta kept separate from the amplitudes."""

    base: OrthonormalBasis
    theta: float
    state: StateVector

    @property
    def dim(self) -> int:
        return self.base.dim


@dataclass(frozen=True)
class PartialDftBasis:
    """Basis whose first K vectors mix base vectors 1..K by K-th roots of
    unity; the last N-K vectors equal the base vectors exactly."""

    base: OrthonormalBasis
    K: int
    vectors: OrthonormalBasis

    @property
    def dim(self) -> int:
        return self.base.dim


def symmetric_state(base: OrthonormalBasis, theta: float) -> SymmetricState:
    """Build e^{i theta} (1/sqrt(N)) sum_i v_i over the given basis.

    theta outside [0, 2 pi) is normalized modulo 2 pi; this is documented
    behavior, not an error.
    """
    theta = float(theta) % TWO_PI
    n = base.dim
    amps = np.exp(1j * theta) / math.sqrt(n) * base.matrix.sum(axis=0)
    return SymmetricState(base=base, theta=theta, state=StateVector(amps))


def dft_block(k: int) -> np.ndarray:
    """The K x K matrix exp(-2 pi i (l-1)(j-1)/K)/sqrt(K), row index j.

    Roots of unity are evaluated as exp of the exact angle multiple, not
    by repeated multiplication, so there is no error accumulation in K.
    """
    j, l = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    return np.exp(-1j * TWO_PI * (l * j) / k) / math.sqrt(k)


def partial_dft_basis(base: OrthonormalBasis, K: int) -> PartialDftBasis:
    """Mix the first K base vectors by the DFT block, keep the rest."""
    n = base.dim
    if not 1 <= K < n:
        raise ParameterError(f"require 1 <= K < N, got K={K}, N={n}")
    rows = np.array(base.matrix)
    rows[:K] = dft_block(K) @ base.matrix[:K]
    return PartialDftBasis(base=base, K=K, vectors=OrthonormalBasis(rows))


def geometric_series_overlap(j: int, m: int, K: int) -> complex:
    """<tilde v_j | tilde v_m> by direct geometric-series summation.

    Independent cross-check of the basis construction: returns
    (1/K) sum_{l=1}^{K} exp(-2 pi i (m-j)/K)^{l-1}, which is 1 for m = j
    and 0 otherwise (up to float error).  Indices are 1-based.
    """
    if not (1 <= j <= K and 1 <= m <= K):
        raise ParameterError(f"require 1 <= j, m <= K, got j={j}, m={m}, K={K}")
    ratio = np.exp(-1j * TWO_PI * (m - j) / K)
    total = sum(ratio ** (l - 1) for l in range(1, K + 1))
    return complex(total / K)


def overlap_with_symmetric(tilde: PartialDftBasis, psi_star: SymmetricState) -> np.ndarray:
    """Overlaps <tilde v_j | psi*> for j = 1..N.

    Contract: entry 1 equals e^{i theta} sqrt(K/N), entries 2..K vanish,
    entries K+1..N equal e^{i theta}/sqrt(N).
    """
    if tilde.base is not psi_star.base and not np.array_equal(
        tilde.base.matrix, psi_star.base.matrix
    ):
        raise CertificateError("partial-DFT basis and symmetric state use different bases")
    return tilde.vectors.matrix.conj() @ psi_star.state.amplitudes


def overlap_contract_error(
    overlaps: np.ndarray, K: int, n: int, theta: float
) -> float:
    """Max deviation of computed overlaps from the three-block contract."""
    phase = np.exp(1j * (float(theta) % TWO_PI))
    expected = np.empty(n, dtype=np.complex128)
    expected[0] = phase * math.sqrt(K / n)
    expected[1:K] = 0.0
    expected[K:] = phase / math.sqrt(n)
    return float(np.max(np.abs(overlaps - expected)))


def construction_certificate(
    base: OrthonormalBasis, K: int, theta: float
) -> dict:
    """Numeric evidence that the construction obeys its contracts.

    Returns the Gram defect of the partial-DFT basis and the max error of
    the overlaps against the three-block contract, together with the
    objects themselves for embedding in reports.
    """
    psi = symmetric_state(base, theta)
    tilde = partial_dft_basis(base, K)
    overlaps = overlap_with_symmetric(tilde, psi)
    return {
        "K": K,
        "N": base.dim,
        "theta": psi.theta,
        "defect": orthonormality_defect(tilde.vectors),
        "overlap_error": overlap_contract_error(overlaps, K, base.dim, psi.theta),
        "symmetric_state": psi,
        "tilde": tilde,
        "overlaps": overlaps,
    }
