"""Finite-dimensional complex Hilbert space primitives.

States, orthonormal bases, unitaries, inner products, Haar sampling.
Conventions used throughout the package:

- the inner product is conjugate-linear in the FIRST argument
  (``inner_product(a, b) = sum_k conj(a_k) * b_k``);
- all randomness flows through ``numpy.random.default_rng`` (PCG64) with
  explicit integer seeds, so every sampled object is reproducible
  bit-for-bit;
- basis vectors are stored as the ROWS of an N x N matrix.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError

NORM_TOLERANCE = 1e-12
ORTHO_TOLERANCE = 1e-10


def _complex_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.ndim != ndim:
        raise DimensionError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionError("empty array")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("amplitudes must be finite (no NaN/Inf)")
    return arr


def complex_to_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def pairs_to_vector(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def vector_to_pairs(v: np.ndarray) -> list[list[float]]:
    return [complex_to_pair(z) for z in np.asarray(v).ravel()]


def matrix_to_pairs(m: np.ndarray) -> list[list[list[float]]]:
    return [vector_to_pairs(row) for row in np.asarray(m)]


class StateVector:
    """A unit-norm vector of complex amplitudes in dimension N."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, norm_tolerance: float = NORM_TOLERANCE):
        arr = _complex_array(amplitudes, 1)
        norm_sq = float(np.real(np.vdot(arr, arr)))
        if abs(norm_sq - 1.0) > norm_tolerance:
            raise ValueError(f"state is not normalized: <v|v> = {norm_sq!r}")
        arr.setflags(write=False)
        self.amplitudes = arr

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, StateVector) and np.array_equal(
            self.amplitudes, other.amplitudes
        )

    def __hash__(self):
        return hash(self.amplitudes.tobytes())

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim})"

    def to_json(self) -> list[list[float]]:
        return vector_to_pairs(self.amplitudes)

    @classmethod
    def from_json(cls, pairs) -> "StateVector":
        return cls(pairs_to_vector(pairs))


class OrthonormalBasis:
    """N mutually orthonormal StateVectors, stored as rows of a matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, ortho_tolerance: float = ORTHO_TOLERANCE):
        arr = _complex_array(matrix, 2)
        n, m = arr.shape
        if n != m:
            raise DimensionError(f"basis matrix must be square, got {arr.shape}")
        defect = float(np.max(np.abs(arr.conj() @ arr.T - np.eye(n))))
        if defect > ortho_tolerance:
            raise ValueError(f"basis is not orthonormal: Gram defect {defect:.3e}")
        arr.setflags(write=False)
        self.matrix = arr

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def vector(self, i: int) -> StateVector:
        """Return the i-th basis vector (0-based)."""
        return StateVector(self.matrix[i])

    @property
    def vectors(self) -> list[StateVector]:
        return [self.vector(i) for i in range(self.dim)]

    def __eq__(self, other) -> bool:
        return isinstance(other, OrthonormalBasis) and np.array_equal(
            self.matrix, other.matrix
        )

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self) -> str:
        return f"OrthonormalBasis(dim={self.dim})"

    def to_json(self) -> list:
        return matrix_to_pairs(self.matrix)

    @classmethod
    def from_json(cls, pairs) -> "OrthonormalBasis":
        return cls(pairs_to_vector(pairs))


class UnitaryMatrix:
    """An N x N unitary, validated at construction."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, ortho_tolerance: float = ORTHO_TOLERANCE):
        arr = _complex_array(matrix, 2)
        n, m = arr.shape
        if n != m:
            raise DimensionError(f"unitary must be square, got {arr.shape}")
        defect = float(np.max(np.abs(arr.conj().T @ arr - np.eye(n))))
        if defect > ortho_tolerance:
            raise ValueError(f"matrix is not unitary: defect {defect:.3e}")
        arr.setflags(write=False)
        self.matrix = arr

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"UnitaryMatrix(dim={self.dim})"

    def to_json(self) -> list:
        return matrix_to_pairs(self.matrix)

    @classmethod
    def from_json(cls, pairs) -> "UnitaryMatrix":
        return cls(pairs_to_vector(pairs))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def haar_unitary(n: int, seed: int) -> UnitaryMatrix:
    """Draw a Haar-uniform unitary, deterministically for a fixed seed.

    QR-factorizes a matrix of iid standard complex Gaussians and fixes
    the phases of diag(R) to make the decomposition unique, which makes
    the Q factor exactly Haar-distributed.
    """
    if n < 1:
        raise DimensionError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return UnitaryMatrix(q)


def apply_unitary(u: UnitaryMatrix, v: StateVector) -> StateVector:
    """Return U|v>."""
    if u.dim != v.dim:
        raise DimensionError(f"dimension mismatch: {u.dim} vs {v.dim}")
    return StateVector(u.matrix @ v.amplitudes)


def rotate_basis(u: UnitaryMatrix, basis: OrthonormalBasis) -> OrthonormalBasis:
    """Apply U to every basis vector."""
    if u.dim != basis.dim:
        raise DimensionError(f"dimension mismatch: {u.dim} vs {basis.dim}")
    return OrthonormalBasis(basis.matrix @ u.matrix.T)


def orthonormality_defect(candidate) -> float:
    """max_ij |<v_i|v_j> - delta_ij| for a square collection of vectors.

    Diagnostic: accepts an OrthonormalBasis, a list of StateVectors, or a
    raw matrix with vectors as rows, orthonormal or not.
    """
    if isinstance(candidate, OrthonormalBasis):
        m = candidate.matrix
    elif isinstance(candidate, (list, tuple)):
        m = np.vstack([v.amplitudes if isinstance(v, StateVector) else v for v in candidate])
    else:
        m = np.asarray(candidate, dtype=np.complex128)
    n, k = m.shape
    if n != k:
        raise DimensionError(f"need N vectors of dimension N, got {n} of dim {k}")
    return float(np.max(np.abs(m.conj() @ m.T - np.eye(n))))


def random_state(n: int, seed: int) -> StateVector:
    """Haar-uniform state on the unit sphere of C^n, deterministic per seed."""
    if n < 1:
        raise DimensionError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return StateVector(z / np.linalg.norm(z))


def standard_basis(n: int) -> OrthonormalBasis:
    """The computational basis e_1 .. e_n."""
    if n < 1:
        raise DimensionError("n must be >= 1")
    return OrthonormalBasis(np.eye(n, dtype=np.complex128))
