"""Executable axioms for candidate transition-probability distributions.

A candidate is a real-valued function of a single complex overlap z with
|z| <= 1.  Taking only the overlap makes unitary invariance and
N-independence structural; the checks here return residuals, never
booleans, and pass/fail is applied at report time against configurable
tolerances.  Candidate evaluation failures (non-finite or non-real
output, EvalError) are folded into the residual as +inf rather than
aborting a sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np

from . import dsl
from .construction import overlap_with_symmetric, partial_dft_basis, symmetric_state
from .errors import DimensionError, DomainError, EvalError
from .hilbert import (
    OrthonormalBasis,
    StateVector,
    complex_to_pair,
    haar_unitary,
    inner_product,
    random_state,
    standard_basis,
)

DOMAIN_SLACK = 1e-9


class Axiom(Enum):
    WELL_DEFINED = "well_defined"
    NORMALIZATION = "normalization"
    ORTHOGONALITY = "orthogonality"
    UNITARY_INVARIANCE = "unitary_invariance"
    N_INDEPENDENCE = "n_independence"


@dataclass(frozen=True)
class CandidateDistribution:
    """A named real-valued function of the overlap z, |z| <= 1 + 1e-9."""

    name: str
    fn: Callable[[complex], float] = field(compare=False)

    def __call__(self, z: complex) -> float:
        z = complex(z)
        if abs(z) > 1.0 + DOMAIN_SLACK:
            raise DomainError(f"|z| = {abs(z)!r} is outside the closed unit disk")
        return float(self.fn(z))


def born_candidate() -> CandidateDistribution:
    return CandidateDistribution("r^2", lambda z: abs(z) ** 2)


def candidate_from_expression(source: str, name: Optional[str] = None) -> CandidateDistribution:
    """Compile a DSL expression into a candidate distribution."""
    tree = dsl.parse_candidate(source)
    return CandidateDistribution(name or source, lambda z: dsl.eval_expr(tree, z))


def _safe_eval(p: CandidateDistribution, z: complex):
    """Evaluate p(z); returns (value, None) or (inf, reason) on failure."""
    try:
        value = p(z)
    except EvalError as exc:
        return math.inf, f"evaluation error: {exc}"
    except (TypeError, ValueError) as exc:
        return math.inf, f"non-real output ({exc})"
    if not math.isfinite(value):
        return math.inf, f"non-finite output {value!r}"
    return float(value), None


@dataclass(frozen=True)
class AxiomReport:
    axiom: Axiom
    max_residual: float
    worst_case: dict
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom.value,
            "max_residual": self.max_residual,
            "worst_case": self.worst_case,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def check_well_defined(
    p: CandidateDistribution,
    sample_overlaps: Iterable[complex],
    tolerance: float = 1e-9,
) -> AxiomReport:
    """Residual = max distance of p(z) from [0, 1] over the samples."""
    worst = {"candidate": p.name}
    max_residual = 0.0
    for z in sample_overlaps:
        value, reason = _safe_eval(p, z)
        if reason is not None:
            residual = math.inf
        else:
            residual = max(0.0, value - 1.0, -value)
        if residual > max_residual:
            max_residual = residual
            worst = {
                "candidate": p.name,
                "z": complex_to_pair(z),
                "value": None if reason else value,
                "reason": reason,
            }
    return AxiomReport(Axiom.WELL_DEFINED, max_residual, worst, tolerance)


def check_normalization(
    p: CandidateDistribution, basis: OrthonormalBasis, state: StateVector
) -> float:
    """|sum_i p(<v_i|psi>) - 1| for one (basis, state) pair."""
    if basis.dim != state.dim:
        raise DimensionError(f"dimension mismatch: {basis.dim} vs {state.dim}")
    overlaps = basis.matrix.conj() @ state.amplitudes
    total = 0.0
    for z in overlaps:
        value, reason = _safe_eval(p, z)
        if reason is not None:
            return math.inf
        total += value
    return abs(total - 1.0)


def check_orthogonality_axiom(
    p: CandidateDistribution, basis: OrthonormalBasis, tolerance: float = 1e-9
) -> AxiomReport:
    """Residual = max_ij |p(<v_i|v_j>) - delta_ij|.

    In particular enforces p(0) = 0 and p(1) = 1.
    """
    gram = basis.matrix.conj() @ basis.matrix.T
    max_residual = 0.0
    worst = {"candidate": p.name}
    n = basis.dim
    for i in range(n):
        for j in range(n):
            value, reason = _safe_eval(p, gram[i, j])
            target = 1.0 if i == j else 0.0
            residual = math.inf if reason is not None else abs(value - target)
            if residual > max_residual:
                max_residual = residual
                worst = {
                    "candidate": p.name,
                    "i": i + 1,
                    "j": j + 1,
                    "overlap": complex_to_pair(gram[i, j]),
                    "reason": reason,
                }
    return AxiomReport(Axiom.ORTHOGONALITY, max_residual, worst, tolerance)


def pair_form(p: CandidateDistribution) -> Callable[[StateVector, StateVector], float]:
    """Lift an overlap-only candidate to a function of a state pair."""
    return lambda v, w: p(inner_product(v, w))


def check_unitary_invariance(
    p_pairform: Callable[[StateVector, StateVector], float],
    trials: int,
    seed: int,
    dim: int = 4,
    tolerance: float = 1e-12,
    name: str = "",
) -> AxiomReport:
    """Residual = max over sampled (v, w, U) of |P(Uv, Uw) - P(v, w)|.

    For overlap-only candidates this is tiny by construction; pair-form
    candidates that peek at amplitudes directly are caught here.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    max_residual = 0.0
    worst = {"candidate": name}
    for t in range(trials):
        sub = int(np.random.SeedSequence([seed, t]).generate_state(1)[0])
        v = random_state(dim, sub)
        w = random_state(dim, sub + 1)
        u = haar_unitary(dim, sub + 2)
        try:
            before = p_pairform(v, w)
            after = p_pairform(
                StateVector(u.matrix @ v.amplitudes),
                StateVector(u.matrix @ w.amplitudes),
            )
            residual = abs(after - before)
        except EvalError:
            residual = math.inf
        if residual > max_residual:
            max_residual = residual
            worst = {"candidate": name, "trial": t, "seed": sub, "dim": dim}
    return AxiomReport(Axiom.UNITARY_INVARIANCE, max_residual, worst, tolerance)


def check_n_independence(
    p: CandidateDistribution,
    dims: Iterable[int],
    seed: int,
    tolerance: float = 1e-9,
) -> AxiomReport:
    """Compare p at equal overlaps produced in different dimensions.

    For every modulus sqrt(K/N) achievable in more than one of the given
    dimensions, the overlap is computed through each dimension's own
    symmetric-state / partial-DFT pipeline and p is evaluated on each.
    The residual is the spread of those values; overlap-only candidates
    give (numerically) zero because the candidate accepts no N parameter.
    """
    dims = sorted(set(int(d) for d in dims))
    if not dims:
        raise ValueError("dims must be nonempty")
    rng = np.random.default_rng(seed)
    theta = float(rng.uniform(0.0, 2.0 * math.pi))
    by_fraction: dict[Fraction, list[tuple[int, float]]] = {}
    for n in dims:
        base = standard_basis(n)
        for k in range(1, n + 1):
            if k < n:
                psi = symmetric_state(base, theta)
                tilde = partial_dft_basis(base, k)
                z = complex(overlap_with_symmetric(tilde, psi)[0])
            else:
                z = complex(np.exp(1j * theta))
            value, reason = _safe_eval(p, z)
            if reason is not None:
                value = math.inf
            by_fraction.setdefault(Fraction(k, n), []).append((n, value))
    max_residual = 0.0
    worst = {"candidate": p.name, "overlap_only": True}
    for frac, entries in by_fraction.items():
        if len(entries) < 2:
            continue
        values = [v for _, v in entries]
        spread = max(values) - min(values)
        if not math.isfinite(spread):
            spread = math.inf
        if spread > max_residual:
            max_residual = spread
            worst = {
                "candidate": p.name,
                "overlap_only": True,
                "fraction": f"{frac.numerator}/{frac.denominator}",
                "dims": [n for n, _ in entries],
                "theta": theta,
            }
    return AxiomReport(Axiom.N_INDEPENDENCE, max_residual, worst, tolerance)


def normalization_report(
    p: CandidateDistribution,
    dims: Iterable[int],
    trials: int,
    seed: int,
    tolerance: float = 1e-9,
) -> AxiomReport:
    """Worst normalization residual over Haar-random (basis, state) probes."""
    max_residual = 0.0
    worst = {"candidate": p.name}
    for n in sorted(set(dims)):
        for t in range(trials):
            sub = int(np.random.SeedSequence([seed, n, t]).generate_state(1)[0])
            basis = OrthonormalBasis(haar_unitary(n, sub).matrix)
            state = random_state(n, sub + 1)
            residual = check_normalization(p, basis, state)
            if residual > max_residual:
                max_residual = residual
                worst = {
                    "candidate": p.name,
                    "dim": n,
                    "trial": t,
                    "seed": sub,
                    "basis": basis.to_json(),
                    "state": state.to_json(),
                }
    return AxiomReport(Axiom.NORMALIZATION, max_residual, worst, tolerance)


def run_axiom_suite(
    p: CandidateDistribution,
    dims: Iterable[int],
    trials: int,
    seed: int,
    tolerance: float = 1e-9,
) -> list[AxiomReport]:
    """All five axiom checks; returns one report per axiom."""
    dims = sorted(set(dims))
    rng = np.random.default_rng(seed)
    sample_overlaps = []
    for _ in range(trials):
        radius = math.sqrt(rng.uniform())
        angle = rng.uniform(0.0, 2.0 * math.pi)
        sample_overlaps.append(radius * complex(math.cos(angle), math.sin(angle)))
    reports = [check_well_defined(p, sample_overlaps, tolerance)]
    reports.append(normalization_report(p, dims, trials, seed, tolerance))
    ortho_worst = None
    for n in dims:
        sub = int(np.random.SeedSequence([seed, 3, n]).generate_state(1)[0])
        basis = OrthonormalBasis(haar_unitary(n, sub).matrix)
        report = check_orthogonality_axiom(p, basis, tolerance)
        if ortho_worst is None or report.max_residual > ortho_worst.max_residual:
            ortho_worst = report
    reports.append(ortho_worst)
    reports.append(
        check_unitary_invariance(
            pair_form(p), trials, seed, dim=max(dims), tolerance=tolerance, name=p.name
        )
    )
    reports.append(check_n_independence(p, dims, seed, tolerance))
    return reports
