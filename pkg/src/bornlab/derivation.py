"""The constraint-ledger engine.

Derives, with exact integer arithmetic, the full family of constraints

    P(0) = 0,   P(e^{i theta}/sqrt(N)) = 1/N,   P(e^{i theta} sqrt(K/N)) = K/N

for all reduced fractions K/N with N <= n_max, attaching to each a
numerical certificate (a concrete symmetric state and partial-DFT basis
whose overlaps realize the modulus).  Asserted values are exact
:class:`fractions.Fraction` objects; only the certificates are floating
point.  The ledger is indexed in Farey order and doubles as the
deterministic probe set for the falsifier and the continuity probe.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .axioms import CandidateDistribution, _safe_eval
from .construction import (
    overlap_contract_error,
    overlap_with_symmetric,
    partial_dft_basis,
    symmetric_state,
)
from .errors import CertificateError, ParameterError
from .hilbert import (
    OrthonormalBasis,
    StateVector,
    haar_unitary,
    orthonormality_defect,
    rotate_basis,
    standard_basis,
    vector_to_pairs,
)

DEFECT_TOLERANCE = 1e-10
OVERLAP_TOLERANCE = 1e-11
DEFAULT_THETAS = (0.0, 1.0, math.pi, 5.5)


@dataclass(frozen=True)
class RationalConstraint:
    """An exact statement P(e^{i theta} sqrt(K/N)) = K/N, for all theta.

    K and N are the generating integers; asserted_value is kept as an
    exact fraction (possibly reduced).  Certificates record the float
    verification of the generating construction at each sampled theta.
    """

    K: int
    N: int
    modulus_squared: Fraction
    asserted_value: Fraction
    theta_samples: tuple[float, ...]
    certificates: tuple[dict, ...]
    proof_trace: tuple[str, ...]
    base_kind: str = "standard"
    base_seed: Optional[int] = None

    @property
    def verified(self) -> bool:
        return all(c["passed"] for c in self.certificates)

    def to_json(self, full_certificates: bool = False) -> dict:
        certs = [dict(c) for c in self.certificates]
        if full_certificates and self.K > 0:
            base = _rebuild_base(self.N, self.base_kind, self.base_seed)
            for c in certs:
                objs = certificate_objects(base, self.K, self.N, c["theta"])
                c["basis"] = objs["basis"].to_json()
                c["state"] = objs["state"].to_json()
                c["overlaps"] = vector_to_pairs(objs["overlaps"])
        entry = {
            "K": self.K,
            "N": self.N,
            "value": {
                "fraction": f"{self.asserted_value.numerator}/{self.asserted_value.denominator}",
                "decimal": repr(float(self.asserted_value)),
            },
            "theta_samples": list(self.theta_samples),
            "certificate_digest": self.certificate_digest(),
            "verified": self.verified,
            "proof_trace": list(self.proof_trace),
            "base_kind": self.base_kind,
            "base_seed": self.base_seed,
        }
        if full_certificates:
            entry["certificates"] = certs
        return entry

    def certificate_digest(self) -> str:
        summary = [
            {k: c[k] for k in ("theta", "kind", "defect", "overlap_error", "passed")}
            for c in self.certificates
        ]
        blob = json.dumps(summary, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def _base_for(n: int, rotate: bool, seed: int) -> tuple[OrthonormalBasis, str, Optional[int]]:
    if not rotate:
        return standard_basis(n), "standard", None
    sub = int(np.random.SeedSequence([seed, n]).generate_state(1)[0])
    return rotate_basis(haar_unitary(n, sub), standard_basis(n)), "haar", sub


def certificate_objects(base: OrthonormalBasis, k: int, n: int, theta: float) -> dict:
    """The concrete state, basis, and overlaps behind one certificate.

    Rebuilt on demand (certificates stored in constraints keep only the
    verification numbers, so ledgers stay small in memory).
    """
    if k < n:
        psi = symmetric_state(base, theta)
        tilde = partial_dft_basis(base, k)
        return {
            "kind": "partial_dft",
            "basis": tilde.vectors,
            "state": psi.state,
            "overlaps": overlap_with_symmetric(tilde, psi),
        }
    phase = np.exp(1j * (theta % (2.0 * math.pi)))
    state = StateVector(phase * base.matrix[0])
    return {
        "kind": "single_vector",
        "basis": base,
        "state": state,
        "overlaps": base.matrix.conj() @ state.amplitudes,
    }


def _certificates(base: OrthonormalBasis, k: int, n: int, thetas) -> tuple[dict, ...]:
    """Verification numbers for one (K, N) over a list of thetas.

    The partial-DFT basis (and its Gram defect) does not depend on theta,
    so it is built once; only the overlap contract is re-checked per theta.
    """
    certs = []
    if k < n:
        tilde = partial_dft_basis(base, k)
        defect = orthonormality_defect(tilde.vectors)
        for theta in thetas:
            psi = symmetric_state(base, theta)
            overlaps = overlap_with_symmetric(tilde, psi)
            error = overlap_contract_error(overlaps, k, n, psi.theta)
            certs.append(
                {"kind": "partial_dft", "theta": psi.theta, "defect": defect,
                 "overlap_error": error}
            )
    else:
        for theta in thetas:
            theta = float(theta) % (2.0 * math.pi)
            phase = np.exp(1j * theta)
            state = StateVector(phase * base.matrix[0])
            overlaps = base.matrix.conj() @ state.amplitudes
            expected = np.zeros(n, dtype=np.complex128)
            expected[0] = phase
            error = float(np.max(np.abs(overlaps - expected)))
            certs.append(
                {"kind": "single_vector", "theta": theta, "defect": 0.0,
                 "overlap_error": error}
            )
    for cert in certs:
        cert["passed"] = (
            cert["defect"] <= DEFECT_TOLERANCE
            and cert["overlap_error"] <= OVERLAP_TOLERANCE
        )
    return tuple(certs)


def _trace(k: int, n: int) -> tuple[str, ...]:
    if k == n:
        return (
            "normalization over a basis containing the state itself has a single term",
            f"hence P(e^(i*theta)) = 1 (K = N = {n})",
        )
    steps = [
        "unitary invariance: P depends on the overlap only",
        "orthogonality consistency: P(0) = 0",
        f"symmetric state over {n} basis vectors: P(e^(i*theta)/sqrt({n})) = 1/{n}",
    ]
    if k > 1:
        steps.append(
            f"partial-DFT basis (K={k}): 1 = P(e^(i*theta)*sqrt({k}/{n})) + {n - k}/{n}"
        )
    steps.append(f"hence P(e^(i*theta)*sqrt({k}/{n})) = {k}/{n}")
    return tuple(steps)


def _derive(
    k: int,
    n: int,
    thetas: Iterable[float],
    base: Optional[OrthonormalBasis] = None,
    base_kind: str = "standard",
    base_seed: Optional[int] = None,
) -> RationalConstraint:
    if n < 1 or k < 1 or k > n:
        raise ParameterError(f"require 1 <= K <= N, got K={k}, N={n}")
    if base is None:
        base = standard_basis(n)
    thetas = tuple(float(t) for t in thetas)
    certificates = _certificates(base, k, n, thetas)
    # exact arithmetic mirror of the certificate: the normalization sum has
    # one term at sqrt(K/N) and N-K tail terms each worth 1/N
    value = Fraction(1) - (n - k) * Fraction(1, n) if k < n else Fraction(1)
    assert value == Fraction(k, n)
    return RationalConstraint(
        K=k,
        N=n,
        modulus_squared=Fraction(k, n),
        asserted_value=value,
        theta_samples=thetas,
        certificates=certificates,
        proof_trace=_trace(k, n),
        base_kind=base_kind,
        base_seed=base_seed,
    )


def derive_p_zero() -> RationalConstraint:
    """The constraint P(0) = 0 from orthogonality consistency."""
    base = standard_basis(2)
    overlap = complex(np.vdot(base.matrix[0], base.matrix[1]))
    cert = {
        "kind": "orthogonal_pair",
        "theta": 0.0,
        "defect": orthonormality_defect(base),
        "overlap_error": abs(overlap),
        "passed": abs(overlap) <= OVERLAP_TOLERANCE,
    }
    return RationalConstraint(
        K=0,
        N=1,
        modulus_squared=Fraction(0),
        asserted_value=Fraction(0),
        theta_samples=(0.0,),
        certificates=(cert,),
        proof_trace=(
            "orthogonal states embed in a common orthonormal basis",
            "consistency on that basis forces P(0) = 0",
        ),
    )


def derive_uniform(n: int, theta: float, base: Optional[OrthonormalBasis] = None) -> RationalConstraint:
    """P(e^{i theta}/sqrt(N)) = 1/N from the symmetric state."""
    if n < 1:
        raise ParameterError(f"N must be >= 1, got {n}")
    if n == 1:
        return _derive(1, 1, [theta], base)
    return _derive(1, n, [theta], base)


def derive_rational(
    k: int, n: int, theta: float, base: Optional[OrthonormalBasis] = None
) -> RationalConstraint:
    """P(e^{i theta} sqrt(K/N)) = K/N with a verified basis certificate."""
    return _derive(k, n, [theta], base)


@dataclass(frozen=True)
class ConstraintLedger:
    """All derived constraints for reduced fractions K/N, N <= n_max."""

    n_max: int
    seed: int
    rotate_bases: bool
    theta_base: tuple[float, ...]
    entries: dict[Fraction, RationalConstraint]

    def fractions(self) -> list[Fraction]:
        return sorted(self.entries)

    def constraints(self) -> list[RationalConstraint]:
        """Constraints sorted by (N, K) of the generating construction."""
        return sorted(self.entries.values(), key=lambda c: (c.N, c.K))

    def lookup(self, fraction: Fraction) -> RationalConstraint:
        return self.entries[Fraction(fraction)]

    @property
    def verified(self) -> bool:
        return all(c.verified for c in self.entries.values())

    def to_json(self, full_certificates: bool = False) -> dict:
        return {
            "n_max": self.n_max,
            "seed": self.seed,
            "rotate_bases": self.rotate_bases,
            "theta_base": list(self.theta_base),
            "entries": [
                self.entries[f].to_json(full_certificates) for f in self.fractions()
            ],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "ConstraintLedger":
        """Rebuild a ledger from its serialized form.

        Constraints are re-derived from the stored (K, N, theta) data, then
        checked against the stored digests; any mismatch raises
        CertificateError.
        """
        entries: dict[Fraction, RationalConstraint] = {}
        for raw in payload["entries"]:
            k, n = int(raw["K"]), int(raw["N"])
            if k == 0:
                constraint = derive_p_zero()
            else:
                kind = raw.get("base_kind", "standard")
                sub = raw.get("base_seed")
                base = _rebuild_base(n, kind, sub)
                constraint = _derive(k, n, raw["theta_samples"], base, kind, sub)
            if constraint.certificate_digest() != raw["certificate_digest"]:
                raise CertificateError(
                    f"certificate digest mismatch at K={k}, N={n}"
                )
            stored = Fraction(*map(int, raw["value"]["fraction"].split("/")))
            if stored != constraint.asserted_value:
                raise CertificateError(f"asserted value mismatch at K={k}, N={n}")
            entries[constraint.modulus_squared] = constraint
        return cls(
            n_max=int(payload["n_max"]),
            seed=int(payload["seed"]),
            rotate_bases=bool(payload["rotate_bases"]),
            theta_base=tuple(payload["theta_base"]),
            entries=entries,
        )


def _rebuild_base(n: int, kind: str, sub: Optional[int]) -> OrthonormalBasis:
    if kind == "standard":
        return standard_basis(n)
    return rotate_basis(haar_unitary(n, int(sub)), standard_basis(n))


def build_ledger(
    n_max: int,
    theta_samples: Optional[Iterable[float]] = None,
    rotate_bases: bool = False,
    seed: int = 0,
) -> ConstraintLedger:
    """Derive every constraint P(e^{i theta} sqrt(K/N)) = K/N, N <= n_max.

    Each reduced fraction gets certificates at the base theta samples plus
    one seeded-random theta.  Unreduced representations (2/4, 3/6, ...)
    are cross-checked for equal asserted values via the same exact
    arithmetic; a disagreement would indicate an internal inconsistency
    and raises CertificateError.
    """
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max}")
    thetas = tuple(DEFAULT_THETAS if theta_samples is None else map(float, theta_samples))
    entries: dict[Fraction, RationalConstraint] = {Fraction(0): derive_p_zero()}
    for n in range(1, n_max + 1):
        base, kind, sub = _base_for(n, rotate_bases, seed)
        for k in range(1, n + 1):
            fraction = Fraction(k, n)
            if math.gcd(k, n) == 1:
                extra_seed = np.random.SeedSequence([seed, n, k])
                extra = float(
                    np.random.default_rng(extra_seed).uniform(0.0, 2.0 * math.pi)
                )
                constraint = _derive(k, n, thetas + (extra,), base, kind, sub)
                if not constraint.verified:
                    bad = next(c for c in constraint.certificates if not c["passed"])
                    raise CertificateError(
                        f"certificate failed at K={k}, N={n}, theta={bad['theta']!r}"
                    )
                entries[fraction] = constraint
            else:
                # duplicate fraction: same exact-arithmetic chain, no new basis
                value = Fraction(1) - (n - k) * Fraction(1, n)
                if value != entries[fraction].asserted_value:
                    raise CertificateError(
                        f"inconsistent duplicate fraction {k}/{n}: "
                        f"{value} != {entries[fraction].asserted_value}"
                    )
    return ConstraintLedger(
        n_max=n_max,
        seed=seed,
        rotate_bases=rotate_bases,
        theta_base=thetas,
        entries=entries,
    )


def compare_to_born(ledger: ConstraintLedger) -> Fraction:
    """max |asserted - modulus^2| in exact arithmetic; 0 for a sound ledger."""
    return max(
        abs(c.asserted_value - c.modulus_squared) for c in ledger.entries.values()
    )


def verify_ledger(ledger: ConstraintLedger) -> list[tuple[int, int, float]]:
    """Re-check every certificate; returns the failing (K, N, theta) triples."""
    failures = []
    for c in ledger.entries.values():
        for cert in c.certificates:
            if not cert["passed"]:
                failures.append((c.K, c.N, cert["theta"]))
    return failures


def continuity_extension_check(
    p: CandidateDistribution,
    ledger: ConstraintLedger,
    grid_size: int,
) -> dict:
    """Quantitative form of the density argument.

    max_rational_residual probes p at every ledger modulus (over the
    entry's theta samples) against the exact asserted value;
    max_grid_deviation_from_born probes p against |z|^2 on a uniform
    modulus grid on [0, 1] times the base theta samples.  A continuous
    candidate with a small rational residual on a dense ledger must have
    a small grid deviation; a discontinuous one can pass the first probe
    and fail the second.
    """
    if grid_size < 2:
        raise ParameterError(f"grid_size must be >= 2, got {grid_size}")
    max_rational = 0.0
    worst_rational = None
    for c in ledger.constraints():
        target = float(c.asserted_value)
        modulus = math.sqrt(float(c.modulus_squared))
        for theta in c.theta_samples:
            z = modulus * complex(math.cos(theta), math.sin(theta))
            value, reason = _safe_eval(p, z)
            residual = math.inf if reason is not None else abs(value - target)
            if residual > max_rational:
                max_rational = residual
                worst_rational = {"K": c.K, "N": c.N, "theta": theta}
    max_grid = 0.0
    worst_grid = None
    for modulus in np.linspace(0.0, 1.0, grid_size):
        for theta in ledger.theta_base:
            z = float(modulus) * complex(math.cos(theta), math.sin(theta))
            value, reason = _safe_eval(p, z)
            deviation = math.inf if reason is not None else abs(value - abs(z) ** 2)
            if deviation > max_grid:
                max_grid = deviation
                worst_grid = {"modulus": float(modulus), "theta": float(theta)}
    return {
        "candidate": p.name,
        "max_rational_residual": max_rational,
        "worst_rational": worst_rational,
        "max_grid_deviation_from_born": max_grid,
        "worst_grid": worst_grid,
        "grid_size": grid_size,
    }


def corrupt_entry(ledger: ConstraintLedger, fraction: Fraction, value: Fraction) -> ConstraintLedger:
    """Fault-injection helper: return a copy with one asserted value replaced."""
    entries = dict(ledger.entries)
    entries[fraction] = replace(entries[fraction], asserted_value=value)
    return replace(ledger, entries=entries)
