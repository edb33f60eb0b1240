"""Recover factor pairs from an expected frequency matrix alone.

Each identifiable regime has a constructive inverse:

* anchor-on-Q: the extreme points of the convex hull of P's columns are
  exactly F's columns, and each column of P decomposes uniquely over them;
* anchor-on-F: the extreme rays of the cone spanned by P's rows are Q's
  rows up to positive scaling, fixed by forcing unit column sums;
* unadmixed: F's columns are the distinct columns of P and Q assigns each
  individual to its matching column.

All three validate their output (class membership and reconstruction
residual) before returning, so success certifies that P belongs to the
regime's image.
"""

from __future__ import annotations

import numpy as np

from .conditions import classify
from .convex import convex_decompose, has_unique_decompositions, minimal_generating_columns
from .cones import (
    NotACone,
    conic_decompose,
    has_unique_conic_decompositions,
    minimal_conic_generating_rows,
)
from .matrices import (
    DEFAULT_TOL,
    AdmixtureMatrix,
    ExpectedFreqMatrix,
    FactorPair,
    FrequencyMatrix,
    Tolerance,
    max_abs,
)

__all__ = [
    "RecoveryError",
    "DecompositionInfeasible",
    "NonUniqueDecomposition",
    "ScalingInfeasible",
    "AmbiguousAssignment",
    "RecoveredFactorization",
    "recover_anchor_Q",
    "recover_anchor_F",
    "recover_unadmixed",
]


class RecoveryError(Exception):
    """The input does not admit a factorization in the requested regime."""


class DecompositionInfeasible(RecoveryError):
    """Some column/row of the input cannot be decomposed over the recovered factors."""


class NonUniqueDecomposition(RecoveryError):
    """The recovered generating set fails the independence requirement."""


class ScalingInfeasible(RecoveryError):
    """No positive ray scaling produces unit column sums."""


class AmbiguousAssignment(RecoveryError):
    """An input column matches several recovered columns (distinctness violated)."""


class RecoveredFactorization:
    """Result of a recovery: factors, population count, fit, and warnings."""

    def __init__(
        self,
        F: FrequencyMatrix,
        Q: AdmixtureMatrix,
        regime: str,
        residual: float,
        warnings: list[str] | None = None,
    ):
        self.F = F
        self.Q = Q
        self.regime = regime
        self.residual = residual
        self.warnings = list(warnings or [])

    @property
    def n_pops(self) -> int:
        return self.F.n_pops

    def pair(self) -> FactorPair:
        return FactorPair(self.F, self.Q)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "K": self.n_pops,
            "residual": self.residual,
            "warnings": list(self.warnings),
        }


def _near_duplicate_warnings(vectors: list[np.ndarray], kind: str, tol: Tolerance) -> list[str]:
    # pairs separated by more than eq_tol but less than 10x eq_tol are kept
    # distinct, yet the margin is thin enough to flag
    out = []
    for a in range(len(vectors)):
        for b in range(a + 1, len(vectors)):
            gap = max_abs(vectors[a] - vectors[b])
            if tol.eq_tol < gap <= 10 * tol.eq_tol:
                out.append(
                    f"recovered {kind} {a} and {b} are {gap:.3g} apart, "
                    f"within 10x eq_tol of merging"
                )
    return out


def _finalize(
    pi: ExpectedFreqMatrix,
    f_vals: np.ndarray,
    q_vals: np.ndarray,
    regime: str,
    required: dict[str, bool],
    tol: Tolerance,
    warnings: list[str],
) -> RecoveredFactorization:
    wide = Tolerance(eq_tol=10 * tol.eq_tol, rank_tol=tol.rank_tol)
    F = FrequencyMatrix(f_vals, wide)
    Q = AdmixtureMatrix(q_vals, wide)
    residual = max_abs(F.values @ Q.values - pi.values)
    if residual > 10 * tol.eq_tol:
        raise DecompositionInfeasible(
            f"reconstruction residual {residual:.3g} exceeds 10x eq_tol"
        )
    report = classify(F, Q, tol)
    for flag, expected in required.items():
        if getattr(report, flag) is not expected:
            raise RecoveryError(
                f"recovered pair fails {flag} validation for regime {regime}"
            )
    return RecoveredFactorization(F, Q, regime, residual, warnings)


def recover_anchor_Q(
    pi: ExpectedFreqMatrix, tol: Tolerance = DEFAULT_TOL
) -> RecoveredFactorization:
    """Recover (F, Q) assuming anchor individuals and independent F columns.

    F's columns are found as the minimal generating subset of P's columns in
    first-occurrence order; every column of P is then decomposed over them.
    Raises NonUniqueDecomposition when the extreme columns fail independence
    and DecompositionInfeasible when a column will not decompose.
    """
    p = pi.values
    kept = minimal_generating_columns(p, tol)
    f_vals = p[:, kept]
    k_pops = len(kept)
    if not has_unique_decompositions(f_vals, tol):
        raise NonUniqueDecomposition(
            f"{k_pops} extreme columns are affinely dependent; "
            "decompositions over them are not unique"
        )
    n = p.shape[1]
    q_vals = np.empty((k_pops, n))
    for i in range(n):
        w = convex_decompose(p[:, i], f_vals, tol)
        if w is None:
            raise DecompositionInfeasible(
                f"column {i} is not a convex combination of the extreme columns"
            )
        q_vals[:, i] = w
    warnings = _near_duplicate_warnings([f_vals[:, k] for k in range(k_pops)], "column", tol)
    return _finalize(
        pi, f_vals, q_vals, "anchorQ",
        {"anchor_Q": True, "indep_F": True, "member_anchor_q_model": True},
        tol, warnings,
    )


def recover_anchor_F(
    pi: ExpectedFreqMatrix, tol: Tolerance = DEFAULT_TOL
) -> RecoveredFactorization:
    """Recover (F, Q) assuming diagnostic loci and independent Q rows.

    The extreme rays of the cone of P's rows give Q's rows up to scaling;
    the scaling is pinned by solving for unit column sums, and F's rows are
    the conic weights of P's rows over the rescaled Q.
    """
    p = pi.values
    nonzero = [s for s in range(p.shape[0]) if max_abs(p[s]) > tol.eq_tol]
    if not nonzero:
        raise DecompositionInfeasible("input is numerically zero; no rays to recover")
    try:
        kept_local = minimal_conic_generating_rows(p[nonzero], tol)
    except NotACone as exc:  # nonnegative rows should always form a cone
        raise DecompositionInfeasible(str(exc)) from exc
    kept = [nonzero[j] for j in kept_local]
    rays = p[kept]
    k_pops = len(kept)
    if not has_unique_conic_decompositions(rays, tol):
        raise NonUniqueDecomposition(
            f"{k_pops} extreme rays are linearly dependent; "
            "decompositions over them are not unique"
        )
    # scaling eps with eps @ rays = all-ones makes the columns sum to 1
    eps, *_ = np.linalg.lstsq(rays.T, np.ones(p.shape[1]), rcond=None)
    if max_abs(eps @ rays - 1.0) > tol.eq_tol:
        raise ScalingInfeasible(
            "no ray scaling gives unit column sums; input is outside the regime"
        )
    if eps.min() <= tol.eq_tol:
        raise ScalingInfeasible(
            f"column-sum scaling has a nonpositive weight {eps.min():.3g}"
        )
    q_vals = eps[:, None] * rays
    m = p.shape[0]
    f_vals = np.empty((m, k_pops))
    for s in range(m):
        w = conic_decompose(p[s], q_vals, tol)
        if w is None:
            raise DecompositionInfeasible(
                f"row {s} is not a nonnegative combination of the recovered rows"
            )
        f_vals[s] = w
    warnings = _near_duplicate_warnings([rays[k] for k in range(k_pops)], "ray", tol)
    return _finalize(
        pi, f_vals, q_vals, "anchorF",
        {"anchor_F": True, "indep_Q": True, "member_anchor_f_model": True},
        tol, warnings,
    )


def recover_unadmixed(
    pi: ExpectedFreqMatrix, tol: Tolerance = DEFAULT_TOL
) -> RecoveredFactorization:
    """Recover (F, Q) assuming every individual is unadmixed.

    F's columns are the distinct columns of P in first-occurrence order; each
    individual is assigned the unique matching column. A column matching two
    representatives means the distinctness margin collapsed, reported as
    AmbiguousAssignment.
    """
    p = pi.values
    n = p.shape[1]
    reps: list[int] = []
    for i in range(n):
        if all(max_abs(p[:, i] - p[:, r]) > tol.eq_tol for r in reps):
            reps.append(i)
    f_vals = p[:, reps]
    k_pops = len(reps)
    q_vals = np.zeros((k_pops, n))
    for i in range(n):
        matches = [
            k for k in range(k_pops) if max_abs(p[:, i] - f_vals[:, k]) <= tol.eq_tol
        ]
        if len(matches) > 1:
            raise AmbiguousAssignment(
                f"column {i} matches recovered columns {matches}; "
                "input columns are not distinct at eq_tol"
            )
        if not matches:
            raise DecompositionInfeasible(
                f"column {i} matches no recovered column"
            )
        q_vals[matches[0], i] = 1.0
    warnings = _near_duplicate_warnings([f_vals[:, k] for k in range(k_pops)], "column", tol)
    return _finalize(
        pi, f_vals, q_vals, "unadmixed",
        {"distinct_cols_F": True, "unadmixed_Q": True, "member_unadmixed_model": True},
        tol, warnings,
    )
