"""Core matrix types and shared numerics for admixture factorizations.

The factorization under study is P = F Q, where F (loci x populations) holds
ancestral allele frequencies in [0, 1] and Q (populations x individuals) holds
admixture proportions with unit column sums. Entries of the product stay in
[0, 1], and every downstream module consumes the wrapper types defined here.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field

import numpy as np

__all__ = [
    "DimensionMismatch",
    "Tolerance",
    "DEFAULT_TOL",
    "FrequencyMatrix",
    "AdmixtureMatrix",
    "ExpectedFreqMatrix",
    "FactorPair",
    "ones_vector",
    "basis_vector",
    "max_abs",
    "max_abs_diff",
    "multiply",
    "numeric_rank",
    "null_space_vector",
]


class DimensionMismatch(ValueError):
    """Shapes of the operands do not line up."""


@dataclass(frozen=True)
class Tolerance:
    """Numerical comparison thresholds used across the package.

    eq_tol governs entrywise equality (including the =0 / =1 tests behind
    anchor detection); rank_tol scales the singular-value cutoff in
    numeric_rank. Both must be positive.
    """

    eq_tol: float = 1e-8
    rank_tol: float = 1e-9

    def __post_init__(self):
        if not (self.eq_tol > 0 and self.rank_tol > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_TOL = Tolerance()


def ones_vector(n: int) -> np.ndarray:
    return np.ones(n)


def basis_vector(i: int, n: int) -> np.ndarray:
    """Standard basis vector e_i (0-based) of length n."""
    if not 0 <= i < n:
        raise IndexError(f"basis index {i} out of range for length {n}")
    v = np.zeros(n)
    v[i] = 1.0
    return v


def max_abs(a) -> float:
    """Entrywise infinity norm, max |a_ij|; 0.0 for empty input."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a)))


def max_abs_diff(a, b) -> float:
    return max_abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))


def _as_2d_float(values, what: str) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{what} must be 2-D, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"{what} must have at least one row and column")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} has non-finite entries")
    return arr


def _check_unit_box(arr: np.ndarray, what: str, slack: float) -> np.ndarray:
    # entries may stray from [0,1] by at most slack; stored values are clipped
    if arr.min() < -slack or arr.max() > 1.0 + slack:
        raise ValueError(
            f"{what} entries must lie in [0, 1] (within {slack:g}); "
            f"found range [{arr.min():g}, {arr.max():g}]"
        )
    return np.clip(arr, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class FrequencyMatrix:
    """Loci x populations matrix of allele frequencies, entries in [0, 1]."""

    values: np.ndarray
    tol: InitVar[Tolerance | None] = None

    def __post_init__(self, tol):
        tol = tol or DEFAULT_TOL
        arr = _as_2d_float(self.values, "frequency matrix")
        arr = _check_unit_box(arr, "frequency matrix", tol.eq_tol)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n_loci(self) -> int:
        return self.values.shape[0]

    @property
    def n_pops(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class AdmixtureMatrix:
    """Populations x individuals matrix; nonnegative with unit column sums."""

    values: np.ndarray
    tol: InitVar[Tolerance | None] = None

    def __post_init__(self, tol):
        tol = tol or DEFAULT_TOL
        arr = _as_2d_float(self.values, "admixture matrix")
        arr = _check_unit_box(arr, "admixture matrix", tol.eq_tol)
        sums = arr.sum(axis=0)
        bad = np.abs(sums - 1.0) > tol.eq_tol
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ValueError(
                f"admixture matrix column {i} sums to {sums[i]:.12g}, expected 1"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n_pops(self) -> int:
        return self.values.shape[0]

    @property
    def n_individuals(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class ExpectedFreqMatrix:
    """Loci x individuals matrix of expected allele frequencies in [0, 1]."""

    values: np.ndarray
    tol: InitVar[Tolerance | None] = None

    def __post_init__(self, tol):
        tol = tol or DEFAULT_TOL
        arr = _as_2d_float(self.values, "expected frequency matrix")
        arr = _check_unit_box(arr, "expected frequency matrix", tol.eq_tol)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n_loci(self) -> int:
        return self.values.shape[0]

    @property
    def n_individuals(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class FactorPair:
    """An (F, Q) pair with a shared population dimension."""

    F: FrequencyMatrix
    Q: AdmixtureMatrix

    def __post_init__(self):
        if self.F.n_pops != self.Q.n_pops:
            raise DimensionMismatch(
                f"F has {self.F.n_pops} populations but Q has {self.Q.n_pops}"
            )

    @property
    def n_pops(self) -> int:
        return self.F.n_pops

    @property
    def n_loci(self) -> int:
        return self.F.n_loci

    @property
    def n_individuals(self) -> int:
        return self.Q.n_individuals

    def product(self, tol: Tolerance = DEFAULT_TOL) -> ExpectedFreqMatrix:
        return multiply(self.F, self.Q, tol)


def multiply(
    F: FrequencyMatrix, Q: AdmixtureMatrix, tol: Tolerance = DEFAULT_TOL
) -> ExpectedFreqMatrix:
    """Expected frequency matrix F @ Q.

    Each product column is a convex combination of F's columns, so entries
    land in [0, 1] up to roundoff; they are asserted within eq_tol of that
    box and clipped into it.
    """
    if F.n_pops != Q.n_pops:
        raise DimensionMismatch(
            f"inner dimensions differ: F is {F.n_loci}x{F.n_pops}, "
            f"Q is {Q.n_pops}x{Q.n_individuals}"
        )
    return ExpectedFreqMatrix(F.values @ Q.values, tol)


def numeric_rank(a, tol: Tolerance = DEFAULT_TOL) -> int:
    """Rank of a 2-D array: singular values above rank_tol * max(m, n) * max|entry|."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2:
        raise DimensionMismatch("numeric_rank expects a 2-D array")
    if arr.size == 0:
        return 0
    cutoff = tol.rank_tol * max(arr.shape) * max_abs(arr)
    s = np.linalg.svd(arr, compute_uv=False)
    return int(np.sum(s > cutoff))


def null_space_vector(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray | None:
    """Unit-norm left null vector v with v @ a = 0, or None at full row rank.

    The returned direction is the left singular vector for the smallest
    singular value, sign-fixed so its first nonzero component is positive.
    """
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2:
        raise DimensionMismatch("null_space_vector expects a 2-D array")
    if numeric_rank(arr, tol) >= arr.shape[0]:
        return None
    u, _, _ = np.linalg.svd(arr, full_matrices=True)
    v = u[:, -1]
    nz = np.nonzero(np.abs(v) > 1e-12)[0]
    if nz.size and v[nz[0]] < 0:
        v = -v
    return v
