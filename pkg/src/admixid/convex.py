"""Convex decompositions over finite generating sets of column vectors.

A convex decomposition of a target v over generator columns g_1..g_m is a
nonnegative weight vector with unit sum reproducing v. Decompositions over a
fixed generator set are unique exactly when the pairwise differences
g_1 - g_m, ..., g_{m-1} - g_m are linearly independent; when they are not,
every strictly positive ("open") decomposition can be shifted along a null
direction into a second valid one. The greedy column sweep below reduces a
finite set to its extreme points, the unique minimal generating subset.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import lsq_linear, nnls

from .matrices import DEFAULT_TOL, DimensionMismatch, Tolerance, max_abs, numeric_rank

__all__ = [
    "UniqueDecomposition",
    "NotOpenCombination",
    "nonneg_lstsq",
    "convex_decompose",
    "has_unique_decompositions",
    "alternative_decomposition",
    "null_shift_direction",
    "shift_to_boundary",
    "minimal_generating_columns",
    "is_extreme_point",
]


class UniqueDecomposition(Exception):
    """No second decomposition exists: the generators force uniqueness."""


class NotOpenCombination(ValueError):
    """The supplied decomposition is not strictly positive."""


def _columns(generators) -> np.ndarray:
    g = np.asarray(generators, dtype=float)
    if g.ndim != 2:
        raise ValueError("generators must be a 2-D array with one column per generator")
    return g


def nonneg_lstsq(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Nonnegative least squares solution of a @ x ~ b.

    scipy.optimize.nnls (the fast path) can stop on a wrong active set for
    some well-conditioned inputs; any answer that leaves a visible residual
    is redone with the exact BVLS solver and the better of the two is kept.
    """
    x, _ = nnls(a, b)
    resid = max_abs(a @ x - b)
    if resid > 1e-12 and a.shape[1] > 0:
        redo = lsq_linear(a, b, bounds=(0.0, np.inf), method="bvls")
        if max_abs(a @ redo.x - b) < resid:
            x = np.maximum(redo.x, 0.0)
    return x


def convex_decompose(
    target, generators, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray | None:
    """Weights of target as a convex combination of the generator columns.

    Solves nonnegative least squares on the system augmented with a unit-sum
    row, then accepts only if the reconstruction and the weight sum match
    within eq_tol. Returns None when the target is not in the convex hull.
    """
    g = _columns(generators)
    v = np.asarray(target, dtype=float).ravel()
    if v.shape[0] != g.shape[0]:
        raise DimensionMismatch(
            f"target has dimension {v.shape[0]} but generators have {g.shape[0]}"
        )
    m = g.shape[1]
    a = np.vstack([g, np.ones((1, m))])
    b = np.concatenate([v, [1.0]])
    w = nonneg_lstsq(a, b)
    if max_abs(g @ w - v) > tol.eq_tol or abs(w.sum() - 1.0) > tol.eq_tol:
        return None
    return w


def has_unique_decompositions(generators, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff every point of the hull has exactly one convex decomposition.

    Criterion: the m-1 differences against the last generator have full rank.
    A single generator is vacuously unique.
    """
    g = _columns(generators)
    m = g.shape[1]
    if m == 1:
        return True
    diffs = g[:, :-1] - g[:, -1:]
    return numeric_rank(diffs, tol) == m - 1


def alternative_decomposition(
    target, generators, known, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """A second convex decomposition of target, distinct from a known open one.

    Requires the known weights to be strictly positive (above eq_tol) and the
    generators to admit multiple decompositions. The construction takes a
    null direction d of the generator differences with zero weight sum,
    scales it to unit max, and moves the known weights by the largest step
    that keeps them nonnegative; the step is at least min(known), so the
    output differs from the input by more than eq_tol.
    """
    g = _columns(generators)
    v = np.asarray(target, dtype=float).ravel()
    w = np.asarray(known, dtype=float).ravel()
    m = g.shape[1]
    if w.shape[0] != m:
        raise ValueError("known weights length does not match generator count")
    if has_unique_decompositions(g, tol):
        raise UniqueDecomposition(
            "generator differences have full rank; decompositions are unique"
        )
    if w.min() <= tol.eq_tol:
        raise NotOpenCombination(
            f"known decomposition has a weight {w.min():g} <= eq_tol; "
            "an interior starting point is required"
        )
    d = null_shift_direction(g)
    out = shift_to_boundary(w, d)
    assert max_abs(g @ out - v) <= 10 * tol.eq_tol
    return out


def null_shift_direction(generators) -> np.ndarray:
    """A zero-sum weight direction d with (generators) @ d = 0, unit max entry.

    Built from a right null vector of the column differences, so moving any
    decomposition along d keeps both the reconstructed point and the weight
    sum fixed. Sign is fixed so the first nonvanishing component is positive.
    Callers must ensure the generators do not force unique decompositions.
    """
    g = _columns(generators)
    diffs = g[:, :-1] - g[:, -1:]
    _, _, vt = np.linalg.svd(diffs, full_matrices=True)
    alpha = vt[-1]
    d = np.concatenate([alpha, [-alpha.sum()]])
    d /= np.max(np.abs(d))
    nz = np.nonzero(np.abs(d) > 1e-12)[0]
    if nz.size and d[nz[0]] < 0:
        d = -d
    return d


def shift_to_boundary(weights: np.ndarray, d: np.ndarray) -> np.ndarray:
    """weights moved along d by the largest step keeping all entries >= 0."""
    neg = d < 0
    step = float(np.min(weights[neg] / -d[neg]))
    return np.clip(weights + step * d, 0.0, None)


def minimal_generating_columns(
    points, tol: Tolerance = DEFAULT_TOL, scan_order=None
) -> list[int]:
    """Indices of the unique minimal subset of columns with the same hull.

    Near-duplicate columns (within eq_tol) are collapsed to the lowest index
    first; a single sweep then drops every column that is a convex
    combination of the other survivors, leaving exactly the extreme points.
    scan_order optionally fixes the sweep order over the deduplicated
    columns; the resulting index set does not depend on it.
    """
    p = _columns(points)
    m = p.shape[1]
    kept = []
    for j in range(m):
        if all(max_abs(p[:, j] - p[:, i]) > tol.eq_tol for i in kept):
            kept.append(j)
    order = list(kept) if scan_order is None else [i for i in scan_order if i in kept]
    keep = set(kept)
    for j in order:
        others = [i for i in kept if i in keep and i != j]
        if not others:
            continue
        if convex_decompose(p[:, j], p[:, others], tol) is not None:
            keep.discard(j)
    return sorted(keep)


def is_extreme_point(index: int, points, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the indexed column is not a convex combination of the others."""
    p = _columns(points)
    m = p.shape[1]
    if not 0 <= index < m:
        raise IndexError(f"column index {index} out of range for {m} columns")
    if m == 1:
        return True
    others = [i for i in range(m) if i != index]
    return convex_decompose(p[:, index], p[:, others], tol) is None
