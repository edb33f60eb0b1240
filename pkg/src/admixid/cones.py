"""Conic decompositions over finite generating sets of row vectors.

The wedge generated by rows r_1..r_m is the set of their nonnegative
combinations; it is a cone when it contains no line, equivalently when no
nonzero nonnegative combination of the rows vanishes. Conic decompositions
are unique exactly when the rows are linearly independent, and the minimal
generating subset of a cone is its set of extreme rays, unique up to
positive scaling of each ray.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

from .convex import nonneg_lstsq
from .matrices import DEFAULT_TOL, DimensionMismatch, Tolerance, max_abs, numeric_rank

__all__ = [
    "NotACone",
    "ZeroVector",
    "conic_decompose",
    "wedge_is_cone",
    "has_unique_conic_decompositions",
    "minimal_conic_generating_rows",
    "rays_equal_up_to_scaling",
]


class NotACone(ValueError):
    """The generated wedge contains a line, so cone-only operations do not apply."""


class ZeroVector(ValueError):
    """A ray argument is (numerically) zero."""


def _rows(generators) -> np.ndarray:
    r = np.asarray(generators, dtype=float)
    if r.ndim != 2:
        raise ValueError("generators must be a 2-D array with one row per generator")
    return r


def conic_decompose(
    target, generators, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray | None:
    """Nonnegative weights expressing target as a combination of the rows.

    Plain nonnegative least squares; accepted only if the reconstruction
    matches within eq_tol, otherwise None.
    """
    r = _rows(generators)
    v = np.asarray(target, dtype=float).ravel()
    if v.shape[0] != r.shape[1]:
        raise DimensionMismatch(
            f"target has dimension {v.shape[0]} but generators have {r.shape[1]}"
        )
    w = nonneg_lstsq(r.T, v)
    if max_abs(w @ r - v) > tol.eq_tol:
        return None
    return w


def wedge_is_cone(generators, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff no nonzero nonnegative combination of the rows vanishes.

    Probed with a bounded linear program: maximize the weight sum subject to
    |combination| <= eq_tol entrywise and weights in [0, 1]. Any nonzero
    witness rescales to max weight 1, so the optimum is either ~0 or >= 1;
    the verdict thresholds at 0.5.
    """
    r = _rows(generators)
    m, d = r.shape
    a_ub = np.vstack([r.T, -r.T])
    b_ub = np.full(2 * d, tol.eq_tol)
    res = linprog(
        c=-np.ones(m), A_ub=a_ub, b_ub=b_ub, bounds=[(0.0, 1.0)] * m, method="highs"
    )
    if res.status != 0:
        raise RuntimeError(f"feasibility probe failed: {res.message}")
    return -res.fun < 0.5


def has_unique_conic_decompositions(generators, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff every point of the wedge has one conic decomposition (rows independent)."""
    r = _rows(generators)
    return numeric_rank(r, tol) == r.shape[0]


def rays_equal_up_to_scaling(x, y, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff y is a positive multiple of x within eq_tol."""
    xv = np.asarray(x, dtype=float).ravel()
    yv = np.asarray(y, dtype=float).ravel()
    if xv.shape != yv.shape:
        raise ValueError("rays must have equal dimension")
    if max_abs(xv) <= tol.eq_tol or max_abs(yv) <= tol.eq_tol:
        raise ZeroVector("rays must be nonzero")
    scale = float(xv @ yv) / float(xv @ xv)
    if scale <= 0:
        return False
    return max_abs(scale * xv - yv) <= tol.eq_tol


def minimal_conic_generating_rows(
    rays, tol: Tolerance = DEFAULT_TOL, scan_order=None
) -> list[int]:
    """Indices of a minimal subset of rows generating the same cone.

    Rows that are positive multiples of an earlier row are collapsed first;
    a sweep then drops every row that is a nonnegative combination of the
    other survivors. What remains spans the extreme rays, one representative
    each, so the output is unique up to the collapsed scalings. scan_order
    optionally fixes the sweep order; the surviving ray directions do not
    depend on it.
    """
    r = _rows(rays)
    if not wedge_is_cone(r, tol):
        raise NotACone("rows generate a wedge containing a line")
    m = r.shape[0]
    for i in range(m):
        if max_abs(r[i]) <= tol.eq_tol:
            raise NotACone(f"row {i} is numerically zero")
    kept = []
    for j in range(m):
        if all(not rays_equal_up_to_scaling(r[i], r[j], tol) for i in kept):
            kept.append(j)
    order = list(kept) if scan_order is None else [i for i in scan_order if i in kept]
    keep = set(kept)
    for j in order:
        others = [i for i in kept if i in keep and i != j]
        if not others:
            continue
        if conic_decompose(r[j], r[others], tol) is not None:
            keep.discard(j)
    return sorted(keep)
