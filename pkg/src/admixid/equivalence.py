"""Equality of factor pairs up to a shared relabelling of populations.

Two pairs describe the same model when one permutation simultaneously maps
the columns of F and the rows of Q of one pair onto the other. The verdict
carries the permutation as a certificate, or a reason when none exists.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .matrices import DEFAULT_TOL, FactorPair, Tolerance, max_abs

__all__ = ["EquivalenceResult", "are_equivalent"]

# exhaustive permutation search stays affordable up to this population count
_EXHAUSTIVE_LIMIT = 8


@dataclass(frozen=True)
class EquivalenceResult:
    """Outcome of an equivalence test.

    permutation maps each population index of the second pair to the matching
    population index of the first pair (0-based); it is None when the pairs
    are not equivalent, in which case reason says why.
    """

    equivalent: bool
    permutation: list[int] | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.equivalent

    def to_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "permutation": None if self.permutation is None else list(self.permutation),
            "reason": self.reason,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _match_distances(pair1: FactorPair, pair2: FactorPair) -> np.ndarray:
    """d[k, j]: distance between pop k of pair2 and pop j of pair1."""
    f1, q1 = pair1.F.values, pair1.Q.values
    f2, q2 = pair2.F.values, pair2.Q.values
    k_pops = pair1.n_pops
    d = np.empty((k_pops, k_pops))
    for k in range(k_pops):
        for j in range(k_pops):
            d[k, j] = max(
                max_abs(f2[:, k] - f1[:, j]), max_abs(q2[k, :] - q1[j, :])
            )
    return d


def _greedy(d: np.ndarray, eq_tol: float) -> list[int] | None:
    k_pops = d.shape[0]
    used = set()
    perm = []
    for k in range(k_pops):
        best = None
        for j in range(k_pops):
            if j in used or d[k, j] > eq_tol:
                continue
            if best is None or d[k, j] < d[k, best]:
                best = j
        if best is None:
            return None
        used.add(best)
        perm.append(best)
    return perm


def are_equivalent(
    pair1: FactorPair, pair2: FactorPair, tol: Tolerance = DEFAULT_TOL
) -> EquivalenceResult:
    """Test whether two factor pairs agree up to one population permutation.

    Each candidate permutation must match F columns and Q rows at once,
    entrywise within eq_tol. Matching tries a greedy pass first; if that
    fails, all permutations are tried for small K, and an optimal assignment
    on the distance matrix for larger K. Dimension disagreements are a valid
    not-equivalent outcome, not an error.
    """
    if pair1.n_pops != pair2.n_pops:
        return EquivalenceResult(
            False,
            reason=f"population counts differ: {pair1.n_pops} vs {pair2.n_pops}",
        )
    if pair1.n_loci != pair2.n_loci or pair1.n_individuals != pair2.n_individuals:
        return EquivalenceResult(
            False,
            reason=(
                f"shapes differ: {pair1.n_loci}x{pair1.n_individuals} vs "
                f"{pair2.n_loci}x{pair2.n_individuals}"
            ),
        )
    d = _match_distances(pair1, pair2)
    perm = _greedy(d, tol.eq_tol)
    if perm is None:
        k_pops = d.shape[0]
        if k_pops <= _EXHAUSTIVE_LIMIT:
            for cand in itertools.permutations(range(k_pops)):
                if all(d[k, cand[k]] <= tol.eq_tol for k in range(k_pops)):
                    perm = list(cand)
                    break
        else:
            _, cols = linear_sum_assignment(d)
            cand = [int(j) for j in cols]
            if all(d[k, cand[k]] <= tol.eq_tol for k in range(k_pops)):
                perm = cand
    if perm is None:
        mins = d.min(axis=1)
        k_bad = int(np.argmax(mins))
        if mins[k_bad] > tol.eq_tol:
            reason = (
                f"population {k_bad} of the second pair differs from every "
                f"population of the first by at least {mins[k_bad]:g}"
            )
        else:
            reason = (
                f"every population has a counterpart within {tol.eq_tol:g} "
                "but no consistent assignment exists"
            )
        return EquivalenceResult(False, reason=reason)
    return EquivalenceResult(True, permutation=perm)
