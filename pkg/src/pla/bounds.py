"""Perturbation diagnostics: eigenvalue shift bounds, eigengaps, and
sufficient conditions for thresholded detection to survive noise."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .linalg import check_symmetric, frobenius_norm, gershgorin_max

__all__ = [
    "GapSpec",
    "BoundCheck",
    "weyl_eigenvalue_bound",
    "eigengap",
    "sufficient_discard_bound",
    "gershgorin_condition",
]

# constant in the eigenvector perturbation bound derived from the
# Davis-Kahan / Yu-Wang 2-norm inequality
_BOUND_CONSTANT = 2.0 ** 1.5


@dataclass(frozen=True)
class GapSpec:
    """Spectral gaps around eigenvalue ``index`` of a descending spectrum.

    Boundary conventions: a virtual +inf eigenvalue above the largest and
    -inf below the smallest, so the outermost gaps are +inf.
    """

    index: int
    lower_gap: float  # lambda_{j-1} - lambda_j
    upper_gap: float  # lambda_j - lambda_{j+1}

    @property
    def min_gap(self):
        return min(self.lower_gap, self.upper_gap)


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of a sufficient-condition check, with diagnostics.

    ``satisfied`` is the verdict; ``lhs`` and ``rhs`` are the two sides of
    the inequality that was tested; ``diagnostic`` names the reason when the
    check could not be meaningfully satisfied.
    """

    satisfied: bool
    lhs: float
    rhs: float
    diagnostic: str | None = None

    def __bool__(self):
        return self.satisfied


def weyl_eigenvalue_bound(perturbation):
    """Frobenius norm of a symmetric perturbation: by Weyl's inequality an
    upper bound on the largest eigenvalue shift it can cause."""
    perturbation = check_symmetric(perturbation)
    return frobenius_norm(perturbation)


def eigengap(values, j):
    """Gaps between eigenvalue ``j`` (0-based, descending order) and its
    neighbours, with +inf beyond either end of the spectrum."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise InvalidInputError("expected a nonempty 1-d eigenvalue vector")
    m = values.size
    if not 0 <= j < m:
        raise InvalidInputError(f"index {j} out of range for {m} eigenvalues")
    if np.any(np.diff(values) > 0):
        raise InvalidInputError("eigenvalues must be in descending order")
    lower = math.inf if j == 0 else float(values[j - 1] - values[j])
    upper = math.inf if j == m - 1 else float(values[j] - values[j + 1])
    return GapSpec(index=j, lower_gap=lower, upper_gap=upper)


def sufficient_discard_bound(population_values, perturbation_norm, j, tau):
    """Check the sufficient condition for eigenvector ``j`` of the perturbed
    matrix to stay within sup-norm distance ``tau`` of its population
    counterpart: 2^{3/2} * perturbation_norm / eigengap < tau.

    Population eigenvalues are expected; feeding sample eigenvalues is an
    approximation.  A zero gap with positive perturbation makes the bound
    vacuous and reports False.
    """
    if perturbation_norm < 0:
        raise InvalidInputError("perturbation_norm must be nonnegative")
    if not 0.0 < tau < 1.0:
        raise InvalidInputError(f"tau must be in (0, 1), got {tau}")
    gap = eigengap(population_values, j).min_gap
    if perturbation_norm == 0.0:
        return BoundCheck(satisfied=True, lhs=0.0, rhs=tau)
    if gap <= 0.0:
        return BoundCheck(
            satisfied=False, lhs=math.inf, rhs=tau,
            diagnostic="zero eigengap: distinct-eigenvalue assumption violated",
        )
    lhs = _BOUND_CONSTANT * perturbation_norm / gap
    return BoundCheck(satisfied=bool(lhs < tau), lhs=float(lhs), rhs=tau)


def _pad_to(a, dim, delta):
    """Embed a square matrix in the top-left of a dim x dim matrix whose
    remaining diagonal is delta."""
    k = a.shape[0]
    if k == dim:
        return a
    out = np.zeros((dim, dim))
    out[:k, :k] = a
    out[range(k, dim), range(k, dim)] = delta
    return out


def _padded_difference(a, b, delta):
    dim = max(a.shape[0], b.shape[0])
    return _pad_to(a, dim, delta) - _pad_to(b, dim, delta)


def gershgorin_condition(block_above, block_current, block_below, e_norm,
                         tau, delta=1e-12):
    """Check whether a sparse-perturbation norm is small enough, relative to
    how much the current diagonal block differs from its spectral neighbours,
    to keep the current block's eigenvector loadings within ``tau``.

    Blocks of unequal size are padded to a common dimension with a small
    positive diagonal ``delta`` before subtraction.  The comparison value D
    is the largest Gershgorin-disc point of either difference; the condition
    is e_norm < tau * D.
    """
    if e_norm < 0:
        raise InvalidInputError("e_norm must be nonnegative")
    if not 0.0 < tau < 1.0:
        raise InvalidInputError(f"tau must be in (0, 1), got {tau}")
    if delta <= 0:
        raise InvalidInputError("delta must be positive")
    block_above = check_symmetric(block_above)
    block_current = check_symmetric(block_current)
    block_below = check_symmetric(block_below)

    d = max(
        gershgorin_max(_padded_difference(block_above, block_current, delta)),
        gershgorin_max(_padded_difference(block_current, block_below, delta)),
    )
    if d <= 0.0:
        return BoundCheck(
            satisfied=False, lhs=float(e_norm), rhs=0.0,
            diagnostic=f"nonpositive Gershgorin bound D = {d:.3e}",
        )
    return BoundCheck(satisfied=bool(e_norm < tau * d), lhs=float(e_norm),
                      rhs=float(tau * d))
