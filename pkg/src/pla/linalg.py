"""Dense symmetric linear algebra used throughout the package.

All routines operate on plain numpy arrays.  Symmetric matrices are
validated and exactly symmetrized with :func:`check_symmetric`, and
eigendecompositions come back as :class:`EigenPairs` with eigenvalues in
descending order and a deterministic sign convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError, NumericalFailureError

__all__ = [
    "EigenPairs",
    "check_symmetric",
    "sym_eigen",
    "frobenius_norm",
    "sup_norm",
    "align_signs",
    "gershgorin_max",
]


def check_symmetric(a, asym_tol=1e-8):
    """Validate ``a`` as a square symmetric matrix and return it exactly
    symmetrized as ``(a + a.T) / 2``.

    Raises InvalidInputError if ``a`` is not square, contains non-finite
    entries, or its asymmetry exceeds ``asym_tol`` relative to its scale.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise InvalidInputError("matrix must be nonempty")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix contains non-finite entries")
    scale = max(1.0, float(np.abs(a).max()))
    asym = float(np.abs(a - a.T).max())
    if asym > asym_tol * scale:
        raise InvalidInputError(
            f"matrix is not symmetric: max |a - a.T| = {asym:.3e} exceeds "
            f"tolerance {asym_tol * scale:.3e}"
        )
    return 0.5 * (a + a.T)


@dataclass(frozen=True)
class EigenPairs:
    """Eigendecomposition of a symmetric matrix.

    values:  eigenvalues in descending order.
    vectors: orthonormal eigenvectors, column ``j`` pairs with ``values[j]``.
             In each column the entry of largest absolute value is
             nonnegative (ties broken by lowest row index).
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self):
        return self.values.shape[0]


def _fix_signs(vectors):
    """Flip column signs so the largest-magnitude entry is nonnegative."""
    anchor = np.argmax(np.abs(vectors), axis=0)  # first max wins ties
    flips = np.where(vectors[anchor, np.arange(vectors.shape[1])] < 0.0, -1.0, 1.0)
    return vectors * flips


def sym_eigen(a):
    """Eigendecompose a symmetric matrix into descending-ordered pairs.

    Deterministic for identical input.  Raises NumericalFailureError if the
    underlying solver does not converge.
    """
    a = check_symmetric(a)
    try:
        values, vectors = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigendecomposition failed: {exc}") from exc
    # eigh returns ascending order
    values = values[::-1].copy()
    vectors = _fix_signs(vectors[:, ::-1].copy())
    return EigenPairs(values=values, vectors=vectors)


def frobenius_norm(a):
    """Square root of the sum of squared matrix entries."""
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix contains non-finite entries")
    return float(np.sqrt(np.sum(a * a)))


def sup_norm(v):
    """Maximum absolute component of a vector."""
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        raise InvalidInputError("sup_norm of an empty vector is undefined")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("vector contains non-finite entries")
    return float(np.abs(v).max())


def align_signs(reference, candidate):
    """Flip candidate eigenvector columns so each has nonnegative inner
    product with the same-index reference column.  Eigenvalues unchanged.
    """
    if reference.vectors.shape != candidate.vectors.shape:
        raise InvalidInputError(
            f"dimension mismatch: reference {reference.vectors.shape} vs "
            f"candidate {candidate.vectors.shape}"
        )
    dots = np.einsum("ij,ij->j", reference.vectors, candidate.vectors)
    flips = np.where(dots < 0.0, -1.0, 1.0)
    return EigenPairs(values=candidate.values, vectors=candidate.vectors * flips)


def gershgorin_max(a):
    """Largest real value contained in the union of Gershgorin discs:
    max over rows i of a_ii + sum_{k != i} |a_ik|.
    """
    a = check_symmetric(a)
    radii = np.abs(a).sum(axis=1) - np.abs(np.diag(a))
    return float((np.diag(a) + radii).max())
