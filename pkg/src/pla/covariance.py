"""Sample covariance estimation and block-structure recovery."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidInputError
from .linalg import check_symmetric

__all__ = [
    "DataMatrix",
    "BlockOrdering",
    "sample_covariance",
    "to_correlation",
    "find_block_ordering",
]


@dataclass(frozen=True)
class DataMatrix:
    """N x M observation matrix; rows are observations."""

    values: np.ndarray
    names: list[str] | None = field(default=None)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise InvalidInputError(f"expected a 2-d array, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("data contains non-finite entries")
        if self.names is not None and len(self.names) != values.shape[1]:
            raise InvalidInputError(
                f"{len(self.names)} column names for {values.shape[1]} columns"
            )
        object.__setattr__(self, "values", values)

    @property
    def n_obs(self):
        return self.values.shape[0]

    @property
    def n_vars(self):
        return self.values.shape[1]


@dataclass(frozen=True)
class BlockOrdering:
    """Partition of variable indices into blocks, plus the permutation that
    makes the covariance block-contiguous.

    blocks:      list of index lists, ordered by smallest contained index.
    permutation: permutation[original_index] = position after reordering.
    """

    blocks: list[list[int]]
    permutation: np.ndarray

    @property
    def n_blocks(self):
        return len(self.blocks)

    def block_sizes(self):
        return [len(b) for b in self.blocks]


def sample_covariance(data):
    """Unbiased sample covariance (1/(N-1) denominator), exactly symmetrized."""
    if isinstance(data, DataMatrix):
        x = data.values
    else:
        x = np.asarray(data, dtype=float)
        if x.ndim != 2:
            raise InvalidInputError(f"expected a 2-d array, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise InvalidInputError("data contains non-finite entries")
    n = x.shape[0]
    if n < 2:
        raise InvalidInputError(f"need at least 2 observations, got {n}")
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    return 0.5 * (cov + cov.T)


def to_correlation(cov):
    """Rescale a covariance matrix to a correlation matrix."""
    cov = check_symmetric(cov)
    d = np.diag(cov)
    if np.any(d <= 0):
        raise InvalidInputError("zero or negative variance; cannot standardize")
    inv_sd = 1.0 / np.sqrt(d)
    corr = cov * np.outer(inv_sd, inv_sd)
    np.fill_diagonal(corr, 1.0)
    return 0.5 * (corr + corr.T)


def find_block_ordering(cov, tol=0.0):
    """Recover the block-diagonal variable grouping of a covariance matrix.

    Blocks are the connected components of the support graph with an edge
    i--j iff |cov_ij| > tol, ordered by smallest contained index.  The
    returned permutation maps original indices to block-contiguous positions.
    """
    cov = check_symmetric(cov)
    if tol < 0:
        raise InvalidInputError(f"tol must be nonnegative, got {tol}")
    m = cov.shape[0]
    adjacency = np.abs(cov) > tol
    np.fill_diagonal(adjacency, False)

    visited = np.zeros(m, dtype=bool)
    blocks = []
    for start in range(m):
        if visited[start]:
            continue
        stack = [start]
        visited[start] = True
        component = []
        while stack:
            i = stack.pop()
            component.append(i)
            for j in np.nonzero(adjacency[i])[0]:
                if not visited[j]:
                    visited[j] = True
                    stack.append(int(j))
        blocks.append(sorted(component))
    blocks.sort(key=min)

    permutation = np.empty(m, dtype=int)
    pos = 0
    for block in blocks:
        for i in block:
            permutation[i] = pos
            pos += 1
    return BlockOrdering(blocks=blocks, permutation=permutation)
