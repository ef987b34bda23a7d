import numpy as np
import pytest

from pla.datasets import load_uncorrelated_block_cov, load_weak_correlation_cov


@pytest.fixture(scope="session")
def block_cov():
    """10-var sample covariance with variables {0,1} uncorrelated from the rest."""
    return load_uncorrelated_block_cov()


@pytest.fixture(scope="session")
def weak_cov_sample():
    """10-var sample covariance where variable 0 is weakly correlated."""
    return load_weak_correlation_cov(sample=True)


@pytest.fixture(scope="session")
def weak_cov_population():
    return load_weak_correlation_cov(sample=False)


def random_symmetric(rng, m, scale=1.0):
    a = rng.standard_normal((m, m)) * scale
    return 0.5 * (a + a.T)


def random_orthogonal(rng, m):
    q, r = np.linalg.qr(rng.standard_normal((m, m)))
    return q * np.sign(np.diag(r))


def flat_top_block(size, top_value, tail_values):
    """Symmetric size x size block whose largest eigenvalue has the flat
    eigenvector (1,...,1)/sqrt(size); remaining eigenvalues from tail_values.

    Every eigenvector of the result has max |component| >= 1/sqrt(size), and
    the top eigenvector connects all variables of the block, so thresholded
    detection at tau <= 1/sqrt(6) recovers the block exactly.
    """
    assert len(tail_values) == size - 1
    u = np.ones(size) / np.sqrt(size)
    if size == 1:
        return np.array([[top_value]])
    e1 = np.zeros(size)
    e1[0] = 1.0
    w = e1 - u
    w /= np.linalg.norm(w)
    house = np.eye(size) - 2.0 * np.outer(w, w)  # column 0 is u
    d = np.concatenate([[top_value], tail_values])
    return house @ np.diag(d) @ house.T


def block_diagonal_cov(sizes, base=100.0):
    """Block-diagonal covariance from flat_top_block pieces with globally
    distinct eigenvalues."""
    mats = []
    tail = 1.0
    for i, size in enumerate(sizes):
        tails = []
        for _ in range(size - 1):
            tails.append(tail)
            tail += 0.37
        # multiplicative spacing keeps the top eigenvalues well separated
        # even under sampling noise proportional to their size
        mats.append(flat_top_block(size, base * 1.8 ** i, np.array(tails)))
    m = sum(sizes)
    out = np.zeros((m, m))
    pos = 0
    for mat in mats:
        k = mat.shape[0]
        out[pos:pos + k, pos:pos + k] = mat
        pos += k
    return out


def compositions(total, min_parts=2):
    """All ordered tuples of positive integers summing to total."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first, 0):
            parts = (first,) + rest
            if len(parts) >= min_parts:
                yield parts
