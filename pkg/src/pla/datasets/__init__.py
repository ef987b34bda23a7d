"""Small demo covariance matrices bundled with the package.

Both are 10-variable sample covariances from simulated data, rounded to two
decimals.  The first contains a 2-variable block that is exactly
uncorrelated with the rest; the second a single variable that is only
weakly correlated with the rest (population and sample versions).
"""

from importlib import resources

import numpy as np

__all__ = [
    "load_uncorrelated_block_cov",
    "load_weak_correlation_cov",
    "dataset_path",
]


def dataset_path(name):
    """Filesystem path of a bundled CSV, e.g. for feeding the CLI."""
    return str(resources.files(__name__) / name)


def _load(name):
    with (resources.files(__name__) / name).open("rb") as fh:
        return np.loadtxt(fh, delimiter=",")


def load_uncorrelated_block_cov():
    """Covariance with variables {0, 1} uncorrelated from the other eight."""
    return _load("uncorrelated_block_cov.csv")


def load_weak_correlation_cov(sample=True):
    """Covariance where variable 0 is weakly correlated with the rest;
    sample=False returns the underlying population matrix."""
    name = "weak_correlation_cov_sample.csv" if sample else \
        "weak_correlation_cov_population.csv"
    return _load(name)
