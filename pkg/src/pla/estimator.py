"""Scikit-learn compatible variable selector built on principal loading
analysis."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .analysis import PlaConfig, run_pla
from .covariance import sample_covariance, to_correlation

__all__ = ["PrincipalLoadingAnalysis"]


class PrincipalLoadingAnalysis(SelectorMixin, BaseEstimator):
    """Select variables by discarding blocks whose covariance eigenvector
    loadings are uniformly small and whose variance share fits in the
    discard budget.

    Parameters
    ----------
    tau : float, default 0.3
        Loading cut-off; eigenvector components below tau in absolute value
        count as structural zeros when blocks are detected.
    retained_variance_min : float, default 0.9
        Keep discarding candidate blocks (smallest variance share first)
        only while the retained share of total variance stays at or above
        this value.
    use_contribution_measure : bool, default False
        Budget candidates by the squared-loading contribution measure
        instead of the raw eigenvalue share.
    standardize : bool, default False
        Run the analysis on the correlation matrix instead of the
        covariance matrix.

    Attributes
    ----------
    report_ : PlaReport
        Full analysis outcome: candidates, variance accounting, decision.
    covariance_ : ndarray of shape (n_features, n_features)
        The matrix the analysis ran on.
    n_features_in_ : int
    """

    def __init__(self, tau=0.3, retained_variance_min=0.9,
                 use_contribution_measure=False, standardize=False):
        self.tau = tau
        self.retained_variance_min = retained_variance_min
        self.use_contribution_measure = use_contribution_measure
        self.standardize = standardize

    def fit(self, X, y=None):
        """Estimate the covariance of X and run the analysis."""
        X = check_array(X, ensure_min_samples=2, ensure_min_features=2)
        config = PlaConfig(
            tau=self.tau,
            retained_variance_min=self.retained_variance_min,
            use_contribution_measure=self.use_contribution_measure,
        )
        cov = sample_covariance(X)
        if self.standardize:
            cov = to_correlation(cov)
        self.covariance_ = cov
        self.report_ = run_pla(cov, config)
        self.n_features_in_ = X.shape[1]
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "report_")
        mask = np.zeros(self.n_features_in_, dtype=bool)
        mask[list(self.report_.kept)] = True
        return mask
