import numpy as np
import pytest

from pla.bounds import (
    eigengap,
    gershgorin_condition,
    sufficient_discard_bound,
    weyl_eigenvalue_bound,
)
from pla.exceptions import InvalidInputError
from pla.linalg import frobenius_norm, sym_eigen

from conftest import random_symmetric


class TestEigengap:
    def test_interior_gaps(self):
        values = np.array([9.0, 5.0, 4.0, 1.0])
        gap = eigengap(values, 1)
        assert gap.lower_gap == pytest.approx(4.0)
        assert gap.upper_gap == pytest.approx(1.0)
        assert gap.min_gap == pytest.approx(1.0)

    def test_boundary_conventions(self):
        values = np.array([3.0, 2.0, 1.0])
        top = eigengap(values, 0)
        assert top.lower_gap == np.inf
        assert top.min_gap == pytest.approx(1.0)
        bottom = eigengap(values, 2)
        assert bottom.upper_gap == np.inf
        assert bottom.min_gap == pytest.approx(1.0)

    def test_single_eigenvalue_infinite(self):
        gap = eigengap(np.array([2.0]), 0)
        assert gap.min_gap == np.inf

    def test_rejects_unsorted(self):
        with pytest.raises(InvalidInputError):
            eigengap(np.array([1.0, 2.0]), 0)

    def test_rejects_index_out_of_range(self):
        with pytest.raises(InvalidInputError):
            eigengap(np.array([2.0, 1.0]), 2)


class TestWeylBound:
    def test_equals_frobenius_norm(self):
        rng = np.random.default_rng(0)
        e = random_symmetric(rng, 5)
        assert weyl_eigenvalue_bound(e) == pytest.approx(frobenius_norm(e))

    def test_dominates_eigenvalue_shift(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            m = int(rng.integers(2, 9))
            a = random_symmetric(rng, m)
            e = random_symmetric(rng, m, scale=0.3)
            shift = np.abs(np.sort(np.linalg.eigvalsh(a + e))
                           - np.sort(np.linalg.eigvalsh(a))).max()
            assert shift <= weyl_eigenvalue_bound(e) + 1e-10


class TestSufficientDiscardBound:
    def test_zero_perturbation_always_satisfied(self):
        check = sufficient_discard_bound(np.array([3.0, 1.0]), 0.0, 0, 0.3)
        assert bool(check)
        assert check.lhs == 0.0

    def test_zero_gap_never_satisfied(self):
        check = sufficient_discard_bound(np.array([2.0, 2.0]), 0.1, 0, 0.3)
        assert not bool(check)
        assert "eigengap" in check.diagnostic

    def test_threshold_strict(self):
        values = np.array([5.0, 1.0])
        # lhs = 2^{3/2} * norm / gap; pick norm so lhs == tau exactly.
        tau = 0.3
        norm = tau * 4.0 / 2.0**1.5
        assert not bool(sufficient_discard_bound(values, norm, 0, tau))
        assert bool(sufficient_discard_bound(values, norm * 0.999, 0, tau))

    def test_implies_small_eigenvector_deviation(self):
        # When the bound is satisfied, the realized sup-norm eigenvector
        # deviation stays below tau.
        rng = np.random.default_rng(2)
        tau = 0.3
        for _ in range(300):
            m = int(rng.integers(3, 8))
            values = np.sort(rng.uniform(1.0, 20.0, size=m))[::-1]
            while np.diff(values).max() > -0.2:
                values = np.sort(rng.uniform(1.0, 20.0, size=m))[::-1]
            q, r = np.linalg.qr(rng.standard_normal((m, m)))
            q *= np.sign(np.diag(r))
            a = q @ np.diag(values) @ q.T
            j = int(rng.integers(0, m))
            gap = eigengap(values, j).min_gap
            e = random_symmetric(rng, m)
            e *= (0.9 * tau * gap / 2.0**1.5) / frobenius_norm(e)
            check = sufficient_discard_bound(values, frobenius_norm(e), j, tau)
            assert bool(check)
            base = sym_eigen(a)
            noisy = sym_eigen(a + e)
            dots = np.sum(base.vectors * noisy.vectors, axis=0)
            aligned = noisy.vectors * np.sign(np.where(dots == 0, 1.0, dots))
            deviation = np.abs(aligned[:, j] - base.vectors[:, j]).max()
            assert deviation < tau


class TestGershgorinCondition:
    def test_oracle_row_scan(self):
        # Oracle: hand-computed Gershgorin maxima of the two differences.
        above = np.array([[50.0]])
        current = np.diag([10.0, 9.0])
        below = np.array([[1.0]])
        check = gershgorin_condition(above, current, below,
                                     e_norm=0.01, tau=0.3, delta=1e-12)
        assert bool(check)
        assert check.lhs == pytest.approx(0.01)
        # above - padded(current) has rows {40, delta - 9}; current - padded
        # (below) has rows {9, 9 - delta}; D = 40.
        assert check.rhs == pytest.approx(0.3 * 40.0)

    def test_violated_for_large_perturbation(self):
        check = gershgorin_condition(
            np.array([[50.0]]), np.array([[10.0]]), np.array([[1.0]]),
            e_norm=100.0, tau=0.3)
        assert not bool(check)

    def test_nonpositive_bound_rejected(self):
        # Identical neighbouring blocks leave no Gershgorin separation.
        b = np.array([[5.0]])
        check = gershgorin_condition(b, b, b, e_norm=1e-6, tau=0.3)
        assert not bool(check)
        assert "Gershgorin" in check.diagnostic

    def test_padding_uses_delta(self):
        # Shorter neighbour blocks are padded with delta on the diagonal, so
        # the bound depends on delta when padded rows dominate.
        args = (np.array([[50.0]]), np.diag([10.0, 9.0]), np.array([[1.0]]))
        loose = gershgorin_condition(*args, e_norm=0.1, tau=0.3, delta=1e-12)
        tight = gershgorin_condition(*args, e_norm=0.1, tau=0.3, delta=1e12)
        assert bool(loose)
        assert loose.rhs != tight.rhs
