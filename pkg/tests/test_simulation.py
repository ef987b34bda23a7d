import numpy as np
import pytest

from pla.exceptions import InvalidInputError
from pla.simulation import (
    BLOCK,
    DIRECT_DRAW,
    EPSILON_BLOCK,
    SINGLES,
    SUBSAMPLE,
    DgpSpec,
    _draw_covariance,
    _replication_rng,
    convergence_study,
    generate_population,
    result_to_dict,
    results_table,
    run_type1_study,
)


class TestDgpSpec:
    def test_validation(self):
        with pytest.raises(InvalidInputError):
            DgpSpec(m=10, kind="nope")
        with pytest.raises(InvalidInputError):
            DgpSpec(m=10, kind=SINGLES, k=0)
        with pytest.raises(InvalidInputError):
            DgpSpec(m=3, kind=SINGLES, k=3)
        with pytest.raises(InvalidInputError):
            DgpSpec(m=10, kind=BLOCK, kappa=1)
        with pytest.raises(InvalidInputError):
            DgpSpec(m=10, sampling=SUBSAMPLE,
                    population_size=100, sample_size=200)

    def test_targets(self):
        singles = DgpSpec(m=10, kind=SINGLES, k=3)
        assert singles.target_variable_sets() == [
            frozenset({0}), frozenset({1}), frozenset({2})]
        block = DgpSpec(m=10, kind=BLOCK, kappa=3)
        assert block.target_variable_sets() == [frozenset({0, 1, 2})]


class TestPopulation:
    def test_singles_layout(self):
        spec = DgpSpec(m=8, kind=SINGLES, k=2)
        sigma = _draw_covariance(spec, _replication_rng(0, 0))
        assert sigma.shape == (8, 8)
        # Designated variables are exactly uncorrelated with everything.
        assert np.all(sigma[:2, 2:] == 0.0)
        assert sigma[0, 1] == 0.0
        assert np.linalg.eigvalsh(sigma).min() > 0

    def test_block_layout(self):
        spec = DgpSpec(m=8, kind=BLOCK, kappa=2)
        sigma = _draw_covariance(spec, _replication_rng(1, 0))
        assert np.all(sigma[:2, 2:] == 0.0)
        block = sigma[:2, :2]
        rho = block[0, 1] / np.sqrt(block[0, 0] * block[1, 1])
        assert 0.8 - 1e-12 <= rho <= 0.95 + 1e-12

    def test_epsilon_block_layout(self):
        spec = DgpSpec(m=8, kind=EPSILON_BLOCK, kappa=2, epsilon_scale=0.1)
        sigma = _draw_covariance(spec, _replication_rng(2, 0))
        cross = sigma[:2, 2:]
        assert np.abs(cross).max() <= 0.1 + 1e-12
        assert np.abs(cross).max() > 0.0
        assert np.linalg.eigvalsh(sigma).min() >= 0

    def test_population_reproducible(self):
        spec = DgpSpec(m=6, kind=SINGLES, k=1, population_size=1000)
        a = generate_population(spec, seed=7)
        b = generate_population(spec, seed=7)
        assert np.array_equal(a.values, b.values)
        assert a.values.shape == (1000, 6)


class TestType1Study:
    def test_reproducible_and_counts(self):
        spec = DgpSpec(m=6, kind=SINGLES, k=1, sample_size=500)
        grid = (0.3, 0.5)
        a = run_type1_study(spec, grid, s=50, master_seed=3)
        b = run_type1_study(spec, grid, s=50, master_seed=3)
        for ra, rb in zip(a, b):
            assert ra.failures == rb.failures
            assert ra.replications == 50
            assert 0 <= ra.failures <= 50
            # The rate is an exact multiple of 1/S.
            assert ra.type1_error * 50 == pytest.approx(ra.failures)

    def test_seed_changes_draws(self):
        spec = DgpSpec(m=6, kind=SINGLES, k=1)
        a = generate_population(spec, seed=1)
        b = generate_population(spec, seed=2)
        assert not np.array_equal(a.values, b.values)

    def test_serialization_and_table(self):
        spec = DgpSpec(m=6, kind=BLOCK, kappa=2, sample_size=500)
        results = run_type1_study(spec, (0.3, 0.5), s=20, master_seed=4)
        d = result_to_dict(results[0])
        assert d["tau"] == 0.3
        assert d["replications"] == 20
        table = results_table(results)
        assert "0.3" in table and "0.5" in table


class TestConvergence:
    def test_slopes_and_monotone_errors(self):
        spec = DgpSpec(m=5, kind=SINGLES, k=1, population_size=20_000,
                       sampling=SUBSAMPLE)
        study = convergence_study(spec, (100, 400, 1600), s=40, master_seed=5)
        assert not study.degenerate
        for means in (study.mean_eigenvalue_error,
                      study.mean_eigenvector_error,
                      study.mean_covariance_error):
            assert all(m > 0 for m in means)
            assert means == tuple(sorted(means, reverse=True))
        for slope in (study.eigenvalue_slope, study.eigenvector_slope,
                      study.covariance_slope):
            assert slope < 0

    def test_degenerate_full_population(self):
        spec = DgpSpec(m=4, kind=SINGLES, k=1, population_size=400,
                       sample_size=400, sampling=SUBSAMPLE)
        study = convergence_study(spec, (50, 100, 400), s=10, master_seed=6)
        assert study.degenerate
        assert study.mean_covariance_error[-1] == 0.0
        assert np.isnan(study.covariance_slope)

    def test_grid_validation(self):
        spec = DgpSpec(m=4, kind=SINGLES, k=1, population_size=1000,
                       sample_size=100, sampling=SUBSAMPLE)
        with pytest.raises(InvalidInputError):
            convergence_study(spec, (100, 50, 200), s=5, master_seed=0)
        with pytest.raises(InvalidInputError):
            convergence_study(spec, (100, 200), s=5, master_seed=0)
        with pytest.raises(InvalidInputError):
            convergence_study(spec, (100, 200, 2000), s=5, master_seed=0)
