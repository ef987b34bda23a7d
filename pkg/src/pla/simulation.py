"""Monte Carlo harness: type-I error rates of thresholded block detection
across cut-off values, and empirical convergence rates of the sample
estimates.

Every replication is seeded by a pure function of (master_seed,
replication index), so results are independent of execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import detect_blocks
from .covariance import DataMatrix, sample_covariance
from .exceptions import InvalidInputError
from .linalg import align_signs, sym_eigen

__all__ = [
    "DgpSpec",
    "SimulationResult",
    "ConvergenceStudy",
    "generate_population",
    "run_type1_study",
    "convergence_study",
    "results_table",
    "result_to_dict",
]

SINGLES = "singles"
BLOCK = "block"
EPSILON_BLOCK = "epsilon_block"

DIRECT_DRAW = "direct_draw"
SUBSAMPLE = "subsample_without_replacement"

# Data-generating process constants, chosen so that detection succeeds for
# mid-range cut-offs at N = 10000 while eigenvalue near-collisions between
# the uncorrelated part and the correlated background occur often enough to
# produce the characteristic U-shaped error profile over tau.
_BACKGROUND_JITTER = 0.05
_SINGLE_VAR_LOW = 0.5
_SINGLE_VAR_HIGH = 40.0
_BLOCK_SCALE_LOW = 2.0
_BLOCK_SCALE_HIGH = 15.0
_BLOCK_VAR_SPREAD = 0.1
_BLOCK_CORR_LOW = 0.8
_BLOCK_CORR_HIGH = 0.95
# quantitative distinct-eigenvalue requirement: eigenvalues of the
# uncorrelated part are redrawn until |a - b| >= gap * sqrt(a * b) against
# every background eigenvalue (the mixing angle under sampling noise scales
# with the inverse of this relative gap)
_MIN_RELATIVE_GAP = 0.08
_MAX_REDRAWS = 200


def _separated(candidates, existing, min_gap):
    return all(
        abs(a - b) >= min_gap * math.sqrt(a * b)
        for a in candidates
        for b in existing
    )


@dataclass(frozen=True)
class DgpSpec:
    """Data-generating process for the simulation studies.

    The first k variables (kind=singles) or the first kappa variables
    (kind=block / epsilon_block) are the designated uncorrelated part; the
    remaining variables form a mutually correlated background block.
    """

    m: int
    kind: str = SINGLES
    k: int = 1
    kappa: int = 2
    epsilon_scale: float = 0.1
    population_size: int = 100_000
    sample_size: int = 10_000
    sampling: str = DIRECT_DRAW

    def __post_init__(self):
        if self.kind not in (SINGLES, BLOCK, EPSILON_BLOCK):
            raise InvalidInputError(f"unknown dgp kind {self.kind!r}")
        if self.m < 2:
            raise InvalidInputError("m must be at least 2")
        if self.kind == SINGLES:
            if not 1 <= self.k <= 5:
                raise InvalidInputError(f"k must be in 1..5, got {self.k}")
            if self.k >= self.m:
                raise InvalidInputError("k must be smaller than m")
        else:
            if not 2 <= self.kappa <= 6:
                raise InvalidInputError(f"kappa must be in 2..6, got {self.kappa}")
            if self.kappa >= self.m:
                raise InvalidInputError("kappa must be smaller than m")
        if self.kind == EPSILON_BLOCK and self.epsilon_scale <= 0:
            raise InvalidInputError("epsilon_scale must be positive")
        if self.sampling not in (DIRECT_DRAW, SUBSAMPLE):
            raise InvalidInputError(f"unknown sampling mode {self.sampling!r}")
        if self.sample_size < 2:
            raise InvalidInputError("sample_size must be at least 2")
        if self.sampling == SUBSAMPLE and self.sample_size > self.population_size:
            raise InvalidInputError("sample_size exceeds population_size")

    @property
    def n_uncorrelated(self):
        return self.k if self.kind == SINGLES else self.kappa

    def target_variable_sets(self):
        """Variable sets that a correct detection must report as candidates."""
        if self.kind == SINGLES:
            return [frozenset({i}) for i in range(self.k)]
        return [frozenset(range(self.kappa))]


@dataclass(frozen=True)
class SimulationResult:
    """Type-I error estimate for one (dgp, tau) cell."""

    spec: DgpSpec
    tau: float
    replications: int
    failures: int
    master_seed: int

    @property
    def type1_error(self):
        return self.failures / self.replications

    @property
    def standard_error(self):
        p = self.type1_error
        return math.sqrt(p * (1.0 - p) / self.replications)


@dataclass(frozen=True)
class ConvergenceStudy:
    """Mean estimation errors per sample size and fitted log-log slopes.

    Slopes are NaN (and ``degenerate`` is True) when some mean error is
    exactly zero, which happens when the whole population is resampled.
    """

    spec: DgpSpec
    n_grid: tuple[int, ...]
    replications: int
    master_seed: int
    mean_eigenvalue_error: tuple[float, ...]
    mean_eigenvector_error: tuple[float, ...]
    mean_covariance_error: tuple[float, ...]
    eigenvalue_slope: float
    eigenvector_slope: float
    covariance_slope: float
    degenerate: bool = field(default=False)


def _replication_rng(master_seed, *key):
    return np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(key))
    )


def _draw_covariance(spec, rng):
    """Draw one population covariance matrix for the spec's layout."""
    m = spec.m
    u = spec.n_uncorrelated
    m_bg = m - u

    w = rng.standard_normal((m_bg, m_bg))
    background = w @ w.T + _BACKGROUND_JITTER * np.eye(m_bg)

    sigma = np.zeros((m, m))
    sigma[u:, u:] = background

    bg_values = list(np.linalg.eigvalsh(background))

    if spec.kind == SINGLES:
        taken = list(bg_values)
        for i in range(u):
            for _ in range(_MAX_REDRAWS):
                var = rng.uniform(_SINGLE_VAR_LOW, _SINGLE_VAR_HIGH)
                if _separated([var], taken, _MIN_RELATIVE_GAP):
                    break
            sigma[i, i] = var
            taken.append(var)
    else:
        for _ in range(_MAX_REDRAWS):
            scale = rng.uniform(_BLOCK_SCALE_LOW, _BLOCK_SCALE_HIGH)
            variances = scale * rng.uniform(
                1.0 - _BLOCK_VAR_SPREAD, 1.0 + _BLOCK_VAR_SPREAD, size=u
            )
            block = np.diag(variances)
            for i in range(u):
                for j in range(i + 1, u):
                    rho = rng.uniform(_BLOCK_CORR_LOW, _BLOCK_CORR_HIGH)
                    block[i, j] = block[j, i] = rho * math.sqrt(
                        variances[i] * variances[j]
                    )
            # shrink toward the diagonal until positive definite; relevant
            # only for kappa > 2 where pairwise correlations can conflict
            shrink = 1.0
            while np.linalg.eigvalsh(block).min() <= 1e-6 * scale:
                shrink *= 0.9
                off = block - np.diag(variances)
                block = np.diag(variances) + shrink * off
            block_values = np.linalg.eigvalsh(block)
            if _separated(block_values, bg_values, _MIN_RELATIVE_GAP):
                break
        sigma[:u, :u] = block

    if spec.kind == EPSILON_BLOCK:
        cross = spec.epsilon_scale * rng.uniform(-1.0, 1.0, size=(u, m_bg))
        sigma[:u, u:] = cross
        sigma[u:, :u] = cross.T
        # restore positive definiteness without touching the cross entries
        smallest = np.linalg.eigvalsh(sigma).min()
        if smallest <= 0.0:
            sigma += (abs(smallest) + _BACKGROUND_JITTER) * np.eye(m)

    return sigma


def _draw_sample(sigma, n, rng):
    chol = np.linalg.cholesky(sigma)
    return rng.standard_normal((n, sigma.shape[0])) @ chol.T


def generate_population(spec, seed):
    """Generate the full synthetic population for a spec; deterministic per
    seed."""
    rng = _replication_rng(seed, 0)
    sigma = _draw_covariance(spec, rng)
    return DataMatrix(values=_draw_sample(sigma, spec.population_size, rng))


def _one_sample(spec, rng):
    sigma = _draw_covariance(spec, rng)
    if spec.sampling == SUBSAMPLE:
        population = _draw_sample(sigma, spec.population_size, rng)
        rows = np.sort(
            rng.choice(spec.population_size, size=spec.sample_size, replace=False)
        )
        return population[rows]
    return _draw_sample(sigma, spec.sample_size, rng)


def run_type1_study(spec, tau_grid, s, master_seed):
    """Estimate, for each cut-off in the grid, how often detection misses
    the designated uncorrelated variables across s replications.

    A replication fails for a given tau when some target variable set is not
    among the detected candidates.  The same sample is reused across the
    whole tau grid.
    """
    tau_grid = [float(t) for t in tau_grid]
    if not tau_grid:
        raise InvalidInputError("tau grid must be nonempty")
    for tau in tau_grid:
        if not 0.0 < tau < 1.0:
            raise InvalidInputError(f"tau must be in (0, 1), got {tau}")
    if s < 1:
        raise InvalidInputError(f"need at least 1 replication, got {s}")

    targets = spec.target_variable_sets()
    failures = {tau: 0 for tau in tau_grid}
    for rep in range(s):
        rng = _replication_rng(master_seed, rep)
        sample = _one_sample(spec, rng)
        eig = sym_eigen(sample_covariance(sample))
        for tau in tau_grid:
            found = {
                frozenset(c.variable_indices)
                for c in detect_blocks(eig, tau).candidates
            }
            if any(target not in found for target in targets):
                failures[tau] += 1

    return [
        SimulationResult(
            spec=spec, tau=tau, replications=s, failures=failures[tau],
            master_seed=master_seed,
        )
        for tau in tau_grid
    ]


def convergence_study(spec, n_grid, s, master_seed):
    """Subsample one fixed population at increasing sizes and fit log-log
    slopes of the mean estimation errors against the sample size.

    Errors are measured against the population's own covariance and
    eigenstructure: max eigenvalue deviation, max sign-aligned sup-norm
    eigenvector deviation, and max entrywise covariance deviation.
    """
    n_grid = [int(n) for n in n_grid]
    if len(n_grid) < 3:
        raise InvalidInputError("n_grid must contain at least 3 sizes")
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise InvalidInputError("n_grid must be strictly increasing")
    if n_grid[0] < 2:
        raise InvalidInputError("sample sizes must be at least 2")
    if n_grid[-1] > spec.population_size:
        raise InvalidInputError("n_grid exceeds population_size")
    if s < 1:
        raise InvalidInputError(f"need at least 1 replication, got {s}")

    population = generate_population(spec, master_seed).values
    truth_cov = sample_covariance(population)
    truth_eig = sym_eigen(truth_cov)

    val_means, vec_means, cov_means = [], [], []
    for n_index, n in enumerate(n_grid):
        val_err = np.empty(s)
        vec_err = np.empty(s)
        cov_err = np.empty(s)
        for rep in range(s):
            rng = _replication_rng(master_seed, 1 + n_index, rep)
            rows = np.sort(rng.choice(spec.population_size, size=n, replace=False))
            cov = sample_covariance(population[rows])
            eig = align_signs(truth_eig, sym_eigen(cov))
            val_err[rep] = np.abs(eig.values - truth_eig.values).max()
            vec_err[rep] = np.abs(eig.vectors - truth_eig.vectors).max()
            cov_err[rep] = np.abs(cov - truth_cov).max()
        val_means.append(float(val_err.mean()))
        vec_means.append(float(vec_err.mean()))
        cov_means.append(float(cov_err.mean()))

    degenerate = any(
        v == 0.0 for v in (*val_means, *vec_means, *cov_means)
    )

    def slope(means):
        if degenerate:
            return math.nan
        return float(np.polyfit(np.log(n_grid), np.log(means), 1)[0])

    return ConvergenceStudy(
        spec=spec,
        n_grid=tuple(n_grid),
        replications=s,
        master_seed=master_seed,
        mean_eigenvalue_error=tuple(val_means),
        mean_eigenvector_error=tuple(vec_means),
        mean_covariance_error=tuple(cov_means),
        eigenvalue_slope=slope(val_means),
        eigenvector_slope=slope(vec_means),
        covariance_slope=slope(cov_means),
        degenerate=degenerate,
    )


def result_to_dict(result):
    """JSON record for one simulation cell."""
    spec = result.spec
    return {
        "m": spec.m,
        "kind": spec.kind,
        "k": spec.k if spec.kind == SINGLES else None,
        "kappa": None if spec.kind == SINGLES else spec.kappa,
        "sample_size": spec.sample_size,
        "sampling": spec.sampling,
        "tau": result.tau,
        "replications": result.replications,
        "failures": result.failures,
        "type1_error": result.type1_error,
        "standard_error": result.standard_error,
        "master_seed": result.master_seed,
    }


def results_table(results):
    """One table row per dgp, one column per tau."""
    if not results:
        return ""
    by_spec = {}
    taus = []
    for r in results:
        key = (r.spec.m, r.spec.kind, r.spec.n_uncorrelated)
        by_spec.setdefault(key, {})[r.tau] = r
        if r.tau not in taus:
            taus.append(r.tau)
    size_label = "k" if results[0].spec.kind == SINGLES else "kappa"
    header = f"{'M':>5} {size_label:>6} " + " ".join(
        f"tau={t:<6.2f}"[:10].rjust(10) for t in taus
    )
    lines = [header, "-" * len(header)]
    for (m, _kind, size), cells in by_spec.items():
        row = f"{m:>5} {size:>6} " + " ".join(
            f"{cells[t].type1_error:>10.4f}" if t in cells else " " * 10
            for t in taus
        )
        lines.append(row)
    return "\n".join(lines)
