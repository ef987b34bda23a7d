"""Principal loading analysis: detect blocks of variables from thresholded
eigenvector structure, account for their variance, and decide what to drop.

Variable and eigenvector indices are 0-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .bounds import eigengap
from .exceptions import InvalidInputError
from .linalg import EigenPairs, sym_eigen

__all__ = [
    "PlaConfig",
    "BlockCandidate",
    "BlockDetection",
    "PlaReport",
    "detect_blocks",
    "explained_variance",
    "contribution_measure",
    "run_pla",
]

_BOUND_CONSTANT = 2.0 ** 1.5


@dataclass(frozen=True)
class PlaConfig:
    """Knobs for a principal loading analysis run.

    tau:                  loading cut-off; |v| < tau counts as a structural
                          zero (strict, so tau itself loads).
    retained_variance_min: smallest acceptable share of variance kept after
                          discarding, default 0.9.
    use_contribution_measure: rank and budget candidates by the squared-
                          loading contribution measure instead of the raw
                          eigenvalue share.
    """

    tau: float
    retained_variance_min: float = 0.9
    use_contribution_measure: bool = False

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise InvalidInputError(f"tau must be in (0, 1), got {self.tau}")
        if not 0.0 < self.retained_variance_min <= 1.0:
            raise InvalidInputError(
                "retained_variance_min must be in (0, 1], got "
                f"{self.retained_variance_min}"
            )


@dataclass(frozen=True)
class BlockCandidate:
    """A square block: a set of variables matched with the eigenvectors that
    represent it, plus its variance accounting."""

    variable_indices: tuple[int, ...]
    eigenvector_indices: tuple[int, ...]
    explained_variance: float
    contribution_measure: float
    discardable: bool = False


@dataclass(frozen=True)
class BlockDetection:
    """Outcome of the structure check on a set of eigenvectors.

    candidates:  connected components of the loading graph with equally many
                 eigenvectors and variables (and fewer than all variables).
    degenerate_eigenvectors: eigenvectors with every loading below tau.
    mismatched_components:   components whose eigenvector and variable counts
                 differ; kept for diagnostics, they yield no candidate.
    """

    candidates: list[BlockCandidate]
    degenerate_eigenvectors: list[int]
    mismatched_components: list[tuple[tuple[int, ...], tuple[int, ...]]]


@dataclass(frozen=True)
class PlaReport:
    """Full outcome of a principal loading analysis run."""

    eigen: EigenPairs
    candidates: list[BlockCandidate]
    degenerate_eigenvectors: list[int]
    mismatched_components: list[tuple[tuple[int, ...], tuple[int, ...]]]
    config: PlaConfig
    kept: tuple[int, ...]
    discarded: tuple[int, ...]
    bounds: dict = field(default_factory=dict)

    def to_dict(self):
        """Plain-python representation; JSON-serializable and stable."""
        return {
            "schema_version": 1,
            "eigenvalues": [float(v) for v in self.eigen.values],
            "eigenvectors": [[float(x) for x in row] for row in self.eigen.vectors],
            "candidates": [
                {
                    "variables": list(c.variable_indices),
                    "eigenvectors": list(c.eigenvector_indices),
                    "explained_variance": c.explained_variance,
                    "contribution_measure": c.contribution_measure,
                    "discardable": c.discardable,
                }
                for c in self.candidates
            ],
            "degenerate_eigenvectors": list(self.degenerate_eigenvectors),
            "mismatched_components": [
                {"variables": list(vs), "eigenvectors": list(es)}
                for vs, es in self.mismatched_components
            ],
            "decision": {"kept": list(self.kept), "discarded": list(self.discarded)},
            "config": {
                "tau": self.config.tau,
                "retained_variance_min": self.config.retained_variance_min,
                "use_contribution_measure": self.config.use_contribution_measure,
            },
            "bounds": self.bounds,
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("schema_version") != 1:
            raise InvalidInputError(
                f"unsupported schema_version {d.get('schema_version')!r}"
            )
        eigen = EigenPairs(
            values=np.asarray(d["eigenvalues"], dtype=float),
            vectors=np.asarray(d["eigenvectors"], dtype=float),
        )
        candidates = [
            BlockCandidate(
                variable_indices=tuple(c["variables"]),
                eigenvector_indices=tuple(c["eigenvectors"]),
                explained_variance=c["explained_variance"],
                contribution_measure=c["contribution_measure"],
                discardable=c["discardable"],
            )
            for c in d["candidates"]
        ]
        return cls(
            eigen=eigen,
            candidates=candidates,
            degenerate_eigenvectors=list(d["degenerate_eigenvectors"]),
            mismatched_components=[
                (tuple(c["variables"]), tuple(c["eigenvectors"]))
                for c in d["mismatched_components"]
            ],
            config=PlaConfig(**d["config"]),
            kept=tuple(d["decision"]["kept"]),
            discarded=tuple(d["decision"]["discarded"]),
            bounds=d.get("bounds", {}),
        )


def _check_index_set(indices, m, what):
    indices = tuple(sorted(int(i) for i in indices))
    if not indices:
        raise InvalidInputError(f"{what} index set must be nonempty")
    if len(set(indices)) != len(indices):
        raise InvalidInputError(f"{what} indices contain duplicates")
    if indices[0] < 0 or indices[-1] >= m:
        raise InvalidInputError(f"{what} indices out of range for dimension {m}")
    return indices


def explained_variance(eigen, eigenvector_indices):
    """Share of total variance carried by the given eigenvectors:
    sum of their eigenvalues over the sum of all eigenvalues."""
    m = eigen.dim
    indices = _check_index_set(eigenvector_indices, m, "eigenvector")
    total = float(eigen.values.sum())
    if total <= 0.0:
        raise InvalidInputError(f"total variance must be positive, got {total}")
    return float(eigen.values[list(indices)].sum()) / total


def contribution_measure(eigen, variable_indices, eigenvector_indices):
    """Variance contribution of a variable block, weighting every eigenvalue
    by the squared loadings of the block's variables.

    The eigenvector set only splits the sum into an own-block part and a
    leakage part; their total is sum_j lambda_j * sum_{i in vars} v_j[i]^2.
    """
    m = eigen.dim
    variables = _check_index_set(variable_indices, m, "variable")
    _check_index_set(eigenvector_indices, m, "eigenvector")
    total = float(eigen.values.sum())
    if total <= 0.0:
        raise InvalidInputError(f"total variance must be positive, got {total}")
    squared = eigen.vectors[list(variables), :] ** 2  # (|vars|, M)
    return float((eigen.values * squared.sum(axis=0)).sum()) / total


def detect_blocks(eigen, tau):
    """Match eigenvectors to the variables they load on and extract square
    blocks.

    An eigenvector j loads on variable m iff |v_j[m]| >= tau.  Connected
    components of this bipartite graph with equally many eigenvectors and
    variables (and fewer than all variables) become candidates; eigenvectors
    with no loading at all are degenerate (possible only for
    tau > 1/sqrt(M)); components with mismatched counts are reported but
    yield no candidate.
    """
    if not 0.0 < tau < 1.0:
        raise InvalidInputError(f"tau must be in (0, 1), got {tau}")
    v = eigen.vectors
    m = eigen.dim
    loads = np.abs(v) >= tau  # loads[variable, eigenvector]

    degenerate = [j for j in range(m) if not loads[:, j].any()]

    # union-find over variables (0..m-1) and eigenvectors (m..2m-1)
    parent = list(range(2 * m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    for var, eigvec in zip(*np.nonzero(loads)):
        union(int(var), m + int(eigvec))

    groups = {}
    for var in range(m):
        groups.setdefault(find(var), [[], []])[0].append(var)
    for eigvec in range(m):
        groups.setdefault(find(m + eigvec), [[], []])[1].append(eigvec)

    candidates = []
    mismatched = []
    for variables, eigenvectors in groups.values():
        if not variables and len(eigenvectors) == 1 and eigenvectors[0] in degenerate:
            continue  # degenerate eigenvectors are reported separately
        if len(variables) == len(eigenvectors) and 0 < len(variables) < m:
            candidates.append(
                BlockCandidate(
                    variable_indices=tuple(variables),
                    eigenvector_indices=tuple(eigenvectors),
                    explained_variance=explained_variance(eigen, eigenvectors),
                    contribution_measure=contribution_measure(
                        eigen, variables, eigenvectors
                    ),
                )
            )
        else:
            mismatched.append((tuple(variables), tuple(eigenvectors)))
    candidates.sort(key=lambda c: c.variable_indices)
    mismatched.sort()
    return BlockDetection(
        candidates=candidates,
        degenerate_eigenvectors=degenerate,
        mismatched_components=mismatched,
    )


def _gap_diagnostics(eigen, candidates, tau):
    """Eigengap-based diagnostics: how much perturbation each candidate's
    eigenvectors can absorb before the sufficient detection bound fails."""
    per_eigenvector = []
    for candidate in candidates:
        for j in candidate.eigenvector_indices:
            gap = eigengap(eigen.values, j).min_gap
            per_eigenvector.append(
                {
                    "eigenvector": int(j),
                    "min_gap": float(gap),
                    "max_perturbation_norm": float(tau * gap / _BOUND_CONSTANT),
                }
            )
    return {"per_eigenvector": per_eigenvector}


def run_pla(cov, config):
    """Run the full analysis on a covariance matrix.

    Eigendecomposes, detects candidates at the configured cut-off, then
    greedily discards candidates in ascending order of their variance share
    while the retained share stays at or above retained_variance_min.
    """
    eig = sym_eigen(cov)
    if eig.dim < 2:
        raise InvalidInputError("need at least 2 variables")

    detection = detect_blocks(eig, config.tau)

    def share(candidate):
        if config.use_contribution_measure:
            return candidate.contribution_measure
        return candidate.explained_variance

    budget = 1.0 - config.retained_variance_min
    order = sorted(detection.candidates, key=lambda c: (share(c), c.variable_indices))
    spent = 0.0
    discard_vars = set()
    discardable_keys = set()
    for candidate in order:
        if spent + share(candidate) > budget:
            break  # ascending order: every later candidate costs at least as much
        spent += share(candidate)
        discard_vars.update(candidate.variable_indices)
        discardable_keys.add(candidate.variable_indices)

    candidates = [
        replace(c, discardable=c.variable_indices in discardable_keys)
        for c in detection.candidates
    ]
    discarded = tuple(sorted(discard_vars))
    kept = tuple(i for i in range(eig.dim) if i not in discard_vars)

    return PlaReport(
        eigen=eig,
        candidates=candidates,
        degenerate_eigenvectors=detection.degenerate_eigenvectors,
        mismatched_components=detection.mismatched_components,
        config=config,
        kept=kept,
        discarded=discarded,
        bounds=_gap_diagnostics(eig, candidates, config.tau),
    )
