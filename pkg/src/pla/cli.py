"""Command-line interface.

Subcommands:
  analyze   run principal loading analysis on a CSV (raw data or covariance)
  simulate  type-I error study over a grid of cut-off values
  converge  empirical convergence rates of the sample estimates

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .analysis import PlaConfig, run_pla
from .covariance import DataMatrix, sample_covariance, to_correlation
from .exceptions import InvalidInputError, NumericalFailureError
from .linalg import check_symmetric
from .simulation import (
    BLOCK,
    EPSILON_BLOCK,
    SINGLES,
    SUBSAMPLE,
    ConvergenceStudy,
    DgpSpec,
    convergence_study,
    result_to_dict,
    results_table,
    run_type1_study,
)

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_NUMERICAL_FAILURE = 3

_DEFAULT_SEED = 0


def read_matrix(path, kind):
    """Read a CSV as raw data ('data') or as a covariance matrix ('cov').

    An optional header row is auto-detected (first row not fully numeric).
    Parse failures report the 1-based row and column.  Covariance input must
    be square and symmetric within 1e-8.
    """
    if kind not in ("data", "cov"):
        raise InvalidInputError(f"input kind must be 'data' or 'cov', got {kind!r}")
    try:
        with open(path, newline="") as fh:
            raw_rows = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    if not raw_rows:
        raise InvalidInputError(f"{path}: file contains no data")

    names = None
    start = 0
    try:
        [float(cell) for cell in raw_rows[0]]
    except ValueError:
        names = [cell.strip() for cell in raw_rows[0]]
        start = 1
        if len(raw_rows) == 1:
            raise InvalidInputError(f"{path}: header with no data rows")

    width = len(raw_rows[start])
    values = np.empty((len(raw_rows) - start, width))
    for i, row in enumerate(raw_rows[start:], start=start):
        if len(row) != width:
            raise InvalidInputError(
                f"{path}: row {i + 1} has {len(row)} cells, expected {width}"
            )
        for j, cell in enumerate(row):
            try:
                values[i - start, j] = float(cell)
            except ValueError:
                raise InvalidInputError(
                    f"{path}: row {i + 1}, column {j + 1}: "
                    f"not a number: {cell.strip()!r}"
                ) from None
    if not np.all(np.isfinite(values)):
        raise InvalidInputError(f"{path}: non-finite values in data")

    if kind == "data":
        return DataMatrix(values=values, names=names)
    if values.shape[0] != values.shape[1]:
        raise InvalidInputError(
            f"{path}: covariance must be square, got {values.shape}"
        )
    return check_symmetric(values, asym_tol=1e-8)


def _variable_labels(m, names):
    return names if names else [f"X{i + 1}" for i in range(m)]


def _render_text_report(report, labels, out):
    config = report.config
    eig = report.eigen
    print("Principal loading analysis", file=out)
    print(f"  variables: {eig.dim}   tau = {config.tau}   "
          f"retained variance floor = {config.retained_variance_min}", file=out)
    print("  eigenvalues (descending):", file=out)
    print("    " + "  ".join(f"{v:.4g}" for v in eig.values), file=out)

    print("\nStep 1 - structure check (loadings >= tau):", file=out)
    if not report.candidates:
        print("  no square blocks detected; nothing to consider", file=out)
    for c in report.candidates:
        vars_txt = ", ".join(labels[i] for i in c.variable_indices)
        eig_txt = ", ".join(str(j + 1) for j in c.eigenvector_indices)
        print(f"  block {{{vars_txt}}} represented by eigenvector(s) "
              f"{{{eig_txt}}}", file=out)
    if report.degenerate_eigenvectors:
        degen = ", ".join(str(j + 1) for j in report.degenerate_eigenvectors)
        print(f"  degenerate eigenvectors (all loadings below tau): {degen}",
              file=out)
    for vs, es in report.mismatched_components:
        vars_txt = ", ".join(labels[i] for i in vs) or "-"
        eig_txt = ", ".join(str(j + 1) for j in es) or "-"
        print(f"  mismatched component: variables {{{vars_txt}}} vs "
              f"eigenvectors {{{eig_txt}}} (no candidate)", file=out)

    print("\nStep 2 - variance accounting:", file=out)
    for c in report.candidates:
        vars_txt = ", ".join(labels[i] for i in c.variable_indices)
        print(f"  block {{{vars_txt}}}: explained variance "
              f"{c.explained_variance:.2%}, contribution measure "
              f"{c.contribution_measure:.2%}", file=out)

    print("\nStep 3 - decision:", file=out)
    if report.discarded:
        discarded = ", ".join(labels[i] for i in report.discarded)
        total = sum(
            c.explained_variance for c in report.candidates if c.discardable
        )
        print(f"  discard {{{discarded}}} "
              f"(retained variance {1.0 - total:.2%})", file=out)
    else:
        print("  no discardable candidates; keep all variables", file=out)
    kept = ", ".join(labels[i] for i in report.kept)
    print(f"  kept: {{{kept}}}", file=out)


def _cmd_analyze(args):
    loaded = read_matrix(args.file, args.input_kind)
    if args.input_kind == "data":
        if loaded.n_vars < 2:
            raise InvalidInputError("need at least 2 variables")
        names = loaded.names
        cov = sample_covariance(loaded)
    else:
        names = None
        cov = loaded
    if args.standardize:
        cov = to_correlation(cov)

    config = PlaConfig(
        tau=args.tau,
        retained_variance_min=args.retained_min,
        use_contribution_measure=args.contribution,
    )
    report = run_pla(cov, config)
    if args.json:
        json.dump(report.to_dict(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _render_text_report(report, _variable_labels(report.eigen.dim, names),
                            sys.stdout)
    return EXIT_OK


def _build_spec(args):
    if (args.k is None) == (args.kappa is None):
        raise InvalidInputError("exactly one of --k or --kappa is required")
    if args.k is not None:
        kind, k, kappa = SINGLES, args.k, 2
    else:
        kind = EPSILON_BLOCK if args.epsilon else BLOCK
        k, kappa = 1, args.kappa
    return DgpSpec(
        m=args.m,
        kind=kind,
        k=k,
        kappa=kappa,
        epsilon_scale=args.epsilon if args.epsilon else 0.1,
        population_size=args.population_size,
        sample_size=args.n,
        sampling=SUBSAMPLE if args.subsample else "direct_draw",
    )


def _cmd_simulate(args):
    spec = _build_spec(args)
    results = run_type1_study(spec, args.tau_grid, args.s, args.seed)
    if args.json:
        json.dump([result_to_dict(r) for r in results], sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        print(results_table(results))
    return EXIT_OK


def _cmd_converge(args):
    spec = DgpSpec(m=args.m, kind=SINGLES, k=args.k)
    study = convergence_study(spec, args.n_grid, args.s, args.seed)
    if args.json:
        json.dump(_study_to_dict(study), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _render_convergence(study, sys.stdout)
    return EXIT_OK


def _study_to_dict(study: ConvergenceStudy):
    return {
        "m": study.spec.m,
        "n_grid": list(study.n_grid),
        "replications": study.replications,
        "master_seed": study.master_seed,
        "mean_eigenvalue_error": list(study.mean_eigenvalue_error),
        "mean_eigenvector_error": list(study.mean_eigenvector_error),
        "mean_covariance_error": list(study.mean_covariance_error),
        "eigenvalue_slope": study.eigenvalue_slope,
        "eigenvector_slope": study.eigenvector_slope,
        "covariance_slope": study.covariance_slope,
        "degenerate": study.degenerate,
    }


def _render_convergence(study, out):
    print(f"Convergence study: M = {study.spec.m}, "
          f"S = {study.replications} replications per sample size", file=out)
    header = f"{'N':>8} {'eigval err':>12} {'eigvec err':>12} {'cov err':>12}"
    print(header, file=out)
    for i, n in enumerate(study.n_grid):
        print(f"{n:>8} {study.mean_eigenvalue_error[i]:>12.4e} "
              f"{study.mean_eigenvector_error[i]:>12.4e} "
              f"{study.mean_covariance_error[i]:>12.4e}", file=out)
    if study.degenerate:
        print("slopes undefined: some mean error is exactly zero", file=out)
    else:
        print(f"log-log slopes: eigenvalues {study.eigenvalue_slope:+.3f}, "
              f"eigenvectors {study.eigenvector_slope:+.3f}, "
              f"covariance entries {study.covariance_slope:+.3f}", file=out)


def _parse_tau_grid(text):
    """Comma-separated values, or 'a..b' for a grid in steps of 0.1."""
    text = text.strip()
    if ".." in text:
        lo_txt, hi_txt = text.split("..", 1)
        lo, hi = float(lo_txt), float(hi_txt)
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty tau range {text!r}")
        grid = []
        value = lo
        while value <= hi + 1e-9:
            grid.append(round(value, 10))
            value += 0.1
        return grid
    return [float(t) for t in text.split(",")]


def _parse_int_grid(text):
    return [int(n) for n in text.split(",")]


def _default_seed():
    env = os.environ.get("PLA_SEED")
    return int(env) if env else _DEFAULT_SEED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pla",
        description="Principal loading analysis: discard variables whose "
                    "covariance eigenvector loadings are uniformly small.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze a CSV file")
    analyze.add_argument("file")
    analyze.add_argument("--input-kind", choices=["data", "cov"],
                         required=True,
                         help="rows of observations, or a covariance matrix")
    analyze.add_argument("--tau", type=float, required=True,
                         help="loading cut-off in (0, 1)")
    analyze.add_argument("--retained-min", type=float, default=0.9,
                         help="minimum retained variance share (default 0.9)")
    analyze.add_argument("--standardize", action="store_true",
                         help="analyze the correlation matrix instead")
    analyze.add_argument("--contribution", action="store_true",
                         help="budget by the contribution measure")
    analyze.add_argument("--json", action="store_true")
    analyze.set_defaults(func=_cmd_analyze)

    simulate = sub.add_parser("simulate", help="type-I error study")
    simulate.add_argument("--m", type=int, required=True)
    simulate.add_argument("--k", type=int,
                          help="number of uncorrelated single variables")
    simulate.add_argument("--kappa", type=int,
                          help="size of the uncorrelated block")
    simulate.add_argument("--epsilon", type=float, default=0.0,
                          help="cross-covariance scale for a weakly "
                               "correlated block (with --kappa)")
    simulate.add_argument("--tau-grid", type=_parse_tau_grid,
                          default=[0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8],
                          help="comma list or 'a..b' (step 0.1)")
    simulate.add_argument("--s", type=int, required=True,
                          help="number of replications")
    simulate.add_argument("--n", type=int, default=10_000,
                          help="sample size per replication")
    simulate.add_argument("--population-size", type=int, default=100_000)
    simulate.add_argument("--subsample", action="store_true",
                          help="draw the sample from a simulated population "
                               "without replacement")
    simulate.add_argument("--seed", type=int, default=None)
    simulate.add_argument("--json", action="store_true")
    simulate.set_defaults(func=_cmd_simulate)

    converge = sub.add_parser("converge", help="convergence-rate study")
    converge.add_argument("--m", type=int, default=10)
    converge.add_argument("--k", type=int, default=1)
    converge.add_argument("--n-grid", type=_parse_int_grid, required=True,
                          help="comma-separated increasing sample sizes")
    converge.add_argument("--s", type=int, required=True)
    converge.add_argument("--seed", type=int, default=None)
    converge.add_argument("--json", action="store_true")
    converge.set_defaults(func=_cmd_converge)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None:
        args.seed = _default_seed()
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE


if __name__ == "__main__":
    sys.exit(main())
