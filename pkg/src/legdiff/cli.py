"""Command-line front end: differentiate, experiment, convergence, basis.

Exit codes: 0 success, 1 runtime or data error, 2 usage error (bad flags,
unknown preset, or a parameter set violating the method's hypotheses).  All
output is deterministic: repeated runs with identical flags and seeds produce
byte-identical CSVs.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .basis import eval_phi_table
from .coeffs import exact_coeffs, load_csv
from .derivative import phi_derivative_coeffs
from .experiments import (
    PRESET_NAMES,
    builtin_function,
    convergence_sweep,
    get_preset,
    rows_to_csv,
    run_table,
)
from .method import ConfigError, MethodConfig, run
from .metrics import error_report
from .noise import NoiseSpec, perturb

__all__ = ["main"]


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return value


def _delta_range(text: str) -> tuple[float, ...]:
    """Parse 'start:end:count' into a geometric grid of noise levels."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected start:end:count")
    try:
        start, end = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError("expected start:end:count with numeric parts")
    if start <= 0.0 or end <= 0.0:
        raise argparse.ArgumentTypeError("noise levels must be positive")
    if count < 2:
        raise argparse.ArgumentTypeError("count must be at least 2")
    return tuple(float(d) for d in np.geomspace(start, end, count))


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="legdiff",
        description=(
            "Stable recovery of high-order mixed derivatives from noisy "
            "Fourier-Legendre coefficients by truncated series differentiation."
        ),
    )
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--threads",
        type=_positive_int,
        default=1,
        help=(
            "cap on worker parallelism; execution is currently single-process, "
            "so this flag is advisory and results never depend on it"
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_diff = sub.add_parser(
        "differentiate",
        parents=[shared],
        help="recover the mixed derivative of order (r, r) and evaluate it on a grid",
    )
    source = p_diff.add_mutually_exclusive_group(required=True)
    source.add_argument("--coeffs", help="coefficient CSV (k,j,value) to consume")
    source.add_argument(
        "--builtin", choices=("f1", "f2"), help="use a bundled test function"
    )
    p_diff.add_argument("--r", type=_positive_int, default=2, help="derivative order per axis")
    p_diff.add_argument("--mu", type=float, required=True, help="smoothness exponent of the data class")
    p_diff.add_argument("--s", type=float, default=2.0, help="coefficient-norm exponent")
    p_diff.add_argument("--p", type=float, default=2.0, help="noise-norm exponent (inf allowed)")
    p_diff.add_argument("--delta", type=float, default=0.0, help="noise level")
    p_diff.add_argument("--n", type=_positive_int, default=None, help="truncation level override")
    p_diff.add_argument("--constant", type=float, default=1.0, help="parameter-rule constant")
    p_diff.add_argument("--domain", choices=("cross", "box"), default="cross", help="index-set shape")
    p_diff.add_argument(
        "--noise", choices=("none", "gaussian", "projected"), default="none",
        help="perturb the consumed coefficients before running",
    )
    p_diff.add_argument("--seed", type=_nonnegative_int, default=0, help="noise seed")
    p_diff.add_argument("--grid", type=_positive_int, default=41, help="evaluation grid size per axis")
    p_diff.add_argument("--out", help="write the grid CSV here instead of stdout")
    p_diff.set_defaults(func=cmd_differentiate)

    p_exp = sub.add_parser(
        "experiment",
        parents=[shared],
        help="rerun a pinned experiment preset and emit its result table",
    )
    p_exp.add_argument("--preset", choices=PRESET_NAMES, required=True)
    p_exp.add_argument(
        "--seeds", type=_positive_int, default=None,
        help="seed count for stochastic presets (default: preset's own)",
    )
    p_exp.add_argument("--out", help="write the table CSV here instead of stdout")
    p_exp.set_defaults(func=cmd_experiment)

    p_conv = sub.add_parser(
        "convergence",
        parents=[shared],
        help="sweep noise levels and fit the empirical error-vs-noise slope",
    )
    p_conv.add_argument("--builtin", choices=("f1", "f2"), required=True)
    p_conv.add_argument("--mu", type=float, required=True)
    p_conv.add_argument("--r", type=_positive_int, default=2)
    p_conv.add_argument("--s", type=float, default=2.0)
    p_conv.add_argument("--p", type=float, default=2.0)
    p_conv.add_argument(
        "--deltas", type=_delta_range, required=True,
        help="geometric noise grid as start:end:count, e.g. 1e-5:1e-9:5",
    )
    p_conv.add_argument("--seeds", type=_positive_int, default=10)
    p_conv.add_argument(
        "--noise", choices=("projected", "gaussian", "none"), default="projected"
    )
    p_conv.add_argument("--constant", type=float, default=1.0)
    p_conv.add_argument("--domain", choices=("cross", "box"), default="cross")
    p_conv.add_argument("--out", help="write per-run rows here instead of stdout")
    p_conv.set_defaults(func=cmd_convergence)

    p_basis = sub.add_parser(
        "basis",
        parents=[shared],
        help="sample one basis function's derivative on a grid (debug aid)",
    )
    p_basis.add_argument("--k", type=_nonnegative_int, required=True, help="basis degree")
    p_basis.add_argument("--r", type=_nonnegative_int, default=0, help="derivative order")
    p_basis.add_argument("--grid", type=_positive_int, default=101, help="grid size")
    p_basis.add_argument("--out", help="write the sample CSV here instead of stdout")
    p_basis.set_defaults(func=cmd_basis)
    return parser


def cmd_differentiate(args: argparse.Namespace) -> int:
    config = MethodConfig(
        r=args.r,
        mu=args.mu,
        delta=args.delta,
        s=args.s,
        p=args.p,
        n_override=args.n,
        rule_constant=args.constant,
        domain_shape=args.domain,
    )
    n = config.resolve_n()
    print(f"n={n}", file=sys.stderr)
    domain = config.domain()
    deg_t, deg_tau = domain.max_degree()
    if args.builtin is not None:
        function = builtin_function(args.builtin)
        base = exact_coeffs(
            function, deg_t, deg_tau, G=2 * max(deg_t, deg_tau) + 16
        )
    else:
        function = None
        base = load_csv(args.coeffs)
    field = base.restrict(domain.members())
    if args.noise != "none":
        if not 0.0 < args.delta < 1.0:
            print("error: --noise requires 0 < --delta < 1", file=sys.stderr)
            return 2
        field = perturb(
            field,
            NoiseSpec(kind=args.noise, delta=args.delta, p=args.p, seed=args.seed),
        )
    approx = run(field, config)

    grid = np.linspace(-1.0, 1.0, args.grid)
    values = approx.series.eval_grid(grid, grid)
    lines = ["t,tau,value"]
    for i in range(args.grid):
        for j in range(args.grid):
            lines.append(
                f"{float(grid[i])!r},{float(grid[j])!r},{float(values[i, j])!r}"
            )
    _write_text(args.out, "\n".join(lines) + "\n")

    if function is not None and function.d22 is not None and args.r == 2:
        series_field = approx.series.field
        metric_G = max(96, 2 * max(series_field.k_max, series_field.j_max) + 8)
        report = error_report(approx, function.derivative_function(), G=metric_G)
        print(f"card={report.information_count}", file=sys.stderr)
        print(f"l2_error={report.l2_error!r}", file=sys.stderr)
        print(f"sup_error={report.sup_error!r}", file=sys.stderr)
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    preset = get_preset(args.preset)
    rows = run_table(preset, seeds=args.seeds)
    _write_text(args.out, rows_to_csv(rows))
    return 0


def cmd_convergence(args: argparse.Namespace) -> int:
    result = convergence_sweep(
        builtin_function(args.builtin),
        mu=args.mu,
        r=args.r,
        s=args.s,
        p=args.p,
        deltas=args.deltas,
        seeds=args.seeds,
        noise_kind=args.noise,
        rule_constant=args.constant,
        domain_shape=args.domain,
    )
    _write_text(args.out, rows_to_csv(result.rows))
    print(
        f"fitted_slope={result.fitted_slope!r} "
        f"theoretical_exponent={result.theoretical_exponent!r}"
    )
    return 0


def cmd_basis(args: argparse.Namespace) -> int:
    coeffs = phi_derivative_coeffs(args.k, args.r)
    grid = np.linspace(-1.0, 1.0, args.grid)
    if coeffs.size == 0:
        values = np.zeros(args.grid, dtype=np.float64)
    else:
        values = coeffs @ eval_phi_table(coeffs.size - 1, grid)
    lines = ["t,value"]
    lines.extend(f"{float(t)!r},{float(v)!r}" for t, v in zip(grid, values))
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
