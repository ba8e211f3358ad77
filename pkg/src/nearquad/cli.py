"""Command-line interface: rule generation, integration, validation, sweeps.

Exit codes: 0 success, 2 usage error, 3 rejected field point (on-element
configuration), 4 I/O error, 5 validation failure.
"""

import argparse
import json
import math
import os
import sys
import tempfile

from .errors import (
    ContractViolationError,
    NearquadError,
    SingularConfigurationError,
    ValidationFailureError,
)
from .experiments import (
    DEFAULT_THETA_COUNT,
    SweepConfig,
    audit_moment_formulas,
    pointwise_error_curves,
    table_csv,
    theta_grid,
)
from .moments import KernelKind, FieldPoint, power_moments
from .rulegen import (
    RESIDUAL_WARN_THRESHOLD,
    RuleSpec,
    apply_rule,
    generate_rule,
    rule_to_dict,
    serialize_rule,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4
EXIT_VALIDATION = 5

THREADS_ENV_VAR = "NEARQUAD_THREADS"

_KERNELS = {k.value: k for k in KernelKind}


def _add_point_arguments(parser):
    parser.add_argument("--x", type=float, help="field point abscissa")
    parser.add_argument("--y", type=float, help="field point ordinate")
    parser.add_argument("--R", type=float, help="field point distance (with --theta)")
    parser.add_argument("--theta", type=float,
                        help="field point angle in radians (with --R)")


def _add_rule_size_arguments(parser, n_default=None, m_default=None):
    parser.add_argument("-N", "--nodes", dest="N", type=int, default=n_default,
                        required=n_default is None, help="number of quadrature nodes")
    parser.add_argument("-M", "--order", dest="M", type=int, default=m_default,
                        required=m_default is None,
                        help="polynomial order bound per kernel block")


def _resolve_point(parser, args):
    """Field point from --x/--y or --R/--theta; usage errors exit 2."""
    cartesian = args.x is not None or args.y is not None
    polar = args.R is not None or args.theta is not None
    if cartesian and polar:
        parser.error("give either --x/--y or --R/--theta, not both")
    if cartesian:
        if args.x is None or args.y is None:
            parser.error("--x and --y must be given together")
        return FieldPoint(args.x, args.y)
    if polar:
        if args.R is None or args.theta is None:
            parser.error("--R and --theta must be given together")
        return FieldPoint.from_polar(args.R, args.theta)
    parser.error("a field point is required: --x/--y or --R/--theta")


def _sweep_threads(parser):
    """Parallelism cap from the NEARQUAD_THREADS environment variable."""
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return None
    try:
        threads = int(raw)
    except ValueError:
        threads = 0
    if threads < 1:
        parser.error(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
    return threads


def _write_atomic(path, text):
    """Write output in one shot: temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".nearquad-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def _emit(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        _write_atomic(path, text)


def _cmd_rule(parser, args):
    point = _resolve_point(parser, args)
    spec = RuleSpec(point=point, N=args.N, M=args.M)
    rule = generate_rule(spec)
    if rule.residual_warning:
        print(
            f"warning: moment residual {rule.residual_norm:.3e} exceeds "
            f"{RESIDUAL_WARN_THRESHOLD:.0e}; rule may be unreliable",
            file=sys.stderr,
        )
    if args.format == "structured":
        sys.stdout.write(json.dumps(rule_to_dict(rule), indent=2) + "\n")
    else:
        sys.stdout.write(serialize_rule(rule))
    return EXIT_OK


def _cmd_integrate(parser, args):
    point = _resolve_point(parser, args)
    spec = RuleSpec(point=point, N=args.N, M=args.M)
    rule = generate_rule(spec)
    kernel = _KERNELS[args.kernel]
    n = args.degree
    exact = power_moments(kernel, point, n + 1)[n]
    x, y = point.x, point.y

    def integrand(t):
        D = (x - t) ** 2 + y * y
        u = {
            KernelKind.UNIT: 1.0,
            KernelKind.LOG: 0.5 * math.log(D),
            KernelKind.INV_R: D ** -0.5,
            KernelKind.INV_R2: 1.0 / D,
        }[kernel]
        return t ** n * u

    estimate = apply_rule(rule, integrand)
    rel = abs(estimate - exact) / max(abs(exact), 1e-30)
    print(f"estimate {estimate:.17g}")
    print(f"exact {exact:.17g}")
    print(f"rel_error {rel:.17g}")
    return EXIT_OK


def _cmd_check(parser, args):
    if args.tolerance <= 0:
        parser.error("--tolerance must be positive")
    report = audit_moment_formulas(
        tolerance=args.tolerance,
        max_degree=args.max_degree,
        corrupt_seed=args.corrupt_seed,
    )
    worst = report.worst
    print(
        f"checked {report.checks} moments; worst: kernel={worst.kernel.value} "
        f"n={worst.n} x={worst.x:.17g} y={worst.y:.17g} "
        f"rel_error={worst.rel_error:.3e}"
    )
    if not report.passed:
        for entry in report.failures[:10]:
            print(
                f"FAIL kernel={entry.kernel.value} n={entry.n} "
                f"x={entry.x:.17g} y={entry.y:.17g} rel_error={entry.rel_error:.3e}",
                file=sys.stderr,
            )
        print(
            f"{len(report.failures)} of {report.checks} moment checks exceeded "
            f"tolerance {report.tolerance:g}",
            file=sys.stderr,
        )
        return EXIT_VALIDATION
    print(f"all checks within tolerance {report.tolerance:g}")
    return EXIT_OK


def _cmd_table(parser, args):
    text = table_csv(args.which, threads=_sweep_threads(parser))
    _emit(args.out, text)
    return EXIT_OK


def _cmd_sweep(parser, args):
    config = SweepConfig(
        N=args.N,
        M=args.M,
        R_values=tuple(args.R),
        theta_values=theta_grid(args.theta_count),
        n_values=(0,),
        kernel=_KERNELS[args.kernel],
    )
    report = pointwise_error_curves(config, threads=_sweep_threads(parser))
    _emit(args.out, report.to_csv())
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nearquad",
        description="Quadrature rules for near-singular and near-hypersingular "
                    "integrands on [-1, 1].",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rule = sub.add_parser("rule", help="generate a quadrature rule")
    _add_point_arguments(p_rule)
    _add_rule_size_arguments(p_rule)
    p_rule.add_argument("--format", choices=("text", "structured"), default="text",
                        help="output format (default: text)")
    p_rule.set_defaults(handler=_cmd_rule)

    p_int = sub.add_parser("integrate",
                           help="integrate a reference integrand t^n u(t) with a rule")
    _add_point_arguments(p_int)
    _add_rule_size_arguments(p_int)
    p_int.add_argument("--kernel", choices=sorted(_KERNELS), required=True,
                       help="weighting function u(t)")
    p_int.add_argument("--degree", type=int, default=0,
                       help="monomial degree n (default: 0)")
    p_int.set_defaults(handler=_cmd_integrate)

    p_check = sub.add_parser("check",
                             help="audit the closed-form moments against the "
                                  "adaptive reference integrator")
    p_check.add_argument("--tolerance", type=float, default=1e-9,
                         help="relative tolerance (default: 1e-9; values below "
                              "1e-12 exceed attainable accuracy and are expected "
                              "to fail)")
    p_check.add_argument("--max-degree", type=int, default=31,
                         help="highest moment order checked (default: 31)")
    p_check.add_argument("--corrupt-seed", action="store_true",
                         help="negative control: perturb one seed so the audit "
                              "must fail")
    p_check.set_defaults(handler=_cmd_check)

    p_table = sub.add_parser("table", help="reproduce an RMS error table as CSV")
    p_table.add_argument("which", type=int, choices=(1, 2),
                         help="1: N=16, M=4 (degrees 0-3); 2: N=64, M=16 "
                              "(degrees 0,3,...,15)")
    p_table.add_argument("--out", default="-",
                         help="output path (default: stdout)")
    p_table.set_defaults(handler=_cmd_table)

    p_sweep = sub.add_parser("sweep",
                             help="pointwise error curves for one kernel over an "
                                  "(R, theta) grid")
    p_sweep.add_argument("--kernel", choices=("log", "invr", "invr2"),
                         required=True, help="weighting function u(t)")
    _add_rule_size_arguments(p_sweep, n_default=16, m_default=4)
    p_sweep.add_argument("--R", type=float, action="append",
                         help="field point distance; repeat for several "
                              "(default: 0.5 and 2)")
    p_sweep.add_argument("--theta-count", type=int, default=DEFAULT_THETA_COUNT,
                         help="number of theta samples (default: 16)")
    p_sweep.add_argument("--out", default="-",
                         help="output path (default: stdout)")
    p_sweep.set_defaults(handler=_cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "R", None) is None and args.command == "sweep":
        args.R = [0.5, 2.0]
    try:
        return args.handler(parser, args)
    except SingularConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValidationFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ContractViolationError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NearquadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
