"""Error sweeps over field-point grids: deviation data, RMS error tables,
pointwise error curves, and the moments-versus-integrator audit."""

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, ValidationFailureError
from .moments import KERNEL_ORDER, FieldPoint, KernelKind, kernel_values, power_moments
from .oracle import oracle_integrate
from .rulegen import RuleSpec, generate_rule
from .special import gauss_legendre

DEFAULT_THETA_COUNT = 16

CSV_HEADER = "R,theta,n,eps_modified,eps_gauss,delta"
TABLE_HEADER = "R,n,eps_modified,eps_gauss"

TABLE_R_VALUES = (0.5, 1.0, 2.0)
TABLE_CONFIGS = {
    1: {"N": 16, "M": 4, "degrees": (0, 1, 2, 3)},
    2: {"N": 64, "M": 16, "degrees": (0, 3, 6, 9, 12, 15)},
}

# audit grid: 12 field points spanning near, grazing and far configurations
AUDIT_R_VALUES = (0.25, 0.5, 1.0, 2.0)
AUDIT_THETA_VALUES = (math.pi / 16, math.pi / 4, 7 * math.pi / 16)


def theta_grid(count=DEFAULT_THETA_COUNT):
    """count equispaced angles (2i+1)*pi/(4*count), spanning [pi/64, 31pi/64]
    symmetrically for the default count of 16."""
    if count < 1:
        raise ContractViolationError("theta sample count must be positive")
    return tuple((2 * i + 1) * math.pi / (4 * count) for i in range(count))


@dataclass(frozen=True)
class SweepConfig:
    """Grid of field points (R x theta) plus rule size and reference degrees."""

    N: int
    M: int
    R_values: tuple
    theta_values: tuple
    n_values: tuple
    kernel: KernelKind

    def __post_init__(self):
        object.__setattr__(self, "R_values", tuple(float(R) for R in self.R_values))
        object.__setattr__(self, "theta_values", tuple(float(t) for t in self.theta_values))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if not all(R > 0 for R in self.R_values):
            raise ContractViolationError("all R values must be positive")
        if not all(0 < t <= math.pi / 2 for t in self.theta_values):
            raise ContractViolationError("all theta values must lie in (0, pi/2]")
        if not all(n >= 0 for n in self.n_values):
            raise ContractViolationError("reference degrees must be nonnegative")


@dataclass(frozen=True)
class ErrorRow:
    """One grid point of an error sweep."""

    R: float
    theta: float
    n: int
    eps_modified: float
    eps_gauss: float
    delta: float


@dataclass(frozen=True)
class ErrorReport:
    """Sweep results ordered by (R, n, theta)."""

    rows: tuple

    def to_csv(self):
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        for r in self.rows:
            buf.write(
                f"{r.R:.17g},{r.theta:.17g},{r.n},"
                f"{r.eps_modified:.17g},{r.eps_gauss:.17g},{r.delta:.17g}\n"
            )
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines or lines[0] != CSV_HEADER:
            raise ContractViolationError("missing or malformed sweep CSV header")
        rows = []
        for line in lines[1:]:
            R, theta, n, e1, e2, d = line.split(",")
            rows.append(ErrorRow(float(R), float(theta), int(n),
                                 float(e1), float(e2), float(d)))
        return cls(rows=tuple(rows))


def weight_deviation(rule):
    """RMS difference between the rule's weights and the Gauss-Legendre weights
    for the same node count."""
    gauss = gauss_legendre(rule.spec.N)
    return float(np.sqrt(np.mean((rule.weights - gauss.weights) ** 2)))


def _reference_value(point, n):
    """Exact value of int t^n / ((x-t)^2 + y^2) dt from the closed forms."""
    return power_moments(KernelKind.INV_R2, point, n + 1)[n]


def _estimate_pair(rule, gauss, point, values_fn):
    """(modified estimate, plain Gauss estimate) for a vectorized integrand."""
    return (
        float(np.dot(rule.weights, values_fn(rule.nodes))),
        float(np.dot(gauss.weights, values_fn(gauss.nodes))),
    )


def rms_reference_error(config, n):
    """RMS relative error of both rules on int t^n / ((x-t)^2 + y^2) dt.

    The mean runs over every (R, theta) grid point of the config; table
    generation passes one R at a time.  Angles where the reference
    integral vanishes (odd n at theta = pi/2) are rejected since a
    relative error is undefined there.
    """
    rel_mod, rel_gauss = [], []
    gauss = gauss_legendre(config.N)
    for R in config.R_values:
        for theta in config.theta_values:
            point = FieldPoint.from_polar(R, theta)
            exact = _reference_value(point, n)
            if exact == 0.0:
                raise ContractViolationError(
                    f"reference integral vanishes at theta = {theta:g}; "
                    "excluded from relative-error sweeps"
                )
            rule = generate_rule(RuleSpec(point=point, N=config.N, M=config.M))
            x, y = point.x, point.y
            est1, est2 = _estimate_pair(
                rule, gauss, point, lambda t: t ** n / ((x - t) ** 2 + y * y)
            )
            rel_mod.append((est1 - exact) / exact)
            rel_gauss.append((est2 - exact) / exact)
    eps1 = float(np.sqrt(np.mean(np.square(rel_mod))))
    eps2 = float(np.sqrt(np.mean(np.square(rel_gauss))))
    return eps1, eps2


def _curve_row(config, gauss, R, theta):
    point = FieldPoint.from_polar(R, theta)
    rule = generate_rule(RuleSpec(point=point, N=config.N, M=config.M))
    exact = power_moments(config.kernel, point, 1)[0]
    est1, est2 = _estimate_pair(
        rule, gauss, point, lambda t: kernel_values(config.kernel, point, t)
    )
    return ErrorRow(
        R=R,
        theta=theta,
        n=0,
        eps_modified=abs((est1 - exact) / exact),
        eps_gauss=abs((est2 - exact) / exact),
        delta=weight_deviation(rule),
    )


def pointwise_error_curves(config, threads=None):
    """Per-(R, theta) relative error of both rules on the kernel's own
    degree-zero integrand, plus the weight deviation.

    Rows come back ordered by (R, n, theta) regardless of how the grid
    was evaluated; threads > 1 evaluates grid points concurrently.
    """
    if config.kernel not in (KernelKind.LOG, KernelKind.INV_R, KernelKind.INV_R2):
        raise ContractViolationError(
            "pointwise curves are defined for the log, inv_r and inv_r2 kernels"
        )
    gauss = gauss_legendre(config.N)
    grid = [(R, theta) for R in config.R_values for theta in config.theta_values]
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda p: _curve_row(config, gauss, *p), grid))
    else:
        rows = [_curve_row(config, gauss, R, theta) for R, theta in grid]
    rows.sort(key=lambda r: (r.R, r.n, r.theta))
    return ErrorReport(rows=tuple(rows))


def _spot_check_references(R_values, degrees, thetas, rel_tol=1e-8, samples=3):
    """Cross-audit a few closed-form reference values against the integrator."""
    rng = np.random.default_rng(20160309)
    grid = [(R, theta, n) for R in R_values for theta in thetas for n in degrees]
    for idx in rng.choice(len(grid), size=min(samples, len(grid)), replace=False):
        R, theta, n = grid[idx]
        point = FieldPoint.from_polar(R, theta)
        exact = _reference_value(point, n)
        x, y = point.x, point.y
        check = oracle_integrate(
            lambda t: t ** n / ((x - t) ** 2 + y * y), -1.0, 1.0, rel_tol=1e-11
        )
        if abs(check.value - exact) > rel_tol * max(abs(exact), 1e-30):
            raise ValidationFailureError(
                f"reference integral mismatch at R={R:g}, theta={theta:g}, n={n}: "
                f"closed form {exact!r} vs integrator {check.value!r}"
            )


def table_rows(which, theta_count=DEFAULT_THETA_COUNT, threads=None):
    """RMS error table rows (R, n, eps_modified, eps_gauss).

    Table 1 is the N=16, M=4 configuration with degrees 0..3; table 2 is
    N=64, M=16 with degrees 0, 3, ..., 15; both sweep R in {1/2, 1, 2}.
    A sample of the closed-form reference values is cross-checked
    against the adaptive integrator on every call.
    """
    if which not in TABLE_CONFIGS:
        raise ContractViolationError(f"table must be 1 or 2, got {which!r}")
    cfg = TABLE_CONFIGS[which]
    thetas = theta_grid(theta_count)
    _spot_check_references(TABLE_R_VALUES, cfg["degrees"], thetas)

    def one_cell(R_n):
        R, n = R_n
        config = SweepConfig(N=cfg["N"], M=cfg["M"], R_values=(R,),
                             theta_values=thetas, n_values=(n,),
                             kernel=KernelKind.INV_R2)
        eps1, eps2 = rms_reference_error(config, n)
        return (R, n, eps1, eps2)

    cells = [(R, n) for R in TABLE_R_VALUES for n in cfg["degrees"]]
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one_cell, cells))
    else:
        rows = [one_cell(c) for c in cells]
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def table_csv(which, theta_count=DEFAULT_THETA_COUNT, threads=None):
    """CSV text for table_rows, 17 significant digits per value."""
    lines = [TABLE_HEADER]
    for R, n, eps1, eps2 in table_rows(which, theta_count=theta_count, threads=threads):
        lines.append(f"{R:.17g},{n},{eps1:.17g},{eps2:.17g}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class AuditEntry:
    """One moment comparison against the reference integrator."""

    kernel: KernelKind
    n: int
    x: float
    y: float
    rel_error: float


@dataclass(frozen=True)
class AuditReport:
    """Outcome of the closed-form-versus-integrator moment audit."""

    checks: int
    worst: AuditEntry
    failures: tuple
    tolerance: float

    @property
    def passed(self):
        return not self.failures


def audit_moment_formulas(tolerance=1e-9, max_degree=31, grid=None,
                          corrupt_seed=False):
    """Compare every closed-form power moment against the adaptive integrator.

    Checks all four kernels for n = 0..max_degree over the field-point
    grid (default: the 12-point near/far grid).  corrupt_seed perturbs
    the zeroth inverse-square moment before comparison; it exists as a
    negative control so the audit's failure path stays tested.
    """
    if tolerance <= 0:
        raise ContractViolationError("tolerance must be positive")
    if grid is None:
        grid = [FieldPoint.from_polar(R, theta)
                for R in AUDIT_R_VALUES for theta in AUDIT_THETA_VALUES]
    oracle_tol = max(tolerance / 30.0, 1e-12)
    worst = None
    failures = []
    checks = 0
    for point in grid:
        for kernel in KERNEL_ORDER:
            J = power_moments(kernel, point, max_degree + 1)
            if corrupt_seed and kernel is KernelKind.INV_R2:
                J = J.copy()
                J[0] *= 1.0 + 1e-6
            for n in range(max_degree + 1):
                ref = oracle_integrate(
                    lambda t: t ** n * kernel_values(kernel, point, t),
                    -1.0, 1.0, rel_tol=oracle_tol,
                )
                rel = abs(J[n] - ref.value) / max(abs(ref.value), 1e-30)
                entry = AuditEntry(kernel=kernel, n=n, x=point.x, y=point.y,
                                   rel_error=rel)
                checks += 1
                if worst is None or rel > worst.rel_error:
                    worst = entry
                if rel > tolerance:
                    failures.append(entry)
    return AuditReport(checks=checks, worst=worst, failures=tuple(failures),
                       tolerance=tolerance)
