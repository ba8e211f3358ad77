"""Closed-form power moments of the four kernels and Legendre-moment conversion.

For a field point (x, y) off the element, with D(t) = (x - t)^2 + y^2,
the kernels are

    unit:        u(t) = 1
    log:         u(t) = log(D(t)) / 2
    inv_r:       u(t) = D(t)^(-1/2)
    inv_r2:      u(t) = D(t)^(-1)

and the power moments are J_n = integral of t^n u(t) over [-1, 1].
Every formula used here was re-derived by elementary calculus and is
pinned against an independent adaptive integrator in the test suite:

* inv_r2: complex recursion for F_n = int t^n/(t - z) dt with z = x + iy,
  F_0 = Log((1-z)/(-1-z)), F_n = c_n + z F_{n-1} where c_n = int t^{n-1} dt.
  Then J_n = Im(F_n)/y.  Equivalently, in real form,
  J_n = (1+(-1)^n)/(n-1) + 2x J_{n-1} - R^2 J_{n-2}, seeded with
  J_0 = (atan((1-x)/y) + atan((1+x)/y))/y  and  J_1 = log(Rp/Rm) + x J_0.
* inv_r: differentiating t^{n-1} sqrt(D) gives
  n J_n = (Rp + (-1)^n Rm) + (2n-1) x J_{n-1} - (n-1) R^2 J_{n-2},
  seeded with J_0 = asinh((1-x)/y) + asinh((1+x)/y) and
  J_1 = (Rp - Rm) + x J_0.
* log: integration by parts reduces to the inv_r2 family,
  J_n = [(log Rp + (-1)^n log Rm) - (I2_{n+2} - x I2_{n+1})] / (n+1).

Rp and Rm are the distances from the field point to the element
endpoints +1 and -1.  Forward recursion is stable only while R <= 1
(perturbations grow like R^n), so for R beyond FORWARD_RADIUS the
recursions are run backward from zero seeds placed far enough above the
requested order that the contamination has decayed below roundoff.
"""

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContractViolationError, OverflowRiskError, SingularConfigurationError

# |y| below this is treated as an on-element (principal value) configuration
SINGULAR_Y_THRESHOLD = 1e-14

# power moments are double-precision stable only up to n ~ 32
MAX_MOMENTS = 33

# forward recursion error growth R**n stays below ~1e2 for n <= 34 here
FORWARD_RADIUS = 1.125


class KernelKind(enum.Enum):
    """The four weighting functions a rule is fitted against."""

    UNIT = "unit"
    LOG = "log"
    INV_R = "invr"
    INV_R2 = "invr2"


# block order used everywhere a rule or moment vector is assembled
KERNEL_ORDER = (KernelKind.UNIT, KernelKind.LOG, KernelKind.INV_R, KernelKind.INV_R2)


@dataclass(frozen=True)
class FieldPoint:
    """Field point in element-local coordinates, y normalized to |y| > 0."""

    x: float
    y: float

    def __init__(self, x, y):
        x = float(x)
        y = abs(float(y))  # kernels depend on y^2 only
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ContractViolationError("field point coordinates must be finite")
        if y < SINGULAR_Y_THRESHOLD:
            raise SingularConfigurationError(
                f"|y| = {y:g} is below {SINGULAR_Y_THRESHOLD:g}: the on-element "
                "(Cauchy principal value / finite part) case is not supported"
            )
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_polar(cls, R, theta):
        """Build from distance R and angle theta (x = R cos(theta), y = R sin(theta))."""
        return cls(R * math.cos(theta), R * math.sin(theta))

    @property
    def R(self):
        return math.hypot(self.x, self.y)

    @property
    def theta(self):
        return math.atan2(self.y, self.x)

    @property
    def Rplus(self):
        """Distance to the element endpoint t = +1."""
        return math.hypot(self.x - 1.0, self.y)

    @property
    def Rminus(self):
        """Distance to the element endpoint t = -1."""
        return math.hypot(self.x + 1.0, self.y)


def kernel_values(kernel, point, t):
    """Evaluate the weighting function u(t) at the sample points t."""
    t = np.asarray(t, dtype=float)
    if kernel is KernelKind.UNIT:
        return np.ones_like(t)
    D = (point.x - t) ** 2 + point.y ** 2
    if kernel is KernelKind.LOG:
        return 0.5 * np.log(D)
    if kernel is KernelKind.INV_R:
        return 1.0 / np.sqrt(D)
    if kernel is KernelKind.INV_R2:
        return 1.0 / D
    raise ContractViolationError(f"unknown kernel {kernel!r}")


def _backward_pad(R):
    """Extra backward steps so seed contamination decays below roundoff."""
    return int(math.ceil(40.0 / math.log(R)))


def _poly_integral(n):
    """int_{-1}^{1} t^n dt."""
    return 2.0 / (n + 1) if n % 2 == 0 else 0.0


def _inv_square_moments(point, count):
    """J_n for the inverse-square kernel, n = 0..count-1 (no count cap)."""
    x, y = point.x, point.y
    z = complex(x, y)
    R = point.R
    if R <= FORWARD_RADIUS:
        F = np.empty(count, dtype=complex)
        F[0] = np.log((1.0 - z) / (-1.0 - z))
        for n in range(1, count):
            F[n] = _poly_integral(n - 1) + z * F[n - 1]
    else:
        top = count + _backward_pad(R)
        F = np.zeros(top + 1, dtype=complex)
        for n in range(top, 0, -1):
            F[n - 1] = (F[n] - _poly_integral(n - 1)) / z
        F = F[:count]
    return F.imag / y


def _inv_sqrt_moments(point, count):
    """J_n for the inverse-distance kernel, n = 0..count-1."""
    x, y = point.x, point.y
    R2 = x * x + y * y
    Rp, Rm = point.Rplus, point.Rminus
    R = point.R
    if R <= FORWARD_RADIUS:
        J = np.empty(max(count, 2))
        J[0] = math.asinh((1.0 - x) / y) + math.asinh((1.0 + x) / y)
        J[1] = (Rp - Rm) + x * J[0]
        for n in range(2, count):
            boundary = Rp + Rm if n % 2 == 0 else Rp - Rm
            J[n] = (boundary + (2 * n - 1) * x * J[n - 1] - (n - 1) * R2 * J[n - 2]) / n
        return J[:count]
    top = count + _backward_pad(R)
    J = np.zeros(top + 3)
    for n in range(top + 2, 1, -1):
        boundary = Rp + Rm if n % 2 == 0 else Rp - Rm
        J[n - 2] = (boundary + (2 * n - 1) * x * J[n - 1] - n * J[n]) / ((n - 1) * R2)
    return J[:count]


def _log_moments(point, count):
    """J_n for the logarithmic kernel, via the inverse-square family."""
    x = point.x
    lp, lm = math.log(point.Rplus), math.log(point.Rminus)
    i2 = _inv_square_moments(point, count + 2)
    J = np.empty(count)
    for n in range(count):
        boundary = lp + lm if n % 2 == 0 else lp - lm
        J[n] = (boundary - (i2[n + 2] - x * i2[n + 1])) / (n + 1)
    return J


def power_moments(kernel, point, count):
    """Power moments J_n = int t^n u(t) dt for n = 0..count-1.

    count is capped at MAX_MOMENTS: beyond n ~ 32 the recursions lose
    double-precision accuracy.
    """
    if count < 1:
        raise ContractViolationError("moment count must be positive")
    if count > MAX_MOMENTS:
        raise OverflowRiskError(
            f"moment count {count} exceeds the double-precision stability "
            f"bound {MAX_MOMENTS}"
        )
    if kernel is KernelKind.UNIT:
        J = np.array([_poly_integral(n) for n in range(count)])
    elif kernel is KernelKind.INV_R2:
        J = _inv_square_moments(point, count)
    elif kernel is KernelKind.INV_R:
        J = _inv_sqrt_moments(point, count)
    elif kernel is KernelKind.LOG:
        J = _log_moments(point, count)
    else:
        raise ContractViolationError(f"unknown kernel {kernel!r}")
    J.flags.writeable = False
    return J


def legendre_moments(J):
    """Convert power moments J_n to Legendre moments m_n = int P_n(t) u(t) dt.

    Inverts the triangular expansion of t^n in Legendre polynomials,

        t^{2n}   = P_0/(2n+1)     + sum_k A_{n,k} P_{2k},
        t^{2n+1} = 3 P_1/(2n+3)   + sum_k B_{n,k} P_{2k+1},

    where the positive O(1) coefficients follow the ratio recurrences
    A_{n,k} ~ (2n-2k+2)/(2n+2k+1) and B_{n,k} ~ (2n-2k+2)/(2n+2k+3).
    Solving forward for m_n keeps all intermediate quantities on the
    scale of the inputs; the division by the (small) diagonal
    coefficient happens once per order, which is what limits accuracy
    to n ~ 32 in double precision.
    """
    J = np.asarray(J, dtype=float)
    if J.ndim != 1 or J.size < 1:
        raise ContractViolationError("moment array must be one-dimensional and nonempty")
    if J.size > MAX_MOMENTS:
        raise OverflowRiskError(
            f"moment count {J.size} exceeds the double-precision stability "
            f"bound {MAX_MOMENTS}"
        )
    m = J.copy()
    top = J.size - 1
    for n in range(1, top // 2 + 1):
        two_n = 2 * n
        G = 1.0 / (two_n + 1)
        acc = G * m[0]
        for k in range(1, n):
            G *= (two_n - 2 * k + 2) / (two_n + 2 * k + 1)
            acc += (4 * k + 1) * G * m[2 * k]
        m[two_n] = (J[two_n] - acc) / (2.0 * G)
    for n in range(1, (top - 1) // 2 + 1):
        two_n = 2 * n
        H = 1.0 / (two_n + 3)
        acc = 3.0 * H * m[1]
        for k in range(1, n):
            H *= (two_n - 2 * k + 2) / (two_n + 2 * k + 3)
            acc += (4 * k + 3) * H * m[2 * k + 1]
        m[two_n + 1] = (J[two_n + 1] - acc) / (2.0 * H)
    m.flags.writeable = False
    return m


def legendre_coefficients(max_degree):
    """Exact monomial coefficients of P_0..P_max_degree as Fraction rows.

    Row n holds c_{n,0}..c_{n,n} with P_n(t) = sum_k c_{n,k} t^k.
    """
    rows = [[Fraction(1)]]
    if max_degree >= 1:
        rows.append([Fraction(0), Fraction(1)])
    for k in range(1, max_degree):
        prev, prev2 = rows[k], rows[k - 1]
        nxt = [Fraction(0)] * (k + 2)
        for j, c in enumerate(prev):
            nxt[j + 1] += Fraction(2 * k + 1, k + 1) * c
        for j, c in enumerate(prev2):
            nxt[j] -= Fraction(k, k + 1) * c
        rows.append(nxt)
    return rows[: max_degree + 1]


def legendre_moments_expansion(J):
    """Reference conversion path: m_n = sum_k c_{n,k} J_k in exact rational
    arithmetic, rounded once at the end.

    Mathematically identical to legendre_moments; kept as an independent
    implementation for cross-validation.  Note the unit-kernel
    orthogonality (m_n = 0 for n >= 1) holds only up to amplified input
    rounding on this path, which is why the triangular inversion is the
    production conversion.
    """
    J = np.asarray(J, dtype=float)
    if J.ndim != 1 or J.size < 1:
        raise ContractViolationError("moment array must be one-dimensional and nonempty")
    if J.size > MAX_MOMENTS:
        raise OverflowRiskError(
            f"moment count {J.size} exceeds the double-precision stability "
            f"bound {MAX_MOMENTS}"
        )
    exact_J = [Fraction(v) for v in J]
    rows = legendre_coefficients(J.size - 1)
    m = np.array(
        [float(sum(c * exact_J[k] for k, c in enumerate(row))) for row in rows]
    )
    m.flags.writeable = False
    return m


@dataclass(frozen=True)
class MomentSet:
    """Power and Legendre moments of one kernel at one field point."""

    kernel: KernelKind
    point: FieldPoint
    maxdeg: int
    J: np.ndarray
    m: np.ndarray


def moment_set(kernel, point, count):
    """Compute the full MomentSet for orders 0..count-1."""
    J = power_moments(kernel, point, count)
    m = legendre_moments(J)
    return MomentSet(kernel=kernel, point=point, maxdeg=count - 1, J=J, m=m)
