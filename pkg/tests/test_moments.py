import math

import numpy as np
import pytest

from nearquad import (
    FieldPoint,
    KernelKind,
    OverflowRiskError,
    SingularConfigurationError,
    kernel_values,
    legendre_moments,
    legendre_moments_expansion,
    moment_set,
    oracle_integrate,
    power_moments,
)

UNIT_POINT = FieldPoint(0.0, 1.0)


class TestFieldPoint:
    def test_polar_construction(self):
        p = FieldPoint.from_polar(0.5, math.pi / 4)
        assert p.x == pytest.approx(0.5 * math.cos(math.pi / 4), abs=1e-16)
        assert p.y == pytest.approx(0.5 * math.sin(math.pi / 4), abs=1e-16)
        assert p.R == pytest.approx(0.5, rel=1e-15)
        assert p.theta == pytest.approx(math.pi / 4, rel=1e-15)

    def test_negative_y_mapped_to_magnitude(self):
        assert FieldPoint(0.3, -0.2) == FieldPoint(0.3, 0.2)

    def test_endpoint_distances(self):
        p = FieldPoint(0.25, 0.5)
        assert p.Rplus == pytest.approx(math.hypot(0.75, 0.5), rel=1e-15)
        assert p.Rminus == pytest.approx(math.hypot(1.25, 0.5), rel=1e-15)

    @pytest.mark.parametrize("y", [0.0, 1e-15, -9e-15])
    def test_on_element_rejected(self, y):
        with pytest.raises(SingularConfigurationError):
            FieldPoint(0.5, y)


class TestPowerMoments:
    def test_inv_r2_at_unit_point(self):
        J = power_moments(KernelKind.INV_R2, UNIT_POINT, 3)
        assert J[0] == pytest.approx(math.pi / 2, abs=1e-15)
        assert J[1] == pytest.approx(0.0, abs=1e-15)
        assert J[2] == pytest.approx(2.0 - math.pi / 2, abs=1e-15)

    def test_inv_r_at_unit_point(self):
        # frozen: 2*asinh(1) = 2*ln(1+sqrt(2)), checked against the adaptive
        # integrator before freezing
        J = power_moments(KernelKind.INV_R, UNIT_POINT, 2)
        assert J[0] == pytest.approx(1.762747174039086, abs=1e-14)
        assert J[1] == pytest.approx(0.0, abs=1e-15)

    def test_log_at_unit_point(self):
        # frozen: ln 2 - 2 + pi/2 from the atan antiderivative
        J = power_moments(KernelKind.LOG, UNIT_POINT, 1)
        assert J[0] == pytest.approx(0.26394350735484196, abs=1e-14)

    def test_unit_kernel(self):
        J = power_moments(KernelKind.UNIT, FieldPoint(0.7, 0.1), 3)
        assert J.tolist() == [2.0, 0.0, 2.0 / 3.0]

    def test_count_cap(self):
        with pytest.raises(OverflowRiskError):
            power_moments(KernelKind.LOG, UNIT_POINT, 34)

    def test_inv_r_seed_matches_log_form(self):
        # asinh seed equals ln((Rp + 1 - x)/(Rm - 1 - x))
        for (x, y) in ((0.3, 0.4), (-0.7, 0.02), (1.5, 0.3)):
            p = FieldPoint(x, y)
            J0 = power_moments(KernelKind.INV_R, p, 1)[0]
            ref = math.log((p.Rplus + 1.0 - x) / (p.Rminus - 1.0 - x))
            assert J0 == pytest.approx(ref, rel=1e-12)

    def test_inv_r2_seed_is_sum_of_arctangents(self):
        for (x, y) in ((0.3, 0.4), (0.9, 0.05), (-0.2, 1.3)):
            p = FieldPoint(x, y)
            J0 = power_moments(KernelKind.INV_R2, p, 1)[0]
            ref = (math.atan((1 - x) / y) + math.atan((1 + x) / y)) / y
            assert J0 == pytest.approx(ref, rel=1e-13)

    @pytest.mark.parametrize("kernel", list(KernelKind))
    @pytest.mark.parametrize("R", [0.25, 1.0, 2.0])
    def test_parity_at_x_zero(self, kernel, R):
        J = power_moments(kernel, FieldPoint(0.0, R), 32)
        scale = np.abs(J).max()
        assert np.abs(J[1::2]).max() <= 1e-13 * max(scale, 1.0)

    @pytest.mark.parametrize("kernel", list(KernelKind))
    @pytest.mark.parametrize(
        "R,theta",
        [(0.25, math.pi / 16), (0.5, math.pi / 4), (1.0, 7 * math.pi / 16),
         (2.0, math.pi / 16), (2.0, 7 * math.pi / 16)],
    )
    def test_against_adaptive_integrator(self, kernel, R, theta):
        # spot sample of the audit grid; the full 12-point sweep runs in the
        # acceptance suite
        point = FieldPoint.from_polar(R, theta)
        J = power_moments(kernel, point, 32)
        for n in (0, 1, 7, 20, 31):
            ref = oracle_integrate(
                lambda t: t ** n * kernel_values(kernel, point, t),
                -1.0, 1.0, rel_tol=1e-12,
            )
            assert abs(J[n] - ref.value) / max(abs(ref.value), 1e-30) < 1e-9

    @pytest.mark.parametrize("kernel", list(KernelKind))
    def test_forward_backward_consistency_at_switch(self, kernel):
        # the recursion direction changes at R = 1.125; adjacent floats on
        # either side must give matching moments
        lo = FieldPoint.from_polar(1.125, 0.3)
        hi = FieldPoint.from_polar(np.nextafter(1.125, 2.0), 0.3)
        J_lo = power_moments(kernel, lo, 32)
        J_hi = power_moments(kernel, hi, 32)
        assert np.allclose(J_lo, J_hi, rtol=1e-10, atol=1e-13)

    def test_all_finite_over_domain(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            x = rng.uniform(-10, 10)
            y = 10.0 ** rng.uniform(-8, 1)
            p = FieldPoint(x, y)
            for kernel in KernelKind:
                assert np.isfinite(power_moments(kernel, p, 33)).all(), (x, y, kernel)


class TestLegendreMoments:
    def test_unit_vector_example(self):
        m = legendre_moments([2.0, 0.0, 2.0 / 3.0])
        assert m.tolist() == [2.0, 0.0, 0.0]

    def test_inv_r2_second_moment(self):
        # frozen: (3 J2 - J0)/2 = 3 - pi at the unit point
        J = power_moments(KernelKind.INV_R2, UNIT_POINT, 3)
        m = legendre_moments(J)
        assert m[2] == pytest.approx(-0.14159265358979312, abs=1e-14)

    def test_first_two_orders_pass_through(self):
        m = legendre_moments([3.25, -1.5])
        assert m.tolist() == [3.25, -1.5]

    def test_unit_kernel_orthogonality_exact(self):
        J = power_moments(KernelKind.UNIT, UNIT_POINT, 33)
        m = legendre_moments(J)
        assert m[0] == 2.0
        assert np.abs(m[1:]).max() == 0.0

    def test_expansion_path_on_unit_vector(self):
        m = legendre_moments_expansion([2.0, 0.0, 2.0 / 3.0])
        assert m[0] == pytest.approx(2.0, abs=1e-15)
        assert abs(m[1]) <= 1e-15 and abs(m[2]) <= 1e-15

    @pytest.mark.parametrize("kernel", list(KernelKind))
    @pytest.mark.parametrize("R,theta", [(0.5, math.pi / 16), (2.0, math.pi / 4)])
    def test_paths_agree(self, kernel, R, theta):
        # the triangular inversion and the exact-rational expansion compute
        # the same linear map; the tolerance widens with the conversion's
        # intrinsic amplification kappa_n ~ 1/diagonal at high order
        point = FieldPoint.from_polar(R, theta)
        J = power_moments(kernel, point, 33)
        a = legendre_moments(J)
        b = legendre_moments_expansion(J)
        scale = max(np.abs(J).max(), 1.0)
        for n in range(33):
            kappa = 1.0 / abs(_diagonal_coefficient(n))
            tol = max(1e-12 * abs(b[n]), 6 * kappa * 2.0 ** -52 * scale)
            assert abs(a[n] - b[n]) <= tol, (kernel, n)

    def test_length_cap(self):
        with pytest.raises(OverflowRiskError):
            legendre_moments(np.zeros(34))
        with pytest.raises(OverflowRiskError):
            legendre_moments_expansion(np.zeros(34))

    def test_odd_moments_stay_zero_for_even_input(self):
        J = power_moments(KernelKind.INV_R2, FieldPoint(0.0, 0.5), 20)
        m = legendre_moments(J)
        assert np.abs(m[1::2]).max() <= 1e-13 * max(np.abs(m).max(), 1.0)


def _diagonal_coefficient(n):
    """Coefficient of P_n in the Legendre expansion of t^n: 2^n (n!)^2/(2n)!."""
    c = 1.0
    for k in range(1, n + 1):
        c *= 2.0 * k / (n + k)
    return c


def test_diagonal_coefficient_helper():
    # t^2 = (2/3) P_2 + ..., t^3 = (2/5) P_3 + ...
    assert _diagonal_coefficient(2) == pytest.approx(2.0 / 3.0, rel=1e-14)
    assert _diagonal_coefficient(3) == pytest.approx(2.0 / 5.0, rel=1e-14)


class TestMomentSet:
    def test_fields_consistent(self):
        ms = moment_set(KernelKind.LOG, UNIT_POINT, 5)
        assert ms.maxdeg == 4
        assert ms.J.shape == (5,) and ms.m.shape == (5,)
        assert ms.m[0] == ms.J[0]
        assert ms.m[1] == ms.J[1]

    def test_arrays_read_only(self):
        ms = moment_set(KernelKind.INV_R, UNIT_POINT, 4)
        with pytest.raises(ValueError):
            ms.J[0] = 1.0
        with pytest.raises(ValueError):
            ms.m[0] = 1.0
