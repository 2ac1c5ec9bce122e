from __future__ import annotations

import math

import pytest

from capheat.errors import DivergentAtOne, GammaPole, ParameterPole
from capheat.legendre_asymptotics import chi, omega_structures
from capheat.special_eval import (
    AngleParams,
    EvalPrecision,
    c1,
    c2,
    c3,
    c4,
    f_total,
    gauss_2f1,
    recip_gamma,
)

SQRT_PI = math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------


def c1_double_series(theta0: float, d_minus_n: float, tol: float = 1e-15) -> float:
    """Double-series form of the leading angular factor.

    (1/sqrt(pi)) sum_k (2k)!/(2^{2k} (k!)^2)
        sum_j Gamma(j+k+1/2) Gamma(q+j) / (Gamma(j+1) Gamma(q))
            * sin^{2j+2k} * prod_{i=1}^{j+k} 2/(d_minus_n + 2i),
    with q = (d_minus_n - 1)/2.  Summed by shells in m = j + k with all terms
    in log space (the raw Gammas overflow long before convergence).
    """
    q = 0.5 * (d_minus_n - 1.0)
    log_sin2 = 2.0 * math.log(math.sin(theta0))
    total = 0.0
    quiet = 0
    for m in range(0, 4000):
        shell = 0.0
        # prod_{i=1}^{m} 2/(d_minus_n+2i) in log space
        log_prod = sum(
            math.log(2.0 / (d_minus_n + 2.0 * i)) for i in range(1, m + 1)
        )
        for k in range(0, m + 1):
            j = m - k
            log_term = (
                math.lgamma(2 * k + 1)
                - 2 * k * math.log(2.0)
                - 2.0 * math.lgamma(k + 1)
                + math.lgamma(j + k + 0.5)
                + math.lgamma(q + j)
                - math.lgamma(j + 1.0)
                - math.lgamma(q)
                + m * log_sin2
                + log_prod
            )
            shell += math.exp(log_term)
        total += shell
        if shell < tol * total:
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
    return total / SQRT_PI


def c4_direct_series(i, structure, angle, d_minus_n, tol=1e-15):
    """Alternating-series form of the mixed angular factor (the unrewritten
    hypergeometric): per (j, b) family,

    Gamma(A+b+j)/(Gamma(A) Gamma(b+i/2))
        * sum_r (-1)^r Gamma(r+b+i/2)/Gamma(r+b+j+i/2)
              cos^{2r} prod_{l<r}(s-l) / r!.
    """
    s = 0.5 * d_minus_n
    big_a = s + 0.5 * i
    total = 0.0
    for j in range(1, i + 1):
        for b in range(chi(i), i + 1):
            z = structure.z_coeffs[(b, j)]
            if z == 0:
                continue
            zt = float(z) * angle.cos_theta ** (i + 2 * b)
            pref = math.gamma(big_a + b + j) / (
                math.gamma(big_a) * math.gamma(b + 0.5 * i)
            )
            beta = b + 0.5 * i
            term = math.gamma(beta) / math.gamma(beta + j)
            inner = term
            r = 0
            while True:
                term *= (
                    -(s - r) * angle.cos2 * (r + beta) / ((r + beta + j) * (r + 1.0))
                )
                inner += term
                r += 1
                if term == 0.0 or (abs(term) < tol * abs(inner) and r > s):
                    break
                if r > 200_000:
                    raise AssertionError("oracle series failed to converge")
            total += zt * pref * inner
    return angle.sin_theta ** (-d_minus_n) * total


def bessel_limit_weight(i, structure, d_minus_n):
    """Cone-limit value of the order-i angular weight (cos -> 1 in the
    gamma-free family; the other families cancel by the sum rule)."""
    big_a = 0.5 * (d_minus_n + i)
    return sum(
        float(c)
        * math.gamma(big_a + b)
        / (math.gamma(big_a) * math.gamma(b + 0.5 * i))
        for b, c in structure.x_coeffs.items()
        if c != 0
    )


# ---------------------------------------------------------------------------
# gauss_2f1
# ---------------------------------------------------------------------------


class TestGauss2F1:
    def test_at_zero(self):
        assert gauss_2f1(0.7, -1.3, 2.4, 0.0) == 1.0

    def test_log_closed_form(self):
        assert gauss_2f1(1.0, 1.0, 2.0, 0.5) == pytest.approx(
            2.0 * math.log(2.0), rel=1e-14
        )

    def test_gauss_summation_at_one(self):
        assert gauss_2f1(0.5, 1.5, 2.5, 1.0) == pytest.approx(
            0.75 * math.pi, rel=1e-14
        )

    def test_parameter_pole(self):
        with pytest.raises(ParameterPole):
            gauss_2f1(0.5, 0.5, 0.0, 0.3)
        with pytest.raises(ParameterPole):
            gauss_2f1(0.5, 0.5, -2.0, 0.3)

    def test_divergent_at_one(self):
        with pytest.raises(DivergentAtOne):
            gauss_2f1(0.5, 1.0, 1.5, 1.0)

    @pytest.mark.parametrize("a", [-2.5, 0.3, 1.7])
    @pytest.mark.parametrize("b", [0.4, 2.2])
    @pytest.mark.parametrize("c", [1.3, 3.7])
    @pytest.mark.parametrize("x", [0.1, 0.5, 0.8, 0.95])
    def test_against_scipy(self, a, b, c, x):
        scipy_special = pytest.importorskip("scipy.special")
        expected = float(scipy_special.hyp2f1(a, b, c, x))
        assert gauss_2f1(a, b, c, x) == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize("x", [0.3, 0.9])
    def test_terminating_series(self, x):
        scipy_special = pytest.importorskip("scipy.special")
        expected = float(scipy_special.hyp2f1(-3.0, 1.4, 2.2, x))
        assert gauss_2f1(-3.0, 1.4, 2.2, x) == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize(
        "a,b,c,x",
        [
            (0.5, 1.5, 2.5, 0.25),
            (-1.5, 2.0, 3.3, 0.6),
            (0.3, 0.7, 1.9, 0.85),
            (1.25, 2.5, 4.75, 0.5),
        ],
    )
    def test_symmetry_bit_for_bit(self, a, b, c, x):
        assert gauss_2f1(a, b, c, x) == gauss_2f1(b, a, c, x)

    @pytest.mark.parametrize(
        "a,b,c,x",
        [
            (0.3, 1.2, 2.75, 0.2),
            (0.3, 1.2, 2.75, 0.45),
            (0.6, 0.8, 2.9, 0.7),
            (0.25, 1.1, 3.15, 0.9),
        ],
    )
    def test_euler_identity(self, a, b, c, x):
        lhs = gauss_2f1(a, b, c, x)
        rhs = (1.0 - x) ** (c - a - b) * gauss_2f1(c - a, c - b, c, x)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_argument_near_one_stays_accurate(self):
        # connection branch vs the Gauss value one ulp away from x = 1
        near = gauss_2f1(0.5, 1.5, 2.5, 1.0 - 2.0**-52)
        assert near == pytest.approx(0.75 * math.pi, rel=1e-7)

    def test_precision_validation(self):
        with pytest.raises(ValueError):
            EvalPrecision(rel_tol=1e-3)
        with pytest.raises(ValueError):
            EvalPrecision(max_terms=10)


class TestRecipGamma:
    def test_poles_vanish(self):
        assert recip_gamma(0.0) == 0.0
        assert recip_gamma(-3.0) == 0.0

    def test_regular_values(self):
        assert recip_gamma(0.5) == pytest.approx(1.0 / SQRT_PI, rel=1e-15)
        assert recip_gamma(4.0) == pytest.approx(1.0 / 6.0, rel=1e-15)


# ---------------------------------------------------------------------------
# C functions
# ---------------------------------------------------------------------------


STRUCTS = omega_structures(9)


def structure(i):
    return STRUCTS[i - 1]


class TestC1:
    def test_angle_zero_limit(self):
        angle = AngleParams.from_theta0(1e-8)
        assert c1(angle, 4.0) == pytest.approx(1.0, abs=1e-12)

    def test_equator_gauss_value(self):
        angle = AngleParams.from_theta0(math.pi / 2)
        assert c1(angle, 3.0) == pytest.approx(0.75 * math.pi, rel=1e-14)

    @pytest.mark.parametrize("theta0", [0.3, 0.7, 1.2])
    @pytest.mark.parametrize("d_minus_n", [2.0, 3.0, 5.0])
    def test_against_double_series(self, theta0, d_minus_n):
        angle = AngleParams.from_theta0(theta0)
        oracle = c1_double_series(theta0, d_minus_n)
        assert abs(c1(angle, d_minus_n) - oracle) <= 1e-10


class TestC2:
    def test_equator_vanishes(self):
        angle = AngleParams.from_theta0(math.pi / 2)
        assert abs(c2(1, structure(1), angle, 2.0)) < 1e-15

    def test_hand_sum_order_one(self):
        theta0 = 0.5
        angle = AngleParams.from_theta0(theta0)
        ct = math.cos(theta0)
        expected = ct / (8.0 * SQRT_PI) - (5.0 / 8.0) * ct**3 / SQRT_PI
        assert c2(1, structure(1), angle, 2.0) == pytest.approx(expected, rel=1e-13)

    def test_b_range_of_order_two(self):
        assert set(structure(2).x_coeffs) == {0, 1, 2}


class TestC3:
    def test_order_one_single_term(self):
        angle = AngleParams.from_theta0(0.9)
        d_minus_n = 3.0
        s = 0.5 * d_minus_n
        expected = (
            math.sin(0.9) ** (-d_minus_n)
            * (1.0 / 24.0)
            * math.gamma(s + 1.0)
            / math.gamma(s + 0.5)
        )
        assert c3(1, structure(1), angle, d_minus_n) == pytest.approx(
            expected, rel=1e-13
        )

    def test_order_three_j1_constant_vanishes(self):
        assert structure(3).z0_coeffs[1] == 0

    def test_all_zero_constants_gives_zero(self):
        from fractions import Fraction
        from capheat.legendre_asymptotics import StructuredOmega

        s1 = structure(1)
        silenced = StructuredOmega(
            1, s1.x_coeffs, {1: Fraction(0)}, s1.z_coeffs
        )
        angle = AngleParams.from_theta0(0.8)
        assert c3(1, silenced, angle, 2.0) == 0.0


class TestC4:
    def test_equator_vanishes(self):
        angle = AngleParams.from_theta0(math.pi / 2)
        assert abs(c4(1, structure(1), angle, 2.0)) < 1e-15
        assert abs(c4(2, structure(2), angle, 3.0)) < 1e-15

    def test_order_one_index_ranges(self):
        s = structure(1)
        assert set(j for (_, j) in s.z_coeffs) == {1}
        assert set(b for (b, _) in s.z_coeffs) == {0, 1}

    @pytest.mark.parametrize(
        "i,d_minus_n,theta0",
        [
            (1, 2.0, 0.8),
            (2, 3.0, 0.8),
            (2, 2.0, 1.2),
            (3, 5.0, 0.6),
            (4, 3.0, 1.0),
        ],
    )
    def test_against_direct_series(self, i, d_minus_n, theta0):
        angle = AngleParams.from_theta0(theta0)
        oracle = c4_direct_series(i, structure(i), angle, d_minus_n)
        value = c4(i, structure(i), angle, d_minus_n)
        assert abs(value - oracle) <= 1e-10 * max(1.0, abs(oracle))


class TestFTotal:
    def test_is_sum_of_parts(self):
        angle = AngleParams.from_theta0(0.9)
        parts = (
            c2(2, structure(2), angle, 3.0)
            + c3(2, structure(2), angle, 3.0)
            + c4(2, structure(2), angle, 3.0)
        )
        assert f_total(2, structure(2), angle, 3.0) == parts

    def test_equator_order_one_value(self):
        # At the equator only the gamma-free-constant family survives:
        # F_1 = z0^{(1,1)} Gamma(s+1)/Gamma(s+1/2).
        angle = AngleParams.from_theta0(math.pi / 2)
        for d_minus_n in (1.0, 2.0, 4.0):
            s = 0.5 * d_minus_n
            expected = (1.0 / 24.0) * math.gamma(s + 1.0) / math.gamma(s + 0.5)
            assert f_total(1, structure(1), angle, d_minus_n) == pytest.approx(
                expected, rel=1e-12
            )

    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_finite_in_cone_limit(self, i):
        # The individually divergent families cancel through the sum rule.
        limit = bessel_limit_weight(i, structure(i), 3.0)
        for theta0 in (1e-3, 2e-3):
            angle = AngleParams.from_theta0(theta0)
            value = f_total(i, structure(i), angle, 3.0)
            assert math.isfinite(value)
            assert abs(value) <= 2.0 * (abs(limit) + 1.0)

    @pytest.mark.parametrize("i", range(1, 10))
    @pytest.mark.parametrize("theta0", [0.4, 1.0, 1.6, 2.0])
    def test_finite_on_grid(self, i, theta0):
        angle = AngleParams.from_theta0(theta0)
        for d_minus_n in range(1, 13):
            value = f_total(i, structure(i), angle, float(d_minus_n))
            assert math.isfinite(value)
            assert math.isfinite(c1(angle, float(d_minus_n)))


class TestAngleParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            AngleParams.from_theta0(0.0)
        with pytest.raises(ValueError):
            AngleParams.from_theta0(math.pi)
        with pytest.raises(ValueError):
            AngleParams(0.5, 0.9, 0.3)

    def test_consistency(self):
        angle = AngleParams.from_theta0(1.1)
        assert angle.sin2 + angle.cos2 == pytest.approx(1.0, abs=1e-15)
        assert angle.cos_theta == pytest.approx(math.cos(1.1), rel=1e-15)
