import math

import numpy as np
import pytest

from cuetrunc import special
from cuetrunc.errors import DomainError


class TestTau:
    def test_zero_at_one(self):
        assert special.tau(1.0) == 0.0

    @pytest.mark.parametrize("lam", [0.5, 2.0])
    def test_direct_evaluation(self, lam):
        assert special.tau(lam) == pytest.approx(lam - 1.0 - math.log(lam), abs=1e-15)

    def test_series_branch_matches_direct(self):
        # straddle the series/direct switch at |lam-1| = 0.01
        for lam in [0.9905, 0.995, 1.0, 1.005, 1.0095, 1.02, 0.98]:
            direct = (lam - 1.0) - math.log1p(lam - 1.0)
            assert special.tau(lam) == pytest.approx(direct, rel=1e-12, abs=1e-18)

    def test_product_identity(self):
        # tau(s t) = tau(s) + tau(t) + (s-1)(t-1)
        rng = np.random.default_rng(42)
        for _ in range(200):
            s, t = rng.uniform(0.1, 3.0, size=2)
            lhs = special.tau(s * t)
            rhs = special.tau(s) + special.tau(t) + (s - 1.0) * (t - 1.0)
            assert abs(lhs - rhs) <= 1e-12

    def test_two_sided_quadratic_bounds(self):
        for lam in np.geomspace(1e-3, 1e3, 121):
            t = special.tau(float(lam))
            gap = (1.0 - lam) ** 2
            assert 0.5 * gap / max(1.0, lam) <= t + 1e-18
            assert t <= 0.5 * gap / min(1.0, lam) + 1e-15

    def test_sqrt_lower_bound(self):
        for lam in np.linspace(1e-6, 1.0 - 1e-6, 97):
            assert math.sqrt(special.tau(float(lam))) >= (1.0 - lam) / math.sqrt(2.0) - 1e-15

    def test_domain(self):
        for bad in (0.0, -1.0):
            with pytest.raises(DomainError):
                special.tau(bad)


class TestEta:
    def test_approaches_zero_from_below(self):
        values = [special.eta(1.0 - eps) for eps in (1e-2, 1e-4, 1e-6)]
        assert all(v < 0 for v in values)
        assert abs(values[2]) < abs(values[1]) < abs(values[0])

    def test_value_at_half(self):
        assert special.eta(0.5) == pytest.approx(-math.sqrt(2.0 * special.tau(0.5)), rel=1e-15)

    def test_magnitude_bracket_from_quadratic_bounds(self):
        # |eta| = sqrt(2 tau), with tau in [gap^2/2, gap^2/(2 lam)] for lam < 1
        lam = 0.9
        mag = abs(special.eta(lam))
        assert 0.1 <= mag <= 0.1 / math.sqrt(lam)

    def test_domain(self):
        for bad in (0.0, 1.0, 1.5, -0.2):
            with pytest.raises(DomainError):
                special.eta(bad)


class TestPhi:
    def test_at_one_is_gaussian_norm(self):
        for a in (0.5, 3.0, 8.0, 1e4):
            assert special.phi(a, 1.0) == pytest.approx(
                1.0 / math.sqrt(2.0 * math.pi * a), rel=1e-14)

    def test_value_a8(self):
        assert special.phi(8.0, 1.0) == pytest.approx(1.0 / math.sqrt(16.0 * math.pi), rel=1e-14)

    def test_log_domain_evaluation(self):
        # exponent ~ -193: the log value is exact even though phi underflows to ~1e-88
        got = special.log_phi(1000.0, 0.5)
        want = -1000.0 * special.tau(0.5) - 0.5 * math.log(2000.0 * math.pi)
        assert got == pytest.approx(want, abs=1e-10)
        assert special.phi(1000.0, 0.5) == pytest.approx(math.exp(want), rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            special.phi(0.0, 1.0)
        with pytest.raises(DomainError):
            special.phi(1.0, 0.0)
        with pytest.raises(DomainError):
            special.log_phi(-2.0, 0.5)


class TestGammaIncP:
    def test_exponential_cdf_anchor(self):
        assert special.gammainc_p(1.0, math.log(2.0)) == pytest.approx(0.5, rel=1e-14)

    def test_empty_integral(self):
        for a in (0.3, 1.0, 42.0):
            assert special.gammainc_p(a, 0.0) == 0.0

    def test_against_quadrature(self, quad):
        # brute-force oracle: integral of t^4 e^-t / Gamma(5) over [0, 5]
        want = quad(lambda t: t**4 * np.exp(-t) / math.gamma(5), 0.0, 5.0)
        assert special.gammainc_p(5.0, 5.0) == pytest.approx(want, rel=1e-13)

    @pytest.mark.parametrize("a", [0.5, 1.0, 7.3, 120.0, 1e4])
    def test_monotone_in_z(self, a):
        zs = np.linspace(0.0, 3.0 * a, 60)
        vals = [special.gammainc_p(a, float(z)) for z in zs]
        assert all(v2 >= v1 for v1, v2 in zip(vals, vals[1:]))
        assert 0.0 <= min(vals) and max(vals) <= 1.0

    def test_log_variant_matches(self):
        for a, z in [(3.0, 1.0), (200.0, 150.0), (200.0, 260.0), (1e5, 9e4)]:
            assert special.gammainc_p_log(a, z) == pytest.approx(
                math.log(special.gammainc_p(a, z)), abs=1e-11)

    def test_large_shape_far_tail_stays_finite_in_log(self):
        # P(1e4, 5e3) ~ e^-1931 underflows; the log stays usable
        lp = special.gammainc_p_log(1e4, 5e3)
        assert -2200.0 < lp < -1700.0
        assert special.gammainc_p(1e4, 5e3) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            special.gammainc_p(0.0, 1.0)
        with pytest.raises(DomainError):
            special.gammainc_p(2.0, -0.5)


class TestGammaIncPUniform:
    def test_relative_error_at_k1000(self):
        approx = special.gammainc_p_uniform(1000.0, 0.5)
        exact = special.gammainc_p(1000.0, 500.0)
        rel = abs(approx.value / exact - 1.0)
        assert rel <= 0.01
        assert rel <= approx.rel_error_bound

    def test_error_shrinks_with_shape(self):
        rels = []
        for k in (1e3, 1e4):
            diff = (special.gammainc_p_uniform_log(k, 0.5)
                    - special.gammainc_p_log(k, 0.5 * k))
            rels.append(abs(math.expm1(diff)))
        assert rels[1] < rels[0]

    def test_bound_blows_up_near_one_but_returns(self):
        k = 400.0
        lam = 1.0 - 0.5 / math.sqrt(k)  # sqrt(k)(1-lam) = 0.5, deep in the bad corner
        out = special.gammainc_p_uniform(k, lam)
        assert out.rel_error_bound > 1.0

    def test_uniformity_grid(self):
        # relative error within the bound everywhere; nonincreasing as the
        # standardized gap s = sqrt(k)(1-lam) grows at fixed k
        for k in (100.0, 1e3, 1e4):
            errs = []
            for s in (5.0, 10.0, 20.0):
                lam = 1.0 - s / math.sqrt(k)
                if not 0.0 < lam < 1.0:
                    continue
                approx = special.gammainc_p_uniform(k, lam)
                diff = (special.gammainc_p_uniform_log(k, lam)
                        - special.gammainc_p_log(k, k * lam))
                rel = abs(math.expm1(diff))
                assert rel <= approx.rel_error_bound
                errs.append(rel)
            assert all(b <= a * (1.0 + 1e-9) for a, b in zip(errs, errs[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            special.gammainc_p_uniform(-1.0, 0.5)
        with pytest.raises(DomainError):
            special.gammainc_p_uniform(10.0, 1.0)


class TestBetaInc:
    def test_beta_1_k_closed_form(self):
        for k in (1.0, 4.0, 40.0):
            for x in (0.1, 0.5, 0.9):
                assert special.betainc(x, 1.0, k) == pytest.approx(
                    -math.expm1(k * math.log1p(-x)), rel=1e-13)

    def test_symmetric_midpoint(self):
        assert special.betainc(0.5, 2.0, 2.0) == pytest.approx(0.5, rel=1e-14)

    def test_degree_seven_binomial_closed_form(self):
        # I_x(3, 5) = P(Binomial(7, x) >= 3), expanded exactly
        x = 0.5
        want = sum(math.comb(7, j) * x**j * (1 - x) ** (7 - j) for j in range(3, 8))
        assert want == 0.7734375
        assert special.betainc(0.5, 3.0, 5.0) == pytest.approx(want, rel=1e-13)

    def test_tail_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            a, b = rng.uniform(0.2, 50.0, size=2)
            x = rng.uniform(0.02, 0.98)
            lhs = special.betainc(x, a, b)
            rhs = 1.0 - special.betainc(1.0 - x, b, a)
            assert lhs == pytest.approx(rhs, abs=2e-13)

    def test_monotone_in_x(self):
        xs = np.linspace(0.0, 1.0, 41)
        vals = [special.betainc(float(x), 3.5, 2.25) for x in xs]
        assert all(v2 >= v1 for v1, v2 in zip(vals, vals[1:]))
        assert vals[0] == 0.0 and vals[-1] == 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            special.betainc(-0.1, 1.0, 1.0)
        with pytest.raises(DomainError):
            special.betainc(0.5, 0.0, 1.0)


class TestErfc:
    def test_at_zero(self):
        assert special.erfc(0.0) == 1.0

    @pytest.mark.parametrize("x", [0.3, 1.7])
    def test_reflection(self, x):
        assert special.erfc(x) + special.erfc(-x) == pytest.approx(2.0, rel=1e-15)

    def test_against_quadrature(self, quad):
        want = 2.0 / math.sqrt(math.pi) * quad(lambda t: np.exp(-t * t), 1.0, 30.0)
        assert special.erfc(1.0) == pytest.approx(want, rel=1e-12)

    def test_tail_coefficient_bound(self):
        # h(x) := 1 - erfc(x) x sqrt(pi) e^{x^2} satisfies 0 < h < 1/(2x^2)
        for x in (1.0, 2.0, 5.0, 10.0):
            h = 1.0 - special.erfc(x) * x * math.sqrt(math.pi) * math.exp(x * x)
            assert 0.0 < h < 1.0 / (2.0 * x * x)


class TestLnGamma:
    def test_unit_values(self):
        assert special.ln_gamma(1.0) == 0.0
        assert special.ln_gamma(2.0) == 0.0

    def test_half(self):
        assert special.ln_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)

    def test_factorial_ten(self):
        fact = 1
        for i in range(2, 11):
            fact *= i
        assert fact == 3628800
        assert special.ln_gamma(11.0) == pytest.approx(math.log(fact), rel=1e-14)

    def test_recurrence(self):
        for a in (0.3, 1.7, 12.5, 400.0, 9999.5):
            lhs = special.ln_gamma(a + 1.0) - special.ln_gamma(a)
            assert lhs == pytest.approx(math.log(a), abs=1e-12 * max(1.0, abs(special.ln_gamma(a + 1.0))))

    def test_domain(self):
        with pytest.raises(DomainError):
            special.ln_gamma(0.0)
        with pytest.raises(DomainError):
            special.ln_gamma(-3.5)


class TestApproxValue:
    def test_invariants_enforced(self):
        with pytest.raises(DomainError):
            special.ApproxValue(value=math.inf, rel_error_bound=0.1)
        with pytest.raises(DomainError):
            special.ApproxValue(value=1.0, rel_error_bound=-0.5)
        ok = special.ApproxValue(value=1.0, rel_error_bound=0.0)
        assert ok.rel_error_bound == 0.0
