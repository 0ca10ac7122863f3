import cmath
import math
from fractions import Fraction as F

import mpmath as mp
import numpy as np
import pytest

from qfactor import numerics as nm
from qfactor.families import ultraspherical
from qfactor.qkernel import QContext

CTX = QContext(q=F(1, 4), beta=F(1, 2))


def mp_weight(theta, q, b):
    z2 = mp.expj(2 * theta)
    return (mp.qp(z2, q) * mp.qp(1 / z2, q) / (mp.qp(b * z2, q) * mp.qp(b / z2, q))).real


class TestProducts:
    def test_q_q_at_half(self):
        assert abs(nm.qpoch_inf(0.5, 0.5) - 0.2887880951) < 1e-9

    @pytest.mark.parametrize("a,q", [(0.5, 0.5), (0.3, 0.25), (-0.7, 0.6), (0.9, 0.9)])
    def test_against_oracles(self, a, q):
        direct = 1.0
        for k in range(2000):
            direct *= 1 - a * q**k
        got = nm.qpoch_inf(a, q).real
        assert abs(got - direct) < 1e-13
        assert abs(got - float(mp.qp(a, q))) < 1e-13

    def test_functional_equation(self):
        # (a; q)_inf = (1 - a)(a q; q)_inf
        for a in (0.2, -0.6, 0.95):
            lhs = nm.qpoch_inf(a, 0.36)
            rhs = (1 - a) * nm.qpoch_inf(a * 0.36, 0.36)
            assert abs(lhs - rhs) < 1e-14

    def test_truncation_terms(self):
        t = nm.ProductTruncation(1e-14)
        K = t.terms(1.0, 0.5)
        assert 0.5**K / 0.5 < 1e-14 <= 0.5 ** (K - 1) / 0.5
        assert t.terms(0.0, 0.5) == 0
        with pytest.raises(ValueError):
            t.terms(1.0, 1.0)


class TestWeights:
    def test_symmetry(self):
        th = np.linspace(0.1, 1.4, 7)
        assert np.allclose(nm.weight_tilde(th, CTX), nm.weight_tilde(np.pi - th, CTX), rtol=1e-13)

    def test_positive(self):
        th = nm.QuadratureGrid(64).theta
        assert np.all(nm.weight_tilde(th, CTX) > 0)

    def test_beta_zero_is_hermite_weight(self):
        th = np.linspace(0.2, 2.9, 9)
        ctx = QContext(q=F(1, 3))
        assert np.allclose(nm.weight_tilde(th, ctx), nm.hermite_weight(th, 1 / 3), rtol=1e-14)

    def test_matches_mpmath(self):
        for th in (0.3, 1.2, 2.0):
            got = nm.weight_tilde(th, CTX) * math.sin(th)
            assert abs(got - float(mp_weight(th, mp.mpf(1) / 4, mp.mpf(1) / 2))) < 1e-13

    def test_endpoints_rejected(self):
        with pytest.raises(ValueError):
            nm.weight_tilde(0.0, CTX)

    @pytest.mark.parametrize("ctx", [CTX, QContext.from_s(F(3, 5), F(-1, 3))], ids=str)
    def test_relations(self, ctx):
        for th in nm.RESIDUAL_THETAS:
            assert nm.weight_recurrence_residual(ctx, th) < 1e-8
            res = nm.weight_shift_check(ctx, th)
            assert all(v is None or v < 1e-8 for v in res.values())
            h = nm.hermite_weight_shift_check(ctx.q, th)
            assert all(v is None or v < 1e-8 for v in h.values())


class TestOrthogonality:
    def test_gram(self):
        G = nm.gram_matrix(8, CTX)
        d = np.array([nm.norm_inverse(n, CTX) for n in range(9)])
        off = G - np.diag(np.diag(G))
        assert np.max(np.abs(off)) < 1e-10
        assert np.max(np.abs(np.diag(G) / d - 1)) < 1e-9

    @pytest.mark.parametrize("n", [0, 2, 3])
    def test_norm_against_mpmath_quadrature(self, n):
        mp.mp.dps = 20
        q, b = mp.mpf(1) / 4, mp.mpf(1) / 2
        C = ultraspherical(n, CTX)

        def integrand(t):
            z = mp.expj(t)
            c = sum(mp.mpf(v.numerator) / v.denominator * z**k for k, v in C.items()).real
            return c * c * mp_weight(t, q, b)

        ref = mp.quad(integrand, [0, mp.pi]) / (2 * mp.pi)
        assert abs(nm.norm_inverse(n, CTX) / float(ref) - 1) < 1e-12
        assert abs(nm.inner_product(n, n, CTX) / float(ref) - 1) < 1e-12

    def test_quadrature_doubling(self):
        a = nm.inner_product(3, 3, CTX, nm.QuadratureGrid(512))
        b = nm.inner_product(3, 3, CTX, nm.QuadratureGrid(1024))
        assert abs(a - b) < 1e-11

    def test_bad_context(self):
        with pytest.raises(ValueError):
            nm.inner_product(0, 0, QContext(q=F(1, 4), beta=F(1)))


class TestExactVersusNumeric:
    def test_laurent_eval(self):
        C = ultraspherical(5, CTX)
        for th in (0.2, 1.0, 2.7):
            z = cmath.exp(1j * th)
            assert abs(nm.laurent_eval(C, z) - C.evaluate(z)) < 1e-12

    def test_operator(self):
        C = ultraspherical(4, CTX)
        z = np.exp(1j * np.array([0.4, 1.3, 2.2]))
        got = nm.dx_beta_q_numeric(lambda u: nm.laurent_eval(C, u), z, 0.5, 0.5)
        mu = 2**4 + 0.5 / 2**4
        assert np.max(np.abs(got - mu * nm.laurent_eval(C, z))) < 1e-11


@pytest.mark.parametrize("ctx", [CTX, QContext.from_s(F(1, 3), F(-1, 3)), QContext.from_s(F(1, 2))], ids=str)
def test_selfadjoint_form(ctx):
    for n in range(9):
        for th in nm.RESIDUAL_THETAS:
            r = nm.sl_selfadjoint_residual(n, ctx, th)
            assert r is None or r < 1e-8


class TestLimits:
    @pytest.mark.parametrize("gamma", [F(1, 2), F(1), F(3, 2), F(2)])
    def test_q_to_1(self, gamma):
        table = nm.limit_q_to_1(gamma, 6)
        assert table.monotone
        assert all(0.5 < p < 1.5 for p in table.orders)

    @pytest.mark.parametrize("gamma", [F(1, 2), F(1), F(3, 2), F(2)])
    def test_gegenbauer(self, gamma):
        for n in range(7):
            assert nm.gegenbauer_limit_deviation(n, gamma) < 1e-3

    def test_beta_to_1(self):
        for n in range(1, 7):
            assert nm.limit_beta_to_1(n, QContext(q=F(1, 2)), 1e-6) < 1e-4
        with pytest.raises(ValueError):
            nm.limit_beta_to_1(0, QContext(q=F(1, 2)), 1e-6)

    def test_beta_to_1_linear(self):
        base = QContext(q=F(1, 2))
        ratio = nm.limit_beta_to_1(3, base, 2e-6) / nm.limit_beta_to_1(3, base, 1e-6)
        assert abs(ratio - 2) < 1e-3

    def test_weight_identity(self):
        for g in (0.5, 1.0, 1.5, 2.0):
            for x in (-0.7, 0.0, 0.4):
                assert nm.gegenbauer_weight_identity(g, x) < 1e-6
