from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfactor.exact import (
    LaurentPoly,
    NonZeroRemainder,
    RationalExpr,
    TruncatedSeries,
    exact_divide,
    laurent_arith,
    parse_rational,
    rescale_z,
    series_arith,
)

z = LaurentPoly.monomial(1)
zi = LaurentPoly.monomial(-1)


def L(d):
    return LaurentPoly(d)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
nonzero_rationals = rationals.filter(lambda r: r != 0)
laurent = st.dictionaries(st.integers(-5, 5), rationals, max_size=6).map(LaurentPoly)
nonzero_laurent = laurent.filter(lambda f: not f.is_zero())


@st.composite
def symmetric_laurent(draw):
    half = draw(st.dictionaries(st.integers(0, 5), rationals, max_size=5))
    d = {}
    for k, v in half.items():
        d[k] = d.get(k, 0) + v
        if k:
            d[-k] = d.get(-k, 0) + v
    return LaurentPoly(d)


class TestLaurentArith:
    def test_additive_identity(self):
        f = z + zi
        assert laurent_arith(f, LaurentPoly.zero(), "add") == f

    def test_difference_of_squares(self):
        assert laurent_arith(z - zi, z + zi, "mul") == L({2: 1, -2: -1})

    def test_shift_product(self):
        assert laurent_arith(1 - zi * zi, z * z, "mul") == L({2: 1, 0: -1})

    def test_sub(self):
        assert laurent_arith(z, z, "sub").is_zero()

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            laurent_arith(z, z, "div")

    def test_zero_coefficients_stripped(self):
        f = L({3: 0, 1: F(1, 2), -1: 0})
        assert f.support == (1,)
        assert (z - z).support == ()

    def test_str(self):
        assert str(L({2: 1, 0: F(3, 2), -2: 1})) == "z^2 + 3/2 + z^-2"
        assert str(-z) == "-z"
        assert str(LaurentPoly.zero()) == "0"

    @given(nonzero_laurent, nonzero_laurent)
    def test_degree_bounds_additive(self, f, g):
        h = f * g
        assert h.max_deg == f.max_deg + g.max_deg
        assert h.min_deg == f.min_deg + g.min_deg

    @given(laurent, laurent, laurent)
    def test_ring_laws(self, f, g, h):
        assert (f + g) * h == f * h + g * h
        assert f * g == g * f
        assert (f - g) + g == f


class TestRescale:
    def test_examples(self):
        assert rescale_z(z + zi, 2) == L({1: 2, -1: F(1, 2)})
        f = L({3: 5, -1: 2})
        assert rescale_z(f, 1) == f
        assert rescale_z(z * z, F(1, 2)) == L({2: F(1, 4)})

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            rescale_z(z, 0)

    @given(laurent, nonzero_rationals)
    def test_round_trip(self, f, c):
        assert rescale_z(rescale_z(f, c), 1 / c) == f

    @given(laurent, nonzero_rationals)
    def test_evaluation_law(self, f, c):
        # (rescale f)(w) == f(c w)
        w = 0.7 + 0.4j
        assert abs(f.rescale(c).evaluate(w) - f.evaluate(float(c) * w)) < 1e-9 * (1 + abs(f.evaluate(float(c) * w)))


class TestExactDivide:
    def test_self_division(self):
        p = L({2: 1, 0: -1})
        assert exact_divide(p, p) == LaurentPoly.one()

    def test_certified_by_remultiplication(self):
        p = L({2: 1, -2: -1})
        q = L({0: 1, -2: -1})
        r = exact_divide(p, q)
        assert r * q == p
        assert r == L({2: 1, 0: 1})

    def test_remainder(self):
        with pytest.raises(NonZeroRemainder) as info:
            exact_divide(z + 1, z - 1)
        assert info.value.remainder == LaurentPoly.const(2)
        assert info.value.remainder_degree == 0

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisionError):
            exact_divide(z, LaurentPoly.zero())

    @given(laurent, nonzero_laurent)
    @settings(max_examples=60)
    def test_divides_products(self, p, q):
        assert exact_divide(p * q, q) == p


class TestSymmetry:
    def test_flags(self):
        assert (z + zi).is_symmetric()
        assert not (z - zi).is_symmetric()
        assert LaurentPoly.x().is_symmetric()

    @given(symmetric_laurent(), symmetric_laurent())
    def test_products_of_symmetric(self, f, g):
        assert (f * g).is_symmetric()

    @given(symmetric_laurent())
    def test_reflection_fixes_symmetric(self, f):
        assert f.reflect() == f


class TestRationalExpr:
    def test_normalization_and_equality(self):
        a = RationalExpr(LaurentPoly.one(), 1 - zi * zi)
        b = RationalExpr(z * z, z * z - 1)
        assert a == b
        assert a.den == L({2: 1, 0: -1})

    def test_canonical_cancels_gcd(self):
        r = RationalExpr((z - 1) * (z + 2), (z - 1) * (z + 3)).canonical()
        assert r.den == z + 3
        assert r.num == z + 2

    def test_partial_fraction_sum(self):
        # (z^2 - b)/(z^2 - 1) + (b z^2 - 1)/(z^2 - 1) = 1 + b
        b = F(1, 3)
        r = RationalExpr(1 - zi * zi * b, 1 - zi * zi) + RationalExpr(1 - z * z * b, 1 - z * z)
        assert r.to_poly() == LaurentPoly.const(1 + b)

    def test_to_poly_raises(self):
        with pytest.raises(NonZeroRemainder):
            RationalExpr(z, z - 1).to_poly()

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            RationalExpr(z, 0)


class TestSeries:
    def test_difference_of_squares(self):
        a = TruncatedSeries(4, [1, 1])
        b = TruncatedSeries(4, [1, -1])
        assert series_arith(a, b, "mul") == TruncatedSeries(4, [1, 0, -1])

    def test_geometric_reciprocal(self):
        n = 7
        inv = series_arith(TruncatedSeries(n, [1, -1]), op="reciprocal")
        assert inv == TruncatedSeries(n, [1] * (n + 1))

    def test_additive_identity(self):
        a = TruncatedSeries(3, [z, 2, zi])
        assert series_arith(a, TruncatedSeries(3), "add") == a

    def test_reciprocal_needs_constant_term(self):
        with pytest.raises(ZeroDivisionError):
            TruncatedSeries(3, [0, 1]).reciprocal()
        with pytest.raises(ZeroDivisionError):
            TruncatedSeries(3, [z, 1]).reciprocal()

    @given(st.lists(rationals, min_size=1, max_size=6).filter(lambda c: c[0] != 0))
    def test_reciprocal_inverts(self, cs):
        a = TruncatedSeries(6, [L({0: cs[0]})] + [L({i % 3 - 1: c}) for i, c in enumerate(cs[1:])])
        assert a * a.reciprocal() == TruncatedSeries.one(6)

    def test_rescale_t(self):
        a = TruncatedSeries(2, [1, z, zi])
        assert a.rescale_t(2) == TruncatedSeries(2, [1, z * 2, zi * 4])


def test_parse_rational():
    assert parse_rational("3/5") == F(3, 5)
    assert parse_rational("-1/3") == F(-1, 3)
    assert parse_rational("0.875") == F(7, 8)
    with pytest.raises(ValueError):
        parse_rational("one half")
