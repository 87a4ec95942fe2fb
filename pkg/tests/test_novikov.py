import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidkit.novikov import (
    F2,
    NEG_INF,
    QMODEL,
    FieldMismatchError,
    LambdaElement,
    NovikovScalar,
    PeriodGroup,
    group_sum,
    parse_scalar,
)


def sc(terms, field=QMODEL):
    return NovikovScalar.from_terms(field, terms)


def series_product_oracle(x, y, depth=12):
    """Multiply truncated expansions; independent of the fraction arithmetic."""
    ex, ey = x.expand(depth), y.expand(depth)
    out = {}
    for a, ca in ex.items():
        for b, cb in ey.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
    return {k: v for k, v in out.items() if v != 0}


class TestValuation:
    def test_zero_is_minus_infinity(self):
        assert NovikovScalar.zero(QMODEL).valuation() == NEG_INF
        assert NovikovScalar.zero(F2).valuation() == NEG_INF

    def test_max_of_exponents(self):
        assert sc({3: 1, 1: 1}).valuation() == 3

    def test_fraction_valuation_matches_expansion(self):
        x = NovikovScalar(QMODEL, {2: 1, 0: 1}, {5: 1})  # (s^2+1)/s^5
        assert x.valuation() == -3
        top = max(x.expand(10))
        assert top == -3

    def test_multiplicativity_against_series_oracle(self):
        rng = random.Random(3)
        for _ in range(100):
            x = sc({Fr(rng.randrange(-5, 6)): Fr(rng.randrange(1, 7)),
                    Fr(rng.randrange(-5, 6)): Fr(rng.randrange(1, 7))})
            y = sc({Fr(rng.randrange(-5, 6)): Fr(rng.randrange(1, 7))})
            if x.is_zero() or y.is_zero():
                continue
            assert (x * y).valuation() == x.valuation() + y.valuation()
            oracle = series_product_oracle(x, y)
            assert max(oracle) == (x * y).valuation()

    def test_ultrametric(self):
        rng = random.Random(5)
        for _ in range(200):
            x = sc({rng.randrange(-4, 5): rng.randrange(-3, 4)})
            y = sc({rng.randrange(-4, 5): rng.randrange(-3, 4)})
            s = x + y
            if s.is_zero():
                continue
            assert s.valuation() <= max(x.valuation(), y.valuation())
            if x.valuation() != y.valuation():
                assert s.valuation() == max(x.valuation(), y.valuation())


class TestFieldOps:
    def test_polynomial_identity(self):
        a = sc({1: 1, 0: 1})
        b = sc({1: 1, 0: -1})
        assert (a * b) == sc({2: 1, 0: -1})

    def test_inverse_roundtrip(self):
        rng = random.Random(7)
        for _ in range(50):
            x = sc({Fr(rng.randrange(-6, 7), rng.randrange(1, 4)): rng.randrange(1, 9),
                    rng.randrange(-6, 7): rng.randrange(0, 5)})
            if x.is_zero():
                continue
            assert (x * x.inverse()).is_one()
            assert (x / x).is_one()

    def test_division_by_zero(self):
        x = sc({0: 1})
        with pytest.raises(ZeroDivisionError):
            x / NovikovScalar.zero(QMODEL)
        with pytest.raises(ZeroDivisionError):
            NovikovScalar.zero(QMODEL).inverse()

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatchError):
            sc({0: 1}) + NovikovScalar.one(F2)

    def test_f2_arithmetic(self):
        a = NovikovScalar.from_terms(F2, {1: 1, 0: 1})
        assert (a + a).is_zero()
        assert (a * a) == NovikovScalar.from_terms(F2, {2: 1, 0: 1})

    @given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-3, 3)),
                    min_size=1, max_size=3),
           st.lists(st.tuples(st.integers(-4, 4), st.integers(-3, 3)),
                    min_size=1, max_size=3),
           st.lists(st.tuples(st.integers(-4, 4), st.integers(-3, 3)),
                    min_size=1, max_size=3))
    @settings(max_examples=60, deadline=None)
    def test_field_axioms(self, ta, tb, tc_):
        x, y, z = (NovikovScalar(QMODEL, dict(t)) for t in (ta, tb, tc_))
        assert (x + y) * z == x * z + y * z
        assert (x * y) * z == x * (y * z)
        assert x + y == y + x
        assert x - x == NovikovScalar.zero(QMODEL)
        if not y.is_zero():
            assert (x / y) * y == x

    def test_powers(self):
        x = sc({1: 2, 0: 1})
        assert x ** 3 == x * x * x
        assert x ** 0 == NovikovScalar.one(QMODEL)
        assert x ** -2 == (x * x).inverse()


class TestSerialization:
    def test_spec_shape_roundtrip(self):
        x = NovikovScalar(QMODEL, {3: 1, 1: 1}, {0: 1})
        assert parse_scalar(QMODEL, "(1*s^(3) + 1*s^(1))/(1*s^(0))") == x
        assert parse_scalar(QMODEL, x.to_text()) == x

    def test_random_roundtrips(self):
        rng = random.Random(11)
        for _ in range(100):
            num = {Fr(rng.randrange(-8, 9), rng.randrange(1, 5)): Fr(rng.randrange(-5, 6))
                   for _ in range(rng.randrange(1, 4))}
            den = {Fr(rng.randrange(-4, 5)): Fr(rng.randrange(1, 6))}
            x = NovikovScalar(QMODEL, num, den)
            assert parse_scalar(QMODEL, x.to_text()) == x

    def test_f2_roundtrip(self):
        x = NovikovScalar.from_terms(F2, {Fr(3, 2): 1, 0: 1})
        assert parse_scalar(F2, x.to_text()) == x

    def test_zero(self):
        assert parse_scalar(QMODEL, "0").is_zero()


class TestPeriodGroup:
    def test_group_sum_gcd(self):
        assert group_sum(PeriodGroup(Fr(1, 2)), PeriodGroup(Fr(1, 3))) == PeriodGroup(Fr(1, 6))
        assert group_sum(PeriodGroup(1), PeriodGroup(1)) == PeriodGroup(1)
        assert group_sum(PeriodGroup(0), PeriodGroup(Fr(2, 7))) == PeriodGroup(Fr(2, 7))

    def test_membership(self):
        g = PeriodGroup(Fr(1, 3))
        assert g.contains(Fr(5, 3)) and not g.contains(Fr(1, 2))
        t = PeriodGroup.trivial()
        assert t.contains(0) and not t.contains(Fr(1, 9))

    def test_membership_closure_under_ops(self):
        g = PeriodGroup(Fr(1, 4))
        x = sc({Fr(1, 2): 1, Fr(-1, 4): 3})
        y = sc({Fr(3, 4): 2})
        for z in (x + y, x * y, x / y):
            assert z.exponents_in(g)


class TestLambda:
    def test_valuation_max_over_terms(self):
        lam = LambdaElement(QMODEL, {-1: sc({2: 1}), 1: sc({1: 1})})
        assert lam.valuation() == 2
        assert LambdaElement.zero(QMODEL).valuation() == NEG_INF

    def test_monomial_shift(self):
        lam = LambdaElement(QMODEL, {0: sc({1: 1}), 2: sc({-2: 1})})
        shift = lam * sc({Fr(5, 2): 1})
        assert shift.valuation() == lam.valuation() + Fr(5, 2)

    def test_product_degree_bookkeeping(self):
        a = LambdaElement.q_power(QMODEL, 2)
        b = LambdaElement.q_power(QMODEL, -3, sc({1: 1}))
        assert (a * b).q_powers() == [-1]
