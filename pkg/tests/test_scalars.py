from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qdc.scalars import (LaurentPoly, Scalar, ZERO, ONE, Q, qlambda,
                         parse_scalar, render_scalar, ScalarDivisionError,
                         PoleError, SpecializationError, ScalarParseError)


def poly(d):
    return LaurentPoly({e: Fraction(c) for e, c in d.items()})


coeffs = st.integers(min_value=-6, max_value=6)
exps = st.integers(min_value=-4, max_value=4)
polys = st.dictionaries(exps, coeffs, max_size=4).map(poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())
scalars = st.builds(Scalar, polys, nonzero_polys)
nonzero_scalars = scalars.filter(lambda s: not s.is_zero())


class TestNormalize:
    def test_polynomial_factor_cancels(self):
        s = Scalar(poly({2: 1, 0: -1}), poly({1: 1, 0: -1}))
        assert s == parse_scalar("q + 1")
        assert s.den.is_one()

    def test_zero_numerator(self):
        s = Scalar(poly({}), poly({3: 1}))
        assert s.is_zero()
        assert s.den.is_one()

    def test_laurent_numerator_kept(self):
        s = parse_scalar("q - q^-1")
        assert s.den.is_one()
        assert s.num == poly({1: 1, -1: -1})

    def test_denominator_normalization(self):
        # denominator ends up monic with lowest exponent zero
        s = Scalar(poly({0: 1}), poly({3: 2, 1: 4}))
        assert s.den.min_exp() == 0
        assert s.den.leading_coeff() == 1

    def test_zero_denominator_rejected(self):
        with pytest.raises(ScalarDivisionError):
            Scalar(poly({0: 1}), poly({}))

    @given(scalars, nonzero_polys)
    def test_common_factor_invariance(self, s, f):
        assert Scalar(s.num * f, s.den * f) == s


class TestFieldAxioms:
    @given(scalars, scalars, scalars)
    def test_add_associative(self, a, b, c):
        assert (a + b) + c == a + (b + c)

    @given(scalars, scalars, scalars)
    def test_mul_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @given(scalars, scalars, scalars)
    def test_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(scalars, scalars)
    def test_commutative(self, a, b):
        assert a + b == b + a
        assert a * b == b * a

    @given(scalars)
    def test_additive_inverse(self, a):
        assert (a - a).is_zero()

    @given(nonzero_scalars)
    def test_multiplicative_inverse(self, a):
        assert (a * (ONE / a)).is_one()

    def test_division_by_zero(self):
        with pytest.raises(ScalarDivisionError):
            ONE / ZERO

    def test_difference_of_squares(self):
        lam = qlambda()
        lhs = (Q + ONE / Q) * lam
        assert lhs == parse_scalar("q^2 - q^-2")

    def test_inverse_example(self):
        lam = qlambda()
        assert ((ONE / lam) * lam).is_one()


class TestCanonicalUniqueness:
    @given(scalars, scalars)
    def test_cross_multiplication(self, a, b):
        equal_fractions = (a.num * b.den == b.num * a.den)
        assert (a == b) == equal_fractions

    @given(scalars)
    def test_hash_consistency(self, a):
        b = Scalar(a.num, a.den)
        assert a == b and hash(a) == hash(b)


class TestEvaluation:
    def test_direct_substitution(self):
        assert qlambda().evaluate_at(2) == Fraction(3, 2)
        assert parse_scalar("(q^2 - 1)/(q - 1)").evaluate_at(3) == 4

    def test_pole(self):
        s = Scalar(poly({0: 1}), poly({1: 1, 0: -2}))
        with pytest.raises(PoleError):
            s.evaluate_at(2)

    def test_zero_point_rejected(self):
        with pytest.raises(SpecializationError):
            Q.evaluate_at(0)

    @given(scalars, scalars, st.sampled_from([2, 3, 5, 7, Fraction(1, 2)]))
    def test_homomorphism(self, a, b, q0):
        try:
            lhs = (a * b).evaluate_at(q0)
            ra, rb = a.evaluate_at(q0), b.evaluate_at(q0)
        except PoleError:
            return
        assert lhs == ra * rb

    def test_fractional_powers_not_evaluable(self):
        with pytest.raises(SpecializationError):
            Scalar.q_power(Fraction(1, 2)).evaluate_at(4)


class TestFractionalExponents:
    def test_square_root_squares_to_q(self):
        h = Scalar.q_power(Fraction(1, 2))
        assert h * h == Q
        assert (h * Scalar.q_power(Fraction(-1, 2))).is_one()

    def test_render_parse(self):
        h = Scalar.q_power(Fraction(1, 2))
        assert render_scalar(h) == "q^(1/2)"
        assert parse_scalar(render_scalar(h)) == h


class TestGrammar:
    @given(scalars)
    def test_round_trip(self, a):
        assert parse_scalar(render_scalar(a)) == a

    def test_shared_grammar_example(self):
        s = parse_scalar("(q - q^-1)/(q^2 + 1)")
        assert s.num == poly({1: 1, -1: -1})
        assert s.den == poly({2: 1, 0: 1})

    def test_rationals(self):
        assert parse_scalar("3/2") == Scalar.from_rational(Fraction(3, 2))
        assert parse_scalar("-5") == Scalar.from_int(-5)

    def test_errors_carry_position(self):
        with pytest.raises(ScalarParseError) as err:
            parse_scalar("q + !")
        assert err.value.pos is not None
        with pytest.raises(ScalarParseError):
            parse_scalar("(q")
        with pytest.raises(ScalarParseError):
            parse_scalar("q 3")
