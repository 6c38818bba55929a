"""Exact arithmetic on symbolic eigenvalues."""

import cmath
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from midconv import GroupElement, GroupMode, ScalarExpr
from midconv.errors import MissingGenerator, ModeMismatch
from midconv.scalars import combine, invert, is_identity, is_integer_additive, to_complex

MULT = GroupMode.MULTIPLICATIVE
ADD = GroupMode.ADDITIVE
CIRC = GroupMode.CIRCLE


def mult(const=0, exps=None):
    return GroupElement(MULT, ScalarExpr(const, exps or {}))


def additive(const=0, exps=None):
    return GroupElement(ADD, ScalarExpr(const, exps or {}))


class TestScalarExpr:
    def test_canonical_drops_zero_coefficients(self):
        e = ScalarExpr(F(1, 2), {"x": 0, "y": F(1, 3)})
        assert e.generators() == ("y",)

    def test_equality_is_structural(self):
        assert ScalarExpr(1, {"a": 2}) == ScalarExpr(F(2, 2), {"a": F(4, 2)})
        assert ScalarExpr(1, {"a": 2}) != ScalarExpr(1, {"b": 2})

    def test_add_neg(self):
        e = ScalarExpr(F(1, 2), {"x": 1}) + ScalarExpr(F(1, 2), {"x": -1, "y": 2})
        assert e == ScalarExpr(1, {"y": 2})
        assert -e == ScalarExpr(-1, {"y": -2})

    def test_json_round_trip(self):
        e = ScalarExpr(F(-3, 4), {"x": F(5, 7)})
        assert ScalarExpr.from_json(e.to_json()) == e
        assert e.to_json() == {"const": "-3/4", "exps": {"x": "5/7"}}

    def test_duplicate_generator_rejected(self):
        with pytest.raises(ValueError):
            ScalarExpr(0, [("x", 1), ("x", 2)])


class TestGroupLaw:
    def test_inverse_pair_is_identity(self):
        a = mult(0, {"x": 1})
        assert combine(a, mult(0, {"x": -1})).is_identity()

    def test_mod1_reduction_multiplicative(self):
        assert combine(mult(F(3, 4)), mult(F(1, 2))) == mult(F(1, 4))

    def test_additive_no_reduction(self):
        s = combine(additive(F(1, 2), {"s": 1}), additive(F(1, 2)))
        assert s == additive(1, {"s": 1})

    def test_invert_examples(self):
        assert invert(GroupElement.identity(MULT)).is_identity()
        assert invert(mult(F(1, 3))) == mult(F(2, 3))
        assert invert(additive(0, {"x": 2})) == additive(0, {"x": -2})

    def test_mod1_never_leaks_denominators(self):
        a = GroupElement(MULT, ScalarExpr(F(7, 5), {"q": 1}))
        assert combine(a, a.invert()).is_identity()

    def test_mode_mismatch(self):
        with pytest.raises(ModeMismatch):
            combine(mult(0), additive(0))

    def test_power(self):
        assert mult(F(1, 3)).power(3).is_identity()
        assert additive(0, {"x": 1}).power(-2) == additive(0, {"x": -2})


class TestPredicates:
    def test_identity_one_is_zero_mod_one(self):
        assert GroupElement(MULT, ScalarExpr(1)).is_identity()

    def test_additive_integer_not_identity(self):
        a = additive(2)
        assert is_integer_additive(a)
        assert not is_identity(a)

    def test_symbolic_generator_not_integer(self):
        assert not additive(0, {"x": 1}).is_integer()

    def test_is_integer_wrong_mode(self):
        with pytest.raises(ModeMismatch):
            is_integer_additive(mult(0))


class TestToComplex:
    def test_circle_half_is_minus_one(self):
        assert to_complex(GroupElement.circle(F(1, 2))) == pytest.approx(-1)

    def test_mult_quarter_is_i(self):
        z = to_complex(mult(0, {"x": 1}), {"x": 0.25})
        assert z == pytest.approx(1j)

    def test_additive_evaluates_linearly(self):
        z = to_complex(additive(F(1, 2), {"s": 1}), {"s": 0.1})
        assert z == pytest.approx(0.6)

    def test_missing_generator(self):
        with pytest.raises(MissingGenerator):
            to_complex(mult(0, {"x": 1}), {})


class TestCircleMode:
    def test_requires_constant(self):
        with pytest.raises(ValueError):
            GroupElement(CIRC, ScalarExpr(0, {"x": 1}))

    def test_wraps_mod_one(self):
        assert GroupElement.circle(F(5, 4)) == GroupElement.circle(F(1, 4))


class TestOrdering:
    def test_total_order_strict(self):
        elems = [mult(F(1, 2)), mult(0, {"a": 1}), mult(0, {"b": 1}),
                 mult(F(1, 2), {"a": -1})]
        ordered = sorted(elems)
        for x, y in zip(ordered, ordered[1:]):
            assert x < y or x == y
        assert len(set(elems)) == len(elems)

    def test_cross_mode_comparison_rejected(self):
        with pytest.raises(ModeMismatch):
            mult(0) < additive(0)


rationals = st.fractions(min_value=-10, max_value=10, max_denominator=50)
small_exps = st.dictionaries(st.sampled_from("abcde"), rationals, max_size=3)


def elements(mode):
    return st.builds(lambda c, e: GroupElement(mode, ScalarExpr(c, e)),
                     rationals, small_exps)


@pytest.mark.parametrize("mode", [MULT, ADD])
class TestGroupAxioms:
    @given(data=st.data())
    def test_associative_commutative(self, mode, data):
        a = data.draw(elements(mode))
        b = data.draw(elements(mode))
        c = data.draw(elements(mode))
        assert combine(combine(a, b), c) == combine(a, combine(b, c))
        assert combine(a, b) == combine(b, a)

    @given(data=st.data())
    def test_identity_and_inverse(self, mode, data):
        a = data.draw(elements(mode))
        e = GroupElement.identity(mode)
        assert combine(a, e) == a
        assert combine(a, a.invert()).is_identity()

    @given(data=st.data())
    def test_canonicalization_idempotent(self, mode, data):
        a = data.draw(elements(mode))
        again = GroupElement(mode, a.expr)
        assert again == a and hash(again) == hash(a)

    @given(data=st.data())
    def test_to_complex_is_homomorphism(self, mode, data):
        a = data.draw(elements(mode))
        b = data.draw(elements(mode))
        assignment = {name: 0.37 + 0.11j for name in "abcde"}
        za = to_complex(a, assignment)
        zb = to_complex(b, assignment)
        zc = to_complex(combine(a, b), assignment)
        if mode is MULT:
            assert zc == pytest.approx(za * zb, rel=1e-9)
        else:
            assert zc == pytest.approx(za + zb, rel=1e-9)
