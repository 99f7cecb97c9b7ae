"""Grammar coverage, error positions, and render/parse round trips."""

from fractions import Fraction

import pytest

from jetsym.errors import ParseError, ScopeError
from jetsym.expr import ExpPolyExpr, U, Y
from jetsym.parser import parse_characteristic, parse_equation, parse_expression

F = Fraction


class TestEquations:
    def test_heat(self):
        eq = parse_equation("u_t = u_2")
        assert eq.order == 2
        assert eq.rhs == parse_expression("u_2")

    def test_with_linear_term(self):
        eq = parse_equation("u_t = u_2 - u")
        assert eq.order == 2

    def test_kdv(self):
        eq = parse_equation("u_t = u_3 + u*u_1")
        assert eq.order == 3

    def test_whitespace_ignored(self):
        assert parse_equation("u_t=u_2").rhs == parse_equation(" u_t  =  u_2 ").rhs

    def test_y_rejected(self):
        with pytest.raises(ScopeError):
            parse_equation("u_t = y*u_2")

    def test_t_rejected(self):
        with pytest.raises(ScopeError):
            parse_equation("u_t = t*u_2")

    def test_low_order_rejected(self):
        with pytest.raises(ScopeError):
            parse_equation("u_t = u_1")

    def test_exponential_rhs_rejected(self):
        with pytest.raises(ScopeError):
            parse_equation("u_t = exp(u)*u_2")

    def test_missing_lhs(self):
        with pytest.raises(ParseError):
            parse_equation("u = u_2")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError) as info:
            parse_equation("u_t = u_2 )")
        assert info.value.position == 10

    def test_dangling_operator(self):
        with pytest.raises(ParseError) as info:
            parse_equation("u_t = u_2 +")
        assert info.value.position == 11
        assert info.value.expected


class TestExpressions:
    def test_rational_literal(self):
        assert parse_expression("3/2") == ExpPolyExpr.constant(F(3, 2))

    def test_precedence(self):
        assert parse_expression("u + 2*u_1^2") == parse_expression("u + 2*(u_1*u_1)")

    def test_unary_minus(self):
        assert parse_expression("-u") == -parse_expression("u")
        assert parse_expression("3 - -u") == parse_expression("3 + u")

    def test_power_of_sum(self):
        assert parse_expression("(u + y)^2") == parse_expression("u^2 + 2*y*u + y^2")

    def test_exp_weight_forms(self):
        assert parse_expression("exp(y)") == ExpPolyExpr.exponential(Y, F(1))
        assert parse_expression("exp(-y)") == ExpPolyExpr.exponential(Y, F(-1))
        assert parse_expression("exp(1/2*y)") == ExpPolyExpr.exponential(Y, F(1, 2))
        assert parse_expression("exp(2*u)") == ExpPolyExpr.exponential(U, F(2))

    def test_exp_argument_must_be_linear(self):
        with pytest.raises(ParseError):
            parse_expression("exp(y^2)")
        with pytest.raises(ParseError):
            parse_expression("exp(u_1)")

    def test_jet_order_range(self):
        assert parse_expression("u_9").order() == 9
        with pytest.raises(ParseError):
            parse_expression("u_12")
        with pytest.raises(ParseError):
            parse_expression("u_0")

    def test_unknown_name(self):
        with pytest.raises(ParseError) as info:
            parse_expression("u + w")
        assert info.value.position == 4

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_expression("1/0")

    def test_characteristic_rejects_t(self):
        with pytest.raises(ScopeError):
            parse_characteristic("t*u_1")
        assert parse_characteristic("y*u_1").depends_on(Y)


ROUND_TRIP_CORPUS = [
    "0",
    "1",
    "-1",
    "3/2",
    "u",
    "y",
    "u_1",
    "u_3 + u*u_1",
    "-u + u_2",
    "y*u_1 + u^2",
    "exp(y)",
    "exp(-y)*u_1",
    "exp(2*y)*y^2*u_1",
    "3*exp(1/2*y)*u - 2*y",
    "exp(-2*u)*u_1^2",
    "u^2*u_2 - 1/3*u_1",
    "y^3 + y^2 + y + 1",
]


class TestRoundTrip:
    @pytest.mark.parametrize("text", ROUND_TRIP_CORPUS)
    def test_render_reparses_identically(self, text):
        e = parse_expression(text)
        assert parse_expression(e.render()) == e

    def test_render_is_canonical(self):
        a = parse_expression("u_2 - u")
        b = parse_expression("-u + u_2")
        assert a == b
        assert a.render() == b.render()

    def test_documented_render_style(self):
        text = "3*exp(2*y)*y^2*u_1"
        assert parse_expression(text).render() == text
