import math

import pytest

from nullgeo.catalog import built_in
from nullgeo.errors import ExprSyntaxError, UnknownIdentifierError
from nullgeo.expr import (Binary, Const, Unary, Var, eval_jet, parse_expr,
                          to_text, vars_used)
from nullgeo.jets import jet_var


class TestShapes:
    def test_sum_of_unary_and_var(self):
        ast = parse_expr("sinh(x)+y")
        assert ast == Binary("add", Unary("sinh", Var("x")), Var("y"))

    def test_product(self):
        ast = parse_expr("y*cos(x)")
        assert ast == Binary("mul", Var("y"), Unary("cos", Var("x")))

    def test_precedence(self):
        ast = parse_expr("1+2*3")
        assert ast == Binary("add", Const(1.0), Binary("mul", Const(2.0), Const(3.0)))

    def test_power_right_associative(self):
        ast = parse_expr("2^3^2")
        assert ast == Binary("pow", Const(2.0),
                             Binary("pow", Const(3.0), Const(2.0)))

    def test_unary_minus_binds_below_power(self):
        # -x^2 parses as -(x^2)
        ast = parse_expr("-x^2")
        assert ast == Unary("neg", Binary("pow", Var("x"), Const(2.0)))

    def test_pi(self):
        assert parse_expr("pi") == Const(math.pi)

    def test_scientific_numbers(self):
        assert parse_expr("1.5e-3") == Const(1.5e-3)
        assert parse_expr(".25") == Const(0.25)


class TestErrors:
    def test_power_of_unary_minus_is_syntax_error(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse_expr("2^-x")
        assert err.value.offset == 2

    def test_unknown_identifier_named(self):
        with pytest.raises(UnknownIdentifierError) as err:
            parse_expr("foo(x)")
        assert err.value.name == "foo"

    def test_unknown_variable(self):
        with pytest.raises(UnknownIdentifierError) as err:
            parse_expr("x+z")
        assert err.value.name == "z"

    def test_missing_closing_paren(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse_expr("sin(x")
        assert ")" in err.value.expected

    def test_trailing_garbage(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("x 2")

    def test_no_implicit_multiplication(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("2x")

    def test_stray_character(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse_expr("x + $")
        assert err.value.offset == 4


class TestRoundTrip:
    def test_catalog_round_trip(self):
        for entry in built_in().values():
            for ast in entry.surface.coords:
                assert parse_expr(to_text(ast)) == ast

    def test_negative_constant(self):
        ast = parse_expr("-1.5*x")
        assert parse_expr(to_text(ast)) == ast

    def test_nested_functions(self):
        ast = parse_expr("sinh(cos(x)+exp(y))^2")
        assert parse_expr(to_text(ast)) == ast


class TestEval:
    def test_eval_matches_math(self):
        ast = parse_expr("y*cos(x)+sinh(x)/2")
        u, v = 0.7, -1.2
        out = eval_jet(ast, jet_var("x", u), jet_var("y", v))
        assert out.v == pytest.approx(v * math.cos(u) + math.sinh(u) / 2)
        assert out.dx == pytest.approx(-v * math.sin(u) + math.cosh(u) / 2)
        assert out.dy == pytest.approx(math.cos(u))

    def test_vars_used(self):
        assert vars_used(parse_expr("sinh(x)+1")) == {"x"}
        assert vars_used(parse_expr("x*y")) == {"x", "y"}
        assert vars_used(parse_expr("2")) == set()
