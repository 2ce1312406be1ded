"""Expression grammar: parsing, printing, round trips, error positions."""

import pytest
from hypothesis import given

from poisson_forge.expr import InvertibilityError, format_poly
from poisson_forge.parse import ParseError, parse_expr
from tests.test_expr import CTX, QCTX, small_polys


class TestParse:
    def test_bracket_value(self):
        assert parse_expr("-3*X1*X2", CTX) == CTX.monomial({"X1": 1, "X2": 1}, -3)

    def test_inverse_monomial(self):
        assert parse_expr("X5^-1", CTX) == CTX.monomial({"X5": -1})

    def test_unknown_identifier(self):
        with pytest.raises(ParseError) as err:
            parse_expr("X7", CTX)
        assert "X7" in str(err.value)
        assert err.value.position == 0

    def test_mask_violation(self):
        with pytest.raises(InvertibilityError):
            parse_expr("X1^-1", CTX)

    def test_rationals(self):
        assert parse_expr("3/2*X4", CTX) == CTX.monomial({"X4": 1}, "3/2")
        assert parse_expr("2^3", CTX) == CTX.scalar(8)
        assert parse_expr("-1/2", CTX) == CTX.scalar("-1/2")

    def test_parentheses_and_powers(self):
        assert parse_expr("(X1 + 1)^2", CTX) == parse_expr("X1^2 + 2*X1 + 1", CTX)
        assert parse_expr("(2*X5)^-1", CTX) == CTX.monomial({"X5": -1}, "1/2")

    def test_negation_binds_after_power(self):
        assert parse_expr("-X1^2", CTX) == -CTX.monomial({"X1": 2})

    def test_whitespace_insignificant(self):
        assert parse_expr(" X1 \t+\n2 ", CTX) == parse_expr("X1+2", CTX)

    def test_syntax_error_position(self):
        with pytest.raises(ParseError) as err:
            parse_expr("X1 + * X2", CTX)
        assert err.value.position == 5

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse_expr("X1 X2", CTX)

    def test_division_is_not_an_operator(self):
        with pytest.raises(ParseError):
            parse_expr("X1/2", CTX)

    def test_aliases(self):
        assert parse_expr("X3^2", QCTX, aliases={f"X{i}": f"x{i}" for i in range(1, 7)}) \
            == QCTX.monomial({"x3": 2})


class TestFormat:
    def test_zero(self):
        assert format_poly(CTX.zero()) == "0"

    def test_known_order(self):
        p = parse_expr("x2*x5 - 2*x1*x3*x5 + 2*alpha + 3*x1*x4", QCTX)
        assert str(p) == "2*alpha + 3*x1*x4 + x2*x5 - 2*x1*x3*x5"

    def test_laurent_order(self):
        p = parse_expr("X5^3*X6^-2 + X2 - 3*X3*X5*X6^-1 + 3/2*X4*X6^-1", CTX)
        assert str(p) == "X2 + 3/2*X4*X6^-1 - 3*X3*X5*X6^-1 + X5^3*X6^-2"

    def test_leading_negative(self):
        assert str(parse_expr("-3*X1*X2", CTX)) == "-3*X1*X2"

    def test_unit_coefficients_suppressed(self):
        assert str(parse_expr("1*X1 - 1*X2", CTX)) == "X1 - X2"

    @given(small_polys(CTX))
    def test_parse_format_roundtrip(self, f):
        assert parse_expr(format_poly(f), CTX) == f

    @given(small_polys(QCTX, names=("x3", "x5", "alpha")))
    def test_roundtrip_with_parameters(self, f):
        assert parse_expr(format_poly(f), QCTX) == f
