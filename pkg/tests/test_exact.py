"""Ring axioms, calculus rules and grammar round-trips for the exact core."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from doublealg.exact import Chart, ChartMismatch, Polynomial, UnknownCoordinate, poly_arith
from doublealg.parsing import ParseError, parse_polynomial

XY = Chart(["x", "y"])
POINT = Chart([])


def P(text, chart=XY):
    return parse_polynomial(text, chart)


coeffs = st.builds(
    Fraction, st.integers(-40, 40), st.integers(1, 8)
)
exponents = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exponents, coeffs, max_size=5).map(lambda d: Polynomial(XY, d))


def brute_force_product(p: Polynomial, q: Polynomial) -> Polynomial:
    """Independent oracle: expand by repeated distribution, one monomial at
    a time, accumulating with plain additions."""
    total = Polynomial.zero(p.chart)
    for e1, c1 in p.terms:
        for e2, c2 in q.terms:
            exp = tuple(a + b for a, b in zip(e1, e2))
            total = total + Polynomial(p.chart, {exp: c1 * c2})
    return total


class TestRing:
    def test_difference_of_squares(self):
        assert P("x + 1") * P("x - 1") == P("x^2 - 1")

    def test_additive_identity(self):
        p = P("x^2 + 2 * x * y - 1/3")
        assert p + Polynomial.zero(XY) == p

    def test_square_of_sum_matches_distribution_oracle(self):
        p = P("x + y")
        expected = brute_force_product(p, p)
        assert p * p == expected
        assert p * p == P("x^2 + 2 * x * y + y^2")

    @given(polys, polys)
    @settings(max_examples=60, deadline=None)
    def test_product_matches_oracle(self, p, q):
        assert p * q == brute_force_product(p, q)

    @given(polys, polys, polys)
    @settings(max_examples=60, deadline=None)
    def test_associativity_and_distributivity(self, p, q, r):
        assert (p + q) + r == p + (q + r)
        assert p * (q + r) == p * q + p * r

    @given(polys, polys)
    @settings(max_examples=40, deadline=None)
    def test_commutativity(self, p, q):
        assert p + q == q + p
        assert p * q == q * p

    def test_poly_arith_dispatch(self):
        p, q = P("x"), P("y")
        assert poly_arith(p, q, "add") == P("x + y")
        assert poly_arith(p, q, "mul") == P("x * y")
        with pytest.raises(ValueError):
            poly_arith(p, q, "sub")

    def test_chart_mismatch_rejected(self):
        with pytest.raises(ChartMismatch):
            P("x") + parse_polynomial("x", Chart(["x"]))

    def test_no_zero_terms_stored(self):
        assert (P("x") - P("x")).terms == ()
        assert (P("x") - P("x")).is_zero


class TestPartial:
    def test_power_rule(self):
        assert P("x^2 * y").partial("x") == P("2 * x * y")

    def test_constant(self):
        assert P("5/7").partial("x").is_zero

    def test_unknown_coordinate(self):
        with pytest.raises(UnknownCoordinate):
            P("x").partial("z")

    @given(polys)
    @settings(max_examples=60, deadline=None)
    def test_mixed_partials_commute(self, p):
        assert p.partial("x").partial("y") == p.partial("y").partial("x")

    @given(polys, polys)
    @settings(max_examples=60, deadline=None)
    def test_derivation_rule(self, p, q):
        lhs = (p * q).partial("x")
        assert lhs == p * q.partial("x") + q * p.partial("x")


class TestChartAndValues:
    def test_point_chart(self):
        c = Polynomial.constant(POINT, Fraction(3, 2))
        assert c * c == Polynomial.constant(POINT, Fraction(9, 4))
        assert str(c) == "3/2"

    def test_distinct_names_enforced(self):
        with pytest.raises(ValueError):
            Chart(["x", "x"])

    def test_evaluate(self):
        p = P("x^2 + y - 1/2")
        assert p.evaluate([Fraction(2), Fraction(1, 3)]) == Fraction(4) + Fraction(1, 3) - Fraction(1, 2)

    def test_lift_restrict_roundtrip(self):
        big = Chart(["x", "y", "z"])
        p = P("x * y + 2")
        lifted = p.lift(big)
        assert lifted.restrict(XY) == p
        with pytest.raises(ValueError):
            parse_polynomial("z", big).restrict(XY)

    def test_substitute(self):
        target = Chart(["u", "v"])
        image = parse_polynomial("u + v", target)
        p = P("x^2 + y")
        got = p.substitute({"x": image, "y": parse_polynomial("u * v", target)})
        assert got == parse_polynomial("u^2 + 2 * u * v + v^2 + u * v", target)

    def test_coefficient_of(self):
        p = P("2 * x * y + y + 3")
        assert p.coefficient_of("x") == P("2 * y")
        with pytest.raises(ValueError):
            P("x^2").coefficient_of("x")


class TestGrammar:
    @given(polys)
    @settings(max_examples=80, deadline=None)
    def test_print_parse_roundtrip(self, p):
        assert parse_polynomial(str(p), XY) == p

    def test_parse_print_roundtrip_on_canonical_text(self):
        for text in ("x^2 + 2 * x * y + y^2", "3/4 * x - 1", "0", "x", "-x + 1/2"):
            assert str(parse_polynomial(text, XY)) == text

    def test_zero(self):
        assert parse_polynomial("0", XY).is_zero
        assert str(Polynomial.zero(XY)) == "0"

    def test_errors_carry_position(self):
        with pytest.raises(ParseError):
            parse_polynomial("x + * y", XY)
        with pytest.raises(ParseError):
            parse_polynomial("q + 1", XY)
        with pytest.raises(ParseError):
            parse_polynomial("x ^ y", XY)
