from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from slecoef.arith import (
    BigFloat,
    BiSeries,
    as_rational,
    binom_general,
    biseries_mul,
    biseries_pow,
    exact_sqrt,
    rational_parse,
    render,
)
from slecoef.errors import DomainError, ParseError, UsageError

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)
small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)


@pytest.mark.parametrize("text,value", [
    ("3", Fraction(3)),
    ("-7/21", Fraction(-1, 3)),
    ("10/9", Fraction(10, 9)),
    (" 4/-6 ", Fraction(-2, 3)),
    ("+5", Fraction(5)),
])
def test_rational_parse(text, value):
    assert rational_parse(text) == value


@pytest.mark.parametrize("text", ["1.5", "1e3", "1/0", "", "a/b", "1//2", "2/3/4"])
def test_rational_parse_rejects(text):
    with pytest.raises(ParseError):
        rational_parse(text)


@given(rationals)
def test_render_roundtrip(x):
    assert rational_parse(render(x)) == x
    # reduced with positive denominator
    text = render(x)
    if "/" in text:
        p, r = text.split("/")
        assert int(r) > 1
        assert sympy.gcd(int(p), int(r)) == 1


def test_as_rational_refuses_floats():
    with pytest.raises(UsageError):
        as_rational(0.5)
    with pytest.raises(UsageError):
        as_rational(True)
    assert as_rational("3/4") == Fraction(3, 4)


@given(rationals, rationals, rationals)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    if b:
        assert (a / b) * b == a


def test_exact_sqrt():
    assert exact_sqrt(Fraction(25, 49)) == Fraction(5, 7)
    assert exact_sqrt(Fraction(2)) is None
    assert exact_sqrt(Fraction(-4)) is None


@given(small_rationals, st.integers(min_value=0, max_value=12))
def test_binom_general_matches_sympy(a, k):
    expected = sympy.binomial(sympy.Rational(a.numerator, a.denominator), k)
    assert binom_general(a, k) == Fraction(int(expected.p), int(expected.q))


def test_binom_general_half():
    # (1/2)(-1/2)(-3/2)/3! by hand
    assert binom_general(Fraction(1, 2), 3) == Fraction(1, 16)


# BigFloat against mpmath at much higher working precision


@pytest.mark.parametrize("prec", [53, 128, 300])
@given(x=st.fractions(min_value=Fraction(1, 997), max_value=1000, max_denominator=997),
       y=st.fractions(min_value=Fraction(1, 991), max_value=1000, max_denominator=991))
def test_bigfloat_correct_rounding_bound(prec, x, y):
    a, b = BigFloat(x, prec), BigFloat(y, prec)
    with mpmath.workprec(prec + 200):
        for got, exact in [
            (a + b, mpmath.mpf(x.numerator) / x.denominator + mpmath.mpf(y.numerator) / y.denominator),
            (a * b, (mpmath.mpf(x.numerator) / x.denominator) * (mpmath.mpf(y.numerator) / y.denominator)),
            (a / b, (mpmath.mpf(x.numerator) / x.denominator) / (mpmath.mpf(y.numerator) / y.denominator)),
            (a.sqrt(), mpmath.sqrt(mpmath.mpf(x.numerator) / x.denominator)),
        ]:
            rel = abs(mpmath.mpf(str(got)) - exact) / abs(exact)
            # operands are rounded once on entry, result once more
            assert rel <= 4 * mpmath.mpf(2) ** (-prec)


def test_bigfloat_precision_floor():
    with pytest.raises(DomainError):
        BigFloat(1, 52)


def test_bigfloat_mixed_precision_takes_max():
    assert (BigFloat(1, 64) + BigFloat(1, 200)).precision == 200


def test_bigfloat_str_roundtrip():
    x = BigFloat(Fraction(1, 3), 128)
    assert BigFloat(str(x), 128) == x


# truncated bivariate series


def _sympy_coeffs(expr, n):
    w, v = sympy.symbols("w v")
    poly = sympy.expand(sympy.series(sympy.series(expr, w, 0, n + 1).removeO(), v, 0, n + 1).removeO())
    P = sympy.Poly(poly, w, v)
    out = {}
    for (i, j), c in P.terms():
        if i <= n and j <= n:
            out[(i, j)] = Fraction(int(c.p), int(c.q))
    return out


@pytest.mark.parametrize("exponent", [Fraction(1, 2), Fraction(-3), Fraction(7, 3), Fraction(-49, 8)])
def test_biseries_pow_matches_sympy_series(exponent):
    n = 5
    base = BiSeries.from_terms({(0, 0): 1, (1, 0): -1, (1, 1): Fraction(1, 2), (0, 2): 3}, n)
    got = biseries_pow(base, exponent)
    w, v = sympy.symbols("w v")
    e = sympy.Rational(exponent.numerator, exponent.denominator)
    expected = _sympy_coeffs((1 - w + w * v / 2 + 3 * v**2) ** e, n)
    for i in range(n + 1):
        for j in range(n + 1):
            assert got[i, j] == expected.get((i, j), 0), (i, j)


series_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda t: t != (0, 0)),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    max_size=4,
)


@given(series_terms, small_rationals, small_rationals)
def test_pow_additivity(terms, a, b):
    base = BiSeries.from_terms({(0, 0): 1, **terms}, 4)
    assert biseries_mul(biseries_pow(base, a), biseries_pow(base, b)) == biseries_pow(base, a + b)


@given(series_terms)
def test_integer_pow_is_repeated_product(terms):
    base = BiSeries.from_terms({(0, 0): 1, **terms}, 4)
    assert biseries_pow(base, 3) == base * base * base
    assert biseries_pow(base, 0) == BiSeries.constant(1, 4)


@given(series_terms, series_terms)
def test_truncation_commutes_with_product(t1, t2):
    a6 = BiSeries.from_terms({(0, 0): 2, **t1}, 6)
    b6 = BiSeries.from_terms({(0, 0): -1, **t2}, 6)
    a3 = BiSeries.from_terms({(0, 0): 2, **t1}, 3)
    b3 = BiSeries.from_terms({(0, 0): -1, **t2}, 3)
    big, small = a6 * b6, a3 * b3
    assert all(big[i, j] == small[i, j] for i in range(4) for j in range(4))


def test_pow_needs_unit_constant():
    with pytest.raises(DomainError):
        biseries_pow(BiSeries.from_terms({(0, 0): 2}, 3), Fraction(1, 2))


def test_mul_truncation_mismatch():
    with pytest.raises(UsageError):
        BiSeries.constant(1, 2) * BiSeries.constant(1, 3)


def test_getitem_outside_is_zero():
    s = BiSeries.constant(5, 2)
    assert s[3, 0] == 0 and s[-1, 0] == 0 and s[0, 0] == 5
