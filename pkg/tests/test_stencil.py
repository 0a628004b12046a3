import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from slecoef._pycore import fill_eta, fill_rank1
from slecoef.errors import CompileError, DomainError, EtaRangeError, ParseError, UsageError
from slecoef.stencil import (
    EXTERIOR,
    INTERIOR,
    OFFSETS,
    EtaSequence,
    EulerPoly,
    OperatorDescription,
    Params,
    Poly,
    Term,
    compile_stencil,
    eta_form_coefficient,
    exterior_table,
    hand_table,
    interior_table,
    levy_table,
    loewner_operator,
)

pos_rationals = st.fractions(min_value=Fraction(1, 7), max_value=12, max_denominator=9)


# --- independent derivation: clear the two-point operator applied to a monomial


def _sympy_stencil(mode, eta_func=None):
    """Map (n, k) -> sympy expression in i, j, q, kappa for the coefficient of
    s_{i-n, j-k}, derived from L[x^a y^b] (x - 1)^2 (y - 1)^2."""
    x, y, a, b, q, kappa = sympy.symbols("x y a b q kappa")
    i, j = sympy.symbols("i j", integer=True)
    pole = (lambda z: 1 / (z - 1) ** 2) if mode == INTERIOR else (lambda z: z**2 / (z - 1) ** 2)
    sigma = -1 if mode == INTERIOR else 1
    drive = sympy.Function("eta")(a - b) if eta_func else kappa / 2 * (a - b) ** 2
    op = -drive + (x + 1) / (x - 1) * a + (y + 1) / (y - 1) * b - q * (pole(x) + pole(y) - 1) - sigma * q
    cleared = sympy.Poly(sympy.expand(sympy.cancel(op * (x - 1) ** 2 * (y - 1) ** 2)), x, y)
    shift = -1 if mode == INTERIOR else 1
    out = {}
    for n, k in OFFSETS:
        c = cleared.coeff_monomial(x**n * y**k)
        out[(n, k)] = c.subs({a: i - n + shift, b: j - k + shift})
    return out, (i, j, q, kappa)


@pytest.mark.parametrize("mode,table", [(INTERIOR, interior_table), (EXTERIOR, exterior_table)])
def test_tables_match_sympy_derivation(mode, table):
    exprs, (i, j, q, kappa) = _sympy_stencil(mode)
    lo = 1 if mode == INTERIOR else -1
    for qv, kv in [(Fraction(2), Fraction(6)), (Fraction(7, 3), Fraction(5, 2)), (Fraction(1, 2), Fraction(0))]:
        params = Params.brownian(qv, kv, mode)
        for iv in range(lo, 7):
            for jv in range(lo, 7):
                for (n, k), e in exprs.items():
                    expected = e.subs({i: iv, j: jv, q: sympy.Rational(qv.numerator, qv.denominator),
                                       kappa: sympy.Rational(kv.numerator, kv.denominator)})
                    assert table(iv, jv, n, k, params) == Fraction(int(expected.p), int(expected.q)), (iv, jv, n, k)


def test_levy_table_matches_sympy_derivation():
    exprs, (i, j, q, kappa) = _sympy_stencil(INTERIOR, eta_func=True)
    eta = EtaSequence([0, 3, 1, Fraction(7, 2), 2, 9, 4, 11, 5, 13, 6, 15, 7])
    eta_f = sympy.Function("eta")
    for iv in range(1, 7):
        for jv in range(1, 7):
            for (n, k), e in exprs.items():
                val = e.subs({i: iv, j: jv, q: sympy.Rational(5, 3)})
                val = val.replace(eta_f, lambda d: sympy.Rational(*_pair(eta[int(d)])))
                assert levy_table(iv, jv, n, k, Fraction(5, 3), eta) == Fraction(int(val.p), int(val.q))


def _pair(f: Fraction):
    return f.numerator, f.denominator


# --- compiled stencil against the transcribed tables


@given(pos_rationals, pos_rationals)
def test_compiled_interior_equals_table(q, kappa):
    st_ = compile_stencil(loewner_operator([q], kappa=kappa))
    params = Params.brownian(q, kappa)
    for i in range(1, 9):
        for j in range(1, 9):
            for n, k in OFFSETS:
                assert st_(i, j, n, k) == interior_table(i, j, n, k, params)


@given(pos_rationals, pos_rationals)
def test_compiled_exterior_equals_table(q, kappa):
    st_ = compile_stencil(loewner_operator([q], kappa=kappa, mode=EXTERIOR))
    params = Params.brownian(q, kappa, EXTERIOR)
    for i in range(-1, 8):
        for j in range(-1, 8):
            for n, k in OFFSETS:
                assert st_(i, j, n, k) == exterior_table(i, j, n, k, params)


def test_compiled_levy_equals_table_for_arbitrary_eta():
    eta = EtaSequence([0, 1, 4, 2, Fraction(9, 2), 0, 7, 3, 3, 8, 1, 2, 5, 6])
    st_ = compile_stencil(loewner_operator([Fraction(3, 2)], eta=eta))
    for i in range(1, 8):
        for j in range(1, 8):
            for n, k in OFFSETS:
                assert st_(i, j, n, k) == levy_table(i, j, n, k, Fraction(3, 2), eta)


@given(pos_rationals, pos_rationals)
def test_levy_with_brownian_eta_is_brownian_table(q, kappa):
    eta = EtaSequence.brownian(kappa)
    params = Params.brownian(q, kappa)
    for i in range(1, 7):
        for j in range(1, 7):
            for n, k in OFFSETS:
                assert levy_table(i, j, n, k, q, eta) == interior_table(i, j, n, k, params)


@given(pos_rationals, pos_rationals)
def test_exterior_eta_form_matches_exterior_table(q, kappa):
    params = Params.brownian(q, kappa, EXTERIOR)
    eta = EtaSequence.brownian(kappa)
    for i in range(-1, 7):
        for j in range(-1, 7):
            for n, k in OFFSETS:
                got = eta_form_coefficient(eta.__getitem__, i, j, n, k, q, exterior=True)
                assert got == exterior_table(i, j, n, k, params)


@given(pos_rationals, pos_rationals)
def test_eta_form_fraction_fill_equals_table_fill(q, kappa):
    for mode in (INTERIOR, EXTERIOR):
        params = Params.brownian(q, kappa, mode)
        lo = 1 if mode == INTERIOR else -1
        table_fill = fill_rank1(hand_table(params), lo, 6, Fraction(0), Fraction(1))
        _, eta_fill = fill_eta(EtaSequence.brownian(kappa).table(8), q, mode == EXTERIOR, 6,
                               Fraction(0), Fraction(1))
        assert table_fill == eta_fill


def test_rank2_stencil_shape():
    st_ = compile_stencil(loewner_operator([2, 2], kappa=6))
    assert st_.rank == 2
    assert len(st_.offsets) <= 81
    assert all(len(o) == 4 and max(o) <= 2 for o in st_.offsets)
    # pivot: -kappa/2 (A - B)^2 - (A + B) with A, B the exponent sums
    assert st_.coefficient((2, 3, 1, 4), (0, 0, 0, 0)) == -3 * (3 - 3) ** 2 - (3 + 3)
    assert st_.coefficient((3, 3, 1, 1), (0, 0, 0, 0)) == -3 * 16 - 4


def test_compile_rejects_high_pole():
    one = Poly.constant(1, 2)
    bad = OperatorDescription(1, (Term(Fraction(1), one, (3, 0), EulerPoly(one)),), Fraction(0), -1)
    with pytest.raises(CompileError):
        compile_stencil(bad)


def test_compile_rejects_wide_numerator():
    x = Poly.var(0, 2)
    one = Poly.constant(1, 2)
    bad = OperatorDescription(1, (Term(Fraction(1), x**3, (0, 0), EulerPoly(one)),), Fraction(0), -1)
    with pytest.raises(CompileError):
        compile_stencil(bad)


def test_levy_operator_rank_limit():
    with pytest.raises(UsageError):
        loewner_operator([2, 2], eta=EtaSequence.brownian(6))


# --- parameters


def test_eta_sequence_validation():
    with pytest.raises(DomainError):
        EtaSequence([1, 2])
    with pytest.raises(DomainError):
        EtaSequence([0, -1])
    with pytest.raises(DomainError):
        EtaSequence(stable=(-1, 2))
    with pytest.raises(UsageError):
        EtaSequence()


def test_eta_finite_table_never_extrapolates():
    eta = EtaSequence([0, 3, 5])
    assert eta[-2] == 5
    with pytest.raises(EtaRangeError):
        eta[3]


def test_stable_eta_is_exact():
    assert EtaSequence(stable=(Fraction(1, 2), Fraction(1, 2)))[9] == Fraction(3, 2)
    with pytest.raises(DomainError):
        EtaSequence(stable=(1, Fraction(1, 2)))[2]
    assert EtaSequence.brownian(6)[3] == 27


def test_eta_json_roundtrip(tmp_path):
    for eta in (EtaSequence([0, 3, Fraction(9, 4)]), EtaSequence(stable=(Fraction(3), Fraction(3, 2)))):
        path = tmp_path / "eta.json"
        path.write_text(json.dumps(eta.to_json()))
        assert EtaSequence.load(path) == eta
    path.write_text('{"eta": [0, 0.5]}')
    with pytest.raises(ParseError):
        EtaSequence.load(path)


def test_params_exterior_needs_brownian():
    with pytest.raises(UsageError):
        Params.levy(2, EtaSequence.brownian(6), EXTERIOR)
    with pytest.raises(UsageError):
        Params.brownian(2, 6, "sideways")


def test_params_negative_kappa():
    with pytest.raises((DomainError, UsageError)):
        Params.brownian(2, -1)


@given(pos_rationals, pos_rationals)
def test_tables_symmetric_under_point_exchange(q, kappa):
    # C_{i,j}^{n,k} = C_{j,i}^{k,n}
    eta = EtaSequence([0, 3, 1, Fraction(7, 2), 2, 9, 4, 11, 5, 13])
    for mode, table, lo in ((INTERIOR, interior_table, 1), (EXTERIOR, exterior_table, -1)):
        params = Params.brownian(q, kappa, mode)
        for i in range(lo, 7):
            for j in range(lo, 7):
                for n, k in OFFSETS:
                    assert table(i, j, n, k, params) == table(j, i, k, n, params)
                    if mode == INTERIOR:
                        assert levy_table(i, j, n, k, q, eta) == levy_table(j, i, k, n, q, eta)
