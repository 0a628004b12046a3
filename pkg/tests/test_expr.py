from fractions import Fraction

import pytest

from slecoef.errors import ParseError
from slecoef.expr import evaluate


def test_exact_evaluation():
    assert evaluate("2*q**2/(2+kappa)", q=Fraction(3), kappa=Fraction(1, 2)) == Fraction(36, 5)
    assert evaluate("-x + +1", x=Fraction(1, 3)) == Fraction(2, 3)
    assert evaluate("x**-2", x=2) == Fraction(1, 4)


@pytest.mark.parametrize("text", ["x**(1/2)", "1.5", "f(x)", "x if x else 1", "import os", "y"])
def test_rejects(text):
    with pytest.raises(ParseError):
        evaluate(text, x=Fraction(4))
