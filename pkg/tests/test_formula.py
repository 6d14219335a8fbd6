import math

import numpy as np
import pytest

from ebilliard.formula import Formula, FormulaError


def test_grammar_accepts_catalog_style():
    f = Formula("(s2 + s3 - s1)*(s2 - s3)**2/s1")
    assert f(3.0, 4.0, 5.0, 0, 0, 0) == pytest.approx(6 * 1 / 3)
    g = Formula("sec(A) - csc(B) + sqrt(s1) + tan(C) + sin(A)")
    A, B, C = 0.3, 0.5, 0.7
    assert g(4.0, 1, 1, A, B, C) == pytest.approx(1 / math.cos(A) - 1 / math.sin(B) + 2 + math.tan(C) + math.sin(A))
    assert Formula("-s1 + +s2")(1.0, 2.0, 0, 0, 0, 0) == 1.0


@pytest.mark.parametrize(
    "bad",
    ["s4", "__import__('os')", "s1.real", "lambda: 1", "cos(s1, s2)", "s1 if s2 else s3", "", "s1 +", "'x'", "exp(s1)"],
)
def test_grammar_rejects(bad):
    with pytest.raises(FormulaError):
        Formula(bad)


def test_trilinears_cyclic():
    f = Formula("s2 + s3 - s1")
    s = np.array([3.0, 4.0, 5.0])
    np.testing.assert_allclose(f.trilinears(s, np.zeros(3)), [6.0, 4.0, 2.0])


def test_vanishing_denominator_gives_vertex():
    # 1/(s2 - s3) with s2 = s3: only the first coordinate survives
    f = Formula("1/(s2 - s3)")
    tri = f.trilinears(np.array([1.0, 2.0, 2.0]), np.zeros(3))
    assert tri[0] != 0 and tri[1] == 0 and tri[2] == 0


def test_reciprocal_is_isogonal_conjugate():
    f = Formula("cos(A)")
    ang = np.array([0.5, 1.0, math.pi - 1.5])
    a = f.trilinears(np.ones(3), ang)
    r = f.trilinears(np.ones(3), ang, reciprocal=True)
    np.testing.assert_allclose(a * r / (a * r)[0], 1.0)
