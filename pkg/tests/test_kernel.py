from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from lvfield.kernel import (
    ONE,
    ZERO,
    GScalar,
    HalfIndex,
    IndexWindow,
    PiScalar,
    nullspace,
    rank,
    rational,
    rational_arith,
    rref,
)

fracs = st.fractions(max_denominator=20).filter(lambda q: abs(q) < 50)
gscalars = st.builds(GScalar, fracs, fracs)


def test_rational_parsing():
    assert rational("1/2") == Fraction(1, 2)
    assert rational(3) == 3
    with pytest.raises(TypeError):
        rational(0.5)
    with pytest.raises(TypeError):
        rational(True)


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        rational_arith(Fraction(1), Fraction(0), "/")
    with pytest.raises(ZeroDivisionError):
        GScalar(1, 1) / ZERO


@given(gscalars, gscalars)
def test_gscalar_matches_complex(a, b):
    for got, want in ((a + b, complex(a) + complex(b)), (a * b, complex(a) * complex(b)), (a - b, complex(a) - complex(b))):
        assert abs(complex(got) - want) < 1e-9
    if b:
        assert abs(complex(a / b) - complex(a) / complex(b)) < 1e-9
        assert (a / b) * b == a


@given(gscalars)
def test_gscalar_text_round_trip(a):
    assert GScalar.parse(str(a)) == a


@pytest.mark.parametrize(
    "g,text", [(GScalar(Fraction(3, 2)), "3/2"), (GScalar(0, 2), "2i"), (GScalar(-1, 2), "-1+2i"), (GScalar(Fraction(1, 2), Fraction(-3, 4)), "1/2-3/4i")]
)
def test_gscalar_text_forms(g, text):
    assert str(g) == text
    assert GScalar.parse(text) == g


def test_gscalar_conj_and_norm():
    g = GScalar(3, -4)
    assert g.conj() == GScalar(3, 4)
    assert g.norm2() == 25
    assert g * g.conj() == GScalar(25)


def test_pi_scalar():
    p = PiScalar(Fraction(-8, 3))
    assert str(p) == "-8/3*pi"
    assert abs(float(p) + 8 / 3 * 3.141592653589793) < 1e-12
    assert p + PiScalar(Fraction(8, 3)) == PiScalar(0)
    with pytest.raises(ValueError):
        p + PiScalar(1, power=2)


def test_half_index_and_windows():
    h = HalfIndex.of(Fraction(1, 2))
    assert h.doubled == 1 and h.value == Fraction(1, 2) and h.shift == Fraction(1, 2)
    w = IndexWindow(Fraction(-3, 2), Fraction(3, 2))
    assert [str(i) for i in w] == ["-3/2", "-1/2", "1/2", "3/2"]
    assert Fraction(1, 2) in w and 1 not in w
    assert IndexWindow(-10, 10).shrink(2) == IndexWindow(-8, 8)
    with pytest.raises(ValueError):
        IndexWindow(1, 3).shrink(2)
    with pytest.raises(ValueError):
        IndexWindow(0, Fraction(1, 2))


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_matches_sympy(rows):
    M = sympy.Matrix(rows)
    ours = nullspace([[Fraction(v) for v in r] for r in rows])
    assert len(ours) == len(M.nullspace())
    assert rank(rows) == M.rank()
    for v in ours:
        assert all(sum(Fraction(r[j]) * v[j] for j in range(4)) == 0 for r in rows)


def test_rref_complex_entries():
    rows = [[GScalar(0, 1), ONE], [ONE, GScalar(0, -1)]]
    # second row = -i * first row
    assert rank(rows) == 1
    R, piv = rref(rows)
    assert piv == [0]
