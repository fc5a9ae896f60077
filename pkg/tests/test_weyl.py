import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from lvfield import weyl as wy
from lvfield.kernel import GScalar
from lvfield.suites import rand_polynomial, rand_weyl

W = wy.from_text


def test_normal_order_examples():
    assert wy.to_text(W("d[1] x[1]")) == "1 + x[1] d[1]"
    assert wy.to_text(W("x[1] d[1] x[1] d[1]")) == "x[1] d[1] + x[1]^2 d[1]^2"
    assert wy.to_text(wy.commutator(W("x[1] d[2]"), W("x[2] d[1]"))) == "x[1] d[1] + (-1) x[2] d[2]"


def test_text_forms():
    w = W("(3/2) x[1] d[2] + (-1+2i) x[4] d[4]")
    assert wy.to_text(w) == "(3/2) x[1] d[2] + (-1+2i) x[4] d[4]"
    assert W("x[1]^1") == W("x[1]")
    assert W("(5)") == wy.WeylElement.scalar(5)
    assert W("x[1/2] d[-3/2]").coeff(wy.Monomial.make({Fraction(1, 2): 1}, {Fraction(-3, 2): 1})) == GScalar(1)
    with pytest.raises(ValueError):
        W("x[1] +")
    with pytest.raises(ValueError):
        W("y[1]")


def test_leibniz_higher_powers():
    # d^2 x^3 = x^3 d^2 + 6 x^2 d + 6 x
    assert W("d[1]^2 x[1]^3") == W("x[1]^3 d[1]^2 + (6) x[1]^2 d[1] + (6) x[1]")


def test_degree_cap():
    a = W("x[1]^5 d[1]^3")
    with pytest.raises(wy.DegreeCapExceeded):
        wy.multiply(a, a)
    assert wy.multiply(a, a, degree_cap=None)


def test_linearity_certificate_both_readings():
    cert = wy.check_linear(W("x[1] d[2] + x[3] + d[4] + (2)"))
    assert cert.is_linear and cert.literal_degree_ok
    cert = wy.check_linear(W("x[1]^2"))
    assert not cert.is_linear and cert.literal_degree_ok
    cert = wy.check_linear(W("x[1]^2 d[1]"))
    assert not cert.is_linear and not cert.literal_degree_ok


# --- oracle: the Weyl algebra acting on sympy polynomials by differentiation ---

X = sympy.symbols("x1:4")


def _sympy_apply(w: wy.WeylElement, p):
    out = 0
    for m, c in w.terms.items():
        q = p
        for i, k in m.d:
            q = sympy.diff(q, X[i // 2 - 1], k)
        for i, k in m.x:
            q = q * X[i // 2 - 1] ** k
        out += sympy.Rational(c.re.numerator, c.re.denominator) * q
    return sympy.expand(out)


def _to_sympy(p: wy.WeylElement):
    return _sympy_apply(p, sympy.Integer(1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_product_matches_sympy_operator_composition(seed):
    rng = random.Random(seed)
    a, b = rand_weyl(rng), rand_weyl(rng)
    p = _to_sympy(rand_polynomial(rng))
    ab = wy.multiply(a, b, degree_cap=None)
    assert _sympy_apply(ab, p) == sympy.expand(_sympy_apply(a, _sympy_apply(b, p)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_apply_to_polynomial_matches_sympy(seed):
    rng = random.Random(seed)
    a, p = rand_weyl(rng), rand_polynomial(rng)
    assert _to_sympy(wy.apply_to_polynomial(a, p)) == _sympy_apply(a, _to_sympy(p))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_associativity_and_round_trip(seed):
    rng = random.Random(seed)
    a, b, c = (rand_weyl(rng) for _ in range(3))
    mul = lambda u, v: wy.multiply(u, v, degree_cap=None)
    assert mul(mul(a, b), c) == mul(a, mul(b, c))
    assert W(wy.to_text(a)) == a


def test_commutator_antisymmetry_and_jacobi():
    rng = random.Random(3)
    for _ in range(10):
        a, b, c = (rand_weyl(rng, max_deg=1) for _ in range(3))
        cm = lambda u, v: wy.commutator(u, v, degree_cap=None)
        assert cm(a, b) == -cm(b, a)
        assert cm(a, cm(b, c)) + cm(b, cm(c, a)) + cm(c, cm(a, b)) == wy.WeylElement.zero()


def test_restrict_and_indices():
    w = W("x[1] d[2] + x[5] d[1]")
    from lvfield.kernel import IndexWindow

    assert w.restrict(IndexWindow(1, 3)) == W("x[1] d[2]")
    assert w.max_degree() == 2
