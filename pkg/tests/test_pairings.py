import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy

from lvfield import pairings as pr
from lvfield.kernel import GScalar, IndexWindow, PiScalar
from lvfield.pairings import PairingMatrix, VectorCoeffs
from lvfield.suites import rand_banded, rand_vector


def test_bandwidth_enforced():
    w = IndexWindow(1, 4)
    with pytest.raises(ValueError):
        PairingMatrix(w, {(1, 3): 1}, 1)
    with pytest.raises(ValueError):
        PairingMatrix(w, {(1, 5): 1})
    assert PairingMatrix(w, {(1, 2): 1}, 1).actual_bandwidth() == 1


def test_compose_apply_against_dense_column_convention():
    # the operator's usual matrix (column j = image of e_j) is the transpose of the table
    rng = random.Random(0)
    w = IndexWindow(1, 5)
    for _ in range(10):
        A, B = rand_banded(rng, w, pr.FULL), rand_banded(rng, w, pr.FULL)
        h = rand_vector(rng, w)
        opA, opB = A.to_dense().T, B.to_dense().T
        assert np.allclose(A.compose(B).to_dense().T, opA @ opB)
        assert np.allclose(A.apply(h).to_array(), opA @ h.to_array())
        assert np.allclose(A.adjoint_apply(h).to_array(), opA.T @ h.to_array())


def test_commutator_is_operator_commutator():
    rng = random.Random(1)
    w = IndexWindow(1, 4)
    A, B = rand_banded(rng, w, pr.FULL), rand_banded(rng, w, pr.FULL)
    opA, opB = A.to_dense().T, B.to_dense().T
    assert np.allclose(pr.commutator(A, B).to_dense().T, opA @ opB - opB @ opA)


@pytest.mark.parametrize("n,m,k", [(1, 1, 2), (2, 1, 1), (1, 2, 1), (3, 2, 5), (2, 3, 1), (4, 4, 4)])
def test_sine_triple_symbolic(n, m, k):
    x = sympy.symbols("x")
    val = sympy.integrate(sympy.sin(n * x) * sympy.diff(sympy.sin(m * x), x) * sympy.sin(k * x), (x, 0, 2 * sympy.pi)) / sympy.pi
    assert sympy.nsimplify(val) == sympy.Rational(pr.sine_derivative_triple(n, m, k))


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (3, 2), (2, 5)])
def test_x2dx_symbolic(n, m):
    x = sympy.symbols("x")
    val = sympy.integrate(x**2 * sympy.diff(sympy.sin(n * x), x) * sympy.sin(m * x), (x, 0, 2 * sympy.pi)) / sympy.pi
    entry = pr.x2dx_matrix(IndexWindow(1, 5))[n, m]
    assert sympy.simplify(val - sympy.Rational(entry.coeff) * sympy.pi) == 0


def test_x2dx_table():
    X = pr.x2dx_matrix(IndexWindow(1, 4))
    assert X[1, 1] == PiScalar(-1)
    assert X[1, 2] == PiScalar(Fraction(-8, 3))
    assert X.is_pi_graded()
    assert abs(float(X[2, 3]) - pr.x2dx_quadrature(2, 3, 10001)) < 1e-8


def test_sine_operator_closed_form():
    w = IndexWindow(1, 4)
    c = VectorCoeffs(w, {1: 2, 3: Fraction(1, 2)})
    A = pr.sine_operator_matrix("1/3", c, w)
    lam = Fraction(1, 3)
    cc = lambda j: c[j] if 1 <= j <= 4 else GScalar(0)
    for m in range(1, 5):
        for k in range(1, 5):
            want = (cc(m + k) + cc(k - m) - cc(m - k)) * (Fraction(m, 2) * (1 - lam))
            if m == k:
                want = want - lam * m * m
            assert A[m, k] == want
    assert A.bandwidth == 3


def test_monomial_and_circle_fields():
    w = IndexWindow(-5, 5)
    A = pr.monomial_field_matrix(2, w)  # x^2 d/dx: x^k -> k x^(k+1)
    assert A[3, 4] == GScalar(3) and A[0, 1] == GScalar(0)
    C = pr.circle_field_matrix(1, w)
    assert C[2, 3] == GScalar(0, 2)


def test_sv_action_window_shift():
    w = IndexWindow(Fraction(-5, 2), Fraction(5, 2))
    A = pr.sv_action_matrix(1, "1/2", "1/2", w)
    assert A[Fraction(1, 2), Fraction(3, 2)] == GScalar(0)
    assert A[Fraction(3, 2), Fraction(5, 2)] == GScalar(1)
    with pytest.raises(ValueError):
        pr.sv_action_matrix(1, 0, 0, w)


def test_map_induced():
    A = pr.map_induced_matrix([1, 2, 0])
    phi = VectorCoeffs(A.window, {0: 5, 1: 7, 2: 11})
    # (phi o h)(l) = phi(h(l))
    assert A.apply(phi).to_list() == [GScalar(7), GScalar(11), GScalar(5)]
    with pytest.raises(ValueError):
        pr.map_induced_matrix([0, 3])


def test_basis_spec_dispatch():
    spec = pr.BasisSpec("sine_0_2pi", {"operator": "sine", "lambda": "1/2", "c": {"1": "1"}})
    A = pr.basis_matrix(spec, IndexWindow(1, 3))
    assert A[1, 1] == GScalar(Fraction(-1, 2))
    with pytest.raises(ValueError):
        pr.BasisSpec("nonsense", {})


def test_quadrature_negative_control():
    err = max(abs(float(pr.sine_derivative_triple(n, m, k)) - pr.sine_triple_quadrature(n, m, k, 100)) for n, m, k in [(10, 10, 10), (9, 10, 1)])
    assert err > 1e-10
    assert abs(pr.quadrature_oracle(np.sin, np.sin, 10001) - 1.0) < 1e-12
    assert math.isclose(pr.quadrature_oracle(lambda x: np.ones_like(x), lambda x: np.ones_like(x), 101), 2.0)
