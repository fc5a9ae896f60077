import cmath
import random
from fractions import Fraction

import pytest

from lvfield import cuntz as cz
from lvfield import wavelet as wv
from lvfield.kernel import GScalar
from lvfield.wavelet import LaurentPoly

P = wv.from_text
z = LaurentPoly.monomial


def test_operator_examples():
    s2 = wv.standard_qmf(2)
    assert wv.S(0, z(3), s2) == z(6)
    assert wv.S(1, z(3), s2) == z(7)
    assert wv.S_star(1, z(3), s2) == z(1)
    assert not wv.S_star(1, z(2), s2)
    assert wv.S_star(0, z(-4), s2) == z(-2)


def test_text_round_trip():
    p = P("z^{-2} + (1/2) z^{3}")
    assert p == z(-2) + z(3, Fraction(1, 2))
    assert wv.to_text(p) == "z^{-2} + (1/2) z^{3}"
    assert P(wv.to_text(p)) == p
    assert wv.to_text(LaurentPoly.constant(3)) == "(3)"
    assert wv.to_text(LaurentPoly.constant(1)) == "1"
    with pytest.raises(ValueError):
        P("z^{1} +")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_qmf_standard(n):
    assert all(r.ok for r in wv.verify_qmf(wv.standard_qmf(n)))


def test_qmf_broken_control():
    broken = wv.QMFSystem(2, [z(0), z(2)])
    res = wv.verify_qmf(broken)
    assert not all(r.ok for r in res)
    assert any(not r.ok and r.name.startswith("qmf-ortho") for r in res)
    with pytest.raises(ValueError):
        wv.QMFSystem(1, [z(0)])
    with pytest.raises(ValueError):
        wv.QMFSystem(3, [z(0), z(1)])


def _rand_poly(rng, span=30):
    return LaurentPoly({k: GScalar(rng.randint(-3, 3), rng.randint(-3, 3)) for k in rng.sample(range(-span, span + 1), 5)})


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cuntz_relations_on_monomials(n):
    sys = wv.standard_qmf(n)
    for k in range(-30, 31):
        f = z(k)
        total = LaurentPoly()
        for i in range(n):
            for j in range(n):
                got = wv.S_star(i, wv.S(j, f, sys), sys)
                assert got == (f if i == j else LaurentPoly())
            total = total + wv.S(i, wv.S_star(i, f, sys), sys)
        assert total == f


@pytest.mark.parametrize("n", [2, 3, 4])
def test_isometry_and_adjoint(n):
    sys = wv.standard_qmf(n)
    rng = random.Random(n)
    for _ in range(20):
        f, g = _rand_poly(rng), _rand_poly(rng)
        i = rng.randrange(n)
        assert wv.S(i, f, sys).norm2() == f.norm2()
        # <S_i f, g> = <f, S_i* g>
        lhs = (wv.S(i, f, sys) * g.conj()).mean()
        rhs = (f * wv.S_star(i, g, sys).conj()).mean()
        assert lhs == rhs


def test_numeric_point_evaluation_oracle():
    # S_i* evaluated directly as an average over the n-th roots, at points on the unit circle
    rng = random.Random(0)
    for n in (2, 3, 4):
        sys = wv.standard_qmf(n)
        for _ in range(5):
            f = _rand_poly(rng, 8)
            i = rng.randrange(n)
            for t in (0.3, 1.7, 4.1):
                zz = cmath.exp(1j * t)
                roots = [cmath.exp(1j * (t + 2 * cmath.pi * r) / n) for r in range(n)]
                want = sum(sys.filter(i)(w).conjugate() * f(w) for w in roots) / n
                assert abs(wv.S_star(i, f, sys)(zz) - want) < 1e-9
                assert abs(wv.S(i, f, sys)(zz) - sys.filter(i)(zz) * f(zz**n)) < 1e-9


def test_wavelet_D_routes_agree():
    rng = random.Random(1)
    for n in (2, 3, 4):
        sys = wv.standard_qmf(n)
        for _ in range(10):
            Pm = [[GScalar(rng.randint(-3, 3), rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
            f = _rand_poly(rng)
            assert wv.wavelet_D(Pm, sys, f) == wv.wavelet_D_composed(Pm, sys, f)


def test_wavelet_D_examples():
    sys = wv.standard_qmf(2)
    ident = [[1, 0], [0, 1]]
    for k in range(-6, 7):
        assert wv.wavelet_D(ident, sys, z(k)) == z(k)
    e01 = [[0, 1], [0, 0]]
    # S_0 S_1*: odd exponents shift down by one, even ones vanish
    assert wv.wavelet_D(e01, sys, z(5)) == z(4)
    assert not wv.wavelet_D(e01, sys, z(4))
    with pytest.raises(ValueError):
        wv.wavelet_D([[1, 0, 0]] * 3, sys, z(0))


def test_represent_matches_operators():
    sys = wv.standard_qmf(3)
    f = P("z^{-4} + (2) z^{5} + z^{7}")
    e = cz.from_text("s[1]s[2] s*[0]")
    want = wv.S(1, wv.S(2, wv.S_star(0, f, sys), sys), sys)
    assert wv.represent(e, f, sys) == want
    # s*[2]s*[1] has right word (1, 2): apply S_1* first
    e = cz.from_text("s*[2]s*[1]")
    assert wv.represent(e, f, sys) == wv.S_star(2, wv.S_star(1, f, sys), sys)
    with pytest.raises(ValueError):
        wv.represent(cz.from_text("s[3]"), f, sys)


def test_homotope_model_routes():
    rng = random.Random(2)
    for n in (2, 3, 4):
        sys = wv.standard_qmf(n)
        model = wv.diagonal_algebra(n, [Fraction(rng.randint(1, 3)) for _ in range(n)])
        for _ in range(5):
            a = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
            f = _rand_poly(rng)
            assert wv.wavelet_D_model(a, model, sys, f) == wv.wavelet_D_via_cuntz(a, model, sys, f)
    with pytest.raises(ValueError):
        wv.wavelet_D_model([1, 1], wv.diagonal_algebra(2), wv.standard_qmf(3), z(0))


def test_branch_average():
    assert wv.branch_average(P("z^{-4} + z^{3} + z^{6}"), 2) == P("z^{-2} + z^{3}")
