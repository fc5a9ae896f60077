import random
from fractions import Fraction

import pytest

from lvfield import jsmap as js
from lvfield import liealg as la
from lvfield import weyl as wy
from lvfield.kernel import GScalar, IndexWindow
from lvfield.pairings import VectorCoeffs


def test_family_brackets():
    witt = la.build_family(la.AlgebraFamily("witt", -4, 4))
    assert witt.bracket_labels(("L", 1), ("L", 2)) == {("L", 3): GScalar(1)}
    sv = la.build_family(la.AlgebraFamily("schrodinger_virasoro", -2, 2, s=Fraction(1, 2), rho=Fraction(1, 2)))
    assert not sv.bracket_labels(("L", 1), ("Y", Fraction(1, 2)))
    assert sv.bracket_labels(("L", 1), ("Y", Fraction(3, 2))) == {("Y", Fraction(5, 2)): GScalar(1)}
    ys = [lab[1] for lab in sv.labels if lab[0] == "Y"]
    for p in ys:
        for q in ys:
            assert not sv.bracket_labels(("Y", p), ("Y", q))
    hv = la.build_family(la.AlgebraFamily("heisenberg_virasoro", -3, 3))
    assert hv.bracket_labels(("d", 1), ("del", 2)) == {("del", 3): GScalar(2)}
    assert hv.bracket_labels(("d", 1), ("d", -1)) == {("d", 0): GScalar(-2)}


@pytest.mark.parametrize("kind,kw", [("witt", {}), ("heisenberg_virasoro", {}), ("schrodinger_virasoro", {"s": Fraction(1, 2), "rho": Fraction(1, 3)})])
def test_jacobi(kind, kw):
    L = la.build_family(la.AlgebraFamily(kind, -3, 3, **kw))
    bad, _ = L.jacobi_failures()
    assert not bad


def test_invalid_family_parameters():
    with pytest.raises(ValueError):
        la.AlgebraFamily("schrodinger_virasoro", s=Fraction(1, 3))
    with pytest.raises(ValueError):
        la.AlgebraFamily("lorentz")
    bad = la.StructureConstants(["a", "b", "c"], {("a", "b"): {"c": 1}, ("b", "c"): {"a": 1}, ("a", "c"): {"a": 1}})
    assert bad.jacobi_failures()[0] == [("a", "b", "c")]
    with pytest.raises(la.JacobiError):
        bad.require_jacobi()
    with pytest.raises(ValueError):
        la.StructureConstants(["a", "b"], {("a", "b"): {"a": 1}, ("b", "a"): {"a": 1}})


def test_hv_realization_and_negative_controls():
    L = la.build_family(la.AlgebraFamily("heisenberg_virasoro", -4, 4))
    win = IndexWindow(-12, 12)
    rz = la.hv_realization(L, win)
    pairs = [("d", n) for n in range(-2, 3)] + [("del", m) for m in range(-2, 3)]
    assert la.verify_realization(L, rz, js.JSContext(win), pairs).ok
    # wrong sign on the d-sort breaks the relations
    flipped = la.Realization({k: (-v if k[0] == "d" else v) for k, v in rz.elements.items()}, rz.bandwidths)
    res = la.verify_realization(L, flipped, js.JSContext(win), pairs)
    assert not res.ok and res.witness
    # skipping the safe-window trim exposes truncation at the window edge
    res = la.verify_realization(L, rz, js.JSContext(win, whole_space=True), pairs)
    assert not res.ok


def test_sv_and_witt_realizations():
    for s, rho in [(0, 0), (0, 1), (Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 3))]:
        s, rho = Fraction(s), Fraction(rho)
        L = la.build_family(la.AlgebraFamily("schrodinger_virasoro", -4, 4, s=s, rho=rho))
        win = IndexWindow(-12 + s, 12 + s)
        rz = la.sv_realization(L, rho, s, win)
        pairs = [("L", n) for n in range(-2, 3)] + [("Y", p + s) for p in range(-2, 3)]
        assert la.verify_realization(L, rz, js.JSContext(win), pairs).ok
    W = la.build_family(la.AlgebraFamily("witt", -4, 4))
    win = IndexWindow(-12, 12)
    assert la.verify_realization(W, la.witt_circle_realization(W, win), js.JSContext(win), [("L", n) for n in range(-2, 3)]).ok


def test_realization_margin_error():
    L = la.build_family(la.AlgebraFamily("heisenberg_virasoro", -3, 3))
    win = IndexWindow(-3, 3)
    with pytest.raises(js.MarginError):
        la.verify_realization(L, la.hv_realization(L, win), js.JSContext(win), [("d", 3), ("d", -3)])


def test_sv00_is_hv():
    hv = la.build_family(la.AlgebraFamily("heisenberg_virasoro", -3, 3))
    sv = la.build_family(la.AlgebraFamily("schrodinger_virasoro", -3, 3))
    renamed = sv.relabel(lambda lab: ("d", lab[1]) if lab[0] == "L" else ("del", int(lab[1])))
    assert renamed.same_constants(hv)
    sv1 = la.build_family(la.AlgebraFamily("schrodinger_virasoro", -3, 3, rho=1))
    assert not sv1.relabel(lambda lab: ("d", lab[1]) if lab[0] == "L" else ("del", int(lab[1]))).same_constants(hv)


def _compose_oracle(h, n):
    out = list(range(len(h)))
    for _ in range(n):
        out = [h[i] for i in out]
    return out


def test_dynamics():
    shift = [1, 2, 3, 0]
    win = IndexWindow(0, 3)
    assert la.iterate_map(shift, 2) == _compose_oracle(shift, 2) == [2, 3, 0, 1]
    e0 = VectorCoeffs.unit(win, 0)
    assert la.dynamics_check(shift, e0, 2).ok
    assert la.dynamics_check(shift, e0, 0).ok
    rng = random.Random(4)
    for _ in range(20):
        N = rng.randint(1, 6)
        h = [rng.randrange(N) for _ in range(N)]
        phi = VectorCoeffs(IndexWindow(0, N - 1), {i: rng.randint(-3, 3) for i in range(N)})
        assert la.dynamics_check(h, phi, rng.randint(0, 4)).ok


def test_dynamics_n1_is_basic_relation():
    from lvfield.pairings import map_induced_matrix

    h = [2, 0, 1]
    A = map_induced_matrix(h)
    phi = VectorCoeffs(A.window, {0: 1, 1: 2, 2: 3})
    lhs = wy.commutator(js.partial(phi), js.D(A))
    assert lhs == js.partial(A.apply(phi))
    assert la.dynamics_check(h, phi, 1).ok


def test_center_and_extension():
    sl = la.sl2()
    assert sl.center() == []
    assert len(la.abelian(3).center()) == 3
    ext = la.extend_by_cocycle(sl, lambda a, b: GScalar(0))
    assert "c" in ext and ext.dim == 4
    tab = js.cocycle_table(sl.basis_vector("h"), sl)
    ext = la.extend_by_cocycle(sl, tab)
    assert not ext.jacobi_failures()[0]


def test_non_cocycle_rejected():
    hv = la.build_family(la.AlgebraFamily("heisenberg_virasoro", -2, 2))

    def phi(a, b):
        # antisymmetric but not closed: fails on (d_0, d_1, d_2)
        if (a, b) == (("d", 1), ("d", 2)):
            return GScalar(1)
        if (a, b) == (("d", 2), ("d", 1)):
            return GScalar(-1)
        return GScalar(0)

    with pytest.raises(la.CocycleError):
        la.extend_by_cocycle(hv, phi)


def test_random_solvable_is_lie():
    rng = random.Random(0)
    for _ in range(5):
        L = la.random_solvable(rng, 4)
        assert not L.jacobi_failures()[0]
