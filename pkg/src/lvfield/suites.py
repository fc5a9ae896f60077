"""Named verification suites.

Every suite is a function of a plain config dict and returns a list of
CheckResult.  Randomized suites draw from ``random.Random(seed)`` only, so a
fixed config gives a fixed report.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from fractions import Fraction
from typing import Callable

import numpy as np

from . import cuntz as cz
from . import jsmap as js
from . import liealg as la
from . import pairings as pr
from . import wavelet as wv
from . import weyl as wy
from .kernel import ONE, ZERO, GScalar, IndexWindow, PiScalar, nullspace, rank
from .pairings import PairingMatrix, VectorCoeffs
from .report import CheckResult, Report, check

# --- random data ------------------------------------------------------------------------


def rand_rational(rng: random.Random, bound: int = 3) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def rand_scalar(rng: random.Random, bound: int = 3, complex_: bool = False) -> GScalar:
    return GScalar(rand_rational(rng, bound), rand_rational(rng, bound) if complex_ else 0)


def rand_banded(rng: random.Random, win: IndexWindow, bandwidth, density: float = 0.7, complex_: bool = False) -> PairingMatrix:
    idx = list(win)
    entries = {}
    for a in idx:
        for b in idx:
            if bandwidth != pr.FULL and abs(a.value - b.value) > bandwidth:
                continue
            if rng.random() < density:
                entries[(a, b)] = rand_scalar(rng, complex_=complex_)
    return PairingMatrix(win, entries, bandwidth)


def rand_vector(rng: random.Random, win: IndexWindow, density: float = 0.8, complex_: bool = False) -> VectorCoeffs:
    return VectorCoeffs(win, {i: rand_scalar(rng, complex_=complex_) for i in win if rng.random() < density})


def rand_weyl(rng: random.Random, indices=(1, 2, 3), terms: int = 3, max_deg: int = 2) -> wy.WeylElement:
    out = wy.WeylElement.zero()
    for _ in range(terms):
        xs = {i: rng.randint(0, max_deg) for i in rng.sample(indices, rng.randint(0, len(indices)))}
        ds = {i: rng.randint(0, max_deg) for i in rng.sample(indices, rng.randint(0, len(indices)))}
        mono = wy.Monomial.make({k: v for k, v in xs.items() if v}, {k: v for k, v in ds.items() if v})
        out = out + wy.WeylElement({mono: rand_scalar(rng)})
    return out


def rand_polynomial(rng: random.Random, indices=(1, 2, 3), terms: int = 3, max_deg: int = 3) -> wy.WeylElement:
    out = wy.WeylElement.zero()
    for _ in range(terms):
        xs = {i: rng.randint(1, max_deg) for i in rng.sample(indices, rng.randint(0, len(indices)))}
        out = out + wy.WeylElement({wy.Monomial.make(xs, {}): rand_scalar(rng)})
    return out


def _all_ok(name: str, results: list[CheckResult], **kw) -> CheckResult:
    bad = [r for r in results if not r.ok]
    return check(
        name,
        not bad,
        witness=(f"{bad[0].name}: {bad[0].witness}" if bad else None),
        detail=f"{len(results) - len(bad)}/{len(results)} passed",
        **kw,
    )


# --- suites ---------------------------------------------------------------------------------


def suite_weyl_core(cfg: dict) -> list[CheckResult]:
    rng = random.Random(cfg["seed"])
    W = wy.from_text
    out = [
        check("normal-order d[1] x[1]", W("d[1] x[1]") == W("1 + x[1] d[1]")),
        check("normal-order (x[1] d[1])^2", W("x[1] d[1] x[1] d[1]") == W("x[1] d[1] + x[1]^2 d[1]^2")),
        check("normal-order d[1]^2 x[1]^2", W("d[1]^2 x[1]^2") == W("(2) + (4) x[1] d[1] + x[1]^2 d[1]^2")),
    ]
    ccr = []
    for i, j in itertools.product((1, 2, 3), repeat=2):
        got = wy.commutator(wy.WeylElement.d(i), wy.WeylElement.x(j))
        ccr.append(got == wy.WeylElement.scalar(1 if i == j else 0))
    out.append(check("canonical commutation [d_i, x_j] = delta_ij", all(ccr)))

    assoc, action, text = [], [], []
    for _ in range(cfg["instances"]):
        a, b, c = (rand_weyl(rng) for _ in range(3))
        mul = lambda u, v: wy.multiply(u, v, degree_cap=40)
        assoc.append(mul(mul(a, b), c) == mul(a, mul(b, c)))
        p = rand_polynomial(rng)
        # apply_to_polynomial differentiates directly, independent of the normal-ordering product
        action.append(wy.apply_to_polynomial(mul(a, b), p) == wy.apply_to_polynomial(a, wy.apply_to_polynomial(b, p)))
        text.append(wy.from_text(wy.to_text(a)) == a)
    out.append(check("associativity (ab)c = a(bc)", all(assoc), detail=f"{len(assoc)} random triples"))
    out.append(check("action on polynomials (ab)p = a(bp)", all(action), detail=f"{len(action)} random cases"))
    out.append(check("canonical text round trip", all(text)))

    win = IndexWindow(1, 4)
    lin = all(wy.check_linear(js.D(rand_banded(rng, win, 2))).is_linear for _ in range(10))
    out.append(check("D(A) is a linear vector field", lin))
    out.append(check("x[1]^2 d[1] rejected as nonlinear", not wy.check_linear(W("x[1]^2 d[1]")).is_linear))
    return out


def _cylindrical_cases(rng: random.Random, count: int):
    phis: list[tuple[str, Callable]] = [
        ("sin(a)*b", lambda a, b=1.0, *r: math.sin(a) * b),
        ("exp(a/3)+b^2", lambda a, b=0.0, *r: math.exp(a / 3) + b * b),
        ("a*b*c", lambda a, b=1.0, c=1.0, *r: a * b * c),
        ("log(1+a^2)+cos(b)", lambda a, b=0.0, *r: math.log1p(a * a) + math.cos(b)),
        ("a^3-2a", lambda a, *r: a**3 - 2 * a),
    ]
    for _ in range(count):
        dim = rng.randint(1, 6)
        win = IndexWindow(1, dim)
        # unit scaling: |A x|_inf <= |x|_inf and |l(x)| <= |x|_inf
        A = rand_banded(rng, win, pr.FULL)
        rowsum = max((sum(abs(complex(v)) for b, v in A.entries.items() if b[0] == a) for a in win.doubled()), default=1)
        A = A.scale(Fraction(1) / Fraction(rowsum).limit_denominator(1000)) if A.entries else A
        k = rng.randint(1, 3)
        ls = []
        for _ in range(k):
            l = rand_vector(rng, win, density=0.9)
            n1 = sum(abs(complex(v)) for v in l.entries.values())
            ls.append(l.scale(Fraction(1) / Fraction(n1).limit_denominator(1000)) if n1 else l)
        name, phi = rng.choice(phis)
        x = [rng.uniform(-1, 1) for _ in range(dim)]
        yield A, ls, name, phi, x


def suite_js_identities(cfg: dict) -> list[CheckResult]:
    rng = random.Random(cfg["seed"])
    wmax = cfg["window"]
    out = []
    comm = []
    t0 = time.perf_counter()
    for k in range(cfg["instances"]):
        size = rng.randint(min(4, wmax), wmax)
        while True:
            ba, bb = rng.randint(0, 2), rng.randint(0, 2)
            if size - 2 * (ba + bb) >= 1:
                break
        win = IndexWindow(1, size)
        A, B = rand_banded(rng, win, ba), rand_banded(rng, win, bb)
        h, r = rand_vector(rng, win), rand_vector(rng, win)
        comm.extend(js.verify_comm_relations(A, B, h, r, js.JSContext(win), tag=str(k)))
    elapsed = time.perf_counter() - t0
    for rel in ("comm1", "comm2", "comm3", "comm4"):
        out.append(_all_ok(f"{rel} random banded instances", [c for c in comm if c.name.startswith(rel)]))
    out.append(check("comm relations runtime under 10 s", elapsed < 10.0, detail=f"{cfg['instances']} instances"))

    # Heisenberg pair by hand
    w2 = IndexWindow(1, 2)
    lhs = wy.commutator(js.D(PairingMatrix.unit(w2, 1, 2)), js.D(PairingMatrix.unit(w2, 2, 1)))
    out.append(check("heisenberg pair [D(E12), D(E21)]", lhs == wy.from_text("x[1] d[1] + (-1) x[2] d[2]")))

    # tilde_D: kernel is the center
    sl = la.sl2()
    th = js.tilde_D(sl.basis_vector("h"), sl)
    out.append(check("tilde_D(h) on sl2", th == wy.from_text("(2) x[0] d[0] + (-2) x[2] d[2]")))
    ab = la.abelian(3)
    out.append(check("tilde_D vanishes on the center", all(not js.tilde_D(ab.basis_vector(a), ab) for a in ab.labels)))
    out.append(js.faithfulness_check([sl.ad_pairing(sl.basis_vector(a)) for a in sl.labels]))

    # invariant coordinate subspace
    inv = []
    for _ in range(5):
        win = IndexWindow(1, 5)
        A = rand_banded(rng, win, pr.FULL)
        A = PairingMatrix(win, {(a, b): v for a, b, v in A.items() if not (a.value <= 2 and b.value > 2)}, pr.FULL)
        inv.append(js.invariant_subspace_check(A, [1, 2], degree=2))
    out.append(_all_ok("invariant-subspace preserved polynomials", inv))

    # float semigroup
    wd = IndexWindow(1, 2)
    diag = PairingMatrix(wd, {(1, 1): 1, (2, 2): 2}, 0)
    out.append(js.semigroup_check(diag, 1.0, VectorCoeffs(wd, {1: 1, 2: 1}), tol=1e-12, tag="diag t=1"))
    out.append(js.semigroup_check(diag, 0.0, VectorCoeffs(wd, {1: 1, 2: 1}), tol=0.0, tag="t=0"))
    for k in range(3):
        win = IndexWindow(1, 4)
        out.append(
            js.semigroup_check(rand_banded(rng, win, 1), rng.uniform(-1, 1), rand_vector(rng, win), tol=1e-10, tag=f"random {k}")
        )

    # cylindrical derivative against the flow derivative
    worst = 0.0
    wit = None
    n_cyl = cfg["cylindrical_cases"]
    for A, ls, name, phi, x in _cylindrical_cases(rng, n_cyl):
        c = js.cylindrical_derivative(A, ls, phi, x)
        f = js.flow_derivative(A, ls, phi, x)
        err = abs(c - f) / max(abs(f), 1.0)
        if err > worst:
            worst, wit = err, f"phi={name} dim={len(A.window)} cyl={c:.10g} flow={f:.10g}"
    out.append(
        check(
            "cylindrical derivative vs flow derivative",
            worst <= 1e-5,
            max_abs_error=worst,
            witness=wit if worst > 1e-5 else None,
            detail=f"{n_cyl} cases, relative error with floor 1",
        )
    )
    return out


def _ad_all(L):
    return {a: L.ad_pairing(L.basis_vector(a)) for a in L.labels}


def _killing_checks(L, rng: random.Random) -> list[CheckResult]:
    tag = L.name
    ad = _ad_all(L)
    ctx = js.JSContext(IndexWindow(0, L.dim - 1), whole_space=True)
    safe = js.safe_window(ctx, [pr.FULL])
    out = []
    sym = []
    for a, b in itertools.combinations_with_replacement(L.labels, 2):
        sym.append(js._compare(f"eps({a},{b})", js.epsilon(ad[a], ad[b]), js.epsilon(ad[b], ad[a]), ctx, safe))
    out.append(_all_ok(f"epsilon symmetric [{tag}]", sym))

    lem = []
    for a, b, c in itertools.product(L.labels, repeat=3):
        A, B, C = ad[a], ad[b], ad[c]
        lhs = wy.commutator(js.D(A), js.epsilon(B, C))
        rhs = -js.epsilon(pr.commutator(A, B), C) - js.epsilon(B, pr.commutator(A, C))
        lem.append(js._compare(f"({a},{b},{c})", lhs, rhs, ctx, safe))
    out.append(_all_ok(f"[D(A), eps(B,C)] = -eps([A,B],C) - eps(B,[A,C]) [{tag}]", lem))

    Bm = js.killing_matrix(L)
    n = L.dim
    out.append(check(f"B symmetric [{tag}]", all(Bm[i][j] == Bm[j][i] for i in range(n) for j in range(n))))
    inv_ok = True
    for u, v, w in itertools.product(range(n), repeat=3):
        uv = L.to_list(L.bracket(L.basis_vector(L.labels[u]), L.basis_vector(L.labels[v])))
        uw = L.to_list(L.bracket(L.basis_vector(L.labels[u]), L.basis_vector(L.labels[w])))
        s = sum((uv[k] * Bm[k][w] + uw[k] * Bm[v][k] for k in range(n)), ZERO)
        inv_ok = inv_ok and not s
    out.append(check(f"B ad-invariant [{tag}]", inv_ok))

    # B computed element-wise agrees with the table (linearity)
    u, v = la.random_element(L, rng), la.random_element(L, rng)
    direct = js.killing_form(u, v, L)
    ul, vl = L.to_list(u), L.to_list(v)
    via = sum((ul[i] * Bm[i][j] * vl[j] for i in range(n) for j in range(n)), ZERO)
    out.append(check(f"B bilinear on random elements [{tag}]", direct == via))

    cocy = []
    for lab in L.labels:
        tab = js.cocycle_table(L.basis_vector(lab), L)
        pos = {a: i for i, a in enumerate(L.labels)}
        bad = la.cocycle_failures(L, lambda a, b, t=tab: t[pos[a]][pos[b]])
        cocy.append(check(f"phi_{lab}", not bad, witness=str(bad[0]) if bad else None))
        if not bad:
            ext = la.extend_by_cocycle(L, tab)
            fails, _ = ext.jacobi_failures()
            cocy.append(check(f"extension by phi_{lab} satisfies Jacobi", not fails))
    out.append(_all_ok(f"phi_u antisymmetric 2-cocycles with central extensions [{tag}]", cocy))

    tr = []
    spec = js.WeightSpec(2, IndexWindow(0, n - 1))
    for _ in range(5):
        a = js.epsilon(ad[rng.choice(L.labels)], ad[rng.choice(L.labels)])
        b = js.D(ad[rng.choice(L.labels)])
        tr.append(js.weight_trace(wy.multiply(a, b), spec) == js.weight_trace(wy.multiply(b, a), spec))
    out.append(check(f"tau(uv) = tau(vu) on degree-preserving elements [{tag}]", all(tr)))
    return out


def classical_killing(L) -> list[list[GScalar]]:
    """K(x, y) = tr(ad x ad y) from the structure constants."""
    ad = [L.ad_pairing(L.basis_vector(a)) for a in L.labels]
    out = []
    for A in ad:
        row = []
        for B in ad:
            C = A.compose(B)
            row.append(sum((v for (i, j), v in C.entries.items() if i == j), ZERO))
        out.append(row)
    return out


def suite_killing_cocycle(cfg: dict) -> list[CheckResult]:
    rng = random.Random(cfg["seed"])
    sl = la.sl2()
    solv = la.random_solvable(rng, 4)
    out = _killing_checks(sl, rng) + _killing_checks(solv, rng)

    Bm, K = js.killing_matrix(sl), classical_killing(sl)
    ratios = set()
    consistent = True
    for i in range(3):
        for j in range(3):
            if K[i][j]:
                ratios.add(Bm[i][j] / K[i][j])
            elif Bm[i][j]:
                consistent = False
    const = next(iter(ratios)) if len(ratios) == 1 else None
    out.append(
        check(
            "B proportional to the classical Killing form [sl2]",
            consistent and const is not None and bool(const),
            detail=f"B = ({const}) K" if const is not None else f"ratios {sorted(map(str, ratios))}",
        )
    )
    ab = la.abelian(2)
    out.append(check("B vanishes on an abelian algebra", all(not v for row in js.killing_matrix(ab) for v in row)))
    spec = js.WeightSpec(1, IndexWindow(1, 2))
    out.append(check("tau(x[1] d[1]) = 1/2 on degree 1, two variables", js.weight_trace(wy.from_text("x[1] d[1]"), spec) == GScalar(Fraction(1, 2))))
    out.append(check("tau(1) = 1", js.weight_trace(wy.WeylElement.scalar(1), js.WeightSpec(3, IndexWindow(1, 3))) == ONE))
    return out


def suite_sine_examples(cfg: dict) -> list[CheckResult]:
    rng = random.Random(cfg["seed"])
    nodes = cfg["quadrature_nodes"]
    out = []
    worst, wit = 0.0, None
    for n, m, k in itertools.product(range(1, 11), repeat=3):
        err = abs(float(pr.sine_derivative_triple(n, m, k)) - pr.sine_triple_quadrature(n, m, k, nodes))
        if err > worst:
            worst, wit = err, f"(n,m,k)=({n},{m},{k})"
    out.append(check("sine triple vs quadrature (1000 triples)", worst <= 1e-10, max_abs_error=worst, witness=wit if worst > 1e-10 else None, detail=f"{nodes} nodes"))

    closed = []
    for _ in range(5):
        win = IndexWindow(1, 8)
        lam = rand_rational(rng)
        c = VectorCoeffs(IndexWindow(1, 16), {j: rand_rational(rng) for j in range(1, 17) if rng.random() < 0.5})
        A = pr.sine_operator_matrix(lam, VectorCoeffs(win, {j: c[j] for j in range(1, 9)}), win)
        # sum of triples (independent of the assembled closed form), restricted to the window support of c
        cw = {j: c[j] for j in range(1, 9)}
        ok = True
        for m in range(1, 9):
            for k in range(1, 9):
                want = GScalar(-lam * m * m if m == k else 0)
                for j, cj in cw.items():
                    want = want + cj * (1 - lam) * pr.sine_derivative_triple(j, m, k)
                ok = ok and A[m, k] == want
        closed.append(ok)
    out.append(check("sine operator matrix equals the closed form", all(closed)))

    win = IndexWindow(1, 12)
    X = pr.x2dx_matrix(win)
    exact = all(
        X[n, m] == (PiScalar(-1) if n == m else PiScalar(Fraction(4 * n * m, n * n - m * m)))
        for n in range(1, 13)
        for m in range(1, 13)
    )
    out.append(check("x2dx entries: 4 pi nm/(n^2-m^2) off the diagonal, -pi on it", exact))
    anti = all(
        (X[n, m].coeff + (1 if n == m else 0)) == -(X[m, n].coeff + (1 if n == m else 0))
        for n in range(1, 13)
        for m in range(1, 13)
    )
    out.append(check("x2dx + pi I antisymmetric", anti))
    worst, wit = 0.0, None
    for n, m in itertools.product(range(1, 13), repeat=2):
        err = abs(float(X[n, m]) - pr.x2dx_quadrature(n, m, nodes))
        if err > worst:
            worst, wit = err, f"(n,m)=({n},{m})"
    out.append(check("x2dx vs quadrature (n, m <= 12)", worst <= 1e-8, max_abs_error=worst, witness=wit if worst > 1e-8 else None, detail=f"{nodes} nodes"))

    out.extend(js.flow_semigroup_check(t=cfg["flow_t"], size=cfg["flow_window"], nodes=nodes))
    return out


def _hv_family(cfg):
    r = cfg["range"]
    return la.build_family(la.AlgebraFamily("heisenberg_virasoro", -2 * r, 2 * r))


def suite_heisenberg_virasoro(cfg: dict) -> list[CheckResult]:
    r, w = cfg["range"], cfg["window"]
    L = _hv_family(cfg)
    win = IndexWindow(-w, w)
    rz = la.hv_realization(L, win)
    pairs = [("d", n) for n in range(-r, r + 1)] + [("del", m) for m in range(-r, r + 1)]
    fails, _ = L.jacobi_failures()
    out = [
        check("Jacobi [heisenberg_virasoro]", not fails),
        check("[d_1, del_2] = 2 del_3", L.bracket_labels(("d", 1), ("del", 2)) == {("del", 3): GScalar(2)}),
        la.verify_realization(L, rz, js.JSContext(win), pairs, "realization heisenberg_virasoro via monomial fields"),
    ]
    # oracle: x^n d/dx x^k = k x^(k+n-1) applied to formal monomials
    ok = True
    for n in range(-r, r + 2):
        A = pr.monomial_field_matrix(n, win)
        for k in range(-5, 6):
            got = A.apply(VectorCoeffs.unit(win, k))
            want = VectorCoeffs(win, {k + n - 1: k} if k + n - 1 in win else {})
            ok = ok and got == want
    out.append(check("monomial field matrix X_n x^k = k x^(k+n-1)", ok))
    return out


SV_CASES = ((0, 0), (0, 1), (Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 3)))


def suite_schrodinger_virasoro(cfg: dict) -> list[CheckResult]:
    r, w = cfg["range"], cfg["window"]
    out = []
    cases = cfg["cases"]
    for s, rho in cases:
        s, rho = Fraction(s), Fraction(rho)
        fam = la.AlgebraFamily("schrodinger_virasoro", -2 * r, 2 * r, s=s, rho=rho)
        L = la.build_family(fam)
        win = IndexWindow(-w + s, w + s)
        rz = la.sv_realization(L, rho, s, win)
        pairs = [("L", n) for n in range(-r, r + 1)] + [("Y", p + s) for p in range(-r, r + 1)]
        fails, _ = L.jacobi_failures()
        out.append(check(f"Jacobi [s={s},rho={rho}]", not fails))
        out.append(la.verify_realization(L, rz, js.JSContext(win), pairs, f"realization L[s={s},rho={rho}]"))
    hv = _hv_family(cfg)
    sv00 = la.build_family(la.AlgebraFamily("schrodinger_virasoro", -2 * r, 2 * r))
    renamed = sv00.relabel(lambda lab: ("d", lab[1]) if lab[0] == "L" else ("del", int(lab[1])))
    out.append(check("L[0,0] equals heisenberg_virasoro as structure constants", renamed.same_constants(hv)))
    half = la.build_family(la.AlgebraFamily("schrodinger_virasoro", -2, 2, s=Fraction(1, 2), rho=Fraction(1, 2)))
    out.append(check("[L_1, Y_1/2] = 0 in L[1/2,1/2]", not half.bracket_labels(("L", 1), ("Y", Fraction(1, 2)))))
    return out


def suite_circle_witt(cfg: dict) -> list[CheckResult]:
    r, w = cfg["range"], cfg["window"]
    L = la.build_family(la.AlgebraFamily("witt", -2 * r, 2 * r))
    win = IndexWindow(-w, w)
    rz = la.witt_circle_realization(L, win)
    out = [
        check("[L_1, L_2] = L_3", L.bracket_labels(("L", 1), ("L", 2)) == {("L", 3): ONE}),
        la.verify_realization(L, rz, js.JSContext(win), [("L", n) for n in range(-r, r + 1)], "realization witt via circle fields"),
    ]
    rel = []
    for m, n in itertools.product(range(-r, r + 1), repeat=2):
        C = pr.circle_field_matrix(m, win)
        safe = js.safe_window(js.JSContext(win), [C.bandwidth])
        lhs = wy.commutator(-js.D(C), js.partial(VectorCoeffs.unit(win, n)))
        rhs = js.partial(VectorCoeffs(win, {m + n: GScalar(0, n)} if n else {}))
        rel.append(js._compare(f"({m},{n})", lhs, rhs, js.JSContext(win), safe))
    out.append(_all_ok("[-D(C_m), d(e_n)] = d(i n e_(m+n))", rel))
    return out


def suite_dynamics(cfg: dict) -> list[CheckResult]:
    rng = random.Random(cfg["seed"])
    out = []
    dyn = []
    for k in range(cfg["instances"]):
        N = rng.randint(1, 6)
        h = [rng.randrange(N) for _ in range(N)]
        phi = rand_vector(rng, IndexWindow(0, N - 1))
        dyn.append(la.dynamics_check(h, phi, rng.randint(0, 4), tag=str(k)))
    out.append(_all_ok("d(S_n phi) = (-ad D(A))^n d(phi) on random maps", dyn))
    shift = [1, 2, 3, 0]
    win = IndexWindow(0, 3)
    e0 = VectorCoeffs.unit(win, 0)
    # (phi o h^2)(l) = phi(l + 2 mod 4): the unit at 0 pulls back to the unit at 2
    out.append(la.dynamics_check(shift, e0, 2, tag="cyclic shift N=4"))
    out.append(check("cyclic shift pulls e_0 back to e_2", la.iterate_map(shift, 2)[2] == 0))

    npm = []
    for k in range(cfg["instances"]):
        win = IndexWindow(1, rng.randint(2, 6))
        A = rand_banded(rng, win, pr.FULL)
        fs = [rand_vector(rng, win) for _ in range(rng.randint(1, 4))]
        lhs, rhs = js.n_point_motion(A, fs)
        npm.append(check(str(k), lhs == rhs))
    out.append(_all_ok("n-point motion up to 4 d-factors", npm))
    return out


def _invertible_rho(rng: random.Random, k: int) -> list:
    while True:
        rho = [[rand_rational(rng) for _ in range(k)] for _ in range(k)]
        if rank(rho) == k:
            return rho


def suite_cuntz_identities(cfg: dict) -> list[CheckResult]:
    rng = random.Random(cfg["seed"])
    C = cz.from_text
    out = [
        check("s*[1] s[1] = 1", C("s*[1] s[1]") == cz.CuntzElement.one()),
        check("s*[1] s[2] = 0", not C("s*[1] s[2]")),
        check("(s[1] s*[2])(s[2] s*[3]) = s[1] s*[3]", C("s[1] s*[2] s[2] s*[3]") == C("s[1] s*[3]")),
    ]
    rel = []
    for k in range(cfg["instances"]):
        win = IndexWindow(1, rng.randint(1, cfg["window"]))
        A, B, L = (rand_banded(rng, win, pr.FULL, complex_=True) for _ in range(3))
        h, f, g = (rand_vector(rng, win, complex_=True) for _ in range(3))
        rel.extend(cz.verify_cuntz_relations(A, B, L, h, f, g, tag=str(k)))
    for name in ("cuntz1", "cuntz2", "cuntz3", "cuntz4"):
        out.append(_all_ok(f"{name} random instances", [r for r in rel if r.name.startswith(name)]))

    conf, star, text = [], [], []
    for _ in range(cfg["instances"]):
        w = [(rng.randint(1, 3), rng.random() < 0.5) for _ in range(rng.randint(0, 6))]
        v = [(rng.randint(1, 3), rng.random() < 0.5) for _ in range(rng.randint(0, 6))]
        conf.append(cz.reduce(w) * cz.reduce(v) == cz.reduce(w + v))
        a = cz.reduce(w).scale(rand_scalar(rng, complex_=True)) + cz.reduce(v).scale(rand_scalar(rng, complex_=True))
        b = cz.reduce(v[::-1]).scale(rand_scalar(rng, complex_=True))
        star.append((a * b).star() == b.star() * a.star())
        text.append(cz.from_text(cz.to_text(a)) == a)
    out.append(check("normal form confluence reduce(w) reduce(v) = reduce(wv)", all(conf)))
    out.append(check("star is an anti-automorphism", all(star)))
    out.append(check("Cuntz canonical text round trip", all(text)))

    # L = identity: same coefficient tables as the Weyl map, multiplication vs composition laws
    cross = []
    for _ in range(20):
        win = IndexWindow(1, rng.randint(1, 5))
        A, B = rand_banded(rng, win, pr.FULL), rand_banded(rng, win, pr.FULL)
        same = {(w.left[0], w.right[0]): c for w, c in cz.cuntz_D(A).terms.items()} == {
            (m.x[0][0], m.d[0][0]): c for m, c in js.D(A).terms.items()
        }
        prod_law = cz.cuntz_D(A) * cz.cuntz_D(B) == cz.cuntz_D(B.compose(A))
        comm_law = wy.commutator(js.D(A), js.D(B)) == js.D(pr.commutator(B, A))
        cross.append(same and prod_law and comm_law)
    out.append(check("Cuntz D and Weyl D share coefficients and composition laws (L = I)", all(cross)))
    return out


def suite_homotope(cfg: dict) -> list[CheckResult]:
    rng = random.Random(cfg["seed"])
    out = []
    for k in (2, 3):
        hom, qc, inj = [], [], []
        for t in range(cfg["instances"]):
            model = cz.matrix_algebra(k, _invertible_rho(rng, k))
            vec = lambda: [rand_rational(rng) for _ in range(k * k)]
            hom.extend(cz.verify_homotope(model, vec(), vec(), vec(), vec(), vec(), tag=str(t)))
            for q in (-1, 0, 1, Fraction(1, 2)):
                qc.append(cz.q_commutator_check(model, vec(), vec(), q))
            res, _ = cz.injectivity_check(model)
            inj.append(res)
        out.append(_all_ok(f"homotope identities M{k} random invertible rho", hom))
        out.append(_all_ok(f"q-commutator conservation M{k}", qc))
        out.append(_all_ok(f"injectivity M{k} invertible rho", inj))
    # rho = identity: ordinary anti-homomorphism, checked against an independent matrix product
    m2 = cz.matrix_algebra(2, [[1, 0], [0, 1]])
    a, b = [rand_rational(rng) for _ in range(4)], [rand_rational(rng) for _ in range(4)]
    ba = [sum((b[2 * i + l] * a[2 * l + j] for l in range(2)), Fraction(0)) for i in range(2) for j in range(2)]
    out.append(check("rho = I: D(l_a)D(l_b) = D(l_ba)", cz.homotope_embed(a, m2) * cz.homotope_embed(b, m2) == cz.homotope_embed(ba, m2)))
    out.append(check("D(l_0) = 0", not cz.homotope_embed([0] * 4, m2)))

    zero_res, zker = cz.injectivity_check(cz.matrix_algebra(2), expect_injective=False)
    out.append(check("rho = 0 kernel is the whole algebra", zero_res.ok and len(zker) == 4, detail=zero_res.detail))
    r1 = cz.matrix_algebra(2, [[1, 0], [0, 0]])
    r1_res, r1ker = cz.injectivity_check(r1, expect_injective=False)
    out.append(
        check(
            "rank-1 rho without homotope identity has a nontrivial kernel",
            r1_res.ok and r1.homotope_identity() is None and len(r1ker) > 0,
            detail=r1_res.detail,
        )
    )
    return out


def suite_wavelet(cfg: dict) -> list[CheckResult]:
    rng = random.Random(cfg["seed"])
    K = cfg["max_exp"]
    ns = cfg["n"] if isinstance(cfg["n"], list) else [cfg["n"]]
    out = []
    for n in ns:
        sys = wv.standard_qmf(n)
        out.append(_all_ok(f"QMF conditions n={n}", wv.verify_qmf(sys)))
        monos = [wv.LaurentPoly.monomial(k) for k in range(-K, K + 1)]
        orth = all(
            wv.S_star(i, wv.S(j, f, sys), sys) == (f if i == j else wv.LaurentPoly())
            for i in range(n)
            for j in range(n)
            for f in monos
        )
        out.append(check(f"S_i* S_j = delta_ij Id on |k| <= {K}, n={n}", orth))
        compl = all(
            sum((wv.S(i, wv.S_star(i, f, sys), sys) for i in range(n)), wv.LaurentPoly()) == f for f in monos
        )
        out.append(check(f"sum S_i S_i* = Id on |k| <= {K}, n={n}", compl))
        iso = all(wv.S(i, f, sys).norm2() == f.norm2() for i in range(n) for f in monos)
        out.append(check(f"S_i coefficient isometry n={n}", iso))

        rep = True
        for _ in range(30):
            seq = [(rng.randrange(n), rng.random() < 0.5) for _ in range(rng.randint(0, 5))]
            el = cz.reduce(seq)
            for f in monos:
                direct = f
                for i, starred in reversed(seq):
                    direct = wv.S_star(i, direct, sys) if starred else wv.S(i, direct, sys)
                if wv.represent(el, f, sys) != direct:
                    rep = False
                    break
        out.append(check(f"normal forms act as the operator words, n={n}", rep))

        routes = []
        for _ in range(cfg["instances"]):
            P = [[rand_scalar(rng, complex_=True) for _ in range(n)] for _ in range(n)]
            f = wv.LaurentPoly({k: rand_scalar(rng, complex_=True) for k in range(-K, K + 1) if rng.random() < 0.3})
            routes.append(wv.wavelet_D(P, sys, f) == wv.wavelet_D_composed(P, sys, f))
        out.append(check(f"wavelet D branch sums = composed operators, n={n}", all(routes), detail=f"{len(routes)} random pairings"))

        model = wv.diagonal_algebra(n, [rand_rational(rng) or 1 for _ in range(n)])
        a = [rand_rational(rng) for _ in range(n)]
        f = wv.LaurentPoly({k: rand_rational(rng) for k in range(-K, K + 1) if rng.random() < 0.3})
        out.append(check(f"wavelet D(l_a) = image of homotope_embed(a), n={n}", wv.wavelet_D_model(a, model, sys, f) == wv.wavelet_D_via_cuntz(a, model, sys, f)))
        ident = wv.diagonal_algebra(n)
        out.append(check(f"homotope identity acts as Id, n={n}", wv.wavelet_D_model(ident.homotope_identity(), ident, sys, f) == f))
        E01 = [[ONE if (i, j) == (0, 1) else ZERO for j in range(n)] for i in range(n)]
        out.append(check(f"pairing E01 gives S_0 S_1*, n={n}", wv.wavelet_D(E01, sys, f) == wv.S(0, wv.S_star(1, f, sys), sys)))
        inv = all(wv.branch_average(g, n).mean() == g.mean() for g in monos)
        out.append(check(f"branch average preserves the Haar mean, n={n}", inv))

        # root-of-unity oracle for the branch average
        worst = 0.0
        for _ in range(5):
            g = wv.LaurentPoly({k: rand_rational(rng) for k in range(-8, 9) if rng.random() < 0.5})
            z = complex(math.cos(rng.uniform(0, 6.28)), math.sin(rng.uniform(0, 6.28)))
            roots = [z ** (1 / n) * complex(math.cos(2 * math.pi * j / n), math.sin(2 * math.pi * j / n)) for j in range(n)]
            num = sum(g(w) for w in roots) / n
            worst = max(worst, abs(num - wv.branch_average(g, n)(z)))
        out.append(check(f"branch average vs root-of-unity sums, n={n}", worst < 1e-9, max_abs_error=worst))

    broken = wv.QMFSystem(2, [wv.LaurentPoly.monomial(0), wv.LaurentPoly.monomial(1, 2)])
    out.append(check("broken filter m_1 = 2z fails QMF verification", not all(r.ok for r in wv.verify_qmf(broken))))
    return out


# --- registry ------------------------------------------------------------------------------

SUITES: dict[str, tuple[Callable[[dict], list[CheckResult]], dict]] = {
    "weyl-core": (suite_weyl_core, {"seed": 0, "instances": 30}),
    "js-identities": (suite_js_identities, {"seed": 0, "window": 12, "instances": 100, "cylindrical_cases": 50}),
    "killing-cocycle": (suite_killing_cocycle, {"seed": 0}),
    "sine-examples": (
        suite_sine_examples,
        {"seed": 0, "quadrature_nodes": 10001, "flow_t": 0.05, "flow_window": 8},
    ),
    "heisenberg-virasoro": (suite_heisenberg_virasoro, {"window": 20, "range": 3}),
    "schrodinger-virasoro": (
        suite_schrodinger_virasoro,
        {"window": 20, "range": 3, "cases": [[str(s), str(r)] for s, r in SV_CASES]},
    ),
    "circle-witt": (suite_circle_witt, {"window": 20, "range": 3}),
    "dynamics": (suite_dynamics, {"seed": 0, "instances": 20}),
    "cuntz-identities": (suite_cuntz_identities, {"seed": 0, "window": 8, "instances": 100}),
    "homotope": (suite_homotope, {"seed": 0, "instances": 10}),
    "wavelet": (suite_wavelet, {"seed": 0, "n": [2, 3, 4], "max_exp": 30, "instances": 50}),
}


class ConfigError(ValueError):
    pass


def _coerce(key: str, default, value):
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{key} must be true or false")
        return value
    if isinstance(default, int):
        try:
            v = int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be an integer, got {value!r}") from None
        if v < (0 if key == "seed" else 1):
            raise ConfigError(f"{key} must be {'non-negative' if key == 'seed' else 'positive'}, got {v}")
        return v
    if isinstance(default, float):
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be a number, got {value!r}") from None
    if key == "n":
        vals = value if isinstance(value, list) else [value]
        try:
            vals = [int(v) for v in vals]
        except (TypeError, ValueError):
            raise ConfigError(f"n must be an integer or list of integers, got {value!r}") from None
        if any(v < 2 for v in vals):
            raise ConfigError("branching factor n must be at least 2")
        return vals
    if key == "cases":
        try:
            out = [[str(Fraction(str(s))), str(Fraction(str(r)))] for s, r in value]
        except (TypeError, ValueError, ZeroDivisionError):
            raise ConfigError(f"cases must be [s, rho] pairs of rationals, got {value!r}") from None
        if any(Fraction(s) not in (0, Fraction(1, 2)) for s, _ in out):
            raise ConfigError("s must be 0 or 1/2")
        return out
    return value


def resolve_config(suite: str, params: dict | None = None) -> dict:
    """Suite defaults overridden by ``params``; unknown keys are errors."""
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    _, defaults = SUITES[suite]
    cfg = dict(defaults)
    if suite == "wavelet":
        cfg["n"] = list(cfg["n"])
    for key, value in (params or {}).items():
        if value is None:
            continue
        if key not in defaults:
            raise ConfigError(f"parameter {key!r} does not apply to suite {suite!r}")
        cfg[key] = _coerce(key, defaults[key], value)
    if suite in ("heisenberg-virasoro", "circle-witt", "schrodinger-virasoro"):
        if cfg["window"] < 2 * cfg["range"] + 2:
            raise ConfigError(f"window {cfg['window']} too small for range {cfg['range']}")
    if suite == "js-identities" and cfg["window"] < 1:
        raise ConfigError("window must be positive")
    if suite == "cuntz-identities" and cfg["window"] < 1:
        raise ConfigError("window must be positive")
    if suite == "sine-examples" and cfg["quadrature_nodes"] < 3:
        raise ConfigError("quadrature_nodes must be at least 3")
    return cfg


def run_suite(suite: str, params: dict | None = None) -> Report:
    cfg = resolve_config(suite, params)
    fn, _ = SUITES[suite]
    run_cfg = dict(cfg)
    if suite == "schrodinger-virasoro":
        run_cfg["cases"] = [(Fraction(s), Fraction(r)) for s, r in cfg["cases"]]
    checks = fn(run_cfg)
    return Report(suite, checks, cfg)
