"""The maps D, partial, partial-bar and their relatives, plus identity verifiers.

``D(A) = sum <A e_a, f_b> x_a d_b`` sends a pairing table to a linear vector
field; it is an anti-homomorphism, ``[D(A), D(B)] = D([B, A])``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .kernel import ONE, ZERO, GScalar, HalfIndex, IndexWindow, PiScalar
from .pairings import (
    FULL,
    PairingMatrix,
    VectorCoeffs,
    commutator as op_commutator,
    quadrature_oracle,
    x2dx_matrix,
)
from .report import CheckResult, check
from .weyl import Monomial, WeylElement, apply_to_polynomial, commutator, multiply, polynomial, product, to_text


class MarginError(ValueError):
    """The window is too small for an identity to be checked honestly."""


class NotDegreePreserving(ValueError):
    pass


@dataclass(frozen=True)
class JSContext:
    """Truncation context.

    ``margin`` is the number of indices trimmed from each end of ``window`` to
    get the safe window (None: trim exactly what the bandwidths require).
    ``whole_space`` marks a window that is the entire (finite) model space, in
    which case nothing is truncated and full matrices are fine.
    """

    window: IndexWindow
    margin: int | None = None
    scalar_mode: str = "exact"
    whole_space: bool = False

    def __post_init__(self):
        if self.scalar_mode not in ("exact", "float"):
            raise ValueError("scalar_mode must be 'exact' or 'float'")


@dataclass(frozen=True)
class WeightSpec:
    degree: int
    variables: IndexWindow

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")


# --- the maps ------------------------------------------------------------------


def D(A: PairingMatrix) -> WeylElement:
    terms = {}
    for (a, b), v in A.entries.items():
        if isinstance(v, PiScalar):
            raise TypeError("pi-graded tables have no exact Weyl image; use float mode")
        terms[Monomial(((a, 1),), ((b, 1),))] = v
    return WeylElement._raw(terms)


def partial(h: VectorCoeffs) -> WeylElement:
    """d(h) = sum <h, f_a> d_a."""
    return WeylElement._raw({Monomial((), ((a, 1),)): v for a, v in h.entries.items()})


def partial_bar(r: VectorCoeffs) -> WeylElement:
    """dbar(r) = sum <e_a, r> x_a."""
    return WeylElement._raw({Monomial(((a, 1),), ()): v for a, v in r.entries.items()})


del_ = partial
delbar = partial_bar


def tilde_D(v, L) -> WeylElement:
    """D o ad: the vector field of ad(v) for an algebra given by structure constants."""
    return D(L.ad_pairing(v))


def epsilon(A: PairingMatrix, B: PairingMatrix) -> WeylElement:
    """eps(A, B) = D(A) D(B) + D(A o B)."""
    return multiply(D(A), D(B)) + D(A.compose(B))


# --- truncation ------------------------------------------------------------------


def safe_window(ctx: JSContext, bandwidths: Iterable) -> IndexWindow:
    """Sub-window where no index chain of the identity leaves ``ctx.window``."""
    bws = list(bandwidths)
    if ctx.whole_space:
        return ctx.window
    if any(b == FULL for b in bws):
        raise MarginError("full matrices can only be verified when the window is the whole space")
    need = sum(bws)
    margin = need if ctx.margin is None else ctx.margin
    if margin < need:
        raise MarginError(f"margin {margin} is below the required {need}")
    try:
        return ctx.window.shrink(margin)
    except ValueError as exc:
        raise MarginError(str(exc)) from None


def _compare(name: str, lhs: WeylElement, rhs: WeylElement, ctx: JSContext, safe: IndexWindow) -> CheckResult:
    lhs, rhs = lhs.restrict(safe), rhs.restrict(safe)
    diff = lhs - rhs
    witness = None
    if diff:
        m, c = diff.sorted_terms()[0]
        witness = to_text(WeylElement._raw({m: c}))
    return check(name, not diff, window=str(ctx.window), safe_window=str(safe), witness=witness)


def verify_comm_relations(
    A: PairingMatrix, B: PairingMatrix, h: VectorCoeffs, r: VectorCoeffs, ctx: JSContext, tag: str = ""
) -> list[CheckResult]:
    """The four bracket relations between D, partial and partial-bar."""
    safe = safe_window(ctx, [A.bandwidth, B.bandwidth])
    DA, DB = D(A), D(B)
    sfx = f"[{tag}]" if tag else ""
    return [
        _compare(f"comm1 [D(A),D(B)]=D([B,A]){sfx}", commutator(DA, DB), D(op_commutator(B, A)), ctx, safe),
        _compare(f"comm2 [d(h),D(A)]=d(Ah){sfx}", commutator(partial(h), DA), partial(A.apply(h)), ctx, safe),
        _compare(f"comm3 [d(h),d(r)]=0{sfx}", commutator(partial(h), partial(r)), WeylElement.zero(), ctx, safe),
        _compare(
            f"comm4 [D(A),dbar(r)]=dbar(A*r){sfx}",
            commutator(DA, partial_bar(r)),
            partial_bar(A.adjoint_apply(r)),
            ctx,
            safe,
        ),
    ]


# --- derived identities --------------------------------------------------------------


def n_point_motion(A: PairingMatrix, fs: Sequence[VectorCoeffs]) -> tuple[WeylElement, WeylElement]:
    """Both sides of [-D(A), d(f_1)...d(f_n)] = sum_k d(f_1)...d(A f_k)...d(f_n)."""
    parts = [partial(f) for f in fs]
    lhs = commutator(-D(A), product(parts))
    rhs = WeylElement.zero()
    for k in range(len(fs)):
        moved = parts[:k] + [partial(A.apply(fs[k]))] + parts[k + 1 :]
        rhs = rhs + product(moved)
    return lhs, rhs


def invariant_subspace_check(A: PairingMatrix, sub: Iterable, degree: int = 2) -> CheckResult:
    """If span{e_w : w in sub} is A-invariant, D(A) preserves the polynomials free of x_w.

    Those polynomials are exactly the ones killed by every d(f), f in the span.
    """
    subd = {HalfIndex.of(w).doubled for w in sub}
    for (a, b), v in A.entries.items():
        if a in subd and b not in subd and v:
            raise ValueError("the coordinate subspace is not invariant under A")
    comp = [d for d in A.window.doubled() if d not in subd]
    DA = D(A)
    bad = None
    for deg in range(degree + 1):
        for combo in itertools.combinations_with_replacement(comp, deg):
            powers = {}
            for d in combo:
                powers[d] = powers.get(d, 0) + 1
            p = polynomial({tuple(sorted(powers.items())): ONE})
            image = apply_to_polynomial(DA, p)
            if any(i in subd for i in image.indices()):
                bad = to_text(p)
                break
        if bad:
            break
    return check("invariant-subspace", bad is None, window=str(A.window), witness=bad)


def coefficient_rows(elements: Sequence[WeylElement]) -> list[list[GScalar]]:
    """Coefficient table: one column per element, one row per monomial."""
    monos = sorted({m for e in elements for m in e.terms}, key=Monomial.sort_key)
    return [[e.coeff(m) for e in elements] for m in monos]


def faithfulness_check(images: Sequence[PairingMatrix]) -> CheckResult:
    """-D o rho is injective on the span of independent representation matrices.

    Passes when the Weyl images of the given matrices are linearly independent;
    the matrices themselves must be independent (rho faithful on a basis).
    """
    from .kernel import rank

    keys = sorted({k for A in images for k in A.entries})
    mrank = rank([[A.entries.get(k, ZERO) for A in images] for k in keys]) if keys else 0
    if mrank != len(images):
        raise ValueError("representation matrices are linearly dependent; rho is not faithful on them")
    rows = coefficient_rows([-D(A) for A in images])
    rk = rank(rows) if rows else 0
    return check("faithfulness -D o rho", rk == len(images), detail=f"rank {rk} of {len(images)}")


# --- weight, Killing-type form, cocycle ----------------------------------------------


def _is_balanced(m: Monomial) -> bool:
    return m.xdegree() == m.ddegree()


@lru_cache(maxsize=None)
def _compositions(n: int, d: int) -> tuple:
    if n == 0:
        return ((),) if d == 0 else ()
    out = []
    for first in range(d + 1):
        for rest in _compositions(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def representation_dimension(spec: WeightSpec) -> int:
    return math.comb(len(spec.variables) + spec.degree - 1, spec.degree)


def weight_trace(w: WeylElement, spec: WeightSpec) -> GScalar:
    """Normalized trace of ``w`` on homogeneous polynomials of degree d in the chosen variables."""
    for m in w.terms:
        if not _is_balanced(m):
            raise NotDegreePreserving(f"term {m} does not preserve polynomial degree")
    var = list(spec.variables.doubled())
    pos = {v: i for i, v in enumerate(var)}
    comps = _compositions(len(var), spec.degree)
    total = ZERO
    for m, c in w.terms.items():
        if m.x != m.d:
            continue  # off-diagonal on the monomial basis
        if any(i not in pos for i, _ in m.x):
            continue
        alpha = [(pos[i], p) for i, p in m.x]
        s = 0
        for g in comps:
            term = 1
            for i, p in alpha:
                if g[i] < p:
                    term = 0
                    break
                term *= math.perm(g[i], p)
            s += term
        if s:
            total = total + c * s
    return total * Fraction(1, representation_dimension(spec))


def default_weight(L, degree: int = 2) -> WeightSpec:
    return WeightSpec(degree, IndexWindow(0, L.dim - 1))


def killing_form(u, v, L, spec: WeightSpec | None = None) -> GScalar:
    """B(u, v) = tau(eps(ad u, ad v))."""
    spec = spec or default_weight(L)
    return weight_trace(epsilon(L.ad_pairing(u), L.ad_pairing(v)), spec)


def cocycle(u, w, z, L, spec: WeightSpec | None = None) -> GScalar:
    """phi_u(w, z) = B([u, w], z)."""
    return killing_form(L.bracket(u, w), z, L, spec)


def killing_matrix(L, spec: WeightSpec | None = None) -> list[list[GScalar]]:
    basis = [L.basis_vector(a) for a in L.labels]
    return [[killing_form(a, b, L, spec) for b in basis] for a in basis]


def cocycle_table(u, L, spec: WeightSpec | None = None) -> list[list[GScalar]]:
    """phi_u on basis pairs.  Computed from the B table: phi_u(w, z) = sum_k c_{u w}^k B(e_k, z)."""
    Bm = killing_matrix(L, spec)
    basis = [L.basis_vector(a) for a in L.labels]
    out = []
    for w in basis:
        uw = L.to_list(L.bracket(u, w))
        out.append([sum((uw[k] * Bm[k][j] for k in range(L.dim)), ZERO) for j in range(L.dim)])
    return out


# --- float-mode checks --------------------------------------------------------------


def expm_taylor(M: np.ndarray, degree: int = 12) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a degree-12 Taylor polynomial."""
    M = np.asarray(M)
    norm = np.abs(M).sum(axis=0).max() if M.size else 0.0
    s = max(0, math.ceil(math.log2(norm / 0.25))) if norm > 0.25 else 0
    X = M / (2.0**s)
    out = np.eye(M.shape[0], dtype=M.dtype)
    term = np.eye(M.shape[0], dtype=M.dtype)
    for k in range(1, degree + 1):
        term = term @ X / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def semigroup_check(A: PairingMatrix, t: float, h: VectorCoeffs, tol: float = 1e-12, tag: str = "") -> CheckResult:
    """d(e^{tA} h) = e^{-t D(A)} d(h) e^{t D(A)}, compared coefficient-wise.

    Left route: the exact Weyl iterates (-ad D(A))^k d(h) summed with weights t^k/k!.
    Right route: the scaling-and-squaring exponential of the pairing table applied to h.
    """
    name = "semigroup d(e^{tA}h)=e^{-tD(A)}d(h)e^{tD(A)}" + (f"[{tag}]" if tag else "")
    ds = list(A.window.doubled())
    if t == 0:
        return check(name, True, window=str(A.window), max_abs_error=0.0)
    M = A.to_dense()
    hv = h.to_array()
    norm = float(np.abs(M).sum(axis=1).max()) * abs(t) if M.size else 0.0
    # terms until the tail bound (t|A|)^k/k! is negligible
    kmax = 1
    bound = 1.0
    while bound > 1e-18 * max(1.0, math.exp(norm)) or kmax < 2 * norm:
        kmax += 1
        bound = norm**kmax / math.factorial(kmax)
    DA = D(A)
    cur = partial(h)
    acc = np.zeros(len(ds), dtype=complex)
    weight = 1.0
    for k in range(kmax + 1):
        if k:
            cur = commutator(-DA, cur)
            weight *= t / k
        for mono, c in cur.terms.items():
            (i, _), = mono.d
            acc[ds.index(i)] += weight * complex(c)
    expected = hv @ expm_taylor(t * M)
    err = float(np.max(np.abs(acc - expected))) if len(ds) else 0.0
    return check(name, err <= tol, window=str(A.window), max_abs_error=err)


FLOW_T_MAX = 1 / (2 * math.pi)


def flow_semigroup_errors(size: int, t: float, nodes: int = 10001, probe: int = 3) -> tuple[float, np.ndarray, np.ndarray]:
    """Compare (1/pi) int e_n(X_t(x)) e_m(x) dx with (e^{t Abar})_{nm}, X_t(x) = x / (1 - t x).

    Abar is the x^2 d/dx table on the sine window {1..size}.  Returns the max
    error on the leading ``probe x probe`` block together with both tables.
    """
    if not 0 <= t < FLOW_T_MAX:
        raise ValueError(f"t = {t} outside the flow's range 0 <= t < 1/(2 pi)")
    Abar = x2dx_matrix(IndexWindow(1, size)).to_dense()
    E = expm_taylor(t * Abar)
    k = min(probe, size)
    F = np.array(
        [
            [
                quadrature_oracle(lambda x, n=n: np.sin(n * x / (1 - t * x)), lambda x, m=m: np.sin(m * x), nodes)
                for m in range(1, k + 1)
            ]
            for n in range(1, k + 1)
        ]
    )
    return float(np.max(np.abs(F - E[:k, :k]))), F, E[:k, :k]


def flow_semigroup_check(
    t: float = 0.05, size: int = 8, tol: float = 2e-3, sizes: Sequence[int] = (6, 7, 8, 9, 10), nodes: int = 10001
) -> list[CheckResult]:
    """The x^2 d/dx flow against the truncated exponential, plus convergence in the window size."""
    err, _, _ = flow_semigroup_errors(size, t, nodes)
    out = [check(f"flow-semigroup t={t} window={size}", err <= tol, max_abs_error=err, detail=f"tol {tol}")]
    errs = [flow_semigroup_errors(n, t, nodes)[0] for n in sizes]
    mono = all(b < a for a, b in zip(errs, errs[1:]))
    out.append(
        check(
            f"flow-semigroup convergence windows {sizes[0]}..{sizes[-1]}",
            mono,
            max_abs_error=errs[-1],
            detail="errors " + ", ".join(f"{e:.6g}" for e in errs),
        )
    )
    return out


def _covector_values(ls: Sequence[VectorCoeffs], x: np.ndarray) -> np.ndarray:
    return np.array([np.real_if_close(l.to_array() @ x) for l in ls], dtype=float)


def _as_vector(x, win: IndexWindow) -> np.ndarray:
    if isinstance(x, VectorCoeffs):
        return x.to_array().astype(float)
    return np.asarray(x, dtype=float)


def cylindrical_derivative(
    A: PairingMatrix,
    ls: Sequence[VectorCoeffs],
    phi: Callable[..., float],
    x,
    step: float = 1e-6,
) -> float:
    """D(A)[phi(l_1, ..., l_k)](x) = sum_m (d phi / d x_m)(l(x)) (A* l_m)(x).

    ``(A* l)(x) = l(A x)`` with ``(A x)_b = sum_a x_a <A e_a, f_b>``.  The partial
    derivatives of the black box come from central differences.
    """
    if not ls:
        raise ValueError("need at least one covector")
    M = A.to_dense()
    xv = _as_vector(x, A.window)
    p = _covector_values(ls, xv)
    Ax = xv @ M
    total = 0.0
    for m, l in enumerate(ls):
        hstep = step * max(1.0, abs(p[m]))
        up, dn = p.copy(), p.copy()
        up[m] += hstep
        dn[m] -= hstep
        grad = (phi(*up) - phi(*dn)) / (2 * hstep)
        total += grad * float(np.real(l.to_array() @ Ax))
    return float(total)


def flow_derivative(A: PairingMatrix, ls: Sequence[VectorCoeffs], phi: Callable[..., float], x, t: float = 1e-6) -> float:
    """(f(x + t A x) - f(x)) / t for the cylindrical function f = phi(l_1, ..., l_k)."""
    M = A.to_dense()
    xv = _as_vector(x, A.window)
    f0 = phi(*_covector_values(ls, xv))
    f1 = phi(*_covector_values(ls, xv + t * (xv @ M)))
    return float((f1 - f0) / t)
