"""Lie algebras by structure constants, the Witt / Heisenberg-Virasoro /
Schrodinger-Virasoro families, and checks of their vector-field realizations.

Algebra elements are plain dicts ``label -> scalar``.  Labels are hashable and
totally ordered within one algebra (two-sorted families use ``(sort, index)``
tuples with Fraction indices).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .kernel import ONE, ZERO, GScalar, HalfIndex, IndexWindow, nullspace, rational
from .pairings import (
    FULL,
    PairingMatrix,
    VectorCoeffs,
    circle_field_matrix,
    map_induced_matrix,
    monomial_field_matrix,
    sv_action_matrix,
)
from .report import CheckResult, check
from .jsmap import D, JSContext, MarginError, partial, safe_window
from .weyl import WeylElement, commutator, to_text

Label = Hashable
Element = dict


class JacobiError(ValueError):
    pass


class CocycleError(ValueError):
    pass


def _add_into(out: dict, label, c):
    v = out.get(label, ZERO) + c
    if v:
        out[label] = v
    else:
        out.pop(label, None)


def clean(el: Mapping) -> Element:
    return {k: GScalar.coerce(v) for k, v in el.items() if v}


class StructureConstants:
    """Bracket table on an ordered label set.

    ``table[(a, b)]`` is the bracket of two basis labels as a sparse vector.
    Results may mention labels outside ``labels`` (truncated infinite families);
    such brackets are never truncated, they are skipped by the checks.
    """

    def __init__(self, labels: Sequence[Label], table: Mapping, name: str = "custom"):
        self.labels = list(labels)
        self.name = name
        self._pos = {a: i for i, a in enumerate(self.labels)}
        if len(self._pos) != len(self.labels):
            raise ValueError("duplicate labels")
        full: dict = {}
        for (a, b), res in table.items():
            res = clean(res)
            if (a, b) in full and full[(a, b)] != res:
                raise ValueError(f"conflicting brackets for ({a}, {b})")
            full[(a, b)] = res
            neg = {k: -v for k, v in res.items()}
            if (b, a) in full and full[(b, a)] != neg:
                raise ValueError(f"bracket table is not antisymmetric at ({a}, {b})")
            full[(b, a)] = neg
        for a in self.labels:
            if full.get((a, a)):
                raise ValueError(f"[{a}, {a}] must vanish")
        self.table = {k: v for k, v in full.items() if v}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index_of(self, label) -> int:
        return self._pos[label]

    def __contains__(self, label) -> bool:
        return label in self._pos

    def basis_vector(self, label) -> Element:
        if label not in self._pos:
            raise KeyError(label)
        return {label: ONE}

    def bracket_labels(self, a, b) -> Element:
        return self.table.get((a, b), {})

    def bracket(self, u: Mapping, v: Mapping) -> Element:
        out: dict = {}
        for a, ca in u.items():
            for b, cb in v.items():
                for k, ck in self.bracket_labels(a, b).items():
                    _add_into(out, k, GScalar.coerce(ca) * GScalar.coerce(cb) * ck)
        return out

    def in_span(self, el: Mapping) -> bool:
        return all(k in self._pos for k in el)

    def to_list(self, el: Mapping) -> list[GScalar]:
        out = [ZERO] * self.dim
        for k, v in el.items():
            out[self._pos[k]] = GScalar.coerce(v)
        return out

    def from_list(self, values: Sequence) -> Element:
        return clean({a: v for a, v in zip(self.labels, values)})

    def ad_pairing(self, v: Mapping) -> PairingMatrix:
        """Table <[v, e_a], f_b> on the position window {0..dim-1}."""
        entries = {}
        for a in self.labels:
            res = self.bracket(v, {a: ONE})
            if not self.in_span(res):
                raise ValueError(f"[v, {a}] leaves the label set; ad(v) is not defined on this window")
            for b, c in res.items():
                entries[(self._pos[a], self._pos[b])] = c
        return PairingMatrix(IndexWindow(0, self.dim - 1), entries, FULL)

    def jacobi_failures(self, labels: Iterable | None = None) -> tuple[list, int]:
        """Triples breaking Jacobi, and how many triples were skipped because an
        intermediate bracket left the label set."""
        labs = list(labels) if labels is not None else self.labels
        bad, skipped = [], 0
        for a, b, c in itertools.combinations(labs, 3):
            parts = [(a, (b, c)), (b, (c, a)), (c, (a, b))]
            inner = [self.bracket_labels(*bc) for _, bc in parts]
            if not all(self.in_span(r) for r in inner):
                skipped += 1
                continue
            total: dict = {}
            for (x, _), r in zip(parts, inner):
                for k, v in self.bracket({x: ONE}, r).items():
                    _add_into(total, k, v)
            if total:
                bad.append((a, b, c))
        return bad, skipped

    def require_jacobi(self) -> "StructureConstants":
        bad, _ = self.jacobi_failures()
        if bad:
            raise JacobiError(f"{self.name} breaks Jacobi at {bad[0]}")
        return self

    def center(self) -> list[Element]:
        """Basis of the center (exact nullspace of the stacked ad maps)."""
        rows = []
        for b in self.labels:
            cols = [self.bracket({a: ONE}, {b: ONE}) for a in self.labels]
            if not all(self.in_span(c) for c in cols):
                raise ValueError("center is only defined for a closed (finite) label set")
            for k in self.labels:
                rows.append([c.get(k, ZERO) for c in cols])
        return [self.from_list(v) for v in nullspace(rows)] if rows else []

    def relabel(self, mapping: Callable[[Label], Label]) -> "StructureConstants":
        table = {
            (mapping(a), mapping(b)): {mapping(k): v for k, v in res.items()}
            for (a, b), res in self.table.items()
        }
        return StructureConstants([mapping(a) for a in self.labels], table, self.name)

    def same_constants(self, other: "StructureConstants") -> bool:
        return set(self.labels) == set(other.labels) and self.table == other.table

    def __repr__(self):
        return f"StructureConstants({self.name}, dim={self.dim})"


# --- families ----------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraFamily:
    """A named family truncated to index windows.

    ``kind`` is one of witt, heisenberg_virasoro, schrodinger_virasoro,
    finite_custom.  ``lo..hi`` bounds the integer-indexed sort; the second sort
    (Y_p or del_m) uses ``ylo..yhi`` (defaults to the same range, shifted by s).
    """

    kind: str
    lo: int = -3
    hi: int = 3
    s: Fraction = Fraction(0)
    rho: Fraction = Fraction(0)
    ylo: Fraction | None = None
    yhi: Fraction | None = None
    table: Mapping | None = None
    labels: tuple = ()

    def __post_init__(self):
        if self.kind not in ("witt", "heisenberg_virasoro", "schrodinger_virasoro", "finite_custom"):
            raise ValueError(f"unknown family {self.kind!r}")
        object.__setattr__(self, "s", Fraction(self.s))
        object.__setattr__(self, "rho", rational(self.rho))
        if self.s not in (0, Fraction(1, 2)):
            raise ValueError("s must be 0 or 1/2")
        if self.lo > self.hi:
            raise ValueError("empty index window")

    def y_window(self) -> IndexWindow:
        lo = self.ylo if self.ylo is not None else self.lo + self.s
        hi = self.yhi if self.yhi is not None else self.hi + self.s
        return IndexWindow(Fraction(lo), Fraction(hi))


def _witt_table(ns: Sequence[int], sort: str = "L") -> dict:
    table = {}
    for m, n in itertools.combinations(ns, 2):
        if n - m:
            table[((sort, m), (sort, n))] = {(sort, m + n): GScalar(n - m)}
    return table


def build_family(fam: AlgebraFamily) -> StructureConstants:
    return _build(fam).require_jacobi()


def _build(fam: AlgebraFamily) -> StructureConstants:
    ns = list(range(fam.lo, fam.hi + 1))
    if fam.kind == "witt":
        return StructureConstants([("L", n) for n in ns], _witt_table(ns), "witt")
    if fam.kind == "heisenberg_virasoro":
        ms = [int(p.value) for p in fam.y_window()]
        table = _witt_table(ns, "d")
        for n in ns:
            for m in ms:
                if m:
                    table[(("d", n), ("del", m))] = {("del", n + m): GScalar(m)}
        labels = [("d", n) for n in ns] + [("del", m) for m in ms]
        return StructureConstants(labels, table, "heisenberg_virasoro")
    if fam.kind == "schrodinger_virasoro":
        ps = fam.y_window().values()
        table = _witt_table(ns, "L")
        for m in ns:
            for p in ps:
                c = p - m * fam.rho
                if c:
                    table[(("L", m), ("Y", p))] = {("Y", p + m): GScalar(c)}
        labels = [("L", n) for n in ns] + [("Y", p) for p in ps]
        return StructureConstants(labels, table, f"schrodinger_virasoro[s={fam.s},rho={fam.rho}]")
    if fam.table is None:
        raise ValueError("finite_custom needs a bracket table")
    return StructureConstants(fam.labels, fam.table, "finite_custom")


def sl2() -> StructureConstants:
    """[h, e] = 2e, [h, f] = -2f, [e, f] = h, labels ordered e, h, f."""
    return StructureConstants(
        ["e", "h", "f"],
        {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}},
        "sl2",
    )


def abelian(n: int) -> StructureConstants:
    return StructureConstants([f"a{i}" for i in range(n)], {}, f"abelian{n}")


def random_solvable(rng: random.Random, dim: int = 4, bound: int = 3) -> StructureConstants:
    """R t  semidirect  R^(dim-1) with [t, v_i] = sum_j M_ij v_j for a random rational M.

    The ideal is abelian, so the algebra is solvable and Jacobi holds for any M.
    """
    k = dim - 1
    labels = ["t"] + [f"v{i}" for i in range(k)]
    table = {}
    for i in range(k):
        res = {}
        for j in range(k):
            c = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
            if c:
                res[f"v{j}"] = c
        if res:
            table[("t", f"v{i}")] = res
    return StructureConstants(labels, table, f"solvable{dim}")


def random_element(L: StructureConstants, rng: random.Random, bound: int = 3) -> Element:
    return clean({a: Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for a in L.labels})


# --- realizations ---------------------------------------------------------------------


@dataclass
class Realization:
    """Label -> Weyl element, with the bandwidth of each realized element."""

    elements: dict
    bandwidths: dict = field(default_factory=dict)

    def __getitem__(self, label) -> WeylElement:
        return self.elements[label]

    def __contains__(self, label) -> bool:
        return label in self.elements

    def realize(self, el: Mapping) -> WeylElement:
        out = WeylElement.zero()
        for k, v in el.items():
            out = out + self.elements[k].scale(v)
        return out


def hv_realization(L: StructureConstants, win: IndexWindow) -> Realization:
    """d_n = -D(x^{n+1} d/dx), del_m = d(x^m) on the formal Laurent monomial basis."""
    els, bws = {}, {}
    for lab in L.labels:
        sort, n = lab
        if sort == "d":
            A = monomial_field_matrix(n + 1, win)
            els[lab], bws[lab] = -D(A), A.bandwidth
        else:
            els[lab], bws[lab] = partial(VectorCoeffs.unit(win, n)), 0
    return Realization(els, bws)


def sv_realization(L: StructureConstants, rho, s, win: IndexWindow) -> Realization:
    """L_m = -D(A_m) with A_m e_p = (p - m rho) e_{m+p};  Y_p = d(e_p)."""
    els, bws = {}, {}
    for lab in L.labels:
        sort, n = lab
        if sort == "L":
            A = sv_action_matrix(n, rho, s, win)
            els[lab], bws[lab] = -D(A), A.bandwidth
        else:
            els[lab], bws[lab] = partial(VectorCoeffs.unit(win, n)), 0
    return Realization(els, bws)


def witt_circle_realization(L: StructureConstants, win: IndexWindow) -> Realization:
    """L_m = i D(C_m) where C_m is e^{i m theta} d/dtheta on Fourier modes.

    With the field map  x -> -D(x d/dtheta)  this is L_m = -i * field(e^{i m theta}).
    """
    els, bws = {}, {}
    for lab in L.labels:
        _, n = lab
        A = circle_field_matrix(n, win)
        els[lab], bws[lab] = D(A).scale(GScalar(0, 1)), A.bandwidth
    return Realization(els, bws)


def verify_realization(
    L: StructureConstants,
    rz: Realization,
    ctx: JSContext,
    pair_labels: Iterable | None = None,
    name: str | None = None,
) -> CheckResult:
    """Check [rz(a), rz(b)] = rz([a, b]) on the safe window for every label pair.

    Pairs whose bracket lands outside the realized labels are counted as
    skipped, never truncated.
    """
    labs = list(pair_labels) if pair_labels is not None else list(rz.elements)
    checked = skipped = 0
    witness = None
    failed = None
    for a, b in itertools.combinations_with_replacement(labs, 2):
        res = L.bracket({a: ONE}, {b: ONE})
        if not all(k in rz for k in res):
            skipped += 1
            continue
        safe = safe_window(ctx, [rz.bandwidths.get(a, FULL), rz.bandwidths.get(b, FULL)])
        for lab in (a, b, *res):
            if rz[lab] and not rz[lab].restrict(safe):
                raise MarginError(f"realization of {lab} is invisible on the safe window {safe}")
        lhs = commutator(rz[a], rz[b]).restrict(safe)
        rhs = rz.realize(res).restrict(safe)
        checked += 1
        if lhs != rhs and failed is None:
            failed = (a, b)
            diff = (lhs - rhs).sorted_terms()[0]
            witness = f"[{a}, {b}]: " + to_text(WeylElement._raw({diff[0]: diff[1]}))
    return check(
        name or f"realization {L.name}",
        failed is None and checked > 0,
        window=str(ctx.window),
        witness=witness,
        detail=f"{checked} pairs checked, {skipped} skipped (bracket outside realized labels)",
    )


# --- dynamics ------------------------------------------------------------------------


def iterate_map(h: Sequence[int], n: int) -> list[int]:
    out = list(range(len(h)))
    for _ in range(n):
        out = [h[v] for v in out]
    return out


def dynamics_check(h: Sequence[int], phi: VectorCoeffs, n: int, tag: str = "") -> CheckResult:
    """d(S_n phi) = (-ad D(A))^n d(phi) for A phi = phi o h and S_n phi = phi o h^n."""
    A = map_induced_matrix(h)
    hn = iterate_map(h, n)
    Sn_phi = VectorCoeffs(A.window, {l: phi[hn[l]] for l in range(len(h))})
    lhs = partial(Sn_phi)
    rhs = partial(phi)
    minus_DA = -D(A)
    for _ in range(n):
        rhs = commutator(minus_DA, rhs)
    witness = None if lhs == rhs else to_text(lhs - rhs)
    return check(
        f"dynamics n={n}" + (f"[{tag}]" if tag else ""),
        lhs == rhs,
        window=str(A.window),
        witness=witness,
    )


# --- central extensions ------------------------------------------------------------------


def cocycle_failures(L: StructureConstants, phi: Callable[[Label, Label], GScalar]) -> list:
    bad = []
    for a, b in itertools.combinations_with_replacement(L.labels, 2):
        if phi(a, b) != -phi(b, a):
            bad.append(("antisymmetry", a, b))

    def phi_el(u: Mapping, v: Mapping):
        return sum(
            (GScalar.coerce(cu) * GScalar.coerce(cv) * phi(a, b) for a, cu in u.items() for b, cv in v.items()),
            ZERO,
        )

    for y, w, z in itertools.combinations(L.labels, 3):
        s = (
            phi_el({y: ONE}, L.bracket({w: ONE}, {z: ONE}))
            + phi_el({w: ONE}, L.bracket({z: ONE}, {y: ONE}))
            + phi_el({z: ONE}, L.bracket({y: ONE}, {w: ONE}))
        )
        if s:
            bad.append(("cocycle", y, w, z))
    return bad


def extend_by_cocycle(L: StructureConstants, phi, central: Label = "c") -> StructureConstants:
    """g + R c with [x, y]' = [x, y] + phi(x, y) c.

    ``phi`` is a callable on label pairs or a square table in label order.
    """
    if not callable(phi):
        table = phi
        pos = {a: i for i, a in enumerate(L.labels)}

        def phi(a, b, _t=table):
            return GScalar.coerce(_t[pos[a]][pos[b]])

    if central in L:
        raise ValueError(f"label {central!r} already used")
    bad = cocycle_failures(L, phi)
    if bad:
        raise CocycleError(f"not a 2-cocycle: {bad[0]}")
    table = {}
    for a, b in itertools.combinations(L.labels, 2):
        res = dict(L.bracket_labels(a, b))
        c = phi(a, b)
        if c:
            res[central] = c
        if res:
            table[(a, b)] = res
    return StructureConstants(L.labels + [central], table, f"{L.name}+c").require_jacobi()
