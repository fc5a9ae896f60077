"""Normal forms in the Cuntz algebra and the maps D, partial, partial-bar into it.

Only the relations s_j* s_j = 1 and s_j* s_k = 0 (j != k) are used; no
completeness relation is ever applied.  Every product of generators reduces
to a combination of words s_mu s_nu* where s_nu = s_{nu_1} ... s_{nu_k}.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .kernel import ONE, ZERO, GScalar, HalfIndex, IndexWindow, index_text, nullspace, parse_index
from .pairings import FULL, PairingMatrix, VectorCoeffs
from .report import CheckResult, check


class CuntzWord(NamedTuple):
    """s_left s_right*, generator indices stored doubled."""

    left: tuple = ()
    right: tuple = ()

    def star(self) -> "CuntzWord":
        return CuntzWord(self.right, self.left)

    def sort_key(self):
        return (len(self.left) + len(self.right), self.left, self.right)

    def __str__(self):
        parts = "".join(f"s[{index_text(i)}]" for i in self.left)
        stars = "".join(f"s*[{index_text(i)}]" for i in reversed(self.right))
        if parts and stars:
            return f"{parts} {stars}"
        return parts or stars or "1"


def word_product(u: CuntzWord, v: CuntzWord) -> CuntzWord | None:
    """(s_mu s_nu*)(s_mu' s_nu'*), or None when it vanishes."""
    nu, mu2 = u.right, v.left
    k = min(len(nu), len(mu2))
    if nu[:k] != mu2[:k]:
        return None
    if len(nu) <= len(mu2):
        return CuntzWord(u.left + mu2[k:], v.right)
    return CuntzWord(u.left, v.right + nu[k:])


class CuntzElement:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for w, c in (terms or {}).items():
            c = GScalar.coerce(c)
            if c:
                clean[w if isinstance(w, CuntzWord) else CuntzWord(*w)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("CuntzElement is immutable")

    @classmethod
    def _raw(cls, terms):
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def one(cls):
        return cls._raw({CuntzWord(): ONE})

    @classmethod
    def s(cls, i) -> "CuntzElement":
        return cls._raw({CuntzWord((HalfIndex.of(i).doubled,), ()): ONE})

    @classmethod
    def s_star(cls, i) -> "CuntzElement":
        return cls._raw({CuntzWord((), (HalfIndex.of(i).doubled,)): ONE})

    def __add__(self, other):
        if not isinstance(other, CuntzElement):
            other = CuntzElement.one().scale(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out[w] + c if w in out else c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return CuntzElement._raw(out)

    __radd__ = __add__

    def scale(self, c) -> "CuntzElement":
        c = GScalar.coerce(c)
        if not c:
            return CuntzElement.zero()
        return CuntzElement._raw({w: v * c for w, v in self.terms.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other if isinstance(other, CuntzElement) else -GScalar.coerce(other))

    def __mul__(self, other):
        if not isinstance(other, CuntzElement):
            return self.scale(other)
        out: dict = {}
        for u, cu in self.terms.items():
            for v, cv in other.terms.items():
                w = word_product(u, v)
                if w is None:
                    continue
                c = cu * cv
                out[w] = out[w] + c if w in out else c
        return CuntzElement._raw({w: c for w, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def star(self) -> "CuntzElement":
        return CuntzElement._raw({w.star(): c.conj() for w, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, CuntzElement):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, w: CuntzWord) -> GScalar:
        return self.terms.get(w, ZERO)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"CuntzElement({to_text(self)!r})"


def reduce(sequence: Iterable[tuple]) -> CuntzElement:
    """Normal form of a product of generators given as (index, starred) pairs."""
    out = CuntzElement.one()
    for i, starred in sequence:
        out = out * (CuntzElement.s_star(i) if starred else CuntzElement.s(i))
    return out


# --- text -------------------------------------------------------------------------


def to_text(e: CuntzElement) -> str:
    """Canonical form, e.g. ``(1/2) s[1]s[3] s*[2] + s*[4]``."""
    if not e.terms:
        return "0"
    parts = []
    for w, c in e.sorted_terms():
        body = str(w)
        if c == ONE:
            parts.append(body)
        elif not w.left and not w.right:
            parts.append(f"({c})")
        else:
            parts.append(f"({c}) {body}")
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<coef>\([^()]*\))|s(?P<star>\*)?\[(?P<idx>[^\]]+)\]|(?P<plus>\+)|(?P<one>1)(?![\d/]))")


def from_text(text: str) -> CuntzElement:
    """Parse canonical text; any generator string is accepted and reduced."""
    s = text.strip()
    if s == "0":
        return CuntzElement.zero()
    total = CuntzElement.zero()
    term = None
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Cuntz element at {s[pos:]!r}")
        pos = m.end()
        if m.group("plus"):
            if term is None:
                raise ValueError("dangling '+'")
            total, term = total + term, None
            continue
        if m.group("coef"):
            factor = CuntzElement.one().scale(GScalar.parse(m.group("coef")[1:-1]))
        elif m.group("one"):
            factor = CuntzElement.one()
        else:
            i = HalfIndex(parse_index(m.group("idx")))
            factor = CuntzElement.s_star(i) if m.group("star") else CuntzElement.s(i)
        term = factor if term is None else term * factor
    if term is None:
        raise ValueError("trailing '+'")
    return total + term


# --- the maps ------------------------------------------------------------------------


def cuntz_D(A: PairingMatrix, L: PairingMatrix | None = None) -> CuntzElement:
    """D(A) = sum_{a,b} L^b(A e_a) s_a s_b*  (L = identity when omitted)."""
    LA = A if L is None else L.compose(A)
    return CuntzElement._raw({CuntzWord((a,), (b,)): v for (a, b), v in LA.entries.items()})


def cuntz_del(h: VectorCoeffs, L: PairingMatrix | None = None) -> CuntzElement:
    """d(h) = sum_a L^a(h) s_a*."""
    Lh = h if L is None else L.apply(h)
    return CuntzElement._raw({CuntzWord((), (a,)): v for a, v in Lh.entries.items()})


def cuntz_delbar(f: VectorCoeffs) -> CuntzElement:
    """dbar(f) = sum_a <e_a, f> s_a."""
    return CuntzElement._raw({CuntzWord((a,), ()): v for a, v in f.entries.items()})


def pairing_value(h: VectorCoeffs, g: VectorCoeffs) -> GScalar:
    """<h, g> = sum_a h_a g_a for coefficient vectors in a biorthogonal basis."""
    return sum((v * g.get_doubled(a) for a, v in h.entries.items()), ZERO)


def _cmp(name: str, lhs: CuntzElement, rhs: CuntzElement, win) -> CheckResult:
    witness = None
    if lhs != rhs:
        w, c = (lhs - rhs).sorted_terms()[0]
        witness = to_text(CuntzElement._raw({w: c}))
    return check(name, lhs == rhs, window=str(win), witness=witness)


def verify_cuntz_relations(
    A: PairingMatrix,
    B: PairingMatrix,
    L: PairingMatrix,
    h: VectorCoeffs,
    f: VectorCoeffs,
    g: VectorCoeffs,
    tag: str = "",
) -> list[CheckResult]:
    """D(A)D(B) = D(BLA), d(h)D(A) = d(ALh), D(A)dbar(f) = dbar(A*L*f), d(h)dbar(g) = <Lh, g>."""
    sfx = f"[{tag}]" if tag else ""
    DA = cuntz_D(A, L)
    BLA = B.compose(L).compose(A)
    ALh = A.apply(L.apply(h))
    ALf = A.adjoint_apply(L.adjoint_apply(f))
    win = A.window
    return [
        _cmp(f"cuntz1 D(A)D(B)=D(BLA){sfx}", DA * cuntz_D(B, L), cuntz_D(BLA, L), win),
        _cmp(f"cuntz2 d(h)D(A)=d(ALh){sfx}", cuntz_del(h, L) * DA, cuntz_del(ALh, L), win),
        _cmp(f"cuntz3 D(A)dbar(f)=dbar(A*L*f){sfx}", DA * cuntz_delbar(f), cuntz_delbar(ALf), win),
        _cmp(
            f"cuntz4 d(h)dbar(g)=<Lh,g>{sfx}",
            cuntz_del(h, L) * cuntz_delbar(g),
            CuntzElement.one().scale(pairing_value(L.apply(h), g)),
            win,
        ),
    ]


# --- homotopes --------------------------------------------------------------------------


@dataclass
class AlgebraModel:
    """Finite-dimensional associative algebra with a distinguished element rho.

    ``mult[i][j]`` lists the coordinates of e_i e_j.  The homotope product is
    (a, b) -> a rho b.
    """

    dim: int
    mult: list
    rho: list
    name: str = "model"

    def __post_init__(self):
        self.mult = [[[GScalar.coerce(c) for c in v] for v in row] for row in self.mult]
        self.rho = [GScalar.coerce(c) for c in self.rho]
        if len(self.mult) != self.dim or any(len(r) != self.dim for r in self.mult):
            raise ValueError("multiplication table has the wrong shape")

    @property
    def window(self) -> IndexWindow:
        return IndexWindow(0, self.dim - 1)

    def basis(self, i: int) -> list:
        return [ONE if j == i else ZERO for j in range(self.dim)]

    def product(self, a: Sequence, b: Sequence) -> list:
        out = [ZERO] * self.dim
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = GScalar.coerce(ai) * GScalar.coerce(bj)
                for k, v in enumerate(self.mult[i][j]):
                    if v:
                        out[k] = out[k] + c * v
        return out

    def homotope_product(self, a: Sequence, b: Sequence) -> list:
        return self.product(self.product(a, self.rho), b)

    def left_mult(self, a: Sequence) -> PairingMatrix:
        """Pairing table of l_a: entry (i, k) = coefficient of e_k in a e_i."""
        entries = {}
        for i in range(self.dim):
            for k, v in enumerate(self.product(a, self.basis(i))):
                if v:
                    entries[(i, k)] = v
        return PairingMatrix(self.window, entries, FULL)

    def vector(self, a: Sequence) -> VectorCoeffs:
        return VectorCoeffs.from_list(self.window, a)

    def homotope_identity(self) -> list | None:
        """e with e rho a = a rho e = a for all a, or None (exact linear solve)."""
        n = self.dim
        rows = []
        for k in range(n):
            ek = self.basis(k)
            for side in (0, 1):
                cols = []
                for i in range(n):
                    ei = self.basis(i)
                    cols.append(self.homotope_product(ei, ek) if side == 0 else self.homotope_product(ek, ei))
                for r in range(n):
                    rows.append([cols[i][r] for i in range(n)] + [-ek[r]])
        sols = nullspace(rows)
        for v in sols:
            if v[-1]:
                return [c / v[-1] for c in v[:-1]]
        return None

    def with_rho(self, rho: Sequence) -> "AlgebraModel":
        return AlgebraModel(self.dim, self.mult, list(rho), self.name)


def matrix_algebra(k: int, rho: Sequence[Sequence] | None = None) -> AlgebraModel:
    """k x k matrices with basis E_ij in row-major order."""
    n = k * k
    mult = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(k):
        for j in range(k):
            for l in range(k):
                mult[i * k + j][j * k + l][i * k + l] = ONE
    flat = [ZERO] * n if rho is None else [GScalar.coerce(rho[i][j]) for i in range(k) for j in range(k)]
    return AlgebraModel(n, mult, flat, f"M{k}")


def homotope_embed(a: Sequence, model: AlgebraModel) -> CuntzElement:
    """a -> D(l_a) with L = l_rho; an anti-homomorphism out of the rho-homotope."""
    return cuntz_D(model.left_mult(a), model.left_mult(model.rho))


def verify_homotope(model: AlgebraModel, a, b, h, f, g, tag: str = "") -> list[CheckResult]:
    """The four relations for left multiplications in the rho-homotope."""
    sfx = f"[{tag}]" if tag else ""
    Lr = model.left_mult(model.rho)
    Da = homotope_embed(a, model)
    brho_a = model.homotope_product(b, a)
    arho_h = model.homotope_product(a, h)
    fv, gv, hv = model.vector(f), model.vector(g), model.vector(h)
    la = model.left_mult(a)
    rho_h = model.vector(model.product(model.rho, h))
    win = model.window
    return [
        _cmp(f"homotope1 D(l_a)D(l_b)=D(l_(b rho a)){sfx}", Da * homotope_embed(b, model), homotope_embed(brho_a, model), win),
        _cmp(f"homotope2 d(h)D(l_a)=d(a rho h){sfx}", cuntz_del(hv, Lr) * Da, cuntz_del(model.vector(arho_h), Lr), win),
        _cmp(
            f"homotope3 D(l_a)dbar(f)=dbar(l_a* l_rho* f){sfx}",
            Da * cuntz_delbar(fv),
            cuntz_delbar(la.adjoint_apply(Lr.adjoint_apply(fv))),
            win,
        ),
        _cmp(
            f"homotope4 d(h)dbar(g)=<g, rho h>{sfx}",
            cuntz_del(hv, Lr) * cuntz_delbar(gv),
            CuntzElement.one().scale(pairing_value(rho_h, gv)),
            win,
        ),
    ]


def q_commutator_check(model: AlgebraModel, a, b, q, tag: str = "") -> CheckResult:
    """D(l_a)D(l_b) - q D(l_b)D(l_a) = D(l_{b rho a - q a rho b})."""
    q = GScalar.coerce(q)
    lhs = homotope_embed(a, model) * homotope_embed(b, model) - (
        homotope_embed(b, model) * homotope_embed(a, model)
    ).scale(q)
    x = [u - q * v for u, v in zip(model.homotope_product(b, a), model.homotope_product(a, b))]
    return _cmp(f"q-commutator q={q}" + (f"[{tag}]" if tag else ""), lhs, homotope_embed(x, model), model.window)


def injectivity_check(model: AlgebraModel, expect_injective: bool = True) -> tuple[CheckResult, list]:
    """Kernel of a -> D(l_a), solved exactly from the normal-form coefficients.

    Returns the check (pass when the outcome matches ``expect_injective``) and
    a kernel basis as coordinate lists.
    """
    images = [homotope_embed(model.basis(i), model) for i in range(model.dim)]
    words = sorted({w for e in images for w in e.terms}, key=CuntzWord.sort_key)
    rows = [[e.coeff(w) for e in images] for w in words]
    kernel = nullspace(rows) if rows else [model.basis(i) for i in range(model.dim)]
    has_identity = model.homotope_identity() is not None
    injective = not kernel
    detail = f"kernel dimension {len(kernel)}; homotope identity {'present' if has_identity else 'absent'}"
    name = f"injectivity {model.name}" + ("" if expect_injective else " (negative control)")
    return check(name, injective == expect_injective, detail=detail), kernel
