"""The QMF representation of the Cuntz algebra O_n on Laurent polynomials.

Y is the unit circle with r(z) = z^n.  On the circle conj(z) = 1/z, so the
conjugate of a Laurent polynomial is again one.  Branch sums
(1/n) sum_{w^n = z} g(w) are done by exponent arithmetic: only exponents
divisible by n survive, and z^e becomes z^(e/n).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .cuntz import AlgebraModel, CuntzElement, homotope_embed
from .kernel import ONE, ZERO, GScalar, HalfIndex
from .pairings import PairingMatrix
from .report import CheckResult, check


class LaurentPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        clean = {}
        for k, v in (coeffs or {}).items():
            if not isinstance(k, int) or isinstance(k, bool):
                raise TypeError(f"exponent must be an int, got {k!r}")
            v = GScalar.coerce(v)
            if v:
                clean[k] = v
        self.coeffs = clean

    @classmethod
    def _raw(cls, coeffs):
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        return obj

    @classmethod
    def monomial(cls, k: int, c=ONE) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out[k] + v if k in out else v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentPoly._raw(out)

    def scale(self, c) -> "LaurentPoly":
        c = GScalar.coerce(c)
        if not c:
            return LaurentPoly()
        return LaurentPoly._raw({k: v * c for k, v in self.coeffs.items()})

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        out: dict = {}
        for a, u in self.coeffs.items():
            for b, v in other.coeffs.items():
                out[a + b] = out[a + b] + u * v if a + b in out else u * v
        return LaurentPoly._raw({k: v for k, v in out.items() if v})

    __rmul__ = scale

    def conj(self) -> "LaurentPoly":
        """Pointwise conjugate on |z| = 1."""
        return LaurentPoly._raw({-k: v.conj() for k, v in self.coeffs.items()})

    def compose_power(self, n: int) -> "LaurentPoly":
        """f(z^n)."""
        return LaurentPoly._raw({n * k: v for k, v in self.coeffs.items()})

    def norm2(self) -> GScalar:
        """Squared l2 norm of the coefficients (= Haar L2 norm squared)."""
        return sum((GScalar(v.norm2()) for v in self.coeffs.values()), ZERO)

    def mean(self) -> GScalar:
        """Haar integral: the constant coefficient."""
        return self.coeffs.get(0, ZERO)

    def __call__(self, z: complex) -> complex:
        return sum(complex(v) * z**k for k, v in self.coeffs.items())

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def degree_span(self) -> tuple[int, int] | None:
        if not self.coeffs:
            return None
        return min(self.coeffs), max(self.coeffs)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"LaurentPoly({to_text(self)!r})"


def to_text(p: LaurentPoly) -> str:
    """Canonical form ``z^{-2} + (1/2) z^{3}``; a constant prints as ``1`` or ``(c)``."""
    if not p.coeffs:
        return "0"
    parts = []
    for k in sorted(p.coeffs):
        c = p.coeffs[k]
        if k == 0:
            parts.append("1" if c == ONE else f"({c})")
        elif c == ONE:
            parts.append(f"z^{{{k}}}")
        else:
            parts.append(f"({c}) z^{{{k}}}")
    return " + ".join(parts)


_TERM = re.compile(r"^(?:\((?P<c>[^()]*)\))?\s*(?:(?P<z>z)(?:\^(?:\{(?P<e1>-?\d+)\}|(?P<e2>-?\d+)))?)?$")


def from_text(text: str) -> LaurentPoly:
    s = text.strip()
    if s == "0":
        return LaurentPoly()
    out = LaurentPoly()
    for raw in s.split(" + "):
        t = raw.strip()
        if t == "1":
            out = out + LaurentPoly.constant(ONE)
            continue
        m = _TERM.match(t)
        if not m or not t or (m.group("c") is None and m.group("z") is None):
            raise ValueError(f"cannot parse Laurent term {t!r}")
        c = GScalar.parse(m.group("c")) if m.group("c") is not None else ONE
        e = 0
        if m.group("z"):
            e = int(m.group("e1") or m.group("e2") or 1)
        out = out + LaurentPoly.monomial(e, c)
    return out


def branch_average(g: LaurentPoly, n: int) -> LaurentPoly:
    """(1/n) sum_{w^n = z} g(w): keeps exponents divisible by n, divided by n."""
    return LaurentPoly._raw({k // n: v for k, v in g.coeffs.items() if k % n == 0})


@dataclass
class QMFSystem:
    n: int
    filters: list

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("branching factor must be at least 2")
        if len(self.filters) != self.n:
            raise ValueError(f"need {self.n} filters, got {len(self.filters)}")

    def filter(self, i: int) -> LaurentPoly:
        if not 0 <= i < self.n:
            raise IndexError(f"filter index {i} outside 0..{self.n - 1}")
        return self.filters[i]


def standard_qmf(n: int) -> QMFSystem:
    """Monomial filters m_j(z) = z^j."""
    if n < 2:
        raise ValueError("branching factor must be at least 2")
    return QMFSystem(n, [LaurentPoly.monomial(j) for j in range(n)])


def verify_qmf(sys: QMFSystem) -> list[CheckResult]:
    """(1/n) sum_{r(w)=z} m_i(w) conj(m_j(w)) = delta_ij, exactly."""
    out = []
    for i in range(sys.n):
        for j in range(sys.n):
            got = branch_average(sys.filters[i] * sys.filters[j].conj(), sys.n)
            want = LaurentPoly.constant(ONE if i == j else ZERO)
            kind = "qmf" if i == j else "qmf-ortho"
            out.append(
                check(
                    f"{kind} n={sys.n} ({i},{j})",
                    got == want,
                    witness=None if got == want else to_text(got),
                )
            )
    return out


def S(i: int, f: LaurentPoly, sys: QMFSystem) -> LaurentPoly:
    """S_i f = m_i (f o r)."""
    return sys.filter(i) * f.compose_power(sys.n)


def S_star(i: int, f: LaurentPoly, sys: QMFSystem) -> LaurentPoly:
    """S_i* f (z) = (1/n) sum_{r(w)=z} conj(m_i(w)) f(w)."""
    return branch_average(sys.filter(i).conj() * f, sys.n)


def _generator(d: int, sys: QMFSystem) -> int:
    if d % 2:
        raise ValueError(f"generator index {HalfIndex(d)} is not an integer")
    i = d // 2
    if not 0 <= i < sys.n:
        raise ValueError(f"generator index {i} outside 0..{sys.n - 1}")
    return i


def represent(e: CuntzElement, f: LaurentPoly, sys: QMFSystem) -> LaurentPoly:
    """Apply the operator of a normal-form element: s_mu s_nu* acts as S_mu S_nu*."""
    out = LaurentPoly()
    for w, c in e.terms.items():
        g = f
        for d in w.right:
            g = S_star(_generator(d, sys), g, sys)
            if not g:
                break
        for d in reversed(w.left):
            if not g:
                break
            g = S(_generator(d, sys), g, sys)
        out = out + g.scale(c)
    return out


def _pairing_rows(pairing, n: int) -> list:
    if isinstance(pairing, PairingMatrix):
        if len(pairing.window) != n:
            raise ValueError(f"pairing has size {len(pairing.window)}, system has n={n}")
        return pairing.rows()
    rows = [[GScalar.coerce(v) for v in r] for r in pairing]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"pairing must be {n}x{n}")
    return rows


def wavelet_D(pairing, sys: QMFSystem, f: LaurentPoly) -> LaurentPoly:
    """Branch-sum form: (1/n) sum_{r(w)=r(z)} (sum P_ij m_i(z) conj(m_j(w))) f(w).

    For fixed z the branches w with w^n = z^n are z times the n-th roots of
    unity.  The sum picks out the exponents e of conj(m_j) f with n | e, each
    evaluating to z^e.
    """
    rows = _pairing_rows(pairing, sys.n)
    out = LaurentPoly()
    for j in range(sys.n):
        g = sys.filters[j].conj() * f
        inner = LaurentPoly._raw({e: v for e, v in g.coeffs.items() if e % sys.n == 0})
        if not inner:
            continue
        for i in range(sys.n):
            if rows[i][j]:
                out = out + (sys.filters[i] * inner).scale(rows[i][j])
    return out


def wavelet_D_composed(pairing, sys: QMFSystem, f: LaurentPoly) -> LaurentPoly:
    """sum_{i,j} P_ij S_i(S_j*(f))."""
    rows = _pairing_rows(pairing, sys.n)
    out = LaurentPoly()
    for j in range(sys.n):
        sj = S_star(j, f, sys)
        for i in range(sys.n):
            if rows[i][j]:
                out = out + S(i, sj, sys).scale(rows[i][j])
    return out


def homotope_pairing(a: Sequence, model: AlgebraModel) -> PairingMatrix:
    """Coefficient table of D(l_a) in the homotope: pairing of l_rho o l_a."""
    return model.left_mult(model.rho).compose(model.left_mult(a))


def wavelet_D_model(a: Sequence, model: AlgebraModel, sys: QMFSystem, f: LaurentPoly) -> LaurentPoly:
    if model.dim != sys.n:
        raise ValueError(f"model dimension {model.dim} does not match n={sys.n}")
    return wavelet_D(homotope_pairing(a, model), sys, f)


def wavelet_D_via_cuntz(a: Sequence, model: AlgebraModel, sys: QMFSystem, f: LaurentPoly) -> LaurentPoly:
    """The same operator as the image of homotope_embed(a) under the representation."""
    if model.dim != sys.n:
        raise ValueError(f"model dimension {model.dim} does not match n={sys.n}")
    return represent(homotope_embed(a, model), f, sys)


def diagonal_algebra(n: int, rho: Sequence | None = None) -> AlgebraModel:
    """C^n with the pointwise product."""
    mult = [[[ONE if (i == j == k) else ZERO for k in range(n)] for j in range(n)] for i in range(n)]
    return AlgebraModel(n, mult, [ONE] * n if rho is None else list(rho), f"C^{n}")
