"""Sparse Weyl algebra in variables x_i, d_i indexed by Z/2.

Elements are stored normal ordered (all x's to the left of all d's) as a dict
``Monomial -> GScalar``.  Variable indices are kept doubled, so ``x[1/2]`` has
key 1 and ``x[3]`` has key 6.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping, NamedTuple

from .kernel import ONE, ZERO, GScalar, HalfIndex, IndexWindow, index_text, parse_index

DEFAULT_DEGREE_CAP = 8

Powers = tuple  # tuple[tuple[int, int], ...] sorted by doubled index


class DegreeCapExceeded(ArithmeticError):
    pass


class Monomial(NamedTuple):
    """x^xdeg d^ddeg, each a sorted tuple of (doubled index, power) with power > 0."""

    x: Powers = ()
    d: Powers = ()

    @classmethod
    def make(cls, xdeg: Mapping | None = None, ddeg: Mapping | None = None) -> "Monomial":
        return cls(_powers(xdeg or {}), _powers(ddeg or {}))

    @property
    def xdeg(self) -> dict[HalfIndex, int]:
        return {HalfIndex(i): p for i, p in self.x}

    @property
    def ddeg(self) -> dict[HalfIndex, int]:
        return {HalfIndex(i): p for i, p in self.d}

    def degree(self) -> int:
        return sum(p for _, p in self.x) + sum(p for _, p in self.d)

    def xdegree(self) -> int:
        return sum(p for _, p in self.x)

    def ddegree(self) -> int:
        return sum(p for _, p in self.d)

    def indices(self) -> set[int]:
        return {i for i, _ in self.x} | {i for i, _ in self.d}

    def sort_key(self):
        return (self.degree(), self.x, self.d)

    def __str__(self):
        parts = [_factor("x", i, p) for i, p in self.x] + [_factor("d", i, p) for i, p in self.d]
        return " ".join(parts) if parts else "1"


def _factor(sym: str, i: int, p: int) -> str:
    return f"{sym}[{index_text(i)}]" + (f"^{p}" if p != 1 else "")


def _powers(deg: Mapping) -> Powers:
    out = {}
    for k, p in deg.items():
        if p < 0:
            raise ValueError("negative power")
        if p:
            key = HalfIndex.of(k).doubled
            out[key] = out.get(key, 0) + p
    return tuple(sorted(out.items()))


def _merge(a: Powers, b: Powers) -> Powers:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for i, p in b:
        out[i] = out.get(i, 0) + p
    return tuple(sorted(out.items()))


def _reorder(dpow: Powers, xpow: Powers):
    """Normal order d^dpow x^xpow.

    Yields (coefficient, x-part, d-part) with d_i^r x_i^t expanded by the finite
    Leibniz sum  sum_k C(r,k) t!/(t-k)! x_i^(t-k) d_i^(r-k).
    """
    if not dpow or not xpow:
        yield 1, xpow, dpow
        return
    xd = dict(xpow)
    shared = [(i, r, xd[i]) for i, r in dpow if i in xd]
    if not shared:
        yield 1, xpow, dpow
        return
    ranges = [range(min(r, t) + 1) for _, r, t in shared]
    for ks in itertools.product(*ranges):
        c = 1
        xnew = dict(xpow)
        dnew = dict(dpow)
        for (i, r, t), k in zip(shared, ks):
            if k:
                c *= comb(r, k) * _falling(t, k)
                if t - k:
                    xnew[i] = t - k
                else:
                    del xnew[i]
                if r - k:
                    dnew[i] = r - k
                else:
                    del dnew[i]
        yield c, tuple(sorted(xnew.items())), tuple(sorted(dnew.items()))


def _falling(t: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= t - j
    return out


class WeylElement:
    """Finite combination of normal-ordered monomials with GScalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = GScalar.coerce(c)
            if c:
                clean[m if isinstance(m, Monomial) else Monomial(*m)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("WeylElement is immutable")

    @classmethod
    def _raw(cls, terms: dict) -> "WeylElement":
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        return obj

    # --- constructors -----------------------------------------------------
    @classmethod
    def zero(cls) -> "WeylElement":
        return cls._raw({})

    @classmethod
    def scalar(cls, c) -> "WeylElement":
        return cls({Monomial(): c})

    @classmethod
    def x(cls, i, power: int = 1) -> "WeylElement":
        return cls({Monomial.make({i: power}): ONE})

    @classmethod
    def d(cls, i, power: int = 1) -> "WeylElement":
        return cls({Monomial.make(None, {i: power}): ONE})

    @classmethod
    def xd(cls, i, j, c=ONE) -> "WeylElement":
        return cls({Monomial.make({i: 1}, {j: 1}): c})

    # --- vector space -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, WeylElement):
            other = WeylElement.scalar(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return WeylElement._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, WeylElement):
            other = WeylElement.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "WeylElement":
        c = GScalar.coerce(c)
        if not c:
            return WeylElement.zero()
        return WeylElement._raw({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other):
        return multiply(self, other)

    def __eq__(self, other):
        if isinstance(other, WeylElement):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coeff(self, m: Monomial) -> GScalar:
        return self.terms.get(m, ZERO)

    def sorted_terms(self) -> list[tuple[Monomial, GScalar]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def max_degree(self) -> int:
        return max((m.degree() for m in self.terms), default=0)

    def indices(self) -> set[int]:
        out: set[int] = set()
        for m in self.terms:
            out |= m.indices()
        return out

    def restrict(self, win: IndexWindow) -> "WeylElement":
        """Keep only the terms whose every variable index lies in ``win``."""
        return WeylElement._raw(
            {m: c for m, c in self.terms.items() if all(win.contains_doubled(i) for i in m.indices())}
        )

    def map_coeffs(self, fn) -> "WeylElement":
        return WeylElement({m: fn(c) for m, c in self.terms.items()})

    # --- text -------------------------------------------------------------
    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"WeylElement({to_text(self)!r})"


def multiply(a: WeylElement, b: WeylElement, degree_cap: int = DEFAULT_DEGREE_CAP) -> WeylElement:
    """Normal-ordered product a*b.  Raises DegreeCapExceeded past ``degree_cap``."""
    out: dict[Monomial, GScalar] = {}
    get = out.get
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            c0 = ca * cb
            for k, xs, ds in _reorder(ma.d, mb.x):
                m = Monomial(_merge(ma.x, xs), _merge(ds, mb.d))
                c = c0 if k == 1 else c0 * k
                v = get(m)
                out[m] = c if v is None else v + c
    for m in [m for m, c in out.items() if not c]:
        del out[m]
    if degree_cap is not None:
        for m in out:
            if m.degree() > degree_cap:
                raise DegreeCapExceeded(f"term {m} has degree {m.degree()} > cap {degree_cap}")
    return WeylElement._raw(out)


def commutator(a: WeylElement, b: WeylElement, degree_cap: int = DEFAULT_DEGREE_CAP) -> WeylElement:
    return multiply(a, b, degree_cap) - multiply(b, a, degree_cap)


def product(factors: Iterable[WeylElement], degree_cap: int = DEFAULT_DEGREE_CAP) -> WeylElement:
    out = WeylElement.scalar(ONE)
    for f in factors:
        out = multiply(out, f, degree_cap)
    return out


# --- polynomials and the action on them -------------------------------------


def polynomial(terms: Mapping) -> WeylElement:
    """Polynomial in the x variables, e.g. ``polynomial({(): 1, ((2, 3),): 5})`` is 1 + 5 x[1]^3.

    Keys are x-power tuples in doubled-index form, or dicts index -> power.
    """
    out = {}
    for k, c in terms.items():
        xs = _powers(k) if isinstance(k, Mapping) else tuple(sorted(k))
        out[Monomial(xs, ())] = c
    return WeylElement(out)


def is_polynomial(p: WeylElement) -> bool:
    return all(not m.d for m in p.terms)


def apply_to_polynomial(w: WeylElement, p: WeylElement) -> WeylElement:
    """Act with the differential operator ``w`` on the polynomial ``p``.

    Computed by direct differentiation, independently of ``multiply``.
    """
    if not is_polynomial(p):
        raise ValueError("second argument must be a polynomial (no d factors)")
    out: dict[Monomial, GScalar] = {}
    for mw, cw in w.terms.items():
        for mp, cp in p.terms.items():
            xp = dict(mp.x)
            c = 1
            ok = True
            for i, r in mw.d:
                t = xp.get(i, 0)
                if t < r:
                    ok = False
                    break
                c *= _falling(t, r)
                if t - r:
                    xp[i] = t - r
                else:
                    del xp[i]
            if not ok:
                continue
            m = Monomial(_merge(mw.x, tuple(sorted(xp.items()))), ())
            v = cw * cp * c
            out[m] = out.get(m, ZERO) + v
    return WeylElement(out)


@dataclass(frozen=True)
class LinearityCertificate:
    """Membership of an element in the span of linear vector fields.

    ``is_linear`` uses the strict reading span{x_i d_j, x_i, d_j, 1};
    ``literal_degree_ok`` is the bare per-term condition 1 <= t + r <= 2, which
    also admits x_i^2 and d_j^2 (constants are accepted by both readings).
    """

    is_linear: bool
    offending_terms: list = field(default_factory=list)
    literal_degree_ok: bool = True
    literal_offending_terms: list = field(default_factory=list)


def check_linear(w: WeylElement) -> LinearityCertificate:
    strict_bad, literal_bad = [], []
    for m in sorted(w.terms, key=Monomial.sort_key):
        xd, dd = m.xdegree(), m.ddegree()
        if not (xd <= 1 and dd <= 1):
            strict_bad.append(m)
        if m.degree() > 2:
            literal_bad.append(m)
    return LinearityCertificate(not strict_bad, strict_bad, not literal_bad, literal_bad)


# --- canonical text ------------------------------------------------------------


def to_text(w: WeylElement) -> str:
    """Canonical form, e.g. ``(3/2) x[1] d[2] + (-1+2i) x[4] d[4]``."""
    if not w.terms:
        return "0"
    parts = []
    for m, c in w.sorted_terms():
        mono = str(m)
        if c == ONE:
            parts.append(mono)
        elif not m.x and not m.d:
            parts.append(f"({c})")
        else:
            parts.append(f"({c}) {mono}")
    return " + ".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<coef>\([^()]*\))|(?P<sym>[xd])\[(?P<idx>[^\]]+)\](?:\^(?P<pow>\d+))?|(?P<plus>\+)|(?P<one>1)(?![\d/]))"
)


def from_text(text: str) -> WeylElement:
    """Parse ``to_text`` output; also accepts unnormalized input such as ``d[1] x[1]``.

    Factors within a term are multiplied in the order written, so the result is
    always normal ordered.
    """
    s = text.strip()
    if s == "0":
        return WeylElement.zero()
    total = WeylElement.zero()
    term = None
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Weyl element at {s[pos:]!r}")
        pos = m.end()
        if m.group("plus"):
            if term is None:
                raise ValueError("dangling '+'")
            total = total + term
            term = None
            continue
        if m.group("coef"):
            factor = WeylElement.scalar(GScalar.parse(m.group("coef")[1:-1]))
        elif m.group("one"):
            factor = WeylElement.scalar(ONE)
        else:
            i = parse_index(m.group("idx"))
            p = int(m.group("pow") or 1)
            factor = WeylElement.x(HalfIndex(i), p) if m.group("sym") == "x" else WeylElement.d(HalfIndex(i), p)
        term = factor if term is None else multiply(term, factor, degree_cap=None)
    if term is None:
        raise ValueError("trailing '+'")
    return total + term
