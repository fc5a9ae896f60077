"""Exact scalars, half-integer indices and index windows.

Everything here is immutable.  ``Rational`` is the stdlib ``Fraction``;
``GScalar`` is a Gaussian rational ``re + im*i`` built on top of it.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator, Sequence, Union

Rational = Fraction

RationalLike = Union[int, Fraction, str]


def rational(value: RationalLike) -> Fraction:
    """Parse an exact rational; strings like ``"1/2"`` or ``"-3"`` are accepted.

    Floats are refused so a binary approximation never leaks into exact mode.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string such as '1/2'")
    if isinstance(value, GScalar):
        if value.im:
            raise ValueError(f"{value} is not real")
        return value.re
    return Fraction(value)


def rational_arith(a: Fraction, b: Fraction, op: str) -> Fraction:
    """Apply one of ``+ - * /`` exactly.  Division by zero raises ZeroDivisionError."""
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        if b == 0:
            raise ZeroDivisionError(f"{a} / 0")
        return a / b
    raise ValueError(f"unknown operator {op!r}")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_ZERO = Fraction(0)
_ONE = Fraction(1)


class GScalar:
    """Gaussian rational a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GScalar is immutable")

    @classmethod
    def coerce(cls, value) -> "GScalar":
        if type(value) is cls:
            return value
        if isinstance(value, GScalar):
            return cls(value.re, value.im)
        if isinstance(value, complex):
            raise TypeError("complex floats are not exact")
        if isinstance(value, str):
            return cls.parse(value)
        return cls(rational(value), _ZERO)

    # --- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = _as_g(other)
        if o is NotImplemented:
            return o
        return GScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_g(other)
        if o is NotImplemented:
            return o
        return GScalar(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _as_g(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = _as_g(other)
        if o is NotImplemented:
            return o
        if not self.im and not o.im:
            return GScalar(self.re * o.re, _ZERO)
        return GScalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_g(other)
        if o is NotImplemented:
            return o
        n2 = o.norm2()
        if n2 == 0:
            raise ZeroDivisionError(f"{self} / 0")
        num = self * o.conj()
        return GScalar(num.re / n2, num.im / n2)

    def __rtruediv__(self, other):
        o = _as_g(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GScalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (GScalar(1) / self) ** (-k)
        out, base = GScalar(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "GScalar":
        return GScalar(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = _as_g(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __float__(self):
        if self.im:
            raise ValueError(f"{self} is not real")
        return float(self.re)

    def is_real(self) -> bool:
        return not self.im

    # --- text -------------------------------------------------------------
    def __str__(self):
        if not self.im:
            return format_rational(self.re)
        im = format_rational(self.im)
        if not self.re:
            return f"{im}i"
        sign = "" if self.im < 0 else "+"
        return f"{format_rational(self.re)}{sign}{im}i"

    def __repr__(self):
        return f"GScalar({self})"

    @classmethod
    def parse(cls, text: str) -> "GScalar":
        """Inverse of ``str``: ``"3/2"``, ``"-2i"``, ``"-1+2i"``, ``"1/2-3/4i"``, ``"i"``."""
        s = text.strip().replace(" ", "")
        m = _GS_RE.fullmatch(s)
        if not m:
            raise ValueError(f"cannot parse scalar {text!r}")
        re_part, im_part = m.group("re"), m.group("im")
        if m.group("ionly") is not None:
            re_part, im_part = None, m.group("ionly")
        re_v = Fraction(re_part) if re_part else _ZERO
        if im_part is None:
            return cls(re_v, _ZERO)
        if im_part in ("", "+"):
            im_v = _ONE
        elif im_part == "-":
            im_v = -_ONE
        else:
            im_v = Fraction(im_part)
        return cls(re_v, im_v)


_NUM = r"[+-]?\d+(?:/\d+)?"
_GS_RE = re.compile(
    rf"(?P<ionly>[+-]?(?:\d+(?:/\d+)?)?)i|(?P<re>{_NUM})(?:(?P<im>[+-](?:\d+(?:/\d+)?)?)i)?"
)


def _as_g(value):
    if type(value) is GScalar:
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return GScalar(value, _ZERO)
    return NotImplemented


ZERO = GScalar(0)
ONE = GScalar(1)
I = GScalar(0, 1)


class PiScalar:
    """Exact value ``coeff * pi**power``.

    Adding values with different powers of pi is refused: the providers that use
    this type only ever produce homogeneous tables.
    """

    __slots__ = ("coeff", "power")

    def __init__(self, coeff: RationalLike, power: int = 1):
        object.__setattr__(self, "coeff", Fraction(coeff))
        object.__setattr__(self, "power", 0 if Fraction(coeff) == 0 else int(power))

    def __setattr__(self, name, value):
        raise AttributeError("PiScalar is immutable")

    def _same(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return PiScalar(0, 0)
        if not isinstance(other, PiScalar):
            raise TypeError(f"cannot combine PiScalar with {type(other).__name__}")
        if self.coeff and other.coeff and self.power != other.power:
            raise ValueError("mixing different powers of pi additively")
        return other

    def __add__(self, other):
        o = self._same(other)
        power = self.power if self.coeff else o.power
        return PiScalar(self.coeff + o.coeff, power)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._same(other))

    def __neg__(self):
        return PiScalar(-self.coeff, self.power)

    def __mul__(self, other):
        if isinstance(other, PiScalar):
            return PiScalar(self.coeff * other.coeff, self.power + other.power)
        return PiScalar(self.coeff * Fraction(other), self.power)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.coeff)

    def __eq__(self, other):
        if isinstance(other, PiScalar):
            return self.coeff == other.coeff and (self.power == other.power or not self.coeff)
        if isinstance(other, (int, Fraction)):
            return self.power == 0 and self.coeff == other or (not self.coeff and other == 0)
        return NotImplemented

    def __hash__(self):
        return hash((self.coeff, self.power if self.coeff else 0))

    def __float__(self):
        import math

        return float(self.coeff) * math.pi**self.power

    def __str__(self):
        if not self.coeff:
            return "0"
        if self.power == 0:
            return format_rational(self.coeff)
        p = "pi" if self.power == 1 else f"pi^{self.power}"
        if self.coeff == 1:
            return p
        if self.coeff == -1:
            return f"-{p}"
        return f"{format_rational(self.coeff)}*{p}"

    __repr__ = __str__


# --- indices ---------------------------------------------------------------


class HalfIndex:
    """An element of Z or Z + 1/2, stored doubled as an integer."""

    __slots__ = ("doubled",)

    def __init__(self, doubled: int):
        object.__setattr__(self, "doubled", int(doubled))

    def __setattr__(self, name, value):
        raise AttributeError("HalfIndex is immutable")

    @classmethod
    def of(cls, value) -> "HalfIndex":
        """Encode an integer, a half-integer Fraction, or a string like ``"3/2"``."""
        if isinstance(value, HalfIndex):
            return value
        q = Fraction(value)
        d = 2 * q
        if d.denominator != 1:
            raise ValueError(f"{value} is not in Z/2")
        return cls(d.numerator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.doubled, 2)

    @property
    def shift(self) -> Fraction:
        return Fraction(self.doubled % 2, 2)

    def __add__(self, other):
        return HalfIndex(self.doubled + HalfIndex.of(other).doubled)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfIndex(self.doubled - HalfIndex.of(other).doubled)

    def __neg__(self):
        return HalfIndex(-self.doubled)

    def __eq__(self, other):
        if isinstance(other, HalfIndex):
            return self.doubled == other.doubled
        if isinstance(other, (int, Fraction)):
            return Fraction(self.doubled, 2) == other
        return NotImplemented

    def __lt__(self, other):
        return self.doubled < HalfIndex.of(other).doubled

    def __le__(self, other):
        return self.doubled <= HalfIndex.of(other).doubled

    def __gt__(self, other):
        return self.doubled > HalfIndex.of(other).doubled

    def __ge__(self, other):
        return self.doubled >= HalfIndex.of(other).doubled

    def __hash__(self):
        return hash(Fraction(self.doubled, 2))

    def __str__(self):
        return format_rational(self.value)

    def __repr__(self):
        return f"HalfIndex({self})"


def index_text(doubled: int) -> str:
    return str(doubled // 2) if doubled % 2 == 0 else f"{doubled}/2"


def parse_index(text: str) -> int:
    """Doubled integer for ``"3"``, ``"-1/2"`` and the like."""
    return HalfIndex.of(Fraction(text.strip())).doubled


class IndexWindow:
    """Contiguous run of indices lo, lo+1, ..., hi sharing one shift class."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo_h, hi_h = HalfIndex.of(lo), HalfIndex.of(hi)
        if (lo_h.doubled - hi_h.doubled) % 2:
            raise ValueError("window ends lie in different shift classes")
        if lo_h.doubled > hi_h.doubled:
            raise ValueError(f"empty window [{lo_h}, {hi_h}]")
        object.__setattr__(self, "lo", lo_h)
        object.__setattr__(self, "hi", hi_h)

    def __setattr__(self, name, value):
        raise AttributeError("IndexWindow is immutable")

    @classmethod
    def range(cls, lo, hi) -> "IndexWindow":
        return cls(lo, hi)

    @property
    def shift(self) -> Fraction:
        return self.lo.shift

    def __len__(self):
        return (self.hi.doubled - self.lo.doubled) // 2 + 1

    def doubled(self) -> range:
        return range(self.lo.doubled, self.hi.doubled + 1, 2)

    def __iter__(self) -> Iterator[HalfIndex]:
        return (HalfIndex(d) for d in self.doubled())

    def values(self) -> list[Fraction]:
        return [Fraction(d, 2) for d in self.doubled()]

    def ints(self) -> list[int]:
        if self.lo.doubled % 2:
            raise ValueError("window is not integral")
        return [d // 2 for d in self.doubled()]

    def __contains__(self, item) -> bool:
        d = HalfIndex.of(item).doubled
        return self.lo.doubled <= d <= self.hi.doubled and (d - self.lo.doubled) % 2 == 0

    def contains_doubled(self, d: int) -> bool:
        return self.lo.doubled <= d <= self.hi.doubled and (d - self.lo.doubled) % 2 == 0

    def shrink(self, margin: int) -> "IndexWindow":
        """Drop ``margin`` indices from each end; ValueError if nothing remains."""
        lo, hi = self.lo.doubled + 2 * margin, self.hi.doubled - 2 * margin
        if lo > hi:
            raise ValueError(f"window {self} has no indices left after margin {margin}")
        return IndexWindow(HalfIndex(lo), HalfIndex(hi))

    def __eq__(self, other):
        return isinstance(other, IndexWindow) and (self.lo, self.hi) == (other.lo, other.hi)

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __str__(self):
        return f"{{{self.lo}..{self.hi}}}"

    __repr__ = __str__


def window(lo, hi) -> IndexWindow:
    return IndexWindow(lo, hi)


# --- exact linear algebra -----------------------------------------------------


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over Fraction/GScalar entries; returns (rows, pivot columns)."""
    m = [[v if isinstance(v, GScalar) else rational(v) for v in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], GScalar) else ONE / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(rows: Sequence[Sequence]) -> list[list]:
    """Basis of {v : rows @ v = 0}, exact."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    zero = red[0][0] * 0 if red and red[0] else Fraction(0)
    basis = []
    for fcol in free:
        v = [zero] * ncols
        v[fcol] = zero + 1
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fcol]
        basis.append(v)
    return basis


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])
