"""Truncated pairing data <A e_a, f_b> for the concrete operator families.

Convention: ``M[a][b] = <A e_a, f_b>`` is the coefficient of ``e_b`` in ``A e_a``.
Operator composition therefore multiplies pairing tables in reverse order,
``pairing(A o B) = pairing(B) . pairing(A)``; :meth:`PairingMatrix.compose`
takes care of that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence, Union

import numpy as np
from scipy.integrate import simpson

from .kernel import (
    ONE,
    ZERO,
    GScalar,
    HalfIndex,
    IndexWindow,
    PiScalar,
    rational,
)

Bandwidth = Union[int, str]
FULL = "full"

DEFAULT_QUADRATURE_NODES = 4096


def _band_add(a: Bandwidth, b: Bandwidth) -> Bandwidth:
    if a == FULL or b == FULL:
        return FULL
    return a + b


class VectorCoeffs:
    """Finitely many coefficients <h, f_a> indexed inside a window."""

    __slots__ = ("window", "entries")

    def __init__(self, win: IndexWindow, entries: Mapping | None = None):
        clean = {}
        for k, v in (entries or {}).items():
            d = HalfIndex.of(k).doubled
            if not win.contains_doubled(d):
                raise ValueError(f"index {HalfIndex(d)} outside window {win}")
            v = GScalar.coerce(v)
            if v:
                clean[d] = clean.get(d, ZERO) + v
        self.window = win
        self.entries = {k: v for k, v in clean.items() if v}

    @classmethod
    def unit(cls, win: IndexWindow, i) -> "VectorCoeffs":
        return cls(win, {i: ONE})

    @classmethod
    def from_list(cls, win: IndexWindow, values: Sequence) -> "VectorCoeffs":
        return cls(win, {HalfIndex(d): v for d, v in zip(win.doubled(), values)})

    def __getitem__(self, i) -> GScalar:
        return self.entries.get(HalfIndex.of(i).doubled, ZERO)

    def get_doubled(self, d: int) -> GScalar:
        return self.entries.get(d, ZERO)

    def items(self):
        return ((HalfIndex(d), v) for d, v in sorted(self.entries.items()))

    def __add__(self, other: "VectorCoeffs") -> "VectorCoeffs":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, ZERO) + v
        return VectorCoeffs(self.window, {HalfIndex(k): v for k, v in out.items()})

    def scale(self, c) -> "VectorCoeffs":
        c = GScalar.coerce(c)
        return VectorCoeffs(self.window, {HalfIndex(k): v * c for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return isinstance(other, VectorCoeffs) and self.entries == other.entries

    def to_list(self) -> list[GScalar]:
        return [self.entries.get(d, ZERO) for d in self.window.doubled()]

    def to_array(self) -> np.ndarray:
        vals = [complex(v) for v in self.to_list()]
        arr = np.array(vals, dtype=complex)
        return arr.real if not np.any(arr.imag) else arr

    def __repr__(self):
        body = ", ".join(f"{HalfIndex(k)}: {v}" for k, v in sorted(self.entries.items()))
        return f"VectorCoeffs({self.window}, {{{body}}})"


class PairingMatrix:
    """Sparse table ``<A e_a, f_b>`` over a finite window with a declared bandwidth.

    The bandwidth is checked when the table is built: an entry with
    ``|a - b| > bandwidth`` raises ValueError.  Entries are GScalar, or PiScalar
    for the pi-graded providers.
    """

    __slots__ = ("window", "entries", "bandwidth")

    def __init__(self, win: IndexWindow, entries: Mapping | None = None, bandwidth: Bandwidth = FULL):
        if bandwidth != FULL and (not isinstance(bandwidth, int) or bandwidth < 0):
            raise ValueError(f"bad bandwidth {bandwidth!r}")
        clean = {}
        for (a, b), v in (entries or {}).items():
            da, db = HalfIndex.of(a).doubled, HalfIndex.of(b).doubled
            if not (win.contains_doubled(da) and win.contains_doubled(db)):
                raise ValueError(f"entry ({HalfIndex(da)}, {HalfIndex(db)}) outside window {win}")
            if not isinstance(v, PiScalar):
                v = GScalar.coerce(v)
            if not v:
                continue
            if bandwidth != FULL and abs(da - db) > 2 * bandwidth:
                raise ValueError(
                    f"entry ({HalfIndex(da)}, {HalfIndex(db)}) violates declared bandwidth {bandwidth}"
                )
            clean[(da, db)] = v
        self.window = win
        self.entries = clean
        self.bandwidth = bandwidth

    @classmethod
    def _raw(cls, win, entries, bandwidth):
        obj = object.__new__(cls)
        obj.window, obj.entries, obj.bandwidth = win, entries, bandwidth
        return obj

    # --- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, win: IndexWindow) -> "PairingMatrix":
        return cls._raw(win, {(d, d): ONE for d in win.doubled()}, 0)

    @classmethod
    def unit(cls, win: IndexWindow, a, b) -> "PairingMatrix":
        """E_ab: the single entry <A e_a, f_b> = 1."""
        da, db = HalfIndex.of(a).doubled, HalfIndex.of(b).doubled
        return cls(win, {(HalfIndex(da), HalfIndex(db)): ONE}, abs(da - db) // 2)

    @classmethod
    def zero(cls, win: IndexWindow) -> "PairingMatrix":
        return cls._raw(win, {}, 0)

    @classmethod
    def from_rows(cls, win: IndexWindow, rows: Sequence[Sequence], bandwidth: Bandwidth = FULL) -> "PairingMatrix":
        idx = list(win)
        if len(rows) != len(idx) or any(len(r) != len(idx) for r in rows):
            raise ValueError("row table does not match the window size")
        return cls(win, {(idx[i], idx[j]): v for i, r in enumerate(rows) for j, v in enumerate(r)}, bandwidth)

    # --- access -----------------------------------------------------------
    def __getitem__(self, key):
        a, b = key
        return self.entries.get((HalfIndex.of(a).doubled, HalfIndex.of(b).doubled), ZERO)

    def items(self):
        for (a, b), v in sorted(self.entries.items()):
            yield HalfIndex(a), HalfIndex(b), v

    def rows(self) -> list[list]:
        ds = list(self.window.doubled())
        return [[self.entries.get((a, b), ZERO) for b in ds] for a in ds]

    def to_dense(self) -> np.ndarray:
        """Float (or complex) array in window order; pi-graded entries are evaluated."""
        ds = list(self.window.doubled())
        pos = {d: i for i, d in enumerate(ds)}
        out = np.zeros((len(ds), len(ds)), dtype=complex)
        for (a, b), v in self.entries.items():
            out[pos[a], pos[b]] = complex(v) if isinstance(v, GScalar) else float(v)
        return out.real if not np.any(out.imag) else out

    def actual_bandwidth(self) -> int:
        return max((abs(a - b) // 2 for a, b in self.entries), default=0)

    def is_pi_graded(self) -> bool:
        return any(isinstance(v, PiScalar) for v in self.entries.values())

    # --- algebra ----------------------------------------------------------
    def _check_same(self, other: "PairingMatrix"):
        if self.window != other.window:
            raise ValueError(f"windows differ: {self.window} vs {other.window}")

    def __add__(self, other: "PairingMatrix") -> "PairingMatrix":
        self._check_same(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        bw = FULL if FULL in (self.bandwidth, other.bandwidth) else max(self.bandwidth, other.bandwidth)
        return PairingMatrix._raw(self.window, {k: v for k, v in out.items() if v}, bw)

    def scale(self, c) -> "PairingMatrix":
        if not isinstance(c, PiScalar):
            c = GScalar.coerce(c)
        return PairingMatrix._raw(
            self.window, {k: v * c for k, v in self.entries.items() if v * c}, self.bandwidth
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def compose(self, other: "PairingMatrix") -> "PairingMatrix":
        """Pairing table of the operator ``self o other`` (apply ``other`` first).

        Sums run over the window only; truncation effects are the caller's
        business (see jsmap.safe_window).
        """
        self._check_same(other)
        by_row: dict[int, list] = {}
        for (j, b), v in self.entries.items():
            by_row.setdefault(j, []).append((b, v))
        out: dict = {}
        for (a, j), u in other.entries.items():
            for b, v in by_row.get(j, ()):
                key = (a, b)
                out[key] = out[key] + u * v if key in out else u * v
        return PairingMatrix._raw(
            self.window, {k: v for k, v in out.items() if v}, _band_add(self.bandwidth, other.bandwidth)
        )

    __matmul__ = compose

    def transpose(self) -> "PairingMatrix":
        return PairingMatrix._raw(self.window, {(b, a): v for (a, b), v in self.entries.items()}, self.bandwidth)

    def apply(self, h: VectorCoeffs) -> VectorCoeffs:
        """Coefficients of A h:  (A h)_b = sum_a h_a <A e_a, f_b>."""
        out: dict[int, GScalar] = {}
        for (a, b), v in self.entries.items():
            ha = h.entries.get(a)
            if ha is not None:
                out[b] = out.get(b, ZERO) + ha * v
        return VectorCoeffs(self.window, {HalfIndex(k): v for k, v in out.items()})

    def adjoint_apply(self, r: VectorCoeffs) -> VectorCoeffs:
        """Coefficients <e_a, A* r> = sum_b <A e_a, f_b> <e_b, r>."""
        out: dict[int, GScalar] = {}
        for (a, b), v in self.entries.items():
            rb = r.entries.get(b)
            if rb is not None:
                out[a] = out.get(a, ZERO) + v * rb
        return VectorCoeffs(self.window, {HalfIndex(k): v for k, v in out.items()})

    def __eq__(self, other):
        return (
            isinstance(other, PairingMatrix)
            and self.window == other.window
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"PairingMatrix({self.window}, {len(self.entries)} entries, bandwidth={self.bandwidth})"


def commutator(a: PairingMatrix, b: PairingMatrix) -> PairingMatrix:
    """Operator commutator [A, B] = A o B - B o A."""
    return a.compose(b) - b.compose(a)


# --- basis specs ---------------------------------------------------------------

BASIS_KINDS = (
    "sine_0_2pi",
    "laurent_monomial",
    "fourier_circle",
    "standard_finite",
    "schrodinger_virasoro",
    "custom_matrix",
)


@dataclass(frozen=True)
class BasisSpec:
    kind: str
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in BASIS_KINDS:
            raise ValueError(f"unknown basis kind {self.kind!r}; expected one of {BASIS_KINDS}")
        if self.kind == "schrodinger_virasoro":
            rational(self.params.get("rho", 0))
            if Fraction(self.params.get("s", 0)) not in (0, Fraction(1, 2)):
                raise ValueError("s must be 0 or 1/2")


# --- providers -----------------------------------------------------------------


def _delta(a, b) -> int:
    return 1 if a == b else 0


def sine_derivative_triple(n: int, m: int, k: int) -> Fraction:
    """(e_n d/dx e_m, e_k)_H for e_j = sin(j x) and (f, g)_H = (1/pi) int_0^{2pi} f g."""
    if min(n, m, k) < 1:
        raise ValueError("indices must be positive")
    return Fraction(m, 2) * (_delta(n, k - m) + _delta(n, k + m) - _delta(n, m - k))


def sine_operator_matrix(lam, c: VectorCoeffs, win: IndexWindow) -> PairingMatrix:
    """(A e_m, e_k)_H for A = lam d^2/dx^2 + (1 - lam) v d/dx, v = sum_j c_j e_j.

    Closed form: -lam m^2 delta_mk + (m (1 - lam) / 2)(c_{m+k} + c_{k-m} - c_{m-k}),
    with c_j = 0 for j <= 0.
    """
    lam = rational(lam)
    ms = win.ints()
    if ms[0] < 1:
        raise ValueError("sine windows live on positive integers")

    def cc(j: int) -> GScalar:
        return c[j] if j >= 1 and j in c.window else ZERO

    support = [int(i.value) for i, v in c.items() if v and i.value >= 1]
    bandwidth = max(support) if support and lam != 1 else 0
    entries = {}
    for m in ms:
        for k in ms:
            v = GScalar(-lam * m * m) if m == k else ZERO
            if lam != 1:
                v = v + (cc(m + k) + cc(k - m) - cc(m - k)) * (Fraction(m, 2) * (1 - lam))
            if v:
                entries[(m, k)] = v
    return PairingMatrix(win, entries, bandwidth)


def x2dx_matrix(win: IndexWindow) -> PairingMatrix:
    """(x^2 d/dx e_n, e_m)_H: 4 pi n m / (n^2 - m^2) off the diagonal, -pi on it."""
    ns = win.ints()
    if ns[0] < 1:
        raise ValueError("sine windows live on positive integers")
    entries = {}
    for n in ns:
        for m in ns:
            entries[(n, m)] = PiScalar(-1) if n == m else PiScalar(Fraction(4 * n * m, n * n - m * m))
    return PairingMatrix(win, entries, FULL)


def monomial_field_matrix(n: int, win: IndexWindow) -> PairingMatrix:
    """x^n d/dx on the formal monomial basis: x^k -> k x^(k+n-1)."""
    entries = {}
    for k in win.ints():
        j = k + n - 1
        if j in win and k:
            entries[(k, j)] = GScalar(k)
    return PairingMatrix(win, entries, abs(n - 1))


def circle_field_matrix(n: int, win: IndexWindow) -> PairingMatrix:
    """e^{i n theta} d/dtheta on Fourier modes: e^{ik theta} -> i k e^{i(k+n) theta}."""
    entries = {}
    for k in win.ints():
        if k + n in win and k:
            entries[(k, k + n)] = GScalar(0, k)
    return PairingMatrix(win, entries, abs(n))


def sv_action_matrix(m: int, rho, s, win: IndexWindow) -> PairingMatrix:
    """A_m e_p = (p - m rho) e_{p+m} on the half-integer window p in Z + s."""
    rho = rational(rho)
    if win.shift != Fraction(s):
        raise ValueError(f"window {win} does not have shift {s}")
    entries = {}
    for p in win:
        q = p + m
        if q in win:
            v = p.value - m * rho
            if v:
                entries[(p, q)] = GScalar(v)
    return PairingMatrix(win, entries, abs(m))


def map_induced_matrix(h: Sequence[int] | Mapping[int, int]) -> PairingMatrix:
    """Composition operator phi -> phi o h on R^{0..N-1}: <A e_k, f_l> = [h(l) = k]."""
    hm = dict(enumerate(h)) if not isinstance(h, Mapping) else dict(h)
    n = len(hm)
    if sorted(hm) != list(range(n)) or any(not 0 <= v < n for v in hm.values()):
        raise ValueError("h must be a total map on {0..N-1}")
    win = IndexWindow(0, n - 1)
    return PairingMatrix(win, {(hm[l], l): ONE for l in range(n)}, FULL)


def basis_matrix(spec: BasisSpec, win: IndexWindow, **kw) -> PairingMatrix:
    """Dispatch a BasisSpec (as read from a config file) to its provider."""
    p = {**spec.params, **kw}
    if spec.kind == "sine_0_2pi":
        if p.get("operator", "x2dx") == "x2dx":
            return x2dx_matrix(win)
        c = VectorCoeffs(win, {int(k): rational(v) for k, v in p.get("c", {}).items()})
        return sine_operator_matrix(p.get("lambda", 0), c, win)
    if spec.kind == "laurent_monomial":
        return monomial_field_matrix(int(p.get("n", 1)), win)
    if spec.kind == "fourier_circle":
        return circle_field_matrix(int(p.get("n", 0)), win)
    if spec.kind == "schrodinger_virasoro":
        return sv_action_matrix(int(p.get("m", 0)), p.get("rho", 0), Fraction(p.get("s", 0)), win)
    if spec.kind == "standard_finite":
        return map_induced_matrix([int(v) for v in p["h"]])
    rows = [[GScalar.coerce(v) for v in r] for r in p["rows"]]
    return PairingMatrix.from_rows(win, rows, p.get("bandwidth", FULL))


# --- quadrature oracle -----------------------------------------------------------


def quadrature_oracle(
    f: Callable[[np.ndarray], np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
    nodes: int = DEFAULT_QUADRATURE_NODES,
) -> float:
    """(1/pi) int_0^{2pi} f g dx by composite Simpson on ``nodes`` uniform samples."""
    if nodes < 2:
        raise ValueError("need at least two nodes")
    x = np.linspace(0.0, 2 * math.pi, nodes)
    return float(simpson(f(x) * g(x), x=x)) / math.pi


def sine_triple_quadrature(n: int, m: int, k: int, nodes: int = DEFAULT_QUADRATURE_NODES) -> float:
    return quadrature_oracle(lambda x: np.sin(n * x) * m * np.cos(m * x), lambda x: np.sin(k * x), nodes)


def x2dx_quadrature(n: int, m: int, nodes: int = DEFAULT_QUADRATURE_NODES) -> float:
    return quadrature_oracle(lambda x: x * x * n * np.cos(n * x), lambda x: np.sin(m * x), nodes)
