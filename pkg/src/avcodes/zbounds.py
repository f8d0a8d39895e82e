"""Bounds on the number of grid zeros of multiplicity at least ``r``.

Given the lex-leading monomial ``X^i`` of a polynomial and a grid
``S_1 x ... x S_m`` with sizes ``s``, every function here returns an upper bound
on how many grid points can be zeros of multiplicity ``>= r``:

* :func:`sz_mult_bound` -- Schwartz-Zippel with multiplicity,
* :func:`footprint_bound` -- the footprint bound (``r = 1`` only),
* :func:`d_recursive` -- the recursive ``D`` function,
* :func:`closed_form_c` -- closed two-variable estimates of ``D``.

Scalar entry points return exact :class:`fractions.Fraction` or ``int``
values.  The radius search needs the bound for every exponent of the box
``[0, r s_1) x ... x [0, r s_m)`` at once; :func:`bound_array` provides that as an
integer array scaled by a common denominator so that comparisons stay exact.
"""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ArityMismatch, MethodArityMismatch, NoCaseApplies


@dataclass(frozen=True)
class GridShape:
    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError(f"grid sizes must be positive, got {self.sizes}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def of(cls, shape) -> "GridShape":
        return shape if isinstance(shape, GridShape) else cls(tuple(shape))

    @property
    def m(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return math.prod(self.sizes)

    def __iter__(self):
        return iter(self.sizes)

    def __len__(self):
        return len(self.sizes)

    def __getitem__(self, j):
        return self.sizes[j]


class BoundMethod(enum.Enum):
    RECURSIVE_D = "recursive"
    CLOSED_FORM_C = "closed"
    SCHWARTZ_ZIPPEL = "sz"
    FOOTPRINT = "footprint"

    @classmethod
    def parse(cls, name) -> "BoundMethod":
        if isinstance(name, cls):
            return name
        aliases = {"d": "recursive", "c": "closed", "s": "sz", "schwartz-zippel": "sz"}
        key = str(name).lower()
        return cls(aliases.get(key, key))


def _check_arity(i, shape: GridShape):
    if len(i) != shape.m:
        raise ArityMismatch(f"exponent {tuple(i)} for a {shape.m}-dimensional grid")


def floor_sum(i: Sequence[int], shape) -> int:
    return sum(a // s for a, s in zip(i, shape))


def in_delta(i: Sequence[int], r: int, shape) -> bool:
    """Whether ``X^i`` lies in the region where fewer than ``n`` zeros are possible."""
    return floor_sum(i, shape) < r


def sz_mult_bound(i: Sequence[int], shape, r: int) -> Fraction:
    shape = GridShape.of(shape)
    _check_arity(i, shape)
    n = shape.n
    return Fraction(sum(a * (n // s) for a, s in zip(i, shape)), r)


def footprint_bound(i: Sequence[int], shape) -> int:
    shape = GridShape.of(shape)
    _check_arity(i, shape)
    if any(a >= s for a, s in zip(i, shape)):
        return shape.n
    return shape.n - math.prod(s - a for a, s in zip(i, shape))


# -- the recursive D function -------------------------------------------------


def _knapsack_gain(gains: np.ndarray, count: int, width: int) -> np.ndarray:
    """Best total gain of at most ``count`` items, item ``k`` weighing ``k``.

    ``gains`` has shape ``batch + (r,)``; ``gains[..., k-1]`` is the gain of
    one item of weight ``k`` (unbounded supply).  Returns an array of shape
    ``batch + (width,)`` whose entry ``w`` is the optimum at weight capacity
    ``w``.
    """
    batch = gains.shape[:-1]
    r = gains.shape[-1]
    dp = np.zeros(batch + (width,), dtype=np.int64)
    for _ in range(count):
        nxt = dp.copy()
        for k in range(1, min(r, width - 1) + 1):
            cand = dp[..., : width - k] + gains[..., k - 1, None]
            np.maximum(nxt[..., k:], cand, out=nxt[..., k:])
        if np.array_equal(nxt, dp):
            break
        dp = nxt
    return dp


def _extend(prev: dict[int, np.ndarray], prod: int, s: int, width: int, r: int) -> dict[int, np.ndarray]:
    """Add one coordinate: from D on the prefix (all r' <= r) to D on prefix + 1."""
    out = {}
    for rp in range(1, r + 1):
        base = prev[rp]
        lower = [prev[rp - k] if rp - k > 0 else np.full_like(base, prod) for k in range(1, rp + 1)]
        gains = np.stack([v - base for v in lower], axis=-1)
        out[rp] = s * base[..., None] + _knapsack_gain(gains, s, width)
    return out


@lru_cache(maxsize=64)
def d_table(sizes: tuple[int, ...], r: int) -> dict[int, np.ndarray]:
    """``D(i, r', s)`` for every ``i`` in the box ``[0, r s_j)`` and ``1 <= r' <= r``.

    No shortcut outside the ``Delta`` region is applied; there the recursion
    itself yields ``n``.
    """
    widths = [r * s for s in sizes]
    i1 = np.arange(widths[0], dtype=np.int64)
    cur = {rp: np.minimum(i1 // rp, sizes[0]) for rp in range(1, r + 1)}
    prod = sizes[0]
    for s, w in zip(sizes[1:], widths[1:]):
        cur = _extend(cur, prod, s, w, r)
        prod *= s
    for arr in cur.values():
        arr.setflags(write=False)
    return cur


class DMemo:
    """Cache of ``D`` rows keyed by ``(prefix, r')``.

    A row holds ``D(prefix + (x,), r')`` for every ``x`` below its length.
    Lookups are lock-free; inserts are idempotent.
    """

    def __init__(self, shape):
        self.shape = GridShape.of(shape)
        self._rows: dict[tuple[tuple[int, ...], int], np.ndarray] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._rows)

    def row(self, prefix: tuple[int, ...], rp: int, length: int) -> np.ndarray:
        key = (prefix, rp)
        hit = self._rows.get(key)
        if hit is not None and len(hit) >= length:
            return hit
        length = max(length, rp * self.shape[len(prefix)])
        row = self._compute(prefix, rp, length)
        with self._lock:
            old = self._rows.get(key)
            if old is None or len(old) < len(row):
                self._rows[key] = row
        return row

    def value(self, i: tuple[int, ...], rp: int) -> int:
        return int(self.row(i[:-1], rp, i[-1] + 1)[i[-1]])

    def _compute(self, prefix, rp, length):
        sizes = self.shape.sizes
        j = len(prefix)
        if j == 0:
            return np.minimum(np.arange(length, dtype=np.int64) // rp, sizes[0])
        prod = math.prod(sizes[:j])
        base = self.value(prefix, rp)
        gains = np.array(
            [(self.value(prefix, rp - k) if rp - k > 0 else prod) - base for k in range(1, rp + 1)],
            dtype=np.int64,
        )
        return sizes[j] * base + _knapsack_gain(gains, sizes[j], length)


def d_recursive(i: Sequence[int], r: int, shape, memo: DMemo | None = None) -> int:
    """Upper bound on grid zeros of multiplicity ``>= r`` via the recursive ``D``.

    Exponents outside ``Delta(r)`` return ``n`` directly.
    """
    shape = GridShape.of(shape)
    _check_arity(i, shape)
    i = tuple(int(a) for a in i)
    if floor_sum(i, shape) >= r:
        return shape.n
    if memo is None:
        memo = DMemo(shape)
    elif memo.shape != shape:
        raise ValueError("memo belongs to a different grid shape")
    return memo.value(i, r)


# -- closed forms for two variables --------------------------------------------


def closed_form_case(i1: int, i2: int, r: int, s1: int, s2: int) -> tuple[str, int]:
    """Region of ``Delta(r)`` containing ``(i1, i2)`` and its ``k``.

    Regions: ``"top"`` (``i1`` in the last ``s1``-band), ``"upper"``, ``"upper-edge"``, ``"lower"``.
    """
    if s1 * (r - 1) <= i1 < s1 * r and 0 <= i2 < s2:
        return "top", 0
    for k in range(1, r):
        # (r-k) r/(r+1) s1 <= i1  <=>  (r+1) i1 >= (r-k) r s1
        upper_part = (r + 1) * i1 >= (r - k) * r * s1 and i1 < (r - k) * s1
        if upper_part and 0 <= i2 < k * s2:
            return "upper", k
        if upper_part and k * s2 <= i2 < (k + 1) * s2:
            return "upper-edge", k
        if (r - k - 1) * s1 <= i1 and (r + 1) * i1 < (r - k) * r * s1 and 0 <= i2 < (k + 1) * s2:
            return "lower", k
    raise NoCaseApplies(f"no closed form covers i=({i1},{i2}), r={r}, s=({s1},{s2})")


def closed_form_c(i1: int, i2: int, r: int, s1: int, s2: int) -> Fraction:
    n = s1 * s2
    if i1 // s1 + i2 // s2 >= r:
        return Fraction(n)
    case, k = closed_form_case(i1, i2, r, s1, s2)
    a = Fraction(i1, r)
    if case == "top":
        fl = i1 // r
        value = Fraction(s2 * fl + i2 * (s1 - fl))
    elif case == "upper":
        value = s2 * a + Fraction(i2, r) * Fraction(i1, r - k)
    elif case == "upper-edge":
        value = s2 * a + ((k + 1) * s2 - i2) * (Fraction(i1, r - k) - a) + (i2 - k * s2) * (s1 - a)
    else:
        value = s2 * a + Fraction(i2, k + 1) * (s1 - a)
    return min(value, Fraction(i1 * s2 + s1 * i2, r), Fraction(n))


# -- unified dispatcher ---------------------------------------------------------


def dzero(i: Sequence[int], r: int, shape, method=BoundMethod.RECURSIVE_D, memo: DMemo | None = None) -> Fraction:
    """The zero-count bound used by the decoder, capped at ``n``."""
    shape = GridShape.of(shape)
    method = BoundMethod.parse(method)
    _check_arity(i, shape)
    n = shape.n
    if method is BoundMethod.CLOSED_FORM_C and shape.m != 2:
        raise MethodArityMismatch("closed forms exist only for two variables")
    if method is BoundMethod.FOOTPRINT and r != 1:
        raise ValueError("the footprint bound only covers r = 1")
    if not in_delta(i, r, shape):
        return Fraction(n)
    if method is BoundMethod.RECURSIVE_D:
        return Fraction(d_recursive(i, r, shape, memo))
    if method is BoundMethod.CLOSED_FORM_C:
        return closed_form_c(i[0], i[1], r, shape[0], shape[1])
    if method is BoundMethod.SCHWARTZ_ZIPPEL:
        return min(sz_mult_bound(i, shape, r), Fraction(n))
    return Fraction(footprint_bound(i, shape))


def delta_set(r: int, shape) -> list[tuple[int, ...]]:
    """All exponents with ``sum floor(i_j / s_j) < r``, in lex order."""
    shape = GridShape.of(shape)
    out = []

    def rec(prefix, budget):
        j = len(prefix)
        if j == shape.m:
            out.append(tuple(prefix))
            return
        s = shape[j]
        for a in range(r * s):
            used = a // s
            if used >= budget:
                break
            rec(prefix + [a], budget - used)

    rec([], r)
    return out


# -- whole-box arrays ------------------------------------------------------------


def _box_grids(shape: GridShape, r: int):
    return np.meshgrid(*[np.arange(r * s, dtype=np.int64) for s in shape], indexing="ij", sparse=True)


def delta_mask(shape, r: int) -> np.ndarray:
    shape = GridShape.of(shape)
    grids = _box_grids(shape, r)
    return sum(g // s for g, s in zip(grids, shape)) < r


def lcm_upto(r: int) -> int:
    return math.lcm(*range(1, r + 1))


def bound_scale(r: int, method) -> int:
    method = BoundMethod.parse(method)
    if method is BoundMethod.SCHWARTZ_ZIPPEL:
        return r
    if method is BoundMethod.CLOSED_FORM_C:
        return r * lcm_upto(r)
    return 1


@lru_cache(maxsize=32)
def _bound_array(sizes: tuple[int, ...], r: int, method: BoundMethod) -> tuple[np.ndarray, int]:
    shape = GridShape(sizes)
    n = shape.n
    scale = bound_scale(r, method)
    grids = _box_grids(shape, r)
    mask = delta_mask(shape, r)
    sz = sum(g * (n // s) for g, s in zip(grids, shape))
    if method is BoundMethod.RECURSIVE_D:
        values = np.array(d_table(sizes, r)[r])
    elif method is BoundMethod.SCHWARTZ_ZIPPEL:
        values = np.broadcast_to(np.minimum(sz, n * r), mask.shape).copy()
    elif method is BoundMethod.FOOTPRINT:
        if r != 1:
            raise ValueError("the footprint bound only covers r = 1")
        rest = np.ones(mask.shape, dtype=np.int64)
        for g, s in zip(grids, shape):
            rest = rest * np.maximum(s - g, 0)
        values = n - rest
    else:
        if shape.m != 2:
            raise MethodArityMismatch("closed forms exist only for two variables")
        values = _closed_form_array(shape, r, scale)
        values = np.minimum(values, np.minimum(sz * (scale // r), n * scale))
    values = np.where(mask, values, n * scale)
    values.setflags(write=False)
    return values, scale


def bound_array(shape, r: int, method) -> tuple[np.ndarray, int]:
    """``(values, scale)``: ``dzero(i) == values[i] / scale`` on the box ``[0, r s_j)``."""
    return _bound_array(GridShape.of(shape).sizes, r, BoundMethod.parse(method))


def _closed_form_array(shape: GridShape, r: int, L: int) -> np.ndarray:
    s1, s2 = shape
    I1, I2 = np.meshgrid(np.arange(r * s1, dtype=np.int64), np.arange(r * s2, dtype=np.int64), indexing="ij")
    out = np.full(I1.shape, -1, dtype=np.int64)
    filled = np.zeros(I1.shape, dtype=bool)

    def put(region, value):
        region = region & ~filled
        out[region] = value[region]
        filled[region] = True

    fl = I1 // r
    put((I1 >= s1 * (r - 1)) & (I2 < s2), L * (s2 * fl + I2 * (s1 - fl)))
    a = I1 * (L // r)  # i1/r, scaled
    for k in range(1, r):
        upper = ((r + 1) * I1 >= (r - k) * r * s1) & (I1 < (r - k) * s1)
        put(upper & (I2 < k * s2), s2 * a + I2 * I1 * (L // (r * (r - k))))
        put(
            upper & (I2 >= k * s2) & (I2 < (k + 1) * s2),
            s2 * a + ((k + 1) * s2 - I2) * (I1 * (L // (r - k)) - a) + (I2 - k * s2) * (s1 * L - a),
        )
        # exact: L / r is a multiple of k + 1
        c3 = s2 * a + (I2 * (s1 * L - a)) // (k + 1)
        put((I1 >= (r - k - 1) * s1) & ((r + 1) * I1 < (r - k) * r * s1) & (I2 < (k + 1) * s2), c3)
    inside = delta_mask(shape, r)
    if np.any(inside & ~filled):
        bad = tuple(int(x) for x in np.argwhere(inside & ~filled)[0])
        raise NoCaseApplies(f"no closed form covers i={bad}, r={r}, s={shape.sizes}")
    return out


# -- improvement statistics ----------------------------------------------------------


def _sz_term(total: np.ndarray, q: int, m: int, r: int, reading: str):
    n = q**m
    if reading == "integer":
        return np.minimum(total * q ** (m - 1) // r, n), 1
    return np.minimum(total * q ** (m - 1), n * r), r  # scaled by r


def improvement_stats(m: int, q: int, r: int, which: str = "max", reading: str = "integer") -> Fraction:
    """Improvement of ``D`` over Schwartz-Zippel on the uniform grid ``q^m``.

    ``which="max"`` gives the largest gap relative to ``q^m``; ``which="mean"``
    the average relative gap over nonzero exponents of ``Delta(r)``.

    With ``reading="integer"`` the Schwartz-Zippel term is the integer zero
    count ``floor(sum(i) q^(m-1) / r)``, capped at ``q^m``; exponents where it
    is zero are left out of the mean (their relative gap is 0/0).  With
    ``reading="printed"`` the max uses the exact fraction and the mean uses
    ``min(sum(i) q^(m-1), q^m)`` without the division by ``r``.
    """
    if reading not in ("integer", "printed"):
        raise ValueError(f"unknown reading {reading!r}")
    shape = GridShape((q,) * m)
    n = shape.n
    D = np.asarray(d_table(shape.sizes, r)[r])
    mask = delta_mask(shape, r)
    total = sum(_box_grids(shape, r))
    total = np.broadcast_to(total, mask.shape)
    if which == "max":
        sz, scale = _sz_term(total, q, m, r, reading)
        gap = (sz - D * scale)[mask]
        return Fraction(int(gap.max()), n * scale)
    if which != "mean":
        raise ValueError(f"unknown statistic {which!r}")
    if reading == "integer":
        den = np.minimum(total * q ** (m - 1) // r, n)
    else:
        den = np.minimum(total * q ** (m - 1), n)
    sel = mask & (total > 0) & (den > 0)
    nums = (den - D)[sel].tolist()
    dens = den[sel].tolist()
    acc = sum((Fraction(a, b) for a, b in zip(nums, dens)), Fraction(0))
    return acc / len(nums)


def truncate(x: Fraction, digits: int = 3) -> str:
    """Decimal rendering truncated toward zero (never rounded)."""
    x = Fraction(x)
    scale = 10**digits
    v = math.trunc(x * scale)
    sign = "-" if v < 0 or (v == 0 and x < 0) else ""
    v = abs(v)
    return f"{sign}{v // scale}.{v % scale:0{digits}d}"
