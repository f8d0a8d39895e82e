"""Finite fields GF(p^e) with integer-encoded elements.

An element of GF(p^e) is stored as the integer ``sum(c_j * p**j)`` where
``c_0, ..., c_{e-1}`` are its coordinates in the power basis of a root of the
field modulus.  Algorithms work directly on these integers (scalars or numpy
arrays) through :class:`Field`; :class:`FieldElem` is a thin operator-friendly
wrapper for interactive use.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import DivisionByZero, FieldTooLarge, MixedFields, NonPrimeCharacteristic

MAX_ORDER = 1 << 16
_ADD_TABLE_MAX = 2187  # 3^7: addition table stays under 40 MB
_MUL_TABLE_MAX = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _digits(value: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        value, c = divmod(value, p)
        out.append(c)
    return out


def _undigits(coeffs: Sequence[int], p: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * p + c
    return v


def _poly_mod(a: list[int], mod: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic ``mod`` over F_p (low-to-high lists)."""
    a = list(a)
    d = len(mod) - 1
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k] % p
        if c:
            for j in range(d + 1):
                a[k - d + j] = (a[k - d + j] - c * mod[j]) % p
    return [c % p for c in a[:d]] + [0] * max(0, d - len(a))


def _poly_mulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _poly_mod(prod, mod, p)


def _has_root_free_factorisation(f: list[int], p: int) -> bool:
    """True iff the monic ``f`` has no monic factor of degree 1..deg(f)//2."""
    e = len(f) - 1
    for d in range(1, e // 2 + 1):
        for low in range(p**d):
            g = _digits(low, p, d) + [1]
            if not any(_poly_mod(f, g, p)):
                return False
    return True


def canonical_modulus(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree ``e`` over F_p with the smallest base-p encoding."""
    if e == 1:
        return (0, 1)
    for low in range(p**e):
        f = _digits(low, p, e) + [1]
        if f[0] == 0:
            continue
        if _has_root_free_factorisation(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class Field:
    """The field GF(p^e).  Build instances with :func:`field_new`."""

    p: int
    e: int
    modulus: tuple[int, ...]
    q: int = dc_field(init=False)
    exp: np.ndarray = dc_field(init=False, repr=False)
    log: np.ndarray = dc_field(init=False, repr=False)

    def __post_init__(self):
        q = self.p**self.e
        object.__setattr__(self, "q", q)
        exp, log = self._build_tables()
        object.__setattr__(self, "exp", exp)
        object.__setattr__(self, "log", log)

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    @property
    def spec(self) -> str:
        return f"{self.p},{self.e}"

    def _mul_slow(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        da = _digits(a, self.p, self.e)
        db = _digits(b, self.p, self.e)
        return _undigits(_poly_mulmod(da, db, self.modulus, self.p), self.p)

    def _build_tables(self):
        q = self.q
        # exp has length 2(q-1) so that exp[log a + log b] needs no reduction
        exp = np.zeros(2 * max(q - 1, 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        for g in range(1, q):
            powers = [1]
            x = self._mul_slow(1, g)
            while x != 1:
                powers.append(x)
                x = self._mul_slow(x, g)
            if len(powers) == q - 1:
                break
        for k, x in enumerate(powers):
            exp[k] = x
            log[x] = k
        if q > 2:
            exp[q - 1 :] = exp[: q - 1]
        else:
            exp[:] = 1
        return exp, log

    # scalar arithmetic on integer encodings
    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return int(self.vadd(np.int64(a), np.int64(b)))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return int(self.vneg(np.int64(a)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return int(self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k == 0:
            return 1
        if a == 0:
            return 0
        if self.e == 1:
            return pow(a, k, self.p)
        return int(self.exp[(int(self.log[a]) * k) % (self.q - 1)])

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> F_q."""
        return n % self.p

    @cached_property
    def _add_table(self) -> np.ndarray | None:
        # odd-characteristic extension fields only; q^2 entries
        if self.e == 1 or self.p == 2 or self.q > _ADD_TABLE_MAX:
            return None
        x = np.arange(self.q, dtype=np.int64)
        return self._vadd_digits(x[:, None], x[None, :])

    @cached_property
    def _neg_table(self) -> np.ndarray:
        return self._vneg_digits(np.arange(self.q, dtype=np.int64))

    # vectorised arithmetic on int64 arrays
    def vadd(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        table = self._add_table
        if table is not None:
            return table[a, b]
        return self._vadd_digits(a, b)

    def _vadd_digits(self, a, b):
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        w = 1
        for _ in range(self.e):
            out += ((a // w + b // w) % self.p) * w
            w *= self.p
        return out

    def vneg(self, a):
        if self.e == 1:
            return (-np.asarray(a)) % self.p
        if self.p == 2:
            return np.asarray(a)
        if self.q <= _ADD_TABLE_MAX:
            return self._neg_table[a]
        return self._vneg_digits(a)

    def _vneg_digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros_like(a)
        w = 1
        for _ in range(self.e):
            out += ((-(a // w)) % self.p) * w
            w *= self.p
        return out

    def vsub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        if self.p != 2 and self.q <= _ADD_TABLE_MAX:
            return self._add_table[a, self._neg_table[b]]
        return self.vadd(a, self.vneg(b))

    @cached_property
    def _mul_table(self) -> np.ndarray | None:
        if self.e == 1 or self.q > _MUL_TABLE_MAX:
            return None
        x = np.arange(self.q, dtype=np.int64)
        out = self.exp[(self.log[x][:, None] + self.log[x][None, :]) % (self.q - 1)]
        out[0, :] = 0
        out[:, 0] = 0
        return out

    def vmul(self, a, b):
        if self.e == 1:
            return (np.asarray(a) * np.asarray(b)) % self.p
        table = self._mul_table
        if table is not None:
            return table[a, b]
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def vpow(self, a, k):
        """Elementwise ``a**k`` for arrays ``a`` and nonnegative ``k`` (broadcast)."""
        a = np.asarray(a, dtype=np.int64)
        k = np.asarray(k, dtype=np.int64)
        out = self.exp[(self.log[a] * k) % (self.q - 1)]
        out = np.where(a == 0, 0, out)
        return np.where(k == 0, 1, out)

    def elements(self) -> list["FieldElem"]:
        return [FieldElem(self, v) for v in range(self.q)]

    def __call__(self, value: int) -> "FieldElem":
        return FieldElem(self, value)


@lru_cache(maxsize=None)
def field_new(p: int, e: int = 1) -> Field:
    """Return GF(p^e) with its canonical modulus."""
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if p**e > MAX_ORDER:
        raise FieldTooLarge(f"{p}^{e} exceeds {MAX_ORDER}")
    return Field(p, e, canonical_modulus(p, e))


def parse_field(spec: str) -> Field:
    """Parse a ``"p,e"`` (or bare ``"p"``) field spec."""
    parts = [int(x) for x in str(spec).split(",")]
    if len(parts) == 1:
        parts.append(1)
    if len(parts) != 2:
        raise ValueError(f"bad field spec {spec!r}")
    return field_new(*parts)


@dataclass(frozen=True)
class FieldElem:
    field: Field
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise ValueError(f"{self.value} is not an element of {self.field}")

    def _check(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise MixedFields(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        b = self._check(other)
        return FieldElem(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._check(other)
        return FieldElem(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._check(other)
        return FieldElem(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._check(other)
        return FieldElem(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._check(other)
        return FieldElem(self.field, self.field.div(self.value, b))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        if k < 0:
            return FieldElem(self.field, self.field.pow(self.field.inv(self.value), -k))
        return FieldElem(self.field, self.field.pow(self.value, k))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value}@{self.field!r}"


def arith(a: FieldElem, b: FieldElem, op: str) -> FieldElem:
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two elements of one field."""
    if a.field != b.field:
        raise MixedFields(f"{a.field} vs {b.field}")
    f = a.field
    fn = {"add": f.add, "sub": f.sub, "mul": f.mul, "div": f.div}[op]
    return FieldElem(f, fn(a.value, b.value))


def iter_values(f: Field) -> Iterator[int]:
    return iter(range(f.q))
