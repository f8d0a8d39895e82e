"""Sparse multivariate polynomials over GF(q) and polynomials in Z over them.

Monomials are plain tuples of exponents ``(i_1, ..., i_m)``.  Python's tuple
comparison is exactly the lexicographic order with ``X_m < ... < X_1``, so the
leading monomial of a polynomial is ``max`` of its support.
"""
from __future__ import annotations

import math
import re
from typing import Iterable, Mapping, Sequence

from .errors import ArityMismatch, MixedFields, ZeroPolynomial
from .gf import Field

Monomial = tuple[int, ...]


class _Infinity:
    """Multiplicity of the zero polynomial.  Compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITY")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INFINITY = _Infinity()


def divides(k: Monomial, m: Monomial) -> bool:
    return all(a <= b for a, b in zip(k, m))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def binom_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    out = 1
    while n or k:
        n, ni = divmod(n, p)
        k, ki = divmod(k, p)
        if ki > ni:
            return 0
        out = out * math.comb(ni, ki) % p
    return out


class MPoly:
    """Polynomial in ``nvars`` variables with coefficients in ``field``.

    ``terms`` maps exponent tuples to nonzero integer-encoded coefficients.
    Instances are treated as immutable.
    """

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms: Mapping[Monomial, int] | None = None):
        self.field = field
        self.nvars = nvars
        clean = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(x) for x in mono)
            if len(mono) != nvars:
                raise ArityMismatch(f"monomial {mono} in {nvars} variables")
            c = int(c) % field.q if field.e == 1 else int(c)
            if c:
                clean[mono] = c
        self.terms = clean

    # construction helpers
    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars)

    @classmethod
    def constant(cls, field, nvars, c):
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, field, mono, c=1):
        return cls(field, len(mono), {tuple(mono): c})

    @classmethod
    def var(cls, field, nvars, j):
        e = [0] * nvars
        e[j] = 1
        return cls(field, nvars, {tuple(e): 1})

    def _new(self, terms):
        p = MPoly.__new__(MPoly)
        p.field = self.field
        p.nvars = self.nvars
        p.terms = terms
        return p

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def support(self) -> list[Monomial]:
        return sorted(self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, j: int) -> int:
        return max((m[j] for m in self.terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, int):
            return self == MPoly.constant(self.field, self.nvars, self.field.from_int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.field != self.field:
                raise MixedFields(f"{self.field} vs {other.field}")
            if other.nvars != self.nvars:
                raise ArityMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, int):
            return MPoly.constant(self.field, self.nvars, self.field.from_int(other))
        raise TypeError(f"cannot combine MPoly with {type(other).__name__}")

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        f = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = f.add(out.get(m, 0), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return self._new({m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c: int) -> "MPoly":
        if c == 0:
            return self._new({})
        f = self.field
        return self._new({m: f.mul(v, c) for m, v in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        f = self.field
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = f.add(out.get(m, 0), f.mul(c1, c2))
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = MPoly.constant(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, mono: Monomial) -> "MPoly":
        return self._new({mono_mul(m, mono): c for m, c in self.terms.items()})

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading monomial")
        return max(self.terms)

    def leading_coefficient(self) -> int:
        return self.terms[self.leading_monomial()]

    def evaluate(self, point: Sequence[int]) -> int:
        point = [int(x) for x in point]
        if len(point) != self.nvars:
            raise ArityMismatch(f"point of length {len(point)} for {self.nvars} variables")
        f = self.field
        acc = 0
        for mono, c in self.terms.items():
            v = c
            for x, k in zip(point, mono):
                if k:
                    v = f.mul(v, f.pow(x, k))
            acc = f.add(acc, v)
        return acc

    def hasse_derivative(self, k: Sequence[int]) -> "MPoly":
        k = tuple(k)
        if len(k) != self.nvars:
            raise ArityMismatch(f"order {k} for {self.nvars} variables")
        f = self.field
        out: dict[Monomial, int] = {}
        for mono, c in self.terms.items():
            if not divides(k, mono):
                continue
            b = 1
            for e, kk in zip(mono, k):
                b = b * binom_mod(e, kk, f.p) % f.p
            if not b:
                continue
            m = tuple(e - kk for e, kk in zip(mono, k))
            v = f.add(out.get(m, 0), f.mul(c, b))
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._new(out)

    def shift(self, a: Sequence[int]) -> "MPoly":
        """Return ``f(X + a)`` via one Taylor shift per variable."""
        f = self.field
        p = f.p
        terms = self.terms
        for j, aj in enumerate(a):
            aj = int(aj)
            if aj == 0:
                continue
            out: dict[Monomial, int] = {}
            for mono, c in terms.items():
                e = mono[j]
                for l in range(e + 1):
                    b = binom_mod(e, l, p)
                    if not b:
                        continue
                    v = f.mul(c, f.mul(b, f.pow(aj, e - l)))
                    if not v:
                        continue
                    m = mono[:j] + (l,) + mono[j + 1 :]
                    s = f.add(out.get(m, 0), v)
                    if s:
                        out[m] = s
                    else:
                        out.pop(m, None)
            terms = out
        return self._new(dict(terms))

    def multiplicity_at(self, a: Sequence[int]):
        """Multiplicity of the zero at ``a``; :data:`INFINITY` for the zero polynomial."""
        if len(a) != self.nvars:
            raise ArityMismatch(f"point of length {len(a)} for {self.nvars} variables")
        if not self.terms:
            return INFINITY
        return min(sum(m) for m in self.shift(a).terms)

    # text and JSON forms
    def __repr__(self):
        return format_poly(self)

    def to_json(self) -> list:
        return [[list(m), c] for m, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, field: Field, nvars: int, data: Iterable) -> "MPoly":
        return cls(field, nvars, {tuple(m): c for m, c in data})


def leading_monomial(f: MPoly) -> Monomial:
    return f.leading_monomial()


def evaluate(f: MPoly, point: Sequence[int]) -> int:
    return f.evaluate(point)


def hasse_derivative(f: MPoly, k: Sequence[int]) -> MPoly:
    return f.hasse_derivative(k)


def multiplicity_at(f: MPoly, a: Sequence[int]):
    return f.multiplicity_at(a)


class ZPoly:
    """``Q_0 + Q_1 Z + ... + Q_t Z^t`` with :class:`MPoly` coefficients."""

    __slots__ = ("field", "nvars", "coeffs")

    def __init__(self, coeffs: Sequence[MPoly], field: Field | None = None, nvars: int | None = None):
        coeffs = list(coeffs)
        if field is None or nvars is None:
            if not coeffs:
                raise ValueError("field and nvars required for an empty ZPoly")
            field, nvars = coeffs[0].field, coeffs[0].nvars
        for c in coeffs:
            if c.field != field:
                raise MixedFields(f"{c.field} vs {field}")
            if c.nvars != nvars:
                raise ArityMismatch(f"{c.nvars} vs {nvars} variables")
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            coeffs = [MPoly.zero(field, nvars)]
        self.field = field
        self.nvars = nvars
        self.coeffs = coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, ZPoly) and self.coeffs == other.coeffs

    def __mul__(self, other: "ZPoly") -> "ZPoly":
        out = [MPoly.zero(self.field, self.nvars) for _ in range(self.degree + other.degree + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return ZPoly(out, self.field, self.nvars)

    def __add__(self, other: "ZPoly") -> "ZPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        z = MPoly.zero(self.field, self.nvars)
        a = self.coeffs + [z] * (n - len(self.coeffs))
        b = other.coeffs + [z] * (n - len(other.coeffs))
        return ZPoly([x + y for x, y in zip(a, b)], self.field, self.nvars)

    @classmethod
    def linear(cls, f: MPoly) -> "ZPoly":
        """The polynomial ``Z - f``."""
        return cls([-f, MPoly.constant(f.field, f.nvars, 1)])

    def substitute_z(self, f: MPoly) -> MPoly:
        """``sum_i Q_i * f**i`` evaluated by Horner's rule."""
        if f.nvars != self.nvars:
            raise ArityMismatch(f"{f.nvars} vs {self.nvars} variables")
        acc = MPoly.zero(self.field, self.nvars)
        for c in reversed(self.coeffs):
            acc = acc * f + c
        return acc

    def divide_linear_z(self, f: MPoly) -> tuple[bool, "ZPoly | None"]:
        """Synthetic division by ``Z - f``; returns ``(divides, quotient)``."""
        if self.is_zero():
            raise ZeroPolynomial("cannot divide the zero polynomial")
        t = self.degree
        if t == 0:
            return False, None
        quot = [None] * t
        b = self.coeffs[t]
        quot[t - 1] = b
        for i in range(t - 1, 0, -1):
            b = self.coeffs[i] + f * b
            quot[i - 1] = b
        rem = self.coeffs[0] + f * b
        if not rem.is_zero():
            return False, None
        return True, ZPoly(quot, self.field, self.nvars)

    def to_mpoly(self) -> MPoly:
        """View as a polynomial in ``nvars + 1`` variables with Z last."""
        terms = {}
        for i, c in enumerate(self.coeffs):
            for m, v in c.terms.items():
                terms[m + (i,)] = v
        return MPoly(self.field, self.nvars + 1, terms)

    def evaluate_x(self, j: int, a: int) -> "ZPoly":
        """Substitute ``X_j = a`` and drop that variable."""
        return ZPoly([_eval_var(c, j, a) for c in self.coeffs], self.field, self.nvars - 1)

    def __repr__(self):
        return format_poly(self.to_mpoly(), zlast=True)

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, field: Field, nvars: int, data) -> "ZPoly":
        return cls([MPoly.from_json(field, nvars, c) for c in data], field, nvars)


def _eval_var(f: MPoly, j: int, a: int) -> MPoly:
    fld = f.field
    out: dict[Monomial, int] = {}
    for m, c in f.terms.items():
        v = fld.mul(c, fld.pow(a, m[j]))
        if not v:
            continue
        mm = m[:j] + m[j + 1 :]
        s = fld.add(out.get(mm, 0), v)
        if s:
            out[mm] = s
        else:
            out.pop(mm, None)
    return MPoly(fld, f.nvars - 1, out)


def substitute_z(q: ZPoly, f: MPoly) -> MPoly:
    return q.substitute_z(f)


def divide_linear_z(q: ZPoly, f: MPoly) -> tuple[bool, ZPoly | None]:
    return q.divide_linear_z(f)


def format_poly(f: MPoly, zlast: bool = False) -> str:
    if f.is_zero():
        return "0"
    names = [f"X{j + 1}" for j in range(f.nvars)]
    if zlast:
        names[-1] = "Z"
    parts = []
    for mono in sorted(f.terms, reverse=True):
        factors = [str(f.terms[mono])] if f.terms[mono] != 1 or not any(mono) else []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{e}")
        parts.append("*".join(factors))
    return " + ".join(parts)


_TERM = re.compile(r"^(?:(\d+)\*?)?((?:[A-Za-z]\w*(?:\^\d+)?\*?)*)$")


def parse_poly(text: str, field: Field, nvars: int, with_z: bool = False):
    """Parse ``"c*X1^a*X2^b*Z^d + ..."``.

    Coefficients are integer encodings; a leading ``-`` on a term negates it.
    Returns an :class:`MPoly`, or a :class:`ZPoly` when ``with_z`` is set.
    """
    width = nvars + (1 if with_z else 0)
    acc: dict[Monomial, int] = {}
    text = text.replace(" ", "").replace("-", "+-")
    for chunk in filter(None, text.split("+")):
        neg = chunk.startswith("-")
        chunk = chunk.lstrip("-")
        m = _TERM.match(chunk)
        if not m:
            raise ValueError(f"cannot parse term {chunk!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        exps = [0] * width
        for factor in filter(None, m.group(2).split("*")):
            name, _, power = factor.partition("^")
            power = int(power) if power else 1
            if name == "Z" and with_z:
                exps[-1] += power
            elif name.startswith("X") and name[1:].isdigit() and 1 <= int(name[1:]) <= nvars:
                exps[int(name[1:]) - 1] += power
            else:
                raise ValueError(f"unknown variable {name!r}")
        c = field.from_int(coeff) if field.e == 1 else coeff
        if neg:
            c = field.neg(c)
        key = tuple(exps)
        acc[key] = field.add(acc.get(key, 0), c)
    poly = MPoly(field, width, acc)
    if not with_z:
        return poly
    t = max((m[-1] for m in poly.terms), default=0)
    coeffs = [dict() for _ in range(t + 1)]
    for m, c in poly.terms.items():
        coeffs[m[-1]][m[:-1]] = c
    return ZPoly([MPoly(field, nvars, c) for c in coeffs], field, nvars)
