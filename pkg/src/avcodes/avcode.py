"""Affine variety codes ``E(M, S)`` over product point sets."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicatePoint, ExponentOutOfBox, LengthMismatch, NotDivisorClosed, RankDeficient
from .gf import Field, parse_field
from .linalg import rank
from .mpoly import MPoly, Monomial, divides
from .zbounds import GridShape


@dataclass(frozen=True, eq=False)
class PointEnsemble:
    """The grid ``S_1 x ... x S_m``; points are listed with the last coordinate fastest."""

    field: Field
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sets = tuple(tuple(int(a) for a in s) for s in self.sets)
        for j, s in enumerate(sets):
            if not s:
                raise ValueError(f"S_{j + 1} is empty")
            if len(set(s)) != len(s):
                raise DuplicatePoint(f"S_{j + 1} has repeated elements")
            if any(not 0 <= a < self.field.q for a in s):
                raise ValueError(f"S_{j + 1} has values outside {self.field}")
        object.__setattr__(self, "sets", sets)

    @classmethod
    def full(cls, field: Field, m: int) -> "PointEnsemble":
        return cls(field, tuple(tuple(range(field.q)) for _ in range(m)))

    @property
    def shape(self) -> GridShape:
        return GridShape(tuple(len(s) for s in self.sets))

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def n(self) -> int:
        return self.shape.n

    @cached_property
    def points(self) -> np.ndarray:
        """``(n, m)`` array of points in row-major order."""
        return np.array(list(itertools.product(*self.sets)), dtype=np.int64).reshape(-1, self.m)

    def monomial_values(self, monos: Sequence[Monomial]) -> np.ndarray:
        """Matrix whose row ``k`` is ``ev_S(X^monos[k])``."""
        f = self.field
        pts = self.points
        out = np.ones((len(monos), self.n), dtype=np.int64)
        if not len(monos):
            return out
        exps = np.array(monos, dtype=np.int64).reshape(len(monos), self.m)
        for j in range(self.m):
            out = f.vmul(out, f.vpow(pts[None, :, j], exps[:, j, None]))
        return out


def border(monomials: Iterable[Monomial]) -> list[Monomial]:
    """Maximal elements under divisibility, in lex order."""
    monos = sorted(set(monomials))
    return [M for M in monos if not any(N != M and divides(M, N) for N in monos)]


def is_divisor_closed(monomials: Iterable[Monomial]) -> bool:
    monos = set(monomials)
    for M in monos:
        for j, e in enumerate(M):
            if e and M[:j] + (e - 1,) + M[j + 1 :] not in monos:
                return False
    return True


@dataclass(frozen=True, eq=False)
class MonomialFamily:
    """The monomial set ``M`` with its border and divisor-closure flag."""

    monomials: tuple[Monomial, ...]
    shape: GridShape
    border: tuple[Monomial, ...] = dc_field(init=False)
    divisor_closed: bool = dc_field(init=False)

    def __post_init__(self):
        shape = GridShape.of(self.shape)
        monos = tuple(sorted(set(tuple(int(x) for x in M) for M in self.monomials)))
        for M in monos:
            if len(M) != shape.m or any(not 0 <= a < s for a, s in zip(M, shape)):
                raise ExponentOutOfBox(f"{M} is outside the box {shape.sizes}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "monomials", monos)
        object.__setattr__(self, "border", tuple(border(monos)))
        object.__setattr__(self, "divisor_closed", is_divisor_closed(monos))

    def __len__(self):
        return len(self.monomials)

    def __contains__(self, M):
        return tuple(M) in self._index

    @cached_property
    def _index(self) -> dict[Monomial, int]:
        return {M: k for k, M in enumerate(self.monomials)}

    def index(self, M: Monomial) -> int:
        return self._index[tuple(M)]

    def to_json(self) -> dict:
        return {"type": "explicit", "monomials": [list(M) for M in self.monomials]}


def family_build(spec, shape) -> MonomialFamily:
    """Build a family from a spec dict or mini-grammar string.

    Accepted dicts: ``{"type": "total", "u": U}``, ``{"type": "weighted",
    "weights": [...], "u": U}``, ``{"type": "box", "bounds": [...],
    "pairing": [...]}`` and ``{"type": "explicit", "monomials": [[...], ...]}``.
    For ``box``, ``pairing[j]`` names the coordinate that ``bounds[j]`` limits
    (default: identity).  Strings use :func:`parse_family_spec`.
    """
    shape = GridShape.of(shape)
    if isinstance(spec, str):
        spec = parse_family_spec(spec)
    kind = spec["type"]
    box = [range(s) for s in shape]
    if kind in ("total", "weighted"):
        u = int(spec["u"])
        w = spec.get("weights") or [1] * shape.m
        if len(w) != shape.m:
            raise ValueError("one weight per variable required")
        if any(wj <= 0 for wj in w):
            raise ValueError("weights must be positive")
        for j, wj in enumerate(w):
            if u // wj >= shape[j]:
                raise ExponentOutOfBox(f"u={u} allows X{j + 1}^{u // wj}, beyond s_{j + 1}={shape[j]}")
        monos = [M for M in itertools.product(*box) if sum(a * b for a, b in zip(w, M)) <= u]
    elif kind == "box":
        bounds = [int(k) for k in spec["bounds"]]
        pairing = spec.get("pairing") or list(range(shape.m))
        if sorted(pairing) != list(range(shape.m)) or len(bounds) != shape.m:
            raise ValueError(f"bad box spec {spec}")
        limits = [0] * shape.m
        for k, j in zip(bounds, pairing):
            limits[j] = k
        for j, k in enumerate(limits):
            if not 1 <= k <= shape[j]:
                raise ExponentOutOfBox(f"bound {k} on X{j + 1} does not fit s_{j + 1}={shape[j]}")
        monos = list(itertools.product(*[range(k) for k in limits]))
    elif kind == "explicit":
        monos = [tuple(M) for M in spec["monomials"]]
    else:
        raise ValueError(f"unknown family type {kind!r}")
    return MonomialFamily(tuple(monos), shape)


def parse_family_spec(text: str) -> dict:
    """``total:U``, ``weighted:w1,...,wm:U``, ``box:k1,...,km[:j1,...,jm]``, ``explicit:@file.json``.

    The optional box pairing lists 1-based coordinates: ``box:4,7:2,1`` bounds
    the exponent of ``X2`` by 4 and of ``X1`` by 7.
    """
    kind, _, rest = text.partition(":")
    parts = rest.split(":") if rest else []
    ints = lambda s: [int(x) for x in s.split(",") if x != ""]
    if kind == "total" and len(parts) == 1:
        return {"type": "total", "u": int(parts[0])}
    if kind == "weighted" and len(parts) == 2:
        return {"type": "weighted", "weights": ints(parts[0]), "u": int(parts[1])}
    if kind == "box" and len(parts) in (1, 2):
        spec = {"type": "box", "bounds": ints(parts[0])}
        if len(parts) == 2:
            spec["pairing"] = [j - 1 for j in ints(parts[1])]
        return spec
    if kind == "explicit" and len(parts) == 1:
        src = parts[0]
        if src.startswith("@"):
            with open(src[1:]) as fh:
                data = json.load(fh)
        else:
            data = json.loads(src)
        monos = data["monomials"] if isinstance(data, dict) else data
        return {"type": "explicit", "monomials": monos}
    raise ValueError(f"bad family spec {text!r}")


class Code:
    """The code ``E(M, S)`` with its generator matrix (rows ``ev_S(M)``, lex order)."""

    def __init__(self, ensemble: PointEnsemble, family: MonomialFamily, check_rank: bool = True):
        if family.shape != ensemble.shape:
            raise ExponentOutOfBox(f"family box {family.shape.sizes} vs grid {ensemble.shape.sizes}")
        self.ensemble = ensemble
        self.family = family
        self.generator = ensemble.monomial_values(family.monomials)
        self.generator.setflags(write=False)
        if check_rank and rank(self.field, self.generator) != len(family):
            raise RankDeficient("evaluation vectors of distinct monomials are dependent")

    field = property(lambda self: self.ensemble.field)
    n = property(lambda self: self.ensemble.n)
    k = property(lambda self: len(self.family))
    shape = property(lambda self: self.ensemble.shape)

    def __repr__(self):
        return f"Code({self.field!r}, n={self.n}, k={self.k})"

    def encode(self, message: Sequence[int]) -> np.ndarray:
        msg = np.asarray([int(x) for x in message], dtype=np.int64)
        if msg.shape != (self.k,):
            raise LengthMismatch(f"message of length {len(msg)} for dimension {self.k}")
        f = self.field
        out = np.zeros(self.n, dtype=np.int64)
        for c, row in zip(msg, self.generator):
            if c:
                out = f.vadd(out, f.vmul(row, c))
        return out

    def message_poly(self, message: Sequence[int]) -> MPoly:
        return MPoly(self.field, self.ensemble.m, dict(zip(self.family.monomials, (int(c) for c in message))))

    def poly_message(self, poly: MPoly) -> list[int]:
        """Coefficient vector of ``poly`` in the family basis."""
        if any(M not in self.family for M in poly.terms):
            raise ExponentOutOfBox("support is not inside the family")
        return [poly.terms.get(M, 0) for M in self.family.monomials]

    def evaluate(self, poly: MPoly) -> np.ndarray:
        """``ev_S(poly)``."""
        monos = list(poly.terms)
        if not monos:
            return np.zeros(self.n, dtype=np.int64)
        vals = self.ensemble.monomial_values(monos)
        f = self.field
        out = np.zeros(self.n, dtype=np.int64)
        for M, row in zip(monos, vals):
            out = f.vadd(out, f.vmul(row, poly.terms[M]))
        return out

    def dmin_bound(self) -> int:
        return dmin_bound(self.family)

    def min_weight_witness(self) -> MPoly:
        return min_weight_witness(self)

    def to_json(self) -> dict:
        return {
            "field": self.field.spec,
            "sets": [list(s) for s in self.ensemble.sets],
            "family": self.family.to_json(),
        }


def code_new(field: Field, sets, family) -> Code:
    """Build ``E(M, S)``.  ``sets`` entries may be ``"full"`` for all of F_q."""
    sets = tuple(tuple(range(field.q)) if s == "full" else tuple(s) for s in sets)
    ens = PointEnsemble(field, sets)
    if not isinstance(family, MonomialFamily):
        family = family_build(family, ens.shape)
    return Code(ens, family)


def code_from_json(data) -> Code:
    if isinstance(data, str):
        data = json.loads(data)
    field = parse_field(data["field"])
    return code_new(field, data["sets"], data["family"])


def encode(code: Code, message: Sequence[int]) -> np.ndarray:
    return code.encode(message)


def dmin_bound(family: MonomialFamily) -> int:
    shape = family.shape
    return min(math.prod(s - a for a, s in zip(M, shape)) for M in family.border)


def min_weight_witness(code: Code) -> MPoly:
    """A polynomial supported on ``M`` whose codeword has weight ``dmin_bound``."""
    fam = code.family
    if not fam.divisor_closed:
        raise NotDivisorClosed("the bound is only known to be sharp for divisor-closed families")
    shape = fam.shape
    target = min(fam.border, key=lambda M: (math.prod(s - a for a, s in zip(M, shape)), M))
    f = code.field
    m = code.ensemble.m
    poly = MPoly.constant(f, m, 1)
    for v, iv in enumerate(target):
        roots = sorted(code.ensemble.sets[v])[:iv]
        for b in roots:
            poly = poly * (MPoly.var(f, m, v) - MPoly.constant(f, m, b))
    return poly


def weight(word) -> int:
    return int(np.count_nonzero(np.asarray(word)))
