"""Multiplicity list decoding of ``E(M, S)``: preparation step, interpolation, root finding.

The preparation step depends only on the grid shape, the border of the
monomial family, the multiplicity ``r`` and the zero-count bound; it picks the
monomial supports ``B(i, E, r)`` of the coefficients ``Q_i`` of the
interpolation polynomial ``Q = Q_0 + Q_1 Z + ... + Q_t Z^t``.  ``B(i, E, r)``
holds the exponents ``K`` in ``Delta(r)`` with ``bound(K * M^i) < n - E`` for
every border monomial ``M``.  The plan is feasible when the supports hold more
unknowns than the ``n * C(m+r, m+1)`` interpolation constraints.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

import numpy as np

from .avcode import Code, MonomialFamily, PointEnsemble
from .errors import (
    InternalNoKernel,
    ListOverflow,
    NoCorrection,
    PlanMismatch,
    RadiusInfeasible,
    ZeroPolynomial,
)
from .gf import Field
from .linalg import kernel_vector
from .mpoly import MPoly, Monomial, ZPoly, binom_mod
from .zbounds import BoundMethod, GridShape, bound_array

Border = tuple[Monomial, ...]


def n_constraints(m: int, r: int) -> int:
    """Linear conditions for one point of F_q^(m+1) to be a zero of multiplicity >= r."""
    return math.comb(m + r, m + 1)


def _border_of(family) -> Border:
    if isinstance(family, MonomialFamily):
        return family.border
    return tuple(tuple(M) for M in family)


# -- support sets -------------------------------------------------------------


def _shifted_bounds(values: np.ndarray, border: Border, i: int) -> np.ndarray | None:
    """``max_M values[K + i*M]`` for every ``K`` whose shifts all stay in the box."""
    reach = [i * max(M[j] for M in border) for j in range(values.ndim)]
    if any(e >= w for e, w in zip(reach, values.shape)):
        return None
    out = None
    for M in border:
        sl = tuple(slice(i * a, i * a + w - e) for a, w, e in zip(M, values.shape, reach))
        part = values[sl]
        out = part if out is None else np.maximum(out, part)
    return out


def _floor_bounds(shape: GridShape, r: int, method) -> tuple[np.ndarray, int]:
    values, scale = bound_array(shape, r, method)
    return values // scale if scale != 1 else values, scale


def _iter_shifted(shape: GridShape, r: int, border: Border, method) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(i, floor bounds over K)`` for i = 0, 1, ... while any K fits."""
    floors, _ = _floor_bounds(shape, r, method)
    constant = not any(any(M) for M in border)
    for i in itertools.count():
        g = _shifted_bounds(floors, border, 0 if constant else i)
        if g is None:
            return
        yield i, g


def b_set(i: int, E: int, r: int, shape, family, method=BoundMethod.RECURSIVE_D) -> list[Monomial]:
    """``B(i, E, r)`` in lex order."""
    shape = GridShape.of(shape)
    if not 0 <= E < shape.n:
        raise ValueError(f"E={E} must lie in [0, n)")
    border = _border_of(family)
    floors, _ = _floor_bounds(shape, r, method)
    g = _shifted_bounds(floors, border, i)
    if g is None:
        return []
    return [tuple(int(x) for x in K) for K in np.argwhere(g < shape.n - E)]


@dataclass(frozen=True)
class RadiusProfile:
    """How many support monomials have each floored bound value, summed over all ``i``.

    ``counts[x]`` is the number of pairs ``(i, K)`` whose bound floors to ``x``;
    ``E`` is feasible iff the pairs with bound ``< n - E`` outnumber the
    constraints.  ``unbounded`` marks families whose border is ``{1}``: every
    ``B(i)`` is then the same nonempty set and any ``E < n`` is feasible.
    """

    n: int
    needed: int
    counts: np.ndarray
    unbounded: bool = False

    def available(self, E: int) -> int:
        if self.unbounded:
            return math.inf if E < self.n else 0
        return int(self.counts[: max(self.n - E, 0)].sum())

    def feasible(self, E: int) -> bool:
        return 0 <= E < self.n and self.available(E) > self.needed


def radius_profile(r: int, shape, family, method=BoundMethod.RECURSIVE_D) -> RadiusProfile:
    shape = GridShape.of(shape)
    border = _border_of(family)
    n = shape.n
    needed = n * n_constraints(shape.m, r)
    if not any(any(M) for M in border):
        return RadiusProfile(n, needed, np.zeros(n + 1, dtype=np.int64), unbounded=True)
    counts = np.zeros(n + 1, dtype=np.int64)
    for _, g in _iter_shifted(shape, r, border, method):
        vals = g[g < n]
        if vals.size:
            counts += np.bincount(vals.ravel(), minlength=n + 1)
    return RadiusProfile(n, needed, counts)


def max_radius(r: int, shape, family, method=BoundMethod.RECURSIVE_D, profile: RadiusProfile | None = None) -> int:
    """Largest ``E`` satisfying the initial condition; binary search over ``[0, n)``.

    Raises :class:`NoCorrection` when even ``E = 0`` is infeasible.
    """
    if profile is None:
        profile = radius_profile(r, shape, family, method)
    if not profile.feasible(0):
        raise NoCorrection(f"no error count is decodable with r={r}")
    lo, hi = 0, profile.n - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if profile.feasible(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


# -- the plan -----------------------------------------------------------------


@dataclass(frozen=True)
class DecoderPlan:
    """Output of the preparation step.

    ``supports[i]`` is ``B(i, E, r)`` for ``i < t`` and the trimmed ``B'(t, E, r)``
    for ``i = t``.  Index 0 is the support of ``Q_0``.
    """

    r: int
    E: int
    t: int
    supports: tuple[tuple[Monomial, ...], ...]
    method: BoundMethod
    shape: GridShape
    border: Border

    @property
    def n_unknowns(self) -> int:
        return sum(len(s) for s in self.supports)

    @property
    def n_equations(self) -> int:
        return self.shape.n * n_constraints(self.shape.m, self.r)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "E": self.E,
            "t": self.t,
            "method": self.method.value,
            "shape": list(self.shape.sizes),
            "border": [list(M) for M in self.border],
            "supports": [[list(K) for K in s] for s in self.supports],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "DecoderPlan":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            r=int(data["r"]),
            E=int(data["E"]),
            t=int(data["t"]),
            supports=tuple(tuple(tuple(K) for K in s) for s in data["supports"]),
            method=BoundMethod.parse(data["method"]),
            shape=GridShape(tuple(data["shape"])),
            border=tuple(tuple(M) for M in data["border"]),
        )


def plan(r: int, E: int, shape, family, method=BoundMethod.RECURSIVE_D) -> DecoderPlan:
    """Find the smallest ``t`` meeting the initial condition and trim ``B(t)`` to ``B'(t)``."""
    shape = GridShape.of(shape)
    method = BoundMethod.parse(method)
    n = shape.n
    if not 0 <= E < n:
        raise RadiusInfeasible(f"E={E} must lie in [0, n={n})")
    border = _border_of(family)
    budget = n * n_constraints(shape.m, r) + 1
    supports: list[tuple[Monomial, ...]] = []
    total = 0
    for i, g in _iter_shifted(shape, r, border, method):
        b = tuple(tuple(int(x) for x in K) for K in np.argwhere(g < n - E))
        if not b:
            break
        if total + len(b) >= budget:
            supports.append(b[: budget - total])
            return DecoderPlan(r, E, i, tuple(supports), method, shape, border)
        supports.append(b)
        total += len(b)
    raise RadiusInfeasible(f"E={E} is not decodable with r={r} ({total} of {budget} unknowns)")


# -- interpolation -------------------------------------------------------------


def _derivative_orders(m: int, r: int) -> list[tuple[tuple[int, ...], int]]:
    out = []
    for total in range(r):
        for k in itertools.product(range(total + 1), repeat=m + 1):
            if sum(k) == total:
                out.append((k[:m], k[m]))
    return out


def interpolation_matrix(dplan: DecoderPlan, ensemble: PointEnsemble, received: Sequence[int]):
    """Constraint matrix and the ``(i, K)`` label of each column."""
    f = ensemble.field
    p = f.p
    m = ensemble.m
    labels = [(i, K) for i, sup in enumerate(dplan.supports) for K in sup]
    Ks = np.array([K for _, K in labels], dtype=np.int64).reshape(len(labels), m)
    zs = np.array([i for i, _ in labels], dtype=np.int64)
    pts = ensemble.points
    rec = np.asarray(received, dtype=np.int64)
    blocks = []
    for k, kz in _derivative_orders(m, dplan.r):
        coef = np.array(
            [
                math.prod(binom_mod(int(a), b, p) for a, b in zip(K, k)) * binom_mod(int(i), kz, p) % p
                for i, K in labels
            ],
            dtype=np.int64,
        )
        live = coef != 0
        block = np.zeros((ensemble.n, len(labels)), dtype=np.int64)
        if live.any():
            val = np.broadcast_to(f.from_int(1) * coef[live], (ensemble.n, int(live.sum()))).copy()
            for j in range(m):
                val = f.vmul(val, f.vpow(pts[:, j, None], (Ks[live, j] - k[j])[None, :]))
            val = f.vmul(val, f.vpow(rec[:, None], (zs[live] - kz)[None, :]))
            block[:, live] = val
        blocks.append(block)
    return np.vstack(blocks), labels


def interpolate(dplan: DecoderPlan, ensemble: PointEnsemble, received: Sequence[int]) -> ZPoly:
    """Nonzero ``Q`` with ``Supp(Q_i)`` inside the plan and multiplicity ``>= r`` at every ``(P_j, r_j)``."""
    if ensemble.shape != dplan.shape:
        raise PlanMismatch(f"plan for grid {dplan.shape.sizes}, ensemble {ensemble.shape.sizes}")
    if len(received) != ensemble.n:
        raise PlanMismatch(f"received word of length {len(received)}, expected {ensemble.n}")
    A, labels = interpolation_matrix(dplan, ensemble, received)
    x = kernel_vector(ensemble.field, A)
    if x is None:
        raise InternalNoKernel(f"{A.shape[0]} equations left no solution among {A.shape[1]} unknowns")
    coeffs = [dict() for _ in range(dplan.t + 1)]
    for (i, K), c in zip(labels, x):
        if c:
            coeffs[i][K] = int(c)
    return ZPoly([MPoly(ensemble.field, ensemble.m, c) for c in coeffs], ensemble.field, ensemble.m)


def interpolation_multiplicities(Q: ZPoly, ensemble: PointEnsemble, received: Sequence[int]) -> list:
    """``mult(Q, (P_j, r_j))`` for every point; used as a check on :func:`interpolate`."""
    Qm = Q.to_mpoly()
    return [Qm.multiplicity_at(tuple(int(a) for a in P) + (int(rj),)) for P, rj in zip(ensemble.points, received)]


# -- root finding ------------------------------------------------------------------


def _slice(Q: ZPoly, a: int) -> ZPoly:
    """Lowest nonzero coefficient of ``Q`` in powers of ``(X_m - a)``, as a ZPoly without ``X_m``."""
    m = Q.nvars
    shifted = Q.to_mpoly().shift((0,) * (m - 1) + (a, 0))
    low = min(mono[m - 1] for mono in shifted.terms)
    t = max(mono[m] for mono in shifted.terms)
    parts = [dict() for _ in range(t + 1)]
    for mono, c in shifted.terms.items():
        if mono[m - 1] == low:
            parts[mono[m]][mono[: m - 1]] = c
    return ZPoly([MPoly(Q.field, m - 1, d) for d in parts], Q.field, m - 1)


def _is_root(Q: ZPoly, F: MPoly) -> bool:
    return Q.substitute_z(F).is_zero()


def _roots(Q: ZPoly, allowed: frozenset, sets: Sequence[Sequence[int]], field: Field, cap: int) -> list[MPoly]:
    m = Q.nvars
    if Q.degree == 0:
        return []
    zero = MPoly.zero(field, m)
    if not allowed:
        return [zero] if _is_root(Q, zero) else []
    if m == 0:
        coeffs = [c.terms.get((), 0) for c in Q.coeffs]
        out = []
        for z in range(field.q):
            acc = 0
            for c in reversed(coeffs):
                acc = field.add(field.mul(acc, z), c)
            if acc == 0:
                out.append(MPoly.constant(field, 0, z))
        return out

    top: dict[Monomial, int] = {}
    for M in allowed:
        top[M[:-1]] = max(top.get(M[:-1], -1), M[-1])
    proj = frozenset(top)
    d = max(top.values())
    nodes = sorted(sets[m - 1])[: d + 1]
    cands = []
    for a in nodes:
        c = _roots(_slice(Q, a), proj, sets, field, cap)
        if not c:
            return []
        cands.append(c)

    lift = lambda P: MPoly(field, m, {K + (0,): v for K, v in P.terms.items()})
    xm = MPoly.var(field, m, m - 1)
    found: list[MPoly] = []

    def newton_value(coefs, a):
        # sum_j coefs[j] * prod_{l<j} (a - nodes[l]), Horner from the top
        acc = coefs[-1]
        for j in range(len(coefs) - 2, -1, -1):
            acc = acc.scale(field.sub(a, nodes[j])) + coefs[j]
        return acc

    def dfs(level, coefs):
        if level == len(nodes):
            F = MPoly.zero(field, m)
            basis = MPoly.constant(field, m, 1)
            for j, c in enumerate(coefs):
                F = F + lift(c) * basis
                basis = basis * (xm - MPoly.constant(field, m, nodes[j]))
            if all(M in allowed for M in F.terms) and _is_root(Q, F) and F not in found:
                found.append(F)
                if len(found) > cap:
                    raise ListOverflow(f"more than {cap} roots")
            return
        a = nodes[level]
        prev = newton_value(coefs, a) if coefs else MPoly.zero(field, m - 1)
        denom = 1
        for b in nodes[:level]:
            denom = field.mul(denom, field.sub(a, b))
        inv = field.inv(denom)
        for G in cands[level]:
            c = (G - prev).scale(inv)
            if any(top.get(K, -1) < level for K in c.terms):
                continue
            dfs(level + 1, coefs + [c])

    dfs(0, [])
    return found


def z_roots(Q: ZPoly, family: MonomialFamily, ensemble: PointEnsemble, cap: int | None = None) -> list[MPoly]:
    """All ``F`` with ``Supp(F)`` inside the family and ``(Z - F) | Q``, in lex order of coefficients."""
    if Q.is_zero():
        raise ZeroPolynomial("Q must be nonzero")
    if cap is None:
        cap = max(Q.degree, 1)
    roots = _roots(Q, frozenset(family.monomials), ensemble.sets, ensemble.field, cap)
    for F in roots:
        ok, _ = Q.divide_linear_z(F)
        if not ok:  # pragma: no cover - substitute_z and division agree
            raise AssertionError("root failed the division check")
    return sorted(roots, key=lambda F: sorted(F.terms.items()))


# -- end to end --------------------------------------------------------------------


@dataclass(frozen=True)
class DecodedWord:
    poly: MPoly
    codeword: np.ndarray = dc_field(repr=False)
    distance: int


@dataclass(frozen=True)
class DecodeOutput:
    words: tuple[DecodedWord, ...]
    Q: ZPoly = dc_field(repr=False)

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def codewords(self) -> list[list[int]]:
        return [w.codeword.tolist() for w in self.words]

    def contains(self, codeword) -> bool:
        cw = np.asarray(codeword)
        return any(np.array_equal(w.codeword, cw) for w in self.words)


def check_plan(code: Code, dplan: DecoderPlan):
    if dplan.shape != code.shape or tuple(dplan.border) != tuple(code.family.border):
        raise PlanMismatch("plan was prepared for a different grid or family border")


def decode(code: Code, dplan: DecoderPlan, received: Sequence[int], cap: int | None = None) -> DecodeOutput:
    """Every codeword within distance ``dplan.E`` of ``received`` (possibly more)."""
    check_plan(code, dplan)
    received = np.asarray([int(x) for x in received], dtype=np.int64)
    if received.shape != (code.n,):
        raise PlanMismatch(f"received word of length {received.size}, expected {code.n}")
    Q = interpolate(dplan, code.ensemble, received)
    words = []
    for F in z_roots(Q, code.family, code.ensemble, cap):
        cw = code.evaluate(F)
        words.append(DecodedWord(F, cw, int(np.count_nonzero(cw != received))))
    words.sort(key=lambda w: (w.distance, w.codeword.tolist()))
    return DecodeOutput(tuple(words), Q)
