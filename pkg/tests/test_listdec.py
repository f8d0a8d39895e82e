import itertools
import json
import math

import numpy as np
import pytest

from avcodes.avcode import code_new, family_build
from avcodes.errors import ListOverflow, NoCorrection, PlanMismatch, RadiusInfeasible, ZeroPolynomial
from avcodes.gf import field_new
from avcodes.listdec import (
    DecoderPlan,
    b_set,
    decode,
    interpolate,
    interpolation_matrix,
    interpolation_multiplicities,
    max_radius,
    n_constraints,
    plan,
    radius_profile,
    z_roots,
)
from avcodes.mpoly import MPoly, ZPoly, parse_poly
from avcodes.zbounds import BoundMethod, delta_set, dzero

F3, F4, F5, F8 = field_new(3), field_new(2, 2), field_new(5), field_new(2, 3)
D, C, S = BoundMethod.RECURSIVE_D, BoundMethod.CLOSED_FORM_C, BoundMethod.SCHWARTZ_ZIPPEL

# shapes with n <= 64 and a few families on each
SMALL_CASES = [
    ((2, 2), "total:1"),
    ((3, 3), "total:1"),
    ((4, 4), "total:2"),
    ((5, 5), "total:1"),
    ((8, 4), "weighted:1,2:1"),
    ((8, 8), "box:2,3"),
    ((4, 4, 4), "total:1"),
]


def b_oracle(i, E, r, shape, fam, method):
    n = math.prod(shape)
    return [K for K in delta_set(r, shape)
            if all(dzero(tuple(k + i * m for k, m in zip(K, M)), r, shape, method) < n - E for M in fam.border)]


def within(code, received, E):
    """Every codeword within distance E, by scanning all messages."""
    out = []
    for msg in itertools.product(range(code.field.q), repeat=code.k):
        cw = code.encode(msg)
        if np.count_nonzero(cw != received) <= E:
            out.append(cw.tolist())
    return out


def corrupt(code, rng, E):
    f = code.field
    cw = code.encode(rng.integers(0, f.q, size=code.k))
    rec = cw.copy()
    pos = rng.choice(code.n, size=E, replace=False)
    rec[pos] = f.vadd(rec[pos], rng.integers(1, f.q, size=E))
    return cw, rec


def test_n_constraints():
    assert n_constraints(2, 2) == 4
    assert n_constraints(1, 1) == 1
    assert n_constraints(2, 4) == 20


def test_b_set_constant_family():
    fam = family_build({"type": "explicit", "monomials": [[0, 0]]}, (3, 3))
    ref = b_set(0, 2, 2, (3, 3), fam)
    assert all(b_set(i, 2, 2, (3, 3), fam) == ref for i in range(5))
    assert ref == [K for K in delta_set(2, (3, 3)) if dzero(K, 2, (3, 3)) < 9 - 2]
    assert b_set(3, 3, 1, (2, 2), fam) == [(0, 0)]


def test_b_set_small_hand_case():
    fam = family_build("total:1", (2, 2))
    got = b_set(1, 1, 2, (2, 2), fam)
    assert got == b_oracle(1, 1, 2, (2, 2), fam, D)
    # D((1,2)) = D((0,3)) = 2 < 3 keeps (0,2); (1,1) shifts to (2,1) where D = 3
    assert got == [(0, 0), (0, 1), (0, 2), (1, 0)]


@pytest.mark.parametrize("shape,spec", SMALL_CASES)
@pytest.mark.parametrize("method", [D, S])
def test_b_set_against_bruteforce(shape, spec, method):
    fam = family_build(spec, shape)
    n = math.prod(shape)
    for r in (1, 2, 3):
        for E in sorted({0, n // 4, n // 2, n - 1}):
            for i in range(4):
                assert b_set(i, E, r, shape, fam, method) == b_oracle(i, E, r, shape, fam, method)


@pytest.mark.parametrize("shape,spec", [c for c in SMALL_CASES if len(c[0]) == 2])
def test_b_set_closed_form_against_bruteforce(shape, spec):
    fam = family_build(spec, shape)
    n = math.prod(shape)
    for r in (2, 3):
        for E in (0, n // 3):
            for i in range(3):
                assert b_set(i, E, r, shape, fam, C) == b_oracle(i, E, r, shape, fam, C)


@pytest.mark.parametrize("shape,spec", SMALL_CASES)
def test_plan_identity_nesting_and_radius_scan(shape, spec):
    fam = family_build(spec, shape)
    n = math.prod(shape)
    for method in (D, S):
        for r in (1, 2, 3):
            feasible = []
            for E in range(n):
                try:
                    p = plan(r, E, shape, fam, method)
                except RadiusInfeasible:
                    feasible.append(False)
                    continue
                feasible.append(True)
                # supports counted from Q_0 on
                assert p.n_unknowns == n * n_constraints(len(shape), r) + 1
                full = [b_set(i, E, r, shape, fam, method) for i in range(p.t + 1)]
                assert list(p.supports[: p.t]) == [tuple(b) for b in full[: p.t]]
                assert p.supports[p.t] == tuple(full[p.t][: len(p.supports[p.t])])
                assert sum(len(b) for b in full[: p.t]) <= n * n_constraints(len(shape), r)
                for i in range(p.t + 3):
                    assert set(b_set(i + 1, E, r, shape, fam, method)) <= set(b_set(i, E, r, shape, fam, method))
            # feasibility is monotone, and binary search finds the last feasible E
            assert feasible == sorted(feasible, reverse=True)
            if feasible[0]:
                assert max_radius(r, shape, fam, method) == feasible.count(True) - 1
            else:
                with pytest.raises(NoCorrection):
                    max_radius(r, shape, fam, method)


def test_plan_rejects_bad_E():
    fam = family_build("total:1", (5, 5))
    with pytest.raises(RadiusInfeasible):
        plan(2, 25, (5, 5), fam)
    E = max_radius(2, (5, 5), fam)
    with pytest.raises(RadiusInfeasible):
        plan(2, E + 1, (5, 5), fam)


def test_plan_json_round_trip():
    fam = family_build("total:1", (5, 5))
    p = plan(2, 8, (5, 5), fam)
    q = DecoderPlan.from_json(json.loads(p.dumps()))
    assert q == p


def test_profile_counts_match_plans():
    fam = family_build("weighted:1,2:1", (8, 4))
    prof = radius_profile(2, (8, 4), fam)
    for E in range(32):
        total = sum(len(b_set(i, E, 2, (8, 4), fam)) for i in range(40))
        assert prof.available(E) == total


def test_constant_family_radius_is_unbounded():
    fam = family_build({"type": "explicit", "monomials": [[0, 0]]}, (3, 3))
    assert max_radius(2, (3, 3), fam) == 8
    p = plan(1, 8, (3, 3), fam)
    assert p.n_unknowns == 10


def test_interpolate_constant_received():
    c = code_new(F5, ["full", "full"], {"type": "explicit", "monomials": [[0, 0]]})
    p = plan(1, 0, c.shape, c.family)
    rec = c.encode([3])
    Q = interpolate(p, c.ensemble, rec)
    assert not Q.is_zero()
    Qm = Q.to_mpoly()
    assert all(Qm.evaluate(tuple(P) + (3,)) == 0 for P in c.ensemble.points)


def test_interpolation_witness_random():
    c = code_new(F5, ["full", "full"], "total:1")
    E = max_radius(2, c.shape, c.family)
    p = plan(2, E, c.shape, c.family)
    rng = np.random.default_rng(4)
    for _ in range(5):
        rec = rng.integers(0, 5, size=c.n)
        Q = interpolate(p, c.ensemble, rec)
        assert not Q.is_zero()
        assert min(interpolation_multiplicities(Q, c.ensemble, rec)) >= 2
        A, labels = interpolation_matrix(p, c.ensemble, rec)
        assert A.shape == (c.n * n_constraints(2, 2), p.n_unknowns)
        for i, coeff in enumerate(Q.coeffs):
            assert set(coeff.terms) <= set(p.supports[i])


def test_interpolation_at_codeword_has_the_root():
    c = code_new(F8, ["full", [0, 1, 2, 3]], "weighted:1,2:1")
    p = plan(2, 3, c.shape, c.family)
    msg = [5, 1]
    F = c.message_poly(msg)
    Q = interpolate(p, c.ensemble, c.encode(msg))
    assert Q.substitute_z(F).is_zero()


def test_interpolate_plan_mismatch():
    c = code_new(F5, ["full", "full"], "total:1")
    p = plan(2, 2, (4, 4), family_build("total:1", (4, 4)))
    with pytest.raises(PlanMismatch):
        interpolate(p, c.ensemble, [0] * 25)
    p = plan(2, 2, c.shape, c.family)
    with pytest.raises(PlanMismatch):
        interpolate(p, c.ensemble, [0] * 24)
    other = code_new(F5, ["full", "full"], "total:2")
    with pytest.raises(PlanMismatch):
        decode(other, p, [0] * 25)


def test_z_roots_examples():
    c = code_new(F5, ["full", "full"], "total:1")
    X1 = MPoly.var(F5, 2, 0)
    one = MPoly.constant(F5, 2, 1)
    Q = ZPoly.linear(X1) * ZPoly.linear(one)
    assert sorted(map(repr, z_roots(Q, c.family, c.ensemble))) == sorted([repr(X1), repr(one)])
    box = code_new(F5, ["full", "full"], "box:3,3")
    assert z_roots(parse_poly("Z^2 - X1", F5, 2, with_z=True), box.family, box.ensemble) == []
    with pytest.raises(ZeroPolynomial):
        z_roots(ZPoly([MPoly.zero(F5, 2)]), c.family, c.ensemble)


@pytest.mark.parametrize("f,sets,spec", [
    (F5, ["full", "full"], "total:2"),
    (F8, ["full", [0, 1, 2, 3]], "weighted:1,2:3"),
    (F3, ["full", "full", "full"], "total:1"),
])
def test_z_roots_random_pairs(f, sets, spec):
    c = code_new(f, sets, spec)
    rng = np.random.default_rng(1)
    for _ in range(5):
        F = c.message_poly(rng.integers(0, f.q, size=c.k))
        G = F + MPoly.constant(f, c.ensemble.m, 1)
        extra = c.message_poly(rng.integers(0, f.q, size=c.k)) * MPoly.var(f, c.ensemble.m, 0)
        Q = ZPoly.linear(F) * ZPoly.linear(G) * ZPoly([extra, MPoly.constant(f, c.ensemble.m, 1)])
        roots = z_roots(Q, c.family, c.ensemble)
        assert F in roots and G in roots
        for R in roots:
            assert set(R.terms) <= set(c.family.monomials)
            assert Q.divide_linear_z(R)[0]


def test_decode_exact_codeword_and_cap():
    c = code_new(F5, ["full", "full"], "total:1")
    p = plan(2, max_radius(2, c.shape, c.family), c.shape, c.family)
    cw = c.encode([1, 2, 3])
    out = decode(c, p, cw)
    assert out.words[0].distance == 0 and np.array_equal(out.words[0].codeword, cw)
    with pytest.raises(ListOverflow):
        decode(c, p, cw, cap=0)


@pytest.mark.parametrize("f,sets,spec,r", [
    (F5, ["full", "full"], "total:1", 2),
    (F4, ["full", "full"], "total:1", 2),
    (F8, ["full", [0, 1, 2, 3]], "weighted:1,2:1", 2),
    (F3, ["full", "full", "full"], "total:1", 2),
    (F5, ["full", "full"], "total:1", 3),
])
def test_decode_contains_every_close_codeword(f, sets, spec, r):
    c = code_new(f, sets, spec)
    assert f.q**c.k <= 15625
    E = max_radius(r, c.shape, c.family)
    p = plan(r, E, c.shape, c.family)
    rng = np.random.default_rng(123)
    for trial in range(25):
        # half the trials use uniformly random words
        rec = corrupt(c, rng, E)[1] if trial % 2 == 0 else rng.integers(0, f.q, size=c.n)
        out = decode(c, p, rec)
        listed = out.codewords()
        assert all(cw in listed for cw in within(c, rec, E))
        assert all(w.distance == np.count_nonzero(w.codeword != rec) for w in out)


def test_decode_can_return_empty_list():
    c = code_new(F5, ["full", "full"], "total:1")
    E = max_radius(2, c.shape, c.family)
    p = plan(2, E, c.shape, c.family)
    rng = np.random.default_rng(0)
    empties = 0
    for _ in range(40):
        rec = rng.integers(0, 5, size=c.n)
        out = decode(c, p, rec)
        if not within(c, rec, E) and len(out) == 0:
            empties += 1
    assert empties > 0


def test_decode_beyond_half_distance():
    c = code_new(F8, ["full", [0, 1, 2, 3]], "weighted:1,2:1")
    E = max_radius(2, c.shape, c.family)
    assert E > (c.dmin_bound() - 1) // 2
    p = plan(2, E, c.shape, c.family)
    rng = np.random.default_rng(5)
    for _ in range(20):
        cw, rec = corrupt(c, rng, E)
        assert decode(c, p, rec).contains(cw)
