"""Multilinear map predicates and n-Lie derivation space computation."""

import random

import pytest

import gmalg as G

from helpers import GF7, Q
from test_algebra_core import dual_numbers


def gma(kind, field, **kw):
    return G.assemble(G.generate_builtin(kind, field, **kw), validate=False)


def trace_power_map(g, n):
    """(x_1, ..., x_n) -> prod tr-like(x_k) . I, a centrally valued map.

    Uses the quotient coordinate that is 1 on diagonal basis elements, so it
    kills every commutator class.
    """
    alg = g.algebra
    f = alg.field
    span = G.commutator_span(alg)

    def lam(i):
        v = f.vec_zero(alg.dim)
        v[i] = f.one
        res = span.reduce(v)
        return sum(res[c] for c in span.free_columns)

    unit = alg.unit

    def fn(key):
        w = f.one
        for i in key:
            w = f.mul(w, lam(i))
            if not w:
                break
        return [f.mul(w, c) for c in unit]

    return G.MultilinearMap.from_basis_function(alg, n, fn)


def test_zero_map_evaluates_to_zero():
    g = gma("upper_triangular", Q, s=1, t=1)
    zero = G.MultilinearMap.zero(Q, 3, 3)
    assert zero.evaluate([g.e, g.f, g.e]).is_zero


def test_extremal_evaluation_on_idempotents():
    g = gma("upper_triangular", Q, s=1, t=1)
    kappa = G.build_extremal(g, g.embed_m([1]), 3)
    assert kappa.evaluate([g.e] * 3).coords == g.embed_m([1]).coords


def test_evaluation_multilinear_in_each_slot():
    rng = random.Random(31)
    g = gma("full_matrix", GF7, r=2)
    kappa = trace_power_map(g, 3)
    for _ in range(10):
        x, x2, y, z = (g.algebra.element([rng.randrange(7) for _ in range(4)])
                       for _ in range(4))
        left = kappa.evaluate([x + x2, y, z])
        split = kappa.evaluate([x, y, z]) + kappa.evaluate([x2, y, z])
        assert left.coords == split.coords


def test_is_n_lie_derivation_accepts_extremal():
    g = gma("upper_triangular", Q, s=1, t=1)
    kappa = G.build_extremal(g, g.embed_m([1]), 3)
    assert G.is_n_lie_derivation(g, kappa).ok


def test_is_n_lie_derivation_accepts_trace_cube():
    g = gma("full_matrix", GF7, r=3)
    assert G.is_n_lie_derivation(g, trace_power_map(g, 3)).ok


def test_is_n_lie_derivation_rejects_triple_product():
    g = gma("full_matrix", Q, r=2)
    alg = g.algebra

    def fn(key):
        i, j, k = key
        a = alg.mul_coords(list(alg.basis_element(i).coords),
                           list(alg.basis_element(j).coords))
        return alg.mul_coords(a, list(alg.basis_element(k).coords))

    triple = G.MultilinearMap.from_basis_function(alg, 3, fn)
    res = G.is_n_lie_derivation(g, triple)
    assert not res.ok
    assert res.witness is not None
    assert 0 <= res.witness.slot < 3


def test_is_n_derivation_extremal_true_trace_false():
    g = gma("upper_triangular", Q, s=1, t=1)
    kappa = G.build_extremal(g, g.embed_m([1]), 3)
    assert G.is_n_derivation(g, kappa).ok
    m3 = gma("full_matrix", Q, r=3)
    res = G.is_n_derivation(m3, trace_power_map(m3, 3))
    assert not res.ok
    zero = G.MultilinearMap.zero(Q, 3, m3.dim)
    assert G.is_n_derivation(m3, zero).ok


def test_is_permuting():
    sym = G.MultilinearMap.from_entries(
        Q, 2, 2, {(0, 1): [1, 0], (1, 0): [1, 0]})
    assert G.is_permuting(sym)
    asym = G.MultilinearMap.from_entries(Q, 2, 2, {(0, 1): [1, 0]})
    assert not G.is_permuting(asym)
    arity1 = G.MultilinearMap.from_entries(Q, 1, 2, {(0,): [1, 1]})
    assert G.is_permuting(arity1)


def test_extremal_on_t2_is_permuting_on_idempotent_slots():
    g = gma("upper_triangular", Q, s=1, t=1)
    kappa = G.build_extremal(g, g.embed_m([1]), 3)
    e, f = g.e, g.f
    assert kappa.evaluate([e, f, e]).coords == kappa.evaluate([f, e, e]).coords


def test_is_centrally_valued():
    m3 = gma("full_matrix", Q, r=3)
    assert G.is_centrally_valued(m3, trace_power_map(m3, 3)).ok
    t2 = gma("upper_triangular", Q, s=1, t=1)
    kappa = G.build_extremal(t2, t2.embed_m([1]), 3)
    res = G.is_centrally_valued(t2, kappa)
    assert not res.ok and res.witness is not None
    assert G.is_centrally_valued(t2, G.MultilinearMap.zero(Q, 3, 3)).ok


def test_swap_identity_on_bilie_space_t2():
    g = gma("upper_triangular", Q, s=1, t=1)
    for mmap in G.n_lie_derivation_space(g, 2):
        assert G.swap_identity_check(g, mmap).ok
    zero = G.MultilinearMap.zero(Q, 2, 3)
    assert G.swap_identity_check(g, zero).ok


def test_swap_identity_holds_for_inner_biderivation():
    """(x, y) -> [x, y] is a Lie biderivation and must satisfy the identity.

    This pins the bracket arrangement: the commonly misquoted variant with
    [x, v] in the third term fails on M2 for exactly this map.
    """
    g = gma("full_matrix", Q, r=2)
    alg = g.algebra

    def fn(key):
        i, j = key
        return alg.bracket_coords(list(alg.basis_element(i).coords),
                                  list(alg.basis_element(j).coords))

    inner = G.MultilinearMap.from_basis_function(alg, 2, fn)
    assert G.is_n_lie_derivation(g, inner).ok
    assert G.swap_identity_check(g, inner).ok


def test_swap_identity_rejects_random_tensor():
    g = gma("full_matrix", Q, r=2)
    bad = G.MultilinearMap.from_entries(Q, 2, 4, {(1, 2): [0, 1, 0, 0]})
    res = G.swap_identity_check(g, bad)
    assert not res.ok
    assert len(res.witness) == 4


def test_swap_identity_requires_arity_2():
    g = gma("upper_triangular", Q, s=1, t=1)
    with pytest.raises(G.DimensionMismatchError):
        G.swap_identity_check(g, G.MultilinearMap.zero(Q, 3, 3))


def test_slot_restriction_matches_direct_t2():
    g = gma("upper_triangular", Q, s=1, t=1)
    for n in (2, 3):
        slot = G.n_lie_derivation_space(g, n)
        direct = G.n_lie_derivation_space_direct(g, n)
        assert (G.maps_span(Q, n, 3, slot)
                == G.maps_span(Q, n, 3, direct))


def test_slot_restriction_matches_direct_m2_gf7():
    g = gma("full_matrix", GF7, r=2)
    for n in (2, 3):
        slot = G.n_lie_derivation_space(g, n)
        direct = G.n_lie_derivation_space_direct(g, n)
        assert (G.maps_span(GF7, n, 4, slot)
                == G.maps_span(GF7, n, 4, direct))


def test_space_elements_pass_predicate_dim7():
    g = gma("upper_triangular", Q, s=2, t=1)
    space = G.n_lie_derivation_space(g, 3)
    assert space
    for mmap in space:
        assert G.is_n_lie_derivation(g, mmap).ok


def test_commutative_algebra_space_is_everything():
    alg = dual_numbers(Q)
    space = G.n_lie_derivation_space(alg, 2)
    assert len(space) == 2 ** 3
    for mmap in space:
        assert G.is_n_lie_derivation(alg, mmap).ok


def test_n_derivation_implies_n_lie_derivation():
    g = gma("upper_triangular", Q, s=1, t=1)
    kappa = G.build_extremal(g, g.embed_m([1]), 2)
    assert G.is_n_derivation(g, kappa).ok
    assert G.is_n_lie_derivation(g, kappa).ok


def test_budget_guard_on_predicates(monkeypatch):
    monkeypatch.setenv("GMALG_BUDGET", "10")
    g = gma("full_matrix", GF7, r=3)
    with pytest.raises(G.BudgetExceededError):
        G.is_n_lie_derivation(g, G.MultilinearMap.zero(GF7, 3, 9))
    with pytest.raises(G.BudgetExceededError):
        G.n_lie_derivation_space(g, 3)


def test_space_arity_bounds():
    g = gma("upper_triangular", Q, s=1, t=1)
    with pytest.raises(G.DimensionMismatchError):
        G.n_lie_derivation_space(g, 1)
    with pytest.raises(G.DimensionMismatchError):
        G.n_lie_derivation_space(g, 5)


def test_arity_4_space_t2():
    g = gma("upper_triangular", Q, s=1, t=1)
    space = G.n_lie_derivation_space(g, 4)
    assert space
    for mmap in space[:3]:
        assert G.is_n_lie_derivation(g, mmap).ok


def test_evaluate_guards():
    g = gma("upper_triangular", Q, s=1, t=1)
    mm = G.MultilinearMap.zero(Q, 2, 3)
    with pytest.raises(G.DimensionMismatchError):
        mm.evaluate([g.e])
    other = gma("full_matrix", Q, r=2)
    with pytest.raises(G.FieldMismatchError):
        mm.evaluate([g.e, other.e])
