from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpcodes.csscode import classical_code, exact_distance
from lpcodes.errors import BudgetExceededError, DimensionError, DomainError
from lpcodes.expander import (
    Graph,
    TannerSpec,
    certify_expanding,
    complete_graph,
    cycle_graph,
    internal_edges,
    tanner_expansion_params,
    local_code_distances,
    local_code_search,
    mixing_check,
    prop3_gamma,
    qc_row_permutation,
    qc_tanner_parity,
    random_regular,
    shift_lift,
    spectrum_lambda,
    tanner_parity,
)
from lpcodes.f2core import BinMatrix, f2_rank
from lpcodes.groupring import block_lift

HAMMING = BinMatrix.from_dense([[1, 0, 1, 0, 1, 0, 1], [0, 1, 1, 0, 0, 1, 1], [0, 0, 0, 1, 1, 1, 1]])


def test_random_regular_small_is_complete():
    assert random_regular(4, 3, seed=0) == complete_graph(4).canonical()


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_regular_degrees(seed):
    G = random_regular(60, 6, seed=seed)
    assert G.simple and G.regular_degree == 6 and G.num_edges == 180
    assert random_regular(60, 6, seed=seed) == G


def test_random_regular_domain():
    with pytest.raises(DomainError):
        random_regular(5, 3)
    with pytest.raises(DomainError):
        random_regular(4, 4)


@pytest.mark.parametrize("n", [5, 8, 11])
def test_cycle_lambda(n):
    rep = spectrum_lambda(cycle_graph(n))
    assert rep.lam == pytest.approx(max(abs(2 * math.cos(2 * math.pi * k / n)) for k in range(1, n)))
    assert rep.eigenvalues[0] == pytest.approx(2)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_spectrum_trace_identities(seed):
    G = random_regular(16, 4, seed=seed)
    ev = spectrum_lambda(G).eigenvalues
    assert ev.sum() == pytest.approx(0, abs=1e-8)
    assert (ev**2).sum() == pytest.approx(2 * G.num_edges)


def test_disconnected_union_doubles_top_eigenvalue():
    C = cycle_graph(6)
    U = Graph(12, np.vstack([C.edges, C.edges + 6]))
    ev = spectrum_lambda(U).eigenvalues
    assert np.sum(np.isclose(ev, 2)) == 2
    # the second copy of the top eigenvalue is not a bounded nontrivial eigenvalue
    assert spectrum_lambda(U).lam == pytest.approx(2)


def test_mixing_single_vertex_and_bad_input():
    G = random_regular(20, 4, seed=3)
    ok, slack = mixing_check(G, [0])
    assert ok and slack >= 0
    with pytest.raises(DomainError):
        mixing_check(G, list(range(20)), alpha=0.5)
    with pytest.raises(DomainError):
        mixing_check(Graph(3, [[0, 1]]), [0])


def test_internal_edges_against_adjacency():
    G = random_regular(12, 3, seed=5)
    A = G.adjacency()
    for S in itertools.combinations(range(12), 4):
        idx = np.array(S)
        assert internal_edges(G, S) == A[np.ix_(idx, idx)].sum() // 2


def test_lift_trivial_and_single_edge():
    G = random_regular(8, 3, seed=1)
    L, lift = shift_lift(G, 1)
    assert L == G and lift.num_vertices == 8
    E = Graph(2, [[0, 1]])
    L, _ = shift_lift(E, 3, shifts=[1])
    # u_i is 0..2 and v_i is 3..5
    assert sorted(map(tuple, L.edges.tolist())) == [(0, 4), (1, 5), (2, 3)]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_lift_projection_is_homomorphism(seed, ell):
    G = random_regular(10, 4, seed=seed)
    L, lift = shift_lift(G, ell, seed=seed)
    assert L.regular_degree == 4 and L.num_edges == ell * G.num_edges
    base = {tuple(sorted(e)) for e in G.edges.tolist()}
    for u, v in L.edges.tolist():
        assert tuple(sorted((lift.project(u), lift.project(v)))) in base


def test_lift_rejects_bad_shifts():
    G = cycle_graph(4)
    with pytest.raises(DimensionError):
        shift_lift(G, 3, shifts=[0, 1])
    with pytest.raises(DomainError):
        shift_lift(G, 3, shifts=[0, 1, 2, 3])


def test_tanner_single_parity_check():
    G = random_regular(10, 4, seed=2)
    H = tanner_parity(TannerSpec(G, BinMatrix.from_dense([[1, 1, 1, 1]])))
    assert H.shape == (10, 20)
    # every edge sits in exactly two vertex checks
    assert np.all(H.to_dense().sum(axis=0) == 2)
    assert np.all(H.row_weights() == 4)


def test_tanner_shape_and_column_weight():
    G = random_regular(14, 7, seed=4)
    H = tanner_parity(TannerSpec(G, HAMMING))
    assert H.shape == (42, 49)
    assert H.to_dense().sum(axis=0).max() <= 2 * HAMMING.to_dense().sum(axis=0).max()
    with pytest.raises(DimensionError):
        TannerSpec(random_regular(10, 4), HAMMING)


@pytest.mark.parametrize("H0,ell", [(BinMatrix.from_dense([[1, 1, 1]]), 5), (BinMatrix.from_dense([[1, 1, 0, 1], [0, 1, 1, 1]]), 4)])
def test_qc_tanner_matches_lift(H0, ell):
    w = H0.cols
    G = random_regular(8, w, seed=ell)
    L, lift = shift_lift(G, ell, seed=7)
    A = qc_tanner_parity(G, lift, H0)
    direct = tanner_parity(TannerSpec(L, H0)).to_dense()
    perm = qc_row_permutation(G.n, H0.rows, ell)
    assert np.array_equal(block_lift(A).to_dense()[perm], direct)


def test_certify_identity_and_zero():
    cert = certify_expanding(BinMatrix.identity(10), alpha=0.5, beta=1)
    assert cert.holds and cert.verified_up_to == 5 and cert.min_ratio == 1
    zero = BinMatrix.from_dense(np.zeros((3, 6), dtype=np.uint8))
    cert = certify_expanding(zero, alpha=0.5, beta=0.1)
    assert not cert.holds and int(cert.counterexample.sum()) == 1
    with pytest.raises(BudgetExceededError) as info:
        certify_expanding(BinMatrix.identity(40), alpha=0.5, beta=1, budget=1000)
    assert info.value.required > 1000


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_certificate_implies_distance(seed):
    rng = np.random.default_rng(seed)
    H = BinMatrix.from_dense(rng.integers(0, 2, size=(8, 12), dtype=np.uint8))
    alpha = 0.25
    cert = certify_expanding(H, alpha, beta=1e-9)
    if cert.holds:
        assert exact_distance(classical_code(H), "Z") > alpha * H.cols
    else:
        assert not np.any(H @ cert.counterexample)


def test_local_code_distances_examples():
    assert local_code_distances(BinMatrix.from_dense([[1, 1, 1, 1]])) == (2, 4)
    assert local_code_distances(HAMMING) == (3, 4)


def test_local_code_search():
    H0 = local_code_search(7, 3, 3 / 7, seed=0)
    d, d_dual = local_code_distances(H0)
    assert H0.shape == (3, 7) and f2_rank(H0) == 3
    assert min(d, d_dual) >= 3
    with pytest.raises(DomainError):
        local_code_search(4, 4, 0.5)


def test_prop3_gamma():
    assert prop3_gamma(0.1, 1, 2) == pytest.approx(0.0125)
    vals = [prop3_gamma(0.1, 1, w) for w in range(1, 10)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    with pytest.raises(DomainError):
        prop3_gamma(0, 1, 2)


def test_expansion_premise_fails_on_small_instance():
    G = random_regular(12, 6, seed=0)
    lam = spectrum_lambda(G).lam
    # delta w = 2 here; searches over such graphs never found lambda below 2
    assert lam >= 2 - 1e-9
    p = tanner_expansion_params(1 / 3, 6, lam, 2, 2)
    assert not p.premise_holds and p.reasons
    q = tanner_expansion_params(0.5, 6, 1.0, 3, 3, alphas=(0.01,))
    assert q.premise_holds and q.beta_at[0.01] > 0
