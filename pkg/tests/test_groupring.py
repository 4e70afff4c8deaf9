from __future__ import annotations

import numpy as np
import pytest
from conftest import random_alg_matrix
from hypothesis import given, settings
from hypothesis import strategies as st

from lpcodes import poly2
from lpcodes.errors import DimensionError, DomainError, GroupMismatchError, ParseError, UnsupportedError
from lpcodes.f2core import BinMatrix
from lpcodes.groupring import (
    AlgElem,
    AlgMatrix,
    GroupSpec,
    alg_matmul,
    antipode,
    block_lift,
    conj_transpose,
    crt_decompose,
    eval_matrix,
    factor_cyclic,
    format_matrix,
    parse_matrix,
    reduce_mod,
    w_limit,
    weight_matrix,
)

EXAMPLE = """\
group: C3
1, 0, 1+x^2
1+x, 1+x+x^2, x^2
"""

EXAMPLE_LIFT = [
    [1, 0, 0, 0, 0, 0, 1, 1, 0],
    [0, 1, 0, 0, 0, 0, 0, 1, 1],
    [0, 0, 1, 0, 0, 0, 1, 0, 1],
    [1, 0, 1, 1, 1, 1, 0, 1, 0],
    [1, 1, 0, 1, 1, 1, 0, 0, 1],
    [0, 1, 1, 1, 1, 1, 1, 0, 0],
]

groups = st.sampled_from([GroupSpec((1,)), GroupSpec((5,)), GroupSpec((7,)), GroupSpec((2, 3)), GroupSpec((3, 3))])


def elems(G: GroupSpec):
    return st.lists(st.integers(0, 1), min_size=G.order, max_size=G.order).map(lambda c: AlgElem(G, c))


def test_example_block_lift_and_weights():
    A = parse_matrix(EXAMPLE)
    assert block_lift(A).to_dense().tolist() == EXAMPLE_LIFT
    assert weight_matrix(A).tolist() == [[1, 0, 2], [2, 3, 1]]
    assert w_limit(A) == 6


def test_shift_is_cyclic_permutation():
    G = GroupSpec.cyclic(4)
    P = block_lift(AlgElem.monomial(G, 1)).to_dense()
    # B(x) maps e_j to e_{j+1}
    assert np.array_equal(P, np.roll(np.eye(4, dtype=np.uint8), 1, axis=0))


@given(groups.flatmap(lambda G: st.tuples(elems(G), elems(G), elems(G))))
def test_ring_axioms_and_homomorphism(abc):
    a, b, c = abc
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    Ba, Bb = block_lift(a), block_lift(b)
    assert block_lift(a * b) == Ba @ Bb
    assert block_lift(antipode(a)) == Ba.T
    assert antipode(a * b) == antipode(a) * antipode(b)


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.sampled_from([3, 5, 7]))
def test_matrix_lift_homomorphism(seed, ell):
    rng = np.random.default_rng(seed)
    A = random_alg_matrix(rng, ell, 2, 3, 0.4)
    B = random_alg_matrix(rng, ell, 3, 2, 0.4)
    assert block_lift(alg_matmul(A, B)) == block_lift(A) @ block_lift(B)
    assert block_lift(conj_transpose(A)) == block_lift(A).T
    assert conj_transpose(conj_transpose(A)) == A


def test_multicyclic_indexing():
    G = GroupSpec((2, 3))
    assert G.order == 6 and str(G) == "C2xC3"
    idx = np.arange(6)
    assert np.array_equal(G.index(G.digits(idx)), idx)
    assert np.array_equal(G.compose(idx, G.inverse(idx)), np.zeros(6))
    x1x2 = AlgElem.monomial(G, (1, 1))
    assert x1x2.support().tolist() == [4]


def test_errors():
    with pytest.raises(DimensionError):
        AlgElem(GroupSpec.cyclic(3), [1, 0])
    with pytest.raises(GroupMismatchError):
        AlgElem.one(GroupSpec.cyclic(3)) * AlgElem.one(GroupSpec.cyclic(5))
    with pytest.raises(DomainError):
        GroupSpec((0,))
    with pytest.raises(UnsupportedError):
        factor_cyclic(4)
    with pytest.raises(UnsupportedError):
        crt_decompose(AlgMatrix.zeros(GroupSpec((3, 3)), 1, 1))
    with pytest.raises(DomainError):
        reduce_mod(AlgElem.one(GroupSpec.cyclic(7)), 0b111)  # 1 + x + x^2 does not divide x^7 - 1


@pytest.mark.parametrize(
    "ell,degrees",
    [(1, (1,)), (3, (1, 2)), (7, (1, 3, 3)), (15, (1, 2, 4, 4, 4)), (31, (1,) + (5,) * 6), (63, None), (255, None)],
)
def test_factor_cyclic(ell, degrees):
    fac = factor_cyclic(ell)
    assert fac.product() == (1 << ell) | 1
    assert all(poly2.is_irreducible(f) for f in fac.factors)
    assert len(set(fac.factors)) == len(fac.factors)
    if degrees is not None:
        assert fac.degrees == degrees
    assert sum(fac.degrees) == ell


def test_factor_cyclic_seven():
    assert [poly2.to_str(f) for f in factor_cyclic(7).factors] == ["1+x", "1+x+x^3", "1+x^2+x^3"]


def test_eval_matrix_is_ring_map():
    rng = np.random.default_rng(0)
    A = random_alg_matrix(rng, 7, 2, 2, 0.5)
    B = random_alg_matrix(rng, 7, 2, 2, 0.5)
    for b in factor_cyclic(7).factors:
        fa, fb, fab = eval_matrix(A, b), eval_matrix(B, b), eval_matrix(alg_matmul(A, B), b)
        fld = fa.field
        for i in range(2):
            for j in range(2):
                s = 0
                for t in range(2):
                    s ^= fld.mul(fa.entries[i][t], fb.entries[t][j])
                assert s == fab.entries[i][j]


def test_text_roundtrip():
    A = parse_matrix(EXAMPLE)
    assert parse_matrix(format_matrix(A)) == A
    G = GroupSpec((2, 3))
    B = AlgMatrix.from_entries(G, [[AlgElem.monomial(G, (1, 2)), AlgElem.one(G)]])
    text = format_matrix(B)
    assert "x1*x2^2" in text
    assert parse_matrix(text) == B


def test_parse_comments_whitespace_and_reduction():
    A = parse_matrix("# comment\n\ngroup: C3\n  x^4 ,  1 + x + x \n")
    assert A[0, 0] == AlgElem.monomial(GroupSpec.cyclic(3), 1)
    assert A[0, 1] == AlgElem.one(GroupSpec.cyclic(3))


@pytest.mark.parametrize(
    "text,token",
    [("group: C3\nx^, 1\n", "x^"), ("group: C3\ny, 1\n", "y"), ("group: D4\n1\n", "D4"), ("1, 1\n", None)],
)
def test_parse_errors(text, token):
    with pytest.raises(ParseError) as info:
        parse_matrix(text)
    assert info.value.line >= 1
    if token is not None:
        assert info.value.token == token


def test_parse_ragged_rows():
    with pytest.raises(ParseError) as info:
        parse_matrix("group: C3\n1, x\n1\n")
    assert info.value.line == 3


def test_binary_view_is_trivial_group():
    B = BinMatrix.from_dense([[1, 0, 1]])
    A = AlgMatrix.from_binary(B.to_dense())
    assert block_lift(A) == B
