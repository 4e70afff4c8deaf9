from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lpcodes import poly2
from lpcodes.errors import DimensionError, DomainError, ParseError
from lpcodes.f2core import (
    BinMatrix,
    Echelon,
    FieldSpec,
    GfMatrix,
    f2_in_row_space,
    f2_kernel_basis,
    f2_rank,
    f2_solve,
    gf_rank,
    hstack,
    pack_rows,
    unpack_rows,
    vstack,
)


def binary_arrays(max_rows=12, max_cols=140):
    shapes = st.tuples(st.integers(0, max_rows), st.integers(0, max_cols))
    return shapes.flatmap(lambda s: arrays(np.uint8, s, elements=st.integers(0, 1)))


def _rank_oracle(M: np.ndarray) -> int:
    # plain elimination on a dense copy
    M = M.copy() & 1
    r = 0
    for c in range(M.shape[1]):
        piv = [i for i in range(r, M.shape[0]) if M[i, c]]
        if not piv:
            continue
        M[[r, piv[0]]] = M[[piv[0], r]]
        for i in range(M.shape[0]):
            if i != r and M[i, c]:
                M[i] ^= M[r]
        r += 1
    return r


@given(binary_arrays())
def test_pack_roundtrip(dense):
    assert np.array_equal(unpack_rows(pack_rows(dense), dense.shape[1]), dense)
    M = BinMatrix.from_dense(dense)
    assert np.array_equal(M.to_dense(), dense)
    assert BinMatrix.from_int_rows(M.to_int_rows(), M.cols) == M


@given(binary_arrays())
def test_rank_nullity(dense):
    M = BinMatrix.from_dense(dense)
    rank = f2_rank(M)
    assert rank == _rank_oracle(dense)
    K = f2_kernel_basis(M)
    assert K.rows == M.cols - rank
    assert f2_rank(K) == K.rows
    if M.rows and K.rows:
        assert (M @ K.T).is_zero()


@given(binary_arrays(8, 70), st.data())
def test_row_space_and_solve(dense, data):
    M = BinMatrix.from_dense(dense)
    coeffs = data.draw(arrays(np.uint8, (dense.shape[0],), elements=st.integers(0, 1)))
    v = (coeffs.astype(np.int64) @ dense.astype(np.int64) % 2).astype(np.uint8)
    assert f2_in_row_space(M, v)
    x = f2_solve(M.T, v)
    assert x is not None and np.array_equal(M.T @ x, v)


@settings(max_examples=50)
@given(binary_arrays(6, 6), binary_arrays(6, 6))
def test_product_transpose(a, b):
    if a.shape[1] != b.shape[0]:
        b = np.zeros((a.shape[1], 3), dtype=np.uint8)
    A, B = BinMatrix.from_dense(a), BinMatrix.from_dense(b)
    expected = (a.astype(int) @ b.astype(int)) % 2
    assert np.array_equal((A @ B).to_dense(), expected)
    assert (A @ B).T == B.T @ A.T


def test_solve_inconsistent():
    M = BinMatrix.from_dense([[1, 1], [1, 1]])
    assert f2_solve(M, np.array([1, 0])) is None
    assert f2_solve(M, np.array([1, 1])) is not None


def test_known_rank_and_kernel():
    H = BinMatrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert f2_rank(H) == 2
    assert f2_kernel_basis(H).to_dense().tolist() == [[1, 1, 1]]


def test_echelon_queries():
    M = BinMatrix.from_dense([[1, 0, 1, 0], [0, 1, 1, 0]])
    E = Echelon.of(M)
    assert E.rank == 2
    assert E.contains(np.array([1, 1, 0, 0]))
    assert not E.contains(np.array([0, 0, 0, 1]))
    with pytest.raises(DimensionError):
        E.contains(np.array([1, 0]))


def test_stacking_and_errors():
    a = BinMatrix.identity(2)
    assert hstack([a, a]).shape == (2, 4)
    assert vstack([a, a]).shape == (4, 2)
    with pytest.raises(DimensionError):
        hstack([a, BinMatrix.identity(3)])
    with pytest.raises(DimensionError):
        a @ BinMatrix.identity(3)
    with pytest.raises(DimensionError):
        BinMatrix(np.array([[4]], dtype=np.uint64), 1, 2)  # padding bit set


def test_padding_across_word_boundary():
    dense = np.zeros((2, 130), dtype=np.uint8)
    dense[0, [0, 63, 64, 129]] = 1
    dense[1, 129] = 1
    M = BinMatrix.from_dense(dense)
    assert M.words.shape == (2, 3)
    assert M.row_weights().tolist() == [4, 1]
    assert f2_rank(M) == 2


# ---------------------------------------------------------------- fields and polynomials


def test_field_arithmetic_gf8():
    fld = FieldSpec(0b1011)  # 1 + x + x^3
    assert fld.degree == 3 and fld.order == 8
    for a in range(1, 8):
        assert fld.mul(a, fld.inv(a)) == 1
    # multiplicative group is cyclic of order 7
    g = 0b10
    p = 1
    seen = set()
    for _ in range(7):
        p = fld.mul(p, g)
        seen.add(p)
    assert seen == set(range(1, 8))


def test_field_rejects_reducible():
    with pytest.raises(DomainError):
        FieldSpec(0b101)  # (1 + x)^2


def test_gf_rank():
    fld = FieldSpec(0b111)  # GF(4), x^2 = x + 1
    w = 0b10
    w2 = fld.mul(w, w)
    M = GfMatrix(fld, ((1, w), (w, w2)))
    assert gf_rank(M) == 1
    M = GfMatrix(fld, ((1, w), (w, 1)))
    assert gf_rank(M) == 2


def test_poly_basics():
    f = poly2.parse("1+x+x^3")
    assert f == 0b1011
    assert poly2.to_str(f) == "1+x+x^3"
    assert poly2.is_irreducible(f)
    assert not poly2.is_irreducible(poly2.mul(0b11, 0b11))
    q, r = poly2.divmod2((1 << 7) | 1, f)
    assert r == 0 and poly2.mul(q, f) == (1 << 7) | 1
    assert poly2.derivative(0b1011) == 0b101  # 1 + x^2
    assert poly2.gcd(0b1011, 0b1101) == 1
    with pytest.raises(ParseError):
        poly2.parse("x^")


@given(st.integers(0, 1 << 20), st.integers(1, 1 << 12))
def test_poly_division_identity(a, b):
    q, r = poly2.divmod2(a, b)
    assert poly2.mul(q, b) ^ r == a
    assert poly2.deg(r) < poly2.deg(b)
