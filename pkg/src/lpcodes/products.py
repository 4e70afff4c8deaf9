"""Product constructions: hypergraph, generalized bicycle and lifted products.

Kronecker blocks are ordered with the outer (left) index major and the inner
index minor, so ``kron(A, I)`` places row (i, p) at position i * rows(I) + p.
"""

from __future__ import annotations

import numpy as np

from . import poly2
from .csscode import CssCode, css_new
from .errors import DimensionError, DomainError, GroupMismatchError
from .f2core import BinMatrix, FieldSpec, GfMatrix, f2_rank, gf_rank, hstack
from .groupring import (
    AlgElem,
    AlgMatrix,
    GroupSpec,
    antipode,
    block_lift,
    conj_transpose,
    crt_decompose,
    eval_matrix,
)


def _kron_dense(A: np.ndarray, B: np.ndarray) -> BinMatrix:
    return BinMatrix.from_dense(np.kron(A, B))


def hp_params(nA: int, mA: int, kA: int, nB: int, mB: int, kB: int) -> tuple[int, int]:
    """Length and dimension of HP(A, B) from the factor parameters (k = n - rank)."""
    for n, k in ((nA, kA), (nB, kB)):
        if not 0 <= k <= n:
            raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    N = nA * mB + nB * mA
    K = 2 * kA * kB - kA * (nB - mB) - kB * (nA - mA)
    return N, K


def hp(A: BinMatrix, B: BinMatrix) -> CssCode:
    """Hypergraph product HX = [A (x) I, I (x) B], HZ = [I (x) B^T, A^T (x) I]."""
    a, b = A.to_dense(), B.to_dense()
    mA, nA = a.shape
    mB, nB = b.shape
    HX = hstack([_kron_dense(a, np.eye(mB, dtype=np.uint8)), _kron_dense(np.eye(mA, dtype=np.uint8), b)])
    HZ = hstack([_kron_dense(np.eye(nA, dtype=np.uint8), b.T), _kron_dense(a.T, np.eye(nB, dtype=np.uint8))])
    return css_new(HX, HZ, {"type": "hp", "shapes": [[mA, nA], [mB, nB]]})


def gb(a: AlgElem, b: AlgElem) -> CssCode:
    """Generalized bicycle code HX = [A, B], HZ = [B^T, A^T] with A = B(a), B = B(b)."""
    if a.group != b.group:
        raise GroupMismatchError(f"group {a.group} does not match {b.group}")
    A, B = block_lift(a), block_lift(b)
    return css_new(hstack([A, B]), hstack([B.T, A.T]), {"type": "gb", "group": str(a.group)})


def kron_identity_right(A: AlgMatrix, k: int) -> AlgMatrix:
    """A (x) I_k over the group algebra."""
    m, n = A.shape
    ell = A.group.order
    out = np.zeros((m, k, n, k, ell), dtype=np.uint8)
    for p in range(k):
        out[:, p, :, p, :] = A.data
    return AlgMatrix(A.group, out.reshape(m * k, n * k, ell))


def kron_identity_left(k: int, B: AlgMatrix) -> AlgMatrix:
    """I_k (x) B over the group algebra."""
    m, n = B.shape
    ell = B.group.order
    out = np.zeros((k, m, k, n, ell), dtype=np.uint8)
    for p in range(k):
        out[p, :, p, :, :] = B.data
    return AlgMatrix(B.group, out.reshape(k * m, k * n, ell))


def hstack_alg(mats: list[AlgMatrix]) -> AlgMatrix:
    return AlgMatrix(mats[0].group, np.concatenate([M.data for M in mats], axis=1))


def lp_matrices(A: AlgMatrix, B: AlgMatrix) -> tuple[AlgMatrix, AlgMatrix]:
    """Unlifted LP checks HX = [A (x) I, I (x) B], HZ = [I (x) B*, A* (x) I]."""
    if A.group != B.group:
        raise GroupMismatchError(f"group {A.group} does not match {B.group}")
    mA, nA = A.shape
    mB, nB = B.shape
    HX = hstack_alg([kron_identity_right(A, mB), kron_identity_left(mA, B)])
    HZ = hstack_alg([kron_identity_left(nA, conj_transpose(B)), kron_identity_right(conj_transpose(A), nB)])
    return HX, HZ


def lp(A: AlgMatrix, B: AlgMatrix) -> CssCode:
    """Lifted product LP(A, B) expanded to binary block matrices."""
    HX, HZ = lp_matrices(A, B)
    meta = {"type": "lp", "group": str(A.group), "shapes": [list(A.shape), list(B.shape)]}
    return css_new(block_lift(HX), block_lift(HZ), meta)


def _scalar_identity(b: AlgElem, k: int) -> AlgMatrix:
    data = np.zeros((k, k, b.group.order), dtype=np.uint8)
    data[np.arange(k), np.arange(k)] = b.coeffs
    return AlgMatrix(b.group, data)


def lp_ab(A: AlgMatrix, b: AlgElem) -> CssCode:
    """LP(A, b): HX = [A, b I_m], HZ = [antipode(b) I_n, A*]."""
    if A.group != b.group:
        raise GroupMismatchError(f"group {A.group} does not match {b.group}")
    m, n = A.shape
    HX = hstack([block_lift(A), block_lift(_scalar_identity(b, m))])
    HZ = hstack([block_lift(_scalar_identity(antipode(b), n)), block_lift(conj_transpose(A))])
    return css_new(HX, HZ, {"type": "lp_ab", "group": str(A.group), "shape": [m, n]})


def _kernel_dim(M: GfMatrix) -> int:
    return M.cols - gf_rank(M)


def _gf_transpose(M: GfMatrix) -> GfMatrix:
    return GfMatrix(M.field, tuple(zip(*M.entries)) if M.rows else ())


def lp_ab_dim(A: AlgMatrix, b: int | AlgElem) -> int:
    """deg b * (dim C(A(beta)) + dim C(A^T(beta))) for an irreducible factor b of x^l - 1."""
    ell = A.group.order
    if isinstance(b, AlgElem):
        b = b.to_poly()
    if not poly2.is_irreducible(b):
        raise DomainError(f"{poly2.to_str(b)} is not irreducible")
    if poly2.mod((1 << ell) | 1, b):
        raise DomainError(f"{poly2.to_str(b)} does not divide x^{ell} - 1")
    if not (A.rows and A.cols):
        return poly2.deg(b) * (A.cols + A.rows)
    Ab = eval_matrix(A, b)
    return poly2.deg(b) * (_kernel_dim(Ab) + _kernel_dim(_gf_transpose(Ab)))


def hp_dim_over_field(A: GfMatrix, B: GfMatrix) -> int:
    """Dimension of the non-binary HP code from ranks over the field."""
    mA, nA = A.shape
    mB, nB = B.shape
    kA = nA - gf_rank(A)
    kB = nB - gf_rank(B)
    return hp_params(nA, mA, kA, nB, mB, kB)[1]


def lp_dim_crt(A: AlgMatrix, B: AlgMatrix) -> int:
    """sum_i r_i * dim HP(A_i, B_i) over the field components of R_l (odd cyclic l)."""
    if A.group != B.group:
        raise GroupMismatchError(f"group {A.group} does not match {B.group}")
    total = 0
    for Ai, Bi in zip(crt_decompose(A), crt_decompose(B)):
        total += Ai.field.degree * hp_dim_over_field(Ai, Bi)
    return total


def lp_square(A: AlgMatrix) -> CssCode:
    """LP(A, A*); the metadata records the bound K >= l (n - m)^2 and whether B(A) has rank l m."""
    m, n = A.shape
    ell = A.group.order
    Q = lp(A, conj_transpose(A))
    full = f2_rank(block_lift(A)) == ell * m
    meta = dict(Q.meta)
    meta.update({"type": "lp_square", "k_lower_bound": ell * (n - m) ** 2, "full_row_rank": full})
    return CssCode(Q.HX, Q.HZ, meta)


# ---------------------------------------------------------------- field expansion


def companion(fld: FieldSpec, alpha: int) -> np.ndarray:
    """r x r binary matrix of x -> alpha * x in the basis 1, beta, ..., beta^(r-1)."""
    r = fld.degree
    M = np.zeros((r, r), dtype=np.uint8)
    for j in range(r):
        col = fld.mul(alpha, 1 << j)
        for i in range(r):
            M[i, j] = (col >> i) & 1
    return M


def _gf_kron_identity(M: list[list[int]], k: int, left: bool) -> list[list[int]]:
    rows, cols = len(M), len(M[0]) if M else 0
    if left:  # I_k (x) M
        out = [[0] * (k * cols) for _ in range(k * rows)]
        for p in range(k):
            for i in range(rows):
                for j in range(cols):
                    out[p * rows + i][p * cols + j] = M[i][j]
    else:  # M (x) I_k
        out = [[0] * (cols * k) for _ in range(rows * k)]
        for i in range(rows):
            for j in range(cols):
                for p in range(k):
                    out[i * k + p][j * k + p] = M[i][j]
    return out


def _expand(fld: FieldSpec, M: list[list[int]], transpose_blocks: bool) -> np.ndarray:
    r = fld.degree
    rows, cols = len(M), len(M[0]) if M else 0
    out = np.zeros((rows * r, cols * r), dtype=np.uint8)
    for i in range(rows):
        for j in range(cols):
            if M[i][j]:
                C = companion(fld, M[i][j])
                out[i * r : (i + 1) * r, j * r : (j + 1) * r] = C.T if transpose_blocks else C
    return out


def lp_from_field(A: GfMatrix, B: GfMatrix) -> CssCode:
    """HP over F_{2^r} expanded to binary: entries of HX become M_alpha, of HZ become M_alpha^T."""
    if A.field != B.field:
        raise GroupMismatchError(f"field {A.field} does not match {B.field}")
    if not (A.rows and A.cols and B.rows and B.cols):
        raise DimensionError("operands must be non-empty")
    fld = A.field
    a = [list(r) for r in A.entries]
    b = [list(r) for r in B.entries]
    mA, nA = A.shape
    mB, nB = B.shape
    aT = [list(r) for r in zip(*a)]
    bT = [list(r) for r in zip(*b)]
    hx = [r1 + r2 for r1, r2 in zip(_gf_kron_identity(a, mB, left=False), _gf_kron_identity(b, mA, left=True))]
    hz = [r1 + r2 for r1, r2 in zip(_gf_kron_identity(bT, nA, left=True), _gf_kron_identity(aT, nB, left=False))]
    HX = BinMatrix.from_dense(_expand(fld, hx, transpose_blocks=False))
    HZ = BinMatrix.from_dense(_expand(fld, hz, transpose_blocks=True))
    meta = {"type": "lp_from_field", "field_modulus": poly2.to_str(fld.modulus)}
    return css_new(HX, HZ, meta)


def trivial_group_matrix(M: BinMatrix) -> AlgMatrix:
    return AlgMatrix(GroupSpec.cyclic(1), M.to_dense()[:, :, None])
