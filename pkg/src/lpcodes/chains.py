"""Chain complexes over F2 and over group algebras F2G.

A complex of dimension n has cell counts c_0..c_n and boundary maps
d_i : C_i -> C_{i-1} stored as (c_{i-1} x c_i) matrices over F2G. Binary
complexes are the special case of the trivial group C1.

In a tensor product the summands C_i (x) D_{k-i} of grade k are concatenated
by descending i (ascending grade of the second factor); within a summand the
first factor's index is major. With this ordering the tensor of two
one-dimensional complexes reproduces the hypergraph product matrices exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .csscode import CssCode, css_new, css_swap
from .errors import ChainComplexError, DomainError, GroupMismatchError
from .f2core import BinMatrix, f2_rank
from .groupring import AlgMatrix, GroupSpec, block_lift
from .products import kron_identity_left, kron_identity_right

TRIVIAL = GroupSpec.cyclic(1)


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Graded boundary maps with d_{i} d_{i+1} = 0, checked on construction."""

    group: GroupSpec
    cells: tuple[int, ...]
    boundaries: tuple[AlgMatrix, ...]  # boundaries[i - 1] is d_i

    def __post_init__(self):
        if len(self.boundaries) != len(self.cells) - 1:
            raise ChainComplexError("need exactly one boundary map per positive grade")
        for i, d in enumerate(self.boundaries, start=1):
            if d.group != self.group:
                raise GroupMismatchError(f"boundary d_{i} is over {d.group}, complex over {self.group}")
            if d.shape != (self.cells[i - 1], self.cells[i]):
                raise ChainComplexError(
                    f"d_{i} has shape {d.shape}, expected {(self.cells[i - 1], self.cells[i])}"
                )
        for i in range(1, len(self.boundaries)):
            lower, upper = self.binary(i), self.binary(i + 1)
            if lower.rows and upper.cols and lower.cols and not (lower @ upper).is_zero():
                raise ChainComplexError(f"d_{i} d_{i + 1} != 0")

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    @property
    def is_binary(self) -> bool:
        return self.group.order == 1

    def boundary(self, i: int) -> AlgMatrix:
        """d_i, with zero maps outside 1..n."""
        if 1 <= i <= self.dimension:
            return self.boundaries[i - 1]
        rows = self.cells[i - 1] if 0 <= i - 1 <= self.dimension else 0
        cols = self.cells[i] if 0 <= i <= self.dimension else 0
        return AlgMatrix.zeros(self.group, rows, cols)

    def binary(self, i: int) -> BinMatrix:
        """Block-lifted d_i."""
        return block_lift(self.boundary(i))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self.group == other.group and self.cells == other.cells and all(
            a == b for a, b in zip(self.boundaries, other.boundaries)
        )

    def __repr__(self) -> str:
        return f"ChainComplex(over F2[{self.group}], cells={self.cells})"


def complex_from_matrix(H: BinMatrix | AlgMatrix | np.ndarray) -> ChainComplex:
    """One-dimensional complex C_1 -> C_0 with d_1 = H."""
    if isinstance(H, BinMatrix):
        H = AlgMatrix(TRIVIAL, H.to_dense()[:, :, None])
    elif not isinstance(H, AlgMatrix):
        H = AlgMatrix(TRIVIAL, np.asarray(H, dtype=np.uint8)[:, :, None])
    m, n = H.shape
    return ChainComplex(H.group, (m, n), (H,))


def complex_of_code(Q: CssCode) -> ChainComplex:
    """Two-dimensional complex C_2 -> C_1 -> C_0 with d_1 = HX and d_2 = HZ^T."""
    d1 = AlgMatrix(TRIVIAL, Q.HX.to_dense()[:, :, None])
    d2 = AlgMatrix(TRIVIAL, Q.HZ.to_dense().T[:, :, None])
    return ChainComplex(TRIVIAL, (Q.HX.rows, Q.n, Q.HZ.rows), (d1, d2))


def _summands(C: ChainComplex, D: ChainComplex, k: int) -> list[tuple[int, int]]:
    """Pairs (i, j) with i + j = k, by descending i."""
    return [(i, k - i) for i in range(min(k, C.dimension), -1, -1) if 0 <= k - i <= D.dimension]


def tensor(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    """Tensor product over the shared coefficient ring with d = d_C (x) id + id (x) d_D."""
    if C.group != D.group:
        raise GroupMismatchError(f"complexes over {C.group} and {D.group}")
    G = C.group
    ell = G.order
    top = C.dimension + D.dimension
    grades = [_summands(C, D, k) for k in range(top + 1)]
    cells = tuple(sum(C.cells[i] * D.cells[j] for i, j in g) for g in grades)
    boundaries = []
    for k in range(1, top + 1):
        data = np.zeros((cells[k - 1], cells[k], ell), dtype=np.uint8)
        row_off = {}
        off = 0
        for i, j in grades[k - 1]:
            row_off[(i, j)] = off
            off += C.cells[i] * D.cells[j]
        col = 0
        for i, j in grades[k]:
            width = C.cells[i] * D.cells[j]
            if i >= 1:  # d_C (x) id_{D_j}
                block = kron_identity_right(C.boundary(i), D.cells[j])
                r = row_off[(i - 1, j)]
                data[r : r + block.rows, col : col + width] ^= block.data
            if j >= 1:  # id_{C_i} (x) d_D
                block = kron_identity_left(C.cells[i], D.boundary(j))
                r = row_off[(i, j - 1)]
                data[r : r + block.rows, col : col + width] ^= block.data
            col += width
        boundaries.append(AlgMatrix(G, data))
    return ChainComplex(G, cells, tuple(boundaries))


def lift_complex(C: ChainComplex) -> ChainComplex:
    """Replace every boundary map by its binary block lift."""
    maps = tuple(AlgMatrix(TRIVIAL, block_lift(d).to_dense()[:, :, None]) for d in C.boundaries)
    ell = C.group.order
    return ChainComplex(TRIVIAL, tuple(c * ell for c in C.cells), maps)


def lifted_tensor(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    """Tensor over F2G followed by block lifting to a binary complex."""
    return lift_complex(tensor(C, D))


def css_from_complex(C: ChainComplex, q: int = 1) -> CssCode:
    """Qubits on grade q: HX = d_q, HZ = d_{q+1}^T (block lifted)."""
    if not 1 <= q <= C.dimension - 1:
        raise DomainError(f"grade {q} must lie in 1..{C.dimension - 1}")
    return css_new(C.binary(q), C.binary(q + 1).T, {"type": "complex", "grade": q, "cells": list(C.cells)})


def homology_dim(C: ChainComplex, q: int) -> int:
    """dim ker d_q - rank d_{q+1} over F2 (ranks of block lifts for ring complexes)."""
    if not 0 <= q <= C.dimension:
        raise DomainError(f"grade {q} must lie in 0..{C.dimension}")
    if not C.is_binary:
        raise DomainError("homology_dim expects a binary complex; lift it first")
    return C.cells[q] - f2_rank(C.binary(q)) - f2_rank(C.binary(q + 1))


def homology_dims(C: ChainComplex) -> list[int]:
    return [homology_dim(C, q) for q in range(C.dimension + 1)]


# ---------------------------------------------------------------- distance balancing


@dataclass(frozen=True)
class BalanceBounds:
    """Bounds for Q (x) C (single) and (Q (x) C)* (x) C (double)."""

    single_n_max: int
    single_k: int
    single_dz_min: int
    single_dx_min: int
    double_n_max: int
    double_k: int
    double_dz_min: int
    double_dx_min: int


def balance_params(N: int, K: int, dZ: int, dX: int, n: int, k: int, d: int) -> BalanceBounds:
    """Parameter arithmetic for tensoring an [[N, K, dZ, dX]] code with an [n, k, d] code."""
    for name, v in (("N", N), ("K", K), ("dZ", dZ), ("dX", dX), ("n", n), ("k", k), ("d", d)):
        if v <= 0:
            raise DomainError(f"{name} must be positive, got {v}")
    return BalanceBounds(
        single_n_max=2 * n * N,
        single_k=k * K,
        single_dz_min=d * dZ,
        single_dx_min=dX,
        double_n_max=4 * n * n * N,
        double_k=k * k * K,
        double_dz_min=d * dZ,
        double_dx_min=d * dX,
    )


def balanced_length_exponent(alpha: Fraction) -> Fraction:
    """Exponent e with N'' = N^e when n grows as N^(alpha / (2 (1 - alpha)))."""
    alpha = Fraction(alpha)
    if not 0 <= alpha < 1:
        raise DomainError("alpha must lie in [0, 1)")
    n_exponent = alpha / (2 * (1 - alpha))
    return 2 * n_exponent + 1


def balance_construct(Q: CssCode, H_C: BinMatrix, q: int = 1) -> CssCode:
    """CSS code at grade q of complex(Q) (x) complex(H_C).

    For a code with one-dimensional outer homology, such as the toric code,
    the grade carrying dimension k K is q = 2; grade 1 picks up only the
    outer homology of Q tensored with C.
    """
    P = tensor(complex_of_code(Q), complex_from_matrix(H_C))
    code = css_from_complex(P, q)
    meta = {"type": "balanced", "grade": q, "cells": list(P.cells)}
    return CssCode(code.HX, code.HZ, meta)


def balance_twice(Q: CssCode, H_C: BinMatrix, q1: int = 2, q2: int = 2) -> CssCode:
    """(Q (x) C)* (x) C: balance, swap the roles of X and Z, balance again."""
    return balance_construct(css_swap(balance_construct(Q, H_C, q1)), H_C, q2)
