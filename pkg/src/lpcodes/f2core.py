"""Linear algebra over F2 (bit-packed) and over small extension fields F_{2^r}."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import poly2
from .errors import DimensionError, DomainError

WORD = 64
_ONE = np.uint64(1)


def _nwords(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array into little-endian uint64 words, padding bits zero."""
    dense = np.asarray(dense, dtype=np.uint8) & 1
    rows, cols = dense.shape
    nw = _nwords(cols)
    padded = np.zeros((rows, nw * WORD), dtype=np.uint8)
    padded[:, :cols] = dense
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").astype(np.uint64, copy=False).reshape(rows, nw)


def unpack_rows(words: np.ndarray, cols: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype="<u8")
    rows = words.shape[0]
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.uint8)
    raw = words.view(np.uint8).reshape(rows, -1)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :cols]


class BinMatrix:
    """Dense matrix over F2 with rows packed into 64-bit words.

    Instances are immutable; every operation returns a new matrix.
    """

    def __init__(self, words: np.ndarray, rows: int, cols: int):
        words = np.asarray(words, dtype=np.uint64).reshape(rows, _nwords(cols))
        if cols % WORD and rows:
            tail = np.uint64((1 << (cols % WORD)) - 1)
            if np.any(words[:, -1] & ~tail):
                raise DimensionError("padding bits must be zero")
        words = words.copy()
        words.flags.writeable = False
        self.words = words
        self.rows = rows
        self.cols = cols

    # construction
    @classmethod
    def from_dense(cls, dense) -> BinMatrix:
        arr = np.asarray(dense)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-D array, got shape {arr.shape}")
        return cls(pack_rows(arr), arr.shape[0], arr.shape[1])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BinMatrix:
        return cls(np.zeros((rows, _nwords(cols)), dtype=np.uint64), rows, cols)

    @classmethod
    def identity(cls, n: int) -> BinMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_int_rows(cls, ints: Sequence[int], cols: int) -> BinMatrix:
        """Rows given as Python ints, bit j = column j."""
        nw = _nwords(cols)
        words = np.zeros((len(ints), nw), dtype=np.uint64)
        mask = (1 << WORD) - 1
        for i, v in enumerate(ints):
            if v >> cols:
                raise DimensionError("row integer has bits beyond the column count")
            for w in range(nw):
                words[i, w] = (v >> (WORD * w)) & mask
        return cls(words, len(ints), cols)

    # views
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        return unpack_rows(self.words, self.cols)

    def to_int_rows(self) -> list[int]:
        out = []
        for row in self.words:
            v = 0
            for w in range(len(row) - 1, -1, -1):
                v = (v << WORD) | int(row[w])
            out.append(v)
        return out

    def row(self, i: int) -> np.ndarray:
        return unpack_rows(self.words[i : i + 1], self.cols)[0]

    @cached_property
    def T(self) -> BinMatrix:
        return BinMatrix.from_dense(self.to_dense().T)

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self.words).sum(axis=1).astype(np.int64)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0).astype(np.int64)

    def nnz(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def is_zero(self) -> bool:
        return not self.words.any()

    # algebra
    def __matmul__(self, other):
        if isinstance(other, BinMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            prod = self.to_dense().astype(np.float64) @ other.to_dense().astype(np.float64)
            return BinMatrix.from_dense(np.fmod(prod, 2).astype(np.uint8))
        vec = np.asarray(other)
        if vec.ndim != 1 or vec.shape[0] != self.cols:
            raise DimensionError(f"vector of length {vec.shape} does not fit {self.shape}")
        prod = self.to_dense().astype(np.float64) @ (vec & 1).astype(np.float64)
        return (np.fmod(prod, 2)).astype(np.uint8)

    def __add__(self, other: BinMatrix) -> BinMatrix:
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return BinMatrix(self.words ^ other.words, self.rows, self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BinMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"

    def kron(self, other: BinMatrix) -> BinMatrix:
        return BinMatrix.from_dense(np.kron(self.to_dense(), other.to_dense()))

    def take_rows(self, idx) -> BinMatrix:
        idx = np.asarray(idx, dtype=np.int64)
        return BinMatrix(self.words[idx], len(idx), self.cols)

    def take_cols(self, idx) -> BinMatrix:
        return BinMatrix.from_dense(self.to_dense()[:, np.asarray(idx, dtype=np.int64)])


def hstack(mats: Iterable[BinMatrix]) -> BinMatrix:
    mats = list(mats)
    rows = {m.rows for m in mats}
    if len(rows) != 1:
        raise DimensionError(f"hstack row counts differ: {sorted(rows)}")
    return BinMatrix.from_dense(np.hstack([m.to_dense() for m in mats]))


def vstack(mats: Iterable[BinMatrix]) -> BinMatrix:
    mats = list(mats)
    cols = {m.cols for m in mats}
    if len(cols) != 1:
        raise DimensionError(f"vstack column counts differ: {sorted(cols)}")
    return BinMatrix.from_dense(np.vstack([m.to_dense() for m in mats]))


def _rref(words: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of packed rows; returns (nonzero rows, pivot columns)."""
    m = np.array(words, dtype=np.uint64, copy=True)
    nrows = m.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        w, b = divmod(c, WORD)
        bit = np.uint64(b)
        nz = np.flatnonzero((m[r:, w] >> bit) & _ONE)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        hit = np.flatnonzero((m[:, w] >> bit) & _ONE)
        hit = hit[hit != r]
        if hit.size:
            m[hit] ^= m[r]
        pivots.append(c)
        r += 1
    return m[:r], pivots


@dataclass(frozen=True)
class Echelon:
    """Reduced row echelon form of a BinMatrix, reusable for many queries."""

    basis: BinMatrix
    pivots: tuple[int, ...]

    @classmethod
    def of(cls, M: BinMatrix) -> Echelon:
        red, piv = _rref(M.words, M.cols)
        return cls(BinMatrix(red, red.shape[0], M.cols), tuple(piv))

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Residue of packed vector ``v`` after clearing pivot columns."""
        v = np.array(v, dtype=np.uint64, copy=True)
        for i, c in enumerate(self.pivots):
            w, b = divmod(c, WORD)
            if (int(v[w]) >> b) & 1:
                v ^= self.basis.words[i]
        return v

    def contains(self, v) -> bool:
        v = np.asarray(v)
        if v.ndim != 1 or v.shape[0] != self.basis.cols:
            raise DimensionError(f"vector length {v.shape} does not match {self.basis.cols} columns")
        return not self.reduce(pack_rows(v.reshape(1, -1))[0]).any()


def f2_rank(M: BinMatrix) -> int:
    """Row rank over F2."""
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(_rref(M.words, M.cols)[1])


def f2_kernel_basis(M: BinMatrix) -> BinMatrix:
    """Basis of the right kernel {v : M v = 0}, one vector per row."""
    n = M.cols
    if M.rows == 0:
        return BinMatrix.identity(n)
    red, piv = _rref(M.words, n)
    free = [c for c in range(n) if c not in set(piv)]
    dense = unpack_rows(red, n)
    K = np.zeros((len(free), n), dtype=np.uint8)
    K[np.arange(len(free)), free] = 1
    if piv:
        K[:, piv] = dense[:, free].T
    return BinMatrix.from_dense(K.reshape(len(free), n))


def f2_in_row_space(M: BinMatrix, v) -> bool:
    """True iff ``v`` is an F2 combination of the rows of ``M``."""
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] != M.cols:
        raise DimensionError(f"vector length {v.shape} does not match {M.cols} columns")
    if not np.any(v & 1):
        return True
    return Echelon.of(M).contains(v)


def f2_solve(M: BinMatrix, b) -> np.ndarray | None:
    """Some x with M x = b, or None if the system is inconsistent."""
    b = np.asarray(b, dtype=np.uint8) & 1
    if b.shape != (M.rows,):
        raise DimensionError(f"right-hand side of length {b.shape} does not match {M.rows} rows")
    aug = np.hstack([M.to_dense(), b.reshape(-1, 1)])
    red, piv = _rref(pack_rows(aug), M.cols + 1)
    if piv and piv[-1] == M.cols:
        return None
    dense = unpack_rows(red, M.cols + 1)
    x = np.zeros(M.cols, dtype=np.uint8)
    for i, c in enumerate(piv):
        x[c] = dense[i, M.cols]
    return x


# ---------------------------------------------------------------- fields


@dataclass(frozen=True)
class FieldSpec:
    """F_{2^r} realised as F2[x]/(modulus); elements are ints below 2^r."""

    modulus: int
    degree: int = field(init=False)

    def __post_init__(self):
        if not poly2.is_irreducible(self.modulus):
            raise DomainError(f"modulus {poly2.to_str(self.modulus)} is not irreducible over F2")
        object.__setattr__(self, "degree", poly2.deg(self.modulus))

    @property
    def order(self) -> int:
        return 1 << self.degree

    def reduce(self, a: int) -> int:
        return poly2.mod(a, self.modulus)

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        # shift-and-reduce
        out = 0
        top = 1 << self.degree
        while b:
            if b & 1:
                out ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= self.modulus
        return out

    def inv(self, a: int) -> int:
        """Inverse by the extended Euclidean algorithm."""
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        r0, r1 = self.modulus, a
        s0, s1 = 0, 1
        while r1:
            q, r = poly2.divmod2(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 ^ poly2.mul(q, s1)
        # r0 is the gcd, equal to 1 for a nonzero residue
        return self.reduce(s0)

    def __str__(self) -> str:
        return f"GF(2^{self.degree}) mod {poly2.to_str(self.modulus)}"


F2 = FieldSpec(0b11)


@dataclass(frozen=True)
class GfMatrix:
    """Matrix over a FieldSpec; entries stored as reduced residues."""

    field: FieldSpec
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise DimensionError("ragged GfMatrix rows")
        for row in self.entries:
            for e in row:
                if e < 0 or e >> self.field.degree:
                    raise DomainError(f"entry {e} is not reduced modulo the field polynomial")

    @classmethod
    def from_rows(cls, fld: FieldSpec, rows) -> GfMatrix:
        return cls(fld, tuple(tuple(fld.reduce(int(e)) for e in r) for r in rows))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)


def gf_rank(M: GfMatrix) -> int:
    """Rank over F_{2^r} by Gaussian elimination."""
    fld = M.field
    if fld.degree == 1:
        return f2_rank(BinMatrix.from_dense(np.array(M.entries, dtype=np.uint8).reshape(M.shape)))
    rows = [list(r) for r in M.entries]
    rank = 0
    for c in range(M.cols):
        p = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        inv = fld.inv(rows[rank][c])
        pivot = [fld.mul(inv, e) for e in rows[rank]]
        rows[rank] = pivot
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [e ^ fld.mul(f, pe) for e, pe in zip(rows[i], pivot)]
        rank += 1
    return rank
