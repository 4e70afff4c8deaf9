"""Group algebras F2G over finite abelian groups G = C_l1 x ... x C_lk.

Group elements are enumerated lexicographically over multi-indices
(row-major, last factor fastest). For a cyclic group index i stands for x^i.
Coefficients live in uint8 arrays; matrices use shape (rows, cols, order).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from math import prod

import numpy as np

from . import poly2
from .errors import DimensionError, DomainError, GroupMismatchError, ParseError, UnsupportedError
from .f2core import BinMatrix, FieldSpec, GfMatrix


@dataclass(frozen=True)
class GroupSpec:
    """Finite abelian group as a product of cyclic factors."""

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(o) for o in self.orders)
        if not orders or any(o < 1 for o in orders):
            raise DomainError(f"cyclic orders must be >= 1, got {orders}")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def cyclic(cls, order: int) -> GroupSpec:
        return cls((order,))

    @property
    def order(self) -> int:
        return prod(self.orders)

    @property
    def is_cyclic(self) -> bool:
        return len(self.orders) == 1

    def digits(self, idx) -> np.ndarray:
        """Multi-indices of element indices, shape (..., k)."""
        idx = np.asarray(idx, dtype=np.int64)
        out = np.empty(idx.shape + (len(self.orders),), dtype=np.int64)
        rest = idx.copy()
        for pos in range(len(self.orders) - 1, -1, -1):
            rest, out[..., pos] = np.divmod(rest, self.orders[pos])
        return out

    def index(self, digits) -> np.ndarray:
        digits = np.asarray(digits, dtype=np.int64)
        idx = np.zeros(digits.shape[:-1], dtype=np.int64)
        for pos, o in enumerate(self.orders):
            idx = idx * o + digits[..., pos] % o
        return idx

    def compose(self, g, h) -> np.ndarray:
        return self.index(self.digits(g) + self.digits(h))

    def inverse(self, g) -> np.ndarray:
        return self.index(-self.digits(g))

    @cached_property
    def difference_table(self) -> np.ndarray:
        """D[i, j] = index of g_i * g_j^{-1}; B(a)[i, j] = a[D[i, j]]."""
        ell = self.order
        d = self.digits(np.arange(ell))
        diff = d[:, None, :] - d[None, :, :]
        table = self.index(diff).astype(np.int32)
        table.flags.writeable = False
        return table

    def __str__(self) -> str:
        return "x".join(f"C{o}" for o in self.orders)


def _check_same(g1: GroupSpec, g2: GroupSpec) -> None:
    if g1 != g2:
        raise GroupMismatchError(f"group {g1} does not match {g2}")


class AlgElem:
    """Element of F2G: a 0/1 coefficient vector indexed by group elements."""

    def __init__(self, group: GroupSpec, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.uint8) & 1
        if coeffs.shape != (group.order,):
            raise DimensionError(f"expected {group.order} coefficients, got {coeffs.shape}")
        coeffs.flags.writeable = False
        self.group = group
        self.coeffs = coeffs

    @classmethod
    def zero(cls, group: GroupSpec) -> AlgElem:
        return cls(group, np.zeros(group.order, dtype=np.uint8))

    @classmethod
    def one(cls, group: GroupSpec) -> AlgElem:
        return cls.monomial(group, 0)

    @classmethod
    def monomial(cls, group: GroupSpec, g) -> AlgElem:
        """The group element g (an index, or a multi-index tuple)."""
        if isinstance(g, (tuple, list)):
            g = int(group.index(g))
        c = np.zeros(group.order, dtype=np.uint8)
        c[int(g) % group.order] = 1
        return cls(group, c)

    @classmethod
    def all_ones(cls, group: GroupSpec) -> AlgElem:
        return cls(group, np.ones(group.order, dtype=np.uint8))

    @classmethod
    def from_poly(cls, ell: int, f: int) -> AlgElem:
        """Element of R_ell from a packed binary polynomial, reduced mod x^ell - 1."""
        group = GroupSpec.cyclic(ell)
        c = np.zeros(ell, dtype=np.uint8)
        i = 0
        while f:
            if f & 1:
                c[i % ell] ^= 1
            f >>= 1
            i += 1
        return cls(group, c)

    def to_poly(self) -> int:
        if not self.group.is_cyclic:
            raise UnsupportedError("polynomial form needs a cyclic group")
        return sum(1 << int(i) for i in np.flatnonzero(self.coeffs))

    @property
    def weight(self) -> int:
        return int(self.coeffs.sum())

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coeffs)

    def shift(self, g: int) -> AlgElem:
        """Multiply by the group element with index g."""
        out = np.zeros_like(self.coeffs)
        out[self.group.compose(g, np.arange(self.group.order))] = self.coeffs
        return AlgElem(self.group, out)

    def __add__(self, other: AlgElem) -> AlgElem:
        _check_same(self.group, other.group)
        return AlgElem(self.group, self.coeffs ^ other.coeffs)

    __sub__ = __add__

    def __mul__(self, other: AlgElem) -> AlgElem:
        return alg_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self.group == other.group and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.group, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        return f"AlgElem({self.group}, {format_elem(self)})"

    def is_zero(self) -> bool:
        return not self.coeffs.any()


def alg_mul(a: AlgElem, b: AlgElem) -> AlgElem:
    """Group-algebra product (convolution over the group)."""
    _check_same(a.group, b.group)
    G = a.group
    if G.is_cyclic:
        ell = G.order
        full = np.convolve(a.coeffs.astype(np.int64), b.coeffs.astype(np.int64))
        folded = np.zeros(ell, dtype=np.int64)
        np.add.at(folded, np.arange(full.size) % ell, full)
        return AlgElem(G, folded & 1)
    out = np.zeros(G.order, dtype=np.uint8)
    idx = np.arange(G.order)
    for g in a.support():
        out[G.compose(g, idx)] ^= b.coeffs
    return AlgElem(G, out)


def antipode(a: AlgElem) -> AlgElem:
    """Send the coefficient of g to g^{-1}."""
    out = np.zeros_like(a.coeffs)
    out[a.group.inverse(np.arange(a.group.order))] = a.coeffs
    return AlgElem(a.group, out)


class AlgMatrix:
    """Matrix over F2G stored as a (rows, cols, order) uint8 array."""

    def __init__(self, group: GroupSpec, data):
        data = np.asarray(data, dtype=np.uint8) & 1
        if data.ndim != 3 or data.shape[2] != group.order:
            raise DimensionError(f"expected shape (m, n, {group.order}), got {data.shape}")
        data.flags.writeable = False
        self.group = group
        self.data = data

    @classmethod
    def from_entries(cls, group: GroupSpec, entries) -> AlgMatrix:
        """Build from a nested list of AlgElem (or ints meaning 0/1)."""
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        data = np.zeros((rows, cols, group.order), dtype=np.uint8)
        for i, row in enumerate(entries):
            if len(row) != cols:
                raise DimensionError("ragged matrix rows")
            for j, e in enumerate(row):
                if isinstance(e, AlgElem):
                    _check_same(group, e.group)
                    data[i, j] = e.coeffs
                elif e:
                    data[i, j, 0] = 1
        return cls(group, data)

    @classmethod
    def from_polys(cls, ell: int, polys) -> AlgMatrix:
        """Cyclic case: entries given as packed binary polynomials."""
        G = GroupSpec.cyclic(ell)
        return cls.from_entries(G, [[AlgElem.from_poly(ell, int(f)) for f in row] for row in polys])

    @classmethod
    def from_binary(cls, dense) -> AlgMatrix:
        """A plain binary matrix viewed over the trivial group C1."""
        dense = np.asarray(dense, dtype=np.uint8)
        return cls(GroupSpec.cyclic(1), dense[:, :, None])

    @classmethod
    def identity(cls, group: GroupSpec, n: int) -> AlgMatrix:
        data = np.zeros((n, n, group.order), dtype=np.uint8)
        data[np.arange(n), np.arange(n), 0] = 1
        return cls(group, data)

    @classmethod
    def zeros(cls, group: GroupSpec, rows: int, cols: int) -> AlgMatrix:
        return cls(group, np.zeros((rows, cols, group.order), dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[:2]

    def __getitem__(self, ij) -> AlgElem:
        i, j = ij
        return AlgElem(self.group, self.data[i, j])

    def __add__(self, other: AlgMatrix) -> AlgMatrix:
        _check_same(self.group, other.group)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return AlgMatrix(self.group, self.data ^ other.data)

    def __matmul__(self, other: AlgMatrix) -> AlgMatrix:
        return alg_matmul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgMatrix):
            return NotImplemented
        return self.group == other.group and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.group, self.data.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"AlgMatrix({self.group}, {self.rows}x{self.cols})"

    def transpose(self) -> AlgMatrix:
        return AlgMatrix(self.group, self.data.transpose(1, 0, 2))

    def scale(self, a: AlgElem) -> AlgMatrix:
        """Multiply every entry by the scalar a."""
        _check_same(self.group, a.group)
        G = self.group
        idx = np.arange(G.order)
        out = np.zeros_like(self.data)
        for g in a.support():
            out[:, :, G.compose(g, idx)] ^= self.data
        return AlgMatrix(G, out)


def alg_matmul(A: AlgMatrix, B: AlgMatrix) -> AlgMatrix:
    _check_same(A.group, B.group)
    if A.cols != B.rows:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    G = A.group
    ell = G.order
    out = np.zeros((A.rows, B.cols, ell), dtype=np.uint8)
    idx = np.arange(ell)
    for t in range(A.cols):
        for g in np.flatnonzero(A.data[:, t, :].any(axis=0)):
            # entries of row t of B multiplied by the group element g
            shifted = np.zeros((B.cols, ell), dtype=np.uint8)
            shifted[:, G.compose(g, idx)] = B.data[t]
            out[A.data[:, t, g] == 1] ^= shifted
    return AlgMatrix(G, out)


def conj_transpose(A: AlgMatrix) -> AlgMatrix:
    """A* with entries antipode(a_ji)."""
    G = A.group
    data = np.zeros((A.cols, A.rows, G.order), dtype=np.uint8)
    data[:, :, G.inverse(np.arange(G.order))] = A.data.transpose(1, 0, 2)
    return AlgMatrix(G, data)


def block_lift(A: AlgMatrix | AlgElem) -> BinMatrix:
    """Binary (l m) x (l n) matrix obtained by replacing entries by l x l blocks."""
    if isinstance(A, AlgElem):
        A = AlgMatrix(A.group, A.coeffs[None, None, :])
    ell = A.group.order
    m, n = A.shape
    blocks = A.data[:, :, A.group.difference_table]  # (m, n, l, l)
    dense = blocks.transpose(0, 2, 1, 3).reshape(m * ell, n * ell)
    return BinMatrix.from_dense(dense)


def block_vector(v: AlgMatrix) -> np.ndarray:
    """Flatten an n x 1 matrix over F2G into its length n*l binary vector."""
    return v.data.reshape(-1).copy()


def weight_matrix(A: AlgMatrix) -> np.ndarray:
    return A.data.sum(axis=2, dtype=np.int64)


def w_limit(A: AlgMatrix) -> int:
    """Largest row or column sum of the weight matrix."""
    W = weight_matrix(A)
    if W.size == 0:
        return 0
    return int(max(W.sum(axis=0).max(), W.sum(axis=1).max()))


# ---------------------------------------------------------------- factorization


@dataclass(frozen=True)
class PolyFactorization:
    ell: int
    factors: tuple[int, ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(poly2.deg(f) for f in self.factors)

    def product(self) -> int:
        out = 1
        for f in self.factors:
            out = poly2.mul(out, f)
        return out

    def __str__(self) -> str:
        return " * ".join(f"({poly2.to_str(f)})" for f in self.factors)


def _distinct_degree(f: int) -> list[tuple[int, int]]:
    """Split a square-free f into (degree, product of all factors of that degree)."""
    out = []
    xq = 0b10
    d = 0
    while poly2.deg(f) >= 2 * (d + 1):
        d += 1
        xq = poly2.mulmod(xq, xq, f)
        g = poly2.gcd(f, xq ^ 0b10)
        if g != 1:
            out.append((d, g))
            f = poly2.divmod2(f, g)[0]
            xq = poly2.mod(xq, f)
    if poly2.deg(f) > 0:
        out.append((poly2.deg(f), f))
    return out


def _equal_degree(f: int, d: int, rng: np.random.Generator) -> list[int]:
    """Cantor-Zassenhaus splitting in characteristic 2 using the trace map."""
    if poly2.deg(f) == d:
        return [f]
    n = poly2.deg(f)
    while True:
        a = int.from_bytes(rng.bytes((n + 7) // 8), "little") & ((1 << n) - 1)
        if poly2.deg(a) < 1:
            continue
        # trace from F_{2^d}: a + a^2 + ... + a^(2^(d-1))
        t = a
        s = a
        for _ in range(d - 1):
            s = poly2.mulmod(s, s, f)
            t ^= s
        g = poly2.gcd(f, t)
        if 0 < poly2.deg(g) < n:
            return _equal_degree(g, d, rng) + _equal_degree(poly2.divmod2(f, g)[0], d, rng)


def factor_cyclic(ell: int) -> PolyFactorization:
    """Irreducible factors of x^ell - 1 over F2 for odd ell, sorted by (degree, value)."""
    if ell < 1:
        raise DomainError(f"ell must be >= 1, got {ell}")
    if ell % 2 == 0:
        raise UnsupportedError("x^l - 1 has repeated factors for even l")
    f = (1 << ell) | 1
    rng = np.random.default_rng(ell)
    factors: list[int] = []
    for d, g in _distinct_degree(f):
        factors.extend(_equal_degree(g, d, rng))
    factors.sort(key=lambda p: (poly2.deg(p), p))
    return PolyFactorization(ell, tuple(factors))


def _require_cyclic(G: GroupSpec) -> int:
    if not G.is_cyclic:
        raise UnsupportedError(f"quotient maps are implemented for cyclic groups only, got {G}")
    return G.order


def reduce_mod(a: AlgElem, b: int) -> int:
    """phi_b(a) = a mod b as a residue of F2[x]/(b)."""
    ell = _require_cyclic(a.group)
    if b == 0 or poly2.mod((1 << ell) | 1, b):
        raise DomainError(f"{poly2.to_str(b)} does not divide x^{ell} - 1")
    return poly2.mod(a.to_poly(), b)


def eval_matrix(A: AlgMatrix, b: int) -> GfMatrix:
    """Entrywise phi_b into the field F2[x]/(b)."""
    ell = _require_cyclic(A.group)
    if b == 0 or poly2.mod((1 << ell) | 1, b):
        raise DomainError(f"{poly2.to_str(b)} does not divide x^{ell} - 1")
    fld = FieldSpec(b)
    rows = []
    for i in range(A.rows):
        rows.append(tuple(poly2.mod(A[i, j].to_poly(), b) for j in range(A.cols)))
    return GfMatrix(fld, tuple(rows))


def crt_decompose(A: AlgMatrix) -> list[GfMatrix]:
    """One field component per irreducible factor of x^l - 1 (odd cyclic l)."""
    ell = _require_cyclic(A.group)
    fac = factor_cyclic(ell)
    return [eval_matrix(A, f) for f in fac.factors]


# ---------------------------------------------------------------- text format

_GROUP_RE = re.compile(r"^\s*group\s*:\s*(.*?)\s*$")
_CYC_RE = re.compile(r"^C(\d+)$")
_MONO_RE = re.compile(r"^([a-zA-Z]\w*?)(\d*)(?:\^(-?\d+))?$")


def parse_group(text: str, line: int = 1) -> GroupSpec:
    parts = [p.strip() for p in re.split(r"[x×]", text.strip()) if p.strip()]
    orders = []
    for p in parts:
        m = _CYC_RE.match(p)
        if not m or int(m.group(1)) < 1:
            raise ParseError(f"bad cyclic factor {p!r}", line=line, column=text.find(p) + 1, token=p)
        orders.append(int(m.group(1)))
    if not orders:
        raise ParseError("empty group description", line=line, column=1)
    return GroupSpec(tuple(orders))


def _parse_monomial(tok: str, G: GroupSpec, line: int, col: int) -> int:
    if tok == "1":
        return 0
    k = len(G.orders)
    digits = [0] * k
    for factor in tok.split("*"):
        factor = factor.strip()
        m = _MONO_RE.match(factor)
        if not m or m.group(1) != "x":
            raise ParseError(f"bad monomial {tok!r}", line=line, column=col, token=tok)
        sub = m.group(2)
        if k == 1:
            if sub not in ("", "1"):
                raise ParseError(f"variable {factor!r} does not exist in a cyclic group", line=line, column=col, token=tok)
            pos = 0
        else:
            if not sub or not 1 <= int(sub) <= k:
                raise ParseError(f"variable must be x1..x{k}, got {factor!r}", line=line, column=col, token=tok)
            pos = int(sub) - 1
        digits[pos] += int(m.group(3)) if m.group(3) is not None else 1
    return int(G.index(digits))


def parse_entry(text: str, G: GroupSpec, line: int = 1, col: int = 1) -> AlgElem:
    text = text.strip()
    if not text:
        raise ParseError("empty matrix entry", line=line, column=col)
    c = np.zeros(G.order, dtype=np.uint8)
    if text == "0":
        return AlgElem(G, c)
    offset = 0
    for tok in text.split("+"):
        stripped = tok.strip()
        if not stripped:
            raise ParseError("empty monomial", line=line, column=col + offset, token=text)
        c[_parse_monomial(stripped, G, line, col + offset + tok.find(stripped))] ^= 1
        offset += len(tok) + 1
    return AlgElem(G, c)


def parse_matrix(text: str) -> AlgMatrix:
    """Read the polynomial-matrix text format.

    The first non-blank line is ``group: C<l1>xC<l2>...``; each later non-blank
    line is a matrix row with comma-separated entries. Lines starting with
    ``#`` are ignored.
    """
    lines = text.splitlines()
    G = None
    rows: list[list[AlgElem]] = []
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        if G is None:
            m = _GROUP_RE.match(raw)
            if not m:
                raise ParseError("expected 'group: C<l>' header", line=lineno, column=1, token=raw.strip())
            G = parse_group(m.group(1), lineno)
            continue
        entries = []
        col = 1
        for field_text in raw.split(","):
            entries.append(parse_entry(field_text, G, lineno, col))
            col += len(field_text) + 1
        if rows and len(entries) != len(rows[0]):
            raise ParseError(f"row has {len(entries)} entries, expected {len(rows[0])}", line=lineno, column=1)
        rows.append(entries)
    if G is None:
        raise ParseError("missing 'group:' header", line=1, column=1)
    if not rows:
        return AlgMatrix.zeros(G, 0, 0)
    return AlgMatrix.from_entries(G, rows)


def format_elem(a: AlgElem) -> str:
    G = a.group
    terms = []
    for g in a.support():
        if g == 0:
            terms.append("1")
        elif G.is_cyclic:
            terms.append("x" if g == 1 else f"x^{g}")
        else:
            digits = G.digits(int(g))
            parts = [f"x{p + 1}" if d == 1 else f"x{p + 1}^{d}" for p, d in enumerate(digits) if d]
            terms.append("*".join(parts))
    return "+".join(terms) if terms else "0"


def format_matrix(A: AlgMatrix) -> str:
    lines = [f"group: {A.group}"]
    for i in range(A.rows):
        lines.append(", ".join(format_elem(A[i, j]) for j in range(A.cols)))
    return "\n".join(lines) + "\n"
