"""CSS codes: construction, dimension, distances, limitedness, codeword classification.

Conventions: the Z side consists of vectors in ker HX, and a Z-codeword is
degenerate when it lies in the row space of HZ. The X side swaps the roles.
A classical code with parity-check matrix H is modelled as ``CssCode(H, 0xn)``
and its minimum distance is the Z-side distance.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .errors import (
    BudgetExceededError,
    ClassificationError,
    DimensionError,
    DomainError,
    OrthogonalityError,
)
from .f2core import (
    BinMatrix,
    Echelon,
    _rref,
    f2_in_row_space,
    f2_kernel_basis,
    f2_rank,
    f2_solve,
    pack_rows,
    unpack_rows,
)
from .groupring import AlgElem, AlgMatrix, alg_matmul

SIDES = ("Z", "X")
DEFAULT_BUDGET = 26


@dataclass(frozen=True, eq=False)
class CssCode:
    """Pair of parity-check matrices with HX HZ^T = 0; build through css_new."""

    HX: BinMatrix
    HZ: BinMatrix
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.HX.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, CssCode):
            return NotImplemented
        return self.HX == other.HX and self.HZ == other.HZ

    def __hash__(self):
        return hash((self.HX, self.HZ))

    def __repr__(self) -> str:
        return f"CssCode(n={self.n}, mX={self.HX.rows}, mZ={self.HZ.rows})"


def css_new(HX: BinMatrix, HZ: BinMatrix, meta: dict | None = None) -> CssCode:
    """Validate orthogonality and wrap the pair."""
    if HX.cols != HZ.cols:
        raise DimensionError(f"HX has {HX.cols} columns but HZ has {HZ.cols}")
    if HX.rows and HZ.rows:
        prod = (HX @ HZ.T).to_dense()
        bad = np.argwhere(prod)
        if bad.size:
            raise OrthogonalityError(int(bad[0, 0]), int(bad[0, 1]))
    return CssCode(HX, HZ, dict(meta or {}))


def classical_code(H: BinMatrix, meta: dict | None = None) -> CssCode:
    """Classical code C(H) as a CSS pair with an empty HZ."""
    return css_new(H, BinMatrix.zeros(0, H.cols), meta)


def css_dimension(Q: CssCode) -> int:
    return Q.n - f2_rank(Q.HX) - f2_rank(Q.HZ)


def css_swap(Q: CssCode) -> CssCode:
    return CssCode(Q.HZ, Q.HX, dict(Q.meta))


def limitedness(Q: CssCode) -> int:
    """Smallest w such that HX and HZ are both w-limited matrices.

    A matrix is w-limited when every row and every column has weight at most
    w. See ``tanner_degree`` for the joint qubit degree of the CSS Tanner graph.
    """
    degrees = [0]
    for H in (Q.HX, Q.HZ):
        if H.rows and H.cols:
            degrees.append(int(H.row_weights().max()))
            degrees.append(int(H.col_weights().max()))
    return max(degrees)


def tanner_degree(Q: CssCode) -> int:
    """Largest node degree of the joint Tanner graph (qubit degree = HX + HZ column weight)."""
    degrees = [0]
    if Q.n:
        degrees.append(int((Q.HX.col_weights() + Q.HZ.col_weights()).max()))
    for H in (Q.HX, Q.HZ):
        if H.rows:
            degrees.append(int(H.row_weights().max()))
    return max(degrees)


def _check_side(side: str) -> str:
    side = side.upper()
    if side not in SIDES:
        raise DomainError(f"side must be 'Z' or 'X', got {side!r}")
    return side


def side_matrices(Q: CssCode, side: str) -> tuple[BinMatrix, BinMatrix]:
    """(check matrix whose kernel holds the codewords, matrix of degenerate ones)."""
    return (Q.HX, Q.HZ) if _check_side(side) == "Z" else (Q.HZ, Q.HX)


def _int_echelon_insert(pivots: dict[int, int], v: int) -> int:
    """Reduce v against an int-keyed echelon basis; insert and return residue."""
    while v:
        top = v.bit_length() - 1
        if top not in pivots:
            pivots[top] = v
            return v
        v ^= pivots[top]
    return 0


def logical_operators(Q: CssCode, side: str) -> BinMatrix:
    """Representatives of the logical operators of ``side``.

    Rows form a basis of the side's codewords modulo its degenerate ones, so
    exactly k rows are returned.
    """
    check, degenerate = side_matrices(Q, side)
    pivots: dict[int, int] = {}
    for r in degenerate.to_int_rows():
        _int_echelon_insert(pivots, r)
    reps = []
    kernel = f2_kernel_basis(check)
    for v in kernel.to_int_rows():
        if _int_echelon_insert(pivots, v):
            reps.append(v)
    return BinMatrix.from_int_rows(reps, Q.n)


def is_degenerate(Q: CssCode, side: str, v) -> bool:
    _, degenerate = side_matrices(Q, side)
    return f2_in_row_space(degenerate, np.asarray(v, dtype=np.uint8))


def is_codeword(Q: CssCode, side: str, v) -> bool:
    check, _ = side_matrices(Q, side)
    return not np.any(check @ np.asarray(v, dtype=np.uint8))


@dataclass
class _SideData:
    n: int
    basis: np.ndarray  # (kdim, n) uint8 kernel basis
    syndromes: np.ndarray  # (kdim, k) uint8 pairing with the opposite logicals

    @property
    def kdim(self) -> int:
        return self.basis.shape[0]

    @property
    def k(self) -> int:
        return self.syndromes.shape[1]


def _side_data(Q: CssCode, side: str) -> _SideData:
    side = _check_side(side)
    check, _ = side_matrices(Q, side)
    basis = f2_kernel_basis(check).to_dense()
    other = "X" if side == "Z" else "Z"
    # a codeword of this side is degenerate iff it pairs trivially with every
    # logical operator of the other side
    logicals = logical_operators(Q, other).to_dense()
    syn = (basis.astype(np.float64) @ logicals.T.astype(np.float64)) % 2
    return _SideData(Q.n, basis, syn.astype(np.uint8).reshape(basis.shape[0], logicals.shape[0]))


# ---------------------------------------------------------------- exact: enumeration


def _low_table(words: np.ndarray) -> np.ndarray:
    """All 2^t XOR combinations of the t rows, in binary counting order."""
    t, nw = words.shape
    table = np.zeros((1 << t, nw), dtype=np.uint64)
    for i in range(t):
        table[1 << i : 2 << i] = table[: 1 << i] ^ words[i]
    return table


def _gray_vector(words: np.ndarray, g: int) -> np.ndarray:
    gray = g ^ (g >> 1)
    v = np.zeros(words.shape[1], dtype=np.uint64)
    i = 0
    while gray:
        if gray & 1:
            v ^= words[i]
        gray >>= 1
        i += 1
    return v


def _enumerate_range(code_words, syn_words, low_bits, start, stop) -> float:
    low_code = _low_table(code_words[:low_bits])
    low_syn = _low_table(syn_words[:low_bits])
    high_code = code_words[low_bits:]
    high_syn = syn_words[low_bits:]
    best = math.inf
    hv = _gray_vector(high_code, start)
    hs = _gray_vector(high_syn, start)
    for g in range(start, stop):
        if g != start:
            flip = (g & -g).bit_length() - 1
            hv ^= high_code[flip]
            hs ^= high_syn[flip]
        nondeg = np.any(low_syn != hs, axis=1)
        if not nondeg.any():
            continue
        weights = np.bitwise_count(low_code[nondeg] ^ hv).sum(axis=1)
        w = int(weights.min())
        if w < best:
            best = w
    return best


def _enumerate_min(data: _SideData, jobs: int = 1, low_bits: int = 18) -> float:
    code_words = pack_rows(data.basis)
    syn_words = pack_rows(data.syndromes)
    t = min(data.kdim, low_bits)
    high = 1 << (data.kdim - t)
    if jobs <= 1 or high < 2:
        return _enumerate_range(code_words, syn_words, t, 0, high)
    bounds = np.linspace(0, high, min(jobs, high) + 1).astype(np.int64)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(_enumerate_range, code_words, syn_words, t, int(a), int(b))
            for a, b in zip(bounds[:-1], bounds[1:])
        ]
        return min(f.result() for f in futures)


# ---------------------------------------------------------------- exact: information sets


def _systematic_forms(basis: np.ndarray, syn: np.ndarray):
    """Row-equivalent generator matrices with pivots on disjoint column sets.

    Returns a list of (packed code rows, packed syndrome rows, rank on the set).
    Column order only matters for pivot choice; weights ignore it, so the
    forms are kept in permuted coordinates.
    """
    kdim, n = basis.shape
    used = np.zeros(n, dtype=bool)
    forms = []
    aug = np.hstack([basis, syn])
    while not used.all():
        free = np.flatnonzero(~used)
        order = np.concatenate([free, np.flatnonzero(used), np.arange(n, aug.shape[1])])
        red, piv = _rref(pack_rows(aug[:, order]), n)
        on_set = [p for p in piv if p < free.size]
        if not on_set:
            break
        rows = unpack_rows(red, aug.shape[1])
        forms.append((pack_rows(rows[:, :n]), pack_rows(rows[:, n:]), len(on_set)))
        used[order[on_set]] = True
    return forms


def _combo_min(code, syn, t: int, best: float) -> float:
    """Lightest non-degenerate XOR of exactly t rows."""
    kdim = code.shape[0]
    if t == 1:
        nondeg = syn.any(axis=1)
        if nondeg.any():
            best = min(best, int(np.bitwise_count(code[nondeg]).sum(axis=1).min()))
        return best
    ii, jj = np.triu_indices(kdim, 1)
    pair_code = code[ii] ^ code[jj]
    pair_syn = syn[ii] ^ syn[jj]
    # pairs are sorted by their first index; offset[i] = first pair starting at i
    offset = np.searchsorted(ii, np.arange(kdim + 1))
    zero_c = np.zeros(code.shape[1], dtype=np.uint64)
    zero_s = np.zeros(syn.shape[1], dtype=np.uint64)
    for prefix in itertools.combinations(range(kdim), t - 2):
        start = offset[prefix[-1] + 1] if prefix else 0
        if start >= len(ii):
            continue
        pc = zero_c.copy()
        ps = zero_s.copy()
        for i in prefix:
            pc ^= code[i]
            ps ^= syn[i]
        nondeg = np.any(pair_syn[start:] != ps, axis=1)
        if not nondeg.any():
            continue
        w = int(np.bitwise_count(pair_code[start:][nondeg] ^ pc).sum(axis=1).min())
        if w < best:
            best = w
    return best


def _information_set_min(data: _SideData, max_combinations: int) -> float:
    kdim = data.kdim
    forms = _systematic_forms(data.basis, data.syndromes)
    best = math.inf
    spent = 0
    for t in range(1, kdim + 1):
        cost = len(forms) * math.comb(kdim, t)
        if spent + cost > max_combinations:
            raise BudgetExceededError(
                f"information-set search needs {spent + cost} combinations at t={t}, "
                f"budget is {max_combinations}",
                required=spent + cost,
            )
        spent += cost
        for code, syn, _ in forms:
            best = _combo_min(code, syn, t, best)
        lower = sum(max(0, t + 1 - (kdim - rank)) for _, _, rank in forms)
        if lower >= best:
            return best
    return best


def exact_distance(
    Q: CssCode,
    side: str = "Z",
    budget: int = DEFAULT_BUDGET,
    method: str = "enumerate",
    jobs: int = 1,
    max_combinations: int = 50_000_000,
) -> int | float:
    """Minimum weight of a non-degenerate codeword of ``side``.

    Args:
        side: "Z" (vectors in ker HX) or "X" (vectors in ker HZ).
        budget: largest kernel dimension accepted by full enumeration.
        method: "enumerate" walks all 2^kdim kernel vectors and refuses beyond
            ``budget``; "infoset" runs a Brouwer-Zimmermann style search with
            disjoint information sets, bounded by ``max_combinations``;
            "auto" enumerates when within budget and falls back otherwise.
        jobs: worker processes for enumeration; the result does not depend on it.

    Returns:
        The distance, or ``math.inf`` when the code has no logical qubits.
    """
    data = _side_data(Q, side)
    if data.k == 0:
        return math.inf
    if method not in ("enumerate", "infoset", "auto"):
        raise DomainError(f"unknown method {method!r}")
    if method == "enumerate" or (method == "auto" and data.kdim <= budget):
        if data.kdim > budget:
            raise BudgetExceededError(
                f"kernel dimension {data.kdim} exceeds the enumeration budget {budget}",
                required=data.kdim,
            )
        return int(_enumerate_min(data, jobs=jobs))
    return int(_information_set_min(data, max_combinations))


# ---------------------------------------------------------------- randomized upper bound


def _trial_min(basis, syn, seeds) -> tuple[float, Any]:
    """Prange / Lee-Brickell (p <= 2) candidates over a batch of trial seeds."""
    kdim, n = basis.shape
    aug = np.hstack([basis, syn])
    ii, jj = np.triu_indices(kdim, 1)
    best = math.inf
    best_vec = None
    for seed in seeds:
        rng = np.random.default_rng(seed)
        perm = rng.permutation(n)
        order = np.concatenate([perm, np.arange(n, aug.shape[1])])
        red, _ = _rref(pack_rows(aug[:, order]), n)
        rows = unpack_rows(red, aug.shape[1])
        code = pack_rows(rows[:, :n])
        cand_code = np.vstack([code, code[ii] ^ code[jj]])
        cand_syn = np.vstack([rows[:, n:], rows[ii, n:] ^ rows[jj, n:]])
        nondeg = cand_syn.any(axis=1)
        if not nondeg.any():
            continue
        weights = np.bitwise_count(cand_code).sum(axis=1).astype(np.int64)
        weights[~nondeg] = np.iinfo(np.int64).max
        pos = int(np.argmin(weights))
        if weights[pos] < best:
            best = int(weights[pos])
            vec = np.zeros(n, dtype=np.uint8)
            vec[perm] = unpack_rows(cand_code[pos : pos + 1], n)[0]
            best_vec = vec
    return best, best_vec


def distance_upper(
    Q: CssCode,
    side: str = "Z",
    seed: int = 0,
    trials: int = 1000,
    jobs: int = 1,
    return_word: bool = False,
):
    """Randomized information-set upper bound on the distance of ``side``.

    Each trial draws a column permutation from a PCG64 generator seeded with
    (seed, trial index), brings the kernel basis to systematic form and
    inspects single rows and pairs of rows. Results are merged by minimum, so
    they depend on ``seed`` and ``trials`` but not on ``jobs``.
    """
    data = _side_data(Q, side)
    if data.k == 0:
        raise DomainError("the code has no logical qubits, so there are no codewords to find")
    seeds = [[seed, t] for t in range(trials)]
    if jobs <= 1:
        best, vec = _trial_min(data.basis, data.syndromes, seeds)
    else:
        chunks = [seeds[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_trial_min, data.basis, data.syndromes, c) for c in chunks]
            results = [f.result() for f in futures]
        # ties go to the earliest chunk; only the returned word can differ
        best, vec = min(results, key=lambda r: r[0])
    if best == math.inf:
        raise DomainError("no non-degenerate codeword found")
    return (best, vec) if return_word else best


# ---------------------------------------------------------------- reports


@dataclass
class CodeParams:
    n: int
    k: int
    dz: int | float | None = None
    dz_kind: str = "unknown"
    dx: int | float | None = None
    dx_kind: str = "unknown"
    w: int = 0
    construction: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = asdict(self)
        for key in ("dz", "dx"):
            if out[key] == math.inf:
                out[key] = "infinity"
        return out


def code_params(
    Q: CssCode,
    distance: str = "none",
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    trials: int = 200,
    jobs: int = 1,
) -> CodeParams:
    """Parameters of Q; ``distance`` is "none", "exact", "upper" or "auto"."""
    params = CodeParams(n=Q.n, k=css_dimension(Q), w=limitedness(Q), construction=dict(Q.meta))
    if distance == "none":
        return params
    for side in SIDES:
        value, kind = None, "unknown"
        if params.k == 0:
            value, kind = math.inf, "exact"
        elif distance in ("exact", "auto"):
            try:
                value, kind = exact_distance(Q, side, budget=budget, jobs=jobs), "exact"
            except BudgetExceededError:
                if distance == "exact":
                    raise
        if kind == "unknown" and distance in ("upper", "auto") and params.k:
            value, kind = distance_upper(Q, side, seed=seed, trials=trials, jobs=jobs), "upper-bound"
        if side == "Z":
            params.dz, params.dz_kind = value, kind
        else:
            params.dx, params.dx_kind = value, kind
    return params


def report_json(params: CodeParams) -> str:
    return json.dumps({"schema": 1, **params.to_json()}, indent=2, sort_keys=True)


# ---------------------------------------------------------------- codeword classification


@dataclass(frozen=True)
class Classification:
    """Outcome of classify_codeword.

    case 1 carries ``u_at_one``; case 2 carries ``h`` (n x 1 over R_l) and ``v_prime``.
    """

    case: int
    u_at_one: np.ndarray | None = None
    h: AlgMatrix | None = None
    v_prime: np.ndarray | None = None


@functools.lru_cache(maxsize=32)
def _lp_one_plus_x_checks(A: AlgMatrix) -> tuple[BinMatrix, Echelon]:
    """HX of LP(A, 1+x) and an echelon form of HZ for repeated degeneracy tests."""
    from .products import lp_ab

    ell = A.group.order
    Q = lp_ab(A, AlgElem.from_poly(ell, 0b11))
    return Q.HX, Echelon.of(Q.HZ)


def _canonical_block(block: np.ndarray) -> np.ndarray:
    ell = block.size
    w = int(block.sum())
    flipped = block ^ 1
    if 2 * w > ell:
        return flipped
    if 2 * w == ell and tuple(flipped) < tuple(block):
        # tie for even l: keep the lexicographically smaller pattern
        return flipped
    return block


def classify_codeword(A: AlgMatrix, z) -> Classification:
    """Classify a non-degenerate Z-codeword [u, v] of LP(A, 1+x)."""
    if not A.group.is_cyclic:
        raise DomainError("classification is defined over the cyclic ring R_l")
    ell = A.group.order
    m, n = A.shape
    z = np.asarray(z, dtype=np.uint8) & 1
    if z.shape != (ell * (n + m),):
        raise DimensionError(f"expected a vector of length {ell * (n + m)}, got {z.shape}")
    HX, HZ_echelon = _lp_one_plus_x_checks(A)
    if np.any(HX @ z):
        raise ClassificationError("vector is not a Z-codeword (HX z != 0)")
    if HZ_echelon.contains(z):
        raise ClassificationError("codeword is degenerate (lies in the row space of HZ)")
    u = z[: ell * n].reshape(n, ell)
    v = z[ell * n :].reshape(m, ell)
    u_at_one = u.sum(axis=1).astype(np.uint8) & 1
    if u_at_one.any():
        return Classification(1, u_at_one=u_at_one)

    # u = (1+x) h: h_0 = 0 and h_j = h_{j-1} + u_j
    h = np.bitwise_xor.accumulate(np.concatenate([np.zeros((n, 1), np.uint8), u[:, 1:]], axis=1), axis=1)
    h = np.array([_canonical_block(row) for row in h], dtype=np.uint8).reshape(n, ell)
    H = AlgMatrix(A.group, h[:, None, :])
    Ah = alg_matmul(A, H).data[:, 0, :]
    r = v ^ Ah
    constant = np.all(r == r[:, :1], axis=1) if ell else np.ones(m, bool)
    if not constant.all():
        raise ClassificationError("v + A h is not of the form 1_l v'; input is inconsistent")
    v_prime = r[:, 0].copy() if ell else np.zeros(m, np.uint8)
    B = A.data.sum(axis=2) & 1  # A(1)
    if f2_solve(BinMatrix.from_dense(B.reshape(m, n)), v_prime) is not None:
        raise ClassificationError("v' lies in the image of A(1); the codeword would be degenerate")
    return Classification(2, h=H, v_prime=v_prime)
