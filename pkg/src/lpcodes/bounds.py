"""Permanent-based distance bounds for quasi-cyclic codes and the autocorrelation witness."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import DomainError
from .groupring import AlgElem, AlgMatrix

PERMANENT_CAP = 20
QC_BOUND_MAX_N = 24
QC_BOUND_MAX_M = 10
_INT64_SAFE = 1 << 62


def _as_square(W) -> np.ndarray:
    W = np.asarray(W)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {W.shape}")
    if W.size and W.min() < 0:
        raise DomainError("entries must be nonnegative")
    return W


def permanent(W) -> int:
    """Exact permanent by Ryser's formula with a Gray-code walk over column subsets."""
    W = _as_square(W)
    n = W.shape[0]
    if n > PERMANENT_CAP:
        raise DomainError(f"size {n} exceeds the permanent cap {PERMANENT_CAP}")
    if n == 0:
        return 1
    cols = [[int(v) for v in W[:, j]] for j in range(n)]
    sums = [0] * n
    total = 0
    gray = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray ^= 1 << j
        sign = 1 if gray >> j & 1 else -1
        cj = cols[j]
        for i in range(n):
            sums[i] += sign * cj[i]
        term = math.prod(sums)
        total += -term if bin(gray).count("1") % 2 else term
    return total * (-1) ** n


def perm_upper_trivial(W) -> int:
    """Product of the column sums, an upper bound on the permanent."""
    W = _as_square(W)
    return math.prod(int(s) for s in W.sum(axis=0))


def _batch_bordered_permanents(W: np.ndarray, subsets: np.ndarray) -> np.ndarray:
    """perm([1; W_S]) = sum_i perm W_{S minus i} for a batch of column subsets S of size m + 1."""
    m = W.shape[0]
    k = m + 1
    M = np.concatenate([np.ones((subsets.shape[0], 1, k), dtype=np.int64), W[:, subsets].transpose(1, 0, 2)], axis=1)
    masks = ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1).astype(np.int64)  # (2^k, k)
    sums = M @ masks.T  # (B, k, 2^k)
    signs = (-1) ** (k - masks.sum(axis=1))
    return (sums.prod(axis=1) * signs).sum(axis=1)


def qc_distance_bound(W, chunk: int = 4096) -> int | float:
    """min* over |S| = m + 1 of sum_{i in S} perm W_{S minus i}, columns taken from W.

    Zero sums are skipped; if every sum vanishes the result is ``math.inf``.
    """
    W = np.asarray(W, dtype=np.int64)
    if W.ndim != 2:
        raise DomainError("weight matrix must be two-dimensional")
    m, n = W.shape
    if m >= n:
        raise DomainError("the bound needs m < n; with m = n it no longer applies")
    if n > QC_BOUND_MAX_N or m > QC_BOUND_MAX_M:
        raise DomainError(f"size cap is n <= {QC_BOUND_MAX_N}, m <= {QC_BOUND_MAX_M}")
    if W.size and W.min() < 0:
        raise DomainError("entries must be nonnegative")
    # each of the 2^(m+1) Ryser terms is at most the product of the bordered row sums
    row_max = max(int(W.sum(axis=1).max()) if m else 1, 1)
    fits = (1 << (m + 1)) * (m + 1) * row_max**m < _INT64_SAFE
    best = math.inf
    combos = itertools.combinations(range(n), m + 1)
    while True:
        batch = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
        if batch.size == 0:
            break
        if fits:
            vals = _batch_bordered_permanents(W, batch)
        else:
            vals = [sum(permanent(W[:, [c for c in S if c != i]]) for i in S) for S in batch.tolist()]
        nonzero = [int(v) for v in np.asarray(vals, dtype=object) if v]
        if nonzero:
            best = min(best, min(nonzero))
    return best


def limited_bound(m: int, w: int) -> int:
    """(m + 1) w^m, implied by the trivial permanent bound for w-limited weight matrices."""
    return (m + 1) * w**m


# ---------------------------------------------------------------- autocorrelation


def _blocks(a) -> np.ndarray:
    """(n, l) coefficient array from an AlgMatrix column, a list of AlgElem or an array."""
    if isinstance(a, AlgMatrix):
        return a.data.reshape(-1, a.group.order)
    if isinstance(a, AlgElem):
        return a.coeffs[None, :]
    if isinstance(a, (list, tuple)) and a and isinstance(a[0], AlgElem):
        return np.stack([e.coeffs for e in a])
    arr = np.asarray(a, dtype=np.uint8) & 1
    return arr[None, :] if arr.ndim == 1 else arr


def shifted_weights(a) -> np.ndarray:
    """|(1 + x^t) a| for t = 0..l-1."""
    blocks = _blocks(a)
    ell = blocks.shape[1]
    return np.array([int((blocks ^ np.roll(blocks, t, axis=1)).sum()) for t in range(ell)], dtype=np.int64)


def autocorr_witness(a) -> int:
    """Smallest t in 1..l-1 with |(1 + x^t) a| >= |a|, for blocks of weight at most l/2."""
    blocks = _blocks(a)
    ell = blocks.shape[1]
    weights = blocks.sum(axis=1)
    if np.any(2 * weights > ell):
        raise DomainError("every block must have weight at most l/2")
    total = int(weights.sum())
    if total == 0:
        raise DomainError("a = 0 needs no witness")
    sw = shifted_weights(blocks)
    good = np.flatnonzero(sw[1:] >= total)
    if good.size == 0:  # excluded by the averaging argument
        raise AssertionError("no shift witness found")
    return int(good[0]) + 1


def averaging_holds(a) -> bool:
    """sum_t |(1 + x^t) a| >= |a| l."""
    blocks = _blocks(a)
    return int(shifted_weights(blocks).sum()) >= int(blocks.sum()) * blocks.shape[1]
