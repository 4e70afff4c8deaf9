"""Regular graphs, spectra, shift lifts, Tanner codes and expansion checks.

Edge conventions: a Graph keeps its edge list in the order given, and that
order is the edge indexing used by Tanner codes. ``Graph.canonical`` sorts by
(min endpoint, max endpoint) with parallel edges kept in input order, which
is the indexing produced by ``random_regular``. A shift lift orients each
base edge from its first to its second endpoint; lifted edge (e, j) joins
replica j of the tail to replica j + s(e) of the head, has index e * l + j,
and replica i of vertex v has index v * l + i.

At each vertex the incident edges (ports) are ordered by ascending edge
index, and port p is constrained by column p of the local check matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import autocorr_witness  # noqa: F401  (re-exported)
from .csscode import css_dimension, distance_upper, limitedness
from .errors import BudgetExceededError, DimensionError, DomainError, SearchExhaustedError
from .f2core import BinMatrix, f2_in_row_space, f2_rank, pack_rows
from .groupring import AlgElem, AlgMatrix, GroupSpec, block_lift, conj_transpose, w_limit


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected multigraph on vertices 0..n-1."""

    n: int
    edges: np.ndarray  # (E, 2) int64
    simple: bool = True

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= self.n):
            raise DomainError("edge endpoint out of range")
        if self.simple and edges.size:
            if np.any(edges[:, 0] == edges[:, 1]):
                raise DomainError("simple graph with a loop")
            keys = {(min(u, v), max(u, v)) for u, v in edges.tolist()}
            if len(keys) != len(edges):
                raise DomainError("simple graph with a repeated edge")
        edges = edges.copy()
        edges.flags.writeable = False
        object.__setattr__(self, "edges", edges)

    @property
    def num_edges(self) -> int:
        return self.edges.shape[0]

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        np.add.at(deg, self.edges[:, 0], 1)
        np.add.at(deg, self.edges[:, 1], 1)
        return deg

    @property
    def regular_degree(self) -> int | None:
        deg = self.degrees()
        return int(deg[0]) if self.n and np.all(deg == deg[0]) else None

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        np.add.at(A, (self.edges[:, 0], self.edges[:, 1]), 1)
        np.add.at(A, (self.edges[:, 1], self.edges[:, 0]), 1)
        return A

    def canonical(self) -> Graph:
        """Same graph with edges sorted by (min endpoint, max endpoint), stable for parallel edges."""
        e = np.sort(self.edges, axis=1)
        order = np.lexsort((e[:, 1], e[:, 0]))
        return Graph(self.n, e[order], self.simple)

    def ports(self) -> list[list[int]]:
        """Incident edge indices per vertex, ascending."""
        out: list[list[int]] = [[] for _ in range(self.n)]
        for idx, (u, v) in enumerate(self.edges.tolist()):
            out[u].append(idx)
            if v != u:
                out[v].append(idx)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges})"


def complete_graph(n: int) -> Graph:
    return Graph(n, np.array(list(itertools.combinations(range(n), 2)), dtype=np.int64).reshape(-1, 2))


def cycle_graph(n: int) -> Graph:
    return Graph(n, np.array([(i, (i + 1) % n) for i in range(n)], dtype=np.int64)).canonical()


def random_regular(n: int, w: int, seed: int = 0, max_restarts: int = 1000) -> Graph:
    """Simple w-regular graph from the pairing model.

    Points are paired one random pair at a time; a pair that would create a
    loop or a repeated edge is redrawn, and the whole pairing restarts when no
    admissible pair is left. The result is canonicalized.
    """
    if n * w % 2:
        raise DomainError(f"n * w must be even, got n={n}, w={w}")
    if not 0 <= w < n:
        raise DomainError(f"need 0 <= w < n, got n={n}, w={w}")
    rng = np.random.default_rng(seed)
    for _ in range(max_restarts):
        points = list(np.repeat(np.arange(n), w))
        adj = [set() for _ in range(n)]
        edges = []
        ok = True
        while points:
            found = False
            for _attempt in range(50):
                i, j = rng.choice(len(points), size=2, replace=False)
                u, v = points[i], points[j]
                if u != v and v not in adj[u]:
                    found = True
                    break
            if not found:
                # fall back to the admissible pairs that remain, if any
                cand = [
                    (i, j)
                    for i in range(len(points))
                    for j in range(i + 1, len(points))
                    if points[i] != points[j] and points[j] not in adj[points[i]]
                ]
                if not cand:
                    ok = False
                    break
                i, j = cand[rng.integers(len(cand))]
                u, v = points[i], points[j]
            adj[u].add(v)
            adj[v].add(u)
            edges.append((min(u, v), max(u, v)))
            for k in sorted((i, j), reverse=True):
                points.pop(k)
        if ok:
            return Graph(n, np.array(edges, dtype=np.int64).reshape(-1, 2)).canonical()
    raise SearchExhaustedError(f"no simple {w}-regular graph on {n} vertices after {max_restarts} restarts")


# ---------------------------------------------------------------- spectra


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray  # descending
    lam: float
    tolerance: float = 1e-9


def spectrum_lambda(G: Graph) -> SpectralReport:
    """Adjacency spectrum and lambda(G) = max(|lambda_2|, |lambda_n|)."""
    eig = np.linalg.eigvalsh(G.adjacency().astype(np.float64))[::-1].copy()
    if eig.size < 2:
        lam = 0.0
    else:
        lam = float(max(abs(eig[1]), abs(eig[-1])))
    return SpectralReport(eig, lam)


def internal_edges(G: Graph, S) -> int:
    mask = np.zeros(G.n, dtype=bool)
    mask[np.asarray(list(S), dtype=np.int64)] = True
    return int(np.sum(mask[G.edges[:, 0]] & mask[G.edges[:, 1]]))


def mixing_check(G: Graph, S, alpha: float | None = None, lam: float | None = None) -> tuple[bool, float]:
    """Check |E(S)| <= (alpha + lam / w) w |S| / 2; returns (holds, slack)."""
    w = G.regular_degree
    if w is None:
        raise DomainError("mixing bound needs a regular graph")
    S = set(int(v) for v in S)
    if alpha is None:
        alpha = len(S) / G.n
    if len(S) > alpha * G.n + 1e-12:
        raise DomainError(f"|S| = {len(S)} exceeds alpha * n = {alpha * G.n}")
    if lam is None:
        lam = spectrum_lambda(G).lam
    bound = 0.5 * (alpha + lam / w) * w * len(S)
    slack = bound - internal_edges(G, S)
    return slack >= -1e-9, float(slack)


# ---------------------------------------------------------------- lifts


@dataclass(frozen=True, eq=False)
class ShiftLift:
    base: Graph
    ell: int
    shifts: np.ndarray  # per base edge, oriented edges[e, 0] -> edges[e, 1]

    def __post_init__(self):
        shifts = np.asarray(self.shifts, dtype=np.int64).reshape(-1)
        if shifts.shape[0] != self.base.num_edges:
            raise DimensionError("one shift per base edge is required")
        if self.ell < 1 or np.any((shifts < 0) | (shifts >= self.ell)):
            raise DomainError("shifts must lie in [0, l)")
        shifts = shifts.copy()
        shifts.flags.writeable = False
        object.__setattr__(self, "shifts", shifts)

    @property
    def num_vertices(self) -> int:
        return self.ell * self.base.n

    def project(self, vertex: int) -> int:
        return vertex // self.ell


def shift_lift(G: Graph, ell: int, seed: int | None = 0, shifts=None) -> tuple[Graph, ShiftLift]:
    """Shift l-lift with random (seeded) or explicit shifts."""
    if ell < 1:
        raise DomainError("l must be >= 1")
    if shifts is None:
        shifts = np.random.default_rng(seed).integers(0, ell, size=G.num_edges)
    lift = ShiftLift(G, ell, shifts)
    j = np.arange(ell)
    tails = G.edges[:, 0:1] * ell + j[None, :]
    heads = G.edges[:, 1:2] * ell + (j[None, :] + lift.shifts[:, None]) % ell
    edges = np.stack([tails.reshape(-1), heads.reshape(-1)], axis=1)
    return Graph(ell * G.n, edges, simple=False), lift


# ---------------------------------------------------------------- Tanner codes


@dataclass(frozen=True, eq=False)
class TannerSpec:
    """Graph plus local check matrix; edges are indexed by their list position."""

    graph: Graph
    H0: BinMatrix

    def __post_init__(self):
        w = self.graph.regular_degree
        if w is None or w != self.H0.cols:
            raise DimensionError(f"graph must be {self.H0.cols}-regular to match the local code")
        if f2_rank(self.H0) != self.H0.rows:
            raise DomainError("local check matrix must have full row rank")

    @classmethod
    def canonical(cls, graph: Graph, H0: BinMatrix) -> TannerSpec:
        return cls(graph.canonical(), H0)


def tanner_parity(spec: TannerSpec) -> BinMatrix:
    """Parity checks of T(G, C0): r rows per vertex, vertex-major, one column per edge."""
    G, H0 = spec.graph, spec.H0.to_dense()
    r = H0.shape[0]
    H = np.zeros((G.n * r, G.num_edges), dtype=np.uint8)
    for v, port_list in enumerate(G.ports()):
        for p, e in enumerate(port_list):
            H[v * r : (v + 1) * r, e] ^= H0[:, p]
    return BinMatrix.from_dense(H)


def qc_tanner_parity(base: Graph, lift: ShiftLift, H0: BinMatrix) -> AlgMatrix:
    """Quasi-cyclic check matrix over R_l of the Tanner code on the lifted graph.

    Rows (v, t) are vertex-major over the base; the tail of edge e carries
    h(e) and the head carries x^s(e) h'(e).
    """
    if lift.base != base:
        raise DomainError("lift does not belong to this base graph")
    TannerSpec(base, H0)  # validates regularity and rank
    if np.any(base.edges[:, 0] == base.edges[:, 1]):
        raise DomainError("base graph must not have loops")
    h0 = H0.to_dense()
    r = h0.shape[0]
    ell = lift.ell
    data = np.zeros((base.n * r, base.num_edges, ell), dtype=np.uint8)
    ports = base.ports()
    position = [{e: p for p, e in enumerate(pl)} for pl in ports]
    for e, (u, v) in enumerate(base.edges.tolist()):
        s = int(lift.shifts[e])
        data[u * r : (u + 1) * r, e, 0] ^= h0[:, position[u][e]]
        data[v * r : (v + 1) * r, e, s] ^= h0[:, position[v][e]]
    return AlgMatrix(GroupSpec.cyclic(ell), data)


def qc_row_permutation(num_base_vertices: int, r: int, ell: int) -> np.ndarray:
    """perm with block_lift(qc)[perm] == tanner_parity(lift): row (v*l + i)*r + t <- (v*r + t)*l + i."""
    v, i, t = np.meshgrid(np.arange(num_base_vertices), np.arange(ell), np.arange(r), indexing="ij")
    return ((v * r + t) * ell + i).reshape(-1)


# ---------------------------------------------------------------- expansion


@dataclass(frozen=True)
class ExpansionCert:
    alpha: float
    beta: float
    verified_up_to: int
    counterexample: np.ndarray | None = None
    min_ratio: float = math.inf  # smallest |Hx| / |x| seen

    @property
    def holds(self) -> bool:
        return self.counterexample is None


def _combination_count(n: int, kmax: int) -> int:
    return sum(math.comb(n, k) for k in range(1, kmax + 1))


def certify_expanding(H: BinMatrix, alpha: float, beta: float, budget: int = 20_000_000) -> ExpansionCert:
    """Exhaustively check |Hx| >= beta |x| for every x with 1 <= |x| <= alpha * cols."""
    n = H.cols
    kmax = int(math.floor(alpha * n + 1e-12))
    need = _combination_count(n, kmax)
    if need > budget:
        raise BudgetExceededError(f"{need} vectors to check, budget is {budget}", required=need)
    cols = pack_rows(H.to_dense().T)  # one packed column per input bit
    min_ratio = math.inf
    for k in range(1, kmax + 1):
        combos = itertools.combinations(range(n), k)
        while True:
            chunk = np.array(list(itertools.islice(combos, 65536)), dtype=np.int64)
            if chunk.size == 0:
                break
            syn = np.bitwise_xor.reduce(cols[chunk], axis=1)
            weights = np.bitwise_count(syn).sum(axis=1)
            ratios = weights / k
            min_ratio = min(min_ratio, float(ratios.min()))
            bad = np.flatnonzero(weights < beta * k - 1e-12)
            if bad.size:
                x = np.zeros(n, dtype=np.uint8)
                x[chunk[bad[0]]] = 1
                return ExpansionCert(alpha, beta, k, x, min_ratio)
    return ExpansionCert(alpha, beta, kmax, None, min_ratio)


@dataclass(frozen=True)
class TannerExpansionParams:
    premise_holds: bool
    alpha_max: float
    beta_at: dict = field(default_factory=dict)
    reasons: tuple[str, ...] = ()


def tanner_expansion_beta(alpha: float, delta: float, w: int, lam: float) -> float:
    return (delta - alpha * w - lam / w) / (delta * w)


def tanner_expansion_params(delta: float, w: int, lam: float, d_local: int, d_dual: int, alphas=()) -> TannerExpansionParams:
    """Expansion parameters guaranteed for Tanner codes on a (2n, w, lam)-expander.

    The premise needs lam < delta w and both local distances at least delta w.
    """
    reasons = []
    if not lam < delta * w:
        reasons.append(f"lambda = {lam:.6g} is not below delta * w = {delta * w:.6g}")
    if d_local < delta * w:
        reasons.append(f"d(C0) = {d_local} < delta * w")
    if d_dual < delta * w:
        reasons.append(f"d(C0 dual) = {d_dual} < delta * w")
    alpha_max = (delta / w) * (1 - lam / (delta * w))
    betas = {a: tanner_expansion_beta(a, delta, w, lam) for a in alphas}
    return TannerExpansionParams(not reasons, alpha_max, betas, tuple(reasons))


def local_code_distances(H0: BinMatrix) -> tuple[int, int]:
    """(d(C0), d(C0 dual)) by enumeration; math.inf for a zero-dimensional code."""
    from .csscode import classical_code, exact_distance
    from .f2core import f2_kernel_basis

    d = exact_distance(classical_code(H0), "Z", budget=24)
    G = f2_kernel_basis(H0)  # generator of C0 = parity checks of the dual
    d_dual = exact_distance(classical_code(G), "Z", budget=24) if G.rows else math.inf
    return d, d_dual


def local_code_search(w: int, r: int, delta: float, seed: int = 0, attempts: int = 10_000) -> BinMatrix:
    """Random full-rank r x w check matrix with d(C0), d(C0 dual) >= delta w."""
    if not 0 < r < w:
        raise DomainError(f"need 0 < r < w, got r={r}, w={w}")
    if w > 24:
        raise DomainError("local codes are verified by enumeration, so w <= 24")
    rng = np.random.default_rng(seed)
    target = delta * w
    best = (-1.0, None)
    for _ in range(attempts):
        H0 = BinMatrix.from_dense(rng.integers(0, 2, size=(r, w), dtype=np.uint8))
        if f2_rank(H0) != r:
            continue
        d, d_dual = local_code_distances(H0)
        achieved = min(d, d_dual) / w
        if achieved > best[0]:
            best = (achieved, H0)
        if d >= target and d_dual >= target:
            return H0
    raise SearchExhaustedError(f"no local code met delta = {delta}; best achieved {best[0]:.4g}", best=best)


def prop3_gamma(alpha: float, beta: float, w: int) -> float:
    """min(min(alpha / 2, alpha beta / 4), alpha / (4 w) * min(beta, 1))."""
    if alpha <= 0 or beta <= 0 or w < 1:
        raise DomainError("need alpha, beta > 0 and w >= 1")
    gamma1 = min(alpha / 2, alpha * beta / 4)
    gamma2 = alpha / (4 * w) * min(beta, 1)
    return min(gamma1, gamma2)


# ---------------------------------------------------------------- pipeline


def dx_witness(A: AlgMatrix) -> np.ndarray | None:
    """X-codeword [1_l e_i, 0] of LP(A, 1+x) with e_i outside the row space of A(1), or None."""
    m, n = A.shape
    ell = A.group.order
    B = BinMatrix.from_dense((A.data.sum(axis=2) & 1).astype(np.uint8).reshape(m, n))
    for i in range(n):
        e = np.zeros(n, dtype=np.uint8)
        e[i] = 1
        if not f2_in_row_space(B, e):
            x = np.zeros(ell * (n + m), dtype=np.uint8)
            x[i * ell : (i + 1) * ell] = 1
            return x
    return None


def theorem1_pipeline(
    ell: int,
    n: int,
    w: int,
    r: int,
    delta: float,
    seed: int = 0,
    alpha: float | None = None,
    certify_budget: int = 2_000_000,
    upper_trials: int = 200,
) -> dict:
    """Base graph -> shift lift -> QC Tanner matrix A -> LP(A, 1+x), with diagnostics.

    ``n`` is the number of base-graph vertices, so A has r n rows and w n / 2
    columns over R_l.
    """
    from .csscode import is_codeword, is_degenerate
    from .products import lp_ab, lp_ab_dim

    base = random_regular(n, w, seed)
    H0 = local_code_search(w, r, delta, seed)
    lifted, lift = shift_lift(base, ell, seed)
    A = qc_tanner_parity(base, lift, H0)
    Q = lp_ab(A, AlgElem.from_poly(ell, 0b11))
    k_rank = css_dimension(Q)
    k_formula = lp_ab_dim(A, 0b11)
    report: dict = {
        "ell": ell,
        "base_vertices": n,
        "w": w,
        "r": r,
        "delta": delta,
        "seed": seed,
        "A_shape": list(A.shape),
        "N": Q.n,
        "k": k_rank,
        "k_formula": k_formula,
        "limitedness": limitedness(Q),
        "A_w_limit": w_limit(A),
        "lambda_base": spectrum_lambda(base).lam,
        "lambda_lift": spectrum_lambda(lifted).lam,
        "local_distances": list(local_code_distances(H0)),
    }
    H = block_lift(A)
    HT = block_lift(conj_transpose(A))
    if alpha is None:
        alpha = 2.0 / max(H.cols, HT.cols)
    certs = {}
    for name, M in (("A", H), ("A_T", HT)):
        try:
            certs[name] = certify_expanding(M, alpha, beta=1e-9, budget=certify_budget)
        except BudgetExceededError as exc:
            certs[name] = exc
    report["expansion"] = {
        name: (
            {"alpha": c.alpha, "verified_up_to": c.verified_up_to, "min_ratio": c.min_ratio, "holds": c.holds}
            if isinstance(c, ExpansionCert)
            else {"skipped": str(c)}
        )
        for name, c in certs.items()
    }
    good = [c for c in certs.values() if isinstance(c, ExpansionCert) and c.holds and c.min_ratio > 0]
    if len(good) == 2:
        beta = min(c.min_ratio for c in good)
        report["gamma"] = prop3_gamma(alpha, beta, w_limit(A))
        report["gamma_ell"] = report["gamma"] * ell
    x = dx_witness(A)
    if x is not None:
        report["dx_witness_weight"] = int(x.sum())
        report["dx_witness_valid"] = bool(is_codeword(Q, "X", x) and not is_degenerate(Q, "X", x))
        report["dx_upper"] = ell
    if k_rank:
        report["dz_upper_estimate"] = distance_upper(Q, "Z", seed=seed, trials=upper_trials)
        report["dx_upper_estimate"] = distance_upper(Q, "X", seed=seed, trials=upper_trials)
    report["_code"] = Q
    report["_A"] = A
    return report
