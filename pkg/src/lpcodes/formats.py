"""Text formats: alist parity-check files, integer grids and graph edge lists."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ParseError
from .f2core import BinMatrix


def _tokens(text: str) -> list[tuple[int, list[str]]]:
    """Non-blank, non-comment lines as (line number, whitespace tokens)."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


def _ints(lineno: int, toks: list[str]) -> list[int]:
    vals = []
    col = 1
    for t in toks:
        try:
            vals.append(int(t))
        except ValueError:
            raise ParseError(f"expected an integer, got {t!r}", line=lineno, column=col, token=t) from None
        col += len(t) + 1
    return vals


# ---------------------------------------------------------------- alist


def to_alist(H: BinMatrix) -> str:
    """MacKay alist text: n m / max weights / weights / 1-indexed, zero-padded adjacency."""
    dense = H.to_dense()
    m, n = dense.shape
    cw = dense.sum(axis=0).astype(int)
    rw = dense.sum(axis=1).astype(int)
    max_c = int(cw.max()) if n else 0
    max_r = int(rw.max()) if m else 0
    lines = [f"{n} {m}", f"{max_c} {max_r}", " ".join(map(str, cw)), " ".join(map(str, rw))]
    for j in range(n):
        idx = list(np.flatnonzero(dense[:, j]) + 1) + [0] * (max_c - int(cw[j]))
        lines.append(" ".join(map(str, idx)))
    for i in range(m):
        idx = list(np.flatnonzero(dense[i]) + 1) + [0] * (max_r - int(rw[i]))
        lines.append(" ".join(map(str, idx)))
    return "\n".join(lines) + "\n"


def from_alist(text: str) -> BinMatrix:
    """Parse alist text; column and row lists must describe the same matrix."""
    # blank lines matter here: an empty adjacency list is an empty line
    lines = [(i, raw.split()) for i, raw in enumerate(text.splitlines(), start=1)]
    if len(lines) < 2:
        raise ParseError("alist needs at least the two header lines", line=len(lines) + 1, column=1)
    (l1, t1), (l2, t2) = lines[0], lines[1]
    head = _ints(l1, t1)
    if len(head) != 2 or min(head) < 0:
        raise ParseError("first line must be 'n m'", line=l1, column=1)
    n, m = head
    _ints(l2, t2)
    body, rest = lines[2 : 4 + n + m], lines[4 + n + m :]
    if len(body) < 2 + n + m:
        raise ParseError(f"expected {2 + n + m} lines after the header, got {len(body)}", line=lines[-1][0], column=1)
    for lineno, toks in rest:
        if toks:
            raise ParseError("unexpected content after the row lists", line=lineno, column=1, token=toks[0])
    cw = _ints(*body[0])
    rw = _ints(*body[1])
    if len(cw) != n or len(rw) != m:
        raise ParseError("weight lines do not match n and m", line=body[0][0], column=1)
    dense = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        lineno, toks = body[2 + j]
        idx = [v for v in _ints(lineno, toks) if v]
        if len(idx) != cw[j] or any(not 1 <= v <= m for v in idx):
            raise ParseError(f"column {j + 1} adjacency is inconsistent", line=lineno, column=1)
        dense[np.array(idx, dtype=np.int64) - 1, j] = 1
    check = np.zeros_like(dense)
    for i in range(m):
        lineno, toks = body[2 + n + i]
        idx = [v for v in _ints(lineno, toks) if v]
        if len(idx) != rw[i] or any(not 1 <= v <= n for v in idx):
            raise ParseError(f"row {i + 1} adjacency is inconsistent", line=lineno, column=1)
        check[i, np.array(idx, dtype=np.int64) - 1] = 1
    if not np.array_equal(dense, check):
        raise ParseError("row and column adjacency lists disagree", line=body[2 + n][0], column=1)
    return BinMatrix.from_dense(dense)


def write_alist(path, H: BinMatrix) -> None:
    Path(path).write_text(to_alist(H))


def read_alist(path) -> BinMatrix:
    return from_alist(Path(path).read_text())


# ---------------------------------------------------------------- integer grids


def parse_grid(text: str) -> np.ndarray:
    """Whitespace-separated integer grid, one row per line; '#' starts a comment."""
    rows = [(ln, _ints(ln, toks)) for ln, toks in _tokens(text)]
    if not rows:
        return np.zeros((0, 0), dtype=np.int64)
    width = len(rows[0][1])
    for ln, r in rows:
        if len(r) != width:
            raise ParseError(f"row has {len(r)} entries, expected {width}", line=ln, column=1)
    return np.array([r for _, r in rows], dtype=np.int64)


def format_grid(W) -> str:
    return "\n".join(" ".join(str(int(v)) for v in row) for row in np.asarray(W)) + "\n"


# ---------------------------------------------------------------- graphs


def format_graph(G, shifts=None) -> str:
    """Edge-list text with header 'n <count> w <degree>'; a third column holds lift shifts."""
    w = G.regular_degree
    lines = [f"n {G.n} w {w if w is not None else -1}"]
    for e, (u, v) in enumerate(G.edges.tolist()):
        lines.append(f"{u} {v}" if shifts is None else f"{u} {v} {int(shifts[e])}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str):
    """Returns (Graph, shifts or None); edges keep their file order."""
    from .expander import Graph

    rows = _tokens(text)
    if not rows:
        raise ParseError("missing 'n <count> w <degree>' header", line=1, column=1)
    ln, head = rows[0]
    if len(head) != 4 or head[0] != "n" or head[2] != "w":
        raise ParseError("header must read 'n <count> w <degree>'", line=ln, column=1, token=" ".join(head))
    n, w = _ints(ln, [head[1], head[3]])
    edges, shifts = [], []
    width = None
    for ln, toks in rows[1:]:
        vals = _ints(ln, toks)
        if len(vals) not in (2, 3) or (width is not None and len(vals) != width):
            raise ParseError("edge lines need 'u v' or 'u v s' consistently", line=ln, column=1)
        width = len(vals)
        if not (0 <= vals[0] < n and 0 <= vals[1] < n):
            raise ParseError(f"vertex out of range 0..{n - 1}", line=ln, column=1)
        edges.append(vals[:2])
        if width == 3:
            shifts.append(vals[2])
    simple = len({(min(a, b), max(a, b)) for a, b in edges}) == len(edges) and all(a != b for a, b in edges)
    G = Graph(n, np.array(edges, dtype=np.int64).reshape(-1, 2), simple=simple)
    if w >= 0 and G.regular_degree != w:
        raise ParseError(f"header says w = {w} but the graph is not {w}-regular", line=rows[0][0], column=1)
    return G, (np.array(shifts, dtype=np.int64) if width == 3 else None)
