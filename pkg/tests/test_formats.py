from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lpcodes.errors import ParseError
from lpcodes.expander import random_regular, shift_lift
from lpcodes.f2core import BinMatrix
from lpcodes.formats import format_graph, format_grid, from_alist, parse_graph, parse_grid, read_alist, to_alist, write_alist

SMALL = BinMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
SMALL_ALIST = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n"


def test_alist_layout():
    assert to_alist(SMALL) == SMALL_ALIST
    assert from_alist(SMALL_ALIST) == SMALL


@given(st.tuples(st.integers(0, 8), st.integers(0, 12)).flatmap(lambda s: arrays(np.uint8, s, elements=st.integers(0, 1))))
def test_alist_roundtrip(dense):
    H = BinMatrix.from_dense(dense)
    assert from_alist(to_alist(H)) == H


def test_alist_file_roundtrip(tmp_path):
    path = tmp_path / "H.alist"
    write_alist(path, SMALL)
    assert read_alist(path) == SMALL


@pytest.mark.parametrize(
    "text,line",
    [
        ("3\n", 2),
        ("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n", 8),  # truncated
        ("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n1 3\n", 8),  # rows disagree with columns
        ("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 z\n2 0\n1 2\n2 3\n", 6),
        ("3 2\n2 2\n1 2 1\n2 2\n3 0\n1 2\n2 0\n1 2\n2 3\n", 5),  # index out of range
        ("3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n\n7\n", 11),  # trailing content
    ],
)
def test_alist_errors(text, line):
    with pytest.raises(ParseError) as info:
        from_alist(text)
    assert info.value.line == line


def test_grid_roundtrip_and_errors():
    W = parse_grid("# weights\n1 0 2\n2 3 1\n")
    assert W.tolist() == [[1, 0, 2], [2, 3, 1]]
    assert np.array_equal(parse_grid(format_grid(W)), W)
    with pytest.raises(ParseError) as info:
        parse_grid("1 2\n3\n")
    assert info.value.line == 2


def test_graph_roundtrip():
    G = random_regular(10, 3, seed=1)
    H, shifts = parse_graph(format_graph(G))
    assert H == G and H.simple and shifts is None
    L, lift = shift_lift(G, 4, seed=2)
    B, shifts = parse_graph(format_graph(G, lift.shifts))
    assert B == G and np.array_equal(shifts, lift.shifts)


@pytest.mark.parametrize(
    "text",
    ["", "n 3 d 2\n", "n 3 w 2\n0 1\n1 2\n", "n 2 w 1\n0 5\n", "n 2 w 1\n0 1 0\n0 1\n"],
)
def test_graph_errors(text):
    with pytest.raises(ParseError):
        parse_graph(text)
