import itertools
import os
import subprocess
import sys

import pytest

from lattice_skein import _pykernel, kernel, oracle, poset
from lattice_skein.catalan import floor_returns, is_realizable, validate
from lattice_skein.errors import BudgetExceeded, ValidationError
from lattice_skein.laurent import LaurentPoly
from lattice_skein.oracle import KauffmanState

A = LaurentPoly.monomial(1)


def P(text):
    return LaurentPoly.parse(text)


def test_single_crossing():
    neg = oracle.smooth(1, 1, [[-1]])
    assert neg.state == validate(1, 1, [("y1", "x1"), ("xp1", "yp1")]) and neg.loops == 0
    pos = oracle.smooth(1, 1, [[1]])
    assert pos.state == validate(1, 1, [("x1", "yp1"), ("xp1", "y1")])


def test_row_pattern_gives_innermost_cup():
    d = oracle.smooth(1, 3, [[1, 1, -1]])
    assert d.loops == 0
    assert d.state == validate(1, 3, [("x2", "x3"), ("x1", "xp2"), ("y1", "xp1"), ("yp1", "xp3")])


def test_L11_and_L12():
    assert oracle.full_expansion(1, 1) == {
        validate(1, 1, [("x1", "yp1"), ("xp1", "y1")]): A,
        validate(1, 1, [("x1", "y1"), ("yp1", "xp1")]): A**-1,
    }
    full = oracle.full_expansion(1, 2)
    assert full == {
        validate(1, 2, [("x1", "x2"), ("yp1", "xp2"), ("xp1", "y1")]): P("1"),
        validate(1, 2, [("x1", "xp2"), ("x2", "yp1"), ("xp1", "y1")]): P("A^2"),
        validate(1, 2, [("x1", "y1"), ("x2", "yp1"), ("xp2", "xp1")]): P("1"),
        validate(1, 2, [("x1", "y1"), ("x2", "xp1"), ("yp1", "xp2")]): P("A^-2"),
    }


def _trace_by_hand_L22(code):
    """Independent loop count for L(2,2) via union-find on strand ends."""
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for i, j in itertools.product(range(2), range(2)):
        ends = {d: ("c", i, j, d) for d in "NESW"}
        plus = (code >> (2 * i + j)) & 1
        pairs = (("N", "E"), ("S", "W")) if plus else (("N", "W"), ("S", "E"))
        for a, b in pairs:
            union(ends[a], ends[b])
        if i == 0:
            union(ends["N"], ("b", f"x{j + 1}"))
        else:
            union(ends["N"], ("c", i - 1, j, "S"))
        if i == 1:
            union(ends["S"], ("b", f"xp{j + 1}"))
        if j == 0:
            union(ends["W"], ("b", f"y{i + 1}"))
        else:
            union(ends["W"], ("c", i, j - 1, "E"))
        if j == 1:
            union(ends["E"], ("b", f"yp{i + 1}"))
    comps = {}
    for x in list(parent):
        comps.setdefault(find(x), []).append(x)
    return sum(1 for members in comps.values() if not any(x[0] == "b" for x in members))


def test_L22_loops_and_expansion_match_hand_trace():
    total = {}
    looped = 0
    for code in range(16):
        d = oracle.smooth(2, 2, KauffmanState(2, 2, code))
        assert d.loops == _trace_by_hand_L22(code)
        looped += d.loops > 0
        pn = 2 * bin(code).count("1") - 4
        term = A**pn * oracle.LOOP**d.loops
        total[d.state] = total.get(d.state, LaurentPoly()) + term
    assert looped == 1  # only the central face can close up
    assert {k: v for k, v in total.items() if v} == oracle.full_expansion(2, 2)


def test_marker_matrix_roundtrip_and_counts():
    rows = [[1, -1, 1], [-1, -1, 1]]
    s = KauffmanState.from_matrix(rows)
    assert s.matrix() == rows
    assert (s.positive, s.negative) == (3, 3)
    with pytest.raises(ValidationError):
        KauffmanState.from_matrix([[1, 0]])
    with pytest.raises(ValidationError):
        KauffmanState.from_matrix([[1, 1], [1]])
    with pytest.raises(ValidationError):
        oracle.smooth(2, 2, [[1, 1, 1]])


@pytest.mark.parametrize("n", range(1, 7))
def test_m1_restricted_calibration(n):
    exp = oracle.restricted_expansion(1, n)
    assert len(exp) == n + 1
    for b in range(n + 1):
        assert exp[poset.state_of((b,), n)] == A ** (2 * b - n)


@pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 4) for n in range(1, 4)])
def test_restricted_equals_full_on_floor_free_states(m, n):
    full = oracle.full_expansion(m, n)
    restricted = oracle.restricted_expansion(m, n)
    assert restricted == {c: p for c, p in full.items() if not floor_returns(c)}
    assert all(is_realizable(c) for c in full)


@pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 5) for n in range(1, 5)])
def test_restricted_states_have_no_loops(m, n):
    assert oracle.max_restricted_loops(m, n) == 0
    for b in itertools.product(range(n + 1), repeat=m):
        d = oracle.smooth(m, n, KauffmanState.from_b(b, n))
        assert d.loops == 0
        assert 2 * KauffmanState.from_b(b, n).positive - m * n == 2 * sum(b) - m * n


@pytest.mark.parametrize("m,n", [(1, 1), (2, 2), (2, 3), (3, 3), (3, 4)])
def test_loop_sum_identity(m, n):
    lhs, rhs = oracle.loop_sum_identity(m, n)
    assert lhs == rhs


def test_asymmetric_state_bucket(asym_state):
    assert oracle.full_expansion(4, 4)[asym_state] == P("1+2A^4+A^8+A^12")


def test_budget():
    with pytest.raises(BudgetExceeded):
        oracle.full_expansion(5, 5)
    with pytest.raises(BudgetExceeded):
        oracle.restricted_expansion(3, 3, budget=10)


def test_parallel_matches_serial():
    serial = oracle.full_expansion(3, 4, workers=1)
    parallel = oracle.full_expansion(3, 4, workers=3)
    assert serial == parallel
    assert list(serial) == list(parallel)
    assert oracle.restricted_expansion(6, 3, workers=1) == oracle.restricted_expansion(6, 3, workers=2)


def test_merge_is_order_independent():
    parts = [kernel.accumulate_full(3, 3, lo, lo + 64) for lo in range(0, 512, 64)]
    a = oracle.merge_histograms(parts)
    b = oracle.merge_histograms(reversed(parts))
    assert a == b == kernel.accumulate_full(3, 3, 0, 512)


def test_flip_swaps_markers():
    flipped = oracle.full_expansion(1, 1, flip=True)
    assert flipped[validate(1, 1, [("x1", "y1"), ("yp1", "xp1")])] == A


def test_backends_agree():
    for m, n in [(1, 1), (2, 3), (3, 3), (4, 2)]:
        assert _pykernel.accumulate_full(m, n, 0, 2 ** (m * n)) == kernel.accumulate_full(m, n, 0, 2 ** (m * n))
        total = (n + 1) ** m
        assert _pykernel.accumulate_restricted(m, n, 0, total) == kernel.accumulate_restricted(m, n, 0, total)
        for code in range(0, 2 ** (m * n), 7):
            assert _pykernel.smooth(m, n, code, True) == kernel.smooth(m, n, code, True)


def test_degenerate_grids():
    d = oracle.smooth(2, 0, KauffmanState(2, 0, 0))
    assert d.state == validate(2, 0, [("y1", "yp1"), ("y2", "yp2")])


def test_env_var_forces_pure_python_backend():
    env = dict(os.environ, LATTICE_SKEIN_PURE="1")
    code = "import lattice_skein as l; print(l.BACKEND, l.coefficient(l.state_of((3, 4, 4, 3), 4))[0])"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python 1 + 2A^4 + A^8 + A^12"
