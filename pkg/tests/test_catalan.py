import json
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lattice_skein import catalan, oracle, poset
from lattice_skein.catalan import (
    all_states,
    floor_returns,
    from_json,
    in_cat_f,
    index_label,
    is_realizable,
    label_index,
    reflect_x,
    split_at,
    stack_v,
    validate,
)
from lattice_skein.errors import Crossing, InterfaceMismatch, NotAMatching, ValidationError

B1 = [("x1", "x2"), ("y1", "xp1"), ("xp2", "yp1")]  # state of b=(1) in L(1,2)


def catalan_number(k):
    return comb(2 * k, k) // (k + 1)


@pytest.mark.parametrize("m,n", [(1, 0), (1, 3), (2, 2), (3, 4), (5, 1)])
def test_circular_index_is_a_bijection(m, n):
    size = 2 * (m + n)
    labels = [index_label(m, n, k) for k in range(size)]
    assert len(set(labels)) == size
    assert [label_index(m, n, lab) for lab in labels] == list(range(size))


def test_circular_order_is_clockwise_from_x1():
    m, n = 2, 3
    order = [catalan.format_label(index_label(m, n, k)) for k in range(10)]
    assert order == ["x1", "x2", "x3", "yp1", "yp2", "xp3", "xp2", "xp1", "y2", "y1"]


def test_validate_example():
    c = validate(1, 2, B1)
    assert c == poset.state_of((1,), 2)
    assert not floor_returns(c)


def test_crossing_reported():
    with pytest.raises(Crossing) as info:
        validate(1, 2, [("x1", "xp2"), ("x2", "xp1"), ("y1", "yp1")])
    assert len(info.value.arcs) == 2


@pytest.mark.parametrize("arcs", [
    [("x1", "x2"), ("y1", "xp1")],
    [("x1", "x2"), ("y1", "xp1"), ("xp2", "yp1"), ("x1", "yp1")],
    [("x1", "x2"), ("x1", "xp1"), ("xp2", "yp1")],
])
def test_not_a_matching(arcs):
    with pytest.raises(NotAMatching):
        validate(1, 2, arcs)


def test_bad_labels_rejected():
    with pytest.raises(ValidationError):
        validate(1, 2, [("x1", "x3"), ("y1", "xp1"), ("xp2", "yp1")])
    with pytest.raises(ValidationError):
        validate(0, 2, [("x1", "xp1"), ("x2", "xp2")])


def test_floor_return_examples():
    assert floor_returns(validate(1, 2, [("xp1", "xp2"), ("x1", "y1"), ("x2", "yp1")]))
    for m in range(1, 4):
        for n in range(1, 4):
            assert not any(floor_returns(c) for c in oracle.restricted_expansion(m, n))


@pytest.mark.parametrize("k", range(1, 6))
def test_state_count_is_catalan(k):
    for m in range(1, k + 1):
        states = list(all_states(m, k - m))
        assert len(states) == len(set(states)) == catalan_number(k)


def test_realizability_examples():
    for m in range(1, 4):
        for n in range(1, 4):
            for b in __import__("itertools").product(range(n + 1), repeat=m):
                assert is_realizable(poset.state_of(b, n))
    # horizontal line between the rows is met by all three arcs (n + 2 cuts)
    bad = validate(2, 1, [("y1", "y2"), ("yp1", "yp2"), ("x1", "xp1")])
    assert bad.cut_counts() == ([], [3])
    assert not is_realizable(bad)
    assert all(is_realizable(c) for c in all_states(1, 1))


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 2)])
def test_oracle_keys_are_exactly_the_realizable_states(m, n):
    keys = set(oracle.full_expansion(m, n))
    assert keys == {c for c in all_states(m, n) if is_realizable(c)}


def test_reflect_example_and_involution():
    c = validate(1, 2, B1)
    assert reflect_x(c) == validate(1, 2, [("xp1", "xp2"), ("y1", "x1"), ("x2", "yp1")])
    for m in range(1, 4):
        for n in range(0, 4):
            for s in all_states(m, n):
                r = reflect_x(s)
                assert reflect_x(r) == s
                assert floor_returns(s) == r.has_return("x")
                assert is_realizable(s) == is_realizable(r)


def test_reflect_reverses_side_indices():
    c = validate(2, 1, [("x1", "y1"), ("y2", "xp1"), ("yp1", "yp2")])
    assert reflect_x(c) == validate(2, 1, [("xp1", "y2"), ("y1", "x1"), ("yp2", "yp1")])


def test_json_roundtrip_and_canonical_order():
    c = poset.state_of((3, 4, 4, 3), 4)
    text = c.dumps()
    assert from_json(text) == c
    assert from_json(json.loads(text)) == c
    shuffled = {"m": 4, "n": 4, "arcs": [list(reversed(a)) for a in reversed(json.loads(text)["arcs"])]}
    assert from_json(shuffled) == c
    assert from_json(shuffled).dumps() == text


@given(st.integers(1, 3), st.integers(0, 3), st.data())
def test_json_roundtrip_property(m, n, data):
    states = list(all_states(m, n))
    c = data.draw(st.sampled_from(states))
    assert from_json(c.dumps()) == c


def test_stack_preconditions():
    b1 = validate(1, 2, B1)
    with pytest.raises(InterfaceMismatch):
        stack_v(b1, b1)  # bottom has a ceiling return
    with pytest.raises(InterfaceMismatch):
        stack_v(b1, validate(1, 3, [("x1", "y1"), ("x2", "x3"), ("yp1", "xp3"), ("xp2", "xp1")]))
    with pytest.raises(InterfaceMismatch):
        stack_v(reflect_x(b1), b1)  # top has a floor return
    assert poset.fiber(poset.state_of((1, 1), 2)) == {(1, 1)}
    assert poset.state_of((1, 1), 2).cut_counts()[1] == [0]


def test_stack_against_oracle():
    b1 = validate(1, 2, B1)
    s = stack_v(b1, reflect_x(b1))
    assert s.cut_counts()[1] == [2]
    full = oracle.full_expansion(2, 2)
    assert full[s] == oracle.full_expansion(1, 2)[b1] * oracle.full_expansion(1, 2)[reflect_x(b1)]


def test_stack_split_roundtrip():
    for m in range(2, 5):
        for n in range(1, 4):
            if m * n > 12:
                continue
            for c in oracle.full_expansion(m, n):
                _, horizontal = c.cut_counts()
                for k, cut in enumerate(horizontal, start=1):
                    if cut == n:
                        top, bottom = split_at(c, k)
                        assert (top.m, bottom.m) == (k, m - k)
                        assert not floor_returns(top) and not bottom.has_return("x")
                        assert stack_v(top, bottom) == c
                    else:
                        with pytest.raises(InterfaceMismatch):
                            split_at(c, k)


def test_cat_f_predicate():
    assert in_cat_f(poset.state_of((3, 4, 4, 3), 4))
    assert not in_cat_f(validate(1, 2, [("xp1", "xp2"), ("x1", "y1"), ("x2", "yp1")]))
