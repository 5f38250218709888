from fractions import Fraction
from itertools import product
from math import comb

import pytest
from hypothesis import given, strategies as st

from corrcache.model import (
    ModelError,
    SubBlock,
    blocks_of_file,
    choose_leaders,
    count_demands_with_s_distinct,
    demand_distinct_count,
    enumerate_blocks,
    new_instance,
)


def test_worked_example_instance():
    inst = new_instance(3, 5, "3/5", 2)
    assert inst.t == 2
    assert inst.integral_t
    assert inst.file_size_units == 20


def test_zero_cache_instance():
    inst = new_instance(3, 5, 0, 2)
    assert inst.t == 0 and inst.integral_t


def test_fractional_t_refuses_scheme():
    inst = new_instance(4, 6, Fraction(1, 2), 2)
    assert inst.t == Fraction(3, 2)
    assert not inst.integral_t
    assert inst.file_size_units is None
    with pytest.raises(ModelError, match="integral t"):
        inst.require_integral_t()


@pytest.mark.parametrize(
    "args, msg",
    [
        ((3, 5, 0, 4), "exceeds the number of files"),
        ((3, 5, Fraction(-1, 5), 2), "non-negative"),
        ((3, 5, Fraction(8, 5), 2), "exceeds the library size"),
        ((3, 5, 0.6, 2), "float"),
        ((3, 5, "0.6", 2), "p/q"),
    ],
)
def test_instance_rejections(args, msg):
    with pytest.raises(ModelError, match=msg):
        new_instance(*args)


def test_memory_at_upper_limit_is_allowed():
    assert new_instance(3, 5, Fraction(3, 2), 2).t == 5


def test_enumerate_blocks():
    assert enumerate_blocks(new_instance(3, 5, 0, 2)) == [(1, 2), (1, 3), (2, 3)]
    assert enumerate_blocks(new_instance(3, 5, 0, 3)) == [(1, 2, 3)]
    assert len(enumerate_blocks(new_instance(4, 2, 0, 2))) == 6


@pytest.mark.parametrize("N", range(1, 7))
def test_enumerate_blocks_sorted_unique(N):
    for r in range(1, N + 1):
        blocks = enumerate_blocks(new_instance(N, 2, 0, r))
        assert all(a < b for a, b in zip(blocks, blocks[1:]))
        assert len(blocks) == comb(N, r)


def test_blocks_of_file():
    assert blocks_of_file(new_instance(3, 5, 0, 2), 1) == [(1, 2), (1, 3)]
    assert blocks_of_file(new_instance(3, 5, 0, 3), 2) == [(1, 2, 3)]
    assert len(blocks_of_file(new_instance(5, 2, 0, 2), 4)) == 4
    with pytest.raises(ModelError):
        blocks_of_file(new_instance(3, 5, 0, 2), 4)


def test_distinct_count():
    assert demand_distinct_count((1, 2, 3, 1, 2)) == 3
    assert demand_distinct_count((1, 1, 1)) == 1
    assert demand_distinct_count((2, 3)) == 2


def test_choose_leaders_default():
    assert choose_leaders((1, 2, 3, 1, 2)).leaders == (1, 2, 3)
    assert choose_leaders((7, 7, 7)).leaders == (1,)
    assert choose_leaders((2, 1, 1)).leaders == (1, 2)


def test_choose_leaders_explicit():
    assert choose_leaders((1, 2, 3, 1, 2), "explicit", (5, 4, 3)).leaders == (5, 4, 3)
    with pytest.raises(ModelError):
        choose_leaders((1, 2, 3, 1, 2), "explicit", (1, 4, 3))
    with pytest.raises(ModelError):
        choose_leaders((1, 2, 3, 1, 2), "explicit", (1, 2))


@given(st.lists(st.integers(1, 4), min_size=1, max_size=7), st.randoms())
def test_leaders_invariant_under_reassigning_duplicates(d, rnd):
    leaders = choose_leaders(d).leaders
    d2 = list(d)
    for k in range(1, len(d) + 1):
        if k in leaders:
            continue
        # any file whose leader comes before k keeps first occurrences intact
        d2[k - 1] = rnd.choice([d[u - 1] for u in leaders if u < k])
    assert choose_leaders(d2).leaders == leaders


def _brute_count(N, K, s):
    return sum(1 for d in product(range(N), repeat=K) if len(set(d)) == s)


def test_count_demands_examples():
    assert count_demands_with_s_distinct(3, 3, 3) == _brute_count(3, 3, 3) == 6
    assert count_demands_with_s_distinct(5, 4, 1) == 5
    assert count_demands_with_s_distinct(2, 2, 2) == _brute_count(2, 2, 2) == 2
    with pytest.raises(ModelError):
        count_demands_with_s_distinct(2, 3, 3)


@pytest.mark.parametrize("N, K", [(N, K) for N in range(1, 7) for K in range(1, 7)])
def test_count_demands_sum(N, K):
    assert sum(count_demands_with_s_distinct(N, K, s) for s in range(1, min(N, K) + 1)) == N**K
    if N**K <= 5000:
        for s in range(1, min(N, K) + 1):
            assert count_demands_with_s_distinct(N, K, s) == _brute_count(N, K, s)


def test_subblock_text_form_roundtrip():
    sb = SubBlock((1, 2), (2, 3))
    assert str(sb) == "S{1,2}|V{2,3}"
    assert SubBlock.parse(str(sb)) == sb
    assert str(SubBlock((1, 3), ())) == "S{1,3}|V{}"
    assert SubBlock.parse("S{1,3}|V{}") == SubBlock((1, 3), ())
