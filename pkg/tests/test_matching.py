import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hidist.errors import InvalidMatching
from hidist.matching import (DeltaMatching, bottleneck, candidate_values, check_certificate,
                             exists_delta_matching, extend, hopcroft_karp,
                             interleaving_distance_pfd, must_match)
from hidist.persistence import Barcode

from oracles import brute_bottleneck
from strategies import barcode_lists, intervals

INF = float("inf")


def test_extend_examples():
    assert extend((0, 1), 0) == (0, 1)
    assert extend((2, 3), 1) == (1, 4)
    assert extend((2, INF), 1) == (1, INF)


@given(intervals(), st.integers(0, 8), st.integers(0, 8))
def test_extend_additive(I, a, b):
    assert extend(extend(I, a / 4), b / 4) == extend(I, (a + b) / 4)


def test_forced_matching_boundary():
    # a bar of length exactly 2 delta holds no closed interval of that length
    assert not must_match((0, 2), 1)
    assert must_match((0, 2), 0.99)
    assert must_match((0, INF), 100)


def test_exists_examples():
    m = exists_delta_matching([(0, 2)], [(1, 3)], 1)
    assert m is not None and m.pairs == ((0, 0),)
    assert exists_delta_matching([(0, 4)], [], 1.9) is None
    C = [(0, 1), (0.5, 3), (2, INF)]
    m = exists_delta_matching(C, C, 0)
    assert m is not None and sorted(m.pairs) == [(0, 0), (1, 1), (2, 2)]


def test_bottleneck_examples():
    assert bottleneck([(0, 4)], [])[0] == 2
    assert bottleneck([(0, 2)], [(1, 3)])[0] == 1
    C = [(0, 1), (0.5, 3), (2, INF)]
    assert bottleneck(C, C)[0] == 0


def test_essential_count_mismatch():
    assert bottleneck([(0, INF)], [])[0] == INF
    assert bottleneck([(0, INF)], [(3, INF)])[0] == 3


def test_barcode_degree_slices():
    A = Barcode([(0, 0, INF), (1, 1, 2)])
    B = Barcode([(0, 0, INF), (1, 1, 3)])
    assert bottleneck(A, B, 0)[0] == 0
    assert bottleneck(A, B, 1)[0] == 1
    with pytest.raises(ValueError):
        bottleneck(A, B)


def test_interleaving_distance_on_single_bar():
    n = 2
    assert interleaving_distance_pfd([(0, 2 * n + 2)], []) == n + 1
    assert interleaving_distance_pfd([(0, 6), (1, 2)], [(0, 6), (1, 2)]) == 0


def test_certificate_validation():
    bad = DeltaMatching(0.5, ((0, 4),), (), ())
    assert not bad.is_valid()
    with pytest.raises(InvalidMatching):
        check_certificate(bad)
    twice = DeltaMatching(10, ((0, 1), (0, 1)), ((0, 1),), ((0, 0), (1, 0)))
    assert "used twice" in twice.violations()[0]


def test_hopcroft_karp_small():
    match = hopcroft_karp([[0, 1], [0], [1, 2]], 3)
    assert sorted(match) == [0, 1, 2]
    assert hopcroft_karp([[0], [0]], 1).count(-1) == 1


# frozen exhaustive-search values
@pytest.mark.parametrize("C, D, expected", [
    ([(0, 3), (1, 2)], [(0, 2.5)], 0.5),
    ([(0, 10), (2, 3)], [(1, 9), (5, 6)], 1.0),
    ([(0, INF), (1, 5)], [(0.5, INF)], 2.0),
    ([(0, 1), (0, 1), (0, 1)], [(0, 1.5)], 0.5),
])
def test_frozen_oracle_values(C, D, expected):
    assert brute_bottleneck(C, D) == expected
    assert bottleneck(C, D)[0] == expected


@settings(max_examples=150)
@given(barcode_lists(), barcode_lists())
def test_matches_exhaustive_search(C, D):
    value, m = bottleneck(C, D)
    assert value == brute_bottleneck(C, D)
    if value < INF:
        assert m.is_valid()
        assert value in candidate_values(C, D)


@given(barcode_lists(), barcode_lists())
def test_symmetric(C, D):
    assert bottleneck(C, D)[0] == bottleneck(D, C)[0]


@given(barcode_lists(), barcode_lists(), barcode_lists())
def test_triangle_inequality(A, B, C):
    ab, bc, ac = bottleneck(A, B)[0], bottleneck(B, C)[0], bottleneck(A, C)[0]
    assert ac <= ab + bc + 1e-9


@given(barcode_lists(), barcode_lists(), st.integers(0, 12), st.integers(1, 12))
def test_monotone_in_delta(C, D, a, b):
    delta = a / 4
    if exists_delta_matching(C, D, delta) is not None:
        m = exists_delta_matching(C, D, delta + b / 4)
        assert m is not None and m.is_valid()


@given(barcode_lists(), barcode_lists())
def test_certificates_sound(C, D):
    for delta in candidate_values(C, D):
        m = exists_delta_matching(C, D, delta)
        if m is not None:
            assert check_certificate(m) is m
