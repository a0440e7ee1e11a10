import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hidist.errors import (AsymmetricMatrix, DuplicatePoint, IndexOutOfRange, InvalidCorrespondence,
                           NonzeroDiagonal, NotSquare, TooLarge, TriangleViolation)
from hidist.metric import (Correspondence, distortion, from_points, gh_upper_bound,
                           gromov_hausdorff_exact, permute, random_correspondence, validate_metric)

from oracles import brute_distortion, brute_gh
from strategies import point_clouds

TWO_3 = validate_metric([[0, 3], [3, 0]])
TWO_5 = validate_metric([[0, 5], [5, 0]])
ONE = validate_metric([[0]])


def test_valid_two_point_space():
    P = validate_metric([[0, 2], [2, 0]])
    assert P.n == 2 and P.dist[0, 1] == 2
    assert list(P.labels) == [0, 1]


def test_nonzero_diagonal():
    with pytest.raises(NonzeroDiagonal):
        validate_metric([[0, 1], [1, 0.5]])


def test_triangle_violation_reports_triple():
    with pytest.raises(TriangleViolation) as e:
        validate_metric([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    i, j, k = e.value.triple
    assert {i, j} == {0, 2} and k == 1


@pytest.mark.parametrize("matrix, err", [
    ([[0, 1, 2], [1, 0, 1]], NotSquare),
    ([[0, 1], [2, 0]], AsymmetricMatrix),
    ([[0, 0], [0, 0]], DuplicatePoint),
])
def test_rejections(matrix, err):
    with pytest.raises(err):
        validate_metric(matrix)


def test_triangle_tolerance():
    validate_metric([[0, 1, 2 + 1e-10], [1, 0, 1], [2 + 1e-10, 1, 0]])


def test_labels_kept():
    P = validate_metric([[0, 1], [1, 0]], labels=["a", "b"])
    assert list(P.labels) == ["a", "b"]


def test_correspondence_must_be_surjective():
    with pytest.raises(InvalidCorrespondence):
        Correspondence(((0, 0),)).check(2, 1)
    with pytest.raises(IndexOutOfRange):
        distortion(Correspondence(((0, 0), (5, 0))), TWO_3, ONE)


def test_distortion_examples():
    assert distortion(Correspondence.diagonal(2), TWO_3, TWO_5) == 2
    assert distortion(Correspondence.diagonal(2), TWO_3, TWO_3) == 0
    assert distortion(Correspondence.full(2, 1), TWO_3, ONE) == 3


def test_gh_exact_examples():
    value, C = gromov_hausdorff_exact(TWO_3, TWO_5)
    assert value == 1
    assert distortion(C, TWO_3, TWO_5) == 2
    assert gromov_hausdorff_exact(TWO_3, TWO_3)[0] == 0
    assert gromov_hausdorff_exact(TWO_3, ONE)[0] == 1.5


def test_gh_upper_bound_examples():
    assert gh_upper_bound(TWO_3, TWO_5, Correspondence.diagonal(2)) == 1
    assert gh_upper_bound(TWO_3, TWO_3, Correspondence.diagonal(2)) == 0
    assert gh_upper_bound(TWO_3, TWO_5, Correspondence.full(2, 2)) == 2.5


def test_size_limit():
    P = from_points(np.arange(7.0)[:, None])
    with pytest.raises(TooLarge):
        gromov_hausdorff_exact(P, P, size_limit=36)
    assert gromov_hausdorff_exact(P, P, size_limit=49)[0] == 0


# frozen brute-force values for a few fixed spaces (enumeration over all subsets of P x Q)
LINE3 = [[0, 1, 3], [1, 0, 2], [3, 2, 0]]
EQUI3 = [[0, 2, 2], [2, 0, 2], [2, 2, 0]]
SQUARE = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]]


@pytest.mark.parametrize("dp, dq, expected", [
    (LINE3, EQUI3, 0.5),
    (LINE3, [[0, 5], [5, 0]], 1.5),
    (EQUI3, [[0]], 1.0),
    (SQUARE, EQUI3, 0.5),
])
def test_gh_frozen_oracle_values(dp, dq, expected):
    assert brute_gh(dp, dq) == expected
    assert gromov_hausdorff_exact(validate_metric(dp), validate_metric(dq))[0] == expected


@settings(max_examples=40)
@given(point_clouds(max_n=3), point_clouds(max_n=3))
def test_gh_matches_enumeration(P, Q):
    value, C = gromov_hausdorff_exact(P, Q)
    assert value == brute_gh(P.dist.tolist(), Q.dist.tolist())
    assert distortion(C, P, Q) == 2 * value


@settings(max_examples=40)
@given(point_clouds(max_n=5), point_clouds(max_n=5), st.integers(0, 2 ** 32 - 1))
def test_exact_below_any_upper_bound(P, Q, seed):
    C = random_correspondence(P.n, Q.n, np.random.default_rng(seed))
    assert gromov_hausdorff_exact(P, Q)[0] <= gh_upper_bound(P, Q, C)
    assert distortion(C, P, Q) == brute_distortion(C.pairs, P.dist, Q.dist)


@settings(max_examples=40)
@given(point_clouds(max_n=5), point_clouds(max_n=5))
def test_gh_symmetric(P, Q):
    assert gromov_hausdorff_exact(P, Q)[0] == gromov_hausdorff_exact(Q, P)[0]


@settings(max_examples=30)
@given(point_clouds(max_n=5), st.randoms(use_true_random=False))
def test_gh_zero_on_isometric_copies(P, r):
    perm = list(range(P.n))
    r.shuffle(perm)
    assert gromov_hausdorff_exact(P, permute(P, perm))[0] == 0


@settings(max_examples=30)
@given(point_clouds(max_n=5), point_clouds(max_n=5))
def test_gh_positive_when_not_isometric(P, Q):
    isometric = P.n == Q.n and any(
        np.array_equal(P.dist, Q.dist[np.ix_(perm, perm)])
        for perm in itertools.permutations(range(Q.n)))
    assert (gromov_hausdorff_exact(P, Q)[0] == 0) == isometric


@settings(max_examples=30)
@given(point_clouds(max_n=4), point_clouds(max_n=4), point_clouds(max_n=4))
def test_gh_triangle_inequality(P, Q, R):
    pq = gromov_hausdorff_exact(P, Q)[0]
    qr = gromov_hausdorff_exact(Q, R)[0]
    pr = gromov_hausdorff_exact(P, R)[0]
    assert pr <= pq + qr + 1e-9
