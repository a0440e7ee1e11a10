import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hidist import fields
from hidist.errors import GridMismatch, InvalidMatching, InvalidWitness
from hidist.filtrations import (FilteredComplex, SimplexFunction, correspondence_filtration,
                                rips_filtration, sublevel_filtration)
from hidist.matching import DeltaMatching, bottleneck, candidate_values
from hidist.metric import distortion, random_correspondence, validate_metric
from hidist.modules import (Bracket, GridModule, ModuleMorphism, SimplicialInterleaving,
                            SublevelWitness, barcode_module, check_interleaving, decompose,
                            decompose_by_ranks, hi_bracket, homology_module,
                            matching_to_interleaving, rank_table)
from hidist.persistence import barcodes
from hidist.whitehead import sphere_filtration
from hidist.experiments import random_cloud

from oracles import module_rank
from strategies import filtered_complexes

INF = float("inf")


@st.composite
def grid_modules(draw, max_len=5, max_dim=3, p=2, last_dim=None, iso=False):
    m = draw(st.integers(1, max_len))
    grid = sorted(draw(st.lists(st.integers(0, 12), min_size=m, max_size=m, unique=True)))
    if iso:
        d = draw(st.integers(1, max_dim))
        dims = [d] * m
    else:
        dims = draw(st.lists(st.integers(0, max_dim), min_size=m, max_size=m))
        if last_dim is not None:
            dims[-1] = last_dim
    maps = []
    for i in range(m - 1):
        if iso:
            # unit lower times unit upper triangular: always invertible
            low = np.tril(np.array(draw(st.lists(st.integers(0, p - 1), min_size=d * d, max_size=d * d))).reshape(d, d), -1)
            up = np.triu(np.array(draw(st.lists(st.integers(0, p - 1), min_size=d * d, max_size=d * d))).reshape(d, d), 1)
            eye = np.eye(d, dtype=np.int64)
            a = fields.matmul(low + eye, up + eye, p)
        else:
            n = dims[i] * dims[i + 1]
            a = np.array(draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n)), dtype=np.int64)
        maps.append(a.reshape(dims[i + 1], dims[i]))
    return GridModule([g / 2 for g in grid], dims, maps, p)


# decomposition

def test_decompose_examples():
    assert decompose(GridModule((0, 1), (1, 1), [[[1]]])) == ((0, INF),)
    assert decompose(GridModule((0, 1), (1, 1), [[[0]]])) == ((0, 1), (1, INF))
    assert decompose(GridModule((0, 1, 2), (1, 1, 1), [[[1]], [[0]]])) == ((0, 2), (2, INF))


def test_decompose_non_monomial():
    # [1 1] collapses two classes into one: one survives, one dies at 1
    M = GridModule((0, 1), (2, 1), [[[1, 1]]])
    assert decompose(M) == ((0, 1), (0, INF)) == decompose_by_ranks(M)


@settings(max_examples=80)
@given(grid_modules(p=2) | grid_modules(p=3))
def test_rank_table_matches_python_products(M):
    r = rank_table(M)
    for i in range(len(M)):
        for j in range(i, len(M)):
            assert r[i, j] == module_rank(M.dims, M.maps, i, j, M.p)


@settings(max_examples=80)
@given(grid_modules())
def test_decompose_paths_agree(M):
    bars = decompose(M)
    assert bars == decompose_by_ranks(M)
    # the interval modules of the bars have the same ranks as M
    B, _ = barcode_module(bars)
    for t in M.grid:
        assert B.dim_at(t) == M.dim_at(t)


@settings(max_examples=60)
@given(grid_modules(), st.integers(-6, 6))
def test_decompose_commutes_with_shift(M, k):
    delta = k / 4
    assert decompose(M.shift(delta)) == tuple(sorted((b - delta, d - delta) for b, d in decompose(M)))


# homology modules

def test_homology_module_examples():
    M = homology_module(FilteredComplex({(0,): 0}), 0)
    assert M.grid == (0,) and M.dims == (1,)
    P = validate_metric([[0, 2, 2], [2, 0, 2], [2, 2, 0]])
    M = homology_module(rips_filtration(P, 2), 0)
    assert M.grid == (0, 1) and M.dims == (3, 1) and fields.rank(M.maps[0], 2) == 1


@settings(max_examples=60)
@given(filtered_complexes(), st.integers(0, 2), st.sampled_from([2, 3]))
def test_two_paths_agree(X, k, p):
    assert decompose(homology_module(X, k, p)) == barcodes(X, k, p)[k]


# morphisms and interleavings

def test_interleaving_isomorphism_at_zero():
    M = GridModule((0, 1, 2), (2, 2, 1), [[[1, 1], [0, 1]], [[1, 0]]])
    P = [np.array([[0, 1], [1, 0]]), np.array([[1, 1], [0, 1]]), np.array([[1]])]
    Pinv = [np.array([[0, 1], [1, 0]]), np.array([[1, 1], [0, 1]]), np.array([[1]])]
    N = GridModule(M.grid, M.dims, [fields.matmul(fields.matmul(P[i + 1], M.maps[i], 2), Pinv[i], 2)
                                    for i in range(2)])
    f = ModuleMorphism.from_function(M, N, 0, lambda t: P[M.index_at(t)])
    g = ModuleMorphism.from_function(N, M, 0, lambda t: Pinv[M.index_at(t)])
    assert check_interleaving(f, g)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_trivial_morphisms_interleave_whitehead_bar(n):
    M, _ = barcode_module([(0, 2 * n + 2)])
    Z = GridModule.zero()
    assert check_interleaving(ModuleMorphism.zero(M, Z, n + 1), ModuleMorphism.zero(Z, M, n + 1))
    d = Fraction(2 * n + 1, 2)
    assert not check_interleaving(ModuleMorphism.zero(M, Z, d), ModuleMorphism.zero(Z, M, d))


def test_check_interleaving_grid_mismatch():
    M, _ = barcode_module([(0, 2)])
    N, _ = barcode_module([(1, 3)])
    f = ModuleMorphism.zero(M, N, 1)
    with pytest.raises(GridMismatch):
        check_interleaving(f, ModuleMorphism.zero(N, M, 2))
    with pytest.raises(GridMismatch):
        check_interleaving(f, ModuleMorphism.zero(M, N, 1))
    with pytest.raises(GridMismatch):
        ModuleMorphism(M, N, 1, (0,), [np.zeros((1, 1))])


def test_matching_examples():
    C = ((0.0, 1.0), (0.5, INF))
    f, g = matching_to_interleaving(DeltaMatching(0, C, C, ((0, 0), (1, 1))))
    for t in f.grid:
        assert np.array_equal(f.at(t), np.eye(f.source.dim_at(t), dtype=np.int64))
    assert check_interleaving(f, g)

    sigma = DeltaMatching(1, ((0.0, 2.0),), ((1.0, 3.0),), ((0, 0),))
    f, g = matching_to_interleaving(sigma)
    assert check_interleaving(f, g)
    assert f.at(0).tolist() == [[1]] and f.at(1.5).tolist() == [[1]]
    assert f.at(2).shape == (0, 0) and g.at(0.5).shape == (1, 0)
    # N is alive on [1, 3) where M(1) is already zero, so g vanishes
    assert g.at(1).shape == (0, 1) and not any(c.any() for c in g.components)

    f, g = matching_to_interleaving(DeltaMatching(2, ((0.0, 4.0),), (), ()))
    assert check_interleaving(f, g)
    assert all(not c.any() for c in f.components)


def test_invalid_matching_rejected():
    with pytest.raises(InvalidMatching):
        matching_to_interleaving(DeltaMatching(1, ((0.0, 4.0),), (), ()))


def _probe_epsilon(C, D):
    cands = candidate_values(C, D)
    return min((b - a for a, b in zip(cands, cands[1:])), default=1.0) / 2


@settings(max_examples=60)
@given(st.integers(0, 3).flatmap(lambda e: st.tuples(grid_modules(last_dim=e), grid_modules(last_dim=e))))
def test_isometry_round_trip(pair):
    M, N = pair
    C, D = decompose(M), decompose(N)
    delta, sigma = bottleneck(C, D)
    f, g = matching_to_interleaving(sigma)
    assert check_interleaving(f, g)
    if delta > 0:
        probe = delta - _probe_epsilon(C, D)
        assert not check_interleaving(*matching_to_interleaving(sigma, delta=probe, validate=False))


@settings(max_examples=60)
@given(grid_modules(iso=True), st.data())
def test_corrupted_component_breaks_naturality(M, data):
    assume(len(M) >= 2)
    f = ModuleMorphism.from_function(M, M, 0, lambda t: np.eye(M.dim_at(t), dtype=np.int64))
    assert f.is_natural()
    i = data.draw(st.integers(0, len(f.grid) - 1))
    r, c = data.draw(st.integers(0, M.dims[0] - 1)), data.draw(st.integers(0, M.dims[0] - 1))
    comps = [a.copy() for a in f.components]
    comps[i][r, c] ^= 1
    bad = ModuleMorphism(M, M, 0, f.grid, comps)
    assert not bad.is_natural()
    assert not check_interleaving(bad, f)


@settings(max_examples=60)
@given(grid_modules(), grid_modules(), st.integers(0, 4), st.data())
def test_naturality_matches_direct_squares(M, N, k, data):
    delta = Fraction(k, 2)
    grid = ModuleMorphism.refined_grid(M, N, delta)
    comps = []
    for t in grid:
        shape = (N.dim_at(t + delta), M.dim_at(t))
        comps.append(np.array(data.draw(st.lists(st.integers(0, 1), min_size=shape[0] * shape[1],
                                                 max_size=shape[0] * shape[1])),
                              dtype=np.int64).reshape(shape))
    f = ModuleMorphism(M, N, delta, grid, comps)
    ok = True
    for a, b in zip(grid, grid[1:]):
        lhs = (N.map_between(a + delta, b + delta) @ f.at(a)) % 2
        rhs = (f.at(b) @ M.map_between(a, b)) % 2
        ok &= np.array_equal(lhs, rhs)
    assert f.is_natural() == ok


# brackets

def test_bracket_identity():
    X = rips_filtration(validate_metric([[0, 1, 2], [1, 0, 1.5], [2, 1.5, 0]]), 2)
    assert hi_bracket(X, X, 1, witness=SimplicialInterleaving.identity(X)) == Bracket(0.0, 0.0, (0.0, 0.0))
    assert hi_bracket(X, X, 1).upper == INF


@pytest.mark.parametrize("seed", range(10))
def test_bracket_correspondence_filtrations(seed):
    rng = np.random.default_rng(seed)
    P, Q = random_cloud(rng, 4, 2), random_cloud(rng, 5, 2)
    C = random_correspondence(4, 5, rng)
    cf = correspondence_filtration(C, P, Q, 2)
    br = hi_bracket(cf.F_P, cf.F_Q, 1, witness=SublevelWitness(cf.gamma_P, cf.gamma_Q))
    assert br.upper <= distortion(C, P, Q) / 2
    assert br.lower <= br.upper


@pytest.mark.parametrize("n", [1, 2])
def test_bracket_whitehead_lower_bound(n):
    top = 2 ** n
    X = FilteredComplex({(0,): 0})
    Y = sphere_filtration(top, 0, 2 * n + 2)
    br = hi_bracket(X, Y, top)
    assert br.lower >= n + 1


def test_bracket_rejects_bad_witness():
    X = FilteredComplex({(0,): 0, (1,): 0, (0, 1): 1})
    Y = FilteredComplex({(0,): 0, (1,): 0, (0, 1): 3})
    gamma = SimplexFunction(X.as_dict())
    with pytest.raises(InvalidWitness):
        hi_bracket(X, Y, 0, witness=SublevelWitness(gamma, gamma))
    swap = {0: 1, 1: 0}
    with pytest.raises(InvalidWitness):
        hi_bracket(X, Y, 0, witness=SimplicialInterleaving(swap, swap, 1))
    br = hi_bracket(X, Y, 0, witness=SimplicialInterleaving(swap, swap, 2))
    # leaving both finite bars [0,1) and [0,3) unmatched costs 1.5
    assert br.lower == 1.5 and br.upper == 2


@st.composite
def function_pairs(draw):
    """Two monotone functions on one random complex."""
    X = draw(filtered_complexes(max_vertices=5))
    kappa = {}
    for s in sorted(X.simplices, key=len):
        floor = max((kappa[f] for f in itertools.combinations(s, len(s) - 1) if f), default=0)
        kappa[s] = floor + draw(st.integers(0, 3))
    return SimplexFunction(X.as_dict()), SimplexFunction(kappa)


@settings(max_examples=60)
@given(function_pairs())
def test_bracket_sandwich_on_sublevel_witnesses(fg):
    gamma, kappa = fg
    X, Y = sublevel_filtration(gamma), sublevel_filtration(kappa)
    br = hi_bracket(X, Y, 1, witness=SublevelWitness(gamma, kappa))
    assert br.lower <= br.upper + 1e-9
