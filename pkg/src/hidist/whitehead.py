"""Homology of the persistent Whitehead counterexample.

Stage ``i`` (0 <= i <= n) of Y^n is a product of ``2**(n-i)`` spheres of
dimension ``2**i``, alive on ``[2i, 2i + 2)``; from ``2n + 2`` on it is a
point.  The map from stage i to stage i+1 collapses each consecutive pair of
factors ``S x S -> S ^ S``.

By Kunneth over F_2, reduced H_k of a product of c spheres of dimension m has
a basis indexed by subsets S of the c factors with ``|S| * m = k`` (factor in
S carries the top class, the others the unit).  The pair collapse sends the
top class of ``S x S`` to the top class of ``S ^ S`` and kills the two
classes supported on the wedge, so S maps to ``{j : both 2j, 2j+1 in S}``
when every pair lies entirely inside or outside S, and to 0 otherwise.

Homology here is reduced and the field is F_2 throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .filtrations import FilteredComplex
from .matching import interleaving_distance_pfd
from .modules import GridModule, bar_multiplicities, decompose

N_MAX = 6
# largest stage dimension for which degree-k modules are built explicitly
DIM_CAP = 20000


@dataclass(frozen=True)
class SpherePowerStage:
    index: int
    n: int

    @property
    def terminal(self) -> bool:
        return self.index == self.n + 1

    @property
    def sphere_dim(self) -> int:
        return 2 ** self.index

    @property
    def copies(self) -> int:
        return 0 if self.terminal else 2 ** (self.n - self.index)

    def basis(self, k: int) -> list[tuple]:
        """Kunneth basis of reduced H_k: subsets of copy indices."""
        if self.terminal or k < 1 or k % self.sphere_dim:
            return []
        return list(combinations(range(self.copies), k // self.sphere_dim))


def collapse(S: tuple, block: int) -> tuple | None:
    """Image of the basis element S when consecutive blocks of ``block``
    factors are smashed together; None when it maps to zero."""
    out = []
    chosen = set(S)
    for j in range(max(chosen, default=-1) // block + 1):
        members = sum(1 for a in range(j * block, (j + 1) * block) if a in chosen)
        if members == block:
            out.append(j)
        elif members:
            return None
    return tuple(out)


def collapse_matrix(n: int, k: int, i: int, j: int) -> np.ndarray:
    """Matrix of H_k(stage i) -> H_k(stage j) computed directly from the
    composite collapse of blocks of ``2**(j - i)`` factors."""
    src = SpherePowerStage(i, n).basis(k)
    tgt_stage = SpherePowerStage(j, n)
    tgt = {S: r for r, S in enumerate(tgt_stage.basis(k))}
    a = np.zeros((len(tgt), len(src)), dtype=np.int64)
    if tgt_stage.terminal:
        return a
    for c, S in enumerate(src):
        image = collapse(S, 2 ** (j - i))
        if image is not None:
            a[tgt[image], c] = 1
    return a


def _block(n: int, k: int) -> tuple[list[int], list[np.ndarray]]:
    stages = [SpherePowerStage(i, n) for i in range(n + 2)]
    dims = [len(s.basis(k)) for s in stages]
    maps = [collapse_matrix(n, k, i, i + 1) for i in range(n + 1)]
    return dims, maps


def yn_dims(n: int, k: int) -> list[int]:
    return [yn_rank(n, k, i, i) for i in range(n + 2)]


def yn_rank(n: int, k: int, i: int, j: int) -> int:
    """Rank of H_k(stage i) -> H_k(stage j) by counting.

    A basis subset survives j - i collapses iff it is a union of aligned
    blocks of 2**(j-i) factors, and survivors have distinct images, so the
    rank is the number of such unions.
    """
    if j == n + 1 or k % (2 ** j):
        return 0
    return comb(2 ** (n - j), k // 2 ** j)


def build_Yn_module(n: int, k: int) -> GridModule:
    """Reduced H_k(Y^n; F_2) on the grid 0, 2, ..., 2n + 2."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    dims, maps = _block(n, k)
    return GridModule([2 * i for i in range(n + 2)], dims, maps, 2)


def yprime_offsets(N: int) -> list[int]:
    """Start of each Y^n window: 0, 4, 10, 18, ...; window n has width 2n + 2."""
    out = [0]
    for n in range(1, N + 1):
        out.append(out[-1] + 2 * n + 2)
    return out


def build_Yprime_module(N: int, k: int) -> GridModule:
    """Reduced H_k of the first N windows of Y', with zero maps between windows."""
    if N < 1 or k < 1:
        raise ValueError("need N >= 1 and k >= 1")
    offsets = yprime_offsets(N)
    grid, dims, maps = [], [], []
    for n in range(1, N + 1):
        bd, bm = _block(n, k)
        if grid:
            maps.append(np.zeros((bd[0], dims[-1]), dtype=np.int64))
        grid.extend(offsets[n - 1] + 2 * i for i in range(n + 1))
        dims.extend(bd[:-1])
        maps.extend(bm[:-1])
    # the final window collapses to a point at its right end
    grid.append(offsets[N])
    dims.append(0)
    maps.append(np.zeros((0, dims[-2]), dtype=np.int64))
    return GridModule(grid, dims, maps, 2)


def sphere_filtration(dim: int, birth: float, death: float) -> FilteredComplex:
    """Boundary of a (dim+1)-simplex at ``birth`` filled in at ``death``.

    Its reduced homology is a single bar ``[birth, death)`` in degree ``dim``.
    """
    verts = range(dim + 2)
    items = [(s, birth) for size in range(1, dim + 2) for s in combinations(verts, size)]
    items.append((tuple(verts), death))
    return FilteredComplex(items)


@dataclass
class CounterexampleReport:
    n: int
    passed: bool
    top_bars: tuple
    top_distance: float
    degree_distances: dict = field(default_factory=dict)
    counted_degrees: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def lines(self) -> list[str]:
        top = 2 ** self.n
        out = [f"n = {self.n}: degree {top} barcode {list(self.top_bars)}",
               f"d_I(H_{top} Y^n, 0) = {self.top_distance:g} (expected {self.n + 1})"]
        for k, d in sorted(self.degree_distances.items()):
            out.append(f"d_I(H_{k} Y^n, 0) = {d:g}")
        if self.counted_degrees:
            out.append(f"degrees decomposed from counted ranks (too large to build): {self.counted_degrees}")
        out.extend(f"FAIL: {f}" for f in self.failures)
        out.append("PASS" if self.passed else "FAIL")
        return out


def verify_counterexample(n: int, n_max: int = N_MAX) -> CounterexampleReport:
    if not 1 <= n <= n_max:
        raise ValueError(f"n must lie in [1, {n_max}]")
    top = 2 ** n
    bars = decompose(build_Yn_module(n, top))
    dist = interleaving_distance_pfd(bars, ())
    report = CounterexampleReport(n, True, bars, dist)
    expected_bar = (0.0, float(2 * n + 2))
    if expected_bar not in bars:
        report.failures.append(f"bar {expected_bar} missing from degree {top}")
    if dist != n + 1:
        report.failures.append(f"distance to zero is {dist}, expected {n + 1}")
    for k in range(1, top + 1):
        if max(yn_dims(n, k)) <= DIM_CAP:
            d = interleaving_distance_pfd(build_Yn_module(n, k), ())
        else:
            # against the zero module only the distinct bars matter
            grid = [2 * i for i in range(n + 2)]
            distinct = bar_multiplicities(grid, lambda i, j: yn_rank(n, k, i, j))
            d = interleaving_distance_pfd(sorted(distinct), ())
            report.counted_degrees.append(k)
        report.degree_distances[k] = d
        if d > n + 1:
            report.failures.append(f"degree {k} at distance {d} > {n + 1}")
    report.passed = not report.failures
    return report
