"""Finite metric spaces, correspondences and the Gromov-Hausdorff distance."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (AsymmetricMatrix, DuplicatePoint, IndexOutOfRange,
                     InvalidCorrespondence, MetricError, NonzeroDiagonal,
                     NotSquare, TooLarge, TriangleViolation)

TOL = 1e-9
DEFAULT_GH_SIZE_LIMIT = 36


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A validated finite metric space.  Build with :func:`validate_metric`."""

    labels: tuple
    dist: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, FiniteMetricSpace):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.dist, other.dist)

    def __hash__(self):
        return hash((self.labels, self.dist.tobytes()))


def validate_metric(matrix, labels: Sequence | None = None, tol: float = TOL) -> FiniteMetricSpace:
    d = np.array(matrix, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise NotSquare(f"distance matrix must be square, got shape {d.shape}")
    n = d.shape[0]
    labels = tuple(range(n)) if labels is None else tuple(labels)
    if len(labels) != n:
        raise MetricError(f"{len(labels)} labels for {n} points")
    if len(set(labels)) != n:
        raise DuplicatePoint("duplicate point labels")
    if not np.all(np.isfinite(d)):
        raise MetricError("distances must be finite")
    diag = np.abs(np.diag(d))
    if np.any(diag > tol):
        i = int(np.argmax(diag > tol))
        raise NonzeroDiagonal(f"dist[{i}][{i}] = {d[i, i]!r}")
    asym = np.abs(d - d.T) > tol
    if np.any(asym):
        i, j = map(int, np.argwhere(asym)[0])
        raise AsymmetricMatrix(f"dist[{i}][{j}] = {float(d[i, j])!r} != dist[{j}][{i}] = {float(d[j, i])!r}")
    if np.any(d < -tol):
        i, j = map(int, np.argwhere(d < -tol)[0])
        raise MetricError(f"negative distance dist[{i}][{j}] = {d[i, j]!r}")
    off = ~np.eye(n, dtype=bool)
    if np.any((d <= tol) & off):
        i, j = map(int, np.argwhere((d <= tol) & off)[0])
        raise DuplicatePoint(f"points {i} and {j} are at distance zero")
    for k in range(n):
        bad = d > d[:, k][:, None] + d[k, :][None, :] + tol
        if np.any(bad):
            i, j = map(int, np.argwhere(bad)[0])
            raise TriangleViolation(i, j, k, float(d[i, j]), float(d[i, k] + d[k, j]))
    # symmetrize exactly and zero the diagonal so downstream code can rely on it
    d = np.maximum(d, d.T)
    np.fill_diagonal(d, 0.0)
    d.setflags(write=False)
    return FiniteMetricSpace(labels, d)


def from_points(points) -> FiniteMetricSpace:
    """Euclidean metric on the rows of ``points``."""
    x = np.asarray(points, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    diff = x[:, None, :] - x[None, :, :]
    return validate_metric(np.sqrt((diff**2).sum(-1)))


@dataclass(frozen=True)
class Correspondence:
    """A relation between point indices of P and Q with surjective projections."""

    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted({(int(i), int(j)) for i, j in self.pairs})))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def check(self, n_p: int, n_q: int) -> "Correspondence":
        for i, j in self.pairs:
            if not (0 <= i < n_p and 0 <= j < n_q):
                raise IndexOutOfRange(f"pair ({i}, {j}) outside {n_p} x {n_q}")
        left = {i for i, _ in self.pairs}
        right = {j for _, j in self.pairs}
        if len(left) != n_p:
            raise InvalidCorrespondence(f"P points {sorted(set(range(n_p)) - left)} not covered")
        if len(right) != n_q:
            raise InvalidCorrespondence(f"Q points {sorted(set(range(n_q)) - right)} not covered")
        return self

    @classmethod
    def diagonal(cls, n: int) -> "Correspondence":
        return cls(tuple((i, i) for i in range(n)))

    @classmethod
    def full(cls, n_p: int, n_q: int) -> "Correspondence":
        return cls(tuple((i, j) for i in range(n_p) for j in range(n_q)))

    def proj_p(self) -> np.ndarray:
        return np.array([i for i, _ in self.pairs], dtype=np.intp)

    def proj_q(self) -> np.ndarray:
        return np.array([j for _, j in self.pairs], dtype=np.intp)


def random_correspondence(n_p: int, n_q: int, rng: np.random.Generator, extra: int = 2) -> Correspondence:
    """A random correspondence: a cover of both sides plus ``extra`` random pairs."""
    pairs = {(i, int(rng.integers(n_q))) for i in range(n_p)}
    pairs |= {(int(rng.integers(n_p)), j) for j in range(n_q)}
    for _ in range(extra):
        pairs.add((int(rng.integers(n_p)), int(rng.integers(n_q))))
    return Correspondence(tuple(pairs))


def _pair_costs(C: Correspondence, P: FiniteMetricSpace, Q: FiniteMetricSpace) -> np.ndarray:
    ps, qs = C.proj_p(), C.proj_q()
    return np.abs(P.dist[np.ix_(ps, ps)] - Q.dist[np.ix_(qs, qs)])


def distortion(C: Correspondence, P: FiniteMetricSpace, Q: FiniteMetricSpace) -> float:
    """sup over pairs of pairs in C of |d_P(p, p') - d_Q(q, q')|."""
    C.check(P.n, Q.n)
    return float(_pair_costs(C, P, Q).max())


def gh_upper_bound(P: FiniteMetricSpace, Q: FiniteMetricSpace, C: Correspondence) -> float:
    return distortion(C, P, Q) / 2


class _CoverSearch:
    """Decide whether some correspondence has all pairwise costs <= t.

    Cells of P x Q are bits of a Python int.  A partial correspondence is
    extended by covering the most constrained uncovered row or column with
    a cell compatible with everything chosen so far.
    """

    def __init__(self, cost: np.ndarray, n: int, m: int):
        self.cost = cost
        self.n, self.m = n, m
        self.row_mask = [sum(1 << (i * m + j) for j in range(m)) for i in range(n)]
        self.col_mask = [sum(1 << (i * m + j) for i in range(n)) for j in range(m)]

    def feasible(self, t: float):
        ok = self.cost <= t
        self.compat = [sum(1 << int(b) for b in np.flatnonzero(row)) for row in ok]
        self.dead: set = set()
        full = (1 << (self.n * self.m)) - 1
        return self._search(full, 0, 0, 0)

    def _search(self, avail: int, chosen: int, rows: int, cols: int):
        key = (avail, rows, cols)
        if key in self.dead:
            return None
        best = None
        for i in range(self.n):
            if not rows >> i & 1:
                opts = avail & self.row_mask[i]
                if opts == 0:
                    self.dead.add(key)
                    return None
                if best is None or opts.bit_count() < best.bit_count():
                    best = opts
        for j in range(self.m):
            if not cols >> j & 1:
                opts = avail & self.col_mask[j]
                if opts == 0:
                    self.dead.add(key)
                    return None
                if best is None or opts.bit_count() < best.bit_count():
                    best = opts
        if best is None:
            return chosen
        while best:
            low = best & -best
            b = low.bit_length() - 1
            best ^= low
            i, j = divmod(b, self.m)
            found = self._search(avail & self.compat[b], chosen | low,
                                 rows | (1 << i), cols | (1 << j))
            if found is not None:
                return found
        self.dead.add(key)
        return None


def gromov_hausdorff_exact(P: FiniteMetricSpace, Q: FiniteMetricSpace,
                           size_limit: int = DEFAULT_GH_SIZE_LIMIT) -> tuple[float, Correspondence]:
    """Exact d_GH = half the minimum distortion, with an optimal correspondence.

    The optimum is one of the finitely many values |d_P(p,p') - d_Q(q,q')|,
    so we binary-search that sorted set with an exact feasibility search.
    """
    n, m = P.n, Q.n
    if n * m > size_limit:
        raise TooLarge(f"|P|*|Q| = {n * m} exceeds size_limit {size_limit}; use gh_upper_bound")
    cells = [(i, j) for i in range(n) for j in range(m)]
    ps = np.array([c[0] for c in cells])
    qs = np.array([c[1] for c in cells])
    cost = np.abs(P.dist[np.ix_(ps, ps)] - Q.dist[np.ix_(qs, qs)])
    candidates = np.unique(cost)
    search = _CoverSearch(cost, n, m)
    lo, hi = 0, len(candidates) - 1
    witness = search.feasible(candidates[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        found = search.feasible(candidates[mid])
        if found is not None:
            hi, witness = mid, found
        else:
            lo = mid + 1
    C = Correspondence(tuple(cells[b] for b in range(n * m) if witness >> b & 1))
    return float(candidates[lo]) / 2, C


def gh_distance(P: FiniteMetricSpace, Q: FiniteMetricSpace, size_limit: int = DEFAULT_GH_SIZE_LIMIT) -> float:
    return gromov_hausdorff_exact(P, Q, size_limit)[0]


def permute(P: FiniteMetricSpace, perm: Iterable[int]) -> FiniteMetricSpace:
    perm = np.asarray(list(perm))
    return validate_metric(P.dist[np.ix_(perm, perm)], [P.labels[k] for k in perm])
