"""Filtered simplicial complexes and the constructors used in Rips stability.

Scale convention: an edge ``[p, q]`` enters the Rips filtration at
``r = d(p, q) / 2`` (the edge set at scale r is ``d <= 2r``).  Everything in
this module uses that convention; conversion to the ``d <= r`` convention
happens only when writing output.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import InvalidComplex, NonMonotoneFunction
from .metric import Correspondence, FiniteMetricSpace

Simplex = tuple


def facets(s: Simplex):
    if len(s) <= 1:
        return []
    return [s[:k] + s[k + 1:] for k in range(len(s))]


def _order_key(item):
    s, v = item
    return (v, len(s), s)


class FilteredComplex:
    """A finite simplicial complex with monotone real filtration values.

    Simplices are stored sorted by ``(value, dimension, lexicographic)``,
    which is a valid filtration order: faces always precede cofaces.
    """

    __slots__ = ("simplices", "values", "_index")

    def __init__(self, items: Iterable[tuple[Iterable, float]] | Mapping, validate: bool = True):
        if isinstance(items, Mapping):
            items = items.items()
        pairs = [(tuple(sorted(s)), float(v)) for s, v in items]
        index: dict = {}
        for s, v in pairs:
            if len(s) == 0:
                raise InvalidComplex("empty simplex")
            if len(set(s)) != len(s):
                raise InvalidComplex(f"repeated vertex in {s}")
            if s in index:
                raise InvalidComplex(f"duplicate simplex {s}")
            if math.isnan(v):
                raise InvalidComplex(f"NaN value on {s}")
            index[s] = v
        if validate:
            for s, v in pairs:
                for f in facets(s):
                    if f not in index:
                        raise InvalidComplex(f"face {f} of {s} missing")
                    if index[f] > v:
                        raise NonMonotoneFunction(f, s, index[f], v)
        pairs.sort(key=_order_key)
        self.simplices: tuple = tuple(s for s, _ in pairs)
        self.values: tuple = tuple(v for _, v in pairs)
        self._index = {s: k for k, s in enumerate(self.simplices)}

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(zip(self.simplices, self.values))

    def __contains__(self, s):
        return tuple(sorted(s)) in self._index

    def __eq__(self, other):
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __repr__(self):
        return f"FilteredComplex({len(self)} simplices, max_dim={self.max_dim})"

    def index(self, s) -> int:
        return self._index[tuple(sorted(s))]

    def value(self, s) -> float:
        return self.values[self.index(s)]

    def as_dict(self) -> dict:
        return dict(zip(self.simplices, self.values))

    @property
    def max_dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    @property
    def vertices(self) -> list:
        return [s[0] for s in self.simplices if len(s) == 1]

    def critical_values(self) -> list[float]:
        return sorted(set(self.values))

    def subcomplex(self, r: float) -> list:
        """Simplices present at scale ``r``."""
        return [s for s, v in zip(self.simplices, self.values) if v <= r]

    def skeleton(self, dim: int) -> "FilteredComplex":
        return FilteredComplex(((s, v) for s, v in self if len(s) - 1 <= dim), validate=False)

    def relabel(self, mapping) -> "FilteredComplex":
        return FilteredComplex(((tuple(mapping[u] for u in s), v) for s, v in self))

    def euler_characteristic(self, r: float) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.subcomplex(r))


@dataclass(frozen=True)
class SimplexFunction:
    """A real-valued function on the simplices of a finite complex."""

    values: dict = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", {tuple(sorted(s)): float(v) for s, v in dict(self.values).items()})

    def __call__(self, s) -> float:
        return self.values[tuple(sorted(s))]

    @property
    def simplices(self):
        return self.values.keys()

    def check_monotone(self):
        for s, v in self.values.items():
            for f in facets(s):
                if f not in self.values:
                    raise InvalidComplex(f"face {f} of {s} missing")
                if self.values[f] > v:
                    raise NonMonotoneFunction(f, s, self.values[f], v)


def sup_distance(gamma: SimplexFunction, kappa: SimplexFunction) -> float:
    """d_inf between two functions on the same set of simplices."""
    if set(gamma.simplices) != set(kappa.simplices):
        raise InvalidComplex("functions are defined on different complexes")
    return max((abs(gamma(s) - kappa(s)) for s in gamma.simplices), default=0.0)


def sublevel_filtration(gamma: SimplexFunction, max_scale: float = math.inf) -> FilteredComplex:
    gamma.check_monotone()
    return FilteredComplex(((s, v) for s, v in gamma.values.items() if v <= max_scale), validate=False)


def function_of(X: FilteredComplex) -> SimplexFunction:
    """The simplexwise function whose sublevel filtration is X."""
    return SimplexFunction(X.as_dict())


def _clique_values(half: np.ndarray, max_dim: int, max_scale: float):
    """Enumerate cliques of the graph {half <= max_scale} up to max_dim with
    their flag values (max over edges)."""
    n = half.shape[0]
    out = []

    def expand(simplex, value, cands):
        out.append((simplex, value))
        if len(simplex) > max_dim:
            return
        for k, u in enumerate(cands):
            v = max(value, max((half[w, u] for w in simplex), default=0.0))
            rest = [w for w in cands[k + 1:] if half[u, w] <= max_scale]
            expand(simplex + (u,), float(v), rest)

    for u in range(n):
        if 0.0 <= max_scale:
            expand((u,), 0.0, [w for w in range(u + 1, n) if half[u, w] <= max_scale])
    return out


def rips_filtration(P: FiniteMetricSpace, max_dim: int, max_scale: float = math.inf) -> FilteredComplex:
    """Vietoris-Rips filtration: a simplex enters at half its diameter."""
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    half = P.dist / 2
    return FilteredComplex(_clique_values(half, max_dim, max_scale), validate=False)


def shift_filtration(X: FilteredComplex, delta: float) -> FilteredComplex:
    """X(delta)_r = X_{r + delta}: every value decreases by delta."""
    return FilteredComplex(((s, v - delta) for s, v in X), validate=False)


@dataclass(frozen=True)
class CorrespondenceFiltrations:
    F_P: FilteredComplex
    F_Q: FilteredComplex
    gamma_P: SimplexFunction
    gamma_Q: SimplexFunction
    correspondence: Correspondence

    def __iter__(self):
        return iter((self.F_P, self.F_Q, self.gamma_P, self.gamma_Q))


def correspondence_filtration(C: Correspondence, P: FiniteMetricSpace, Q: FiniteMetricSpace,
                              max_dim: int, max_scale: float = math.inf) -> CorrespondenceFiltrations:
    """Filtrations F^P, F^Q on the full simplex with vertex set C.

    Vertex ``k`` is the pair ``C.pairs[k]``.  A simplex enters F^P at half
    the diameter of its projection to P, and analogously for F^Q.
    """
    C.check(P.n, Q.n)
    ps, qs = C.proj_p(), C.proj_q()
    hp = P.dist[np.ix_(ps, ps)] / 2
    hq = Q.dist[np.ix_(qs, qs)] / 2
    vp = dict(_clique_values(hp, max_dim, math.inf))
    vq = dict(_clique_values(hq, max_dim, math.inf))
    gamma_P, gamma_Q = SimplexFunction(vp), SimplexFunction(vq)
    return CorrespondenceFiltrations(
        sublevel_filtration(gamma_P, max_scale), sublevel_filtration(gamma_Q, max_scale),
        gamma_P, gamma_Q, C)


@dataclass
class FiberReport:
    passed: bool
    checks: int = 0
    census: Counter = field(default_factory=Counter)
    witness: tuple | None = None
    reason: str = ""

    def __str__(self):
        if self.passed:
            sizes = ", ".join(f"{k}:{v}" for k, v in sorted(self.census.items()))
            return f"PASS ({self.checks} fibers; vertex-count census {sizes})"
        return f"FAIL at simplex {self.witness[0]} r={self.witness[1]!r}: {self.reason}"


def quillen_fiber_check(F: FilteredComplex, P: FiniteMetricSpace, C: Correspondence,
                        side: str = "P") -> FiberReport:
    """Check that the projection-induced map F_r -> Rips(P)_r has full-simplex fibers.

    For every simplex s of Rips(P) and every critical value r >= value(s), the
    preimage of the closed simplex s must be the full simplex (up to the
    dimension cap of F) on the pairs of C lying over the vertices of s.  The
    map itself must be simplicial at every scale.
    """
    proj = C.proj_p() if side == "P" else C.proj_q()
    dim = max(F.max_dim, 0)
    R = rips_filtration(P, dim)
    fvals = F.as_dict()
    crit = sorted(set(F.values) | set(R.values))

    # simplicial: the image of every simplex of F_r lies in Rips(P)_r
    for s, v in F:
        image = tuple(sorted({int(proj[u]) for u in s}))
        if image not in R or R.value(image) > v:
            r = min(c for c in crit if c >= v)
            return FiberReport(False, witness=(image, r),
                               reason=f"image of {s} (value {v!r}) not in Rips at r={r!r}")

    over: dict[int, list] = {}
    for k, p in enumerate(proj):
        over.setdefault(int(p), []).append(k)

    report = FiberReport(True)
    failures = []
    for s, value in R:
        verts = sorted(k for p in s for k in over.get(p, []))
        need = -math.inf
        missing = None
        for size in range(1, min(len(verts), dim + 1) + 1):
            for tau in combinations(verts, size):
                fv = fvals.get(tau)
                if fv is None:
                    missing = tau
                    need = math.inf
                    break
                need = max(need, fv)
            if missing is not None:
                break
        for r in crit:
            if r < value:
                continue
            if need > r:
                failures.append((r, s, missing))
                break
            report.checks += 1
            report.census[len(verts)] += 1
    if failures:
        r, s, missing = min(failures, key=lambda x: (x[0], len(x[1]), x[1]))
        why = (f"fiber misses simplex {missing}" if missing is not None
               else "fiber is not yet a full simplex")
        return FiberReport(False, report.checks, report.census, (s, r), why)
    return report
