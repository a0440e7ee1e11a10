"""delta-matchings between barcodes and the bottleneck distance.

Intervals are half-open ``[b, d)`` with ``d`` possibly ``inf``.  Two
conventions are fixed here:

* ``[b, d)`` must be matched at scale ``delta`` iff it contains a closed
  interval of length ``2 * delta``, i.e. iff ``(d - b) / 2 > delta``.  At
  equality the bar may stay unmatched, so a lone bar of length L sits at
  distance exactly L/2 from the empty barcode.
* ``I`` and ``J`` may be matched iff each lies in the closed delta-thickening
  of the other.  For half-open intervals that is ``|b - b'| <= delta`` and
  ``|d - d'| <= delta`` with ``inf - inf`` read as 0.  We test the endpoint
  differences directly because they are the same float expressions that
  generate the candidate set, which keeps the search exact.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidMatching
from .persistence import Barcode

INF = math.inf
Interval = tuple  # (birth, death)


def extend(interval: Interval, delta: float) -> tuple[float, float]:
    """Closed delta-thickening ``[b - delta, d + delta]`` of the closure of I."""
    b, d = interval
    if not b < d:
        raise ValueError("interval must be nonempty")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    return (b - delta, d + delta)


def _gap(x: float, y: float) -> float:
    if x == y:
        return 0.0
    return abs(x - y)


def half_length(interval: Interval) -> float:
    b, d = interval
    return (d - b) / 2


def must_match(interval: Interval, delta: float) -> bool:
    """Whether the bar contains a closed interval of length 2*delta."""
    return half_length(interval) > delta


def admissible(I: Interval, J: Interval, delta: float) -> bool:
    return _gap(I[0], J[0]) <= delta and _gap(I[1], J[1]) <= delta


def pair_cost(I: Interval, J: Interval) -> float:
    """Smallest delta at which I and J may be matched."""
    return max(_gap(I[0], J[0]), _gap(I[1], J[1]))


@dataclass(frozen=True)
class DeltaMatching:
    delta: float
    C: tuple
    D: tuple
    pairs: tuple  # (index into C, index into D)

    @property
    def unmatched_C(self) -> list[int]:
        used = {i for i, _ in self.pairs}
        return [i for i in range(len(self.C)) if i not in used]

    @property
    def unmatched_D(self) -> list[int]:
        used = {j for _, j in self.pairs}
        return [j for j in range(len(self.D)) if j not in used]

    def violations(self) -> list[str]:
        out = []
        left = [i for i, _ in self.pairs]
        right = [j for _, j in self.pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            out.append("an interval is used twice")
        if any(not 0 <= i < len(self.C) for i in left) or any(not 0 <= j < len(self.D) for j in right):
            out.append("index out of range")
            return out
        for i in self.unmatched_C:
            if must_match(self.C[i], self.delta):
                out.append(f"C[{i}] = {self.C[i]} is long but unmatched")
        for j in self.unmatched_D:
            if must_match(self.D[j], self.delta):
                out.append(f"D[{j}] = {self.D[j]} is long but unmatched")
        for i, j in self.pairs:
            if not admissible(self.C[i], self.D[j], self.delta):
                out.append(f"C[{i}] = {self.C[i]} and D[{j}] = {self.D[j]} are not delta-close")
        return out

    def is_valid(self) -> bool:
        return not self.violations()


def hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Maximum bipartite matching; returns ``match[u]`` (right vertex or -1)."""
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    while True:
        dist = [-1] * n_left
        q = deque(u for u in range(n_left) if match_l[u] == -1)
        for u in q:
            dist[u] = 0
        reachable_free = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    reachable_free = True
                elif dist[w] == -1:
                    dist[w] = dist[u] + 1
                    q.append(w)
        if not reachable_free:
            return match_l
        it = [0] * n_left
        for root in range(n_left):
            if match_l[root] != -1:
                continue
            # iterative DFS along layered edges
            stack = [root]
            path_r = []
            while stack:
                u = stack[-1]
                advanced = False
                while it[u] < len(adj[u]):
                    v = adj[u][it[u]]
                    it[u] += 1
                    w = match_r[v]
                    if w == -1:
                        path_r.append(v)
                        for uu, vv in zip(stack, path_r):
                            match_l[uu] = vv
                            match_r[vv] = uu
                        stack = []
                        advanced = True
                        break
                    if dist[w] == dist[u] + 1:
                        path_r.append(v)
                        stack.append(w)
                        advanced = True
                        break
                if not advanced:
                    dist[u] = -2
                    stack.pop()
                    if path_r:
                        path_r.pop()


def exists_delta_matching(C: Sequence[Interval], D: Sequence[Interval], delta: float) -> DeltaMatching | None:
    """A delta-matching between C and D, or None if there is none.

    Perfect matching on the graph with left side ``C + diag(D)`` and right
    side ``D + diag(C)``: a bar may pair with its own diagonal copy only when
    it is short enough to stay unmatched.
    """
    C, D = tuple(map(tuple, C)), tuple(map(tuple, D))
    a, b = len(C), len(D)
    adj: list[list[int]] = []
    for i, I in enumerate(C):
        row = [j for j, J in enumerate(D) if admissible(I, J, delta)]
        if not must_match(I, delta):
            row.append(b + i)
        adj.append(row)
    diag_c = list(range(b, b + a))
    for j, J in enumerate(D):
        row = [j] if not must_match(J, delta) else []
        adj.append(row + diag_c)
    match = hopcroft_karp(adj, a + b)
    if any(v == -1 for v in match):
        return None
    pairs = tuple((i, match[i]) for i in range(a) if match[i] < b)
    return DeltaMatching(float(delta), C, D, pairs)


def candidate_values(C: Sequence[Interval], D: Sequence[Interval]) -> list[float]:
    vals = {0.0}
    for I in C:
        for J in D:
            c = pair_cost(I, J)
            if c < INF:
                vals.add(_gap(I[0], J[0]))
                if I[1] < INF and J[1] < INF:
                    vals.add(_gap(I[1], J[1]))
    for I in list(C) + list(D):
        h = half_length(I)
        if h < INF:
            vals.add(h)
    return sorted(vals)


def _slice(X, degree):
    if isinstance(X, Barcode):
        if degree is None:
            raise ValueError("degree required for a Barcode")
        return X[degree]
    return tuple(map(tuple, X))


def bottleneck(C, D, degree: int | None = None) -> tuple[float, DeltaMatching | None]:
    """Exact bottleneck distance with a certificate matching.

    Returns ``(inf, None)`` when the numbers of essential bars differ.
    """
    C, D = _slice(C, degree), _slice(D, degree)
    if sum(d == INF for _, d in C) != sum(d == INF for _, d in D):
        return INF, None
    cands = candidate_values(C, D)
    lo, hi = 0, len(cands) - 1
    best = exists_delta_matching(C, D, cands[hi])
    if best is None:
        raise AssertionError("no matching at the largest candidate")
    while lo < hi:
        mid = (lo + hi) // 2
        m = exists_delta_matching(C, D, cands[mid])
        if m is None:
            lo = mid + 1
        else:
            hi, best = mid, m
    return cands[lo], best


def bottleneck_distance(C, D, degree: int | None = None) -> float:
    return bottleneck(C, D, degree)[0]


def interleaving_distance_pfd(M, N) -> float:
    """Interleaving distance of two p.f.d. modules.

    By the isometry theorem this equals the bottleneck distance of their
    barcodes.  Accepts GridModules or interval lists.
    """
    from .modules import GridModule, decompose

    def bars(X):
        if isinstance(X, GridModule):
            return decompose(X)
        return _slice(X, None)

    return bottleneck(bars(M), bars(N))[0]


def check_certificate(m: DeltaMatching):
    bad = m.violations()
    if bad:
        raise InvalidMatching("; ".join(bad))
    return m
