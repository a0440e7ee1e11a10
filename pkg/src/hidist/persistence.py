"""Persistent homology by boundary-matrix reduction over a prime field."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import fields
from .filtrations import FilteredComplex, facets

INF = math.inf


class Barcode:
    """Per-degree multisets of half-open intervals ``[birth, death)``.

    Intervals are stored sorted, so equality is multiset equality.  Empty
    intervals (``birth >= death``) are never stored.
    """

    __slots__ = ("_bars",)

    def __init__(self, bars: dict | Iterable[tuple[int, float, float]] | None = None):
        grouped: dict[int, list] = {}
        if bars is None:
            bars = {}
        if isinstance(bars, dict):
            items = ((k, b, d) for k, ivs in bars.items() for b, d in ivs)
        else:
            items = bars
        for k, b, d in items:
            b, d = float(b), float(d)
            if not b < d:
                raise ValueError(f"empty interval [{b}, {d}) in degree {k}")
            grouped.setdefault(int(k), []).append((b, d))
        self._bars = {k: tuple(sorted(v)) for k, v in sorted(grouped.items())}

    def __getitem__(self, k: int) -> tuple:
        return self._bars.get(k, ())

    def degrees(self) -> list[int]:
        return list(self._bars)

    def __iter__(self):
        for k, ivs in self._bars.items():
            for b, d in ivs:
                yield k, b, d

    def __len__(self):
        return sum(len(v) for v in self._bars.values())

    def __eq__(self, other):
        if not isinstance(other, Barcode):
            return NotImplemented
        return self._bars == other._bars

    def __repr__(self):
        return f"Barcode({dict(self._bars)!r})"

    def restrict(self, max_degree: int) -> "Barcode":
        return Barcode({k: v for k, v in self._bars.items() if k <= max_degree})

    def shift(self, delta: float) -> "Barcode":
        return Barcode((k, b - delta, d - delta) for k, b, d in self)

    def alive(self, k: int, r: float) -> int:
        return sum(1 for b, d in self[k] if b <= r < d)


@dataclass
class Reduction:
    order: list[int]
    pairs: list[tuple[int, int]]
    essential: list[int]
    column_ops: int = 0


def _check_order(X: FilteredComplex, order: Sequence[int]):
    pos = {s: k for k, s in enumerate(order)}
    if sorted(order) != list(range(len(X))):
        raise ValueError("order is not a permutation of the simplices")
    prev = -INF
    for k in order:
        v = X.values[k]
        if v < prev:
            raise ValueError("order is not sorted by filtration value")
        prev = v
        for f in facets(X.simplices[k]):
            if pos[X.index(f)] > pos[k]:
                raise ValueError(f"face {f} after coface {X.simplices[k]}")


def reduce_matrix(X: FilteredComplex, p: int = 2, order: Sequence[int] | None = None,
                  max_dim: int | None = None, clearing: bool = True) -> Reduction:
    """Standard column reduction of the filtration boundary matrix.

    ``order`` lists simplex indices of X in filtration order (default: the
    stored ``(value, dim, lex)`` order).  Columns are processed from the top
    dimension down so that, with clearing, any column already known to be a
    pivot row of a higher-dimensional column is skipped.  Returned pairs and
    essentials are simplex indices of X.
    """
    p = fields.check_prime(p)
    if order is None:
        order = list(range(len(X)))
    else:
        order = list(order)
        _check_order(X, order)
    pos = {s: k for k, s in enumerate(order)}
    top = X.max_dim if max_dim is None else min(max_dim, X.max_dim)
    by_dim: dict[int, list[int]] = {}
    for k in order:
        d = len(X.simplices[k]) - 1
        if d <= top:
            by_dim.setdefault(d, []).append(k)

    def boundary(k):
        fs = facets(X.simplices[k])
        if p == 2:
            col = 0
            for f in fs:
                col |= 1 << pos[X.index(f)]
            return col
        return {pos[X.index(f)]: (-1) ** i % p for i, f in enumerate(fs)}

    pairs = []
    ops = 0
    cleared: set[int] = set()
    negative: set[int] = set()
    for d in range(top, 0, -1):
        pivots: dict[int, object] = {}
        for k in by_dim.get(d, []):
            if clearing and pos[k] in cleared:
                continue
            col = boundary(k)
            if p == 2:
                while col:
                    low = col.bit_length() - 1
                    other = pivots.get(low)
                    if other is None:
                        break
                    col ^= other
                    ops += 1
            else:
                while col:
                    low = max(col)
                    other = pivots.get(low)
                    if other is None:
                        break
                    factor = col[low] * fields.inverse(other[low], p) % p
                    for row, c in other.items():
                        nv = (col.get(row, 0) - factor * c) % p
                        if nv:
                            col[row] = nv
                        else:
                            col.pop(row, None)
                    ops += 1
            if col:
                low = col.bit_length() - 1 if p == 2 else max(col)
                pivots[low] = col
                cleared.add(low)
                negative.add(k)
                pairs.append((order[low], k))
    births = {i for i, _ in pairs}
    essential = [k for k in order
                 if len(X.simplices[k]) - 1 <= top and k not in births and k not in negative]
    pairs.sort(key=lambda ij: pos[ij[0]])
    return Reduction(order, pairs, essential, ops)


def barcodes(X: FilteredComplex, max_degree: int | None = None, p: int = 2,
             order: Sequence[int] | None = None, clearing: bool = True) -> Barcode:
    """Barcode of H_k of the filtration for every k <= max_degree."""
    if max_degree is None:
        max_degree = max(X.max_dim, 0)
    red = reduce_matrix(X, p, order=order, max_dim=max_degree + 1, clearing=clearing)
    bars = []
    for i, j in red.pairs:
        k = len(X.simplices[i]) - 1
        if k <= max_degree and X.values[i] < X.values[j]:
            bars.append((k, X.values[i], X.values[j]))
    for i in red.essential:
        k = len(X.simplices[i]) - 1
        if k <= max_degree:
            bars.append((k, X.values[i], INF))
    return Barcode(bars)
