"""Text formats for every data type, as ``loads_*``/``dumps_*`` pairs plus
path-based ``read_*``/``write_*`` wrappers.

distance matrix   CSV, n rows of n reals, optional header row of labels
correspondence    one ``i j`` pair per line (0-based), ``#`` comments
filtered complex  ``k value v1 ... vk`` per simplex (k = vertex count)
barcode           ``degree birth death`` per bar, ``inf`` for essential bars
grid module       ``p m`` / grid line / dims line / m-1 lines, each one
                  transition matrix flattened row-major
"""
from __future__ import annotations

import csv
import io as _io
import math
from pathlib import Path

import numpy as np

from .errors import FormatError
from .filtrations import FilteredComplex
from .metric import Correspondence, FiniteMetricSpace, validate_metric
from .modules import GridModule
from .persistence import Barcode


def fmt_real(x: float) -> str:
    """Shortest round-tripping decimal, with integral values printed bare."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = repr(x)
    if s.endswith(".0"):
        s = s[:-2]
    return "0" if s == "-0" else s


def fmt_exact17(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _read(path) -> str:
    return Path(path).read_text()


def _write(path, text: str):
    Path(path).write_text(text)


# distance matrices

def loads_metric(text: str) -> FiniteMetricSpace:
    rows = [r for r in csv.reader(_io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise FormatError("empty distance matrix")
    labels = None
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        labels = [c.strip() for c in rows[0]]
        rows = rows[1:]
    try:
        matrix = [[float(c) for c in r] for r in rows]
    except ValueError as e:
        raise FormatError(f"bad distance entry: {e}") from None
    if any(len(r) != len(matrix) for r in matrix):
        raise FormatError("distance matrix must be n x n")
    return validate_metric(matrix, labels)


def dumps_metric(P: FiniteMetricSpace, header: bool = False) -> str:
    out = _io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    if header:
        w.writerow(P.labels)
    for row in P.dist:
        w.writerow([fmt_real(x) for x in row])
    return out.getvalue()


def read_metric(path) -> FiniteMetricSpace:
    return loads_metric(_read(path))


def write_metric(path, P: FiniteMetricSpace, header: bool = False):
    _write(path, dumps_metric(P, header))


# correspondences

def loads_correspondence(text: str) -> Correspondence:
    pairs = []
    for lineno, line in _lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'i j'")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise FormatError(f"line {lineno}: indices must be integers") from None
    return Correspondence(tuple(pairs))


def dumps_correspondence(C: Correspondence) -> str:
    return "".join(f"{i} {j}\n" for i, j in C.pairs)


def read_correspondence(path) -> Correspondence:
    return loads_correspondence(_read(path))


def write_correspondence(path, C: Correspondence):
    _write(path, dumps_correspondence(C))


# filtered complexes

def loads_complex(text: str) -> FilteredComplex:
    items = []
    for lineno, line in _lines(text):
        parts = line.split()
        try:
            k = int(parts[0])
            value = float(parts[1])
            verts = [int(v) for v in parts[2:]]
        except (ValueError, IndexError):
            raise FormatError(f"line {lineno}: expected 'k value v1 ... vk'") from None
        if len(verts) != k:
            raise FormatError(f"line {lineno}: {k} vertices announced, {len(verts)} given")
        items.append((verts, value))
    return FilteredComplex(items)


def dumps_complex(X: FilteredComplex, scale: float = 1.0) -> str:
    return "".join(f"{len(s)} {fmt_exact17(v * scale)} {' '.join(map(str, s))}\n" for s, v in X)


def read_complex(path) -> FilteredComplex:
    return loads_complex(_read(path))


def write_complex(path, X: FilteredComplex):
    _write(path, dumps_complex(X))


# barcodes

def loads_barcode(text: str) -> Barcode:
    bars = []
    for lineno, line in _lines(text):
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 'k b d'")
        try:
            bars.append((int(parts[0]), float(parts[1]), float(parts[2])))
        except ValueError:
            raise FormatError(f"line {lineno}: bad number") from None
    return Barcode(bars)


def dumps_barcode(B: Barcode, scale: float = 1.0) -> str:
    return "".join(f"{k} {fmt_real(b * scale)} {fmt_real(d * scale)}\n" for k, b, d in B)


def read_barcode(path) -> Barcode:
    return loads_barcode(_read(path))


def write_barcode(path, B: Barcode):
    _write(path, dumps_barcode(B))


# grid modules

def loads_module(text: str) -> GridModule:
    lines = text.splitlines()
    try:
        p, m = (int(x) for x in lines[0].split())
        grid = [float(x) for x in lines[1].split()] if m else []
        dims = [int(x) for x in lines[2].split()] if m else []
        maps = []
        for i in range(m - 1):
            entries = [int(x) for x in lines[3 + i].split()]
            if len(entries) != dims[i] * dims[i + 1]:
                raise FormatError(f"block {i}: expected {dims[i + 1]}x{dims[i]} entries")
            maps.append(np.array(entries, dtype=np.int64).reshape(dims[i + 1], dims[i]))
    except (ValueError, IndexError):
        raise FormatError("malformed grid module") from None
    if len(grid) != m or len(dims) != m:
        raise FormatError("grid/dims length does not match header")
    return GridModule(grid, dims, maps, p)


def dumps_module(M: GridModule) -> str:
    out = [f"{M.p} {len(M)}", " ".join(fmt_real(t) for t in M.grid), " ".join(map(str, M.dims))]
    for a in M.maps:
        out.append(" ".join(str(int(x)) for x in a.ravel()))
    return "\n".join(out) + "\n"


def read_module(path) -> GridModule:
    return loads_module(_read(path))


def write_module(path, M: GridModule):
    _write(path, dumps_module(M))
