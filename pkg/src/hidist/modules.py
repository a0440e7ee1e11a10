"""Persistence modules presented on finite grids.

A :class:`GridModule` with grid ``t_0 < ... < t_{m-1}`` is the module that is
zero below ``t_0``, equal to ``V_i`` on ``[t_i, t_{i+1})`` (and on
``[t_{m-1}, inf)`` for the last point), with internal maps the given
transition matrices.  All arithmetic is exact over F_p.

Morphisms between shifted modules are evaluated on grids of
:class:`fractions.Fraction`; float endpoints convert exactly, so translates
like ``t - delta`` never suffer round-off when looked up again.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import fields
from .errors import GridMismatch, InvalidMatching, InvalidWitness
from .filtrations import FilteredComplex, SimplexFunction, facets, sublevel_filtration, sup_distance
from .matching import DeltaMatching, bottleneck
from .persistence import INF, barcodes


def _exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class GridModule:
    __slots__ = ("grid", "dims", "maps", "p")

    def __init__(self, grid: Sequence[float], dims: Sequence[int], maps: Sequence, p: int = 2):
        self.p = fields.check_prime(p)
        self.grid = tuple(float(t) for t in grid)
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != len(self.grid):
            raise ValueError("grid and dims differ in length")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("grid must be strictly increasing")
        if any(d < 0 for d in self.dims):
            raise ValueError("dimensions must be nonnegative")
        if len(maps) != max(len(self.grid) - 1, 0):
            raise ValueError(f"expected {len(self.grid) - 1} transition matrices, got {len(maps)}")
        checked = []
        for i, a in enumerate(maps):
            a = np.asarray(a, dtype=np.int64).reshape(self.dims[i + 1], self.dims[i]) % self.p
            a.setflags(write=False)
            checked.append(a)
        self.maps = tuple(checked)

    @classmethod
    def zero(cls, p: int = 2) -> "GridModule":
        return cls((), (), (), p)

    def __len__(self):
        return len(self.grid)

    def __eq__(self, other):
        if not isinstance(other, GridModule):
            return NotImplemented
        return (self.p == other.p and self.grid == other.grid and self.dims == other.dims
                and all(np.array_equal(a, b) for a, b in zip(self.maps, other.maps)))

    def __repr__(self):
        return f"GridModule(grid={self.grid}, dims={self.dims}, p={self.p})"

    def index_at(self, r) -> int:
        """Index of the grid cell containing r, or -1 below the grid."""
        return bisect_right(self.grid, r) - 1

    def dim_at(self, r) -> int:
        i = self.index_at(r)
        return 0 if i < 0 else self.dims[i]

    def transition(self, i: int, j: int) -> np.ndarray:
        """Composite map V_i -> V_j for grid indices i <= j."""
        if j < i:
            raise ValueError("transition goes forward only")
        out = np.eye(self.dims[i], dtype=np.int64)
        for k in range(i, j):
            out = fields.matmul(self.maps[k], out, self.p)
        return out

    def map_between(self, r, s) -> np.ndarray:
        """The internal map M_r -> M_s for reals r <= s."""
        i, j = self.index_at(r), self.index_at(s)
        if i < 0:
            return np.zeros((self.dim_at(s), 0), dtype=np.int64)
        return self.transition(i, j)

    def shift(self, delta: float) -> "GridModule":
        """M(delta)_r = M_{r + delta}."""
        return GridModule([t - delta for t in self.grid], self.dims, self.maps, self.p)


def rank_table(M: GridModule) -> np.ndarray:
    m = len(M)
    r = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        a = np.eye(M.dims[i], dtype=np.int64)
        for j in range(i, m):
            r[i, j] = fields.rank(a, M.p)
            if j + 1 < m:
                a = fields.matmul(M.maps[j], a, M.p)
    return r


def _is_monomial(a: np.ndarray) -> bool:
    nz = a != 0
    return bool(np.all(nz.sum(axis=0) <= 1) and np.all(nz.sum(axis=1) <= 1))


def _chain_bars(M: GridModule) -> list:
    """Bars of a module whose maps send basis vectors to multiples of
    distinct basis vectors: each bar is a maximal chain of basis vectors."""
    m = len(M)
    forward = []
    hit = [set() for _ in range(m)]
    for i, a in enumerate(M.maps):
        rows, cols = np.nonzero(a)
        forward.append(dict(zip(cols.tolist(), rows.tolist())))
        hit[i + 1] = set(rows.tolist())
    bars = []
    for i in range(m):
        for v in range(M.dims[i]):
            if v in hit[i]:
                continue
            j, u = i, v
            while j < m - 1 and u in forward[j]:
                u = forward[j][u]
                j += 1
            bars.append((i, j))
    return bars


def bar_multiplicities(grid: Sequence[float], rk) -> dict:
    """Interval multiplicities from a rank function ``rk(i, j)`` on grid indices.

    The multiplicity of the index interval ``[i, j]`` is
    ``r(i,j) - r(i-1,j) - r(i,j+1) + r(i-1,j+1)`` with out-of-range ranks
    zero; it becomes the real interval ``[t_i, t_{j+1})`` with ``t_m = inf``.
    """
    m = len(grid)

    def r(i, j):
        if i < 0 or j >= m or i > j:
            return 0
        return int(rk(i, j))

    out = {}
    for i in range(m):
        for j in range(i, m):
            mult = r(i, j) - r(i - 1, j) - r(i, j + 1) + r(i - 1, j + 1)
            if mult < 0:
                raise AssertionError("negative multiplicity: not a valid rank function")
            if mult:
                death = float(grid[j + 1]) if j + 1 < m else INF
                out[(float(grid[i]), death)] = mult
    return out


def bars_from_ranks(grid: Sequence[float], rk) -> tuple:
    mult = bar_multiplicities(grid, rk)
    return tuple(sorted(bar for bar, k in mult.items() for _ in range(k)))


def decompose(M: GridModule) -> tuple:
    """Barcode of M as a sorted tuple of ``(birth, death)`` intervals.

    Uses rank inclusion-exclusion over the full rank table.  Modules whose
    transition matrices are monomial (at most one nonzero per row and
    column) are already split into interval summands by their basis, so for
    them the bars are read off by following basis chains.
    """
    if all(_is_monomial(a) for a in M.maps):
        return tuple(sorted(
            (M.grid[i], M.grid[j + 1] if j + 1 < len(M) else INF) for i, j in _chain_bars(M)))
    r = rank_table(M)
    return bars_from_ranks(M.grid, lambda i, j: r[i, j])


def decompose_by_ranks(M: GridModule) -> tuple:
    """Rank inclusion-exclusion without the monomial shortcut."""
    r = rank_table(M)
    return bars_from_ranks(M.grid, lambda i, j: r[i, j])


def barcode_module(bars: Sequence[tuple], p: int = 2) -> tuple[GridModule, list[list[int]]]:
    """Direct sum of interval modules.

    Returns the module together with, for each grid point, the list of bar
    indices forming its basis (in order).
    """
    bars = [tuple(b) for b in bars]
    grid = sorted({x for b in bars for x in b if x < INF})
    alive = [[k for k, (b, d) in enumerate(bars) if b <= t < d] for t in grid]
    maps = []
    for i in range(len(grid) - 1):
        a = np.zeros((len(alive[i + 1]), len(alive[i])), dtype=np.int64)
        row = {k: n for n, k in enumerate(alive[i + 1])}
        for c, k in enumerate(alive[i]):
            if k in row:
                a[row[k], c] = 1
        maps.append(a)
    return GridModule(grid, [len(a) for a in alive], maps, p), alive


def homology_module(X: FilteredComplex, degree: int, p: int = 2) -> GridModule:
    """H_degree of the filtration as a GridModule over its critical values.

    Each H_k(X_t) is presented by explicit representatives: a basis of the
    boundaries extended to a basis of the cycles.  Transition matrices are
    the quotient coordinates of the pushed-forward representatives.
    """
    p = fields.check_prime(p)
    k = degree
    grid = X.critical_values()
    ks = [s for s in X.simplices if len(s) == k + 1]
    kidx = {s: n for n, s in enumerate(ks)}
    lower = [s for s in X.simplices if len(s) == k]
    lidx = {s: n for n, s in enumerate(lower)}
    upper = [s for s in X.simplices if len(s) == k + 2]

    def bd(simplices, rows):
        a = np.zeros((len(rows), len(simplices)), dtype=np.int64)
        for c, s in enumerate(simplices):
            for i, f in enumerate(facets(s)):
                a[rows[f], c] = (-1) ** i % p
        return a

    d_k = bd(ks, lidx) if k > 0 else np.zeros((0, len(ks)), dtype=np.int64)
    d_k1 = bd(upper, kidx)
    value = X.as_dict()

    bases, reps = [], []
    for t in grid:
        present = [n for n, s in enumerate(ks) if value[s] <= t]
        z_local = fields.nullspace(d_k[:, present], p)
        z = np.zeros((len(ks), z_local.shape[1]), dtype=np.int64)
        z[present] = z_local
        up = [n for n, s in enumerate(upper) if value[s] <= t]
        b_all = d_k1[:, up]
        b = b_all[:, fields.independent_columns(b_all, p)]
        both = np.hstack([b, z])
        sel = fields.independent_columns(both, p)
        h = both[:, [c for c in sel if c >= b.shape[1]]]
        bases.append(np.hstack([b, h]))
        reps.append(h)

    maps = []
    for i in range(len(grid) - 1):
        coords = fields.solve(bases[i + 1], reps[i], p)
        nb = bases[i + 1].shape[1] - reps[i + 1].shape[1]
        maps.append(coords[nb:, :])
    return GridModule(grid, [h.shape[1] for h in reps], maps, p)


@dataclass
class ModuleMorphism:
    """A family of maps M_r -> N_{r + delta}, constant on the cells of ``grid``.

    ``components[i]`` is the matrix at ``grid[i]``.  The grid must contain
    every grid point of M and every grid point of N translated by -delta,
    and start no later than M does.  Naturality is not enforced here; see
    :meth:`is_natural`.
    """

    source: GridModule
    target: GridModule
    delta: Fraction
    grid: tuple
    components: list = field(repr=False)

    def __post_init__(self):
        self.delta = _exact(self.delta)
        self.grid = tuple(_exact(t) for t in self.grid)
        need = {_exact(t) for t in self.source.grid} | {_exact(t) - self.delta for t in self.target.grid}
        if self.source.grid and (not self.grid or self.grid[0] > _exact(self.source.grid[0])):
            raise GridMismatch("morphism grid must start at or before the source grid")
        if self.grid:
            need = {t for t in need if t >= self.grid[0]}
        if not need <= set(self.grid):
            raise GridMismatch("morphism grid does not refine the source and shifted target grids")
        if len(self.components) != len(self.grid):
            raise GridMismatch("one component per grid point required")
        comps = []
        for t, c in zip(self.grid, self.components):
            shape = (self.target.dim_at(t + self.delta), self.source.dim_at(t))
            c = np.asarray(c, dtype=np.int64).reshape(shape) % self.source.p
            comps.append(c)
        self.components = comps

    @staticmethod
    def refined_grid(M: GridModule, N: GridModule, delta) -> tuple:
        delta = _exact(delta)
        pts = {_exact(t) for t in M.grid} | {_exact(t) - delta for t in N.grid}
        if M.grid:
            pts = {t for t in pts if t >= _exact(M.grid[0])}
        return tuple(sorted(pts))

    @classmethod
    def zero(cls, M: GridModule, N: GridModule, delta) -> "ModuleMorphism":
        grid = cls.refined_grid(M, N, delta)
        d = _exact(delta)
        comps = [np.zeros((N.dim_at(t + d), M.dim_at(t)), dtype=np.int64) for t in grid]
        return cls(M, N, d, grid, comps)

    @classmethod
    def from_function(cls, M: GridModule, N: GridModule, delta, fn) -> "ModuleMorphism":
        """Build components by calling ``fn(t)`` at each refined grid point."""
        grid = cls.refined_grid(M, N, delta)
        return cls(M, N, _exact(delta), grid, [fn(t) for t in grid])

    def at(self, r) -> np.ndarray:
        r = _exact(r)
        i = bisect_right(self.grid, r) - 1
        if i < 0:
            return np.zeros((self.target.dim_at(r + self.delta), self.source.dim_at(r)), dtype=np.int64)
        return self.components[i]

    def is_natural(self) -> bool:
        p = self.source.p
        M, N, d = self.source, self.target, self.delta
        for a, b in zip(self.grid, self.grid[1:]):
            lhs = fields.matmul(N.map_between(a + d, b + d), self.at(a), p)
            rhs = fields.matmul(self.at(b), M.map_between(a, b), p)
            if not np.array_equal(lhs, rhs):
                return False
        return True


def _same_module(A: GridModule, B: GridModule) -> bool:
    return A is B or A == B


def check_interleaving(f: ModuleMorphism, g: ModuleMorphism) -> bool:
    """True iff f, g are natural and g(delta) f, f(delta) g are the 2delta transitions."""
    M, N = f.source, f.target
    if not (_same_module(g.source, N) and _same_module(g.target, M)):
        raise GridMismatch("g must go from the target of f back to its source")
    if f.delta != g.delta:
        raise GridMismatch("f and g must share the same shift")
    if M.p != N.p:
        raise GridMismatch("modules over different fields")
    if not (f.is_natural() and g.is_natural()):
        return False
    d, p = f.delta, M.p
    pts = sorted({_exact(t) - s * d for t in M.grid + N.grid for s in (0, 1, 2)})
    for r in pts:
        gf = fields.matmul(g.at(r + d), f.at(r), p)
        if not np.array_equal(gf, M.map_between(r, r + 2 * d)):
            return False
        fg = fields.matmul(f.at(r + d), g.at(r), p)
        if not np.array_equal(fg, N.map_between(r, r + 2 * d)):
            return False
    return True


def matching_to_interleaving(sigma: DeltaMatching, p: int = 2, delta=None,
                             validate: bool = True) -> tuple[ModuleMorphism, ModuleMorphism]:
    """Bar-by-bar interleaving between the interval modules of a delta-matching.

    Matched bars I -> J map generator to generator wherever both are alive
    (I at r, J at r + delta); everything else maps to zero.  ``delta``
    overrides the matching's own value, which with ``validate=False`` builds
    the same bar-wise maps at a different shift for negative probes.
    """
    if validate and not sigma.is_valid():
        raise InvalidMatching("; ".join(sigma.violations()))
    d = _exact(sigma.delta if delta is None else delta)
    M, alive_m = barcode_module(sigma.C, p)
    N, alive_n = barcode_module(sigma.D, p)

    def basis_pos(module, alive, r):
        i = module.index_at(r)
        return {} if i < 0 else {k: n for n, k in enumerate(alive[i])}

    def build(src, alive_s, tgt, alive_t, bars_s, bars_t, pairs):
        def fn(t):
            a = np.zeros((tgt.dim_at(t + d), src.dim_at(t)), dtype=np.int64)
            ps, pt = basis_pos(src, alive_s, t), basis_pos(tgt, alive_t, t + d)
            for i, j in pairs:
                if i in ps and j in pt:
                    a[pt[j], ps[i]] = 1
            return a
        return ModuleMorphism.from_function(src, tgt, d, fn)

    f = build(M, alive_m, N, alive_n, sigma.C, sigma.D, sigma.pairs)
    g = build(N, alive_n, M, alive_m, sigma.D, sigma.C, [(j, i) for i, j in sigma.pairs])
    return f, g


@dataclass(frozen=True)
class SublevelWitness:
    """X = Sb(gamma), Y = Sb(kappa) for two functions on one complex."""

    gamma: SimplexFunction
    kappa: SimplexFunction


@dataclass(frozen=True)
class SimplicialInterleaving:
    """Vertex maps phi: X -> Y(delta), psi: Y -> X(delta) forming a strict interleaving."""

    phi: dict
    psi: dict
    delta: float

    @classmethod
    def identity(cls, X: FilteredComplex) -> "SimplicialInterleaving":
        ident = {v: v for v in X.vertices}
        return cls(ident, ident, 0.0)


@dataclass(frozen=True)
class Bracket:
    lower: float
    upper: float
    per_degree: tuple


def _verify_simplicial(X: FilteredComplex, Y: FilteredComplex, phi: dict, delta: float):
    for s, v in X:
        try:
            image = tuple(sorted({phi[u] for u in s}))
        except KeyError as e:
            raise InvalidWitness(f"vertex {e.args[0]} has no image") from None
        if image not in Y or Y.value(image) > v + delta:
            raise InvalidWitness(f"{s} (value {v!r}) maps outside Y at {v + delta!r}")


def hi_bracket(X: FilteredComplex, Y: FilteredComplex, max_degree: int, p: int = 2,
               witness=None) -> Bracket:
    """Computable bracket ``lower <= d_HI(X, Y) <= upper``.

    ``lower`` is the largest bottleneck distance between the degree-k
    barcodes (homology bounding).  ``upper`` is d_inf(gamma, kappa) for a
    sublevel witness, delta for a verified strict simplicial interleaving,
    and inf without a witness.
    """
    bx, by = barcodes(X, max_degree, p), barcodes(Y, max_degree, p)
    per = [bottleneck(bx, by, k)[0] for k in range(max_degree + 1)]
    lower = max(per, default=0.0)
    upper = math.inf
    if isinstance(witness, SublevelWitness):
        if sublevel_filtration(witness.gamma) != X or sublevel_filtration(witness.kappa) != Y:
            raise InvalidWitness("sublevel filtrations of the witness differ from X, Y")
        upper = sup_distance(witness.gamma, witness.kappa)
    elif isinstance(witness, SimplicialInterleaving):
        if witness.delta < 0:
            raise InvalidWitness("negative shift")
        _verify_simplicial(X, Y, witness.phi, witness.delta)
        _verify_simplicial(Y, X, witness.psi, witness.delta)
        if any(witness.psi[witness.phi[v]] != v for v in X.vertices):
            raise InvalidWitness("psi(delta) o phi is not the inclusion of X")
        if any(witness.phi[witness.psi[w]] != w for w in Y.vertices):
            raise InvalidWitness("phi(delta) o psi is not the inclusion of Y")
        upper = float(witness.delta)
    elif witness is not None:
        raise InvalidWitness(f"unsupported witness type {type(witness).__name__}")
    return Bracket(lower, upper, tuple(per))
