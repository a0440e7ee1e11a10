"""Experiment drivers: the Rips stability audit and the correspondence-filtration chain."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .filtrations import (FiberReport, correspondence_filtration, quillen_fiber_check,
                          rips_filtration, sup_distance)
from .matching import bottleneck
from .metric import (Correspondence, FiniteMetricSpace, distortion, from_points,
                     gh_upper_bound, gromov_hausdorff_exact, random_correspondence)
from .persistence import barcodes

TOL = 1e-9
# |P| * |Q| cap for exact GH inside experiments (8-point clouds)
EXPERIMENT_GH_LIMIT = 64


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("HI_THREADS", "1")))
    except ValueError:
        return 1


def random_cloud(rng: np.random.Generator, n: int, dim: int) -> FiniteMetricSpace:
    """n points uniform in the unit cube of R^dim (resampled on exact duplicates)."""
    while True:
        try:
            return from_points(rng.random((n, dim)))
        except ValueError:
            continue


@dataclass
class StabilityRecord:
    index: int
    n_p: int
    n_q: int
    d_gh: float
    exact: bool
    d_b: dict
    verdict: str

    @property
    def bound(self) -> float:
        return 2 * self.d_gh


def stability_verdict(d_b: dict, d_gh: float, exact: bool, tol: float = TOL) -> str:
    """PASS/FAIL with exact GH; BOUNDED/INCONCLUSIVE with only an upper bound."""
    holds = all(v <= 2 * d_gh + tol for v in d_b.values())
    if exact:
        return "PASS" if holds else "FAIL"
    return "BOUNDED" if holds else "INCONCLUSIVE"


def stability_instance(P: FiniteMetricSpace, Q: FiniteMetricSpace, max_degree: int,
                       C: Correspondence | None = None, size_limit: int = EXPERIMENT_GH_LIMIT,
                       tol: float = TOL, index: int = 0, p: int = 2) -> StabilityRecord:
    if C is None:
        d_gh, exact = gromov_hausdorff_exact(P, Q, size_limit)[0], True
    else:
        d_gh, exact = gh_upper_bound(P, Q, C), False
    bp = barcodes(rips_filtration(P, max_degree + 1), max_degree, p)
    bq = barcodes(rips_filtration(Q, max_degree + 1), max_degree, p)
    d_b = {k: bottleneck(bp, bq, k)[0] for k in range(max_degree + 1)}
    return StabilityRecord(index, P.n, Q.n, d_gh, exact, d_b, stability_verdict(d_b, d_gh, exact, tol))


@dataclass
class ExperimentReport:
    config: dict
    records: list = field(default_factory=list)

    def summary(self) -> dict:
        counts: dict = {}
        for r in self.records:
            counts[r.verdict] = counts.get(r.verdict, 0) + 1
        return counts

    @property
    def failed(self) -> bool:
        return any(r.verdict == "FAIL" for r in self.records)

    def lines(self) -> list[str]:
        from .io import fmt_real
        out = ["# " + " ".join(f"{k}={v}" for k, v in self.config.items())]
        for r in self.records:
            dbs = " ".join(f"d_B[{k}]={fmt_real(v)}" for k, v in sorted(r.d_b.items()))
            kind = "d_GH=" if r.exact else "d_GH<="
            out.append(f"{r.index} n={r.n_p},{r.n_q} {kind}{fmt_real(r.d_gh)} "
                       f"bound={fmt_real(r.bound)} {dbs} {r.verdict}")
        out.append("# summary " + " ".join(f"{k}={v}" for k, v in sorted(self.summary().items())))
        return out


def _random_instance(args):
    seed, index, n_max, dims, max_degree, tol = args
    rng = np.random.default_rng([seed, index])
    n_p, n_q = (int(x) for x in rng.integers(1, n_max + 1, size=2))
    dim = int(dims[int(rng.integers(len(dims)))])
    P, Q = random_cloud(rng, n_p, dim), random_cloud(rng, n_q, dim)
    return stability_instance(P, Q, max_degree, tol=tol, index=index,
                              size_limit=max(EXPERIMENT_GH_LIMIT, n_max * n_max))


def run_stability_random(seed: int = 0, count: int = 200, n_max: int = 8, dims=(2, 3),
                         max_degree: int = 2, tol: float = TOL, threads: int | None = None) -> ExperimentReport:
    """Seeded random point-cloud pairs; instance i depends only on (seed, i)."""
    if n_max > 8:
        raise ValueError("random clouds are limited to 8 points for exact GH")
    threads = thread_cap() if threads is None else threads
    config = dict(seed=seed, count=count, n_max=n_max, dims=",".join(map(str, dims)),
                  max_degree=max_degree, tol=tol)
    jobs = [(seed, i, n_max, tuple(dims), max_degree, tol) for i in range(count)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_random_instance, jobs))
    else:
        records = [_random_instance(j) for j in jobs]
    records.sort(key=lambda r: r.index)
    return ExperimentReport(config, records)


@dataclass
class CorrFiltReport:
    distortion: float
    sup_gamma: float
    fibers_P: FiberReport
    fibers_Q: FiberReport
    equal_P: dict
    equal_Q: dict
    d_b_F: dict
    tol: float = TOL

    @property
    def gamma_ok(self) -> bool:
        return self.sup_gamma <= self.distortion / 2 + self.tol

    @property
    def stability_ok(self) -> bool:
        return all(v <= self.distortion / 2 + self.tol for v in self.d_b_F.values())

    @property
    def passed(self) -> bool:
        return (self.fibers_P.passed and self.fibers_Q.passed and all(self.equal_P.values())
                and all(self.equal_Q.values()) and self.gamma_ok and self.stability_ok)

    def lines(self) -> list[str]:
        from .io import fmt_real
        out = [f"distortion(C) = {fmt_real(self.distortion)}",
               f"fibers P: {self.fibers_P}", f"fibers Q: {self.fibers_Q}"]
        for k in sorted(self.equal_P):
            out.append(f"B_{k}(F^P) == B_{k}(Rips P): {self.equal_P[k]}; "
                       f"B_{k}(F^Q) == B_{k}(Rips Q): {self.equal_Q[k]}")
        out.append(f"sup |gamma_P - gamma_Q| = {fmt_real(self.sup_gamma)} <= "
                   f"distortion/2 = {fmt_real(self.distortion / 2)}: {self.gamma_ok}")
        for k, v in sorted(self.d_b_F.items()):
            out.append(f"d_B(B_{k} F^P, B_{k} F^Q) = {fmt_real(v)} <= distortion/2: "
                       f"{v <= self.distortion / 2 + self.tol}")
        out.append("PASS" if self.passed else "FAIL")
        return out


def corr_filt_check(P: FiniteMetricSpace, Q: FiniteMetricSpace, C: Correspondence,
                    max_degree: int = 1, p: int = 2, tol: float = TOL) -> CorrFiltReport:
    """Follow the Quillen-A proof of Rips stability numerically on one correspondence."""
    dim = max_degree + 1
    cf = correspondence_filtration(C, P, Q, dim)
    fib_p = quillen_fiber_check(cf.F_P, P, C, "P")
    fib_q = quillen_fiber_check(cf.F_Q, Q, C, "Q")
    bfp, bfq = barcodes(cf.F_P, max_degree, p), barcodes(cf.F_Q, max_degree, p)
    brp = barcodes(rips_filtration(P, dim), max_degree, p)
    brq = barcodes(rips_filtration(Q, dim), max_degree, p)
    ks = range(max_degree + 1)
    return CorrFiltReport(
        distortion(C, P, Q), sup_distance(cf.gamma_P, cf.gamma_Q), fib_p, fib_q,
        {k: bfp[k] == brp[k] for k in ks}, {k: bfq[k] == brq[k] for k in ks},
        {k: bottleneck(bfp, bfq, k)[0] for k in ks}, tol)


def random_corr_instance(seed: int, index: int, n_max: int = 6, dim: int = 2):
    rng = np.random.default_rng([seed, index])
    n_p, n_q = (int(x) for x in rng.integers(1, n_max + 1, size=2))
    P, Q = random_cloud(rng, n_p, dim), random_cloud(rng, n_q, dim)
    C = random_correspondence(n_p, n_q, rng, extra=int(rng.integers(0, 3)))
    return P, Q, C

