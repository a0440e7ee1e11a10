"""Command-line interface: ``hidist <subcommand> ...``.

Exit codes: 0 success, 1 domain error or a refuted inequality, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .errors import HidistError
from .experiments import TOL, corr_filt_check, run_stability_random, stability_instance
from .filtrations import rips_filtration
from .matching import bottleneck
from .metric import DEFAULT_GH_SIZE_LIMIT, gh_upper_bound, gromov_hausdorff_exact
from .modules import decompose
from .persistence import Barcode, barcodes
from .whitehead import build_Yn_module, build_Yprime_module, verify_counterexample


class UsageError(Exception):
    pass


def _scale(args) -> float:
    return 2.0 if getattr(args, "scale_convention", "half") == "diameter" else 1.0


def _emit(lines):
    sys.stdout.write("".join(line + "\n" for line in lines))


def cmd_rips(args):
    P = io.read_metric(args.points)
    X = rips_filtration(P, args.max_dim, args.max_scale)
    sys.stdout.write(io.dumps_complex(X, _scale(args)))


def cmd_persist(args):
    path = Path(args.input)
    if args.metric or path.suffix.lower() == ".csv":
        X = rips_filtration(io.read_metric(path), args.max_degree + 1)
    else:
        X = io.read_complex(path)
    B = barcodes(X, args.max_degree, args.p)
    sys.stdout.write(io.dumps_barcode(B, _scale(args)))


def cmd_bottleneck(args):
    A, B = io.read_barcode(args.a), io.read_barcode(args.b)
    degrees = [args.degree] if args.degree is not None else sorted(set(A.degrees()) | set(B.degrees()))
    best, cert = 0.0, None
    for k in degrees:
        d, m = bottleneck(A, B, k)
        if d >= best:
            best, cert = d, (k, m)
    _emit([io.fmt_real(best)])
    if args.certificate and cert is not None and cert[1] is not None:
        _emit(f"{i} {j}" for i, j in cert[1].pairs)


def cmd_gh(args):
    P, Q = io.read_metric(args.p_file), io.read_metric(args.q_file)
    if args.correspondence:
        C = io.read_correspondence(args.correspondence)
        value = gh_upper_bound(P, Q, C)
    else:
        value, C = gromov_hausdorff_exact(P, Q, args.size_limit)
    _emit([io.fmt_real(value)])
    if args.certificate:
        sys.stdout.write(io.dumps_correspondence(C))


def cmd_stability(args):
    if args.random:
        dims = tuple(int(x) for x in args.dims.split(","))
        report = run_stability_random(args.seed, args.count, args.n_max, dims, args.max_degree, args.tol)
    else:
        if not (args.p_file and args.q_file):
            raise UsageError("stability: give P and Q files or --random")
        from .experiments import ExperimentReport
        P, Q = io.read_metric(args.p_file), io.read_metric(args.q_file)
        C = io.read_correspondence(args.correspondence) if args.correspondence else None
        rec = stability_instance(P, Q, args.max_degree, C, args.size_limit, args.tol)
        report = ExperimentReport(dict(p=args.p_file, q=args.q_file, max_degree=args.max_degree,
                                       tol=args.tol), [rec])
    _emit(report.lines())
    return 1 if report.failed else 0


def cmd_corr_filt(args):
    P, Q = io.read_metric(args.p_file), io.read_metric(args.q_file)
    C = io.read_correspondence(args.corr_file)
    report = corr_filt_check(P, Q, C, args.max_degree, args.p, args.tol)
    _emit(report.lines())
    return 0 if report.passed else 1


def cmd_decompose(args):
    M = io.read_module(args.module)
    B = Barcode((args.degree, b, d) for b, d in decompose(M))
    sys.stdout.write(io.dumps_barcode(B))


def cmd_whitehead(args):
    degrees = [args.degree] if args.degree else range(1, 2 ** args.n + 1)
    for k in degrees:
        M = build_Yprime_module(args.n, k) if args.yprime else build_Yn_module(args.n, k)
        B = Barcode((k, b, d) for b, d in decompose(M))
        sys.stdout.write(io.dumps_barcode(B))
        if args.emit_modules:
            out = Path(args.emit_modules)
            out.mkdir(parents=True, exist_ok=True)
            io.write_module(out / f"{'Yprime' if args.yprime else 'Y'}{args.n}_H{k}.mod", M)
    if not args.yprime:
        report = verify_counterexample(args.n, max(args.n, 6))
        _emit("# " + line for line in report.lines())
        return 0 if report.passed else 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hidist", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def scale_flag(p):
        p.add_argument("--scale-convention", choices=["half", "diameter"], default="half",
                       help="half: edge at d/2 (default); diameter: edge at d")

    p = sub.add_parser("rips", help="Vietoris-Rips filtration of a distance matrix")
    p.add_argument("points")
    p.add_argument("--max-dim", type=int, default=2)
    p.add_argument("--max-scale", type=float, default=float("inf"))
    scale_flag(p)
    p.set_defaults(func=cmd_rips)

    p = sub.add_parser("persist", help="barcodes of a filtered complex or distance matrix")
    p.add_argument("input")
    p.add_argument("--metric", action="store_true", help="treat input as a distance matrix")
    p.add_argument("--max-degree", type=int, default=1)
    p.add_argument("--p", type=int, default=2)
    scale_flag(p)
    p.set_defaults(func=cmd_persist)

    p = sub.add_parser("bottleneck", help="bottleneck distance of two barcode files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--degree", type=int)
    p.add_argument("--certificate", action="store_true")
    p.set_defaults(func=cmd_bottleneck)

    p = sub.add_parser("gh", help="Gromov-Hausdorff distance")
    p.add_argument("p_file")
    p.add_argument("q_file")
    p.add_argument("--exact", action="store_true", help="exact search (default without --correspondence)")
    p.add_argument("--correspondence")
    p.add_argument("--size-limit", type=int, default=DEFAULT_GH_SIZE_LIMIT)
    p.add_argument("--certificate", action="store_true")
    p.set_defaults(func=cmd_gh)

    p = sub.add_parser("stability", help="audit d_B <= 2 d_GH on given or random spaces")
    p.add_argument("p_file", nargs="?")
    p.add_argument("q_file", nargs="?")
    p.add_argument("--random", action="store_true")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--dims", default="2,3")
    p.add_argument("--correspondence")
    p.add_argument("--size-limit", type=int, default=64)
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--tol", type=float, default=TOL)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("corr-filt", help="verify the correspondence-filtration chain")
    p.add_argument("p_file")
    p.add_argument("q_file")
    p.add_argument("corr_file")
    p.add_argument("--max-degree", type=int, default=1)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--tol", type=float, default=TOL)
    p.set_defaults(func=cmd_corr_filt)

    p = sub.add_parser("decompose", help="barcode of a grid module file")
    p.add_argument("module")
    p.add_argument("--degree", type=int, default=0, help="degree label for the output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("whitehead", help="homology of the persistent Whitehead example")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int)
    p.add_argument("--yprime", action="store_true", help="first n windows of Y' instead of Y^n")
    p.add_argument("--emit-modules", metavar="DIR")
    p.set_defaults(func=cmd_whitehead)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"hidist: error: {e}", file=sys.stderr)
        return 2
    except (HidistError, OSError) as e:
        print(f"hidist: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
