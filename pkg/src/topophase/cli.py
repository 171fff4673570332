"""Command-line front end: scans, cloud export, barcodes, spectra, distances.

Exit codes: 0 success, 2 usage/config error, 3 degenerate ground state.
Output files are written atomically (write to a temp file, then rename), so
an error exit never leaves a truncated artifact behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import dirac as _dirac
from . import persistence as _persistence
from . import phase as _phase
from .simplicial import vr_filtration
from .statecloud import (
    DEFAULT_GAP_TOL,
    DegenerateGroundStateError,
    InvalidModelError,
    SSHChain,
    build_cloud,
    cloud_csv_text,
    cloud_from_csv,
    ssh_observables,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".topophase-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_probe(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"probe must be k:eps1:eps2, got {text!r}")
    try:
        k = int(parts[0])
        e1 = float(parts[1])
        e2 = float(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"probe must be numeric k:eps1:eps2, got {text!r}") from None
    return (k, e1, e2)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topophase",
        description="Topological scans of parameterized ground-state expectation clouds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="sweep a model and report probe values and transitions")
    scan.add_argument("--config", help="JSON file with scan configuration fields")
    scan.add_argument("--model", default="ssh")
    scan.add_argument("--n", type=int, default=4, dest="n_sites")
    scan.add_argument("--v", type=float, default=1.0)
    scan.add_argument("--w", type=float, default=1.0)
    scan.add_argument("--lmin", type=float, default=None)
    scan.add_argument("--lmax", type=float, default=None)
    scan.add_argument("--step", type=float, default=None)
    scan.add_argument("--mode", choices=(_phase.WINDOW, _phase.GLOBAL), default=_phase.WINDOW)
    scan.add_argument("--window", type=int, default=3, dest="window_halfwidth")
    scan.add_argument("--probe", action="append", type=_parse_probe, default=None,
                      help="probe interval k:eps1:eps2 (repeatable)")
    scan.add_argument("--max-dim", type=int, default=2)
    scan.add_argument("--xi", type=float, default=0.0)
    scan.add_argument("--rank-tol", type=float, default=1e-9)
    scan.add_argument("--gap-tol", type=float, default=DEFAULT_GAP_TOL)
    scan.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    scan.add_argument("--out", required=True)

    cloud = sub.add_parser("cloud", help="export an expectation cloud as CSV")
    cloud.add_argument("--model", default="ssh")
    cloud.add_argument("--n", type=int, default=4, dest="n_sites")
    cloud.add_argument("--v", type=float, default=1.0)
    cloud.add_argument("--w", type=float, default=1.0)
    cloud.add_argument("--lmin", type=float, required=True)
    cloud.add_argument("--lmax", type=float, required=True)
    cloud.add_argument("--step", type=float, required=True)
    cloud.add_argument("--gap-tol", type=float, default=DEFAULT_GAP_TOL)
    cloud.add_argument("--out", required=True)

    barcode = sub.add_parser("barcode", help="persistence diagram of a cloud CSV")
    barcode.add_argument("--cloud", required=True)
    barcode.add_argument("--max-dim", type=int, default=2)
    barcode.add_argument("--eps-max", type=float, default=None)
    barcode.add_argument("--out", required=True)
    barcode.add_argument("--svg", default=None)
    barcode.add_argument("--text", action="store_true", help="print the barcode to stdout")

    dirac = sub.add_parser("dirac", help="persistent Dirac spectrum of a cloud CSV")
    dirac.add_argument("--cloud", required=True)
    dirac.add_argument("--k", type=int, required=True)
    dirac.add_argument("--eps", type=float, required=True)
    dirac.add_argument("--eps2", type=float, required=True)
    dirac.add_argument("--xi", type=float, default=0.0)
    dirac.add_argument("--max-dim", type=int, default=None)
    dirac.add_argument("--rank-tol", type=float, default=1e-9)
    dirac.add_argument("--out", required=True)

    bottle = sub.add_parser("bottleneck", help="bottleneck distance between two diagram files")
    bottle.add_argument("d1")
    bottle.add_argument("d2")
    bottle.add_argument("--dim", type=int, required=True)

    return parser


def cmd_scan(args) -> int:
    if args.config is not None:
        try:
            with open(args.config) as fh:
                payload = json.load(fh)
        except OSError as err:
            print(f"error: cannot read config: {err}", file=sys.stderr)
            return EXIT_USAGE
        except json.JSONDecodeError as err:
            print(f"error: config is not valid JSON: {err}", file=sys.stderr)
            return EXIT_USAGE
        payload.setdefault("jobs", args.jobs)
        config = _phase.config_from_dict(payload)
    else:
        missing = [flag for flag, value in (("--lmin", args.lmin), ("--lmax", args.lmax), ("--step", args.step))
                   if value is None]
        if missing:
            print(f"error: missing required flag {missing[0]}", file=sys.stderr)
            return EXIT_USAGE
        config = _phase.ScanConfig(
            model=args.model,
            n_sites=args.n_sites,
            v=args.v,
            w=args.w,
            lambda_min=args.lmin,
            lambda_max=args.lmax,
            step=args.step,
            cloud_mode=args.mode,
            window_halfwidth=args.window_halfwidth,
            intervals=tuple(args.probe) if args.probe else ((1, 0.4, 0.8),),
            max_dim=args.max_dim,
            xi=args.xi,
            rank_tol=args.rank_tol,
            gap_tol=args.gap_tol,
            jobs=args.jobs,
        )
    report = _phase.sweep(config)
    _atomic_write(args.out, _phase.report_to_json(report))
    if report.transitions:
        for left, right, probes in report.transitions:
            print(f"transition: lambda in ({left:.4g}, {right:.4g}) probes: {', '.join(probes)}")
    else:
        print("no transitions detected")
    return EXIT_OK


def cmd_cloud(args) -> int:
    if args.model != "ssh":
        print(f"error: unknown model {args.model!r}", file=sys.stderr)
        return EXIT_USAGE
    model = SSHChain(n_sites=args.n_sites, v=args.v, w=args.w)
    config = _phase.ScanConfig(lambda_min=args.lmin, lambda_max=args.lmax, step=args.step,
                               n_sites=args.n_sites, v=args.v, w=args.w)
    cloud = build_cloud(config.lambdas(), model, ssh_observables(args.n_sites), gap_tol=args.gap_tol)
    _atomic_write(args.out, cloud_csv_text(cloud))
    print(f"wrote {cloud.n_points} points in R^{cloud.ambient_dim} to {args.out}")
    return EXIT_OK


def cmd_barcode(args) -> int:
    cloud = cloud_from_csv(args.cloud)
    filtration = vr_filtration(cloud, eps_max=args.eps_max, max_dim=args.max_dim)
    diagram = _persistence.reduce(filtration)
    _atomic_write(args.out, _persistence.diagram_to_json(diagram))
    if args.svg:
        _atomic_write(args.svg, _persistence.render_svg(diagram))
    if args.text:
        sys.stdout.write(_persistence.render_text(diagram))
    return EXIT_OK


def cmd_dirac(args) -> int:
    if args.eps > args.eps2:
        print(f"error: --eps ({args.eps}) must not exceed --eps2 ({args.eps2})", file=sys.stderr)
        return EXIT_USAGE
    cloud = cloud_from_csv(args.cloud)
    max_dim = args.max_dim if args.max_dim is not None else max(2, args.k + 1)
    filtration = vr_filtration(cloud, eps_max=None, max_dim=max_dim)
    operator = _dirac.dirac_operator(filtration, args.k, args.eps, args.eps2, xi=args.xi)
    eigenvalues = _dirac.spectrum(operator.matrix)
    lap = _dirac.persistent_laplacian(filtration, args.k, args.eps, args.eps2)
    kernel = _dirac.betti_from_laplacian(lap, rank_tol=args.rank_tol)
    _atomic_write(args.out, _dirac.spectrum_to_json(args.k, args.eps, args.eps2, args.xi, eigenvalues))
    print(f"kernel dimension: {kernel}")
    return EXIT_OK


def cmd_bottleneck(args) -> int:
    with open(args.d1) as fh:
        d1 = _persistence.diagram_from_json(fh.read())
    with open(args.d2) as fh:
        d2 = _persistence.diagram_from_json(fh.read())
    dist = _persistence.bottleneck(d1, d2, args.dim)
    if dist == float("inf"):
        print("inf")
    else:
        print(f"{dist:.12g}")
    return EXIT_OK


_HANDLERS = {
    "scan": cmd_scan,
    "cloud": cmd_cloud,
    "barcode": cmd_barcode,
    "dirac": cmd_dirac,
    "bottleneck": cmd_bottleneck,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _HANDLERS[args.command](args)
    except DegenerateGroundStateError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (InvalidModelError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
