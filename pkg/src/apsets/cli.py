"""Command-line front end.

One executable, eight subcommands with uniform I/O:

    generate | dist | scan | density | discrepancy | convolve
    | measure-scan | verify

Point sets travel as the JSON documents of :mod:`apsets.io`; reports are
canonical JSON (sorted keys, 12 significant digits) so identical
invocations produce byte-identical output.  Results go to ``-o`` (default
stdout), logs to stderr only.  Exit codes: 0 success, 1 validation or
usage error, 2 window-too-small or infeasible.

Windows on the command line use the compact form ``kind:center:extent``
with a comma-separated center, e.g. ``cube:0:100`` or ``ball:1,2:5``.
Search boxes also accept a bare number B, meaning the cube of halfwidth B
at the origin.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from pathlib import Path

import numpy as np

from .core import BALL, CUBE, Window, shrink_window
from .errors import ApsetsError, ValidationError, WindowTooSmallError
from .generators import (
    CUT_AND_PROJECT_1D,
    LATTICE,
    LATTICE_UNION,
    PERTURBED_LATTICE,
    POISSON,
    GeneratorSpec,
    LatticeParams,
    generate,
)
from .harness import run_suite
from .io import SIGNIFICANT_DIGITS, dumps_canonical, load_pointset, save_pointset
from .matching import CollarSpec, bottleneck_distance
from .measures import SampleGrid, TestFunction, convolve, scan_measure_periods
from .scanner import PeriodScanSpec, scan_periods
from .stats import density_estimate, discrepancy_scan


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 (not 2) on usage errors, per the CLI contract."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(v: float) -> str:
    return f"{float(v):.{SIGNIFICANT_DIGITS}g}"


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _parse_floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v != ""]


def _parse_vectors(text: str) -> list[list[float]]:
    return [_parse_floats(part) for part in text.split(";") if part != ""]


def parse_window(text: str, dim: int | None = None) -> Window:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(
            f"window {text!r} is not of the form kind:center:extent"
        )
    kind, center_text, extent_text = parts
    if kind not in (CUBE, BALL):
        raise ValidationError(f"unknown window kind {kind!r}")
    center = _parse_floats(center_text)
    if dim is not None and len(center) == 1 < dim:
        center = center * dim
    return Window(kind, np.array(center), float(extent_text))


def _parse_box(text: str, dim: int) -> Window:
    if ":" in text:
        return parse_window(text, dim)
    half = float(text)
    return Window(CUBE, np.zeros(dim), 2 * half)


def _write_csv(rows, header, path) -> None:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _emit(buf.getvalue(), path)


def _cmd_generate(args) -> int:
    window = parse_window(args.window, args.dim)
    kw = {"kind": args.kind, "window": window}
    if args.kind in (LATTICE, PERTURBED_LATTICE):
        basis = np.eye(args.dim) if args.basis is None \
            else np.array(_parse_vectors(args.basis))
        offset = np.zeros(args.dim) if args.offset is None \
            else np.array(_parse_floats(args.offset))
        kw["lattice"] = LatticeParams(basis, offset)
    if args.kind == PERTURBED_LATTICE:
        if not (args.amplitudes and args.frequencies and args.phases):
            raise ValidationError(
                "perturbed_lattice needs --amplitudes, --frequencies, --phases"
            )
        kw["amplitudes"] = tuple(_parse_floats(args.amplitudes))
        kw["frequencies"] = tuple(np.array(v) for v in _parse_vectors(args.frequencies))
        kw["phases"] = tuple(_parse_floats(args.phases))
    if args.kind == LATTICE_UNION:
        if not args.components:
            raise ValidationError("lattice_union needs --components")
        comps = []
        for doc in json.loads(args.components):
            comps.append(LatticeParams(np.array(doc["basis"], dtype=float),
                                       np.array(doc["offset"], dtype=float)))
        kw["components"] = tuple(comps)
    if args.kind == CUT_AND_PROJECT_1D:
        if args.slope is None:
            raise ValidationError("cut_and_project_1d needs --slope")
        kw["slope"] = args.slope
        if args.acceptance is not None:
            lo, hi = _parse_floats(args.acceptance)
            kw["acceptance"] = (lo, hi)
    if args.kind == POISSON:
        if args.intensity is None:
            raise ValidationError("poisson needs --intensity")
        kw["intensity"] = args.intensity
        kw["seed"] = args.seed
    cfg = generate(GeneratorSpec(**kw))
    if args.output in (None, "-"):
        _emit(dumps_canonical({
            "dim": cfg.dim,
            "window": {"kind": cfg.window.kind, "center": cfg.window.center.tolist(),
                       "extent": cfg.window.extent},
            "points": cfg.points.tolist(),
        }), None)
    else:
        save_pointset(cfg, args.output)
    _log(f"generated {len(cfg)} points ({args.kind}, dim {cfg.dim})")
    return 0


def _cmd_dist(args) -> int:
    a = load_pointset(args.config_a)
    b = load_pointset(args.config_b)
    res = bottleneck_distance(a, b, CollarSpec(args.collar))
    doc = {
        "value": None if res.infeasible else res.value,
        "infeasible": res.infeasible,
        "trusted": res.trusted,
        "collar": args.collar,
    }
    if res.diagnostics:
        doc["diagnostics"] = res.diagnostics
    if args.pairs and res.witness is not None:
        doc["matched_pairs"] = [list(p) for p in res.witness.pairs]
        doc["unmatched_a"] = list(res.witness.unmatched_a)
        doc["unmatched_b"] = list(res.witness.unmatched_b)
    _emit(dumps_canonical(doc), args.output)
    return 2 if res.infeasible else 0


def _cmd_scan(args) -> int:
    cfg = load_pointset(args.config)
    spec = PeriodScanSpec(
        eps=args.eps,
        search_box=_parse_box(args.box, cfg.dim),
        grid_step=args.step,
        collar_width=args.collar,
    )
    report = scan_periods(cfg, spec, workers=args.threads,
                          record_distances=args.csv is not None)
    _emit(dumps_canonical(report.to_dict()), args.output)
    if args.csv is not None:
        rows = [
            [_fmt(x) for x in tau] + [_fmt(dist)]
            for tau, dist in zip(report.candidates, report.distances)
        ]
        header = [f"tau_{i}" for i in range(cfg.dim)] + ["dist"]
        _write_csv(rows, header, args.csv)
    _log(f"accepted {report.accepted.shape[0]} of {report.candidates.shape[0]} shifts")
    return 0


def _cmd_density(args) -> int:
    cfg = load_pointset(args.config)
    edges = _parse_floats(args.edges)
    alphas = [np.array(v) for v in _parse_vectors(args.alphas)] if args.alphas else []
    if args.random_alphas:
        rng = np.random.default_rng(args.seed)
        t_max = max(edges)
        half = shrink_window(cfg.window, t_max / 2)
        if half.is_empty:
            raise WindowTooSmallError("no room for shifted cubes at the largest edge")
        lo, hi = half.bounds()
        alphas.extend(rng.uniform(lo, hi, size=(args.random_alphas, cfg.dim)))
    est = density_estimate(cfg, alphas, edges)
    doc = {
        "extrapolated": est.extrapolated,
        "max_shift_deviation": est.max_shift_deviation,
        "samples": [
            {"T": s.edge, "alpha": s.alpha.tolist(), "count": s.count, "ratio": s.ratio}
            for s in est.samples
        ],
    }
    _emit(dumps_canonical(doc), args.output)
    if args.csv is not None:
        rows = [
            [_fmt(s.edge)] + [_fmt(x) for x in s.alpha] + [s.count, _fmt(s.ratio)]
            for s in est.samples
        ]
        header = ["T"] + [f"alpha_{i}" for i in range(cfg.dim)] + ["count", "ratio"]
        _write_csv(rows, header, args.csv)
    return 0


def _cmd_discrepancy(args) -> int:
    cfg = load_pointset(args.config)
    diams = np.linspace(args.diam_min, args.diam_max, args.diam_count)
    shapes = []
    for diam in diams:
        if args.shape_kind == CUBE:
            shapes.append(Window(CUBE, np.zeros(cfg.dim), diam / np.sqrt(cfg.dim)))
        else:
            shapes.append(Window(BALL, np.zeros(cfg.dim), diam / 2))
    rng = np.random.default_rng(args.seed)
    shifts = [np.zeros(cfg.dim)]
    shifts.extend(rng.uniform(-args.shift_max, args.shift_max,
                              size=(args.shift_count, cfg.dim)))
    report = discrepancy_scan(cfg, shapes, shifts, family=args.config)
    doc = {
        "family": report.family,
        "fitted_c": report.fitted_c,
        "observed": [
            {"diameter": o.diameter, "shift": o.shift.tolist(), "delta": o.delta}
            for o in report.observed
        ],
    }
    _emit(dumps_canonical(doc), args.output)
    if args.csv is not None:
        rows = [
            [_fmt(o.diameter)] + [_fmt(x) for x in o.shift] + [o.delta]
            for o in report.observed
        ]
        header = ["diameter"] + [f"shift_{i}" for i in range(cfg.dim)] + ["delta"]
        _write_csv(rows, header, args.csv)
    return 0


def _profile(args, dim: int) -> TestFunction:
    if args.profile == "tent":
        return TestFunction.tent(args.radius, dim)
    if args.profile == "bump":
        return TestFunction.bump(args.radius, dim)
    raise ValidationError(f"unknown profile {args.profile!r}")


def _cmd_convolve(args) -> int:
    cfg = load_pointset(args.config)
    phi = _profile(args, cfg.dim)
    if args.grid_box is not None:
        box = parse_window(args.grid_box, cfg.dim)
    else:
        box = shrink_window(cfg.window, phi.support_radius)
        if box.is_empty:
            raise WindowTooSmallError("window smaller than the support radius")
    step = args.grid_step if args.grid_step is not None else phi.support_radius / 4
    field = convolve(cfg, phi, SampleGrid(box, step))
    nodes = field.grid.nodes()
    rows = [
        [_fmt(x) for x in node] + [_fmt(v)]
        for node, v in zip(nodes, field.values)
    ]
    header = [f"x_{i}" for i in range(cfg.dim)] + ["value"]
    _write_csv(rows, header, args.output)
    _log(f"sampled {len(rows)} nodes, profile {phi.profile} r={phi.support_radius}")
    return 0


def _cmd_measure_scan(args) -> int:
    cfg = load_pointset(args.config)
    phi = _profile(args, cfg.dim)
    spec = PeriodScanSpec(
        eps=args.eps,
        search_box=_parse_box(args.box, cfg.dim),
        grid_step=args.step,
    )
    grid = None
    if args.grid_step is not None:
        box = shrink_window(cfg.window,
                            phi.support_radius + spec.search_box.diameter / 2 + 1e-9)
        if box.is_empty:
            raise WindowTooSmallError("window too small for the shifted field grid")
        grid = SampleGrid(box, args.grid_step)
    report = scan_measure_periods(cfg, spec, phi, grid)
    _emit(dumps_canonical(report.to_dict()), args.output)
    _log(f"accepted {report.accepted.shape[0]} of {report.candidates.shape[0]} shifts")
    return 0


def _cmd_verify(args) -> int:
    reports = run_suite(args.suite, workers=args.threads)
    for rep in reports:
        for check in rep.checks:
            _log(f"{'PASS' if check.passed else 'FAIL'} [{rep.suite}] {check.name}")
    doc = {"passed": all(r.passed for r in reports),
           "reports": [r.to_dict() for r in reports]}
    _emit(dumps_canonical(doc), args.output)
    return 0 if doc["passed"] else 2


def _build_parser() -> _Parser:
    parser = _Parser(prog="apsets", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="construct a point-set JSON file")
    p.add_argument("--kind", required=True,
                   choices=[LATTICE, LATTICE_UNION, PERTURBED_LATTICE,
                            CUT_AND_PROJECT_1D, POISSON])
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--window", required=True, help="kind:center:extent")
    p.add_argument("--basis", help="rows 'a,b;c,d' (default identity)")
    p.add_argument("--offset", help="comma-separated offset (default 0)")
    p.add_argument("--components", help="JSON list of {basis, offset}")
    p.add_argument("--amplitudes", help="comma-separated c_j")
    p.add_argument("--frequencies", help="vectors 'v;v' with comma components")
    p.add_argument("--phases", help="comma-separated theta_j")
    p.add_argument("--slope", type=float)
    p.add_argument("--acceptance", help="lo,hi strip interval")
    p.add_argument("--intensity", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("dist", help="bottleneck distance of two point sets")
    p.add_argument("config_a")
    p.add_argument("config_b")
    p.add_argument("--collar", type=float, default=0.0)
    p.add_argument("--pairs", action="store_true", help="include the witness matching")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("scan", help="sweep a search box for almost periods")
    p.add_argument("config")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--box", required=True, help="halfwidth or kind:center:extent")
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--collar", type=float, default=None)
    p.add_argument("--csv", default=None, help="also write (tau, dist) rows")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("density", help="cube-count density estimate")
    p.add_argument("config")
    p.add_argument("--edges", required=True, help="comma-separated cube edges T")
    p.add_argument("--alphas", default=None, help="shift vectors 'v;v'")
    p.add_argument("--random-alphas", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("discrepancy", help="translation discrepancy of convex shapes")
    p.add_argument("config")
    p.add_argument("--shape-kind", choices=[CUBE, BALL], default=CUBE)
    p.add_argument("--diam-min", type=float, default=1.0)
    p.add_argument("--diam-max", type=float, default=40.0)
    p.add_argument("--diam-count", type=int, default=40)
    p.add_argument("--shift-count", type=int, default=5)
    p.add_argument("--shift-max", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_discrepancy)

    p = sub.add_parser("convolve", help="sample the field of a configuration")
    p.add_argument("config")
    p.add_argument("--profile", choices=["tent", "bump"], default="tent")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--grid-box", default=None, help="kind:center:extent")
    p.add_argument("--grid-step", type=float, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_convolve)

    p = sub.add_parser("measure-scan", help="sweep for field-level almost periods")
    p.add_argument("config")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--box", required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--profile", choices=["tent", "bump"], default="tent")
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--grid-step", type=float, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_measure_scan)

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--suite", default="all",
                   help="all, t1, t2, t10, t11, or a descriptive alias")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", dest="output", default=None)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except WindowTooSmallError as exc:
        _log(f"error: {exc}")
        return 2
    except ApsetsError as exc:
        _log(f"error: {exc}")
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        _log(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
