"""Command line front end.

Exit codes: 0 success, 2 bad input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from . import formats
from .errors import BadInputError, ConvtrajError
from .hull import convex_hull_molp
from .patches import (
    PatchMetricCache,
    delta_plateau_scan,
    detect_arcs_edges_2d,
    detect_patches,
)
from .partition import partition_boundary
from .pipeline import (
    PipelineResult,
    SystemSpec,
    census,
    pipeline,
    preset_spec_kwargs,
    run_example,
    sample_system,
)
from .presets import preset_names


def _load_spec(path: str) -> SystemSpec:
    return formats.spec_from_json(formats.load_json(path))


def _spec_overrides(args) -> dict:
    out = {}
    for key in ("eps", "delta", "grid_res", "tol", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    if getattr(args, "reduce", False):
        out["reduce"] = True
    return out


def _print_sample(sample) -> None:
    print(
        f"sample: {len(sample.points)} points in R^{sample.dimension}"
        f"  eps {sample.eps_estimate:.3e}  closed={sample.closed}"
        f"  termination={sample.termination}"
    )


def _print_hull(hull) -> None:
    print(
        f"hull: {hull.vertex_count} vertices, {hull.facet_count} facets,"
        f" {hull.edge_count} edges  (eps {hull.eps:.1e})"
    )


def _print_patches(report) -> None:
    counts = " ".join(f"#{k}={v}" for k, v in sorted(report.counts.items()))
    extra = ""
    if report.flagged_facets:
        extra += f"  flagged={len(report.flagged_facets)}"
    if report.suspicious:
        extra += "  SUSPICIOUS"
    print(f"patches: delta {report.delta:.4e}  {counts or '(none)'}{extra}")


def _print_partition(report) -> None:
    print(
        f"partition: forward_closed={report.forward_closed}"
        f"  outward={report.outward_count}  tangent={report.tangent_count}"
        f"  skipped_arcs={report.skipped_arcs}  skipped_faces={report.skipped_faces}"
    )


def _write_artifacts(result: PipelineResult, directory: str) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    formats.write_sample_csv(d / "sample.csv", result.sample)
    formats.dump_json(formats.sample_meta_json(result.sample), d / "sample.json")
    formats.dump_json(formats.hull_to_json(result.hull), d / "hull.json")
    formats.dump_json(formats.patches_to_json(result.patches), d / "patches.json")
    if result.partition is not None:
        formats.dump_json(
            formats.partition_to_json(result.partition), d / "partition.json"
        )
    if result.hull.dimension == 3:
        formats.write_off(d / "hull.off", result.hull)
    formats.dump_json(formats.report_to_json(result.report), d / "report.json")


def _report_out(result: PipelineResult, args) -> None:
    r = result.report
    print(f"run: {r.name or '(unnamed)'}  kind={r.kind}  n={r.dimension}", end="")
    if r.reduced_dimension != r.dimension:
        print(f" -> {r.reduced_dimension}", end="")
    print()
    _print_sample(result.sample)
    _print_hull(result.hull)
    _print_patches(result.patches)
    if result.partition is not None:
        _print_partition(result.partition)
        for point, value in result.partition.outward_witnesses()[:5]:
            print(f"  outward witness {list(point)}  g={value:.3e}")
    if args.out:
        formats.dump_json(formats.report_to_json(r), args.out)
        print(f"wrote {args.out}")
    if getattr(args, "artifacts", None):
        _write_artifacts(result, args.artifacts)
        print(f"wrote artifacts under {args.artifacts}/")


# -- subcommands -------------------------------------------------------------------


def cmd_sample(args) -> int:
    spec = _load_spec(args.spec)
    for key, val in _spec_overrides(args).items():
        setattr(spec, key, val)
    sample = sample_system(spec)
    _print_sample(sample)
    if args.out:
        formats.write_sample_csv(args.out, sample)
        print(f"wrote {args.out}")
    return 0


def cmd_hull(args) -> int:
    sample = formats.read_sample_csv(args.sample)
    eps = args.eps if args.eps is not None else 1e-9
    hull = convex_hull_molp(sample.points, eps)
    _print_hull(hull)
    if args.out:
        formats.dump_json(formats.hull_to_json(hull), args.out)
        print(f"wrote {args.out}")
    if args.off:
        formats.write_off(args.off, hull)
        print(f"wrote {args.off}")
    return 0


def cmd_patches(args) -> int:
    hull = formats.hull_from_json(formats.load_json(args.hull))
    sample = formats.read_sample_csv(args.sample) if args.sample else None

    if hull.dimension == 2:
        if sample is None:
            raise BadInputError("dimension 2 needs --sample to order the polygon")
        delta = args.delta if args.delta is not None else 6.0 * sample.eps_estimate
        report = detect_arcs_edges_2d(sample, hull, delta)
    elif args.delta is not None:
        report = detect_patches(hull, args.delta)
    else:
        if sample is None:
            raise BadInputError("provide --delta, or --sample to run the plateau scan")
        cache = PatchMetricCache(hull)
        _, report, scan = delta_plateau_scan(
            hull, 2.0 * sample.eps_estimate, sample=sample, cache=cache
        )
        print(f"plateau scan over {len(scan)} thresholds")
    _print_patches(report)
    if args.out:
        formats.dump_json(formats.patches_to_json(report), args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_partition(args) -> int:
    spec = _load_spec(args.spec)
    hull = formats.hull_from_json(formats.load_json(args.hull))
    patches = formats.patches_from_json(formats.load_json(args.patches))
    phi = spec.build_field()
    if phi is None:
        raise BadInputError("spec has no vector field to classify against")
    if phi.dimension != hull.dimension:
        raise BadInputError(
            f"field dimension {phi.dimension} != hull dimension {hull.dimension}"
        )
    eps_gap = 0.0
    if args.sample:
        eps_gap = 2.0 * formats.read_sample_csv(args.sample).eps_estimate
    report = partition_boundary(
        phi,
        hull,
        patches,
        tol=args.tol if args.tol is not None else 1e-9,
        grid_res=args.grid_res,
        eps_gap=eps_gap,
    )
    _print_partition(report)
    if args.out:
        formats.dump_json(formats.partition_to_json(report), args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_pipeline(args) -> int:
    spec = _load_spec(args.spec)
    for key, val in _spec_overrides(args).items():
        setattr(spec, key, val)
    result = pipeline(spec)
    _report_out(result, args)
    return 0


def cmd_example(args) -> int:
    if not args.name:
        print("available presets:")
        for name in preset_names():
            print(f"  {name}")
        return 0
    result = run_example(args.name, **_spec_overrides(args))
    _report_out(result, args)
    return 0


def cmd_census(args) -> int:
    result = census(
        3, args.d, args.trials, seed=args.seed or 0, n_samples=args.n_samples
    )
    for trial, n1, n2 in result.rows:
        print(f"trial {trial:4d}: #1={n1:4d} #2={n2:4d}")
    print(f"census: {result.trials} trials, d={result.d}, seed={result.seed}")
    print(f"max #1={result.max_1}  max #2={result.max_2}")
    if args.out:
        formats.dump_json(formats.census_to_json(result), args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_spec(args) -> int:
    kwargs = preset_spec_kwargs(args.name)
    spec = SystemSpec(**kwargs)
    text = formats.dump_json(formats.spec_to_json(spec), args.out)
    if args.out:
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def _add_overrides(p: argparse.ArgumentParser, keys) -> None:
    if "eps" in keys:
        p.add_argument("--eps", type=float, default=None, help="hull accuracy target")
    if "delta" in keys:
        p.add_argument(
            "--delta", type=float, default=None, help="patch proximity threshold"
        )
    if "grid_res" in keys:
        p.add_argument(
            "--grid-res", dest="grid_res", type=int, default=None,
            help="barycentric grid resolution for face classification",
        )
    if "tol" in keys:
        p.add_argument("--tol", type=float, default=None, help="sign tolerance")
    if "seed" in keys:
        p.add_argument("--seed", type=int, default=None, help="random seed")
    if "reduce" in keys:
        p.add_argument(
            "--reduce", action="store_true",
            help="restrict to the affine span of the sample first",
        )
    if "out" in keys:
        p.add_argument("--out", default=None, help="output file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convtraj",
        description="Convex hulls of trajectories: sampling, hulls, boundary"
        " patches, and the inward/outward partition of the flow.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a trajectory or parametric curve")
    p.add_argument("spec", help="system spec JSON")
    _add_overrides(p, ("seed", "out"))
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("hull", help="convex hull of a sample CSV")
    p.add_argument("sample", help="sample CSV")
    _add_overrides(p, ("eps", "out"))
    p.add_argument("--off", default=None, help="also write an OFF mesh (n = 3)")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("patches", help="boundary patches of a hull")
    p.add_argument("hull", help="hull JSON")
    p.add_argument("--sample", default=None, help="sample CSV (threshold scan, n = 2)")
    _add_overrides(p, ("delta", "out"))
    p.set_defaults(func=cmd_patches)

    p = sub.add_parser("partition", help="inward/outward partition of detected faces")
    p.add_argument("spec", help="system spec JSON (for the field)")
    p.add_argument("hull", help="hull JSON")
    p.add_argument("patches", help="patches JSON")
    p.add_argument("--sample", default=None, help="sample CSV (gap-aware tolerances)")
    _add_overrides(p, ("tol", "grid_res", "out"))
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("pipeline", help="sample, hull, patches, partition in one run")
    p.add_argument("spec", help="system spec JSON")
    _add_overrides(p, ("eps", "delta", "grid_res", "tol", "seed", "reduce", "out"))
    p.add_argument("--artifacts", default=None, help="directory for stage outputs")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("example", help="run a named built-in system")
    p.add_argument("name", nargs="?", default=None, help="preset name (omit to list)")
    _add_overrides(p, ("eps", "delta", "grid_res", "tol", "seed", "reduce", "out"))
    p.add_argument("--artifacts", default=None, help="directory for stage outputs")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("census", help="patch counts over random trigonometric curves")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--d", type=int, default=4, help="number of harmonics")
    p.add_argument("--n-samples", dest="n_samples", type=int, default=240)
    _add_overrides(p, ("seed", "out"))
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("spec", help="write a preset's spec JSON for editing")
    p.add_argument("name", help="preset name")
    _add_overrides(p, ("out",))
    p.set_defaults(func=cmd_spec)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BadInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvtrajError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
