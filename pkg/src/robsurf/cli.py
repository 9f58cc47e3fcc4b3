"""Command-line interface.

Subcommands:
  run          simulate one failure scenario and write the surface outputs
  characterize print headline statistics of a topology
  replay       reproduce a recorded run from its manifest

Every failure is reported as a single ``category: message`` line on stderr
with a stable nonzero exit code per category.
"""

import os

# Pin BLAS threading before numpy loads: configurations parallelize across
# processes, and single-threaded kernels keep results byte-reproducible.
for _var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

import argparse
import sys

from .errors import RobsurfError
from .failures import SCENARIO_NAMES
from .io import load_edge_list
from .metrics import characterize
from .pipeline import (
    DEFAULT_MASTER_SEED,
    RunConfig,
    replay_from_manifest,
    run_pipeline,
)

EXIT_CODES = {
    "input": 2,
    "parse": 2,
    "config": 2,
    "domain": 3,
    "undefined-metric": 3,
    "degenerate-data": 4,
    "numeric": 5,
    "io": 6,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robsurf",
        description="Quantify network robustness under progressive failures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a failure scenario")
    run.add_argument("--topology", required=True, help="edge-list file ('u v' lines)")
    run.add_argument(
        "--scenario",
        required=True,
        choices=sorted(SCENARIO_NAMES),
        help="failure scenario",
    )
    run.add_argument(
        "--pmax", type=int, default=70, help="largest failure percentage (default 70)"
    )
    run.add_argument(
        "--configs",
        type=int,
        default=None,
        help="failure configurations (default 500 random / 100 targeted)",
    )
    run.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_MASTER_SEED,
        help=f"master seed (default {DEFAULT_MASTER_SEED})",
    )
    run.add_argument(
        "--alpha", type=float, default=0.9, help="energy threshold (default 0.9)"
    )
    run.add_argument("--out", default="robsurf-out", help="output directory")
    run.add_argument(
        "--heatmap", action="store_true", help="also write heatmap.ppm"
    )
    run.add_argument(
        "--workers", type=int, default=None, help="worker processes (default: CPUs)"
    )

    char = sub.add_parser("characterize", help="print topology statistics")
    char.add_argument("--topology", required=True)

    replay = sub.add_parser("replay", help="reproduce a run from its manifest")
    replay.add_argument("--manifest", required=True)
    replay.add_argument(
        "--out", default=None, help="output directory (default: manifest's)"
    )
    replay.add_argument("--workers", type=int, default=None)
    return parser


def _cmd_run(args) -> int:
    config = RunConfig(
        topology_path=args.topology,
        scenario_name=args.scenario,
        p_max=args.pmax,
        config_count=args.configs,
        master_seed=args.seed,
        alpha=args.alpha,
        output_dir=args.out,
        emit_heatmap=args.heatmap,
        workers=args.workers,
    )
    outputs = run_pipeline(config)
    surface = outputs.surface
    print(
        f"scenario {args.scenario}: {surface.omega.shape[0]} levels x "
        f"{surface.config_count} configurations"
    )
    if surface.pca.selected_count > 1:
        print(
            f"note: {surface.pca.selected_count} components needed to reach "
            f"alpha={surface.pca.alpha:g}; weighted with the first only"
        )
    if surface.has_negative_values:
        print("note: surface contains negative robustness values")
    print(f"area under mean curve: {outputs.summary.area_under_mean:.6g}")
    for name in sorted(outputs.files):
        print(f"wrote {outputs.files[name]}")
    return 0


def _cmd_characterize(args) -> int:
    stats = characterize(load_edge_list(args.topology))
    r = "undefined" if stats.assortativity is None else f"{stats.assortativity:.6g}"
    print(f"nodes: {stats.node_count}")
    print(f"links: {stats.link_count}")
    print(f"avg_degree: {stats.avg_degree:.6g} +/- {stats.degree_std:.6g}")
    print(f"max_degree: {stats.max_degree}")
    print(
        f"avg_shortest_path: {stats.avg_shortest_path:.6g} "
        f"+/- {stats.shortest_path_std:.6g}"
    )
    print(f"assortativity: {r}")
    return 0


def _cmd_replay(args) -> int:
    outputs = replay_from_manifest(args.manifest, args.out, workers=args.workers)
    for name in sorted(outputs.files):
        print(f"wrote {outputs.files[name]}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "characterize": _cmd_characterize,
        "replay": _cmd_replay,
    }
    try:
        return handlers[args.command](args)
    except RobsurfError as exc:
        print(f"{exc.category}: {exc}", file=sys.stderr)
        return EXIT_CODES.get(exc.category, 1)
    except OSError as exc:
        print(f"io: {exc}", file=sys.stderr)
        return EXIT_CODES["io"]


if __name__ == "__main__":
    raise SystemExit(main())
