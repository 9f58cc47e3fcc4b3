"""End-to-end run orchestration and the replayable manifest.

A run loads a topology, evaluates one failure scenario over the full plan,
fits the principal component, and writes everything a reader or a replay
needs into the output directory:

  omega.csv           surface, rows sorted descending
  omega_unsorted.csv  same values, column i = configuration i
  summary.csv         per-level mean/variance + running area
  pca.json            eigen system, energy, v_hat, t0
  manifest.json       inputs, seeds, versions, surface metadata
  heatmap.ppm         optional P6 image of omega

The manifest alone is sufficient to reproduce a run bit-for-bit: it records
the per-configuration seeds verbatim (not just the master seed), the
topology path and its SHA-256, and the library versions involved.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numba
import numpy as np

from . import __version__
from .errors import ConfigurationError, InputError
from .failures import (
    FailureScenario,
    RunPlan,
    ScenarioRun,
    run_scenario,
)
from .graph import Graph
from .io import (
    emit_heatmap,
    load_edge_list,
    read_json,
    sha256_of_file,
    write_json,
    write_matrix_csv,
    write_summary_csv,
)
from .surface import RobustnessSurface, SurfaceSummary, build_surface, summarize

#: used when the command line supplies no seed; never derived from the clock
DEFAULT_MASTER_SEED = 42

#: configuration counts when none are requested
DEFAULT_RANDOM_CONFIGS = 500
DEFAULT_TARGETED_CONFIGS = 100

MANIFEST_FORMAT = "robsurf-manifest/1"


@dataclass(frozen=True)
class RunConfig:
    topology_path: str
    scenario_name: str
    p_max: int = 70
    config_count: int | None = None  # None: default by strategy
    master_seed: int = DEFAULT_MASTER_SEED
    alpha: float = 0.9
    output_dir: str = "robsurf-out"
    emit_heatmap: bool = False
    workers: int | None = None  # None: one per CPU
    percentages: tuple[int, ...] | None = None  # overrides p_max when given
    config_seeds: tuple[int, ...] | None = None  # verbatim seeds (replay)

    def __post_init__(self):
        if not 1 <= self.p_max <= 100:
            raise ConfigurationError(f"p_max {self.p_max} outside [1, 100]")
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigurationError(f"alpha {self.alpha} outside (0, 1]")
        if self.config_count is not None and self.config_count < 2:
            raise ConfigurationError(
                f"need at least 2 configurations, got {self.config_count}"
            )
        if self.workers is not None and self.workers < 1:
            raise ConfigurationError("workers must be >= 1")

    @property
    def scenario(self) -> FailureScenario:
        return FailureScenario.from_name(self.scenario_name)

    def resolved_config_count(self) -> int:
        if self.config_count is not None:
            return self.config_count
        if self.scenario.is_random:
            return DEFAULT_RANDOM_CONFIGS
        return DEFAULT_TARGETED_CONFIGS

    def build_plan(self) -> RunPlan:
        count = self.resolved_config_count()
        if self.config_seeds is not None:
            if len(self.config_seeds) != count:
                raise ConfigurationError(
                    f"{len(self.config_seeds)} seeds given for {count} "
                    "configurations"
                )
            return RunPlan(
                percentages=self.percentages
                or tuple(range(1, self.p_max + 1)),
                seeds=tuple(self.config_seeds),
                master_seed=self.master_seed,
            )
        return RunPlan.build(
            config_count=count,
            master_seed=self.master_seed,
            p_max=self.p_max,
            percentages=self.percentages,
        )


@dataclass(frozen=True)
class RunOutputs:
    surface: RobustnessSurface
    summary: SurfaceSummary
    files: dict = field(default_factory=dict)  # name -> absolute path


def _manifest_payload(
    config: RunConfig,
    graph: Graph,
    plan: RunPlan,
    surface: RobustnessSurface,
    summary: SurfaceSummary,
) -> dict:
    return {
        "format": MANIFEST_FORMAT,
        "versions": {
            "robsurf": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "numba": numba.__version__,
        },
        "topology": {
            "path": str(Path(config.topology_path).resolve()),
            "sha256": sha256_of_file(config.topology_path),
            "node_count": graph.node_count,
            "link_count": graph.link_count,
        },
        "scenario": config.scenario_name,
        "plan": {
            "percentages": list(plan.percentages),
            "config_count": plan.config_count,
            "master_seed": plan.master_seed,
            "config_seeds": list(plan.seeds),
        },
        "alpha": config.alpha,
        "emit_heatmap": config.emit_heatmap,
        "surface": {
            "omega_shape": list(surface.omega.shape),
            "r_star_init": surface.r_star_init,
            "selected_components": surface.pca.selected_count,
            "color_scale": list(surface.color_scale),
            "negative_values": surface.has_negative_values,
            "area_under_mean": summary.area_under_mean,
        },
    }


def run_pipeline(config: RunConfig) -> RunOutputs:
    """Execute one full run and write all outputs; returns them in memory too."""
    graph = load_edge_list(config.topology_path)
    plan = config.build_plan()
    run: ScenarioRun = run_scenario(
        graph, config.scenario, plan, workers=config.workers
    )
    surface = build_surface(run, alpha=config.alpha)
    summary = summarize(surface)

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "omega": out / "omega.csv",
        "omega_unsorted": out / "omega_unsorted.csv",
        "summary": out / "summary.csv",
        "pca": out / "pca.json",
        "manifest": out / "manifest.json",
    }
    write_matrix_csv(surface.omega, plan.percentages, files["omega"])
    write_matrix_csv(
        surface.omega_unsorted, plan.percentages, files["omega_unsorted"]
    )
    write_summary_csv(summary, plan.percentages, files["summary"])
    write_json(surface.pca.to_dict(), files["pca"])
    write_json(
        _manifest_payload(config, graph, plan, surface, summary),
        files["manifest"],
    )
    if config.emit_heatmap:
        files["heatmap"] = out / "heatmap.ppm"
        emit_heatmap(surface, files["heatmap"])
    return RunOutputs(
        surface=surface,
        summary=summary,
        files={k: str(v.resolve()) for k, v in files.items()},
    )


def config_from_manifest(
    manifest_path: str | os.PathLike,
    output_dir: str,
    workers: int | None = None,
) -> RunConfig:
    """Rebuild the run configuration recorded in a manifest.

    The topology file must still match its recorded SHA-256; the seeds are
    taken verbatim so the replay does not depend on the derivation rule.
    """
    manifest = read_json(manifest_path)
    if manifest.get("format") != MANIFEST_FORMAT:
        raise InputError(
            f"unsupported manifest format {manifest.get('format')!r}"
        )
    topology = manifest["topology"]
    path = topology["path"]
    if not os.path.isabs(path):
        path = str(Path(manifest_path).parent / path)
    actual = sha256_of_file(path)
    if actual != topology["sha256"]:
        raise InputError(
            f"topology file {path} does not match the manifest checksum"
        )
    plan = manifest["plan"]
    return RunConfig(
        topology_path=path,
        scenario_name=manifest["scenario"],
        p_max=max(plan["percentages"]),
        config_count=plan["config_count"],
        master_seed=plan["master_seed"],
        alpha=manifest["alpha"],
        output_dir=output_dir,
        emit_heatmap=manifest["emit_heatmap"],
        workers=workers,
        percentages=tuple(plan["percentages"]),
        config_seeds=tuple(plan["config_seeds"]),
    )


def replay_from_manifest(
    manifest_path: str | os.PathLike,
    output_dir: str | None = None,
    workers: int | None = None,
) -> RunOutputs:
    """Re-run a recorded run; identical inputs produce identical bytes."""
    if output_dir is None:
        output_dir = str(Path(manifest_path).parent)
    return run_pipeline(
        config_from_manifest(manifest_path, output_dir, workers=workers)
    )
