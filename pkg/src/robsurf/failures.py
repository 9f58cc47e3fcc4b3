"""Seeded failure processes: removal orders and degraded-graph evaluation.

A scenario pairs an element kind (node/link) with an attack strategy; a
configuration is one seeded realization of it, i.e. a full removal order
over the intact graph's elements. Removals are incremental and
irreversible: the set removed at a lower percentage is always a prefix of
the set removed at a higher one within the same configuration.

Targeted strategies rank elements by their score on the intact graph
(computed once, not re-ranked after removals), descending, with seeded
random tie-breaking so that equal-score elements still yield distinct
realizations across configurations.

Per-configuration seeds derive from one master seed through the SplitMix64
finalizer (seed_for_configuration), so a single recorded integer reproduces
an entire run.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import ConfigurationError, InputError
from .graph import Graph, remove_links, remove_nodes
from .metrics import MetricVector, link_betweenness, metric_vector, node_betweenness

_MASK64 = (1 << 64) - 1

#: strategy name -> element kind it applies to ("both" for random)
STRATEGY_KINDS = {
    "random": "both",
    "degree": "node",
    "node_betweenness": "node",
    "clustering_coefficient": "node",
    "link_betweenness": "link",
}

#: short CLI names for the six supported scenarios
SCENARIO_NAMES = {
    "node-random": ("node", "random"),
    "node-degree": ("node", "degree"),
    "node-bc": ("node", "node_betweenness"),
    "node-cc": ("node", "clustering_coefficient"),
    "link-random": ("link", "random"),
    "link-bc": ("link", "link_betweenness"),
}


@dataclass(frozen=True)
class FailureScenario:
    element_kind: str  # "node" | "link"
    strategy: str

    def __post_init__(self):
        if self.element_kind not in ("node", "link"):
            raise ConfigurationError(f"unknown element kind {self.element_kind!r}")
        allowed = STRATEGY_KINDS.get(self.strategy)
        if allowed is None:
            raise ConfigurationError(f"unknown strategy {self.strategy!r}")
        if allowed != "both" and allowed != self.element_kind:
            raise ConfigurationError(
                f"strategy {self.strategy!r} does not apply to "
                f"{self.element_kind} failures"
            )

    @property
    def is_random(self) -> bool:
        return self.strategy == "random"

    @property
    def name(self) -> str:
        for name, (kind, strategy) in SCENARIO_NAMES.items():
            if (kind, strategy) == (self.element_kind, self.strategy):
                return name
        raise AssertionError("scenario has no registered name")

    @classmethod
    def from_name(cls, name: str) -> "FailureScenario":
        try:
            kind, strategy = SCENARIO_NAMES[name]
        except KeyError:
            known = ", ".join(sorted(SCENARIO_NAMES))
            raise ConfigurationError(
                f"unknown scenario {name!r} (expected one of: {known})"
            ) from None
        return cls(kind, strategy)


@dataclass(frozen=True)
class FailureConfiguration:
    """One realization: a seeded removal order over all removable elements."""

    scenario: FailureScenario
    seed: int
    order: tuple  # node indices, or canonical links, intact-graph referenced


@dataclass(frozen=True)
class RunPlan:
    percentages: tuple[int, ...]
    seeds: tuple[int, ...]
    master_seed: int

    def __post_init__(self):
        if len(self.percentages) < 1:
            raise ConfigurationError("plan needs at least one failure percentage")
        previous = 0
        for p in self.percentages:
            if not 1 <= p <= 100:
                raise ConfigurationError(f"percentage {p} outside [1, 100]")
            if p <= previous:
                raise ConfigurationError("percentages must be strictly increasing")
            previous = p
        if len(self.seeds) < 1:
            raise ConfigurationError("plan needs at least one configuration seed")

    @property
    def config_count(self) -> int:
        return len(self.seeds)

    @classmethod
    def build(
        cls,
        config_count: int,
        master_seed: int,
        p_max: int = 70,
        percentages: Sequence[int] | None = None,
    ) -> "RunPlan":
        if percentages is None:
            if not 1 <= p_max <= 100:
                raise ConfigurationError(f"p_max {p_max} outside [1, 100]")
            percentages = range(1, p_max + 1)
        seeds = tuple(
            seed_for_configuration(master_seed, i) for i in range(config_count)
        )
        return cls(tuple(int(p) for p in percentages), seeds, master_seed)


def seed_for_configuration(master_seed: int, index: int) -> int:
    """Derive the seed of configuration ``index`` from the master seed.

    SplitMix64: advance by (index + 1) Weyl increments, then finalize.
    """
    z = (master_seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _strategy_scores(g: Graph, scenario: FailureScenario) -> np.ndarray | None:
    """Intact-graph ranking scores, or None for the random strategy."""
    if scenario.is_random:
        return None
    if scenario.strategy == "degree":
        return g.degrees.astype(np.float64)
    if scenario.strategy == "node_betweenness":
        return node_betweenness(g)
    if scenario.strategy == "clustering_coefficient":
        indptr, indices, _ = g._csr
        return _kernels.local_clustering(indptr, indices)
    if scenario.strategy == "link_betweenness":
        return link_betweenness(g)
    raise AssertionError(f"unhandled strategy {scenario.strategy}")


def _removal_order(
    element_count: int, scores: np.ndarray | None, seed: int
) -> np.ndarray:
    rng = np.random.default_rng(seed)
    if scores is None:
        return rng.permutation(element_count)
    if len(scores) != element_count:
        raise InputError("score vector length does not match element count")
    tiebreak = rng.permutation(element_count)
    # primary: score descending; secondary: seeded random rank
    return np.lexsort((tiebreak, -scores))


def generate_configuration(
    g: Graph, scenario: FailureScenario, seed: int
) -> FailureConfiguration:
    """Build the seeded removal order for one configuration.

    Random strategy: a uniform permutation. Targeted strategies: elements
    sorted by intact-graph score, descending, ties broken by the seeded
    generator. The same (graph, scenario, seed) always yields the same
    order.
    """
    count = g.node_count if scenario.element_kind == "node" else g.link_count
    if count == 0:
        raise ConfigurationError(
            f"graph has no {scenario.element_kind}s to remove"
        )
    order = _removal_order(count, _strategy_scores(g, scenario), seed)
    if scenario.element_kind == "node":
        elements = tuple(int(i) for i in order)
    else:
        elements = tuple(g.links[i] for i in order)
    return FailureConfiguration(scenario=scenario, seed=seed, order=elements)


def removal_count(total: int, p: int) -> int:
    """Round-half-up share of ``total`` at percentage ``p``; at least 1."""
    if not 1 <= p <= 100:
        raise InputError(f"failure percentage {p} outside [1, 100]")
    return min(total, max(1, (p * total + 50) // 100))


def degraded_graph(g: Graph, config: FailureConfiguration, p: int) -> Graph:
    """Apply the first p% of the configuration's removal order to ``g``."""
    total = len(config.order)
    expected = (
        g.node_count if config.scenario.element_kind == "node" else g.link_count
    )
    if total != expected:
        raise InputError(
            "configuration does not match graph: "
            f"{total} ordered elements vs {expected} removable"
        )
    k = removal_count(total, p)
    victims = config.order[:k]
    if config.scenario.element_kind == "node":
        return remove_nodes(g, victims)
    return remove_links(g, victims)


@dataclass(frozen=True)
class ScenarioRun:
    """Metric tensor of one scenario: levels x configurations x metrics."""

    scenario: FailureScenario
    plan: RunPlan
    tensor: np.ndarray  # shape (|P|, m, n)
    t0: MetricVector

    def __post_init__(self):
        self.tensor.setflags(write=False)

    def level_matrix(self, index: int) -> np.ndarray:
        return self.tensor[index]


def _evaluate_configuration(args) -> np.ndarray:
    """Worker: metric rows for one configuration across all percentages."""
    g, scenario, scores, seed, percentages, n0 = args
    count = g.node_count if scenario.element_kind == "node" else g.link_count
    order = _removal_order(count, scores, seed)
    if scenario.element_kind == "node":
        elements = tuple(int(i) for i in order)
    else:
        elements = tuple(g.links[i] for i in order)
    config = FailureConfiguration(scenario=scenario, seed=seed, order=elements)
    rows = [
        metric_vector(
            degraded_graph(g, config, p), scenario.element_kind, n0
        ).as_array()
        for p in percentages
    ]
    return np.vstack(rows)


def run_scenario(
    g: Graph,
    scenario: FailureScenario,
    plan: RunPlan,
    workers: int | None = None,
) -> ScenarioRun:
    """Evaluate the metric vector at every (percentage, configuration) cell.

    Configurations fan out across worker processes; results are assembled
    in configuration order, so the tensor is bit-identical however many
    workers run. All randomness is consumed while building removal orders,
    never during evaluation.
    """
    if g.node_count == 0:
        raise InputError("cannot run a scenario on an empty graph")
    n0 = g.node_count
    scores = _strategy_scores(g, scenario)
    tasks = [
        (g, scenario, scores, seed, plan.percentages, n0) for seed in plan.seeds
    ]
    if workers is None:
        workers = min(os.cpu_count() or 1, plan.config_count)
    if workers > 1 and plan.config_count > 1:
        _kernels.warmup()  # compile before forking so children inherit the jit
        chunk = max(1, plan.config_count // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_config = list(
                pool.map(_evaluate_configuration, tasks, chunksize=chunk)
            )
    else:
        per_config = [_evaluate_configuration(t) for t in tasks]

    # per_config[i] has shape (|P|, n); stack to (|P|, m, n)
    tensor = np.stack(per_config, axis=1)
    t0 = metric_vector(g, scenario.element_kind, n0)
    return ScenarioRun(scenario=scenario, plan=plan, tensor=tensor, t0=t0)
