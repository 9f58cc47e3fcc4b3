"""Robustness metrics over (possibly degraded) graphs.

The scalar metrics assemble into a fixed-order vector per element kind:
10 entries for link-failure studies, 9 for node-failure studies (the
fragmentation entry only applies when the node set is constant). Path-based
metrics (average shortest path, diameter, algebraic connectivity) are
evaluated on the largest connected component; betweenness averages run over
all nodes/links present. When a metric's precondition fails on a heavily
degraded graph its vector entry is recorded as 0 so a run can sweep failure
levels all the way to total collapse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import DomainError, InputError, UndefinedMetricError
from .graph import (
    ComponentPartition,
    Graph,
    connected_components,
    induced_subgraph,
    laplacian_second_eigenvalue,
)

LINK_METRIC_NAMES: tuple[str, ...] = (
    "lcc_fraction",
    "fragmentation",
    "avg_degree",
    "two_terminal_reliability",
    "avg_clustering",
    "avg_shortest_path",
    "diameter",
    "avg_node_betweenness",
    "avg_link_betweenness",
    "algebraic_connectivity",
)
NODE_METRIC_NAMES: tuple[str, ...] = tuple(
    name for name in LINK_METRIC_NAMES if name != "fragmentation"
)

ELEMENT_KINDS = ("node", "link")


@dataclass(frozen=True)
class MetricVector:
    values: tuple[float, ...]
    names: tuple[str, ...]
    element_kind: str

    def __post_init__(self):
        if len(self.values) != len(self.names):
            raise InputError("metric values/names length mismatch")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    def __getitem__(self, name: str) -> float:
        return self.values[self.names.index(name)]


@dataclass(frozen=True)
class CharacterizationStats:
    node_count: int
    link_count: int
    avg_degree: float
    degree_std: float
    max_degree: int
    avg_shortest_path: float
    shortest_path_std: float
    assortativity: float | None  # None when degrees carry no variance


class PathStats(NamedTuple):
    """Output of the all-sources shortest-path pass."""

    node_betweenness: np.ndarray
    link_betweenness: np.ndarray
    reachable: np.ndarray
    dist_sum: np.ndarray
    dist_sqsum: np.ndarray
    dist_max: np.ndarray


def _path_stats(g: Graph) -> PathStats:
    indptr, indices, edge_link = g._csr
    return PathStats(
        *_kernels.shortest_path_stats(indptr, indices, edge_link, g.link_count)
    )


def lcc_size(g: Graph, initial_node_count: int) -> float:
    """Largest-component size as a fraction of the pre-failure node count."""
    if initial_node_count <= 0:
        raise DomainError("initial node count must be positive")
    parts = connected_components(g)
    if not parts.sizes:
        return 0.0
    return parts.sizes[0] / initial_node_count


def fragmentation(g: Graph) -> float:
    """(C - 1) / (N - 1): 0 when connected, 1 when fully atomized."""
    if g.node_count < 2:
        raise DomainError("fragmentation needs >= 2 nodes")
    return (connected_components(g).count - 1) / (g.node_count - 1)


def avg_degree(g: Graph) -> tuple[float, float]:
    """Mean node degree and its population standard deviation."""
    if g.node_count < 1:
        raise DomainError("average degree needs a non-empty graph")
    deg = g.degrees
    return float(deg.mean()), float(deg.std())


def two_terminal_reliability(g: Graph) -> float:
    """Fraction of unordered node pairs that lie in the same component."""
    if g.node_count < 2:
        raise DomainError("two-terminal reliability needs >= 2 nodes")
    sizes = connected_components(g).sizes
    connected_ordered = sum(s * (s - 1) for s in sizes)
    return connected_ordered / (g.node_count * (g.node_count - 1))


def avg_clustering(g: Graph) -> float:
    """Mean local clustering coefficient; degree < 2 nodes contribute 0."""
    if g.node_count < 1:
        raise DomainError("clustering needs a non-empty graph")
    indptr, indices, _ = g._csr
    return float(_kernels.local_clustering(indptr, indices).mean())


def _lcc_path_aggregates(
    parts: ComponentPartition, stats: PathStats
) -> tuple[float, float, int]:
    """(mean, population std, max) of hop distances over LCC node pairs."""
    lcc_nodes = parts.members_of(0)
    size = len(lcc_nodes)
    if size < 2:
        raise DomainError("largest component has fewer than 2 nodes")
    ordered_pairs = size * (size - 1)
    total = int(stats.dist_sum[lcc_nodes].sum())
    total_sq = int(stats.dist_sqsum[lcc_nodes].sum())
    mean = total / ordered_pairs
    variance = max(total_sq / ordered_pairs - mean * mean, 0.0)
    return mean, math.sqrt(variance), int(stats.dist_max[lcc_nodes].max())


def avg_shortest_path(g: Graph) -> tuple[float, float]:
    """Mean hop distance over unordered node pairs of the largest component,
    with its population standard deviation."""
    parts = connected_components(g)
    if not parts.sizes or parts.sizes[0] < 2:
        raise DomainError("average shortest path needs an LCC of >= 2 nodes")
    mean, std, _ = _lcc_path_aggregates(parts, _path_stats(g))
    return mean, std


def diameter(g: Graph) -> int:
    """Maximum hop distance within the largest component."""
    parts = connected_components(g)
    if not parts.sizes or parts.sizes[0] < 2:
        raise DomainError("diameter needs an LCC of >= 2 nodes")
    _, _, dmax = _lcc_path_aggregates(parts, _path_stats(g))
    return dmax


def node_betweenness(g: Graph) -> np.ndarray:
    """Raw per-node betweenness: unordered pairs counted once, endpoints
    excluded, shortest-path multiplicity respected."""
    if g.node_count < 1:
        raise DomainError("betweenness needs a non-empty graph")
    return _path_stats(g).node_betweenness


def avg_node_betweenness(g: Graph) -> float:
    return float(node_betweenness(g).mean())


def link_betweenness(g: Graph) -> np.ndarray:
    """Raw per-link betweenness, aligned with ``g.links``."""
    if g.link_count < 1:
        raise DomainError("link betweenness needs at least one link")
    return _path_stats(g).link_betweenness


def avg_link_betweenness(g: Graph) -> float:
    return float(link_betweenness(g).mean())


def algebraic_connectivity(g: Graph) -> float:
    """Second-smallest Laplacian eigenvalue of the largest component."""
    parts = connected_components(g)
    if not parts.sizes or parts.sizes[0] < 2:
        raise DomainError("algebraic connectivity needs an LCC of >= 2 nodes")
    return laplacian_second_eigenvalue(induced_subgraph(g, parts.members_of(0)))


def assortativity(g: Graph) -> float:
    """Pearson correlation of endpoint degrees over links (both orientations)."""
    if g.link_count < 2:
        raise UndefinedMetricError("assortativity needs >= 2 links")
    deg = g.degrees
    e = np.asarray(g.links, dtype=np.int64)
    x = np.concatenate([deg[e[:, 0]], deg[e[:, 1]]]).astype(np.float64)
    y = np.concatenate([deg[e[:, 1]], deg[e[:, 0]]]).astype(np.float64)
    dx = x - x.mean()
    dy = y - y.mean()
    denom = math.sqrt(float((dx * dx).sum()) * float((dy * dy).sum()))
    if denom <= 0.0:
        raise UndefinedMetricError(
            "assortativity undefined: endpoint degrees have zero variance"
        )
    return float((dx * dy).sum()) / denom


def metric_names(element_kind: str) -> tuple[str, ...]:
    if element_kind == "link":
        return LINK_METRIC_NAMES
    if element_kind == "node":
        return NODE_METRIC_NAMES
    raise InputError(f"unknown element kind {element_kind!r}")


def metric_vector(g: Graph, element_kind: str, initial_node_count: int) -> MetricVector:
    """Assemble the fixed-order metric vector for one (degraded) graph.

    Entries whose preconditions fail on this graph are recorded as 0. The
    computation shares a single all-sources shortest-path pass across the
    betweenness and path-length entries.
    """
    names = metric_names(element_kind)
    if initial_node_count < max(1, g.node_count):
        raise InputError(
            f"initial node count {initial_node_count} smaller than graph "
            f"({g.node_count} nodes)"
        )
    n = g.node_count
    parts = connected_components(g)
    stats = _path_stats(g) if n >= 1 else None

    values: dict[str, float] = {}
    values["lcc_fraction"] = parts.sizes[0] / initial_node_count if n else 0.0
    if element_kind == "link":
        values["fragmentation"] = (
            (parts.count - 1) / (n - 1) if n >= 2 else 0.0
        )
    values["avg_degree"] = float(g.degrees.mean()) if n >= 1 else 0.0
    values["two_terminal_reliability"] = (
        sum(s * (s - 1) for s in parts.sizes) / (n * (n - 1)) if n >= 2 else 0.0
    )
    if n >= 1:
        indptr, indices, _ = g._csr
        values["avg_clustering"] = float(
            _kernels.local_clustering(indptr, indices).mean()
        )
    else:
        values["avg_clustering"] = 0.0
    if parts.sizes and parts.sizes[0] >= 2:
        aspl, _, dmax = _lcc_path_aggregates(parts, stats)
        values["avg_shortest_path"] = aspl
        values["diameter"] = float(dmax)
        values["algebraic_connectivity"] = laplacian_second_eigenvalue(
            induced_subgraph(g, parts.members_of(0))
        )
    else:
        values["avg_shortest_path"] = 0.0
        values["diameter"] = 0.0
        values["algebraic_connectivity"] = 0.0
    values["avg_node_betweenness"] = (
        float(stats.node_betweenness.mean()) if n >= 1 else 0.0
    )
    values["avg_link_betweenness"] = (
        float(stats.link_betweenness.mean()) if g.link_count >= 1 else 0.0
    )

    return MetricVector(
        values=tuple(values[name] for name in names),
        names=names,
        element_kind=element_kind,
    )


def characterize(g: Graph) -> CharacterizationStats:
    """Headline statistics of a topology: sizes, degrees, path lengths,
    degree assortativity (None when undefined)."""
    if g.node_count < 1:
        raise DomainError("cannot characterize an empty graph")
    mean_deg, std_deg = avg_degree(g)
    aspl, aspl_std = avg_shortest_path(g)
    try:
        r = assortativity(g)
    except UndefinedMetricError:
        r = None
    return CharacterizationStats(
        node_count=g.node_count,
        link_count=g.link_count,
        avg_degree=mean_deg,
        degree_std=std_deg,
        max_degree=int(g.degrees.max()),
        avg_shortest_path=aspl,
        shortest_path_std=aspl_std,
        assortativity=r,
    )
