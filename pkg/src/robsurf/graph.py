"""Immutable undirected simple graph and its traversal/spectral primitives.

Nodes are dense 0-based indices; arbitrary external identifiers live in the
optional ``labels`` tuple (index -> label). Links are canonical ``(u, v)``
pairs with ``u < v``, stored sorted, so two graphs with the same link set
compare equal. Instances never mutate: removal operations return new graphs,
which makes every value safe to share across worker processes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DomainError, InputError, NumericalError

Link = tuple[int, int]

# Hop-distance sentinel for unreachable nodes. Deliberately a huge value so
# that accidentally averaging it into a path metric is impossible to miss.
UNREACHABLE: int = 2**31 - 1


def canonical_link(u: int, v: int) -> Link:
    """Return the unordered pair (u, v) in canonical (min, max) form."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    node_count: int
    links: tuple[Link, ...]
    labels: tuple[str, ...] | None = None

    @classmethod
    def from_links(
        cls,
        node_count: int,
        links: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
    ) -> "Graph":
        """Validated constructor: rejects self-loops, duplicates, bad indices."""
        if node_count < 0:
            raise InputError(f"node_count must be >= 0, got {node_count}")
        if labels is not None and len(labels) != node_count:
            raise InputError(
                f"labels length {len(labels)} != node_count {node_count}"
            )
        canonical = []
        for u, v in links:
            u, v = int(u), int(v)
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise InputError(f"link ({u}, {v}) out of range for {node_count} nodes")
            if u == v:
                raise InputError(f"self-loop at node {u}")
            canonical.append(canonical_link(u, v))
        canonical.sort()
        for a, b in zip(canonical, canonical[1:]):
            if a == b:
                raise InputError(f"duplicate link {a}")
        return cls(
            node_count=node_count,
            links=tuple(canonical),
            labels=tuple(labels) if labels is not None else None,
        )

    def __reduce__(self):
        # keep pickles lean: drop cached adjacency/CSR arrays
        return (Graph, (self.node_count, self.links, self.labels))

    @property
    def link_count(self) -> int:
        return len(self.links)

    def label_of(self, index: int) -> str:
        if self.labels is not None:
            return self.labels[index]
        return str(index)

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, indices, edge_link) with sorted neighbor lists.

        Both directed copies of link i carry edge_link value i.
        """
        n = self.node_count
        if not self.links:
            return (
                np.zeros(n + 1, np.int64),
                np.zeros(0, np.int64),
                np.zeros(0, np.int64),
            )
        e = np.asarray(self.links, dtype=np.int64)
        heads = np.concatenate([e[:, 0], e[:, 1]])
        tails = np.concatenate([e[:, 1], e[:, 0]])
        ids = np.concatenate([np.arange(len(e)), np.arange(len(e))])
        order = np.lexsort((tails, heads))
        indices = tails[order]
        edge_link = ids[order]
        indptr = np.zeros(n + 1, np.int64)
        np.cumsum(np.bincount(heads, minlength=n), out=indptr[1:])
        return indptr, indices, edge_link

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Per-node sorted neighbor tuples (symmetric by construction)."""
        indptr, indices, _ = self._csr
        return tuple(
            tuple(int(w) for w in indices[indptr[i] : indptr[i + 1]])
            for i in range(self.node_count)
        )

    @cached_property
    def degrees(self) -> np.ndarray:
        indptr, _, _ = self._csr
        d = np.diff(indptr)
        d.setflags(write=False)
        return d

    def neighbors(self, node: int) -> tuple[int, ...]:
        if not 0 <= node < self.node_count:
            raise InputError(f"node {node} out of range")
        return self.adjacency[node]

    def has_link(self, u: int, v: int) -> bool:
        return canonical_link(u, v) in self._link_set

    @cached_property
    def _link_set(self) -> frozenset[Link]:
        return frozenset(self.links)


@dataclass(frozen=True)
class ComponentPartition:
    """component_of[i] indexes into sizes; sizes are sorted descending."""

    component_of: np.ndarray
    sizes: tuple[int, ...]

    def __post_init__(self):
        self.component_of.setflags(write=False)

    @property
    def count(self) -> int:
        return len(self.sizes)

    def members_of(self, component: int) -> np.ndarray:
        return np.flatnonzero(self.component_of == component)


def connected_components(g: Graph) -> ComponentPartition:
    """Partition nodes into connected components, largest first.

    Component ids are contiguous from 0; ties in size keep first-seen order,
    so the result is invariant across runs for a fixed graph.
    """
    if g.node_count == 0:
        return ComponentPartition(np.zeros(0, np.int64), ())
    indptr, indices, _ = g._csr
    labels, count = _kernels.component_labels(indptr, indices)
    counts = np.bincount(labels, minlength=count)
    # stable order: by descending size, then by discovery order
    ranked = np.lexsort((np.arange(count), -counts))
    remap = np.empty(count, np.int64)
    remap[ranked] = np.arange(count)
    return ComponentPartition(remap[labels], tuple(int(c) for c in counts[ranked]))


def bfs_distances(g: Graph, source: int) -> list[int]:
    """Hop distances from source; unreachable nodes carry UNREACHABLE."""
    if not 0 <= source < g.node_count:
        raise InputError(f"source {source} out of range for {g.node_count} nodes")
    indptr, indices, _ = g._csr
    dist = [UNREACHABLE] * g.node_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        dv = dist[v]
        for w in indices[indptr[v] : indptr[v + 1]]:
            if dist[w] == UNREACHABLE:
                dist[w] = dv + 1
                queue.append(int(w))
    return dist


def induced_subgraph(g: Graph, nodes: Iterable[int]) -> Graph:
    """Subgraph on the given nodes, re-indexed densely in ascending old order."""
    keep = sorted(set(nodes))
    for i in keep:
        if not 0 <= i < g.node_count:
            raise InputError(f"node {i} out of range")
    remap = {old: new for new, old in enumerate(keep)}
    links = [
        (remap[u], remap[v]) for u, v in g.links if u in remap and v in remap
    ]
    labels = None
    if g.labels is not None:
        labels = [g.labels[i] for i in keep]
    return Graph.from_links(len(keep), links, labels)


def remove_nodes(g: Graph, victims: Iterable[int]) -> Graph:
    """Delete the victim nodes and all incident links; survivors re-index."""
    dead = set(victims)
    for i in dead:
        if not 0 <= i < g.node_count:
            raise InputError(f"node {i} out of range")
    return induced_subgraph(g, (i for i in range(g.node_count) if i not in dead))


def remove_links(g: Graph, victims: Iterable[tuple[int, int]]) -> Graph:
    """Delete the victim links; the node set is unchanged."""
    dead = {canonical_link(u, v) for u, v in victims}
    missing = dead - g._link_set
    if missing:
        raise InputError(f"link {sorted(missing)[0]} not present")
    return Graph.from_links(
        g.node_count,
        (lk for lk in g.links if lk not in dead),
        g.labels,
    )


def laplacian_matrix(g: Graph) -> np.ndarray:
    """Dense combinatorial Laplacian L = Deg - Adjacency."""
    n = g.node_count
    lap = np.zeros((n, n), dtype=np.float64)
    if g.links:
        e = np.asarray(g.links, dtype=np.int64)
        lap[e[:, 0], e[:, 1]] = -1.0
        lap[e[:, 1], e[:, 0]] = -1.0
    idx = np.arange(n)
    lap[idx, idx] = g.degrees
    return lap


def laplacian_second_eigenvalue(g: Graph) -> float:
    """Second-smallest Laplacian eigenvalue; 0 iff the graph is disconnected.

    Dense symmetric solver; intended for graphs up to a few thousand nodes.
    Tiny negative values from rounding are clamped to 0.
    """
    if g.node_count < 2:
        raise DomainError(
            f"algebraic connectivity needs >= 2 nodes, got {g.node_count}"
        )
    try:
        eigenvalues = np.linalg.eigvalsh(laplacian_matrix(g))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Laplacian eigensolver failed: {exc}") from exc
    return max(float(eigenvalues[1]), 0.0)
