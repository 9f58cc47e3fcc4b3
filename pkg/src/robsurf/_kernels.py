"""Numba-compiled hot loops shared by the metric code.

All kernels operate on the CSR adjacency arrays built by ``Graph``:
``indptr``/``indices`` describe sorted neighbor lists, ``edge_link`` maps
each CSR slot to the index of its undirected link, so both directed copies
of a link share one id. Kernels are single-threaded and allocation-order
deterministic; resulting floats are bit-identical across runs.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def component_labels(indptr, indices):
    """Label nodes by connected component, ids assigned in first-seen order."""
    n = indptr.shape[0] - 1
    labels = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    comp = 0
    for s in range(n):
        if labels[s] >= 0:
            continue
        labels[s] = comp
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            v = queue[head]
            head += 1
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                if labels[w] < 0:
                    labels[w] = comp
                    queue[tail] = w
                    tail += 1
        comp += 1
    return labels, comp


@njit(cache=True)
def shortest_path_stats(indptr, indices, edge_link, link_count):
    """One BFS/Brandes pass from every source.

    Returns per-node and per-link betweenness (each unordered pair counted
    once, endpoints excluded for nodes, shortest-path multiplicity
    respected) plus per-source hop-distance aggregates over reachable
    targets: reachable count, distance sum, squared-distance sum, maximum.
    """
    n = indptr.shape[0] - 1
    node_bc = np.zeros(n, np.float64)
    link_bc = np.zeros(link_count, np.float64)
    reach = np.zeros(n, np.int64)
    dist_sum = np.zeros(n, np.int64)
    dist_sqsum = np.zeros(n, np.int64)
    dist_max = np.zeros(n, np.int64)

    dist = np.empty(n, np.int64)
    sigma = np.empty(n, np.float64)
    delta = np.empty(n, np.float64)
    order = np.empty(n, np.int64)

    for s in range(n):
        for i in range(n):
            dist[i] = -1
            sigma[i] = 0.0
            delta[i] = 0.0
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head, tail = 0, 1
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v]
            for ei in range(indptr[v], indptr[v + 1]):
                w = indices[ei]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]

        ds = 0
        d2 = 0
        dm = 0
        for k in range(1, tail):
            d = dist[order[k]]
            ds += d
            d2 += d * d
            if d > dm:
                dm = d
        reach[s] = tail - 1
        dist_sum[s] = ds
        dist_sqsum[s] = d2
        dist_max[s] = dm

        # Dependency accumulation in reverse BFS order; predecessors are
        # recovered from the distance labels instead of stored lists.
        for k in range(tail - 1, 0, -1):
            w = order[k]
            coeff = (1.0 + delta[w]) / sigma[w]
            dw = dist[w]
            for ei in range(indptr[w], indptr[w + 1]):
                v = indices[ei]
                if dist[v] == dw - 1:
                    c = sigma[v] * coeff
                    delta[v] += c
                    link_bc[edge_link[ei]] += c
            node_bc[w] += delta[w]

    # every unordered pair was visited from both endpoints
    for i in range(n):
        node_bc[i] *= 0.5
    for i in range(link_count):
        link_bc[i] *= 0.5
    return node_bc, link_bc, reach, dist_sum, dist_sqsum, dist_max


@njit(cache=True)
def local_clustering(indptr, indices):
    """Per-node clustering coefficient; degree < 2 contributes 0.

    Neighbor lists must be sorted; common neighbors are counted with a
    two-pointer merge, so each node costs O(sum of neighbor degrees).
    """
    n = indptr.shape[0] - 1
    out = np.zeros(n, np.float64)
    for u in range(n):
        ku = indptr[u + 1] - indptr[u]
        if ku < 2:
            continue
        paired = 0
        for ei in range(indptr[u], indptr[u + 1]):
            v = indices[ei]
            i = indptr[u]
            j = indptr[v]
            iend = indptr[u + 1]
            jend = indptr[v + 1]
            while i < iend and j < jend:
                a = indices[i]
                b = indices[j]
                if a == b:
                    paired += 1
                    i += 1
                    j += 1
                elif a < b:
                    i += 1
                else:
                    j += 1
        # `paired` double-counts each link among u's neighbors
        out[u] = paired / (ku * (ku - 1))
    return out


def warmup() -> None:
    """Force compilation of all kernels on a two-node toy input."""
    indptr = np.array([0, 1, 2], np.int64)
    indices = np.array([1, 0], np.int64)
    edge_link = np.array([0, 0], np.int64)
    component_labels(indptr, indices)
    shortest_path_stats(indptr, indices, edge_link, 1)
    local_clustering(indptr, indices)
