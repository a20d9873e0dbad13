"""Seeded synthetic hypergraphs for tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .hypergraph import Hyperedge, Hypergraph


def random_hypergraph(
    n_vertices: int,
    n_hyperedges: int,
    size_range: tuple[int, int] = (1, 6),
    seed: int = 0,
    timed: bool = False,
) -> Hypergraph:
    """Uniform random hyperedges with sizes drawn from size_range."""
    rng = np.random.default_rng(seed)
    lo, hi = size_range
    if not 1 <= lo <= hi <= n_vertices:
        raise ValueError(f"bad size_range {size_range} for {n_vertices} vertices")
    edges = []
    for j in range(n_hyperedges):
        k = int(rng.integers(lo, hi + 1))
        verts = rng.choice(n_vertices, size=k, replace=False)
        t = float(j) if timed else None
        edges.append(Hyperedge(frozenset(int(v) for v in verts), time=t))
    return Hypergraph(n_vertices, edges)


def two_uniform_hypergraph(n_vertices: int, edge_prob: float, seed: int = 0) -> Hypergraph:
    """A random graph encoded as a hypergraph of 2-vertex hyperedges."""
    rng = np.random.default_rng(seed)
    edges = []
    for u in range(n_vertices):
        for v in range(u + 1, n_vertices):
            if rng.random() < edge_prob:
                edges.append(Hyperedge(frozenset((u, v))))
    return Hypergraph(n_vertices, edges)


def planted_community_hypergraph(
    n_vertices: int = 120,
    n_hyperedges: int = 600,
    n_communities: int = 12,
    community_size: int = 18,
    size_range: tuple[int, int] = (2, 6),
    noise: float = 0.15,
    seed: int = 0,
) -> Hypergraph:
    """Hyperedges drawn inside overlapping vertex communities.

    Communities are contiguous windows (wrapping around), so neighbors
    share most of their groups; a noise fraction of hyperedges is sampled
    from the whole vertex set instead.  Group structure survives in the
    incidence topology but is flattened by clique expansion, which is what
    makes this useful as a benchmark.
    """
    rng = np.random.default_rng(seed)
    stride = max(1, n_vertices // n_communities)
    communities = [
        np.asarray([(c * stride + i) % n_vertices for i in range(community_size)])
        for c in range(n_communities)
    ]
    lo, hi = size_range
    edges = []
    for _ in range(n_hyperedges):
        k = int(rng.integers(lo, hi + 1))
        if rng.random() < noise:
            pool = np.arange(n_vertices)
        else:
            pool = communities[int(rng.integers(0, n_communities))]
        verts = rng.choice(pool, size=min(k, len(pool)), replace=False)
        edges.append(Hyperedge(frozenset(int(v) for v in verts)))
    return Hypergraph(n_vertices, edges)
