"""Hypergraph and graph data model, text-format ingestion, clique expansions.

A hypergraph is a vertex universe 0..n-1 plus an ordered list of hyperedges
(vertex subsets, optionally timestamped).  Both structures are immutable
after construction; derived indexes (incidence matrix, neighbor arrays) are
built lazily and cached.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse


class BensonFormatError(ValueError):
    """Malformed nverts/simplices/times dataset file."""


@dataclass(frozen=True)
class Hyperedge:
    """A set of vertices, optionally stamped with the time it appeared."""

    vertices: frozenset[int]
    time: float | None = None

    def __post_init__(self):
        if len(self.vertices) < 1:
            raise ValueError("hyperedge must contain at least one vertex")

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: int) -> bool:
        return v in self.vertices

    def sorted_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertices))


def canonical_edge(u: int, v: int) -> tuple[int, int]:
    """Store every undirected pair once, as (min, max)."""
    if u == v:
        raise ValueError(f"self-loop ({u}, {v}) is not a valid edge")
    return (u, v) if u < v else (v, u)


class Hypergraph:
    """Vertex universe plus an ordered hyperedge list.

    Hyperedge order is meaningful and stable: duplicate hyperedges are kept
    as distinct entries (they carry multiplicity for weighted expansion and
    hyperdegrees), and all incidence-derived indexes respect list order.
    Either every hyperedge is timed or none is.
    """

    def __init__(
        self,
        n_vertices: int,
        hyperedges: Iterable[Hyperedge],
        original_labels: Sequence[int] | None = None,
    ):
        self.n_vertices = int(n_vertices)
        self.hyperedges: tuple[Hyperedge, ...] = tuple(hyperedges)
        self.original_labels = tuple(original_labels) if original_labels is not None else None

        if self.n_vertices < 0:
            raise ValueError("n_vertices must be non-negative")
        timed = [f.time is not None for f in self.hyperedges]
        if any(timed) and not all(timed):
            raise ValueError("hyperedges must be either all timed or all untimed")
        for i, f in enumerate(self.hyperedges):
            for v in f.vertices:
                if not 0 <= v < self.n_vertices:
                    raise ValueError(f"hyperedge {i} references vertex {v} outside 0..{self.n_vertices - 1}")
        if self.original_labels is not None and len(self.original_labels) != self.n_vertices:
            raise ValueError("original_labels must have one entry per vertex")

    @property
    def n_hyperedges(self) -> int:
        return len(self.hyperedges)

    @property
    def is_timed(self) -> bool:
        return bool(self.hyperedges) and self.hyperedges[0].time is not None

    @cached_property
    def _membership(self) -> list[np.ndarray]:
        """Hyperedge indices containing each vertex, in hyperedge-list order."""
        members: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for j, f in enumerate(self.hyperedges):
            for v in f.vertices:
                members[v].append(j)
        return [np.asarray(m, dtype=np.int64) for m in members]

    @cached_property
    def incidence(self) -> sparse.csr_matrix:
        """|F| x |V| binary incidence matrix (CSR, sorted indices)."""
        rows, cols = [], []
        for j, f in enumerate(self.hyperedges):
            for v in f.sorted_vertices():
                rows.append(j)
                cols.append(v)
        mat = sparse.csr_matrix(
            (np.ones(len(rows), dtype=np.float64), (rows, cols)),
            shape=(self.n_hyperedges, self.n_vertices),
        )
        mat.sort_indices()
        return mat

    @cached_property
    def hyperdegrees(self) -> np.ndarray:
        """Number of hyperedges incident on each vertex."""
        return np.asarray([len(m) for m in self._membership], dtype=np.int64)

    @cached_property
    def hyperedge_sizes(self) -> np.ndarray:
        return np.asarray([len(f) for f in self.hyperedges], dtype=np.int64)

    def hyperneighbor_indices(self, u: int) -> np.ndarray:
        self._check_vertex(u)
        return self._membership[u]

    def hyperneighbors(self, u: int) -> list[Hyperedge]:
        """Hyperedges incident on u, in stable hyperedge-list order."""
        return [self.hyperedges[j] for j in self.hyperneighbor_indices(u)]

    def edge_hyperneighbors(self, e: Iterable[int]) -> list[Hyperedge]:
        """Hyperedges containing every vertex of e, in list order."""
        pair = set(e)
        for v in pair:
            self._check_vertex(v)
        return [f for f in self.hyperedges if pair <= f.vertices]

    def _check_vertex(self, u: int) -> None:
        if not 0 <= u < self.n_vertices:
            raise ValueError(f"vertex {u} outside 0..{self.n_vertices - 1}")

    def __repr__(self) -> str:
        t = "timed, " if self.is_timed else ""
        return f"Hypergraph({t}{self.n_vertices} vertices, {self.n_hyperedges} hyperedges)"


class Graph:
    """Undirected graph with optional positive integer edge weights and times.

    Edges are stored once in canonical (min, max) order; self-loops are
    rejected.  Neighbor arrays and the (weighted) adjacency matrix are
    cached on first use.
    """

    def __init__(
        self,
        n_vertices: int,
        edges: Iterable[tuple[int, int]],
        weight: dict[tuple[int, int], int] | None = None,
        time: dict[tuple[int, int], float] | None = None,
    ):
        self.n_vertices = int(n_vertices)
        canon = set()
        for u, v in edges:
            e = canonical_edge(int(u), int(v))
            if not (0 <= e[0] and e[1] < self.n_vertices):
                raise ValueError(f"edge {e} outside vertex range")
            canon.add(e)
        self.edges: frozenset[tuple[int, int]] = frozenset(canon)
        self.weight = dict(weight) if weight is not None else None
        self.time = dict(time) if time is not None else None

        if self.weight is not None:
            for e in self.edges:
                w = self.weight.get(e)
                if w is None or w < 1:
                    raise ValueError(f"weighted graph needs weight >= 1 for every edge; bad edge {e}")

    @property
    def is_weighted(self) -> bool:
        return self.weight is not None

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_list(self) -> tuple[tuple[int, int], ...]:
        """Edges sorted ascending; the deterministic iteration order."""
        return tuple(sorted(self.edges))

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self.edges

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        """|V| x |V| symmetric adjacency; entries are weights (1 if unweighted)."""
        rows, cols, data = [], [], []
        for (u, v) in self.edge_list:
            w = float(self.weight[(u, v)]) if self.weight is not None else 1.0
            rows += [u, v]
            cols += [v, u]
            data += [w, w]
        mat = sparse.csr_matrix((data, (rows, cols)), shape=(self.n_vertices, self.n_vertices))
        mat.sort_indices()
        return mat

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        for (u, v) in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    @cached_property
    def strengths(self) -> np.ndarray:
        """Sum of incident edge weights per vertex (equals degree if unweighted)."""
        return np.asarray(self.adjacency.sum(axis=1)).ravel()

    @cached_property
    def neighbor_sets(self) -> list[set[int]]:
        sets: list[set[int]] = [set() for _ in range(self.n_vertices)]
        for (u, v) in self.edges:
            sets[u].add(v)
            sets[v].add(u)
        return sets

    def neighbors(self, u: int) -> set[int]:
        """Adjacent vertices of u as a set."""
        if not 0 <= u < self.n_vertices:
            raise ValueError(f"vertex {u} outside 0..{self.n_vertices - 1}")
        return self.neighbor_sets[u]

    def neighbor_array(self, u: int) -> np.ndarray:
        """Adjacent vertices of u, sorted ascending."""
        if not 0 <= u < self.n_vertices:
            raise ValueError(f"vertex {u} outside 0..{self.n_vertices - 1}")
        a = self.adjacency
        return a.indices[a.indptr[u]:a.indptr[u + 1]].astype(np.int64)

    def neighbor_weights(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        """(sorted neighbor ids, matching edge weights) for vertex u."""
        a = self.adjacency
        lo, hi = a.indptr[u], a.indptr[u + 1]
        return a.indices[lo:hi].astype(np.int64), a.data[lo:hi]

    def __repr__(self) -> str:
        w = "weighted, " if self.is_weighted else ""
        return f"Graph({w}{self.n_vertices} vertices, {self.n_edges} edges)"


def neighbors(graph: Graph, u: int) -> set[int]:
    return graph.neighbors(u)


def hyperneighbors(hypergraph: Hypergraph, u: int) -> list[Hyperedge]:
    return hypergraph.hyperneighbors(u)


def edge_hyperneighbors(hypergraph: Hypergraph, e: Iterable[int]) -> list[Hyperedge]:
    return hypergraph.edge_hyperneighbors(e)


def clique_expand(hypergraph: Hypergraph) -> Graph:
    """Connect every vertex pair that co-occurs in some hyperedge.

    If the hypergraph is timed, each edge carries the earliest timestamp
    among the hyperedges containing it.
    """
    timed = hypergraph.is_timed
    times: dict[tuple[int, int], float] = {}
    edges: set[tuple[int, int]] = set()
    for f in hypergraph.hyperedges:
        for u, v in itertools.combinations(f.sorted_vertices(), 2):
            e = (u, v)
            edges.add(e)
            if timed:
                t = float(f.time)
                if e not in times or t < times[e]:
                    times[e] = t
    return Graph(hypergraph.n_vertices, edges, time=times if timed else None)


def weighted_clique_expand(hypergraph: Hypergraph) -> Graph:
    """Clique expansion with co-occurrence counts as edge weights."""
    timed = hypergraph.is_timed
    counts: dict[tuple[int, int], int] = {}
    times: dict[tuple[int, int], float] = {}
    for f in hypergraph.hyperedges:
        for u, v in itertools.combinations(f.sorted_vertices(), 2):
            e = (u, v)
            counts[e] = counts.get(e, 0) + 1
            if timed:
                t = float(f.time)
                if e not in times or t < times[e]:
                    times[e] = t
    return Graph(hypergraph.n_vertices, counts.keys(), weight=counts, time=times if timed else None)


def _read_lines(path) -> list[str]:
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.rstrip("\r\n") for ln in fh]
    # tolerate trailing blank lines; interior blanks are format errors
    while lines and lines[-1].strip() == "":
        lines.pop()
    return lines


def load_benson(nverts_path, simplices_path, times_path=None) -> Hypergraph:
    """Load a hypergraph from nverts/simplices(/times) text files.

    The nverts file holds one simplex size per line; the simplices file the
    concatenated vertex labels, one per line; the optional times file one
    timestamp per simplex.  Labels may be arbitrary integers and are
    remapped to dense 0-based ids in order of first appearance; the
    original labels are retained on the returned hypergraph.
    """
    nverts_lines = _read_lines(nverts_path)
    simplex_lines = _read_lines(simplices_path)

    nverts: list[int] = []
    for i, ln in enumerate(nverts_lines, start=1):
        try:
            k = int(ln.strip())
        except ValueError:
            raise BensonFormatError(f"{nverts_path}: line {i}: non-integer token {ln.strip()!r}") from None
        if k < 1:
            raise BensonFormatError(f"{nverts_path}: line {i}: empty simplex (nverts = {k})")
        nverts.append(k)

    if sum(nverts) != len(simplex_lines):
        raise BensonFormatError(
            f"length mismatch: {nverts_path} declares {sum(nverts)} vertices "
            f"but {simplices_path} has {len(simplex_lines)} lines"
        )

    labels: list[int] = []
    for i, ln in enumerate(simplex_lines, start=1):
        try:
            labels.append(int(ln.strip()))
        except ValueError:
            raise BensonFormatError(f"{simplices_path}: line {i}: non-integer token {ln.strip()!r}") from None

    times: list[float] | None = None
    if times_path is not None:
        time_lines = _read_lines(times_path)
        if len(time_lines) != len(nverts):
            raise BensonFormatError(
                f"length mismatch: {times_path} has {len(time_lines)} lines "
                f"for {len(nverts)} simplices"
            )
        times = []
        for i, ln in enumerate(time_lines, start=1):
            try:
                times.append(float(ln.strip()))
            except ValueError:
                raise BensonFormatError(f"{times_path}: line {i}: non-numeric token {ln.strip()!r}") from None

    remap: dict[int, int] = {}
    dense: list[int] = []
    for lab in labels:
        if lab not in remap:
            remap[lab] = len(remap)
        dense.append(remap[lab])

    hyperedges: list[Hyperedge] = []
    pos = 0
    for j, k in enumerate(nverts):
        verts = frozenset(dense[pos:pos + k])
        pos += k
        hyperedges.append(Hyperedge(verts, time=times[j] if times is not None else None))

    original = [0] * len(remap)
    for lab, d in remap.items():
        original[d] = lab
    return Hypergraph(len(remap), hyperedges, original_labels=original)


def write_benson(hypergraph: Hypergraph, nverts_path, simplices_path, times_path=None) -> None:
    """Write a hypergraph back out in nverts/simplices(/times) form.

    Dense vertex ids are written directly (ascending within each simplex).
    """
    if times_path is not None and not hypergraph.is_timed:
        raise ValueError("cannot write a times file for an untimed hypergraph")
    with open(nverts_path, "w", encoding="ascii", newline="") as fn, \
         open(simplices_path, "w", encoding="ascii", newline="") as fs:
        for f in hypergraph.hyperedges:
            fn.write(f"{len(f)}\n")
            for v in f.sorted_vertices():
                fs.write(f"{v}\n")
    if times_path is not None:
        with open(times_path, "w", encoding="ascii", newline="") as ft:
            for f in hypergraph.hyperedges:
                ft.write(f"{f.time:.17g}\n")
