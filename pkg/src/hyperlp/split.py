"""Train/test preparation for link prediction on hypergraphs.

Two split modes produce the same kind of problem instance: a train
hypergraph, the train edges of its expansion, test links to predict and
sampled test non-links.  Temporal mode cuts the timeline; structural mode
removes random expansion edges and then strips those pairs out of every
train hyperedge so the train hypergraph cannot leak a test link.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .hypergraph import Hyperedge, Hypergraph, canonical_edge, clique_expand

Edge = tuple[int, int]

MODES = ("temporal", "structural")


@dataclass(frozen=True)
class SplitSpec:
    """Parameters of one split: mode, test fraction, negatives multiplier, seed."""

    mode: str
    rho: float = 0.2
    p: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must be in [0, 1], got {self.rho}")
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")


@dataclass(frozen=True)
class PreparedDataset:
    """One link-prediction problem instance.

    test_links and test_nonlinks are the pairs to score; train_hypergraph
    (and its expansions) is the only structure a predictor may look at.
    """

    train_hypergraph: Hypergraph
    train_edges: tuple[Edge, ...]
    test_links: tuple[Edge, ...]
    test_nonlinks: tuple[Edge, ...]

    def __post_init__(self):
        tr, te, non = set(self.train_edges), set(self.test_links), set(self.test_nonlinks)
        if te & tr:
            raise ValueError("test links overlap train edges")
        if non & (tr | te):
            raise ValueError("test non-links overlap known edges")

    @property
    def n_pairs(self) -> int:
        return len(self.test_links) + len(self.test_nonlinks)


def _distinct_times(hypergraph: Hypergraph) -> list[float]:
    return sorted({float(f.time) for f in hypergraph.hyperedges})


def temporal_split(hypergraph: Hypergraph, rho: float) -> tuple[tuple[Hyperedge, ...], tuple[Edge, ...], tuple[Edge, ...]]:
    """Split a timed hypergraph at a timeline cut.

    The distinct timestamps t_1 < ... < t_nT are cut at index
    tau = ceil((1 - rho) * nT); everything stamped at or before t_tau is
    train, everything after is test.  Expansion edges are stamped with the
    earliest containing hyperedge, so a test link is a pair whose first
    co-occurrence falls in the test period.
    """
    if not hypergraph.is_timed:
        raise ValueError("temporal split requires a timed hypergraph")
    timeline = _distinct_times(hypergraph)
    if len(timeline) < 2:
        raise ValueError("temporal split needs at least 2 distinct timestamps")
    tau = math.ceil((1.0 - rho) * len(timeline))
    if tau >= len(timeline):
        raise ValueError(f"empty test period: rho={rho} keeps all {len(timeline)} timestamps in train")
    if tau < 1:
        raise ValueError(f"empty train period: rho={rho} puts all timestamps in test")
    threshold = timeline[tau - 1]

    graph = clique_expand(hypergraph)
    e_tr = tuple(sorted(e for e in graph.edges if graph.time[e] <= threshold))
    tr_set = set(e_tr)
    e_te = tuple(sorted(e for e in graph.edges if graph.time[e] > threshold and e not in tr_set))
    f_tr = tuple(f for f in hypergraph.hyperedges if float(f.time) <= threshold)
    return f_tr, e_tr, e_te


def temporal_threshold(hypergraph: Hypergraph, rho: float) -> float:
    """The cut timestamp a temporal split at this rho uses (for reporting)."""
    timeline = _distinct_times(hypergraph)
    tau = math.ceil((1.0 - rho) * len(timeline))
    return timeline[tau - 1]


def structural_split(hypergraph: Hypergraph, rho: float, seed: int) -> tuple[tuple[Hyperedge, ...], tuple[Edge, ...], tuple[Edge, ...]]:
    """Remove ceil(rho * m) random expansion edges as test links.

    The train hyperedges are cleaned afterwards so that no test link
    survives as a subset of any of them.
    """
    graph = clique_expand(hypergraph)
    m = graph.n_edges
    if m < 1:
        raise ValueError("structural split requires at least one expansion edge")
    m_te = math.ceil(rho * m)
    if m_te == 0:
        raise ValueError(f"empty test set: rho={rho} removes no edges")
    if m_te >= m:
        raise ValueError(f"no train edges left: rho={rho} removes all {m} edges")

    rng = np.random.default_rng(seed)
    picked = rng.choice(m, size=m_te, replace=False)
    all_edges = graph.edge_list
    e_te = tuple(sorted(all_edges[i] for i in picked))
    te_set = set(e_te)
    e_tr = tuple(e for e in all_edges if e not in te_set)
    f_tr = clean_hyperedges(hypergraph.hyperedges, e_te)
    return f_tr, e_tr, e_te


def clean_hyperedges(hyperedges: Sequence[Hyperedge], test_edges: Iterable[Edge]) -> tuple[Hyperedge, ...]:
    """Strip test pairs out of hyperedges without discarding whole hyperedges.

    Per hyperedge, vertices are removed greedily: while any test edge is
    still contained, drop the vertex covering the most contained test edges
    (ties broken toward the smallest vertex id).  Hyperedges containing no
    test edge pass through unchanged; results that shrink to a single
    vertex are kept.
    """
    te_set = {canonical_edge(*e) for e in test_edges}
    out: list[Hyperedge] = []
    for f in hyperedges:
        verts = set(f.vertices)
        contained = _contained_test_edges(verts, te_set)
        if not contained:
            out.append(f)
            continue
        while contained:
            cover: dict[int, int] = {}
            for (a, b) in contained:
                cover[a] = cover.get(a, 0) + 1
                cover[b] = cover.get(b, 0) + 1
            drop = min(cover, key=lambda v: (-cover[v], v))
            verts.discard(drop)
            contained = [e for e in contained if e[0] in verts and e[1] in verts]
        if verts:
            out.append(Hyperedge(frozenset(verts), time=f.time))
    return tuple(out)


def _contained_test_edges(vertices: set[int], test_edges: set[Edge]) -> list[Edge]:
    return [e for e in itertools.combinations(sorted(vertices), 2) if e in test_edges]


def sample_negatives(hypergraph: Hypergraph, known_edges: Iterable[Edge], k: int, seed: int) -> tuple[Edge, ...]:
    """Sample k vertex pairs that are not edges, uniformly without replacement.

    Capped (with a warning) at the number of available non-links.  Small
    pair universes are enumerated exactly; large ones are rejection-sampled.
    Either way the result is a deterministic function of the seed.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = hypergraph.n_vertices
    known = {canonical_edge(*e) for e in known_edges}
    total = n * (n - 1) // 2
    available = total - len(known)
    if available <= 0:
        raise ValueError("no non-links exist: the expansion is a complete graph")

    rng = np.random.default_rng(seed)
    if k >= available:
        if k > available:
            warnings.warn(
                f"requested {k} negative samples but only {available} non-links exist; capping",
                stacklevel=2,
            )
        chosen = [e for e in itertools.combinations(range(n), 2) if e not in known]
        return tuple(sorted(chosen))

    if total <= 5_000_000:
        candidates = [e for e in itertools.combinations(range(n), 2) if e not in known]
        idx = rng.choice(len(candidates), size=k, replace=False)
        return tuple(sorted(candidates[i] for i in idx))

    # sparse regime: rejection sampling over random pairs
    selected: set[Edge] = set()
    ordered: list[Edge] = []
    while len(ordered) < k:
        us = rng.integers(0, n, size=4 * k)
        vs = rng.integers(0, n, size=4 * k)
        for u, v in zip(us.tolist(), vs.tolist()):
            if u == v:
                continue
            e = (u, v) if u < v else (v, u)
            if e in known or e in selected:
                continue
            selected.add(e)
            ordered.append(e)
            if len(ordered) == k:
                break
    return tuple(sorted(ordered))


def prepare(hypergraph: Hypergraph, spec: SplitSpec) -> PreparedDataset:
    """Run the full preparation: split, clean, and sample negatives.

    Negative candidates exclude every expansion edge of the input
    hypergraph (train- and test-period alike).  The split seed and the
    negative-sampling seed are derived independently from spec.seed.
    """
    split_seed, neg_seed = np.random.SeedSequence(spec.seed).spawn(2)
    if spec.mode == "temporal":
        f_tr, e_tr, e_te = temporal_split(hypergraph, spec.rho)
    else:
        f_tr, e_tr, e_te = structural_split(hypergraph, spec.rho, split_seed)

    if e_te:
        full_edges = clique_expand(hypergraph).edges
        nonlinks = sample_negatives(hypergraph, full_edges, spec.p * len(e_te), neg_seed)
    else:
        nonlinks = ()

    train_h = Hypergraph(hypergraph.n_vertices, f_tr, original_labels=hypergraph.original_labels)
    return PreparedDataset(train_h, tuple(e_tr), tuple(e_te), tuple(nonlinks))


def _write_edge_file(path: Path, edges: Iterable[Edge]) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        for u, v in edges:
            fh.write(f"{u} {v}\n")


def _read_edge_file(path: Path) -> tuple[Edge, ...]:
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln:
                continue
            u, v = ln.split()
            out.append((int(u), int(v)))
    return tuple(out)


def save_prepared(prepared: PreparedDataset, out_dir, extra_meta: dict | None = None) -> None:
    """Persist a prepared dataset as a directory of plain-text artifacts."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    h = prepared.train_hypergraph
    with open(out / "train_hyperedges.txt", "w", encoding="ascii", newline="") as fh:
        for f in h.hyperedges:
            fh.write(" ".join(str(v) for v in f.sorted_vertices()) + "\n")
    _write_edge_file(out / "train_edges.txt", prepared.train_edges)
    _write_edge_file(out / "test_links.txt", prepared.test_links)
    _write_edge_file(out / "test_nonlinks.txt", prepared.test_nonlinks)
    if h.original_labels is not None:
        with open(out / "vertex_labels.txt", "w", encoding="ascii", newline="") as fh:
            for lab in h.original_labels:
                fh.write(f"{lab}\n")
    meta = {
        "n_vertices": h.n_vertices,
        "n_train_hyperedges": h.n_hyperedges,
        "n_train_edges": len(prepared.train_edges),
        "n_test_links": len(prepared.test_links),
        "n_test_nonlinks": len(prepared.test_nonlinks),
    }
    if extra_meta:
        meta.update(extra_meta)
    with open(out / "split_meta.json", "w", encoding="ascii", newline="") as fh:
        fh.write(json.dumps(meta, sort_keys=True, indent=2) + "\n")


def load_prepared(in_dir) -> tuple[PreparedDataset, dict]:
    """Load a prepared dataset written by save_prepared."""
    src = Path(in_dir)
    meta_path = src / "split_meta.json"
    if not meta_path.exists():
        raise FileNotFoundError(f"not a prepared-split directory (no split_meta.json): {src}")
    with open(meta_path, "r", encoding="ascii") as fh:
        meta = json.load(fh)
    n = int(meta["n_vertices"])

    hyperedges = []
    with open(src / "train_hyperedges.txt", "r", encoding="ascii") as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln:
                continue
            hyperedges.append(Hyperedge(frozenset(int(t) for t in ln.split())))
    labels = None
    labels_path = src / "vertex_labels.txt"
    if labels_path.exists():
        with open(labels_path, "r", encoding="ascii") as fh:
            labels = [int(ln.strip()) for ln in fh if ln.strip()]
    train_h = Hypergraph(n, hyperedges, original_labels=labels)
    prepared = PreparedDataset(
        train_h,
        _read_edge_file(src / "train_edges.txt"),
        _read_edge_file(src / "test_links.txt"),
        _read_edge_file(src / "test_nonlinks.txt"),
    )
    return prepared, meta
