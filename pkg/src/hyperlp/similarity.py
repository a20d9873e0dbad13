"""Local similarity scores on graphs and hypergraphs.

Ten set-similarity functions are the shared vocabulary.  On a graph they
score a vertex pair through its two neighborhoods.  On a hypergraph the
same functions score every pair of incident hyperedges, giving a matrix
per vertex pair that a norm (max / avg / L1 / L2) collapses to a number.

Degenerate inputs never raise: any vanishing denominator or empty
(hyper)neighborhood scores 0, so downstream binning and classification
always see finite values.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .hypergraph import Graph, Hypergraph


class BasePredictor(str, enum.Enum):
    """The ten set-similarity kinds, in canonical order."""

    AA = "AA"    # Adamic-Adar
    AS = "AS"    # association strength
    CN = "CN"    # common neighbors
    COS = "Cos"  # cosine / Salton
    PA = "PA"    # preferential attachment
    JC = "JC"    # Jaccard
    MXO = "MxO"  # max overlap
    MNO = "MnO"  # min overlap
    NM = "NM"    # N-measure
    PRN = "Prn"  # Pearson

    @property
    def token(self) -> str:
        return self.value.lower()

    @classmethod
    def from_token(cls, token: str) -> "BasePredictor":
        for p in cls:
            if p.value.lower() == token.lower():
                return p
        valid = ", ".join(p.value for p in cls)
        raise ValueError(f"unknown base predictor {token!r}; valid: {valid}")


class NormKind(str, enum.Enum):
    MAX = "max"
    AVG = "avg"
    L1 = "l1"
    L2 = "l2"


@dataclass(frozen=True)
class SimilarityContext:
    """Side information some similarity kinds need.

    degree_of must cover every element reaching the Adamic-Adar sum (graph
    degrees in adjacency mode, hyperdegrees in incidence mode); it may be
    any integer-indexable (dict or array).  universe_size is the vertex
    count, used by Pearson.
    """

    degree_of: Mapping[int, float] | np.ndarray
    universe_size: int
    strength_of: Mapping[int, float] | np.ndarray | None = None


def set_similarity(pred: BasePredictor, x: Iterable[int], y: Iterable[int], ctx: SimilarityContext) -> float:
    """Score a pair of vertex sets; symmetric, 0 on any degenerate input."""
    xs, ys = set(x), set(y)
    sx, sy = len(xs), len(ys)
    if sx == 0 or sy == 0:
        return 0.0
    inter = xs & ys
    i = len(inter)

    if pred is BasePredictor.CN:
        return float(i)
    if pred is BasePredictor.JC:
        return i / (sx + sy - i)
    if pred is BasePredictor.AS:
        return i / (sx * sy)
    if pred is BasePredictor.COS:
        return i / math.sqrt(sx * sy)
    if pred is BasePredictor.NM:
        return math.sqrt(2.0) * i / math.sqrt(sx * sx + sy * sy)
    if pred is BasePredictor.MNO:
        return i / min(sx, sy)
    if pred is BasePredictor.MXO:
        return i / max(sx, sy)
    if pred is BasePredictor.PA:
        return float(sx * sy)
    if pred is BasePredictor.AA:
        total = 0.0
        for z in sorted(inter):
            d = float(ctx.degree_of[z])
            if d > 1.0:
                total += 1.0 / math.log(d)
        return total
    if pred is BasePredictor.PRN:
        n = ctx.universe_size
        denom_sq = sx * sy * (n - sx) * (n - sy)
        if denom_sq <= 0:
            return 0.0
        return (n * i - sx * sy) / math.sqrt(denom_sq)
    raise ValueError(f"unhandled predictor {pred!r}")


def graph_context(graph: Graph) -> SimilarityContext:
    return SimilarityContext(degree_of=graph.degrees, universe_size=graph.n_vertices)


def hypergraph_context(hypergraph: Hypergraph) -> SimilarityContext:
    return SimilarityContext(degree_of=hypergraph.hyperdegrees, universe_size=hypergraph.n_vertices)


def adjacency_score(pred: BasePredictor, graph: Graph, u: int, v: int) -> float:
    """Score a vertex pair through its graph neighborhoods."""
    if u == v:
        raise ValueError("adjacency score needs two distinct vertices")
    return set_similarity(pred, graph.neighbors(u), graph.neighbors(v), graph_context(graph))


def weighted_adjacency_score(pred: BasePredictor, graph: Graph, u: int, v: int) -> float:
    """Weighted-graph variant of adjacency_score.

    Set sizes become strengths (sum of incident weights), the common part
    becomes sum over common neighbors z of (w(u,z) + w(v,z)) / 2, and
    Adamic-Adar discounts by log strength.  Pearson has no weighted form
    here and falls back to the unweighted score.
    """
    if u == v:
        raise ValueError("adjacency score needs two distinct vertices")
    if not graph.is_weighted:
        raise ValueError("weighted_adjacency_score requires a weighted graph")
    if pred is BasePredictor.PRN:
        return adjacency_score(pred, graph, u, v)

    nu, wu = graph.neighbor_weights(u)
    nv, wv = graph.neighbor_weights(v)
    su = float(wu.sum())
    sv = float(wv.sum())
    if su == 0.0 or sv == 0.0:
        return 0.0
    common, iu, iv = np.intersect1d(nu, nv, assume_unique=True, return_indices=True)
    inter = float(((wu[iu] + wv[iv]) / 2.0).sum())

    if pred is BasePredictor.CN:
        return inter
    if pred is BasePredictor.JC:
        return inter / (su + sv - inter)
    if pred is BasePredictor.AS:
        return inter / (su * sv)
    if pred is BasePredictor.COS:
        return inter / math.sqrt(su * sv)
    if pred is BasePredictor.NM:
        return math.sqrt(2.0) * inter / math.sqrt(su * su + sv * sv)
    if pred is BasePredictor.MNO:
        return inter / min(su, sv)
    if pred is BasePredictor.MXO:
        return inter / max(su, sv)
    if pred is BasePredictor.PA:
        return su * sv
    if pred is BasePredictor.AA:
        strengths = graph.strengths
        total = 0.0
        for z, a, b in zip(common.tolist(), wu[iu].tolist(), wv[iv].tolist()):
            s = float(strengths[z])
            if s > 1.0:
                total += (a + b) / (2.0 * math.log(s))
        return total
    raise ValueError(f"unhandled predictor {pred!r}")


def incidence_matrix(
    pred: BasePredictor,
    hypergraph: Hypergraph,
    u: int,
    v: int,
    ctx: SimilarityContext | None = None,
) -> np.ndarray:
    """Similarity of every incident-hyperedge pair, as an m x n matrix.

    Row i / column j follow the stable hyperedge order of the incident
    lists of u and v.  Either list being empty yields an empty matrix.
    """
    if u == v:
        raise ValueError("incidence matrix needs two distinct vertices")
    if ctx is None:
        ctx = hypergraph_context(hypergraph)
    rows = hypergraph.hyperneighbors(u)
    cols = hypergraph.hyperneighbors(v)
    mat = np.zeros((len(rows), len(cols)), dtype=np.float64)
    for i, f in enumerate(rows):
        for j, g in enumerate(cols):
            mat[i, j] = set_similarity(pred, f.vertices, g.vertices, ctx)
    return mat


def matrix_norm(mat: np.ndarray, norm: NormKind) -> float:
    """Collapse a score matrix to a number; the empty matrix maps to 0.

    Sums run through exact (compensated) summation so the result does not
    depend on entry order; this is the reference the batched scorer is
    tested against.
    """
    m = np.asarray(mat, dtype=np.float64)
    if m.size == 0:
        return 0.0
    if norm is NormKind.MAX:
        return float(m.max())
    entries = m.ravel().tolist()
    if norm is NormKind.AVG:
        return math.fsum(entries) / m.size
    if norm is NormKind.L1:
        return math.fsum(abs(e) for e in entries)
    if norm is NormKind.L2:
        return math.sqrt(math.fsum(e * e for e in entries))
    raise ValueError(f"unhandled norm {norm!r}")


def incidence_score(
    pred: BasePredictor,
    norm: NormKind,
    hypergraph: Hypergraph,
    u: int,
    v: int,
    ctx: SimilarityContext | None = None,
) -> float:
    """Hypergraph similarity of a vertex pair: norm of its incidence matrix."""
    return matrix_norm(incidence_matrix(pred, hypergraph, u, v, ctx), norm)
