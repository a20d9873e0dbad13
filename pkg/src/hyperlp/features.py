"""Per-pair feature table: ten predictors across six representations.

Every scored pair gets one value per (predictor, representation) column:
the unweighted expansion (g), the weighted expansion (w), and the four
norms of the hypergraph incidence matrix (hm, ha, h1, h2) — 60 columns in
the default configuration.  Standalone / micro / macro evaluation modes
are pure projections of this one table.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .hypergraph import Graph, Hypergraph, clique_expand, weighted_clique_expand
from .similarity import BasePredictor, NormKind
from .split import PreparedDataset


class Representation(str, enum.Enum):
    """Which structure a score is computed on, in canonical column order."""

    G = "G"      # unweighted clique expansion
    W = "W"      # weighted clique expansion
    HM = "Hm"    # incidence matrix, max norm
    HA = "Ha"    # incidence matrix, avg norm
    H1 = "H1"    # incidence matrix, L1 norm
    H2 = "H2"    # incidence matrix, L2 norm

    @property
    def token(self) -> str:
        return self.value.lower()

    @property
    def norm(self) -> NormKind | None:
        return _REPR_NORM.get(self)

    @classmethod
    def from_token(cls, token: str) -> "Representation":
        for r in cls:
            if r.value.lower() == token.lower():
                return r
        valid = ", ".join(r.value for r in cls)
        raise ValueError(f"unknown representation {token!r}; valid: {valid}")


_REPR_NORM = {
    Representation.HM: NormKind.MAX,
    Representation.HA: NormKind.AVG,
    Representation.H1: NormKind.L1,
    Representation.H2: NormKind.L2,
}

HYPER_REPRESENTATIONS = (Representation.HM, Representation.HA, Representation.H1, Representation.H2)

# representation bundles selectable in micro/macro modes
COMBO_TAGS: dict[str, tuple[Representation, ...]] = {
    "G": (Representation.G,),
    "W": (Representation.W,),
    "H": HYPER_REPRESENTATIONS,
    "GH": (Representation.G,) + HYPER_REPRESENTATIONS,
    "WH": (Representation.W,) + HYPER_REPRESENTATIONS,
}

COMBO_MODES = ("standalone", "micro", "macro")


def column_name(pred: BasePredictor, repr_: Representation) -> str:
    return f"{pred.token}_{repr_.token}"


def parse_column(name: str) -> tuple[BasePredictor, Representation]:
    """Inverse of column_name."""
    pred_token, _, repr_token = name.rpartition("_")
    return BasePredictor.from_token(pred_token), Representation.from_token(repr_token)


def feature_columns(
    predictors: Sequence[BasePredictor] = tuple(BasePredictor),
    representations: Sequence[Representation] = tuple(Representation),
) -> tuple[str, ...]:
    """Canonical column order: predictors outer, representations inner."""
    return tuple(column_name(p, r) for p in predictors for r in representations)


@dataclass(frozen=True)
class ComboSpec:
    """Which feature columns an evaluation run uses.

    standalone: one (base, representation) column; combo names the
    representation.  micro: one base predictor across a representation
    bundle (G, W, H, GH, WH).  macro: all ten predictors across a bundle.
    """

    mode: str
    combo: str
    base: BasePredictor | None = None

    def __post_init__(self):
        if self.mode not in COMBO_MODES:
            raise ValueError(f"mode must be one of {COMBO_MODES}, got {self.mode!r}")
        if self.mode == "standalone":
            if self.base is None:
                raise ValueError("standalone mode requires a base predictor")
            Representation.from_token(self.combo)
        else:
            if self.combo not in COMBO_TAGS:
                valid = ", ".join(COMBO_TAGS)
                raise ValueError(f"unknown combo {self.combo!r}; valid: {valid}")
            if self.mode == "micro" and self.base is None:
                raise ValueError("micro mode requires a base predictor")
            if self.mode == "macro" and self.base is not None:
                raise ValueError("macro mode takes no base predictor")

    def columns(self) -> tuple[str, ...]:
        if self.mode == "standalone":
            return (column_name(self.base, Representation.from_token(self.combo)),)
        reps = COMBO_TAGS[self.combo]
        if self.mode == "micro":
            return tuple(column_name(self.base, r) for r in reps)
        return tuple(column_name(p, r) for p in BasePredictor for r in reps)

    def label(self) -> str:
        if self.mode == "standalone":
            return f"std-{self.combo}"
        return f"{'mic' if self.mode == 'micro' else 'mac'}-{self.combo}"


class CombinationCounts(NamedTuple):
    standalone: int
    micro: int
    macro: int


def count_combinations() -> CombinationCounts:
    """How many distinct evaluations each mode offers."""
    standalone = len(BasePredictor) * len(Representation)
    micro = len(BasePredictor) * len(COMBO_TAGS)
    macro = len(COMBO_TAGS)
    return CombinationCounts(standalone, micro, macro)


class _IncidenceScorer:
    """Batched incidence scores: one intersection pass shared by all predictors.

    For a pair (u, v) the intersection-count and Adamic-Adar matrices over
    the incident hyperedges are built with two sparse products; every
    predictor's matrix is then a cheap elementwise transform of those, and
    the four norms collapse each to a number.  The per-vertex incidence
    slices are cached at construction so the per-pair work is only the two
    products plus elementwise math.
    """

    def __init__(self, hypergraph: Hypergraph):
        self.h = hypergraph
        b = hypergraph.incidence
        hd = hypergraph.hyperdegrees.astype(np.float64)
        with np.errstate(divide="ignore"):
            aa_w = np.where(hd > 1.0, 1.0 / np.log(hd), 0.0)
        b_aa = b.multiply(aa_w[np.newaxis, :]).tocsr()
        b_aa.sort_indices()
        sizes = hypergraph.hyperedge_sizes.astype(np.float64)
        self.n = float(hypergraph.n_vertices)

        self.rows: list[sparse.csr_matrix] = []
        self.rows_aa: list[sparse.csr_matrix] = []
        self.cols_t: list[sparse.csr_matrix] = []
        self.sizes_of: list[np.ndarray] = []
        for u in range(hypergraph.n_vertices):
            hu = hypergraph.hyperneighbor_indices(u)
            block = b[hu]
            self.rows.append(block)
            self.rows_aa.append(b_aa[hu])
            self.cols_t.append(block.T.tocsr())
            self.sizes_of.append(sizes[hu])

    def score_block(self, u: int, v: int) -> np.ndarray:
        """(10, 4) scores: predictors in canonical order x (max, avg, l1, l2)."""
        su = self.sizes_of[u][:, np.newaxis]
        sv = self.sizes_of[v][np.newaxis, :]
        if su.size == 0 or sv.size == 0:
            return np.zeros((len(BasePredictor), 4))
        cv = self.cols_t[v]
        m = (self.rows[u] @ cv).toarray()
        aa = (self.rows_aa[u] @ cv).toarray()

        n = self.n
        pa = su * sv
        denom_sq = pa * (n - su) * (n - sv)
        prn = np.zeros_like(m)
        np.divide(n * m - su * sv, np.sqrt(denom_sq), out=prn, where=denom_sq > 0)

        mats = {
            BasePredictor.AA: aa,
            BasePredictor.AS: m / (su * sv),
            BasePredictor.CN: m,
            BasePredictor.COS: m / np.sqrt(su * sv),
            BasePredictor.PA: pa,
            BasePredictor.JC: m / (su + sv - m),
            BasePredictor.MXO: m / np.maximum(su, sv),
            BasePredictor.MNO: m / np.minimum(su, sv),
            BasePredictor.NM: np.sqrt(2.0) * m / np.sqrt(su * su + sv * sv),
            BasePredictor.PRN: prn,
        }
        out = np.empty((len(BasePredictor), 4))
        for i, pred in enumerate(BasePredictor):
            x = mats[pred]
            out[i, 0] = x.max()
            out[i, 1] = x.mean()
            out[i, 2] = np.abs(x).sum()
            out[i, 3] = np.sqrt((x * x).sum())
        return out


class _ExpansionScorer:
    """Per-pair score vectors on an expansion graph, shared across predictors.

    Computes the neighborhood intersection once per pair and derives all
    ten predictor values from (intersection, sizes, Adamic-Adar sum), in
    both the unweighted and the weighted reading.
    """

    def __init__(self, graph: Graph, weighted: bool):
        self.weighted = weighted
        self.n = graph.n_vertices
        adj = graph.adjacency
        self.neigh = [graph.neighbor_array(z) for z in range(self.n)]
        lo_hi = adj.indptr
        self.w = [adj.data[lo_hi[z]:lo_hi[z + 1]] for z in range(self.n)]
        self.deg = graph.degrees.astype(np.float64)
        sizes = graph.strengths if weighted else self.deg
        self.size_of = sizes.astype(np.float64)
        with np.errstate(divide="ignore"):
            self.inv_log_size = np.where(self.size_of > 1.0, 1.0 / np.log(self.size_of), 0.0)

    def score_vector(self, u: int, v: int) -> np.ndarray:
        su = float(self.size_of[u])
        sv = float(self.size_of[v])
        out = np.zeros(len(BasePredictor))
        if su == 0.0 or sv == 0.0:
            return out
        common, iu, iv = np.intersect1d(self.neigh[u], self.neigh[v],
                                        assume_unique=True, return_indices=True)
        if self.weighted:
            pair_w = (self.w[u][iu] + self.w[v][iv]) / 2.0
            inter = float(pair_w.sum())
            aa = float((pair_w * self.inv_log_size[common]).sum())
        else:
            inter = float(len(common))
            aa = float(self.inv_log_size[common].sum())

        out[_PRED_INDEX[BasePredictor.AA]] = aa
        out[_PRED_INDEX[BasePredictor.AS]] = inter / (su * sv)
        out[_PRED_INDEX[BasePredictor.CN]] = inter
        out[_PRED_INDEX[BasePredictor.COS]] = inter / np.sqrt(su * sv)
        out[_PRED_INDEX[BasePredictor.PA]] = su * sv
        out[_PRED_INDEX[BasePredictor.JC]] = inter / (su + sv - inter)
        out[_PRED_INDEX[BasePredictor.MXO]] = inter / max(su, sv)
        out[_PRED_INDEX[BasePredictor.MNO]] = inter / min(su, sv)
        out[_PRED_INDEX[BasePredictor.NM]] = np.sqrt(2.0) * inter / np.sqrt(su * su + sv * sv)
        # Pearson has no weighted reading; it always uses plain degrees
        du, dv = float(self.deg[u]), float(self.deg[v])
        cn_plain = float(len(common))
        d2 = du * dv * (self.n - du) * (self.n - dv)
        if d2 > 0:
            out[_PRED_INDEX[BasePredictor.PRN]] = (self.n * cn_plain - du * dv) / np.sqrt(d2)
        return out


_PRED_INDEX = {p: i for i, p in enumerate(BasePredictor)}


class PairFeatureExtractor(BaseEstimator, TransformerMixin):
    """Turn vertex pairs into similarity feature vectors.

    Fit on a (train) hypergraph; transform an (n, 2) array of vertex pairs
    into an (n, n_columns) score matrix.  Columns follow the canonical
    order of feature_columns(predictors, representations).

    Parameters
    ----------
    predictors : sequence of BasePredictor, optional
        Defaults to all ten.
    representations : sequence of Representation, optional
        Defaults to all six.
    """

    def __init__(self, predictors=None, representations=None):
        self.predictors = predictors
        self.representations = representations

    def _resolved(self) -> tuple[tuple[BasePredictor, ...], tuple[Representation, ...]]:
        preds = tuple(self.predictors) if self.predictors is not None else tuple(BasePredictor)
        reps = tuple(self.representations) if self.representations is not None else tuple(Representation)
        return preds, reps

    def fit(self, hypergraph: Hypergraph, y=None):
        if not isinstance(hypergraph, Hypergraph):
            raise TypeError("fit expects a Hypergraph")
        preds, reps = self._resolved()
        self.hypergraph_ = hypergraph
        self.graph_ = self.weighted_graph_ = None
        self.scorer_ = self.graph_scorer_ = self.weighted_scorer_ = None
        if Representation.G in reps:
            self.graph_ = clique_expand(hypergraph)
            self.graph_scorer_ = _ExpansionScorer(self.graph_, weighted=False)
        if Representation.W in reps:
            self.weighted_graph_ = weighted_clique_expand(hypergraph)
            self.weighted_scorer_ = _ExpansionScorer(self.weighted_graph_, weighted=True)
        if any(r in _REPR_NORM for r in reps):
            self.scorer_ = _IncidenceScorer(hypergraph)
        self.columns_ = feature_columns(preds, reps)
        self.n_features_out_ = len(self.columns_)
        return self

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        check_is_fitted(self, "columns_")
        return np.asarray(self.columns_, dtype=object)

    def transform(self, pairs) -> np.ndarray:
        check_is_fitted(self, "columns_")
        pairs = np.asarray(pairs, dtype=np.int64)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ValueError(f"pairs must be an (n, 2) array, got shape {pairs.shape}")
        n_v = self.hypergraph_.n_vertices
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n_v):
            raise ValueError(f"pair vertices must lie in 0..{n_v - 1}")
        if np.any(pairs[:, 0] == pairs[:, 1]):
            raise ValueError("pairs may not repeat a vertex")

        preds, reps = self._resolved()
        norm_col = {r: i for i, r in enumerate(HYPER_REPRESENTATIONS)}
        need_hyper = any(r in norm_col for r in reps)
        need_graph = Representation.G in reps
        need_weighted = Representation.W in reps

        out = np.zeros((len(pairs), len(self.columns_)))
        for row, (u, v) in enumerate(pairs.tolist()):
            block = self.scorer_.score_block(u, v) if need_hyper else None
            g_vec = self.graph_scorer_.score_vector(u, v) if need_graph else None
            w_vec = self.weighted_scorer_.score_vector(u, v) if need_weighted else None
            col = 0
            for p in preds:
                pi = _PRED_INDEX[p]
                for r in reps:
                    if r is Representation.G:
                        out[row, col] = g_vec[pi]
                    elif r is Representation.W:
                        out[row, col] = w_vec[pi]
                    else:
                        out[row, col] = block[pi, norm_col[r]]
                    col += 1
        return out


@dataclass
class FeatureTable:
    """Scored pairs with labels; one row per pair, one column per score."""

    pairs: np.ndarray    # (n, 2) int
    labels: np.ndarray   # (n,) int, 1 = link
    scores: np.ndarray   # (n, n_columns) float
    columns: tuple[str, ...]

    def __post_init__(self):
        self.pairs = np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)
        self.labels = np.asarray(self.labels, dtype=np.int64).ravel()
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if self.scores.shape != (len(self.pairs), len(self.columns)):
            raise ValueError("scores shape does not match pairs/columns")
        if len(self.labels) != len(self.pairs):
            raise ValueError("labels length does not match pairs")
        if not np.isfinite(self.scores).all():
            raise ValueError("feature table contains non-finite scores")

    @property
    def n_rows(self) -> int:
        return len(self.pairs)

    def column(self, name: str) -> np.ndarray:
        try:
            j = self.columns.index(name)
        except ValueError:
            raise KeyError(f"no column {name!r}") from None
        return self.scores[:, j]

    def score_for(self, u: int, v: int, name: str) -> float:
        """Value of one column at the row for pair (u, v)."""
        a, b = (u, v) if u < v else (v, u)
        hit = np.where((self.pairs[:, 0] == a) & (self.pairs[:, 1] == b))[0]
        if len(hit) == 0:
            raise KeyError(f"pair ({u}, {v}) not in table")
        return float(self.column(name)[hit[0]])

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="ascii", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["u", "v", "label", *self.columns])
            for i in range(self.n_rows):
                row = [str(self.pairs[i, 0]), str(self.pairs[i, 1]), str(self.labels[i])]
                row += [f"{x:.17g}" for x in self.scores[i]]
                writer.writerow(row)

    @classmethod
    def read_csv(cls, path) -> "FeatureTable":
        with open(path, "r", encoding="ascii", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header[:3] != ["u", "v", "label"]:
                raise ValueError(f"not a feature table (header starts {header[:3]})")
            columns = tuple(header[3:])
            pairs, labels, scores = [], [], []
            for row in reader:
                pairs.append((int(row[0]), int(row[1])))
                labels.append(int(row[2]))
                scores.append([float(x) for x in row[3:]])
        return cls(
            np.asarray(pairs, dtype=np.int64).reshape(-1, 2),
            np.asarray(labels, dtype=np.int64),
            np.asarray(scores, dtype=np.float64).reshape(-1, len(columns)),
            columns,
        )


def compute_features(prepared: PreparedDataset) -> FeatureTable:
    """Score every test link and non-link against the train hypergraph."""
    links = set(prepared.test_links)
    nonlinks = set(prepared.test_nonlinks)
    if links & nonlinks:
        raise ValueError("test links and non-links overlap")

    pairs = list(prepared.test_links) + list(prepared.test_nonlinks)
    labels = [1] * len(prepared.test_links) + [0] * len(prepared.test_nonlinks)
    extractor = PairFeatureExtractor().fit(prepared.train_hypergraph)
    if pairs:
        scores = extractor.transform(np.asarray(pairs, dtype=np.int64))
    else:
        scores = np.zeros((0, len(extractor.columns_)))
    return FeatureTable(
        np.asarray(pairs, dtype=np.int64).reshape(-1, 2),
        np.asarray(labels, dtype=np.int64),
        scores,
        extractor.columns_,
    )


def select_combination(table: FeatureTable, spec: ComboSpec) -> tuple[np.ndarray, np.ndarray]:
    """Project the table onto a combination's columns; returns (X, y)."""
    idx = [table.columns.index(c) for c in spec.columns()]
    return table.scores[:, idx], table.labels.copy()
