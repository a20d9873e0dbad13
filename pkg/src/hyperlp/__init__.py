"""Hypergraph link prediction toolkit.

Lifts local node-similarity scores from graphs to hypergraphs through
incidence-matrix functionals, and runs the full experimental pipeline:
data splitting, feature computation, mutual-information analysis,
supervised link prediction, and AUC/rank evaluation.
"""

from .boosting import ClassifierConfig, GradientBoostedTreesClassifier, predict_scores, train_classifier
from .evaluation import (
    EvalResult,
    RankStats,
    classification_split,
    evaluate_combination,
    rank_performance,
    roc_auc,
    standalone_auc,
)
from .features import (
    ComboSpec,
    FeatureTable,
    PairFeatureExtractor,
    Representation,
    compute_features,
    count_combinations,
    feature_columns,
    parse_column,
    select_combination,
)
from .hypergraph import (
    BensonFormatError,
    Graph,
    Hyperedge,
    Hypergraph,
    clique_expand,
    edge_hyperneighbors,
    hyperneighbors,
    load_benson,
    neighbors,
    weighted_clique_expand,
    write_benson,
)
from .mi import BinningSpec, log_bin, mi_report, mutual_information
from .similarity import (
    BasePredictor,
    NormKind,
    SimilarityContext,
    adjacency_score,
    incidence_matrix,
    incidence_score,
    matrix_norm,
    set_similarity,
    weighted_adjacency_score,
)
from .split import (
    PreparedDataset,
    SplitSpec,
    clean_hyperedges,
    load_prepared,
    prepare,
    sample_negatives,
    save_prepared,
    structural_split,
    temporal_split,
)

__version__ = "0.1.0"
