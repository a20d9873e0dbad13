"""Link-prediction evaluation: rank AUC, stratified splits, rank summaries."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .boosting import ClassifierConfig, predict_scores, train_classifier
from .features import ComboSpec, FeatureTable, Representation, column_name, select_combination
from .similarity import BasePredictor


@dataclass(frozen=True)
class EvalResult:
    auc: float
    n_pos: int
    n_neg: int
    combo: ComboSpec

    def __post_init__(self):
        if not np.isfinite(self.auc):
            raise ValueError("AUC must be finite")
        if self.n_pos < 1 or self.n_neg < 1:
            raise ValueError("both classes must be represented")


@dataclass(frozen=True)
class RankStats:
    mean_rank: float
    rank_variance: float


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ascending ranks, ties sharing their average position."""
    values = np.asarray(values)
    _, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    starts = ends - counts
    avg = (starts + ends + 1) / 2.0
    return avg[inverse]


def roc_auc(scores, labels) -> float:
    """Area under the ROC curve via the rank statistic, ties averaged."""
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.shape != y.shape or s.ndim != 1:
        raise ValueError("scores and labels must be equal-length 1-D sequences")
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs at least one positive and one negative label")
    ranks = _average_ranks(s)
    r_pos = float(ranks[y == 1].sum())
    return (r_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def classification_split(table: FeatureTable, ratio: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Stratified row split of a feature table into (train_idx, test_idx).

    Per-class train counts are round(ratio * class size), keeping label
    proportions within one row of the overall ratio.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")
    y = table.labels
    if not ((y == 0).any() and (y == 1).any()):
        raise ValueError("both classes must be present to split")
    rng = np.random.default_rng(seed)
    train_parts, test_parts = [], []
    for cls in (0, 1):
        idx = np.where(y == cls)[0]
        perm = rng.permutation(idx)
        n_train = int(round(ratio * len(idx)))
        train_parts.append(perm[:n_train])
        test_parts.append(perm[n_train:])
    return np.sort(np.concatenate(train_parts)), np.sort(np.concatenate(test_parts))


def standalone_auc(table: FeatureTable, base: BasePredictor, repr_: Representation) -> EvalResult:
    """AUC of a single raw score column over the whole table (no classifier)."""
    scores = table.column(column_name(base, repr_))
    auc = roc_auc(scores, table.labels)
    return EvalResult(
        auc=auc,
        n_pos=int((table.labels == 1).sum()),
        n_neg=int((table.labels == 0).sum()),
        combo=ComboSpec("standalone", repr_.value, base),
    )


def evaluate_combination(
    table: FeatureTable,
    combo: ComboSpec,
    cfg: ClassifierConfig = ClassifierConfig(),
    ratio: float = 0.75,
    split_seed: int = 0,
) -> EvalResult:
    """Train on a stratified split and report held-out AUC for one combination.

    Standalone combos skip the classifier entirely and use the raw column.
    """
    if combo.mode == "standalone":
        return standalone_auc(table, combo.base, Representation.from_token(combo.combo))

    train_idx, test_idx = classification_split(table, ratio, split_seed)
    X, y = select_combination(table, combo)
    model = train_classifier(X[train_idx], y[train_idx], cfg)
    scores = predict_scores(model, X[test_idx])
    y_test = y[test_idx]
    return EvalResult(
        auc=roc_auc(scores, y_test),
        n_pos=int((y_test == 1).sum()),
        n_neg=int((y_test == 0).sum()),
        combo=combo,
    )


def rank_performance(results: Mapping[str, Mapping[str, float]]) -> dict[str, RankStats]:
    """Mean and population variance of each alternative's AUC rank.

    results maps alternative -> (group -> AUC); within every group the
    alternatives are ranked by descending AUC (ties averaged), and ranks
    are then aggregated per alternative across groups.
    """
    alternatives = list(results)
    if not alternatives:
        raise ValueError("no alternatives to rank")
    groups = list(results[alternatives[0]])
    if not groups:
        raise ValueError("no groups to rank over")
    for alt in alternatives:
        if set(results[alt]) != set(groups):
            raise ValueError(f"alternative {alt!r} is missing AUC cells")

    n_alt = len(alternatives)
    ranks = np.empty((len(groups), n_alt))
    for gi, g in enumerate(groups):
        aucs = np.asarray([results[alt][g] for alt in alternatives])
        ranks[gi] = (n_alt + 1) - _average_ranks(aucs)  # descending: best AUC -> rank 1
    return {
        alt: RankStats(float(ranks[:, ai].mean()), float(ranks[:, ai].var()))
        for ai, alt in enumerate(alternatives)
    }


def write_eval_results(path, results: list[EvalResult], seed: int) -> None:
    """Persist evaluation rows as mode,combo,base,auc,n_pos,n_neg,seed."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["mode", "combo", "base", "auc", "n_pos", "n_neg", "seed"])
        for r in results:
            base = r.combo.base.value if r.combo.base is not None else ""
            writer.writerow(
                [r.combo.mode, r.combo.combo, base, f"{r.auc:.17g}", r.n_pos, r.n_neg, seed]
            )


def read_eval_results(path) -> list[dict]:
    with open(path, "r", encoding="ascii", newline="") as fh:
        return list(csv.DictReader(fh))


def write_rank_summary(path, summary: dict[str, RankStats]) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["alternative", "mean_rank", "rank_variance"])
        for alt, stats in summary.items():
            writer.writerow([alt, f"{stats.mean_rank:.17g}", f"{stats.rank_variance:.17g}"])
