"""Log-binned mutual information between score columns and the link label."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .features import FeatureTable


@dataclass(frozen=True)
class BinningSpec:
    """Base-10 log binning with a dedicated zero bin and mirrored negatives."""

    n_bins: int = 2000
    scheme: str = "log10"

    def __post_init__(self):
        if self.n_bins < 2:
            raise ValueError(f"n_bins must be >= 2, got {self.n_bins}")
        if self.scheme != "log10":
            raise ValueError(f"unknown binning scheme {self.scheme!r}")


def log_bin(values, spec: BinningSpec = BinningSpec()) -> np.ndarray:
    """Assign each value a bin id on a base-10 log scale.

    Positive values get n_bins log-spaced bins between the smallest and the
    largest positive value (a degenerate range collapses to one bin, and
    interior boundaries round up).  Exact zeros share one dedicated bin;
    negative values get the same treatment as positives on their magnitudes,
    in a separate id range.  Bin ids are labels only — any relabeling leaves
    mutual information unchanged.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("cannot bin an empty value list")
    if not np.isfinite(v).all():
        raise ValueError("cannot bin non-finite values")

    ids = np.empty(v.shape, dtype=np.int64)
    n = spec.n_bins

    pos = v > 0
    if pos.any():
        ids[pos] = _log_ids(v[pos], n)
    zero = v == 0
    ids[zero] = n
    neg = v < 0
    if neg.any():
        ids[neg] = n + 1 + _log_ids(-v[neg], n)
    return ids


def _log_ids(magnitudes: np.ndarray, n_bins: int) -> np.ndarray:
    logs = np.log10(magnitudes)
    lo, hi = logs.min(), logs.max()
    if hi == lo:
        return np.zeros(magnitudes.shape, dtype=np.int64)
    idx = np.floor((logs - lo) / (hi - lo) * n_bins).astype(np.int64)
    return np.clip(idx, 0, n_bins - 1)


def mutual_information(bins: Sequence[int], labels: Sequence[int]) -> float:
    """Plug-in mutual information, in bits, between bin ids and 0/1 labels."""
    bins = list(bins)
    labels = list(labels)
    if len(bins) != len(labels):
        raise ValueError(f"length mismatch: {len(bins)} bins vs {len(labels)} labels")
    n = len(bins)
    if n < 1:
        raise ValueError("need at least one sample")
    if any(l not in (0, 1) for l in labels):
        raise ValueError("labels must be 0 or 1")

    joint = Counter(zip(bins, labels))
    marg_b = Counter(bins)
    marg_l = Counter(labels)
    total = 0.0
    for (b, l), c in sorted(joint.items()):
        p_joint = c / n
        total += p_joint * math.log2(c * n / (marg_b[b] * marg_l[l]))
    return total


def mi_report(table: FeatureTable, spec: BinningSpec = BinningSpec()) -> list[tuple[str, float]]:
    """Mutual information of every score column with the label, in table order."""
    labels = table.labels.tolist()
    out = []
    for name in table.columns:
        ids = log_bin(table.column(name), spec)
        out.append((name, mutual_information(ids.tolist(), labels)))
    return out


def write_mi_report(path, report: list[tuple[str, float]]) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["feature", "mi_bits"])
        for name, value in report:
            writer.writerow([name, f"{value:.17g}"])
