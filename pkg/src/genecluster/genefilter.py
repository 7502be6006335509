"""Entropy-based gene scoring and top-N selection.

Genes are ranked by the information gain between their discretized expression
profile and the sample class variable, IG = H(X) + H(Y) - H(X, Y), with all
entropies in bits. Continuous expression rows are discretized per gene with
equal-width bins over the observed [min, max]; the default bin count follows
the Sturges rule, ceil(log2(m)) + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateLabelsError,
    InvalidDistributionError,
    ParameterError,
    ShapeError,
    ValidationError,
)
from .ingest import ClassLabels, ExpressionMatrix

__all__ = [
    "DiscretizationSpec",
    "GeneRanking",
    "entropy",
    "bin_indices",
    "discrete_information_gain",
    "information_gain",
    "rank_and_select",
    "write_ranking",
]

_SUM_TOL = 1e-9


@dataclass(frozen=True)
class DiscretizationSpec:
    """Equal-width binning of a gene row over its observed [min, max]."""

    bin_count: int

    def __post_init__(self):
        if self.bin_count < 1:
            raise ParameterError(f"bin_count must be >= 1, got {self.bin_count}")

    @classmethod
    def sturges(cls, sample_count: int) -> "DiscretizationSpec":
        if sample_count < 1:
            raise ParameterError("sample_count must be >= 1")
        return cls(int(math.ceil(math.log2(sample_count))) + 1)


@dataclass(frozen=True, eq=False)
class GeneRanking:
    """Per-gene information-gain scores plus the descending-score gene order.

    Ties in score are broken by original gene index, ascending, so the
    ranking is deterministic.
    """

    scores: np.ndarray
    order: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=float)
        order = np.asarray(self.order, dtype=np.int64)
        n = scores.shape[0]
        if order.shape != (n,) or sorted(order.tolist()) != list(range(n)):
            raise ValidationError("order must be a permutation of 0..n-1")
        if n and (not np.isfinite(scores).all() or scores.min() < 0):
            raise ValidationError("scores must be finite and non-negative")
        ranked = scores[order]
        if n > 1 and np.any(np.diff(ranked) > 0):
            raise ValidationError("scores along order must be non-increasing")
        scores.flags.writeable = False
        order.flags.writeable = False
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "order", order)


def entropy(distribution) -> float:
    """Shannon entropy in bits of a probability vector, with 0*log2(0) == 0.

    Entries must be non-negative and sum to 1 within 1e-9.
    """
    p = np.asarray(distribution, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidDistributionError("expected a non-empty 1-D probability vector")
    if np.any(p < 0):
        raise InvalidDistributionError("negative probability mass")
    total = float(p.sum())
    if abs(total - 1.0) > _SUM_TOL:
        raise InvalidDistributionError(f"probabilities sum to {total!r}, not 1")
    nz = p[p > 0]
    return max(0.0, float(-np.sum(nz * np.log2(nz))))


def bin_indices(values, bin_count: int) -> np.ndarray:
    """Equal-width bin codes for a 1-D vector over its own [min, max].

    The bin of x is min(B-1, floor((x - lo) * B / (hi - lo))); a constant
    vector lands entirely in bin 0.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1:
        raise ShapeError("bin_indices expects a 1-D vector")
    if bin_count < 1:
        raise ParameterError(f"bin_count must be >= 1, got {bin_count}")
    if v.size == 0:
        return np.zeros(0, dtype=np.int64)
    lo, hi = float(v.min()), float(v.max())
    if hi == lo:
        return np.zeros(v.shape, dtype=np.int64)
    codes = np.floor((v - lo) * bin_count / (hi - lo)).astype(np.int64)
    return np.clip(codes, 0, bin_count - 1)


def _counts_entropy(counts) -> float:
    """Entropy in bits of a (possibly multi-dimensional) count array."""
    c = np.asarray(counts, dtype=float)
    c = c[c > 0]
    p = c / c.sum()
    return float(-np.sum(p * np.log2(p)))


def _ig_from_joint(joint) -> float:
    hx = _counts_entropy(joint.sum(axis=1))
    hy = _counts_entropy(joint.sum(axis=0))
    hxy = _counts_entropy(joint)
    return max(0.0, hx + hy - hxy)


def discrete_information_gain(x, y) -> float:
    """Information gain in bits between two aligned discrete sequences."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.ndim != 1 or x.shape != y.shape:
        raise ShapeError(f"aligned 1-D sequences required, got {x.shape} and {y.shape}")
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    joint = np.zeros((int(xi.max()) + 1, int(yi.max()) + 1))
    np.add.at(joint, (xi, yi), 1.0)
    return _ig_from_joint(joint)


def _class_vector(labels) -> np.ndarray:
    if isinstance(labels, ClassLabels):
        if labels.n_classes < 2:
            raise DegenerateLabelsError("information gain needs at least 2 classes")
        return labels.class_indices()
    y = np.asarray(labels)
    if len(np.unique(y)) < 2:
        raise DegenerateLabelsError("information gain needs at least 2 classes")
    return y


def information_gain(gene_row, labels, spec: DiscretizationSpec) -> float:
    """Information gain in bits between a gene row and the class variable.

    ``labels`` is a :class:`ClassLabels` aligned with the row via its
    companion sample order, or any per-sample sequence of class tags.
    """
    row = np.asarray(gene_row, dtype=float)
    y = _class_vector(labels)
    if row.ndim != 1 or row.shape != y.shape:
        raise ShapeError(f"gene row of length {row.shape} vs {y.shape} labels")
    return discrete_information_gain(bin_indices(row, spec.bin_count), y)


def rank_and_select(
    matrix: ExpressionMatrix,
    labels: ClassLabels,
    spec: DiscretizationSpec,
    top_n: int,
) -> tuple[GeneRanking, ExpressionMatrix]:
    """Rank all genes by information gain and keep the ``top_n`` best.

    The returned sub-matrix holds exactly the top_n genes by descending IG
    (ties by original index), in their original relative order; the sample
    axis is untouched.
    """
    n = matrix.n_genes
    if not 1 <= top_n <= n:
        raise ParameterError(f"top_n must be in 1..{n}, got {top_n}")
    y = _class_vector(labels)
    if y.shape != (matrix.n_samples,):
        raise ValidationError("labels do not cover the matrix's samples")

    bins = spec.bin_count
    n_classes = int(y.max()) + 1
    scores = np.empty(n, dtype=float)
    joint = np.zeros((bins, n_classes))
    for i in range(n):
        joint[:] = 0.0
        np.add.at(joint, (bin_indices(matrix.values[i], bins), y), 1.0)
        scores[i] = _ig_from_joint(joint)

    order = np.argsort(-scores, kind="stable")
    ranking = GeneRanking(scores, order)
    keep = np.sort(order[:top_n])
    selected = ExpressionMatrix(
        tuple(matrix.gene_ids[i] for i in keep),
        matrix.sample_ids,
        matrix.values[keep],
    )
    return ranking, selected


def write_ranking(ranking: GeneRanking, gene_ids, dest) -> None:
    """Dump a ranking as CSV rows of gene_id, ig_bits, rank (1-based)."""
    lines = ["gene_id,ig_bits,rank"]
    for rank, idx in enumerate(ranking.order, start=1):
        lines.append(f"{gene_ids[idx]},{float(ranking.scores[idx])!r},{rank}")
    text = "\n".join(lines) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
