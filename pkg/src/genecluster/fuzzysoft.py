"""Fuzzification with S/Z-shaped membership splines and soft-set similarity.

A matrix is fuzzified one sample column at a time: the column minimum and
maximum become the spline knots a and b, so every column is mapped onto the
full [0, 1] membership range. Similarity between membership vectors is

    sim(x, z) = 1 - sum_j |x_j - z_j| / sum_j (x_j + z_j)

with the all-zero pair defined as perfectly similar (both vectors identical).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, ShapeError, ValidationError

__all__ = [
    "MembershipShape",
    "MembershipMatrix",
    "membership",
    "fuzzify",
    "similarity",
    "similarity_profile",
]

KINDS = ("s", "z")


@dataclass(frozen=True)
class MembershipShape:
    """A rising (s) or falling (z) piecewise-quadratic spline between knots a < b.

    Degenerate knots (a == b, from a constant column) make the function the
    constant 1 for either kind.
    """

    kind: str
    a: float
    b: float

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in KINDS:
            raise ParameterError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.a > self.b:
            raise ParameterError(f"knots must satisfy a <= b, got a={self.a}, b={self.b}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))


@dataclass(frozen=True, eq=False)
class MembershipMatrix:
    """A fuzzified matrix: same identifiers as its source, every entry in [0, 1]."""

    gene_ids: tuple[str, ...]
    sample_ids: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        gene_ids = tuple(str(g) for g in self.gene_ids)
        sample_ids = tuple(str(s) for s in self.sample_ids)
        values = np.array(self.values, dtype=float)
        if values.size == 0:
            values = values.reshape(len(gene_ids), len(sample_ids))
        if values.ndim != 2 or values.shape != (len(gene_ids), len(sample_ids)):
            raise ValidationError(
                f"value array of shape {values.shape} does not match "
                f"{len(gene_ids)} gene ids x {len(sample_ids)} sample ids"
            )
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise ValidationError("membership degrees must lie in [0, 1]")
        values.flags.writeable = False
        object.__setattr__(self, "gene_ids", gene_ids)
        object.__setattr__(self, "sample_ids", sample_ids)
        object.__setattr__(self, "values", values)

    @property
    def n_genes(self) -> int:
        return len(self.gene_ids)

    @property
    def n_samples(self) -> int:
        return len(self.sample_ids)

    def row(self, i: int) -> np.ndarray:
        return self.values[i]


def _s_value(x: float, a: float, b: float) -> float:
    if x <= a:
        return 0.0
    if x >= b:
        return 1.0
    span = b - a
    if x < (a + b) / 2.0:
        return 2.0 * ((x - a) / span) ** 2
    return 1.0 - 2.0 * ((x - b) / span) ** 2


def membership(x: float, shape: MembershipShape) -> float:
    """Membership degree of x under the given spline; total on all reals."""
    if shape.a == shape.b:
        return 1.0
    s = _s_value(float(x), shape.a, shape.b)
    return s if shape.kind == "s" else 1.0 - s


def fuzzify(matrix, kind: str = "s") -> MembershipMatrix:
    """Fuzzify a matrix column-wise, knots at each sample column's min and max.

    An s-shaped run maps each column's minimum to 0 and maximum to 1; a
    z-shaped run mirrors that. Constant columns map to all-ones.
    """
    kind = str(kind).lower()
    if kind not in KINDS:
        raise ParameterError(f"kind must be one of {KINDS}, got {kind!r}")
    vals = matrix.values
    if vals.size == 0:
        return MembershipMatrix(matrix.gene_ids, matrix.sample_ids, vals.copy())

    lo = vals.min(axis=0)
    hi = vals.max(axis=0)
    span = hi - lo
    safe = np.where(span > 0, span, 1.0)
    mid = (lo + hi) / 2.0
    rising = 2.0 * ((vals - lo) / safe) ** 2
    falling = 1.0 - 2.0 * ((vals - hi) / safe) ** 2
    s = np.select([vals <= lo, vals < mid, vals < hi], [0.0, rising, falling], default=1.0)
    out = s if kind == "s" else 1.0 - s
    out = np.where(span > 0, out, 1.0)
    return MembershipMatrix(matrix.gene_ids, matrix.sample_ids, out)


def similarity(x, z) -> float:
    """Soft-set similarity of two equal-length membership vectors."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.ndim != 1 or z.ndim != 1 or x.shape != z.shape:
        raise ShapeError(f"equal-length vectors required, got {x.shape} and {z.shape}")
    den = float(np.sum(x + z))
    if den == 0.0:
        return 1.0
    return float(1.0 - np.sum(np.abs(x - z)) / den)


def similarity_profile(gene, centroids) -> np.ndarray:
    """Similarity of one membership vector against each of k centroid rows."""
    gene = np.asarray(gene, dtype=float)
    centroids = np.asarray(centroids, dtype=float)
    if gene.ndim != 1 or centroids.ndim != 2 or centroids.shape[1] != gene.shape[0]:
        raise ShapeError(
            f"centroid rows of length {gene.shape[0]} required, got {centroids.shape}"
        )
    num = np.abs(centroids - gene).sum(axis=1)
    den = (centroids + gene).sum(axis=1)
    return np.where(den > 0, 1.0 - num / np.where(den > 0, den, 1.0), 1.0)
