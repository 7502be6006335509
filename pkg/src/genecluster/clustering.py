"""Partitional clustering engines over gene rows.

Three engines share initialization (k distinct rows drawn without
replacement), convergence (max centroid coordinate displacement <= tol, or
max_iter), and the rough approximation bookkeeping:

* ``kmeans``        - crisp nearest-centroid clustering, Euclidean distance.
* ``rough_kmeans``  - lower/upper approximations from a distance-ratio test
                      (d_h / d_best <= epsilon, epsilon >= 1) and centroids
                      as a weighted blend of lower and boundary means.
* ``fsrk_kmeans``   - the soft-similarity mirror: membership rows, a
                      similarity-ratio test (S_h / S_best >= epsilon,
                      0 < epsilon <= 1), and the same weighted centroids.

Membership bookkeeping obeys the rough-set axioms: lower[h] is a subset of
upper[h]; a gene is in at most one lower approximation; a gene in a lower
approximation is in no other upper approximation; a gene in no lower
approximation is in at least two upper approximations; the upper sets cover
all genes. Exact distance/similarity ties go to the lowest cluster index
before the ratio test, so a tied competitor never widens the boundary; with
epsilon at its crisp setting every gene therefore lands in exactly one lower
approximation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError, ShapeError

__all__ = [
    "RoughParams",
    "CrispClustering",
    "RoughClustering",
    "DEFAULT_ROUGH_EPSILON",
    "DEFAULT_FSRK_EPSILON",
    "init_centroids",
    "kmeans",
    "rough_assign",
    "rough_centroids",
    "rough_kmeans",
    "fsrk_assign",
    "fsrk_kmeans",
]

DEFAULT_ROUGH_EPSILON = 1.2
DEFAULT_FSRK_EPSILON = 0.95

_WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class RoughParams:
    """Shared run parameters for all three engines.

    ``epsilon`` is the ratio threshold: >= 1 for the distance rule
    (rough_kmeans), in (0, 1] for the similarity rule (fsrk_kmeans), ignored
    by plain kmeans. Leave it None to take the engine's default.
    """

    k: int
    w_lower: float = 0.7
    w_upper: float = 0.3
    epsilon: float | None = None
    max_iter: int = 100
    tol: float = 1e-6
    seed: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"k must be >= 1, got {self.k}")
        for name, w in (("w_lower", self.w_lower), ("w_upper", self.w_upper)):
            if not 0.0 <= w <= 1.0:
                raise ParameterError(f"{name} must be in [0, 1], got {w}")
        if abs(self.w_lower + self.w_upper - 1.0) > _WEIGHT_TOL:
            raise ParameterError(
                f"w_lower + w_upper must equal 1, got {self.w_lower + self.w_upper}"
            )
        if self.max_iter < 1:
            raise ParameterError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.tol < 0:
            raise ParameterError(f"tol must be >= 0, got {self.tol}")


@dataclass(frozen=True, eq=False)
class CrispClustering:
    """A crisp partition: per-gene cluster, centroids, and the SSE trace."""

    assignment: np.ndarray
    centroids: np.ndarray
    iterations: int
    converged: bool
    sse: float
    sse_history: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class RoughClustering:
    """Lower/upper approximation sets per cluster plus centroids."""

    lower: tuple[frozenset[int], ...]
    upper: tuple[frozenset[int], ...]
    centroids: np.ndarray
    iterations: int
    converged: bool
    had_empty_cluster: bool = False

    @property
    def n_clusters(self) -> int:
        return len(self.lower)

    def boundary(self, h: int) -> frozenset[int]:
        return self.upper[h] - self.lower[h]


def _as_matrix(data) -> np.ndarray:
    X = np.asarray(data, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise ShapeError(f"expected a 2-D data matrix, got shape {X.shape}")
    return X


def _check_k(k: int, n: int):
    if k > n:
        raise ParameterError(f"k={k} exceeds the number of rows n={n}")


def init_centroids(data, k: int, seed=None) -> np.ndarray:
    """k distinct data rows drawn uniformly without replacement, seeded."""
    X = _as_matrix(data)
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    _check_k(k, X.shape[0])
    rng = np.random.default_rng(seed)
    idx = rng.choice(X.shape[0], size=k, replace=False)
    return X[idx].copy()


def _sq_distances(X, centroids) -> np.ndarray:
    diff = X[:, None, :] - centroids[None, :, :]
    return np.einsum("nkm,nkm->nk", diff, diff)


def _mean_update(X, assignment, centroids) -> np.ndarray:
    """Per-cluster means; a cluster with no members keeps its previous centroid."""
    new = centroids.copy()
    for h in range(centroids.shape[0]):
        members = assignment == h
        if members.any():
            new[h] = X[members].mean(axis=0)
    return new


def kmeans(data, params: RoughParams, initial_centroids=None) -> CrispClustering:
    """Lloyd iteration: nearest-centroid assignment, mean update, until stable.

    Distance ties go to the lowest cluster index. The recorded SSE history
    (one entry per assignment pass) is non-increasing.
    """
    X = _as_matrix(data)
    _check_k(params.k, X.shape[0])
    if initial_centroids is None:
        centroids = init_centroids(X, params.k, params.seed)
    else:
        centroids = _check_initial(initial_centroids, params.k, X.shape[1])

    n = X.shape[0]
    history: list[float] = []
    assignment = np.zeros(n, dtype=np.int64)
    converged = False
    iterations = 0
    for iterations in range(1, params.max_iter + 1):
        d2 = _sq_distances(X, centroids)
        assignment = d2.argmin(axis=1)
        history.append(float(d2[np.arange(n), assignment].sum()))
        new = _mean_update(X, assignment, centroids)
        shift = float(np.abs(new - centroids).max())
        centroids = new
        if shift <= params.tol:
            converged = True
            break

    sse = float(((X - centroids[assignment]) ** 2).sum())
    return CrispClustering(
        assignment=assignment,
        centroids=centroids,
        iterations=iterations,
        converged=converged,
        sse=sse,
        sse_history=tuple(history),
    )


def _ratio_sets(scores, within, best) -> tuple[tuple, tuple]:
    """Build lower/upper sets from a per-gene candidate mask.

    ``within`` marks clusters passing the ratio test against the strict best;
    the best cluster is always a member. Genes with a single candidate are
    crisp (lower + upper of it); the rest enter every candidate's upper set.
    """
    n, k = scores.shape
    within[np.arange(n), best] = True
    counts = within.sum(axis=1)
    crisp = counts == 1
    lower = tuple(
        frozenset(np.flatnonzero(crisp & (best == h)).tolist()) for h in range(k)
    )
    upper = tuple(frozenset(np.flatnonzero(within[:, h]).tolist()) for h in range(k))
    return lower, upper


def rough_assign(data, centroids, epsilon: float) -> tuple[tuple, tuple]:
    """Distance-ratio assignment into lower/upper approximations.

    For each gene, the clusters with d(X_i, Z_h) / d_best <= epsilon beyond
    the unique best one form the candidate set; a lone candidate is a crisp
    (lower) assignment, several candidates all receive the gene in their
    upper sets. A gene sitting exactly on a centroid is crisp there.
    """
    if epsilon < 1.0:
        raise ParameterError(f"distance-ratio epsilon must be >= 1, got {epsilon}")
    X = _as_matrix(data)
    Z = _as_matrix(centroids)
    if Z.shape[1] != X.shape[1]:
        raise ShapeError(f"centroid width {Z.shape[1]} != data width {X.shape[1]}")
    d = np.sqrt(_sq_distances(X, Z))
    best = d.argmin(axis=1)
    d_best = d[np.arange(X.shape[0]), best]
    within = (d <= epsilon * d_best[:, None]) & (d > d_best[:, None])
    return _ratio_sets(d, within, best)


def rough_centroids(data, lower, upper, w_lower: float, w_upper: float,
                    previous_centroids=None) -> np.ndarray:
    """Weighted centroid update from lower and boundary means.

    With both a lower approximation and a non-empty boundary, the centroid is
    w_lower * mean(lower) + w_upper * mean(boundary); with either side empty
    it is the plain mean of the upper approximation. A cluster whose upper
    approximation is empty keeps its previous centroid, which the caller must
    supply in that case.
    """
    for name, w in (("w_lower", w_lower), ("w_upper", w_upper)):
        if not 0.0 <= w <= 1.0:
            raise ParameterError(f"{name} must be in [0, 1], got {w}")
    if abs(w_lower + w_upper - 1.0) > _WEIGHT_TOL:
        raise ParameterError(f"w_lower + w_upper must equal 1, got {w_lower + w_upper}")
    X = _as_matrix(data)
    k = len(lower)
    if len(upper) != k:
        raise ShapeError(f"{k} lower sets vs {len(upper)} upper sets")
    out = np.empty((k, X.shape[1]), dtype=float)
    for h in range(k):
        lower_idx = sorted(lower[h])
        upper_idx = sorted(upper[h])
        boundary_idx = sorted(set(upper[h]) - set(lower[h]))
        if not upper_idx:
            if previous_centroids is None:
                raise ParameterError(
                    f"cluster {h} is empty and no previous centroids were given"
                )
            out[h] = np.asarray(previous_centroids, dtype=float)[h]
        elif lower_idx and boundary_idx:
            out[h] = (
                w_lower * X[lower_idx].mean(axis=0)
                + w_upper * X[boundary_idx].mean(axis=0)
            )
        else:
            out[h] = X[upper_idx].mean(axis=0)
    return out


def _check_initial(initial, k, width) -> np.ndarray:
    Z = np.asarray(initial, dtype=float)
    if Z.ndim == 1:
        Z = Z.reshape(-1, 1)
    if Z.shape != (k, width):
        raise ShapeError(f"initial centroids must be {k}x{width}, got {Z.shape}")
    return Z.copy()


def _approximation_engine(X, params, epsilon, assign, initial_centroids, on_iteration):
    if initial_centroids is None:
        centroids = init_centroids(X, params.k, params.seed)
    else:
        centroids = _check_initial(initial_centroids, params.k, X.shape[1])

    lower: tuple = tuple(frozenset() for _ in range(params.k))
    upper: tuple = tuple(frozenset() for _ in range(params.k))
    converged = False
    had_empty = False
    iterations = 0
    for iterations in range(1, params.max_iter + 1):
        lower, upper = assign(X, centroids, epsilon)
        if on_iteration is not None:
            on_iteration(iterations, lower, upper, centroids)
        if any(not u for u in upper):
            had_empty = True
        new = rough_centroids(
            X, lower, upper, params.w_lower, params.w_upper,
            previous_centroids=centroids,
        )
        shift = float(np.abs(new - centroids).max())
        centroids = new
        if shift <= params.tol:
            converged = True
            break

    return RoughClustering(
        lower=lower,
        upper=upper,
        centroids=centroids,
        iterations=iterations,
        converged=converged,
        had_empty_cluster=had_empty,
    )


def rough_kmeans(data, params: RoughParams, initial_centroids=None,
                 on_iteration=None) -> RoughClustering:
    """Rough-set k-means: ratio-threshold assignment plus weighted centroids.

    ``on_iteration(iteration, lower, upper, centroids)``, when given, is
    called after every assignment pass with the centroids it used.
    """
    X = _as_matrix(data)
    _check_k(params.k, X.shape[0])
    epsilon = DEFAULT_ROUGH_EPSILON if params.epsilon is None else params.epsilon
    if epsilon < 1.0:
        raise ParameterError(f"distance-ratio epsilon must be >= 1, got {epsilon}")
    return _approximation_engine(
        X, params, epsilon, rough_assign, initial_centroids, on_iteration
    )


def fsrk_assign(memberships, centroids, epsilon: float) -> tuple[tuple, tuple]:
    """Similarity-ratio assignment into lower/upper approximations.

    Mirrors the distance rule in similarity space: candidates are clusters
    with S_h / S_best >= epsilon beyond the unique best-similarity one.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ParameterError(f"similarity-ratio epsilon must be in (0, 1], got {epsilon}")
    M = _as_matrix(memberships)
    Z = _as_matrix(centroids)
    if Z.shape[1] != M.shape[1]:
        raise ShapeError(f"centroid width {Z.shape[1]} != data width {M.shape[1]}")
    if Z.size and (Z.min() < 0.0 or Z.max() > 1.0):
        raise DomainError("fsrk centroids must lie in [0, 1]")
    S = _similarity_matrix(M, Z)
    best = S.argmax(axis=1)
    s_best = S[np.arange(M.shape[0]), best]
    within = (S >= epsilon * s_best[:, None]) & (S < s_best[:, None])
    return _ratio_sets(S, within, best)


def _similarity_matrix(M, Z) -> np.ndarray:
    S = np.empty((M.shape[0], Z.shape[0]), dtype=float)
    for h in range(Z.shape[0]):
        num = np.abs(M - Z[h]).sum(axis=1)
        den = (M + Z[h]).sum(axis=1)
        S[:, h] = np.where(den > 0, 1.0 - num / np.where(den > 0, den, 1.0), 1.0)
    return S


def fsrk_kmeans(memberships, params: RoughParams, initial_centroids=None,
                on_iteration=None) -> RoughClustering:
    """Soft-similarity rough k-means over fuzzified (membership) rows.

    Input rows must already be memberships in [0, 1]; centroids then stay in
    [0, 1] automatically, being convex combinations of memberships.
    """
    values = getattr(memberships, "values", memberships)
    M = _as_matrix(values)
    if M.size and (M.min() < 0.0 or M.max() > 1.0):
        raise DomainError("fsrk input must be fuzzified: every entry in [0, 1]")
    _check_k(params.k, M.shape[0])
    epsilon = DEFAULT_FSRK_EPSILON if params.epsilon is None else params.epsilon
    if not 0.0 < epsilon <= 1.0:
        raise ParameterError(f"similarity-ratio epsilon must be in (0, 1], got {epsilon}")
    return _approximation_engine(
        M, params, epsilon, fsrk_assign, initial_centroids, on_iteration
    )
