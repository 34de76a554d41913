"""Decision back-ends over scalar moment-summation features.

All classifiers train on the enrolled subject's genuine feature values H
and answer accept/reject for a claimant's feature value:

* k-means (Euclidean or cityblock assignment) with deterministic initial
  centroids derived from H,
* fuzzy k-means with the standard alternating membership/center updates,
* k-nn with a leave-one-out local-mean acceptance radius,
* fuzzy k-nn with inverse-distance memberships against the references plus
  a virtual rejection anchor,
* avg (mean-absolute-deviation band around the training mean),
* avgmax (one-sided band bounded by the largest training deviation above
  the mean).

Fitted models are immutable and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

CLASSIFIER_IDS = (
    "kmeans-euclidean",
    "kmeans-cityblock",
    "fuzzy-kmeans",
    "knn",
    "fuzzy-knn",
    "avg",
    "avgmax",
)

GENUINE_CLUSTER = 1

DEFAULT_FUZZIFIER = 2.0
DEFAULT_EPSILON = 1e-5
DEFAULT_MAX_ITER = 300


def initial_centroids(features: np.ndarray) -> tuple[float, float]:
    """Deterministic two-cluster seeds from the genuine feature values.

    The first centroid sits at the minimum m1; the second halfway between
    m1 and a threshold placed above the maximum m2 (2*m2 for positive
    features, m2 + 1 otherwise), so it always lands beyond the genuine
    range.
    """
    h = np.asarray(features, dtype=np.float64)
    if h.size == 0:
        raise ValueError("empty feature set")
    m1 = float(h.min())
    m2 = float(h.max())
    threshold = 2.0 * m2 if m2 > 0 else m2 + 1.0
    return m1, (m1 + threshold) / 2.0


def _distances(values: np.ndarray, centroids: np.ndarray, metric: str) -> np.ndarray:
    diff = np.abs(values[:, None] - centroids[None, :])
    if metric == "euclidean":
        return diff**2  # squared distance; argmin unchanged
    if metric == "cityblock":
        return diff
    raise ValueError("unknown metric %r" % metric)


@dataclass(frozen=True)
class CentroidModel:
    centroids: tuple[float, ...]
    metric: str
    genuine_cluster: int = GENUINE_CLUSTER
    iterations: int = 0
    # within-cluster sum of squared deviations after each update
    objective_history: tuple[float, ...] = ()


def _wcss(values: np.ndarray, centroids: np.ndarray, assign: np.ndarray) -> float:
    return float(((values - centroids[assign]) ** 2).sum())


def kmeans_fit(
    values: np.ndarray,
    k: int = 2,
    metric: str = "euclidean",
    init: tuple[float, ...] | None = None,
) -> CentroidModel:
    """Lloyd iteration from fixed initial centroids until assignments settle.

    An empty cluster keeps its previous centroid so the genuine/imposter
    pair cannot collapse when all training values fall on one side.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    if k > x.size:
        raise ValueError("need at least k values to form k clusters")
    if init is None:
        if k != 2:
            raise ValueError("default initialization is defined for k = 2")
        init = initial_centroids(x)
    centroids = np.asarray(init, dtype=np.float64).copy()
    if centroids.size != k:
        raise ValueError("expected %d initial centroids" % k)
    assign = np.argmin(_distances(x, centroids, metric), axis=1)
    history = [_wcss(x, centroids, assign)]
    iterations = 0
    for _ in range(1000):
        iterations += 1
        for j in range(k):
            members = x[assign == j]
            if members.size:
                centroids[j] = members.mean()
        new_assign = np.argmin(_distances(x, centroids, metric), axis=1)
        history.append(_wcss(x, centroids, new_assign))
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
    return CentroidModel(
        centroids=tuple(float(c) for c in centroids),
        metric=metric,
        iterations=iterations,
        objective_history=tuple(history),
    )


def kmeans_classify(model: CentroidModel, value: float) -> int:
    """1-based index of the nearest centroid; ties go to the genuine cluster."""
    c = np.asarray(model.centroids)
    d = _distances(np.asarray([float(value)]), c, model.metric)[0]
    best = int(np.argmin(d)) + 1
    if d[model.genuine_cluster - 1] == d[best - 1]:
        return model.genuine_cluster
    return best


@dataclass(frozen=True)
class FuzzyModel:
    centers: tuple[float, ...]
    fuzzifier: float
    epsilon: float
    partition: tuple[tuple[float, ...], ...]
    genuine_cluster: int = GENUINE_CLUSTER
    iterations: int = 0
    last_delta: float = 0.0
    objective_history: tuple[float, ...] = ()


def fuzzy_memberships(centers: np.ndarray, value: float, fuzzifier: float) -> np.ndarray:
    """Membership of one value in each cluster (inverse-distance weighting).

    A value coinciding with a center gets membership 1 there (first such
    center on ties) and 0 elsewhere.
    """
    c = np.asarray(centers, dtype=np.float64)
    d = np.abs(float(value) - c)
    if np.any(d == 0.0):
        u = np.zeros_like(c)
        u[int(np.argmin(d))] = 1.0
        return u
    exponent = 2.0 / (fuzzifier - 1.0)
    inv = d ** (-exponent)
    return inv / inv.sum()


def _fuzzy_objective(x: np.ndarray, centers: np.ndarray, u: np.ndarray, m: float) -> float:
    d2 = (x[:, None] - centers[None, :]) ** 2
    return float(((u**m) * d2).sum())


def fuzzy_fit(
    values: np.ndarray,
    k: int = 2,
    fuzzifier: float = DEFAULT_FUZZIFIER,
    epsilon: float = DEFAULT_EPSILON,
    max_iter: int = DEFAULT_MAX_ITER,
    init: tuple[float, ...] | None = None,
) -> FuzzyModel:
    """Alternating membership/center optimization until the partition settles.

    Stops when the largest membership change falls below epsilon; raises
    after max_iter iterations without convergence. Centers start from the
    same deterministic seeds as k-means.
    """
    if fuzzifier <= 1.0:
        raise ValueError("fuzzifier must exceed 1")
    x = np.asarray(values, dtype=np.float64).ravel()
    if k > x.size:
        raise ValueError("need at least k values to form k clusters")
    if init is None:
        if k != 2:
            raise ValueError("default initialization is defined for k = 2")
        init = initial_centroids(x)
    centers = np.asarray(init, dtype=np.float64).copy()
    if centers.size != k:
        raise ValueError("expected %d initial centers" % k)

    u = np.stack([fuzzy_memberships(centers, v, fuzzifier) for v in x])
    history = [_fuzzy_objective(x, centers, u, fuzzifier)]
    for iteration in range(1, max_iter + 1):
        um = u**fuzzifier
        weights = um.sum(axis=0)
        for j in range(k):
            if weights[j] > 0.0:
                centers[j] = float((um[:, j] * x).sum() / weights[j])
        new_u = np.stack([fuzzy_memberships(centers, v, fuzzifier) for v in x])
        history.append(_fuzzy_objective(x, centers, new_u, fuzzifier))
        delta = float(np.abs(new_u - u).max())
        u = new_u
        if delta < epsilon:
            return FuzzyModel(
                centers=tuple(float(c) for c in centers),
                fuzzifier=fuzzifier,
                epsilon=epsilon,
                partition=tuple(tuple(row) for row in u),
                iterations=iteration,
                last_delta=delta,
                objective_history=tuple(history),
            )
    raise ValueError("no convergence")


def classify_memberships(memberships: np.ndarray) -> int:
    """1-based cluster of the largest membership; ties go to the genuine cluster."""
    u = np.asarray(memberships, dtype=np.float64)
    if u[GENUINE_CLUSTER - 1] == u.max():
        return GENUINE_CLUSTER
    return int(np.argmax(u)) + 1


def fuzzy_classify(model: FuzzyModel, value: float) -> tuple[np.ndarray, int]:
    """Cluster memberships of a value and the index of the winning cluster."""
    u = fuzzy_memberships(np.asarray(model.centers), value, model.fuzzifier)
    return u, classify_memberships(u)


@dataclass(frozen=True)
class KnnModel:
    references: tuple[float, ...]
    k_nn: int
    theta: float
    fuzzifier: float = DEFAULT_FUZZIFIER
    memberships: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.memberships:
            object.__setattr__(self, "memberships", (1.0,) * len(self.references))


def _mean_knn_distance(value: float, references: np.ndarray, k: int) -> float:
    d = np.sort(np.abs(references - value))
    return float(d[:k].mean())


def knn_fit(features: np.ndarray) -> KnnModel:
    """One-class nearest-neighbor model over the genuine training features.

    k is the rounded square root of the training count; the acceptance
    radius theta is the largest leave-one-out local mean distance observed
    among the training samples themselves.
    """
    h = np.asarray(features, dtype=np.float64).ravel()
    p = h.size
    if p < 2:
        raise ValueError("need at least 2 training features")
    k_nn = max(1, round(math.sqrt(p)))
    theta = 0.0
    for s in range(p):
        others = np.delete(h, s)
        theta = max(theta, _mean_knn_distance(h[s], others, min(k_nn, others.size)))
    return KnnModel(references=tuple(float(v) for v in h), k_nn=k_nn, theta=theta)


def knn_classify(model: KnnModel, value: float) -> bool:
    """Accept when the mean distance to the k nearest references is within theta."""
    refs = np.asarray(model.references)
    return _mean_knn_distance(float(value), refs, model.k_nn) <= model.theta


def fuzzy_knn_membership(model: KnnModel, value: float) -> float:
    """Genuine-class membership of a value under fuzzy k-nn.

    The genuine references all carry membership 1, so a rejection anchor
    with membership 0 is placed at mean(H) + 2*theta to restore a decision
    boundary; when theta degenerates to 0 a small positive offset relative
    to the feature scale is used instead. Weights follow the standard
    inverse-distance form with exponent 2/(fuzzifier - 1).
    """
    refs = np.asarray(model.references, dtype=np.float64)
    mu = float(refs.mean())
    offset = 2.0 * model.theta
    if offset == 0.0:
        offset = 1e-6 * max(abs(mu), 1.0)
    points = np.append(refs, mu + offset)
    labels = np.append(np.asarray(model.memberships, dtype=np.float64), 0.0)
    d = np.abs(points - float(value))
    if np.any(d == 0.0):
        return float(labels[int(np.argmin(d))])
    nearest = np.argsort(d, kind="stable")[: model.k_nn]
    w = d[nearest] ** (-2.0 / (model.fuzzifier - 1.0))
    return float((w * labels[nearest]).sum() / w.sum())


def fuzzy_knn_classify(model: KnnModel, value: float) -> tuple[float, bool]:
    """Membership in [0, 1] and the accept decision (membership >= 0.5)."""
    membership = fuzzy_knn_membership(model, value)
    return membership, membership >= 0.5


@dataclass(frozen=True)
class ThresholdModel:
    mean: float
    factor: float


def avg_fit(features: np.ndarray) -> ThresholdModel:
    """Band of one mean absolute deviation around the training mean."""
    h = np.asarray(features, dtype=np.float64).ravel()
    if h.size == 0:
        raise ValueError("empty feature set")
    mu = float(h.mean())
    return ThresholdModel(mean=mu, factor=float(np.abs(h - mu).mean()))


def avg_decide(model: ThresholdModel, value: float) -> bool:
    return abs(float(value) - model.mean) <= model.factor


def avgmax_fit(features: np.ndarray) -> ThresholdModel:
    """One-sided band bounded by the largest training deviation above the mean."""
    h = np.asarray(features, dtype=np.float64).ravel()
    if h.size == 0:
        raise ValueError("empty feature set")
    mu = float(h.mean())
    return ThresholdModel(mean=mu, factor=float((h - mu).max()))


def avgmax_decide(model: ThresholdModel, value: float) -> bool:
    # One-sided: imposter summations exceed genuine ones, so anything at or
    # below the band is accepted.
    return float(value) - model.mean <= model.factor
