"""Cluster-count selection over the embedding space.

k-means (k-means++ seeding, ``restarts`` restarts keeping the lowest
inertia) is run for every k in the range; the mean silhouette per k forms a
curve, and the selected k is its knee: the point with the maximum
perpendicular distance to the chord joining the curve's endpoints, smaller
k on ties. ``elbow="max"`` switches to plain argmax of the silhouette.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.cluster import KMeans
from sklearn.metrics import silhouette_score

from ..errors import ConfigError, GraphStructureError

ELBOW_METHODS = ("knee", "max")


@dataclass(frozen=True)
class ClusterSelection:
    labels: tuple[int, ...]       # aligned with the embedding's node order
    k_selected: int
    silhouette_curve: tuple[tuple[int, float], ...]
    labels_by_k: dict[int, tuple[int, ...]]


@dataclass(frozen=True)
class StabilityRow:
    cluster: int
    size: int
    mean_best_jaccard: float
    min_best_jaccard: float


def cluster_stability(selection: ClusterSelection) -> tuple[StabilityRow, ...]:
    """How well each selected-k cluster persists across the swept k values.

    For every cluster at the selected k, take its best Jaccard overlap with
    any cluster of each other k in the sweep; report the mean and minimum of
    those best overlaps. 1.0 means the identical member set appears at every
    other k.
    """

    def groups(labels: tuple[int, ...]) -> list[frozenset[int]]:
        by_label: dict[int, set[int]] = {}
        for i, label in enumerate(labels):
            by_label.setdefault(label, set()).add(i)
        return [frozenset(members) for _, members in sorted(by_label.items())]

    selected_groups = groups(selection.labels)
    rows = []
    for cid, members in enumerate(selected_groups):
        best_overlaps = []
        for k in sorted(selection.labels_by_k):
            if k == selection.k_selected:
                continue
            other = groups(selection.labels_by_k[k])
            best_overlaps.append(
                max(len(members & g) / len(members | g) for g in other)
            )
        if not best_overlaps:
            best_overlaps = [1.0]
        rows.append(
            StabilityRow(
                cluster=cid,
                size=len(members),
                mean_best_jaccard=sum(best_overlaps) / len(best_overlaps),
                min_best_jaccard=min(best_overlaps),
            )
        )
    return tuple(rows)


def knee_point(curve: list[tuple[int, float]]) -> int:
    """k at maximum perpendicular distance above the endpoint chord.

    Candidates must rise above the chord (silhouette is higher-is-better);
    when no point does, the curve has no interior elbow and the best
    silhouette wins. Ties go to the smaller k.
    """
    (x0, y0), (x1, y1) = curve[0], curve[-1]
    dx, dy = x1 - x0, y1 - y0
    length = math.hypot(dx, dy)
    best_k = None
    best_d = 0.0
    for x, y in curve:
        if length == 0.0:
            signed = y - y0
        else:
            signed = (dx * (y - y0) - dy * (x - x0)) / length
        if signed > best_d + 1e-12:
            best_d = signed
            best_k = x
    if best_k is None:
        return max(curve, key=lambda item: (item[1], -item[0]))[0]
    return best_k


def select_k_and_cluster(
    vectors: np.ndarray,
    k_min: int = 2,
    k_max: int = 25,
    restarts: int = 10,
    seed: int = 42,
    elbow: str = "knee",
) -> ClusterSelection:
    """Sweep k, score silhouettes, and return the labels at the chosen k."""
    if elbow not in ELBOW_METHODS:
        raise ConfigError(f"elbow must be one of {ELBOW_METHODS}, got {elbow!r}")
    X = np.asarray(vectors, dtype=np.float64)
    n = X.shape[0]
    if not (2 <= k_min < k_max <= n - 1):
        raise ConfigError(f"need 2 <= k_min < k_max <= n-1, got k_min={k_min}, k_max={k_max}, n={n}")
    distinct = np.unique(X, axis=0).shape[0]
    if distinct < 2:
        raise GraphStructureError("all embedding points are identical; silhouette is undefined")
    if distinct < k_max:
        raise GraphStructureError(f"only {distinct} distinct points for k up to {k_max}")

    curve: list[tuple[int, float]] = []
    labels_by_k: dict[int, np.ndarray] = {}
    for k in range(k_min, k_max + 1):
        state = int(np.random.SeedSequence((seed, k)).generate_state(1)[0])
        km = KMeans(n_clusters=k, init="k-means++", n_init=restarts, random_state=state)
        labels = km.fit_predict(X)
        labels_by_k[k] = labels
        curve.append((k, float(silhouette_score(X, labels))))

    if elbow == "max":
        selected = max(curve, key=lambda item: (item[1], -item[0]))[0]
    else:
        selected = knee_point(curve)
    return ClusterSelection(
        labels=tuple(int(c) for c in labels_by_k[selected]),
        k_selected=selected,
        silhouette_curve=tuple(curve),
        labels_by_k={k: tuple(int(c) for c in labels) for k, labels in labels_by_k.items()},
    )
