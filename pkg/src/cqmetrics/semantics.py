"""Embedding-space analytics over question sets.

Internal diversity of one set (mean pairwise cosine, dispersion around the
centroid, entropy of k-means cluster occupancy) and directed comparison of
two sets (centroid similarity, per-direction best-match statistics,
threshold coverage / novelty, and the symmetric bidirectional coverage).

Determinism rules:
  * members are processed in cq_id-sorted order, never file order;
  * every similarity is the same elementary ``np.dot`` on the two unit
    vectors -- sets hold tens of questions, so there is nothing to gain
    from blocked matrix products, and scalar dots keep results identical
    to the public ``cosine`` operation;
  * all means/stds go through exactly-rounded summation;
  * all k-means randomness derives from one integer seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import CQSet, EmbeddingVector, InputError
from .stats import mean_std


@dataclass(frozen=True)
class AnalysisConfig:
    tau: float = 0.75
    k: int = 5
    seed: int = 46
    restarts: int = 10

    def __post_init__(self) -> None:
        if not 0.0 < self.tau <= 1.0:
            raise InputError(f"tau out of range (0,1]: {self.tau}")
        if self.k < 2:
            raise InputError(f"k must be at least 2: {self.k}")
        if self.restarts < 1:
            raise InputError(f"restarts must be positive: {self.restarts}")


@dataclass(frozen=True)
class DiversityResult:
    set_id: str
    avg_pairwise_cos: float
    avg_pairwise_cos_std: float
    avg_dist_to_centroid: float
    avg_dist_to_centroid_std: float
    entropy_bits: float


@dataclass(frozen=True)
class PairwiseComparison:
    set_a: str
    set_b: str
    n_a: int
    n_b: int
    centroid_sim: float
    mms_a_from_b: float
    mms_a_from_b_std: float
    cov_a_from_b_pct: float
    n_cov_a: int
    mms_b_from_a: float
    mms_b_from_a_std: float
    cov_b_from_a_pct: float
    n_cov_b: int
    novelty_a_pct: float
    novelty_b_pct: float
    bidirectional_pct: float


def cosine(u: EmbeddingVector | np.ndarray, v: EmbeddingVector | np.ndarray) -> float:
    """Cosine similarity; a plain dot product for unit-norm inputs."""
    a = u.values if isinstance(u, EmbeddingVector) else np.asarray(u, dtype=np.float64)
    b = v.values if isinstance(v, EmbeddingVector) else np.asarray(v, dtype=np.float64)
    if a.shape != b.shape:
        raise InputError(f"dimension mismatch: {a.shape[0]} != {b.shape[0]}")
    na = math.sqrt(float(np.dot(a, a)))
    nb = math.sqrt(float(np.dot(b, b)))
    if na == 0.0 or nb == 0.0:
        raise InputError("zero vector")
    return float(np.dot(a, b)) / (na * nb)


def _member_matrix(cqset: CQSet, embeddings: Mapping[str, EmbeddingVector]) -> np.ndarray:
    rows = []
    for cq_id in sorted(cqset.members):
        vec = embeddings.get(cq_id)
        if vec is None:
            raise InputError(f"missing embedding: {cq_id}")
        rows.append(vec.values)
    return np.stack(rows)


def kmeans(
    points: np.ndarray,
    k: int,
    seed: int = 46,
    restarts: int = 10,
    max_iter: int = 100,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Lloyd's algorithm with k-means++ seeding, best of ``restarts`` runs.

    Returns (labels, centers, inertia). Fully deterministic for a fixed
    (seed, restarts, point order): each restart draws from its own child
    of the seed sequence and the winner is the lowest (inertia, restart)
    pair. An emptied cluster is re-seeded to the point currently farthest
    from its assigned center.
    """
    n = points.shape[0]
    if n < k:
        raise InputError(f"set smaller than k: {n} < {k}")
    best: tuple[float, int, np.ndarray, np.ndarray] | None = None
    children = np.random.SeedSequence(seed).spawn(restarts)
    for restart, child in enumerate(children):
        rng = np.random.default_rng(child)
        centers = _kmeans_pp(points, k, rng)
        labels = np.zeros(n, dtype=np.int64)
        for _ in range(max_iter):
            dist2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            new_labels = dist2.argmin(axis=1)
            closest = dist2[np.arange(n), new_labels]
            for cluster in range(k):
                mask = new_labels == cluster
                if mask.any():
                    centers[cluster] = points[mask].mean(axis=0)
                else:
                    # re-seed to the point farthest from its center; the next
                    # assignment pass claims it unless all points coincide
                    far = int(closest.argmax())
                    centers[cluster] = points[far]
                    closest[far] = 0.0
            if np.array_equal(new_labels, labels):
                break
            labels = new_labels
        dist2 = ((points - centers[labels]) ** 2).sum(axis=1)
        inertia = float(math.fsum(dist2.tolist()))
        if best is None or (inertia, restart) < (best[0], best[1]):
            best = (inertia, restart, labels.copy(), centers.copy())
    return best[2], best[3], best[0]


def _kmeans_pp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centers[0] = points[first]
    dist2 = ((points - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = float(dist2.sum())
        if total <= 0.0:
            # all remaining points coincide with a chosen center
            centers[j] = points[int(rng.integers(n))]
            continue
        draw = rng.random() * total
        idx = int(np.searchsorted(np.cumsum(dist2), draw, side="right"))
        idx = min(idx, n - 1)
        centers[j] = points[idx]
        dist2 = np.minimum(dist2, ((points - centers[j]) ** 2).sum(axis=1))
    return centers


def cluster_entropy_bits(labels: Sequence[int], k: int) -> float:
    """Shannon entropy (base 2) of the cluster occupancy distribution."""
    n = len(labels)
    counts = [0] * k
    for lab in labels:
        counts[lab] += 1
    h = -math.fsum((c / n) * math.log2(c / n) for c in counts if c > 0)
    return h if h != 0.0 else 0.0


def internal_diversity(
    cqset: CQSet,
    embeddings: Mapping[str, EmbeddingVector],
    cfg: AnalysisConfig = AnalysisConfig(),
) -> DiversityResult:
    """Pairwise similarity, centroid dispersion and cluster entropy of a set."""
    mat = _member_matrix(cqset, embeddings)
    n = mat.shape[0]
    if n < cfg.k:
        raise InputError(f"set smaller than k: {cqset.set_id} has {n} < {cfg.k}")
    sims = [float(np.dot(mat[i], mat[j])) for i in range(n) for j in range(i + 1, n)]
    pair_mean, pair_std = mean_std(sims)
    centroid = mat.mean(axis=0)
    dists = [math.sqrt(float(np.dot(mat[i] - centroid, mat[i] - centroid))) for i in range(n)]
    dist_mean, dist_std = mean_std(dists)
    labels, _, _ = kmeans(mat, cfg.k, seed=cfg.seed, restarts=cfg.restarts)
    return DiversityResult(
        set_id=cqset.set_id,
        avg_pairwise_cos=pair_mean,
        avg_pairwise_cos_std=pair_std,
        avg_dist_to_centroid=dist_mean,
        avg_dist_to_centroid_std=dist_std,
        entropy_bits=cluster_entropy_bits(labels.tolist(), cfg.k),
    )


def pairwise_compare(
    set_a: CQSet,
    set_b: CQSet,
    embeddings: Mapping[str, EmbeddingVector],
    cfg: AnalysisConfig = AnalysisConfig(),
) -> PairwiseComparison:
    """Directed best-match coverage and symmetric overlap of two sets.

    A question counts as covered when its best cosine match in the other
    set reaches the threshold (inclusive, s >= tau); novelty is the exact
    complement. Bidirectional coverage pools the covered counts of both
    directions over the two set sizes.
    """
    mat_a = _member_matrix(set_a, embeddings)
    mat_b = _member_matrix(set_b, embeddings)
    n_a, n_b = mat_a.shape[0], mat_b.shape[0]

    best_a = [max(float(np.dot(mat_a[i], mat_b[j])) for j in range(n_b)) for i in range(n_a)]
    best_b = [max(float(np.dot(mat_b[j], mat_a[i])) for i in range(n_a)) for j in range(n_b)]
    n_cov_a = sum(1 for s in best_a if s >= cfg.tau)
    n_cov_b = sum(1 for s in best_b if s >= cfg.tau)
    mms_a, mms_a_std = mean_std(best_a)
    mms_b, mms_b_std = mean_std(best_b)
    cov_a = 100.0 * n_cov_a / n_a
    cov_b = 100.0 * n_cov_b / n_b

    centroid_a = mat_a.mean(axis=0)
    centroid_b = mat_b.mean(axis=0)
    return PairwiseComparison(
        set_a=set_a.set_id,
        set_b=set_b.set_id,
        n_a=n_a,
        n_b=n_b,
        centroid_sim=cosine(centroid_a, centroid_b),
        mms_a_from_b=mms_a,
        mms_a_from_b_std=mms_a_std,
        cov_a_from_b_pct=cov_a,
        n_cov_a=n_cov_a,
        mms_b_from_a=mms_b,
        mms_b_from_a_std=mms_b_std,
        cov_b_from_a_pct=cov_b,
        n_cov_b=n_cov_b,
        novelty_a_pct=100.0 - cov_a,
        novelty_b_pct=100.0 - cov_b,
        bidirectional_pct=100.0 * (n_cov_a + n_cov_b) / (n_a + n_b),
    )


def all_pairwise(
    sets: Sequence[CQSet],
    embeddings: Mapping[str, EmbeddingVector],
    cfg: AnalysisConfig = AnalysisConfig(),
) -> list[PairwiseComparison]:
    """Compare every unordered pair of sets, in the given set order."""
    out = []
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            out.append(pairwise_compare(sets[i], sets[j], embeddings, cfg))
    return out
