"""Cross-feature statistics: min-max feature profiles and Pearson correlations.

Also home to the exactly-rounded ``mean_std`` helper used by every
aggregation in the toolkit, so results never depend on iteration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .corpus import InputError

FEATURE_ORDER = ("fkgl", "dcr", "gfi", "cli", "ari",
                 "c0", "c1", "c2", "c3", "ambiguity", "relevance", "score")


def mean_std(values: Sequence[float], ddof: int = 1) -> tuple[float, float]:
    """Mean and standard deviation via compensated (exactly rounded) sums.

    Sample std (``ddof=1``) by default; a single value yields std 0.
    """
    n = len(values)
    if n == 0:
        raise InputError("mean of empty sequence")
    mean = math.fsum(values) / n
    if n <= ddof:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - ddof)
    return mean, math.sqrt(var)


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    if len(xs) != len(ys):
        raise InputError("pearson: length mismatch")
    n = len(xs)
    if n < 3:
        raise InputError("pearson: need at least 3 samples")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    cov = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = math.fsum((x - mx) ** 2 for x in xs)
    vy = math.fsum((y - my) ** 2 for y in ys)
    if vx == 0.0 or vy == 0.0:
        raise InputError("pearson: zero-variance input")
    return cov / math.sqrt(vx * vy)


@dataclass(frozen=True)
class FeatureVector:
    """Named per-question features; a missing feature is an explicit None."""
    cq_id: str
    set_id: str
    features: Mapping[str, float | None] = field(default_factory=dict)

    def get(self, name: str) -> float | None:
        return self.features.get(name)


@dataclass(frozen=True)
class CorrelationResult:
    feature: str
    r: float
    n: int


def minmax_profiles(
    rows: Sequence[FeatureVector],
    feature_names: Sequence[str] | None = None,
) -> dict[str, dict[str, float]]:
    """Per-set means of features min-max scaled over the whole corpus.

    Scaling ranges are computed once over all rows pooled, so every set's
    profile shares one [0,1] axis per feature. A feature with zero range
    is an error; missing values are skipped, not zeroed.
    """
    if not rows:
        raise InputError("no feature rows")
    names = list(feature_names) if feature_names is not None else [
        f for f in FEATURE_ORDER if any(row.get(f) is not None for row in rows)
    ]
    ranges: dict[str, tuple[float, float]] = {}
    for name in names:
        values = [row.get(name) for row in rows if row.get(name) is not None]
        if len(values) < 2:
            raise InputError(f"zero range: {name}")
        lo, hi = min(values), max(values)
        if lo == hi:
            raise InputError(f"zero range: {name}")
        ranges[name] = (lo, hi - lo)

    profiles: dict[str, dict[str, float]] = {}
    set_ids = []
    for row in rows:
        if row.set_id not in set_ids:
            set_ids.append(row.set_id)
    for set_id in set_ids:
        profile: dict[str, float] = {}
        for name in names:
            lo, span = ranges[name]
            scaled = [(row.get(name) - lo) / span
                      for row in rows if row.set_id == set_id and row.get(name) is not None]
            if scaled:
                profile[name] = math.fsum(scaled) / len(scaled)
        profiles[set_id] = profile
    return profiles


def correlate(
    rows: Sequence[FeatureVector],
    target: str = "score",
    feature_names: Sequence[str] | None = None,
) -> tuple[list[CorrelationResult], list[str]]:
    """Pearson r between each feature and ``target`` over complete pairs.

    Returns the correlation list plus warnings for features skipped for
    zero variance or too few paired samples.
    """
    names = list(feature_names) if feature_names is not None else [
        f for f in FEATURE_ORDER
        if f != target and any(row.get(f) is not None for row in rows)
    ]
    results: list[CorrelationResult] = []
    warnings: list[str] = []
    for name in names:
        pairs = [(row.get(name), row.get(target))
                 for row in rows if row.get(name) is not None and row.get(target) is not None]
        if len(pairs) < 3:
            warnings.append(f"skipped {name}: fewer than 3 paired samples")
            continue
        xs = [p[0] for p in pairs]
        ys = [p[1] for p in pairs]
        try:
            r = pearson_r(xs, ys)
        except InputError:
            warnings.append(f"skipped {name}: zero variance")
            continue
        results.append(CorrelationResult(name, r, len(pairs)))
    return results, warnings
