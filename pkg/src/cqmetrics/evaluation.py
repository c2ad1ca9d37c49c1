"""Rating aggregation: suitability scores, agreement, and per-set summaries.

A question's suitability score is the plain sum of its per-rater votes
(each -1 or +1), so with R raters it ranges from -R to +R and a score
above zero means majority acceptance. R must be odd; ties are rejected
up front rather than broken arbitrarily.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .corpus import CompetencyQuestion, CQSet, InputError
from .stats import mean_std


@dataclass(frozen=True)
class SuitabilityScore:
    cq_id: str
    score: int
    accepted: bool


@dataclass(frozen=True)
class AgreementResult:
    kappa: float
    n_items: int
    n_raters: int
    n_categories: int


@dataclass(frozen=True)
class SetEvaluationSummary:
    set_id: str
    n: int
    commented_pct: float
    score_mean: float
    score_std: float
    accepted_pct: float
    ambiguous_pct: float
    relevance_score3_pct: float | None


def suitability(cq: CompetencyQuestion) -> SuitabilityScore:
    r = len(cq.ratings)
    if r == 0 or r % 2 == 0:
        raise InputError(f"even rater count for {cq.cq_id}: {r} (ties possible)")
    score = sum(cq.ratings)
    return SuitabilityScore(cq_id=cq.cq_id, score=score, accepted=score > 0)


def fleiss_kappa(
    ratings: Sequence[Sequence[Hashable]],
    categories: Sequence[Hashable] | None = None,
) -> AgreementResult:
    """Fleiss' kappa over an items x raters matrix of category labels.

    Observed agreement is the mean per-item proportion of agreeing rater
    pairs; expected agreement is the sum of squared category marginals.
    When every rating falls in a single category, expected agreement is 1
    and kappa is returned as 1.0 with a warning.
    """
    n_items = len(ratings)
    if n_items < 2:
        raise InputError("need at least 2 items")
    n_raters = len(ratings[0])
    if n_raters < 2:
        raise InputError("need at least 2 raters")
    for i, row in enumerate(ratings):
        if len(row) != n_raters:
            raise InputError(f"incomplete matrix: item {i} has {len(row)} ratings, expected {n_raters}")

    if categories is None:
        cats = sorted({label for row in ratings for label in row}, key=repr)
    else:
        cats = list(categories)
        for row in ratings:
            for label in row:
                if label not in cats:
                    raise InputError(f"rating outside category set: {label!r}")
    index = {c: j for j, c in enumerate(cats)}

    per_item = []
    totals = [0] * len(cats)
    pairs = n_raters * (n_raters - 1)
    for row in ratings:
        counts = [0] * len(cats)
        for label in row:
            counts[index[label]] += 1
        for j, c in enumerate(counts):
            totals[j] += c
        per_item.append((math.fsum(c * c for c in counts) - n_raters) / pairs)

    p_bar = math.fsum(per_item) / n_items
    marginals = [t / (n_items * n_raters) for t in totals]
    p_expected = math.fsum(p * p for p in marginals)
    if 1.0 - p_expected < 1e-15:
        warnings.warn("single observed category across all items; kappa degenerates to 1.0",
                      stacklevel=2)
        kappa = 1.0
    else:
        kappa = (p_bar - p_expected) / (1.0 - p_expected)
    return AgreementResult(kappa=kappa, n_items=n_items, n_raters=n_raters, n_categories=len(cats))


def dataset_agreement(cqs: Sequence[CompetencyQuestion]) -> AgreementResult:
    """Agreement over the accept/reject votes of a whole dataset."""
    return fleiss_kappa([cq.ratings for cq in cqs], categories=(-1, 1))


def set_summary(cqset: CQSet, by_id: Mapping[str, CompetencyQuestion]) -> SetEvaluationSummary:
    """Suitability, comment/ambiguity and relevance summary for one set.

    Percentages are kept at full precision; callers round for display.
    The relevance figure is the share of score-3 questions among those
    that have a relevance rating at all, and None when none do.
    """
    members = [by_id[cq_id] for cq_id in cqset.members]
    if not members:
        raise InputError(f"empty set: {cqset.set_id}")
    scores = [suitability(cq).score for cq in members]
    mean, std = mean_std([float(s) for s in scores])
    n = len(members)
    rated = [cq.relevance for cq in members if cq.relevance is not None]
    relevance3 = 100.0 * sum(1 for r in rated if r == 3) / len(rated) if rated else None
    return SetEvaluationSummary(
        set_id=cqset.set_id,
        n=n,
        commented_pct=100.0 * sum(1 for cq in members if cq.commented) / n,
        score_mean=mean,
        score_std=std,
        accepted_pct=100.0 * sum(1 for s in scores if s > 0) / n,
        ambiguous_pct=100.0 * sum(1 for cq in members if cq.ambiguous) / n,
        relevance_score3_pct=relevance3,
    )


def relevance_distribution(cqset: CQSet, by_id: Mapping[str, CompetencyQuestion]) -> dict[int, tuple[int, float]]:
    """Count and percentage per relevance value 1..4, over rated questions."""
    rated = [by_id[m].relevance for m in cqset.members if by_id[m].relevance is not None]
    out: dict[int, tuple[int, float]] = {}
    for value in (1, 2, 3, 4):
        count = sum(1 for r in rated if r == value)
        out[value] = (count, 100.0 * count / len(rated) if rated else 0.0)
    return out
