"""Quantitative comparison toolkit for competency-question sets."""

__version__ = "0.1.0"

from .corpus import (  # noqa: F401
    CompetencyQuestion,
    CQSet,
    Dataset,
    EmbeddingVector,
    InputError,
    ParseAnnotation,
    RequirementPrimitives,
    Token,
    load_annotations,
    load_dataset,
    load_embeddings,
    write_dataset,
)
from .readability import ReadabilityScores, TextCounts, readability_scores, text_counts  # noqa: F401
from .complexity import ComplexityProfile, complexity_profile  # noqa: F401
from .evaluation import AgreementResult, SuitabilityScore, fleiss_kappa, set_summary, suitability  # noqa: F401
from .semantics import AnalysisConfig, DiversityResult, PairwiseComparison, cosine, internal_diversity, kmeans, pairwise_compare  # noqa: F401
from .stats import FeatureVector, correlate, minmax_profiles  # noqa: F401
