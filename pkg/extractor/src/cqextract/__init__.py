"""Extraction sidecar: turns a question dataset into the interchange files
(annotations, embeddings, LLM assessments) consumed by the analysis toolkit."""

__version__ = "0.1.0"

from .config import ExtractorConfig  # noqa: F401
