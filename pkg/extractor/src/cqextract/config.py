from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class ExtractorConfig:
    """Deterministic extraction settings, embedded into every output file."""

    embedding_model: str = "all-MiniLM-L6-v2"
    embedding_backend: str = "auto"  # auto | st | hashed
    embedding_dim: int = 384
    llm_provider: str = "rule"       # rule | openai
    llm_model: str = "offline-rule-judge"
    temperature: float = 0.0
    frequency_penalty: float = 0.0
    presence_penalty: float = 0.0
    seed: int = 46

    def header(self) -> dict:
        return asdict(self)
