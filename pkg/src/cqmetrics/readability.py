"""Text-unit counting and grade-level readability indices.

Counting rules (kept deliberately simple so results are reproducible
anywhere, with no locale or model dependencies):

* sentences: maximal runs of ``.``, ``?``, ``!`` end a sentence; a text
  with no terminator is one sentence;
* words: maximal runs of alphanumeric characters, with internal hyphens
  joining ("well-known" is one word); all other punctuation is discarded;
* syllables: count maximal vowel clusters (a e i o u y), subtract one for
  a terminal silent "e" unless that would reach zero; minimum one;
* difficult words: lowercase token not on the familiar-word list after
  stripping simple inflections (-s, -es, -ed, -ing, undoing consonant
  doubling and restoring a silent "e"); purely numeric tokens and
  hyphenated words whose every part is familiar count as familiar.

The indices themselves are closed-form functions of the counts:

    FKGL = 11.8 * (syllables/words) + 0.39 * (words/sentences) - 15.59
    DCR  = 0.1579 * (difficult/words * 100) + 0.0496 * (words/sentences)
    GFI  = 0.4 * (words/sentences + 100 * complex3syl/words)
    CLI  = 0.0588 * L - 0.296 * Sw - 15.8     (per 100 words)
    ARI  = 4.71 * (chars/words) + 0.5 * (words/sentences) - 21.43

DCR is the plain two-term form; the classic +3.6365 adjustment for texts
with more than 5% difficult words is available behind ``adjusted_dcr``.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import InputError
from .stats import mean_std

_WORD = re.compile(r"[A-Za-z0-9]+(?:-[A-Za-z0-9]+)*")
_SENTENCE_END = re.compile(r"[.?!]+")
_VOWEL_GROUP = re.compile(r"[aeiouy]+")

_BUNDLED_LIST = "dale_chall_familiar.txt"


@dataclass(frozen=True)
class TextCounts:
    sentences: int
    words: int
    syllables: int
    characters_alnum: int
    difficult_words: int
    complex_words_3syl: int


@dataclass(frozen=True)
class ReadabilityScores:
    fkgl: float
    dcr: float
    gfi: float
    cli: float
    ari: float


def bundled_list_checksum() -> str:
    """SHA-256 recorded for the bundled familiar-word list."""
    data = resources.files(__package__).joinpath("data", _BUNDLED_LIST).read_bytes()
    return hashlib.sha256(data).hexdigest()


def load_familiar_words(path: str | Path | None = None) -> frozenset[str]:
    """Load a familiar-word list (one lowercase word per line, '#' comments)."""
    if path is None:
        text = resources.files(__package__).joinpath("data", _BUNDLED_LIST).read_text("utf-8")
        recorded = resources.files(__package__).joinpath(
            "data", _BUNDLED_LIST.replace(".txt", ".sha256")).read_text("utf-8").strip()
        if hashlib.sha256(text.encode("utf-8")).hexdigest() != recorded:
            raise InputError("bundled familiar-word list does not match its recorded checksum")
    else:
        text = Path(path).read_text("utf-8")
    words = {line.strip().lower() for line in text.splitlines()
             if line.strip() and not line.startswith("#")}
    if not words:
        raise InputError("familiar-word list is empty")
    return frozenset(words)


@lru_cache(maxsize=1)
def _default_familiar() -> frozenset[str]:
    return load_familiar_words(None)


def split_sentences(text: str) -> list[str]:
    parts = [p.strip() for p in _SENTENCE_END.split(text)]
    return [p for p in parts if p] or [text.strip()]


def tokenize_words(text: str) -> list[str]:
    return _WORD.findall(text)


def syllable_count(word: str) -> int:
    letters = "".join(ch for ch in word.lower() if ch.isalpha())
    if not letters:
        return 1
    groups = len(_VOWEL_GROUP.findall(letters))
    if letters.endswith("e") and groups > 1:
        groups -= 1
    return max(groups, 1)


def _inflection_variants(token: str) -> set[str]:
    variants = {token}
    if token.endswith("s") and len(token) > 1:
        variants.add(token[:-1])
    if token.endswith("es") and len(token) > 2:
        variants.add(token[:-2])
    for suffix in ("ed", "ing"):
        if token.endswith(suffix) and len(token) > len(suffix):
            base = token[: -len(suffix)]
            variants.add(base)
            variants.add(base + "e")
            if len(base) >= 2 and base[-1] == base[-2]:
                variants.add(base[:-1])
    return variants


def is_familiar(word: str, familiar: frozenset[str]) -> bool:
    token = word.lower()
    if token.isdigit():
        return True
    if "-" in token:
        return all(is_familiar(part, familiar) for part in token.split("-") if part)
    return any(v in familiar for v in _inflection_variants(token))


def text_counts(text: str, familiar: frozenset[str] | None = None) -> TextCounts:
    """Count sentences, words, syllables, characters and difficult words."""
    if not text or not text.strip():
        raise InputError("empty text")
    if familiar is None:
        familiar = _default_familiar()
    words = tokenize_words(text)
    if not words:
        raise InputError("no words in text")
    syllables = [syllable_count(w) for w in words]
    return TextCounts(
        sentences=len(split_sentences(text)),
        words=len(words),
        syllables=sum(syllables),
        characters_alnum=sum(1 for w in words for ch in w if ch.isalnum()),
        difficult_words=sum(1 for w in words if not is_familiar(w, familiar)),
        complex_words_3syl=sum(1 for s in syllables if s >= 3),
    )


def readability_scores(counts: TextCounts, adjusted_dcr: bool = False) -> ReadabilityScores:
    """Evaluate the index formulas for one set of counts."""
    w = counts.words
    s = counts.sentences
    if w < 1 or s < 1:
        raise InputError("counts must cover at least one word and one sentence")
    fkgl = 11.8 * (counts.syllables / w) + 0.39 * (w / s) - 15.59
    pct_difficult = counts.difficult_words / w * 100
    dcr = 0.1579 * pct_difficult + 0.0496 * (w / s)
    if adjusted_dcr and pct_difficult > 5.0:
        dcr += 3.6365
    gfi = 0.4 * (w / s + 100 * counts.complex_words_3syl / w)
    cli = 0.0588 * (counts.characters_alnum / w * 100) - 0.296 * (s / w * 100) - 15.8
    ari = 4.71 * (counts.characters_alnum / w) + 0.5 * (w / s) - 21.43
    return ReadabilityScores(fkgl=fkgl, dcr=dcr, gfi=gfi, cli=cli, ari=ari)


def score_text(text: str, familiar: frozenset[str] | None = None,
               adjusted_dcr: bool = False) -> ReadabilityScores:
    return readability_scores(text_counts(text, familiar), adjusted_dcr=adjusted_dcr)


def set_readability(
    scores: Sequence[ReadabilityScores],
    indices: Iterable[str] = ("fkgl", "dcr"),
) -> dict[str, tuple[float, float]]:
    """Aggregate per-question scores into mean and sample std per index."""
    if not scores:
        raise InputError("empty set")
    return {name: mean_std([getattr(sc, name) for sc in scores]) for name in indices}
