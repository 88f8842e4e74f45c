"""Category naming for dual-task sets."""
from __future__ import annotations

import enum
from importlib import resources
from pathlib import Path

from .errors import ConfigError

US_STATES = (
    "Alabama", "Alaska", "Arizona", "Arkansas", "California", "Colorado",
    "Connecticut", "Delaware", "Florida", "Georgia", "Hawaii", "Idaho",
    "Illinois", "Indiana", "Iowa", "Kansas", "Kentucky", "Louisiana", "Maine",
    "Maryland", "Massachusetts", "Michigan", "Minnesota", "Mississippi",
    "Missouri", "Montana", "Nebraska", "Nevada", "New Hampshire", "New Jersey",
    "New Mexico", "New York", "North Carolina", "North Dakota", "Ohio",
    "Oklahoma", "Oregon", "Pennsylvania", "Rhode Island", "South Carolina",
    "South Dakota", "Tennessee", "Texas", "Utah", "Vermont", "Virginia",
    "Washington", "West Virginia", "Wisconsin", "Wyoming",
)


class WordVerdict(str, enum.Enum):
    VALID = "valid"
    DUPLICATE = "duplicate"
    OUT_OF_CATEGORY = "out_of_category"


def normalize_word(word: str) -> str:
    return " ".join(word.split()).lower()


def read_word_file(path) -> frozenset[str]:
    text = Path(path).read_text(encoding="utf-8")
    words = {normalize_word(line) for line in text.splitlines()}
    words.discard("")
    if not words:
        raise ConfigError(f"word file {path} is empty")
    return frozenset(words)


class WordRegistry:
    """Maps a category id to its normalized word set.

    ``us_states`` is built in; ``animals`` ships as a bundled word file; more
    categories can be registered from plain-text files, one entry per line.
    """

    def __init__(self):
        self._categories: dict[str, frozenset[str]] = {
            "us_states": frozenset(normalize_word(s) for s in US_STATES),
        }
        bundled = resources.files("reachcoach") / "data" / "animals.txt"
        with resources.as_file(bundled) as path:
            self._categories["animals"] = read_word_file(path)

    def register(self, category: str, path) -> None:
        self._categories[category] = read_word_file(path)

    def words(self, category: str) -> frozenset[str]:
        try:
            return self._categories[category]
        except KeyError:
            raise ConfigError(f"no word list registered for category {category!r}") from None

    def __contains__(self, category: str) -> bool:
        return category in self._categories

    def categories(self) -> list[str]:
        return sorted(self._categories)


DEFAULT_REGISTRY = WordRegistry()


def validate_cognitive_word(word: str, category: str, used: set[str],
                            registry: WordRegistry = DEFAULT_REGISTRY) -> WordVerdict:
    """Classify ``word``; ``used`` holds normalized words already accepted."""
    vocab = registry.words(category)
    norm = normalize_word(word)
    if norm not in vocab:
        return WordVerdict.OUT_OF_CATEGORY
    if norm in used:
        return WordVerdict.DUPLICATE
    return WordVerdict.VALID
