"""Tagged corpora: parsing, lexicons, lexical probabilities, splits, statistics.

The corpus format is plain text, one sentence per line, tokens written as
``word_TAG`` and separated by whitespace.  Tokens are split at the last
underscore, so word forms may themselves contain underscores.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

TaggedSentence = list[tuple[str, str]]


class CorpusError(ValueError):
    """Base class for corpus, lexicon and corrections format errors."""


class MalformedTokenError(CorpusError):
    """A corpus token that cannot be split into word and tag."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, token {column}: {message}")
        self.line = line
        self.column = column


class UnknownTagError(CorpusError):
    """A tag outside the supplied tag set."""


class InvalidCorrectionError(CorpusError):
    """A lexicon correction that would leave a word without tags."""


def _default_open_class(tags: Iterable[str]) -> tuple[str, ...]:
    # Tags without any letter (punctuation, symbols) are closed classes:
    # an unknown word is never punctuation.
    return tuple(t for t in tags if any(c.isalpha() for c in t))


class TagSet:
    """Ordered tag inventory plus the open classes assignable to unknown words.

    The tag order is the canonical tie-breaking order used throughout the
    package (most-likely tagging, Viterbi decoding, relaxation output).
    """

    def __init__(self, tags: Iterable[str], open_class: Iterable[str] | None = None):
        tags = tuple(tags)
        seen: set[str] = set()
        for t in tags:
            if not t or any(c.isspace() for c in t):
                raise ValueError(f"invalid tag {t!r}: tags are non-empty and contain no whitespace")
            if t in seen:
                raise ValueError(f"duplicate tag {t!r}")
            seen.add(t)
        if open_class is None:
            open_class = _default_open_class(tags)
        open_class = tuple(dict.fromkeys(open_class))
        missing = [t for t in open_class if t not in seen]
        if missing:
            raise ValueError(f"open-class tags not in tag set: {missing}")
        self.tags = tags
        self.open_class = open_class
        self._index = {t: i for i, t in enumerate(tags)}

    @classmethod
    def from_sentences(
        cls, sentences: Iterable[TaggedSentence], open_class: Iterable[str] | None = None
    ) -> "TagSet":
        """Accumulate the inventory from tagged sentences, in sorted order."""
        return cls(sorted({tag for sent in sentences for _, tag in sent}), open_class)

    def __contains__(self, tag: str) -> bool:
        return tag in self._index

    def __len__(self) -> int:
        return len(self.tags)

    def __iter__(self):
        return iter(self.tags)

    def index(self, tag: str) -> int:
        return self._index[tag]

    def __repr__(self) -> str:
        return f"TagSet({len(self.tags)} tags, {len(self.open_class)} open-class)"


def parse_tagged_corpus(text: str, tagset: TagSet | None = None) -> list[TaggedSentence]:
    """Parse ``word_TAG`` tokens, one sentence per line.

    Empty lines are skipped.  When a tag set is supplied, every tag is
    validated against it; otherwise any tag is accepted (use
    :meth:`TagSet.from_sentences` afterwards to accumulate the inventory).
    """
    sentences: list[TaggedSentence] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        sentence: TaggedSentence = []
        for col, token in enumerate(line.split(), start=1):
            word, sep, tag = token.rpartition("_")
            if not sep:
                raise MalformedTokenError(f"token {token!r} has no underscore", lineno, col)
            if not word or not tag:
                raise MalformedTokenError(f"token {token!r} has an empty word or tag", lineno, col)
            if tagset is not None and tag not in tagset:
                raise UnknownTagError(f"line {lineno}, token {col}: unknown tag {tag!r}")
            sentence.append((word, tag))
        sentences.append(sentence)
    return sentences


def serialize_tagged_corpus(sentences: Iterable[TaggedSentence]) -> str:
    """Inverse of :func:`parse_tagged_corpus` (modulo blank lines)."""
    return "".join(" ".join(f"{w}_{t}" for w, t in sent) + "\n" for sent in sentences)


class Lexicon:
    """Per-word tag frequencies observed in a training corpus.

    Word forms are case-sensitive keys; every stored count is at least 1.
    """

    def __init__(self, entries: dict[str, dict[str, int]] | None = None):
        self._entries: dict[str, dict[str, int]] = {}
        if entries:
            for word, tags in entries.items():
                for tag, count in tags.items():
                    self.add(word, tag, count)

    def add(self, word: str, tag: str, count: int = 1) -> None:
        if count < 1:
            raise ValueError("lexicon counts are positive")
        entry = self._entries.setdefault(word, {})
        entry[tag] = entry.get(tag, 0) + count

    def __contains__(self, word: str) -> bool:
        return word in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lexicon) and self._entries == other._entries

    def words(self) -> list[str]:
        return sorted(self._entries)

    def tags(self, word: str) -> tuple[str, ...]:
        return tuple(sorted(self._entries.get(word, ())))

    def tag_count(self, word: str) -> int:
        return len(self._entries.get(word, ()))

    def is_ambiguous(self, word: str) -> bool:
        return self.tag_count(word) >= 2

    def count(self, word: str, tag: str) -> int:
        return self._entries.get(word, {}).get(tag, 0)

    def total(self, word: str) -> int:
        return sum(self._entries.get(word, {}).values())

    def entry(self, word: str) -> dict[str, int]:
        return dict(self._entries.get(word, {}))


def build_lexicon(train: Sequence[TaggedSentence]) -> Lexicon:
    """Count every (word, tag) occurrence of the training sentences."""
    if not train:
        raise ValueError("cannot build a lexicon from an empty corpus")
    lex = Lexicon()
    for sent in train:
        for word, tag in sent:
            lex.add(word, tag)
    return lex


def filter_lexicon(
    lex: Lexicon, corrections: Iterable[tuple[str, Iterable[str]]]
) -> Lexicon:
    """Restrict corrected words to their allowed tags; everything else is kept.

    Deleting all tags of a word (or correcting an unknown word) raises
    :class:`InvalidCorrectionError`.  The input lexicon is not modified.
    """
    allowed_by_word = {word: set(tags) for word, tags in corrections}
    for word in allowed_by_word:
        if word not in lex:
            raise InvalidCorrectionError(f"correction for unknown word {word!r}")
    out = Lexicon()
    for word in lex.words():
        allowed = allowed_by_word.get(word)
        for tag, count in lex.entry(word).items():
            if allowed is None or tag in allowed:
                out.add(word, tag, count)
        if allowed is not None and word not in out:
            raise InvalidCorrectionError(
                f"correction for {word!r} removes all of its tags"
            )
    return out


def lexical_distribution(lex: Lexicon, tagset: TagSet, word: str) -> dict[str, float]:
    """Probability over candidate tags for one word.

    Known words get their relative frequencies; unknown words get a uniform
    distribution over the open-class tags.  Keys follow the tag-set order.
    """
    if word in lex:
        total = lex.total(word)
        entry = lex.entry(word)
        unknown = [t for t in entry if t not in tagset]
        if unknown:
            raise UnknownTagError(f"lexicon tags {unknown} for {word!r} not in the tag set")
        return {
            tag: entry[tag] / total for tag in sorted(entry, key=tagset.index)
        }
    if not tagset.open_class:
        raise ValueError("unknown word but the tag set has no open-class tags")
    p = 1.0 / len(tagset.open_class)
    return {tag: p for tag in tagset.open_class}


def split_corpus(
    sentences: Sequence[TaggedSentence],
    fractions: Sequence[float],
    seed: int,
) -> tuple[list[TaggedSentence], ...]:
    """Random sentence-level partition, deterministic for a given seed.

    Split sizes use the largest-remainder rule, so exact fractions yield
    exact counts.  An empty split triggers a warning, not an error.
    """
    fractions = list(fractions)
    if any(f <= 0 for f in fractions):
        raise ValueError("split fractions must be positive")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError("split fractions must sum to 1")
    n = len(sentences)
    base = [int(np.floor(f * n)) for f in fractions]
    remainder = n - sum(base)
    by_frac_part = sorted(
        range(len(fractions)), key=lambda i: (-(fractions[i] * n - base[i]), i)
    )
    for i in by_frac_part[:remainder]:
        base[i] += 1
    order = np.random.default_rng(seed).permutation(n)
    splits: list[list[TaggedSentence]] = []
    start = 0
    for i, size in enumerate(base):
        if size == 0:
            warnings.warn(f"split {i} is empty ({n} sentences, fraction {fractions[i]})")
        splits.append([sentences[j] for j in order[start : start + size]])
        start += size
    return tuple(splits)


@dataclass
class CorpusStats:
    word_count: int
    ambiguous_fraction: float
    ambiguity_ratio_ambiguous: float
    ambiguity_ratio_overall: float


def corpus_stats(sentences: Iterable[TaggedSentence], lex: Lexicon) -> CorpusStats:
    """Token-weighted ambiguity statistics, using lexicon tag counts per word.

    Tokens absent from the lexicon count toward ``word_count`` only.
    """
    word_count = 0
    known = 0
    known_tags = 0
    ambiguous = 0
    ambiguous_tags = 0
    for sent in sentences:
        for word, _ in sent:
            word_count += 1
            k = lex.tag_count(word)
            if k == 0:
                continue
            known += 1
            known_tags += k
            if k >= 2:
                ambiguous += 1
                ambiguous_tags += k
    return CorpusStats(
        word_count=word_count,
        ambiguous_fraction=ambiguous / word_count if word_count else 0.0,
        ambiguity_ratio_ambiguous=ambiguous_tags / ambiguous if ambiguous else 0.0,
        ambiguity_ratio_overall=known_tags / known if known else 0.0,
    )


# ---------------------------------------------------------------------------
# File formats


def read_corpus(path: str | Path, tagset: TagSet | None = None) -> list[TaggedSentence]:
    return parse_tagged_corpus(Path(path).read_text(encoding="utf-8"), tagset)


def write_corpus(sentences: Iterable[TaggedSentence], path: str | Path) -> None:
    Path(path).write_text(serialize_tagged_corpus(sentences), encoding="utf-8")


def serialize_lexicon(lex: Lexicon) -> str:
    """One word per line: ``word TAG count TAG count ...`` (tags sorted)."""
    lines = []
    for word in lex.words():
        entry = lex.entry(word)
        fields = " ".join(f"{tag} {entry[tag]}" for tag in sorted(entry))
        lines.append(f"{word} {fields}\n")
    return "".join(lines)


def parse_lexicon(text: str) -> Lexicon:
    lex = Lexicon()
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields:
            continue
        word, rest = fields[0], fields[1:]
        if not rest or len(rest) % 2:
            raise CorpusError(f"line {lineno}: expected 'word TAG count ...'")
        for tag, count in zip(rest[::2], rest[1::2]):
            try:
                lex.add(word, tag, int(count))
            except ValueError as exc:
                raise CorpusError(f"line {lineno}: {exc}") from None
    return lex


def read_lexicon(path: str | Path) -> Lexicon:
    return parse_lexicon(Path(path).read_text(encoding="utf-8"))


def write_lexicon(lex: Lexicon, path: str | Path) -> None:
    Path(path).write_text(serialize_lexicon(lex), encoding="utf-8")


def parse_corrections(text: str) -> list[tuple[str, set[str]]]:
    """Corrections file: ``word TAG [TAG ...]`` per line, listing allowed tags."""
    corrections = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) < 2:
            raise CorpusError(f"line {lineno}: expected 'word TAG [TAG ...]'")
        corrections.append((fields[0], set(fields[1:])))
    return corrections


def read_corrections(path: str | Path) -> list[tuple[str, set[str]]]:
    return parse_corrections(Path(path).read_text(encoding="utf-8"))
