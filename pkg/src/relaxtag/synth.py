"""Seeded synthetic tagged-corpus generation for experiments and tests.

Tag sequences come from a Markov chain over tags (order 1 or 2), words from
per-tag emission tables, sentence lengths from an explicit distribution.
Histories shorter than the order are padded with the BOS marker, so the
transition table also covers sentence-initial positions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .corpus import TaggedSentence

BOS = "<BOS>"


class SpecValidationError(ValueError):
    """A generator specification that is not properly normalized."""


def _check_distribution(name: str, dist: Mapping, tol: float = 1e-9) -> None:
    values = np.array(list(dist.values()), dtype=float)
    if values.size == 0:
        raise SpecValidationError(f"{name}: empty distribution")
    if (values < 0).any():
        raise SpecValidationError(f"{name}: negative probability")
    if abs(values.sum() - 1.0) > tol:
        raise SpecValidationError(f"{name}: probabilities sum to {values.sum()}, not 1")


@dataclass
class SyntheticSpec:
    """Generator specification.

    ``transitions`` maps a history tuple of ``order`` previous tags (padded
    with BOS) to a distribution over next tags; ``emissions`` maps each tag
    to a distribution over word forms; ``lengths`` is the sentence-length
    distribution.
    """

    tags: tuple[str, ...]
    transitions: dict[tuple[str, ...], dict[str, float]]
    emissions: dict[str, dict[str, float]]
    lengths: dict[int, float]
    order: int = 1

    def validate(self) -> None:
        if self.order not in (1, 2):
            raise SpecValidationError("order must be 1 or 2")
        if not self.tags:
            raise SpecValidationError("no tags")
        start = (BOS,) * self.order
        if start not in self.transitions:
            raise SpecValidationError(f"missing start history {start}")
        for history, dist in self.transitions.items():
            if len(history) != self.order:
                raise SpecValidationError(f"history {history} has wrong length")
            _check_distribution(f"transitions{history}", dist)
            unknown = set(dist) - set(self.tags)
            if unknown:
                raise SpecValidationError(f"transitions{history}: unknown tags {unknown}")
        for tag in self.tags:
            if tag not in self.emissions:
                raise SpecValidationError(f"tag {tag} has no emissions")
            _check_distribution(f"emissions[{tag}]", self.emissions[tag])
        _check_distribution("lengths", self.lengths)
        if any(int(l) < 1 for l in self.lengths):
            raise SpecValidationError("sentence lengths must be at least 1")

    def to_json(self) -> str:
        payload = {
            "tags": list(self.tags),
            "order": self.order,
            "transitions": {
                " ".join(h): dist for h, dist in self.transitions.items()
            },
            "emissions": self.emissions,
            "lengths": {str(l): p for l, p in self.lengths.items()},
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SyntheticSpec":
        payload = json.loads(text)
        return cls(
            tags=tuple(payload["tags"]),
            transitions={
                tuple(h.split()): dist
                for h, dist in payload["transitions"].items()
            },
            emissions=payload["emissions"],
            lengths={int(l): p for l, p in payload["lengths"].items()},
            order=payload.get("order", 1),
        )


def _sampler(dist: Mapping, rng: np.random.Generator):
    keys = sorted(dist)
    probs = np.array([dist[k] for k in keys], dtype=float)
    probs = probs / probs.sum()
    cumulative = np.cumsum(probs)

    def draw():
        k = int(np.searchsorted(cumulative, rng.random(), side="right"))
        return keys[min(k, len(keys) - 1)]  # guard the last-bin rounding edge

    return draw


def generate_synthetic_corpus(
    spec: SyntheticSpec, size: int, seed: int
) -> list[TaggedSentence]:
    """Sample whole sentences until at least ``size`` tokens are produced.

    Deterministic for a given seed: same spec and seed give a byte-identical
    corpus.
    """
    spec.validate()
    rng = np.random.default_rng(seed)
    draw_length = _sampler(spec.lengths, rng)
    draw_next = {h: _sampler(d, rng) for h, d in sorted(spec.transitions.items())}
    draw_word = {t: _sampler(d, rng) for t, d in sorted(spec.emissions.items())}
    sentences: list[TaggedSentence] = []
    produced = 0
    while produced < size:
        length = int(draw_length())
        history = (BOS,) * spec.order
        sentence: TaggedSentence = []
        for _ in range(length):
            if history not in draw_next:
                raise SpecValidationError(f"no transition row for history {history}")
            tag = draw_next[history]()
            sentence.append((draw_word[tag](), tag))
            history = history[1:] + (tag,)
        sentences.append(sentence)
        produced += length
    return sentences


def read_spec(path: str | Path) -> SyntheticSpec:
    return SyntheticSpec.from_json(Path(path).read_text(encoding="utf-8"))
