"""Within-sentence tag n-gram statistics and the constraints derived from them.

Only observed n-grams are stored and only observed n-grams yield
constraints; the compatibility of an n-gram constraint is the pointwise
mutual information of the tag sequence against the independence product,
with every probability a relative frequency over the training token count.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .constraints import Constraint, ConstraintSet, ContextItem
from .corpus import TaggedSentence, TagSet


@dataclass
class NgramTable:
    order: int
    counts: dict[tuple[str, ...], int]
    unigrams: dict[str, int]
    total_tokens: int


def collect_ngrams(train: Iterable[TaggedSentence], order: int) -> NgramTable:
    """Count consecutive within-sentence tag sequences of the given order."""
    if order not in (2, 3):
        raise ValueError("order must be 2 or 3")
    counts: Counter[tuple[str, ...]] = Counter()
    unigrams: Counter[str] = Counter()
    total = 0
    for sent in train:
        tags = [t for _, t in sent]
        unigrams.update(tags)
        total += len(tags)
        for k in range(len(tags) - order + 1):
            counts[tuple(tags[k : k + order])] += 1
    return NgramTable(order, dict(counts), dict(unigrams), total)


def ngrams_to_constraints(table: NgramTable) -> ConstraintSet:
    """One constraint per observed n-gram per anchor position.

    A bigram (a, b) yields a constraint targeting a with right neighbour b
    and one targeting b with left neighbour a; trigrams anchor at each of
    their three positions.  All constraints of one n-gram share its PMI.
    """
    if not table.counts:
        raise ValueError("empty n-gram table")
    total = table.total_tokens
    source = {2: "bigram", 3: "trigram"}.get(table.order, f"{table.order}-gram")
    out = ConstraintSet(source=source)
    for seq in sorted(table.counts):
        p_seq = table.counts[seq] / total
        independent = math.prod(table.unigrams[t] / total for t in seq)
        pmi = math.log2(p_seq / independent)
        for anchor, target in enumerate(seq):
            left = tuple(
                ContextItem(tags=frozenset({t}), offset=k - anchor)
                for k, t in enumerate(seq)
                if k < anchor
            )
            right = tuple(
                ContextItem(tags=frozenset({t}), offset=k - anchor)
                for k, t in enumerate(seq)
                if k > anchor
            )
            out.add(Constraint(pmi, target, None, left, right))
    return out


def transition_probabilities(
    table: NgramTable, tagset: TagSet
) -> dict[str, dict[str, float]]:
    """Add-one-smoothed conditionals p(next | previous) from a bigram table.

    Every row is positive and normalized; a history never observed gets the
    uniform distribution.
    """
    if table.order != 2:
        raise ValueError("transition probabilities need an order-2 table")
    m = len(tagset)
    row_totals: Counter[str] = Counter()
    for (prev, _), count in table.counts.items():
        row_totals[prev] += count
    return {
        prev: {
            nxt: (table.counts.get((prev, nxt), 0) + 1) / (row_totals[prev] + m)
            for nxt in tagset
        }
        for prev in tagset
    }


def start_probabilities(table: NgramTable, tagset: TagSet) -> dict[str, float]:
    """Add-one-smoothed unigram distribution, used as the decoder's start row.

    The table keeps no sentence-initial counts, so the overall tag
    distribution stands in for the start state.
    """
    m = len(tagset)
    total = sum(table.unigrams.get(t, 0) for t in tagset)
    return {t: (table.unigrams.get(t, 0) + 1) / (total + m) for t in tagset}


# ---------------------------------------------------------------------------
# File format: one entry per line, `TAG [TAG [TAG]] count`, sorted.  Unigram
# lines ride along with the n-gram lines so the table round-trips fully.


def serialize_ngram_table(table: NgramTable) -> str:
    entries = [((tag,), count) for tag, count in table.unigrams.items()]
    entries.extend(table.counts.items())
    entries.sort()
    return "".join(" ".join(seq) + f" {count}\n" for seq, count in entries)


def parse_ngram_table(text: str) -> NgramTable:
    counts: dict[tuple[str, ...], int] = {}
    unigrams: dict[str, int] = {}
    order = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields:
            continue
        try:
            count = int(fields[-1])
        except ValueError:
            raise ValueError(f"line {lineno}: bad count {fields[-1]!r}") from None
        seq = tuple(fields[:-1])
        if not seq or count < 1:
            raise ValueError(f"line {lineno}: expected 'TAG [TAG [TAG]] count'")
        if len(seq) == 1:
            unigrams[seq[0]] = count
        else:
            counts[seq] = count
            order = max(order, len(seq))
    return NgramTable(order, counts, unigrams, sum(unigrams.values()))


def read_ngram_table(path: str | Path) -> NgramTable:
    return parse_ngram_table(Path(path).read_text(encoding="utf-8"))


def write_ngram_table(table: NgramTable, path: str | Path) -> None:
    Path(path).write_text(serialize_ngram_table(table), encoding="utf-8")
