"""Baseline taggers, model combinations and accuracy reporting."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .constraints import ConstraintSet
from .corpus import Lexicon, TaggedSentence, TagSet, lexical_distribution

MODEL_FLAGS = ("B", "T", "C", "H")
BASELINES = ("ML", "HMM")


@dataclass(frozen=True)
class ModelCombination:
    """A join of constraint sources (any of B, T, C, H) or a baseline."""

    flags: tuple[str, ...]

    def __post_init__(self):
        if not self.flags:
            raise ValueError("empty model combination")
        if any(f in BASELINES for f in self.flags) and len(self.flags) > 1:
            raise ValueError("ML/HMM cannot join other models")
        bad = [f for f in self.flags if f not in MODEL_FLAGS + BASELINES]
        if bad:
            raise ValueError(f"unknown model flags {bad}")

    @classmethod
    def parse(cls, spec: str) -> "ModelCombination":
        """Accepts 'BC', 'B,C', 'ml', 'tch', ..."""
        text = spec.replace(",", "").replace("+", "").strip().upper()
        if text in BASELINES:
            return cls((text,))
        flags = tuple(f for f in MODEL_FLAGS if f in text)
        leftover = set(text) - set("".join(flags))
        if leftover or not flags:
            raise ValueError(f"cannot parse model combination {spec!r}")
        return cls(flags)

    @property
    def is_baseline(self) -> bool:
        return self.flags[0] in BASELINES

    def __str__(self) -> str:
        return "".join(self.flags)

    def constraint_sets(
        self, available: Mapping[str, ConstraintSet]
    ) -> list[ConstraintSet]:
        missing = [f for f in self.flags if f not in available]
        if missing:
            raise KeyError(f"no constraint set built for {missing}")
        return [available[f] for f in self.flags]


def tag_most_likely(
    words: Sequence[str], lex: Lexicon, tagset: TagSet
) -> list[str]:
    """Per-word argmax lexical probability; ties break toward earlier tag
    order, unknown words take the first open-class tag."""
    out = []
    for word in words:
        dist = lexical_distribution(lex, tagset, word)
        best = max(dist.values())
        out.append(next(t for t, p in dist.items() if p == best))
    return out


def tag_viterbi_bigram(
    words: Sequence[str],
    lex: Lexicon,
    tagset: TagSet,
    transitions: Mapping[str, Mapping[str, float]],
    start: Mapping[str, float] | None = None,
) -> list[str]:
    """Max-product decoding of score = prod p(t_i | t_{i-1}) p_lex(t_i | w_i).

    The start row defaults to uniform.  Among maximum-scoring sequences the
    lexicographically first one (comparing tag-set indices left to right) is
    returned, which makes the output checkable against exhaustive search.
    """
    candidates = [list(lexical_distribution(lex, tagset, w).items()) for w in words]
    if start is None:
        start = {t: 1.0 / len(tagset) for t in tagset}
    # state -> (log score, path as tag-set indices, path as tags)
    beam: dict[str, tuple[float, tuple[int, ...], list[str]]] = {}
    for tag, p_lex in candidates[0]:
        beam[tag] = (
            math.log(start[tag]) + math.log(p_lex),
            (tagset.index(tag),),
            [tag],
        )
    for cands in candidates[1:]:
        new_beam: dict[str, tuple[float, tuple[int, ...], list[str]]] = {}
        for tag, p_lex in cands:
            emit = math.log(p_lex)
            best = None
            for prev, (score, key, path) in beam.items():
                cand_score = score + math.log(transitions[prev][tag]) + emit
                cand_key = key + (tagset.index(tag),)
                if best is None or (cand_score, tuple(-k for k in cand_key)) > (
                    best[0],
                    tuple(-k for k in best[1]),
                ):
                    best = (cand_score, cand_key, path + [tag])
            new_beam[tag] = best
        beam = new_beam
    final = max(beam.values(), key=lambda s: (s[0], tuple(-k for k in s[1])))
    return final[2]


@dataclass
class EvalReport:
    token_count: int
    ambiguous_count: int
    correct_overall: int
    correct_ambiguous: int
    error_pairs: Counter = field(default_factory=Counter)

    @property
    def accuracy_overall(self) -> float:
        return self.correct_overall / self.token_count if self.token_count else 1.0

    @property
    def accuracy_ambiguous(self) -> float:
        return (
            self.correct_ambiguous / self.ambiguous_count if self.ambiguous_count else 1.0
        )

    @property
    def errors(self) -> int:
        return self.token_count - self.correct_overall

    def top_errors(self, k: int = 10) -> list[tuple[str, str, int]]:
        """Most frequent (gold, predicted) confusions, XX/YY style."""
        return [
            (gold, pred, count)
            for (gold, pred), count in self.error_pairs.most_common(k)
        ]


def evaluate(
    gold: Sequence[TaggedSentence],
    predicted: Sequence[Sequence[str]],
    lex: Lexicon,
) -> EvalReport:
    """Token accuracy overall and over ambiguous words.

    A token counts as ambiguous when its word has two or more lexicon tags
    or is unknown (unknown words always have several candidates).  Error
    pairs are tallied as (gold XX, predicted YY).
    """
    if len(gold) != len(predicted):
        raise ValueError("gold and predicted corpora are not aligned")
    report = EvalReport(0, 0, 0, 0)
    for sent, tags in zip(gold, predicted):
        if len(sent) != len(tags):
            raise ValueError("gold and predicted sentences are not aligned")
        for (word, gold_tag), pred_tag in zip(sent, tags):
            ambiguous = word not in lex or lex.is_ambiguous(word)
            report.token_count += 1
            report.ambiguous_count += ambiguous
            if pred_tag == gold_tag:
                report.correct_overall += 1
                report.correct_ambiguous += ambiguous
            else:
                report.error_pairs[(gold_tag, pred_tag)] += 1
    return report


def format_report_table(reports: Mapping[str, EvalReport]) -> str:
    """Aligned plain-text table with ambiguous and overall columns."""
    width = max([len(name) for name in reports] + [5])
    lines = [f"{'model':<{width}}  ambiguous   overall"]
    for name, r in reports.items():
        lines.append(
            f"{name:<{width}}  {100 * r.accuracy_ambiguous:8.2f}%  {100 * r.accuracy_overall:7.2f}%"
        )
    return "\n".join(lines) + "\n"


def format_error_table(
    reports: Mapping[str, EvalReport], pairs: Iterable[tuple[str, str]]
) -> str:
    """Error counts per (gold, predicted) pair and model, XX/YY columns."""
    pairs = list(pairs)
    names = list(reports)
    width = max([len(f"{g}/{p}") for g, p in pairs] + [8])
    lines = [f"{'error':<{width}}  " + "  ".join(f"{n:>6}" for n in names)]
    for gold_tag, pred_tag in pairs:
        counts = "  ".join(
            f"{reports[n].error_pairs.get((gold_tag, pred_tag), 0):>6}" for n in names
        )
        lines.append(f"{gold_tag + '/' + pred_tag:<{width}}  {counts}")
    return "\n".join(lines) + "\n"


def report_record(name: str, report: EvalReport) -> str:
    """Machine-readable line: name, accuracies, error and token counts."""
    return (
        f"{name} {report.accuracy_ambiguous:.6f} {report.accuracy_overall:.6f} "
        f"{report.errors} {report.token_count}"
    )
