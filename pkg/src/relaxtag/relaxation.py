"""Relaxation-labelling tagging engine.

Every word of a sentence holds a weight vector over its candidate tags.
Each iteration computes, for every (word, tag) pair, the summed influence
of all applicable constraints (compatibility times the product of the
current weights of the context factors), squashes it into [-1, +1], and
applies the multiplicative update p <- p (1 + S) / sum_k p_k (1 + S_k)
until the weights stop changing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .constraints import ConstraintSet, Factor, instantiate
from .corpus import Lexicon, TagSet, lexical_distribution


@dataclass
class RelaxParams:
    max_iterations: int = 50
    epsilon: float = 1e-3
    support_norm: str = "rational"  # or "clamp"
    divisor: float = 1.0

    def __post_init__(self):
        if self.support_norm not in ("rational", "clamp"):
            raise ValueError("support_norm must be 'rational' or 'clamp'")
        if self.divisor <= 0:
            raise ValueError("divisor must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass
class Diagnostics:
    iterations: int = 0
    max_change: float = 0.0
    instantiations: int = 0
    norm_violation: float = 0.0
    frozen_words: int = 0

    def record(self, sentence_id: str | int) -> str:
        return f"{sentence_id} {self.iterations} {self.max_change:.6e} {self.instantiations}"


class WeightedLabelling:
    """Candidate tags and normalized weights for each word of one sentence.

    Candidate sets never change; only the weights do.
    """

    def __init__(
        self,
        words: Sequence[str],
        candidates: Sequence[tuple[str, ...]],
        weights: Sequence[Sequence[float]],
    ):
        if not (len(words) == len(candidates) == len(weights)):
            raise ValueError("words, candidates and weights must align")
        self.words = list(words)
        self.candidates = [tuple(c) for c in candidates]
        self.weights = [np.asarray(w, dtype=float) for w in weights]
        self._index = [{t: k for k, t in enumerate(c)} for c in self.candidates]
        for cand, w in zip(self.candidates, self.weights):
            if len(cand) != w.size or not cand:
                raise ValueError("candidate/weight size mismatch")

    def __len__(self) -> int:
        return len(self.words)

    def weight(self, i: int, tag: str) -> float:
        k = self._index[i].get(tag)
        return float(self.weights[i][k]) if k is not None else 0.0

    def mass(self, i: int, tags: frozenset[str]) -> float:
        idx = self._index[i]
        return float(sum(self.weights[i][idx[t]] for t in tags if t in idx))

    def copy(self) -> "WeightedLabelling":
        return WeightedLabelling(self.words, self.candidates, [w.copy() for w in self.weights])

    def normalization_error(self) -> float:
        return max(abs(float(w.sum()) - 1.0) for w in self.weights)

    def argmax_tags(self, prefer: Sequence[dict[str, float]] | None = None) -> list[str]:
        """Highest-weight tag per word; ties prefer the higher value in
        ``prefer`` (lexical probabilities), then earlier candidate order."""
        out = []
        for i, cand in enumerate(self.candidates):
            w = self.weights[i]
            best = float(w.max())
            tied = [k for k in range(len(cand)) if w[k] == best]
            if len(tied) > 1 and prefer is not None:
                ranked = max(tied, key=lambda k: (prefer[i].get(cand[k], 0.0), -k))
                out.append(cand[ranked])
            else:
                out.append(cand[tied[0]])
        return out


def init_weights(words: Sequence[str], lex: Lexicon, tagset: TagSet) -> WeightedLabelling:
    """Start from the lexical probabilities; unknown words get a uniform
    distribution over the open-class tags."""
    candidates = []
    weights = []
    for word in words:
        dist = lexical_distribution(lex, tagset, word)
        candidates.append(tuple(dist))
        weights.append(list(dist.values()))
    return WeightedLabelling(words, candidates, weights)


def _factor_value(labelling: WeightedLabelling, factor: Factor) -> float:
    pos, tags, negated = factor
    mass = labelling.mass(pos, tags)
    return 1.0 - mass if negated else mass


def raw_support(
    labelling: WeightedLabelling,
    constraint_sets: Iterable[ConstraintSet],
    i: int,
    j: str,
) -> float:
    """Summed influence of every applicable constraint on candidate j of
    word i: compatibility times the product of the current factor weights,
    over every instantiation."""
    total = 0.0
    for cset in constraint_sets:
        for constraint in cset.lookup(labelling.words[i], j):
            for factors in instantiate(constraint, labelling.words, i, j):
                value = constraint.compatibility
                for factor in factors:
                    value *= _factor_value(labelling, factor)
                total += value
    return total


def normalize_support(raw: float, params: RelaxParams | None = None) -> float:
    """Map a raw support into [-1, +1]; monotone, sign-preserving, 0 -> 0."""
    params = params or RelaxParams()
    scaled = raw / params.divisor
    if params.support_norm == "rational":
        return scaled / (1.0 + abs(scaled))
    return min(1.0, max(-1.0, scaled))


def update_step(
    labelling: WeightedLabelling, supports: Sequence[np.ndarray]
) -> tuple[WeightedLabelling, int]:
    """One multiplicative update; returns the new labelling and the number
    of words frozen because their update denominator vanished."""
    new_weights = []
    frozen = 0
    for w, s in zip(labelling.weights, supports):
        scaled = w * (1.0 + np.asarray(s, dtype=float))
        denom = scaled.sum()
        if denom <= 0.0:
            new_weights.append(w.copy())
            frozen += 1
        else:
            new_weights.append(scaled / denom)
    return (
        WeightedLabelling(labelling.words, labelling.candidates, new_weights),
        frozen,
    )


def _compile_program(
    labelling: WeightedLabelling, constraint_sets: Sequence[ConstraintSet]
) -> tuple[list[list[list[tuple[float, tuple[Factor, ...]]]]], int]:
    """Precompute, for every (word, candidate) pair, the applicable
    constraint instantiations.  They depend only on the sentence structure,
    so the iteration loop just re-evaluates the weight products."""
    program: list[list[list[tuple[float, tuple[Factor, ...]]]]] = []
    count = 0
    for i, cands in enumerate(labelling.candidates):
        per_word = []
        for j in cands:
            entries: list[tuple[float, tuple[Factor, ...]]] = []
            if len(cands) > 1:  # singleton words keep weight 1 regardless
                for cset in constraint_sets:
                    for constraint in cset.lookup(labelling.words[i], j):
                        for factors in instantiate(constraint, labelling.words, i, j):
                            entries.append((constraint.compatibility, factors))
            count += len(entries)
            per_word.append(entries)
        program.append(per_word)
    return program, count


def run(
    words: Sequence[str],
    constraint_sets: Sequence[ConstraintSet],
    lex: Lexicon,
    tagset: TagSet,
    params: RelaxParams | None = None,
) -> tuple[list[str], Diagnostics]:
    """Relax one sentence to convergence and read off the argmax tags.

    Stops when the largest absolute weight change drops below epsilon or
    after max_iterations.  Output ties break toward the higher lexical
    probability, then earlier tag order.
    """
    params = params or RelaxParams()
    if not words:
        return [], Diagnostics()
    labelling = init_weights(words, lex, tagset)
    lexical = [
        {t: float(w) for t, w in zip(c, wts)}
        for c, wts in zip(labelling.candidates, labelling.weights)
    ]
    program, n_inst = _compile_program(labelling, constraint_sets)
    diag = Diagnostics(instantiations=n_inst)
    for iteration in range(1, params.max_iterations + 1):
        supports = []
        for i, per_word in enumerate(program):
            s = np.zeros(len(per_word))
            for k, entries in enumerate(per_word):
                raw = 0.0
                for compatibility, factors in entries:
                    value = compatibility
                    for factor in factors:
                        value *= _factor_value(labelling, factor)
                    raw += value
                s[k] = normalize_support(raw, params)
            supports.append(s)
        updated, frozen = update_step(labelling, supports)
        diag.frozen_words += frozen
        diag.max_change = max(
            float(np.max(np.abs(a - b)))
            for a, b in zip(updated.weights, labelling.weights)
        )
        diag.norm_violation = max(diag.norm_violation, updated.normalization_error())
        labelling = updated
        diag.iterations = iteration
        if diag.max_change < params.epsilon:
            break
    return labelling.argmax_tags(prefer=lexical), diag
