"""Independent oracle implementations and shared synthetic worlds.

Everything here deliberately avoids the library's own code paths: the
distance oracle works on literal subset intersections, the decoding oracle
enumerates whole tag sequences, and the generator specs are plain data.
"""

from __future__ import annotations

import itertools
import math

from relaxtag import TagSet, lexical_distribution
from relaxtag.synth import BOS, SyntheticSpec


def distance_oracle(values, labels) -> float:
    """Normalized partition distance via the three entropy sums, computed
    from explicit subset intersections."""
    n = len(values)
    parts_a = [
        {i for i in range(n) if values[i] == v} for v in sorted(set(values))
    ]
    parts_b = [
        {i for i in range(n) if labels[i] == l} for l in sorted(set(labels))
    ]

    def info(parts) -> float:
        total = 0.0
        for part in parts:
            p = len(part) / n
            if p > 0.0:
                total -= p * math.log2(p)
        return total

    i_a = info(parts_a)
    i_b = info(parts_b)
    i_ab = info([a & b for a in parts_a for b in parts_b])
    if i_ab == 0.0:
        return 0.0
    cond_b_given_a = i_ab - i_a
    cond_a_given_b = i_ab - i_b
    return (cond_b_given_a + cond_a_given_b) / i_ab


def viterbi_oracle(words, lex, tagset: TagSet, transitions, start) -> list[str]:
    """Best tag sequence by exhaustive enumeration.

    Scores accumulate left to right exactly like the dynamic program, so
    equal-scoring sequences compare identically; ties break toward the
    sequence that is lexicographically first in tag-set index order.
    """
    candidates = [list(lexical_distribution(lex, tagset, w).items()) for w in words]
    best = None
    for combo in itertools.product(*candidates):
        score = math.log(start[combo[0][0]]) + math.log(combo[0][1])
        for (prev, _), (tag, p_lex) in zip(combo, combo[1:]):
            score = score + math.log(transitions[prev][tag]) + math.log(p_lex)
        key = tuple(tagset.index(tag) for tag, _ in combo)
        if best is None or (score, tuple(-k for k in key)) > (best[0], tuple(-k for k in best[1])):
            best = (score, key, [tag for tag, _ in combo])
    return best[2]


def bigram_world() -> SyntheticSpec:
    """First-order world where left context genuinely disambiguates.

    'dn' is determiner after a preposition or sentence start but noun after
    a determiner; 'nv' is noun after a determiner but verb after a noun.
    """
    return SyntheticSpec(
        tags=("D", "N", "P", "V"),
        transitions={
            (BOS,): {"D": 0.7, "N": 0.3},
            ("D",): {"N": 1.0},
            ("N",): {"V": 0.65, "P": 0.35},
            ("V",): {"D": 0.65, "P": 0.35},
            ("P",): {"D": 0.6, "N": 0.4},
        },
        emissions={
            "D": {"the": 0.5, "a": 0.25, "dn": 0.25},
            "N": {"dog": 0.35, "cat": 0.25, "sun": 0.16, "dn": 0.06, "nv": 0.18},
            "V": {"runs": 0.4, "sleeps": 0.35, "nv": 0.25},
            "P": {"of": 0.7, "with": 0.3},
        },
        lengths={3: 0.2, 4: 0.25, 5: 0.25, 6: 0.2, 7: 0.1},
    )


def left2_world(trigger_bias: float = 0.55, signal: float = 0.9) -> SyntheticSpec:
    """Second-order world: the tag of every third position depends on the
    tag two positions back, with an uninformative filler in between.

    Sentences follow the pattern T M W M T M W ...; W words are ambiguous
    between U and V, and the trigger at -2 decides which.  Bigram models
    see no signal (the -1 neighbour is always M); a context tree over the
    left2 attribute captures it.
    """
    w_words = {f"w{k}": 0.25 for k in range(1, 5)}
    trigger = {"A": trigger_bias, "B": 1.0 - trigger_bias}
    return SyntheticSpec(
        tags=("A", "B", "M", "U", "V"),
        transitions={
            (BOS, BOS): dict(trigger),
            (BOS, "A"): {"M": 1.0},
            (BOS, "B"): {"M": 1.0},
            ("M", "A"): {"M": 1.0},
            ("M", "B"): {"M": 1.0},
            ("A", "M"): {"U": signal, "V": 1.0 - signal},
            ("B", "M"): {"V": signal, "U": 1.0 - signal},
            ("M", "U"): {"M": 1.0},
            ("M", "V"): {"M": 1.0},
            ("U", "M"): dict(trigger),
            ("V", "M"): dict(trigger),
        },
        emissions={
            "A": {"ta": 1.0},
            "B": {"tb": 1.0},
            "M": {"m": 1.0},
            "U": dict(w_words),
            "V": dict(w_words),
        },
        lengths={7: 0.5, 11: 0.5},
        order=2,
    )


def words_of(sentences):
    return [[w for w, _ in sent] for sent in sentences]


def noisy_tree_examples(rng, n: int, flip: float = 0.2, n_noise_values: int = 6):
    """Window examples whose label follows right1 (8 values, half P half Q)
    with `flip` label noise; the other five attributes are pure noise."""
    from relaxtag.trees import TrainingExample

    out = []
    for _ in range(n):
        values = [f"n{rng.integers(0, n_noise_values)}" for _ in range(6)]
        r1 = int(rng.integers(0, 8))
        values[4] = f"r{r1}"
        label = "P" if r1 < 4 else "Q"
        if rng.random() < flip:
            label = "Q" if label == "P" else "P"
        out.append(TrainingExample(tuple(values), label))
    return out


def random_constraint(rng):
    """A random valid constraint: explicit offsets or positional style with
    repeated spans, tag or word tests, optional negation and word target."""
    from relaxtag import Constraint, ContextItem
    import numpy as np

    tags = [f"T{k}" for k in range(8)]
    words = ["alpha", "beta", "gamma", "Delta"]
    compat = float(np.round(rng.normal() * 5, 6))
    if compat == 0.0:
        compat = 1.0
    target_words = (
        frozenset(rng.choice(words, size=int(rng.integers(1, 3)), replace=False))
        if rng.random() < 0.3
        else None
    )
    target = str(rng.choice(tags))

    def random_test():
        negated = bool(rng.random() < 0.3)
        if rng.random() < 0.75:
            payload = frozenset(
                str(t) for t in rng.choice(tags, size=int(rng.integers(1, 4)), replace=False)
            )
            return {"tags": payload, "negated": negated}
        payload = frozenset(
            str(w) for w in rng.choice(words, size=int(rng.integers(1, 3)), replace=False)
        )
        return {"words": payload, "negated": negated}

    if rng.random() < 0.5:
        offsets = rng.choice(range(-3, 3), size=int(rng.integers(1, 5)), replace=False)
        left, right = [], []
        for off in offsets:
            off = int(off)
            if off == 0:
                continue
            item = ContextItem(offset=off, **random_test())
            (left if off < 0 else right).append(item)
        if not left and not right:
            left = [ContextItem(offset=-1, **random_test())]
        return Constraint(compat, target, target_words, tuple(left), tuple(right))

    # positional constraint with at least one repeated span; anchors sit on
    # the outer side of every span
    def side(force_repeat):
        items = [ContextItem(**random_test())]
        if force_repeat or rng.random() < 0.6:
            items.append(ContextItem(repeated=True, **random_test()))
        return items  # outermost first

    left = side(force_repeat=True)
    right = side(force_repeat=False)[::-1]  # store nearest-first
    return Constraint(compat, target, target_words, tuple(left), tuple(right))
