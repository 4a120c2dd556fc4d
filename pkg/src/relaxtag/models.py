"""End-to-end pipelines: train constraint sources from a corpus, tag with
any combination of them, and evaluate."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .constraints import Constraint, ConstraintSet, compile_tree
from .corpus import Lexicon, TaggedSentence, TagSet, build_lexicon
from .evaluation import ModelCombination, tag_most_likely, tag_viterbi_bigram
from .ngrams import (
    collect_ngrams,
    ngrams_to_constraints,
    start_probabilities,
    transition_probabilities,
)
from .relaxation import Diagnostics, RelaxParams, run
from .trees import (
    AmbiguityClass,
    DecisionTree,
    LearnerParams,
    build_examples,
    extract_ambiguity_classes,
    grow_tree,
    node_count,
    prune_tree,
)


@dataclass
class LearnedTree:
    """Record of one per-class learning run."""

    ambiguity_class: AmbiguityClass
    tree: DecisionTree
    n_grow: int
    n_holdout: int
    nodes_grown: int
    nodes_pruned: int
    constraints: list[Constraint]


def learn_tree_constraints(
    train: Sequence[TaggedSentence],
    lex: Lexicon,
    params: LearnerParams | None = None,
    seed: int = 0,
) -> tuple[ConstraintSet, list[LearnedTree]]:
    """Learn one pruned tree per frequent ambiguity class and compile the
    trees into constraints.

    Classes below ``min_examples`` are skipped; trees pruned down to a bare
    root carry no context information and contribute no constraints.
    """
    params = params or LearnerParams()
    rng = np.random.default_rng(seed)
    learned: list[LearnedTree] = []
    out = ConstraintSet(source="learned")
    for cls in extract_ambiguity_classes(train, lex)[: params.top_k_classes]:
        examples = build_examples(cls, train, params.window)
        if len(examples) < params.min_examples:
            continue
        order = rng.permutation(len(examples))
        n_holdout = int(len(examples) * params.holdout_fraction)
        holdout = [examples[k] for k in order[:n_holdout]]
        grow = [examples[k] for k in order[n_holdout:]]
        tree = grow_tree(grow, cls.tags, params)
        grown_nodes = node_count(tree.root)
        if holdout:
            tree = prune_tree(tree, holdout)
        constraints = compile_tree(tree)
        for c in constraints:
            out.add(c)
        learned.append(
            LearnedTree(
                ambiguity_class=cls,
                tree=tree,
                n_grow=len(grow),
                n_holdout=n_holdout,
                nodes_grown=grown_nodes,
                nodes_pruned=node_count(tree.root),
                constraints=constraints,
            )
        )
    return out, learned


def build_constraint_sets(
    train: Sequence[TaggedSentence],
    lex: Lexicon,
    flags: Sequence[str],
    learner_params: LearnerParams | None = None,
    hand_written: ConstraintSet | None = None,
    seed: int = 0,
) -> dict[str, ConstraintSet]:
    """Build the requested constraint sources from the training corpus.

    B and T are n-gram constraints, C the tree-learned constraints, H the
    supplied hand-written set.
    """
    sets: dict[str, ConstraintSet] = {}
    if "B" in flags:
        sets["B"] = ngrams_to_constraints(collect_ngrams(train, 2))
    if "T" in flags:
        sets["T"] = ngrams_to_constraints(collect_ngrams(train, 3))
    if "C" in flags:
        sets["C"], _ = learn_tree_constraints(train, lex, learner_params, seed)
    if "H" in flags:
        if hand_written is None:
            raise ValueError("flag H requested but no hand-written constraints supplied")
        sets["H"] = hand_written
    return sets


@dataclass
class Tagger:
    """A ready-to-run tagging model over a fixed lexicon and tag set."""

    lex: Lexicon
    tagset: TagSet
    combination: ModelCombination
    constraint_sets: list[ConstraintSet]
    transitions: Mapping[str, Mapping[str, float]] | None = None
    start: Mapping[str, float] | None = None
    relax_params: RelaxParams | None = None

    def tag(self, words: Sequence[str]) -> tuple[list[str], Diagnostics | None]:
        if self.combination.flags == ("ML",):
            return tag_most_likely(words, self.lex, self.tagset), None
        if self.combination.flags == ("HMM",):
            return (
                tag_viterbi_bigram(words, self.lex, self.tagset, self.transitions, self.start),
                None,
            )
        return run(words, self.constraint_sets, self.lex, self.tagset, self.relax_params)


def make_tagger(
    combination: ModelCombination | str,
    train: Sequence[TaggedSentence],
    lex: Lexicon | None = None,
    tagset: TagSet | None = None,
    learner_params: LearnerParams | None = None,
    relax_params: RelaxParams | None = None,
    hand_written: ConstraintSet | None = None,
    prebuilt: Mapping[str, ConstraintSet] | None = None,
    seed: int = 0,
) -> Tagger:
    """Assemble a tagger for one model combination from training data.

    ``prebuilt`` short-circuits training for sources that are already
    available (for example learned constraints loaded from a file).
    """
    if isinstance(combination, str):
        combination = ModelCombination.parse(combination)
    lex = lex or build_lexicon(train)
    tagset = tagset or TagSet.from_sentences(train)
    transitions = start = None
    sets: list[ConstraintSet] = []
    if combination.flags == ("HMM",):
        table = collect_ngrams(train, 2)
        transitions = transition_probabilities(table, tagset)
        start = start_probabilities(table, tagset)
    elif combination.flags != ("ML",):
        available = dict(prebuilt or {})
        missing = [f for f in combination.flags if f not in available]
        available.update(
            build_constraint_sets(train, lex, missing, learner_params, hand_written, seed)
        )
        sets = combination.constraint_sets(available)
    return Tagger(lex, tagset, combination, sets, transitions, start, relax_params)


def tag_corpus(
    tagger: Tagger, sentences: Sequence[Sequence[str]]
) -> tuple[list[list[str]], list[Diagnostics]]:
    """Tag plain word sequences; returns predictions plus any diagnostics."""
    predictions = []
    diagnostics = []
    for words in sentences:
        tags, diag = tagger.tag(list(words))
        predictions.append(tags)
        if diag is not None:
            diagnostics.append(diag)
    return predictions, diagnostics
