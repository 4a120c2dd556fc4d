"""Statistical decision trees over fixed-window context attributes.

One tree is learned per ambiguity class (the set of tags shared by a group
of words).  Growth is top-down with an information-distance attribute
selector and chi-square branch merging; pruning is weakest-link
cost-complexity scored on held-out examples.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.stats import chi2 as _chi2_dist

from .corpus import Lexicon, TaggedSentence

OUT_OF_SENTENCE = "<OUT>"

DEFAULT_WINDOW = (3, 2)


def attribute_names(window: tuple[int, int] = DEFAULT_WINDOW) -> tuple[str, ...]:
    """Attribute order: far-left tags, the word form itself, right tags.

    This order is also the tie-breaking order for attribute selection.
    """
    left, right = window
    if left < 1 or right < 1:
        raise ValueError("window needs at least one position on each side")
    return (
        tuple(f"left{k}" for k in range(left, 0, -1))
        + ("word",)
        + tuple(f"right{k}" for k in range(1, right + 1))
    )


def attribute_offset(name: str) -> int | None:
    """Signed context offset of an attribute, None for the word form."""
    if name == "word":
        return None
    if name.startswith("left"):
        return -int(name[4:])
    if name.startswith("right"):
        return int(name[5:])
    raise ValueError(f"unknown attribute {name!r}")


class TrainingExample(NamedTuple):
    values: tuple[str, ...]  # aligned with attribute_names(window)
    label: str


@dataclass(frozen=True)
class AmbiguityClass:
    """A group of words sharing the same set of possible tags."""

    tags: tuple[str, ...]
    member_words: frozenset[str]
    example_count: int


@dataclass
class LearnerParams:
    purity_threshold: float = 0.99
    min_examples: int = 10
    chi2_significance: float = 0.05
    holdout_fraction: float = 0.10
    window: tuple[int, int] = DEFAULT_WINDOW
    top_k_classes: int = 40

    def __post_init__(self):
        if not 0.5 < self.purity_threshold <= 1.0:
            raise ValueError("purity_threshold must be in (0.5, 1]")
        if self.min_examples < 1:
            raise ValueError("min_examples must be at least 1")
        if not 0.0 < self.holdout_fraction < 1.0:
            raise ValueError("holdout_fraction must be in (0, 1)")
        if not 0.0 < self.chi2_significance < 1.0:
            raise ValueError("chi2_significance must be in (0, 1)")


@dataclass
class TreeNode:
    """Internal node (attribute + value-group branches) or leaf.

    Every node keeps its raw label counts and the smoothed distribution over
    the class tags; internal nodes use them as a fallback when classifying a
    value unseen during growth, and pruning reads them directly.
    """

    counts: np.ndarray
    n: int
    distribution: np.ndarray
    attribute: str | None = None
    branches: tuple[tuple[frozenset[str], "TreeNode"], ...] = ()

    @property
    def is_leaf(self) -> bool:
        return self.attribute is None


@dataclass
class DecisionTree:
    class_tags: tuple[str, ...]
    window: tuple[int, int]
    root: TreeNode


def extract_ambiguity_classes(
    train: Sequence[TaggedSentence], lex: Lexicon
) -> list[AmbiguityClass]:
    """Group lexicon words by their tag set; rank classes by example count.

    Ties are broken lexicographically by tag set.
    """
    members: dict[tuple[str, ...], set[str]] = {}
    for word in lex.words():
        tags = lex.tags(word)
        if len(tags) >= 2:
            members.setdefault(tags, set()).add(word)
    occurrences = Counter(word for sent in train for word, _ in sent)
    classes = [
        AmbiguityClass(
            tags=tags,
            member_words=frozenset(words),
            example_count=sum(occurrences[w] for w in words),
        )
        for tags, words in members.items()
    ]
    classes.sort(key=lambda c: (-c.example_count, c.tags))
    return classes


def build_examples(
    cls: AmbiguityClass,
    train: Iterable[TaggedSentence],
    window: tuple[int, int] = DEFAULT_WINDOW,
) -> list[TrainingExample]:
    """One example per occurrence of a member word.

    Neighbour attributes take the correct corpus tags; positions beyond the
    sentence take the OUT_OF_SENTENCE value.  Occurrences whose corpus tag
    is outside the class tag set (possible after lexicon filtering) are
    skipped.
    """
    left, right = window
    tagset = set(cls.tags)
    examples: list[TrainingExample] = []
    for sent in train:
        tags = [t for _, t in sent]
        for i, (word, tag) in enumerate(sent):
            if word not in cls.member_words or tag not in tagset:
                continue
            values = tuple(
                tags[i + off] if 0 <= i + off < len(sent) else OUT_OF_SENTENCE
                for off in range(-left, 0)
            ) + (word,) + tuple(
                tags[i + off] if 0 <= i + off < len(sent) else OUT_OF_SENTENCE
                for off in range(1, right + 1)
            )
            examples.append(TrainingExample(values, tag))
    return examples


def smoothed_distribution(
    counts: Sequence[float] | np.ndarray,
    m: int | None = None,
    n: float | None = None,
) -> np.ndarray:
    """Tag probabilities (count + 1/m) / (n + 1); never zero, sums to 1.

    ``m`` defaults to the vector length and ``n`` to the count total, which
    is the usual case of a count vector covering all class tags.
    """
    counts = np.asarray(counts, dtype=float)
    if m is None:
        m = counts.size
    if n is None:
        n = float(counts.sum())
    elif abs(counts.sum() - n) > 1e-9:
        raise ValueError("counts do not sum to n")
    return (counts + 1.0 / m) / (n + 1.0)


def classification_error(distribution: Sequence[float] | np.ndarray) -> float:
    return 1.0 - float(np.max(np.asarray(distribution)))


def _partition_entropies(
    pairs: Iterable[tuple[str, str]],
) -> tuple[float, float, float]:
    """(I(A), I(B), I(A intersect B)) for the (value, label) pair stream."""
    cells = Counter(pairs)
    n = sum(cells.values())
    joint = np.fromiter(cells.values(), dtype=float) / n
    values = Counter()
    labels = Counter()
    for (v, l), c in cells.items():
        values[v] += c
        labels[l] += c
    pa = np.fromiter(values.values(), dtype=float) / n
    pb = np.fromiter(labels.values(), dtype=float) / n
    ent = lambda p: float(-(p * np.log2(p)).sum())
    return ent(pa), ent(pb), ent(joint)


def partition_distance(
    examples: Sequence[TrainingExample],
    attribute: str | int,
    window: tuple[int, int] = DEFAULT_WINDOW,
) -> float:
    """Normalized information distance, in [0, 1], between the partition
    induced by an attribute and the partition by correct label.

    0 means the two partitions coincide; 1 means the attribute is
    statistically independent of the label.  Empty cells contribute zero.
    """
    if not examples:
        raise ValueError("no examples")
    idx = attribute if isinstance(attribute, int) else attribute_names(window).index(attribute)
    ia, ib, joint = _partition_entropies(
        (ex.values[idx], ex.label) for ex in examples
    )
    if joint == 0.0:
        return 0.0
    d = 2.0 * joint - ia - ib
    return min(1.0, max(0.0, d / joint))


def select_attribute(
    examples: Sequence[TrainingExample],
    unused: Sequence[str],
    window: tuple[int, int] = DEFAULT_WINDOW,
) -> str:
    """The unused attribute with minimal partition distance.

    Ties go to the earlier attribute in :func:`attribute_names` order.
    """
    if not unused:
        raise ValueError("no unused attributes")
    names = attribute_names(window)
    best: tuple[float, str] | None = None
    for name in names:
        if name not in unused:
            continue
        d = partition_distance(examples, names.index(name))
        if best is None or d < best[0]:
            best = (d, name)
    assert best is not None
    return best[1]


@lru_cache(maxsize=None)
def _chi2_critical(df: int, alpha: float) -> float:
    return float(_chi2_dist.ppf(1.0 - alpha, df))


def _chi2_stat(row_a: np.ndarray, row_b: np.ndarray) -> float:
    obs = np.stack([row_a, row_b])
    total = obs.sum()
    expected = np.outer(obs.sum(axis=1), obs.sum(axis=0)) / total
    return float(((obs - expected) ** 2 / expected).sum())


def merge_branches(
    subsets: Mapping[str, np.ndarray],
    parent_error: float,
    alpha: float = 0.05,
) -> list[frozenset[str]]:
    """Join attribute-value subsets into groups.

    Stage 1 greedily merges the pair of groups with the smallest chi-square
    statistic on their smoothed-count contingency table, as long as
    homogeneity is not rejected at significance ``alpha`` (df = classes - 1).
    Stage 2 unions every group whose classification error does not improve
    on the parent into a single residual group.
    """
    if not subsets:
        raise ValueError("no subsets to merge")
    groups: list[tuple[list[str], np.ndarray]] = [
        ([v], np.asarray(subsets[v], dtype=float)) for v in sorted(subsets)
    ]
    m = groups[0][1].size
    critical = _chi2_critical(m - 1, alpha) if m > 1 else 0.0
    while len(groups) > 1:
        best: tuple[float, int, int] | None = None
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                stat = _chi2_stat(groups[i][1] + 1.0 / m, groups[j][1] + 1.0 / m)
                if best is None or stat < best[0]:
                    best = (stat, i, j)
        stat, i, j = best
        if stat >= critical:
            break
        merged = (sorted(groups[i][0] + groups[j][0]), groups[i][1] + groups[j][1])
        groups = [g for k, g in enumerate(groups) if k not in (i, j)]
        groups.append(merged)
        groups.sort(key=lambda g: g[0][0])
    kept: list[list[str]] = []
    residual: list[str] = []
    for values, counts in groups:
        err = classification_error(smoothed_distribution(counts))
        if err >= parent_error:
            residual.extend(values)
        else:
            kept.append(values)
    if residual:
        kept.append(sorted(residual))
    kept.sort(key=lambda vs: vs[0])
    return [frozenset(vs) for vs in kept]


def _count_vector(examples: Sequence[TrainingExample], class_tags: tuple[str, ...]) -> np.ndarray:
    counts = Counter(ex.label for ex in examples)
    return np.array([counts.get(t, 0) for t in class_tags], dtype=float)


def grow_tree(
    examples: Sequence[TrainingExample],
    class_tags: Sequence[str],
    params: LearnerParams | None = None,
) -> DecisionTree:
    """Top-down induction over the window attributes.

    A node becomes a leaf when the majority label reaches the purity
    threshold, when fewer than ``min_examples`` examples remain, or when no
    unused attribute splits the examples into more than one value group.
    Each attribute is used at most once per root-to-leaf path.
    """
    params = params or LearnerParams()
    if not examples:
        raise ValueError("cannot grow a tree from zero examples")
    class_tags = tuple(sorted(class_tags))
    tag_pos = {t: k for k, t in enumerate(class_tags)}
    for ex in examples:
        if ex.label not in tag_pos:
            raise ValueError(f"example label {ex.label!r} outside class tags {class_tags}")
    names = attribute_names(params.window)
    if len(examples[0].values) != len(names):
        raise ValueError("example width does not match the window")

    def build(exs: Sequence[TrainingExample], unused: tuple[str, ...]) -> TreeNode:
        counts = _count_vector(exs, class_tags)
        n = len(exs)
        node = TreeNode(counts=counts, n=n, distribution=smoothed_distribution(counts))
        if n < params.min_examples or counts.max() / n >= params.purity_threshold:
            return node
        parent_error = classification_error(node.distribution)
        remaining = list(unused)
        while remaining:
            attr = select_attribute(exs, remaining, params.window)
            idx = names.index(attr)
            by_value: dict[str, list[TrainingExample]] = {}
            for ex in exs:
                by_value.setdefault(ex.values[idx], []).append(ex)
            groups = merge_branches(
                {v: _count_vector(sub, class_tags) for v, sub in by_value.items()},
                parent_error,
                params.chi2_significance,
            )
            if len(groups) < 2:
                # The attribute carries no usable signal here; consume it and
                # try the next best one at this same node.
                remaining.remove(attr)
                continue
            next_unused = tuple(a for a in unused if a != attr)
            branches = []
            for group in groups:
                child_exs = [ex for v in sorted(group) for ex in by_value[v]]
                branches.append((group, build(child_exs, next_unused)))
            node.attribute = attr
            node.branches = tuple(branches)
            return node
        return node

    return DecisionTree(class_tags, params.window, build(examples, names))


def classify(tree: DecisionTree, example: TrainingExample) -> np.ndarray:
    """Distribution at the leaf reached by the example.

    Values unseen during growth stop at the current node and use its own
    distribution.
    """
    names = attribute_names(tree.window)
    node = tree.root
    while not node.is_leaf:
        value = example.values[names.index(node.attribute)]
        for group, child in node.branches:
            if value in group:
                node = child
                break
        else:
            return node.distribution
    return node.distribution


def predict(tree: DecisionTree, example: TrainingExample) -> str:
    return tree.class_tags[int(np.argmax(classify(tree, example)))]


def node_count(node: TreeNode) -> int:
    return 1 + sum(node_count(child) for _, child in node.branches)


def leaf_count(node: TreeNode) -> int:
    if node.is_leaf:
        return 1
    return sum(leaf_count(child) for _, child in node.branches)


def tree_depth(node: TreeNode) -> int:
    if node.is_leaf:
        return 0
    return 1 + max(tree_depth(child) for _, child in node.branches)


def _misclassified(node: TreeNode) -> float:
    """Training misclassification count of the subtree's current leaves."""
    if node.is_leaf:
        return node.n - node.counts.max()
    return sum(_misclassified(child) for _, child in node.branches)


def _collapse(node: TreeNode, path: tuple[int, ...]) -> TreeNode:
    """Copy of the tree with the node at `path` turned into a leaf."""
    if not path:
        return TreeNode(node.counts, node.n, node.distribution)
    branches = list(node.branches)
    group, child = branches[path[0]]
    branches[path[0]] = (group, _collapse(child, path[1:]))
    return TreeNode(node.counts, node.n, node.distribution, node.attribute, tuple(branches))


def _internal_paths(node: TreeNode, prefix: tuple[int, ...] = ()) -> list[tuple[int, ...]]:
    if node.is_leaf:
        return []
    paths = [prefix]
    for k, (_, child) in enumerate(node.branches):
        paths.extend(_internal_paths(child, prefix + (k,)))
    return paths


def _node_at(node: TreeNode, path: tuple[int, ...]) -> TreeNode:
    for k in path:
        node = node.branches[k][1]
    return node


def weakest_link_sequence(root: TreeNode) -> list[TreeNode]:
    """Nested subtree sequence from the full tree down to the root leaf.

    Each step collapses the internal node with the smallest per-leaf error
    benefit alpha = (R(node as leaf) - R(subtree)) / (leaves - 1), with R the
    training misclassification count.  Alpha ties collapse the first node in
    preorder.
    """
    sequence = [root]
    current = root
    while not current.is_leaf:
        best: tuple[float, tuple[int, ...]] | None = None
        for path in _internal_paths(current):
            node = _node_at(current, path)
            r_leaf = node.n - node.counts.max()
            alpha = (r_leaf - _misclassified(node)) / (leaf_count(node) - 1)
            if best is None or alpha < best[0]:
                best = (alpha, path)
        current = _collapse(current, best[1])
        sequence.append(current)
    return sequence


def prune_tree(
    tree: DecisionTree, holdout: Sequence[TrainingExample]
) -> DecisionTree:
    """Weakest-link cost-complexity pruning scored on held-out examples.

    Returns the member of the nested subtree sequence with the fewest
    holdout misclassifications; ties go to the smaller tree.  An empty
    holdout returns the tree unpruned, with a warning.
    """
    if not holdout:
        warnings.warn("empty holdout: returning the unpruned tree")
        return tree
    best_tree = None
    best_err = None
    for candidate in weakest_link_sequence(tree.root):
        cand_tree = DecisionTree(tree.class_tags, tree.window, candidate)
        err = sum(predict(cand_tree, ex) != ex.label for ex in holdout)
        if best_err is None or err <= best_err:
            best_tree, best_err = cand_tree, err
    return best_tree


def format_tree(tree: DecisionTree, precision: int = 4) -> str:
    """Diagnostic text rendering: ``(ATTR (values) child ...)`` and
    ``[tag:prob ...; n]`` leaves."""

    def fmt(node: TreeNode, indent: int) -> str:
        pad = "  " * indent
        if node.is_leaf:
            body = " ".join(
                f"{t}:{p:.{precision}f}" for t, p in zip(tree.class_tags, node.distribution)
            )
            return f"{pad}[{body}; {node.n}]"
        parts = [f"{pad}({node.attribute}"]
        for group, child in node.branches:
            parts.append(f"{pad}  ({' '.join(sorted(group))})")
            parts.append(fmt(child, indent + 1))
        parts.append(f"{pad})")
        return "\n".join(parts)

    return fmt(tree.root, 0) + "\n"
