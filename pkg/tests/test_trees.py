import numpy as np
import pytest

from oracles import distance_oracle
from relaxtag import (
    LearnerParams,
    TrainingExample,
    build_examples,
    build_lexicon,
    classification_error,
    extract_ambiguity_classes,
    grow_tree,
    merge_branches,
    parse_tagged_corpus,
    partition_distance,
    prune_tree,
    select_attribute,
    smoothed_distribution,
)
from relaxtag.trees import (
    OUT_OF_SENTENCE,
    attribute_names,
    format_tree,
    leaf_count,
    node_count,
    predict,
    tree_depth,
    weakest_link_sequence,
)

ATTRS = attribute_names()


def example(values, label):
    return TrainingExample(tuple(values), label)


def random_examples(rng, n, n_values, n_classes, signal=None):
    """Six random attributes; `signal` optionally ties right1 to the label."""
    out = []
    for _ in range(n):
        values = [f"v{rng.integers(0, n_values)}" for _ in ATTRS]
        label = f"c{rng.integers(0, n_classes)}"
        if signal is not None and rng.random() < signal:
            values[ATTRS.index("right1")] = f"s-{label}"
        out.append(example(values, label))
    return out


class TestSmoothing:
    def test_zero_data_uniform(self):
        assert smoothed_distribution([0, 0]).tolist() == [0.5, 0.5]

    def test_hand_computed(self):
        assert smoothed_distribution([2, 1], m=2, n=3).tolist() == [0.625, 0.375]

    def test_closed_form_and_sum(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            m = int(rng.integers(2, 9))
            counts = rng.integers(0, 40, size=m)
            n = int(counts.sum())
            dist = smoothed_distribution(counts, m, n)
            expected = (counts + 1.0 / m) / (n + 1.0)
            assert np.array_equal(dist, expected)
            assert abs(dist.sum() - 1.0) < 1e-12
            assert (dist > 0).all()


class TestClassificationError:
    def test_near_pure(self):
        assert classification_error([0.99, 0.01]) == pytest.approx(0.01)

    def test_uniform(self):
        m = 4
        assert classification_error([1 / m] * m) == pytest.approx(1 - 1 / m)

    def test_from_smoothing_example(self):
        assert classification_error(smoothed_distribution([2, 1])) == pytest.approx(0.375)


class TestPartitionDistance:
    def test_perfect_attribute(self):
        exs = [
            example(["a", "a", "a", "w", "x", "a"], "c1"),
            example(["a", "a", "a", "w", "y", "a"], "c2"),
            example(["b", "a", "a", "w", "x", "a"], "c1"),
            example(["b", "a", "a", "w", "y", "a"], "c2"),
        ]
        assert partition_distance(exs, "right1") == 0.0

    def test_independent_attribute(self):
        exs = [
            example(["v1", "a", "a", "w", "x", "a"], "c1"),
            example(["v2", "a", "a", "w", "x", "a"], "c1"),
            example(["v1", "a", "a", "w", "x", "a"], "c2"),
            example(["v2", "a", "a", "w", "x", "a"], "c2"),
        ]
        assert partition_distance(exs, "left3") == 1.0

    def test_degenerate_single_cell(self):
        exs = [example(["a"] * 6, "c1")] * 5
        assert partition_distance(exs, "left1") == 0.0

    def test_matches_bruteforce_on_random_instances(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            exs = random_examples(
                rng,
                int(rng.integers(2, 60)),
                int(rng.integers(1, 5)),
                int(rng.integers(1, 4)),
            )
            attr = ATTRS[int(rng.integers(0, 6))]
            got = partition_distance(exs, attr)
            want = distance_oracle(
                [ex.values[ATTRS.index(attr)] for ex in exs],
                [ex.label for ex in exs],
            )
            assert got == pytest.approx(want, abs=1e-9)
            assert 0.0 <= got <= 1.0


class TestSelectAttribute:
    def test_single_unused(self):
        exs = random_examples(np.random.default_rng(0), 20, 3, 2)
        assert select_attribute(exs, ["left2"]) == "left2"

    def test_perfect_attribute_wins(self):
        rng = np.random.default_rng(1)
        exs = random_examples(rng, 60, 4, 2, signal=1.0)
        assert select_attribute(exs, list(ATTRS)) == "right1"

    def test_tie_breaks_by_fixed_order(self):
        # left3 and left1 carry identical values, so their distances tie
        exs = [
            example(["x", "a", "x", "w", "q", "a"], "c1"),
            example(["y", "a", "y", "w", "q", "a"], "c2"),
            example(["x", "a", "x", "w", "q", "a"], "c1"),
            example(["y", "a", "y", "w", "q", "a"], "c2"),
        ]
        assert select_attribute(exs, list(ATTRS)) == "left3"


class TestMergeBranches:
    def test_identical_distributions_merge(self):
        groups = merge_branches(
            {"v1": np.array([30.0, 10.0]), "v2": np.array([30.0, 10.0])},
            parent_error=0.25,
        )
        assert groups == [frozenset({"v1", "v2"})]

    def test_extreme_difference_kept_separate(self):
        groups = merge_branches(
            {"v1": np.array([100.0, 0.0]), "v2": np.array([0.0, 100.0])},
            parent_error=0.5,
        )
        assert len(groups) == 2

    def test_single_subset_unchanged(self):
        counts = np.array([5.0, 2.0])
        err = classification_error(smoothed_distribution(counts))
        assert merge_branches({"v1": counts}, parent_error=err) == [frozenset({"v1"})]

    def test_residual_union(self):
        # v1 improves on the parent, v2 and v3 do not
        groups = merge_branches(
            {
                "v1": np.array([60.0, 0.0]),
                "v2": np.array([20.0, 30.0]),
                "v3": np.array([30.0, 18.0]),
            },
            parent_error=0.35,
        )
        assert frozenset({"v2", "v3"}) in groups

    def test_input_order_irrelevant(self):
        rng = np.random.default_rng(9)
        table = {f"v{k}": rng.integers(0, 25, size=3).astype(float) for k in range(6)}
        first = merge_branches(dict(sorted(table.items())), 0.5)
        second = merge_branches(dict(sorted(table.items(), reverse=True)), 0.5)
        assert first == second


class TestGrowTree:
    def test_pure_labels_single_leaf(self):
        exs = [example(["a", "b", "c", "w", "d", "e"], "c1") for _ in range(25)]
        tree = grow_tree(exs, ("c1", "c2"))
        assert tree.root.is_leaf
        assert tree.root.distribution.max() == pytest.approx((25 + 0.5) / 26)

    def test_perfect_split_on_right1(self):
        rng = np.random.default_rng(5)
        exs = random_examples(rng, 80, 3, 2, signal=1.0)
        # independent confirmation that right1 is the closest partition
        dists = {
            a: distance_oracle([e.values[ATTRS.index(a)] for e in exs], [e.label for e in exs])
            for a in ATTRS
        }
        assert min(dists, key=dists.get) == "right1"
        tree = grow_tree(exs, ("c0", "c1"))
        assert tree.root.attribute == "right1"
        assert all(child.is_leaf for _, child in tree.root.branches)

    def test_small_sample_is_leaf(self):
        exs = random_examples(np.random.default_rng(2), 9, 3, 2, signal=1.0)
        tree = grow_tree(exs, ("c0", "c1"), LearnerParams(min_examples=10))
        assert tree.root.is_leaf

    def test_empty_examples_error(self):
        with pytest.raises(ValueError):
            grow_tree([], ("c0", "c1"))

    def test_depth_bounded_and_no_attribute_reuse(self):
        rng = np.random.default_rng(3)
        exs = random_examples(rng, 400, 6, 3, signal=0.6)
        tree = grow_tree(exs, ("c0", "c1", "c2"), LearnerParams(min_examples=4))
        assert tree_depth(tree.root) <= len(ATTRS)

        def check_path(node, used):
            if node.is_leaf:
                return
            assert node.attribute not in used
            assert len(node.branches) >= 2
            for _, child in node.branches:
                check_path(child, used | {node.attribute})

        check_path(tree.root, set())

    def test_leaves_are_smoothed_and_positive(self):
        rng = np.random.default_rng(4)
        exs = random_examples(rng, 200, 4, 3, signal=0.7)
        tree = grow_tree(exs, ("c0", "c1", "c2"), LearnerParams(min_examples=5))

        def walk(node):
            assert abs(node.distribution.sum() - 1.0) < 1e-12
            assert (node.distribution > 0).all()
            for _, child in node.branches:
                walk(child)

        walk(tree.root)


class TestClassesAndExamples:
    CORPUS = "\n".join(
        ["x_VB once_IN d_DT", "x_NN as_RB d_DT", "x_VB as_IN d_DT", "y_JJ once_RB d_DT"]
    )

    def test_class_grouping(self):
        sents = parse_tagged_corpus(self.CORPUS)
        classes = extract_ambiguity_classes(sents, build_lexicon(sents))
        in_rb = next(c for c in classes if c.tags == ("IN", "RB"))
        assert in_rb.member_words == frozenset({"as", "once"})
        assert in_rb.example_count == 4

    def test_unambiguous_corpus_has_no_classes(self):
        sents = parse_tagged_corpus("a_DT b_NN")
        assert extract_ambiguity_classes(sents, build_lexicon(sents)) == []

    def test_ranked_by_example_count(self):
        corpus = "a_X a_Y a_X b_P b_Q\na_X a_Y b_P\n"
        sents = parse_tagged_corpus(corpus)
        classes = extract_ambiguity_classes(sents, build_lexicon(sents))
        assert [c.tags for c in classes] == [("X", "Y"), ("P", "Q")]

    def test_window_extraction(self):
        sents = parse_tagged_corpus("q_VB w_DT e_NN as_IN r_DT t_JJ")
        lex = build_lexicon(parse_tagged_corpus("as_IN as_RB"))
        cls = extract_ambiguity_classes(sents + parse_tagged_corpus("as_IN as_RB"), lex)[0]
        exs = build_examples(cls, sents)
        assert exs == [example(("VB", "DT", "NN", "as", "DT", "JJ"), "IN")]

    def test_window_extraction_second_listing(self):
        sents = parse_tagged_corpus("q_NN w_IN e_NN once_RB r_VBN t_TO")
        lex = build_lexicon(parse_tagged_corpus("once_IN once_RB"))
        cls = extract_ambiguity_classes(parse_tagged_corpus("once_IN once_RB"), lex)[0]
        exs = build_examples(cls, sents)
        assert exs == [example(("NN", "IN", "NN", "once", "VBN", "TO"), "RB")]

    def test_sentence_start_out_markers(self):
        sents = parse_tagged_corpus("as_RB q_VBN w_TO")
        lex = build_lexicon(sents + parse_tagged_corpus("as_IN"))
        cls = [c for c in extract_ambiguity_classes(sents, lex) if "as" in c.member_words]
        exs = build_examples(cls[0], sents)
        assert exs[0].values[:3] == (OUT_OF_SENTENCE,) * 3
        assert exs[0].label == "RB"

    def test_label_outside_class_skipped(self):
        # after filtering, an occurrence may carry a removed tag
        sents = parse_tagged_corpus("as_JJ x_DT")
        lex = build_lexicon(parse_tagged_corpus("as_IN as_RB"))
        cls = extract_ambiguity_classes(parse_tagged_corpus("as_IN as_RB"), lex)[0]
        assert build_examples(cls, sents) == []


class TestPruning:
    def _noise_examples(self, rng, n=150):
        return random_examples(rng, n, 8, 2)

    def test_single_leaf_unchanged(self):
        exs = [example(["a"] * 6, "c1")] * 30
        tree = grow_tree(exs, ("c1", "c2"))
        pruned = prune_tree(tree, exs[:5])
        assert pruned.root.is_leaf

    def test_useful_tree_kept(self):
        rng = np.random.default_rng(6)
        exs = random_examples(rng, 200, 3, 2, signal=1.0)
        tree = grow_tree(exs[:150], ("c0", "c1"))
        pruned = prune_tree(tree, exs[150:])
        assert not pruned.root.is_leaf  # the split reduces holdout error

    def test_pure_noise_prunes_to_root_leaf(self):
        rng = np.random.default_rng(20)
        grow = self._noise_examples(rng, 200)
        holdout = self._noise_examples(rng, 60)
        tree = grow_tree(grow, ("c0", "c1"), LearnerParams(min_examples=2, purity_threshold=0.999))
        assert node_count(tree.root) > 1  # the unpruned tree did overfit
        pruned = prune_tree(tree, holdout)
        assert pruned.root.is_leaf

    def test_choice_matches_sequence_enumeration(self):
        rng = np.random.default_rng(21)
        grow = random_examples(rng, 300, 5, 2, signal=0.55)
        holdout = random_examples(rng, 90, 5, 2, signal=0.55)
        tree = grow_tree(grow, ("c0", "c1"), LearnerParams(min_examples=3))
        pruned = prune_tree(tree, holdout)
        # independent scoring of every member of the nested sequence
        from relaxtag.trees import DecisionTree

        scores = []
        for member in weakest_link_sequence(tree.root):
            cand = DecisionTree(tree.class_tags, tree.window, member)
            scores.append(sum(predict(cand, ex) != ex.label for ex in holdout))
        best = min(scores)
        chosen = sum(predict(pruned, ex) != ex.label for ex in holdout)
        assert chosen == best
        # ties resolve toward the smaller tree
        smallest_best = min(
            (node_count(m) for m, s in zip(weakest_link_sequence(tree.root), scores) if s == best)
        )
        assert node_count(pruned.root) == smallest_best

    def test_monotonicity_properties(self):
        rng = np.random.default_rng(22)
        for _ in range(10):
            grow = random_examples(rng, 250, 6, 2, signal=0.5)
            holdout = random_examples(rng, 80, 6, 2, signal=0.5)
            tree = grow_tree(grow, ("c0", "c1"), LearnerParams(min_examples=3))
            pruned = prune_tree(tree, holdout)
            assert node_count(pruned.root) <= node_count(tree.root)
            before = sum(predict(tree, ex) != ex.label for ex in holdout)
            after = sum(predict(pruned, ex) != ex.label for ex in holdout)
            assert after <= before

    def test_empty_holdout_warns_and_returns_tree(self):
        rng = np.random.default_rng(23)
        tree = grow_tree(random_examples(rng, 100, 3, 2, signal=1.0), ("c0", "c1"))
        with pytest.warns(UserWarning):
            pruned = prune_tree(tree, [])
        assert pruned is tree


class TestTreeFormat:
    def test_renders_groups_and_leaves(self):
        rng = np.random.default_rng(8)
        exs = random_examples(rng, 80, 3, 2, signal=1.0)
        tree = grow_tree(exs, ("c0", "c1"))
        text = format_tree(tree)
        assert text.startswith("(right1")
        assert "c0:" in text and "; " in text
        assert leaf_count(tree.root) == text.count("[")
