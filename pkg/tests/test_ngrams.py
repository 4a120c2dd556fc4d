import math

import numpy as np
import pytest

from relaxtag import (
    TagSet,
    collect_ngrams,
    ngrams_to_constraints,
    start_probabilities,
    transition_probabilities,
)
from relaxtag.ngrams import parse_ngram_table, serialize_ngram_table


def _sentences(tag_rows):
    return [[(f"w{t}", t) for t in row] for row in tag_rows]


class TestCollect:
    def test_bigrams(self):
        table = collect_ngrams(_sentences([["DT", "NN", "VB"]]), 2)
        assert table.counts == {("DT", "NN"): 1, ("NN", "VB"): 1}

    def test_trigrams(self):
        table = collect_ngrams(_sentences([["DT", "NN", "VB"]]), 3)
        assert table.counts == {("DT", "NN", "VB"): 1}

    def test_linearity(self):
        rows = [["DT", "NN", "VB"]] * 2
        table = collect_ngrams(_sentences(rows), 2)
        assert table.counts == {("DT", "NN"): 2, ("NN", "VB"): 2}

    def test_no_cross_sentence_ngrams(self):
        table = collect_ngrams(_sentences([["DT"], ["NN"]]), 2)
        assert table.counts == {}
        assert table.unigrams == {"DT": 1, "NN": 1}

    def test_count_identity(self):
        rng = np.random.default_rng(1)
        rows = [
            [str(t) for t in rng.integers(0, 5, size=rng.integers(3, 9))]
            for _ in range(40)
        ]
        for order in (2, 3):
            table = collect_ngrams(_sentences(rows), order)
            expected = sum(len(r) - (order - 1) for r in rows)
            assert sum(table.counts.values()) == expected

    def test_bad_order(self):
        with pytest.raises(ValueError):
            collect_ngrams(_sentences([["A"]]), 4)


class TestConstraints:
    def test_pmi_of_locked_pair(self):
        # (A, B) always co-occur: p(A) = p(B) = 0.5, p(A,B) = 0.5
        table = collect_ngrams(_sentences([["A", "B"]] * 8), 2)
        cset = ngrams_to_constraints(table)
        assert len(cset) == 2
        for c in cset:
            assert c.compatibility == pytest.approx(1.0)

    def test_independent_tags_zero(self):
        # joint equal to the product of marginals: p(A,B) = 2/8 = (4/8)(4/8)
        from relaxtag import NgramTable

        table = NgramTable(2, {("A", "B"): 2}, {"A": 4, "B": 4}, 8)
        for c in ngrams_to_constraints(table):
            assert c.compatibility == 0.0

    def test_anchor_structure(self):
        table = collect_ngrams(_sentences([["A", "B", "C"]]), 3)
        cset = ngrams_to_constraints(table)
        assert len(cset) == 3
        by_target = {c.target_tag: c for c in cset}
        a = by_target["A"]
        assert [it.offset for it in a.right] == [1, 2]
        b = by_target["B"]
        assert [it.offset for it in b.left] == [-1]
        assert [it.offset for it in b.right] == [1]
        c = by_target["C"]
        assert [it.offset for it in c.left] == [-2, -1]

    def test_count_is_distinct_ngrams_times_order(self):
        rng = np.random.default_rng(2)
        rows = [
            [str(t) for t in rng.integers(0, 4, size=6)] for _ in range(30)
        ]
        for order in (2, 3):
            table = collect_ngrams(_sentences(rows), order)
            cset = ngrams_to_constraints(table)
            assert len(cset) == len(table.counts) * order

    def test_all_finite(self):
        rng = np.random.default_rng(3)
        rows = [[str(t) for t in rng.integers(0, 6, size=8)] for _ in range(50)]
        for c in ngrams_to_constraints(collect_ngrams(_sentences(rows), 3)):
            assert math.isfinite(c.compatibility)


class TestTransitions:
    def test_add_one_example(self):
        sents = _sentences([["A", "B"], ["A", "B"], ["A", "B"], ["A", "C"]])
        table = collect_ngrams(sents, 2)
        assert table.counts == {("A", "B"): 3, ("A", "C"): 1}
        trans = transition_probabilities(table, TagSet(["A", "B", "C"]))
        assert trans["A"]["B"] == pytest.approx(4 / 7)
        assert trans["A"]["C"] == pytest.approx(2 / 7)
        assert trans["A"]["A"] == pytest.approx(1 / 7)

    def test_unseen_history_uniform(self):
        table = collect_ngrams(_sentences([["A", "B"]]), 2)
        trans = transition_probabilities(table, TagSet(["A", "B", "C"]))
        assert trans["C"] == {"A": 1 / 3, "B": 1 / 3, "C": 1 / 3}

    def test_uniform_counts_give_uniform_rows(self):
        rows = [["A", "A"], ["A", "B"], ["A", "C"]]
        trans = transition_probabilities(
            collect_ngrams(_sentences(rows), 2), TagSet(["A", "B", "C"])
        )
        assert trans["A"] == {"A": 1 / 3, "B": 1 / 3, "C": 1 / 3}

    def test_rows_normalized(self):
        rng = np.random.default_rng(4)
        rows = [[str(t) for t in rng.integers(0, 7, size=10)] for _ in range(25)]
        ts = TagSet([str(t) for t in range(7)])
        table = collect_ngrams(_sentences(rows), 2)
        for row in transition_probabilities(table, ts).values():
            assert abs(sum(row.values()) - 1.0) < 1e-12
        assert abs(sum(start_probabilities(table, ts).values()) - 1.0) < 1e-12


class TestTableFile:
    def test_round_trip(self):
        rng = np.random.default_rng(5)
        rows = [[str(t) for t in rng.integers(0, 5, size=7)] for _ in range(20)]
        table = collect_ngrams(_sentences(rows), 3)
        text = serialize_ngram_table(table)
        back = parse_ngram_table(text)
        assert back.counts == table.counts
        assert back.unigrams == table.unigrams
        assert back.total_tokens == table.total_tokens
        assert back.order == table.order

    def test_sorted_entries(self):
        table = collect_ngrams(_sentences([["B", "A"], ["A", "B"]]), 2)
        keys = [tuple(l.split()[:-1]) for l in serialize_ngram_table(table).splitlines()]
        assert keys == sorted(keys)
