"""Constraint learning walk-through: ambiguity classes, tree growth and
pruning, translation into weighted context constraints.

Run: python3 demos/learn_constraints.py
"""

from worlds import second_order_world

from relaxtag import (
    build_lexicon,
    extract_ambiguity_classes,
    generate_synthetic_corpus,
    serialize_constraints,
    split_corpus,
)
from relaxtag.models import learn_tree_constraints
from relaxtag.trees import format_tree, leaf_count, node_count

print("== training data ==")
corpus = generate_synthetic_corpus(second_order_world(), 20000, seed=0)
train, tune, test = split_corpus(corpus, (0.8, 0.1, 0.1), seed=0)
print(f"{sum(len(s) for s in train)} training tokens")
print("sample sentence:", " ".join(f"{w}_{t}" for w, t in train[0]))

print("\n== ambiguity classes, ranked by example count ==")
lex = build_lexicon(train)
for cls in extract_ambiguity_classes(train, lex):
    print(f"  {'-'.join(cls.tags):8} {cls.example_count:6d} examples, "
          f"{len(cls.member_words)} word forms")

print("\n== learning one tree per class ==")
cset, learned = learn_tree_constraints(train, lex, seed=0)
for entry in learned:
    name = "-".join(entry.ambiguity_class.tags)
    print(f"  class {name}: {entry.n_grow} growth + {entry.n_holdout} holdout examples; "
          f"{entry.nodes_grown} nodes grown, {entry.nodes_pruned} after pruning, "
          f"{leaf_count(entry.tree.root)} leaves")

print("\n== the pruned tree for the U-V conflict ==")
# The generator plants the answer two positions to the left (the trigger
# tag), so the tree tests the left2 attribute at the root.
tree = learned[0].tree
print(format_tree(tree), end="")

print("\n== compiled constraints ==")
# One constraint per leaf per class tag; the compatibility is how many bits
# the context shifts the tag away from its class baseline.
print(serialize_constraints(list(cset)), end="")
print(f"\ntotal: {len(cset)} constraints from {node_count(tree.root)} nodes")
