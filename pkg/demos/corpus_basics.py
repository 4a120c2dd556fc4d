"""Corpus handling walk-through: parsing, lexicon, noise filtering, statistics.

Run: python3 demos/corpus_basics.py
"""

from relaxtag import (
    TagSet,
    build_lexicon,
    corpus_stats,
    filter_lexicon,
    lexical_distribution,
    parse_tagged_corpus,
)
from relaxtag.corpus import serialize_lexicon

RAW = """\
the_DT dog_NN barks_VB
the_DT the_JJ cat_NN sleeps_VB
failing_VBG to_TO voluntarily_RB submit_VB the_DT requested_VBN information_NN
once_RB upon_IN a_DT time_NN
once_IN the_DT dog_NN runs_VB
the_NNP dog_NN runs_VB
"""

print("== parsing ==")
sentences = parse_tagged_corpus(RAW)
print(f"{len(sentences)} sentences, {sum(len(s) for s in sentences)} tokens")
print("first sentence:", sentences[0])

print("\n== tag set (accumulated from the data) ==")
tagset = TagSet.from_sentences(sentences)
print(tagset.tags)
print("open classes (unknown-word candidates):", tagset.open_class)

print("\n== lexicon ==")
lex = build_lexicon(sentences)
print(serialize_lexicon(lex), end="")

print("\n== noise filtering ==")
# 'the' picked up JJ and NNP readings from annotation noise; a corrections
# entry keeps only the determiner reading, mirroring a manual lexicon check.
fixed = filter_lexicon(lex, [("the", {"DT"})])
print("before:", lex.entry("the"))
print("after: ", fixed.entry("the"))

print("\n== lexical probabilities ==")
for word in ("the", "dog", "neverseen"):
    print(f"p(tag | {word!r:12}) =", lexical_distribution(fixed, tagset, word))

print("\n== statistics ==")
stats = corpus_stats(sentences, fixed)
print(f"tokens: {stats.word_count}")
print(f"ambiguous fraction: {100 * stats.ambiguous_fraction:.1f}%")
print(f"tags/word over ambiguous words: {stats.ambiguity_ratio_ambiguous:.2f}")
print(f"tags/word overall: {stats.ambiguity_ratio_overall:.2f}")
