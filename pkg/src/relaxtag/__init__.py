"""relaxtag: hybrid part-of-speech tagging.

Learns weighted context constraints from an annotated corpus with
statistical decision trees, combines them with n-gram and hand-written
constraints, and disambiguates text with a relaxation-labelling engine.
"""

from .constraints import (
    Constraint,
    ConstraintParseError,
    ConstraintSet,
    ContextItem,
    compile_tree,
    instantiate,
    parse_constraints,
    serialize_constraints,
)
from .corpus import (
    CorpusStats,
    InvalidCorrectionError,
    Lexicon,
    MalformedTokenError,
    TaggedSentence,
    TagSet,
    UnknownTagError,
    build_lexicon,
    corpus_stats,
    filter_lexicon,
    lexical_distribution,
    parse_tagged_corpus,
    serialize_tagged_corpus,
    split_corpus,
)
from .evaluation import (
    EvalReport,
    ModelCombination,
    evaluate,
    tag_most_likely,
    tag_viterbi_bigram,
)
from .models import Tagger, build_constraint_sets, learn_tree_constraints, make_tagger
from .ngrams import (
    NgramTable,
    collect_ngrams,
    ngrams_to_constraints,
    start_probabilities,
    transition_probabilities,
)
from .relaxation import (
    Diagnostics,
    RelaxParams,
    WeightedLabelling,
    init_weights,
    normalize_support,
    raw_support,
    run,
    update_step,
)
from .synth import BOS, SyntheticSpec, generate_synthetic_corpus
from .trees import (
    OUT_OF_SENTENCE,
    AmbiguityClass,
    DecisionTree,
    LearnerParams,
    TrainingExample,
    TreeNode,
    build_examples,
    classification_error,
    extract_ambiguity_classes,
    grow_tree,
    merge_branches,
    partition_distance,
    prune_tree,
    select_attribute,
    smoothed_distribution,
)

__version__ = "0.1.0"
